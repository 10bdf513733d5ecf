#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "wrdist/embeddings.hpp"

namespace wrd {

using Sentence = std::vector<std::string>;

/// Affine map v -> A (v - b).
struct Projection {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd offset;

  static Projection identity(std::size_t dim);
  Eigen::VectorXd apply(const Eigen::Ref<const Eigen::VectorXd>& v) const;
  std::size_t dimension() const { return static_cast<std::size_t>(matrix.cols()); }
};

/// Leading eigenvectors of a second-moment matrix, strongest first.
struct PrincipalDirections {
  std::vector<Eigen::VectorXd> directions;
  std::vector<double> eigenvalues;
};

/// Top-k eigenvectors of (1/N) sum r r^T over the rows of `rows`
/// (mean-subtracted first when `center`). Each direction is flipped so its
/// largest-magnitude coordinate is positive.
PrincipalDirections principal_directions(const Eigen::Ref<const Eigen::MatrixXd>& rows,
                                         std::size_t k, bool center);

/// All-but-the-top: b = vocabulary mean, A = I - sum u u^T over the top
/// `d_a` centered principal directions.
Projection fit_abtt(const EmbeddingTable& table, std::size_t d_a);

/// Conceptor negation: A = I - R (R + alpha^-2 I)^-1 with R the uncentered
/// vocabulary second moment, b = 0.
Projection fit_conceptor(const EmbeddingTable& table, double alpha);

/// Per-dimension z-scoring over the vocabulary (population deviation).
Projection fit_dimnorm(const EmbeddingTable& table);

/// a / (P(token) + a).
double sif_weight(const UnigramModel& unigram, const std::string& token, double a);

struct SifWeighting {
  std::shared_ptr<const UnigramModel> unigram;
  double a = 1e-3;

  double weight(const std::string& token) const { return sif_weight(*unigram, token, a); }
};

/// Common component removal. Builds s = sum alpha(w) f1(w) for each sentence
/// (alpha = 1 without weighting; OOV tokens ignored) and returns
/// A = I - sum v v^T over the top `d_r` uncentered principal directions,
/// b = 0.
Projection fit_ccr(const std::vector<Sentence>& sentences, const EmbeddingTable& table,
                   const Projection& f1, const std::optional<SifWeighting>& weighting,
                   std::size_t d_r);

/// Which converter stages are active. Tags are written as an optional
/// denoiser letter (a, c or n) followed by optional w and r, e.g. "awr".
struct PipelineSpec {
  enum class Denoise { none, abtt, conceptor, dimnorm };

  Denoise denoise = Denoise::none;
  bool weight = false;
  bool remove_common = false;

  static PipelineSpec parse(std::string_view tag);
  std::string tag() const;
  bool is_identity() const { return denoise == Denoise::none && !weight && !remove_common; }
};

struct ConverterHyperparams {
  std::size_t d_a = 3;
  double alpha_c = 2.0;
  double sif_a = 1e-3;
  std::size_t d_r = 5;
};

struct ConverterParams {
  std::optional<Projection> f1;
  std::optional<SifWeighting> weighting;
  std::optional<Projection> f3;
  std::string pipeline_tag = "none";
};

/// Fits every stage requested by `spec`. Weighting requires `unigram`;
/// common component removal requires at least one usable sentence.
ConverterParams fit_converter(const EmbeddingTable& table, const PipelineSpec& spec,
                              const ConverterHyperparams& hyper,
                              std::shared_ptr<const UnigramModel> unigram,
                              const std::vector<Sentence>& sentences);

/// Maps every vector through f3(alpha(w) * f1(w)), skipping absent stages.
EmbeddingTable convert(const EmbeddingTable& table, const ConverterParams& params);

}  // namespace wrd
