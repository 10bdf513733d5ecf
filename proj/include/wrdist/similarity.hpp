#pragma once

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "wrdist/converter.hpp"
#include "wrdist/embeddings.hpp"
#include "wrdist/transport.hpp"

namespace wrd {

enum class OovPolicy { skip_token, error };

struct ScoreOptions {
  bool remove_stopwords = false;
  std::shared_ptr<const StopwordSet> stopwords;
  OovPolicy oov_policy = OovPolicy::skip_token;
  bool lowercase = false;
};

/// The vectors a sentence contributes after lowercasing, stopword removal and
/// OOV / zero-norm filtering. Repeated tokens stay separate points.
struct SentenceEmbeddingBag {
  std::vector<Eigen::VectorXd> vectors;
  std::vector<std::string> retained_tokens;
  std::size_t skipped = 0;
};

SentenceEmbeddingBag embed_sentence(const Sentence& sentence, const EmbeddingTable& table,
                                    const ScoreOptions& opts);

/// A transport-based distance together with the plan that realizes it.
struct Alignment {
  double distance = 0.0;
  TransportPlan plan;
  Eigen::MatrixXd cost;
  std::vector<std::string> source_tokens;
  std::vector<std::string> target_tokens;
};

/// Word rotator's distance: EMD between norm-weighted bags of directions
/// under the cosine ground metric. Lies in [0, 2].
Alignment wrd(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
              const ScoreOptions& opts);

/// Word mover's distance: EMD between uniform bags of vectors under the
/// Euclidean ground metric.
Alignment wmd(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
              const ScoreOptions& opts);

/// WMD with normalized SIF weights a / (P(w) + a) as masses.
Alignment wmd_sif(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
                  const UnigramModel& unigram, double a, const ScoreOptions& opts);

/// cos(sum w, sum w').
double additive_cosine(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
                       const ScoreOptions& opts);

/// cos(sum w/|w|, sum w'/|w'|).
double additive_normalized_cosine(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
                                  const ScoreOptions& opts);

/// Defaults that reproduce each scorer's strongest published setting: WMD
/// drops stopwords, WRD keeps them.
ScoreOptions wrd_default_options();
ScoreOptions wmd_default_options(std::shared_ptr<const StopwordSet> stopwords);

/// Writes `src_token<TAB>tgt_token<TAB>mass<TAB>cost` for every positive plan
/// entry, row-major.
void write_alignment_tsv(std::ostream& out, const Alignment& alignment, int precision = 6);

}  // namespace wrd
