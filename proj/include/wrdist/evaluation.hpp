#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wrdist/embeddings.hpp"
#include "wrdist/similarity.hpp"

namespace wrd {

/// Sample Pearson correlation. Throws on length mismatch, fewer than two
/// points, or zero variance.
double pearson(std::span<const double> xs, std::span<const double> ys);

/// Pearson correlation of average (fractional) ranks.
double spearman(std::span<const double> xs, std::span<const double> ys);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

struct StsPair {
  Sentence first;
  Sentence second;
  double gold = 0.0;
};

struct StsDataset {
  std::vector<StsPair> pairs;
  std::string source;

  /// Every sentence in pair order: first, second, first, second, ...
  std::vector<Sentence> sentences() const;
};

enum class StsFormat { stsb, simple };

/// `stsb`: genre, file, year, id, score, sentence1, sentence2 (extra trailing
/// columns ignored). `simple`: score, sentence1, sentence2. Sentences are
/// pre-tokenized and split on spaces.
StsDataset parse_sts(const std::filesystem::path& path, StsFormat format);

struct WordSimPair {
  std::string first;
  std::string second;
  double gold = 0.0;
};

struct WordSimDataset {
  std::vector<WordSimPair> pairs;
  std::string source;
};

WordSimDataset parse_wordsim(const std::filesystem::path& path);

enum class ScorerKind { wrd, wmd, wmd_sif, additive_cosine, additive_normalized_cosine };

/// A sentence-pair scorer oriented so that larger means more similar:
/// transport scorers return the negated distance.
struct Scorer {
  ScorerKind kind = ScorerKind::wrd;
  std::shared_ptr<const UnigramModel> unigram;  // wmd_sif only
  double sif_a = 1e-3;

  double similarity(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
                    const ScoreOptions& opts) const;
  std::string name() const;
};

struct PairScore {
  std::size_t index = 0;
  double predicted = 0.0;
  double gold = 0.0;
  bool skipped = false;
};

struct EvaluationReport {
  std::vector<PairScore> per_pair;
  double pearson_r = 0.0;
  double spearman_rho = 0.0;
  std::size_t skipped_count = 0;
  std::string config;

  std::size_t scored_count() const { return per_pair.size() - skipped_count; }
};

/// Scores every pair (in parallel when `threads` != 1; 0 means all cores) and
/// correlates with gold. Under the skip_token policy, pairs with an empty bag
/// or a zero sentence vector are skipped and counted; otherwise they abort.
EvaluationReport evaluate_sts(const StsDataset& dataset, const Scorer& scorer,
                              const EmbeddingTable& table, const ScoreOptions& opts,
                              unsigned threads = 0);

enum class WordMeasure { cos, l2, dot };

/// Predictions are cosine, negated Euclidean distance, or dot product.
/// OOV pairs are skipped. Spearman is the headline number.
EvaluationReport evaluate_wordsim(const WordSimDataset& dataset, WordMeasure measure,
                                  const EmbeddingTable& table, bool lowercase = false);

/// Runs `fn(i)` for i in [0, count) on up to `threads` workers. The first
/// exception by index is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace wrd
