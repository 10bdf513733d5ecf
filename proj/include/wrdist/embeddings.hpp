#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

namespace wrd {

using WordVector = Eigen::VectorXd;

/// Token -> dense vector map with a fixed dimension.
///
/// Vectors are stored contiguously in insertion order, so `vector(i)` and
/// `token(i)` address the same entry. Tokens are matched exactly; any case
/// folding is the caller's job.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dimension, std::string name = {});

  /// Inserts a vector. Returns false (and leaves the table unchanged) if the
  /// token is already present. Throws on bad tokens, wrong length, or
  /// non-finite entries.
  bool add(const std::string& token, const Eigen::Ref<const Eigen::VectorXd>& values);

  std::optional<WordVector> lookup(const std::string& token) const;
  std::optional<std::size_t> index_of(const std::string& token) const;
  bool contains(const std::string& token) const { return index_.count(token) != 0; }

  Eigen::Map<const Eigen::VectorXd> vector(std::size_t i) const {
    return Eigen::Map<const Eigen::VectorXd>(values_.data() + i * dimension_,
                                             static_cast<Eigen::Index>(dimension_));
  }
  const std::string& token(std::size_t i) const { return tokens_[i]; }
  const std::vector<std::string>& tokens() const { return tokens_; }

  /// Rows are word vectors, in insertion order.
  Eigen::MatrixXd as_matrix() const;

  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }
  std::size_t dimension() const { return dimension_; }
  const std::string& name() const { return name_; }

  /// Number of duplicate lines ignored while loading.
  std::size_t duplicate_count() const { return duplicates_; }
  void note_duplicate() { ++duplicates_; }

 private:
  std::size_t dimension_;
  std::string name_;
  std::vector<std::string> tokens_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t duplicates_ = 0;
};

/// Reads a whitespace-separated text embedding file (`token v1 ... vd` per
/// line). A leading `count dim` header line is detected and skipped. The
/// first occurrence of a duplicated token wins.
EmbeddingTable load_embeddings(const std::filesystem::path& path,
                               std::optional<std::size_t> expected_dim = std::nullopt);

/// Writes the table in the format read by load_embeddings, at full double
/// precision, without a header.
void save_embeddings(const EmbeddingTable& table, const std::filesystem::path& path);

class UnigramModel {
 public:
  UnigramModel() = default;
  explicit UnigramModel(std::unordered_map<std::string, double> probabilities);

  /// Probability of `token`, 0 when unseen.
  double probability(const std::string& token) const;
  std::size_t size() const { return probabilities_.size(); }
  double total() const;

 private:
  std::unordered_map<std::string, double> probabilities_;
};

/// Reads `token<TAB>value` lines. If the values sum past 1 + 1e-6 they are
/// taken as counts and normalized.
UnigramModel load_unigram(const std::filesystem::path& path);

class StopwordSet {
 public:
  StopwordSet() = default;
  explicit StopwordSet(std::unordered_set<std::string> tokens);

  bool contains(const std::string& token) const { return tokens_.count(token) != 0; }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::unordered_set<std::string> tokens_;
};

/// One token per line; blank lines and `#` comments ignored.
StopwordSet load_stopwords(const std::filesystem::path& path);

/// ASCII lowercasing. Non-ASCII bytes pass through untouched.
std::string to_lower(std::string_view s);

}  // namespace wrd
