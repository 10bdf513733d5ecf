#include "wrdist/embeddings.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>

#include <fmt/format.h>
#include <fmt/os.h>

#include "text_util.hpp"
#include "wrdist/errors.hpp"

namespace wrd {

namespace fs = std::filesystem;

EmbeddingTable::EmbeddingTable(std::size_t dimension, std::string name)
    : dimension_(dimension), name_(std::move(name)) {
  if (dimension == 0) throw DataError("embedding dimension must be positive");
}

bool EmbeddingTable::add(const std::string& token, const Eigen::Ref<const Eigen::VectorXd>& values) {
  if (token.empty() || token.find_first_of(" \t\r\n") != std::string::npos) {
    throw DataError(fmt::format("invalid token '{}'", token));
  }
  if (static_cast<std::size_t>(values.size()) != dimension_) {
    throw DimensionError(fmt::format("vector for '{}' has length {}, expected {}", token,
                                     values.size(), dimension_));
  }
  if (!values.allFinite()) throw DataError(fmt::format("non-finite value in vector for '{}'", token));
  if (index_.count(token) != 0) return false;
  index_.emplace(token, tokens_.size());
  tokens_.push_back(token);
  values_.insert(values_.end(), values.data(), values.data() + values.size());
  return true;
}

std::optional<WordVector> EmbeddingTable::lookup(const std::string& token) const {
  const auto idx = index_of(token);
  if (!idx) return std::nullopt;
  return WordVector(vector(*idx));
}

std::optional<std::size_t> EmbeddingTable::index_of(const std::string& token) const {
  const auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Eigen::MatrixXd EmbeddingTable::as_matrix() const {
  using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  return Eigen::Map<const RowMajor>(values_.data(), static_cast<Eigen::Index>(size()),
                                    static_cast<Eigen::Index>(dimension_));
}

EmbeddingTable load_embeddings(const fs::path& path, std::optional<std::size_t> expected_dim) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open embedding file {}", path.string()));

  std::optional<EmbeddingTable> table;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_content = false;
  Eigen::VectorXd buffer;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::strip_cr(raw);
    const auto fields = detail::split_fields(line, " \t");
    if (fields.empty()) continue;

    if (!seen_content) {
      seen_content = true;
      if (fields.size() == 2 && detail::parse_integer(fields[0]) && detail::parse_integer(fields[1])) {
        continue;  // `count dim` header
      }
    }
    if (fields.size() < 2) {
      throw DataError(fmt::format("{}:{}: expected a token followed by values", path.string(), line_no));
    }
    const std::size_t dim = fields.size() - 1;
    if (!table) {
      if (expected_dim && *expected_dim != dim) {
        throw DimensionError(fmt::format("{}:{}: dimension {} does not match expected {}",
                                         path.string(), line_no, dim, *expected_dim));
      }
      table.emplace(dim, path.stem().string());
      buffer.resize(static_cast<Eigen::Index>(dim));
    } else if (dim != table->dimension()) {
      throw DimensionError(fmt::format("{}:{}: dimension {} differs from {}", path.string(), line_no,
                                       dim, table->dimension()));
    }
    for (std::size_t k = 0; k < dim; ++k) {
      const auto v = detail::parse_double(fields[k + 1]);
      if (!v || !std::isfinite(*v)) {
        throw DataError(fmt::format("{}:{}: bad value '{}'", path.string(), line_no, fields[k + 1]));
      }
      buffer[static_cast<Eigen::Index>(k)] = *v;
    }
    if (!table->add(std::string(fields[0]), buffer)) table->note_duplicate();
  }
  if (!table) throw DataError(fmt::format("embedding file {} has no entries", path.string()));
  return std::move(*table);
}

void save_embeddings(const EmbeddingTable& table, const fs::path& path) {
  if (table.empty()) throw DataError("refusing to save an empty embedding table");
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("cannot write {}", path.string()));
  fmt::memory_buffer buf;
  for (std::size_t i = 0; i < table.size(); ++i) {
    buf.clear();
    fmt::format_to(std::back_inserter(buf), "{}", table.token(i));
    for (const double v : table.vector(i)) fmt::format_to(std::back_inserter(buf), " {:.17g}", v);
    buf.push_back('\n');
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  out.flush();
  if (!out) throw DataError(fmt::format("write failed for {}", path.string()));
}

UnigramModel::UnigramModel(std::unordered_map<std::string, double> probabilities)
    : probabilities_(std::move(probabilities)) {
  for (const auto& [token, p] : probabilities_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw DataError(fmt::format("probability for '{}' outside [0,1]: {}", token, p));
    }
  }
}

double UnigramModel::probability(const std::string& token) const {
  const auto it = probabilities_.find(token);
  return it == probabilities_.end() ? 0.0 : it->second;
}

double UnigramModel::total() const {
  return std::accumulate(probabilities_.begin(), probabilities_.end(), 0.0,
                         [](double acc, const auto& kv) { return acc + kv.second; });
}

UnigramModel load_unigram(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open unigram file {}", path.string()));
  std::unordered_map<std::string, double> values;
  std::string raw;
  std::size_t line_no = 0;
  double sum = 0.0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::strip_cr(raw);
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw DataError(fmt::format("{}:{}: expected token<TAB>value", path.string(), line_no));
    }
    const auto value = detail::parse_double(line.substr(tab + 1));
    if (!value || !std::isfinite(*value)) {
      throw DataError(fmt::format("{}:{}: unparsable value", path.string(), line_no));
    }
    if (*value < 0.0) throw DataError(fmt::format("{}:{}: negative value", path.string(), line_no));
    if (values.emplace(std::string(line.substr(0, tab)), *value).second) sum += *value;
  }
  if (sum > 1.0 + 1e-6) {
    for (auto& [token, v] : values) v /= sum;
  }
  return UnigramModel(std::move(values));
}

StopwordSet::StopwordSet(std::unordered_set<std::string> tokens) : tokens_(std::move(tokens)) {
  if (tokens_.count("") != 0) throw DataError("stopword list contains an empty token");
}

StopwordSet load_stopwords(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open stopword file {}", path.string()));
  std::unordered_set<std::string> tokens;
  std::string raw;
  while (std::getline(in, raw)) {
    const auto fields = detail::split_fields(detail::strip_cr(raw), " \t");
    if (fields.empty() || fields.front().front() == '#') continue;
    tokens.emplace(fields.front());
  }
  return StopwordSet(std::move(tokens));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  });
  return out;
}

}  // namespace wrd
