#include "wrdist/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "text_util.hpp"
#include "wrdist/errors.hpp"
#include "wrdist/geometry.hpp"

namespace wrd {

namespace fs = std::filesystem;

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DataError(fmt::format("pearson: length mismatch {} vs {}", xs.size(), ys.size()));
  }
  if (xs.size() < 2) throw DataError("pearson: need at least two points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DataError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DataError(fmt::format("spearman: length mismatch {} vs {}", xs.size(), ys.size()));
  }
  if (xs.size() < 2) throw DataError("spearman: need at least two points");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  auto all_tied = [](const std::vector<double>& r) {
    return std::all_of(r.begin(), r.end(), [&](double v) { return v == r.front(); });
  };
  if (all_tied(rx) || all_tied(ry)) throw DataError("spearman: all values tied");
  return pearson(rx, ry);
}

std::vector<Sentence> StsDataset::sentences() const {
  std::vector<Sentence> out;
  out.reserve(pairs.size() * 2);
  for (const auto& p : pairs) {
    out.push_back(p.first);
    out.push_back(p.second);
  }
  return out;
}

namespace {

Sentence tokenize(std::string_view field) {
  Sentence out;
  for (const auto tok : detail::split_fields(field, " ")) out.emplace_back(tok);
  return out;
}

}  // namespace

StsDataset parse_sts(const fs::path& path, StsFormat format) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open dataset {}", path.string()));
  StsDataset ds;
  ds.source = path.filename().string();
  const std::size_t min_fields = format == StsFormat::stsb ? 7 : 3;
  const std::size_t score_col = format == StsFormat::stsb ? 4 : 0;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::strip_cr(raw);
    if (line.empty()) continue;
    const auto fields = detail::split_exact(line, '\t');
    if (fields.size() < min_fields) {
      throw DataError(fmt::format("{}:{}: expected {} tab-separated fields, found {}", path.string(),
                                  line_no, min_fields, fields.size()));
    }
    const auto score = detail::parse_double(fields[score_col]);
    if (!score || !std::isfinite(*score)) {
      throw DataError(fmt::format("{}:{}: unparsable score '{}'", path.string(), line_no, fields[score_col]));
    }
    StsPair pair{tokenize(fields[score_col + 1]), tokenize(fields[score_col + 2]), *score};
    if (pair.first.empty() || pair.second.empty()) {
      throw DataError(fmt::format("{}:{}: empty sentence", path.string(), line_no));
    }
    ds.pairs.push_back(std::move(pair));
  }
  return ds;
}

WordSimDataset parse_wordsim(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open dataset {}", path.string()));
  WordSimDataset ds;
  ds.source = path.filename().string();
  std::string raw;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = detail::strip_cr(raw);
    if (line.empty()) continue;
    const auto fields = detail::split_exact(line, '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty()) {
      throw DataError(fmt::format("{}:{}: expected word1<TAB>word2<TAB>score", path.string(), line_no));
    }
    const auto score = detail::parse_double(fields[2]);
    const bool header = first_content && !score;
    first_content = false;
    if (header) continue;
    if (!score || !std::isfinite(*score)) {
      throw DataError(fmt::format("{}:{}: unparsable score '{}'", path.string(), line_no, fields[2]));
    }
    ds.pairs.push_back({std::string(fields[0]), std::string(fields[1]), *score});
  }
  return ds;
}

double Scorer::similarity(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
                          const ScoreOptions& opts) const {
  switch (kind) {
    case ScorerKind::wrd: return -wrd(s, t, table, opts).distance;
    case ScorerKind::wmd: return -wmd(s, t, table, opts).distance;
    case ScorerKind::wmd_sif:
      if (!unigram) throw ConfigError("wmd-sif requires a unigram frequency model");
      return -wmd_sif(s, t, table, *unigram, sif_a, opts).distance;
    case ScorerKind::additive_cosine: return additive_cosine(s, t, table, opts);
    case ScorerKind::additive_normalized_cosine: return additive_normalized_cosine(s, t, table, opts);
  }
  throw ConfigError("unknown scorer");
}

std::string Scorer::name() const {
  switch (kind) {
    case ScorerKind::wrd: return "wrd";
    case ScorerKind::wmd: return "wmd";
    case ScorerKind::wmd_sif: return "wmd-sif";
    case ScorerKind::additive_cosine: return "additive-cos";
    case ScorerKind::additive_normalized_cosine: return "additive-cos-norm";
  }
  return "?";
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

namespace {

void finish_report(EvaluationReport& report) {
  std::vector<double> predicted;
  std::vector<double> gold;
  for (const auto& p : report.per_pair) {
    if (p.skipped) continue;
    predicted.push_back(p.predicted);
    gold.push_back(p.gold);
  }
  if (predicted.size() < 2) {
    throw DataError(fmt::format("only {} scorable pairs; need at least 2", predicted.size()));
  }
  report.spearman_rho = spearman(predicted, gold);
  report.pearson_r = pearson(predicted, gold);
}

}  // namespace

EvaluationReport evaluate_sts(const StsDataset& dataset, const Scorer& scorer,
                              const EmbeddingTable& table, const ScoreOptions& opts,
                              unsigned threads) {
  if (dataset.pairs.empty()) throw DataError("dataset is empty");
  EvaluationReport report;
  report.per_pair.resize(dataset.pairs.size());
  parallel_for(dataset.pairs.size(), threads, [&](std::size_t i) {
    const auto& pair = dataset.pairs[i];
    PairScore& out = report.per_pair[i];
    out.index = i;
    out.gold = pair.gold;
    try {
      out.predicted = scorer.similarity(pair.first, pair.second, table, opts);
    } catch (const EmptyBagError&) {
      if (opts.oov_policy == OovPolicy::error) throw;
      out.skipped = true;
    } catch (const ZeroNormError&) {
      if (opts.oov_policy == OovPolicy::error) throw;
      out.skipped = true;
    }
  });
  report.skipped_count = static_cast<std::size_t>(std::count_if(
      report.per_pair.begin(), report.per_pair.end(), [](const PairScore& p) { return p.skipped; }));
  report.config = fmt::format("scorer={} dataset={} remove_stopwords={} lowercase={}", scorer.name(),
                              dataset.source, opts.remove_stopwords, opts.lowercase);
  finish_report(report);
  return report;
}

EvaluationReport evaluate_wordsim(const WordSimDataset& dataset, WordMeasure measure,
                                  const EmbeddingTable& table, bool lowercase) {
  if (dataset.pairs.empty()) throw DataError("dataset is empty");
  EvaluationReport report;
  for (std::size_t i = 0; i < dataset.pairs.size(); ++i) {
    const auto& pair = dataset.pairs[i];
    PairScore out{i, 0.0, pair.gold, false};
    const auto a = table.lookup(lowercase ? to_lower(pair.first) : pair.first);
    const auto b = table.lookup(lowercase ? to_lower(pair.second) : pair.second);
    if (!a || !b) {
      out.skipped = true;
    } else {
      try {
        switch (measure) {
          case WordMeasure::cos: out.predicted = cosine_similarity(*a, *b); break;
          case WordMeasure::l2: out.predicted = -euclidean_distance(*a, *b); break;
          case WordMeasure::dot: out.predicted = dot_product(*a, *b); break;
        }
      } catch (const ZeroNormError&) {
        out.skipped = true;
      }
    }
    if (out.skipped) ++report.skipped_count;
    report.per_pair.push_back(out);
  }
  static constexpr const char* kNames[] = {"cos", "l2", "dot"};
  report.config = fmt::format("measure={} dataset={} lowercase={}", kNames[static_cast<int>(measure)],
                              dataset.source, lowercase);
  finish_report(report);
  return report;
}

}  // namespace wrd
