#include "wrdist/similarity.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "wrdist/errors.hpp"
#include "wrdist/geometry.hpp"

namespace wrd {

namespace {

Eigen::VectorXd uniform_masses(std::size_t n) {
  return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
}

Alignment solve(SentenceEmbeddingBag&& a, SentenceEmbeddingBag&& b, const Eigen::VectorXd& ma,
                const Eigen::VectorXd& mb, GroundMetric metric) {
  Alignment out;
  out.cost = cost_matrix(a.vectors, b.vectors, metric).values;
  out.plan = emd(validate_distribution(ma), validate_distribution(mb), out.cost);
  out.distance = out.plan.cost;
  out.source_tokens = std::move(a.retained_tokens);
  out.target_tokens = std::move(b.retained_tokens);
  return out;
}

Eigen::VectorXd sentence_sum(const SentenceEmbeddingBag& bag, bool normalize) {
  // Summed in token order so the result does not depend on word order.
  std::vector<std::size_t> order(bag.vectors.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return bag.retained_tokens[x] < bag.retained_tokens[y]; });
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(bag.vectors.front().size());
  for (const auto i : order) {
    const auto& v = bag.vectors[i];
    sum += normalize ? Eigen::VectorXd(v / v.norm()) : v;
  }
  if (!(sum.norm() > kZeroNormTolerance)) throw ZeroNormError("sentence vector sums to zero");
  return sum;
}

}  // namespace

SentenceEmbeddingBag embed_sentence(const Sentence& sentence, const EmbeddingTable& table,
                                    const ScoreOptions& opts) {
  if (opts.remove_stopwords && !opts.stopwords) {
    throw ConfigError("stopword removal requested without a stopword list");
  }
  SentenceEmbeddingBag bag;
  for (const auto& raw : sentence) {
    const std::string token = opts.lowercase ? to_lower(raw) : raw;
    if (opts.remove_stopwords && opts.stopwords->contains(token)) {
      ++bag.skipped;
      continue;
    }
    const auto idx = table.index_of(token);
    if (!idx) {
      if (opts.oov_policy == OovPolicy::error) {
        throw DataError(fmt::format("out-of-vocabulary token '{}'", token));
      }
      ++bag.skipped;
      continue;
    }
    const auto v = table.vector(*idx);
    if (!(v.norm() > kZeroNormTolerance)) {
      if (opts.oov_policy == OovPolicy::error) {
        throw ZeroNormError(fmt::format("token '{}' has a zero vector", token));
      }
      ++bag.skipped;
      continue;
    }
    bag.vectors.emplace_back(v);
    bag.retained_tokens.push_back(token);
  }
  if (bag.vectors.empty()) {
    throw EmptyBagError(fmt::format("no usable tokens in sentence of length {}", sentence.size()));
  }
  return bag;
}

Alignment wrd(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
              const ScoreOptions& opts) {
  auto a = embed_sentence(s, table, opts);
  auto b = embed_sentence(t, table, opts);
  auto norms = [](const SentenceEmbeddingBag& bag) {
    Eigen::VectorXd m(static_cast<Eigen::Index>(bag.vectors.size()));
    for (std::size_t i = 0; i < bag.vectors.size(); ++i) m[static_cast<Eigen::Index>(i)] = bag.vectors[i].norm();
    return m;
  };
  const Eigen::VectorXd ma = norms(a);
  const Eigen::VectorXd mb = norms(b);
  auto out = solve(std::move(a), std::move(b), ma, mb, GroundMetric::cosine);
  out.distance = std::clamp(out.distance, 0.0, 2.0);
  return out;
}

Alignment wmd(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
              const ScoreOptions& opts) {
  auto a = embed_sentence(s, table, opts);
  auto b = embed_sentence(t, table, opts);
  const auto ma = uniform_masses(a.vectors.size());
  const auto mb = uniform_masses(b.vectors.size());
  return solve(std::move(a), std::move(b), ma, mb, GroundMetric::euclidean);
}

Alignment wmd_sif(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
                  const UnigramModel& unigram, double a, const ScoreOptions& opts) {
  if (!(a > 0.0)) throw ConfigError("SIF parameter a must be positive");
  auto bs = embed_sentence(s, table, opts);
  auto bt = embed_sentence(t, table, opts);
  auto weights = [&](const SentenceEmbeddingBag& bag) {
    Eigen::VectorXd m(static_cast<Eigen::Index>(bag.retained_tokens.size()));
    for (std::size_t i = 0; i < bag.retained_tokens.size(); ++i) {
      m[static_cast<Eigen::Index>(i)] = sif_weight(unigram, bag.retained_tokens[i], a);
    }
    return m;
  };
  const Eigen::VectorXd ms = weights(bs);
  const Eigen::VectorXd mt = weights(bt);
  return solve(std::move(bs), std::move(bt), ms, mt, GroundMetric::euclidean);
}

double additive_cosine(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
                       const ScoreOptions& opts) {
  return cosine_similarity(sentence_sum(embed_sentence(s, table, opts), false),
                           sentence_sum(embed_sentence(t, table, opts), false));
}

double additive_normalized_cosine(const Sentence& s, const Sentence& t, const EmbeddingTable& table,
                                  const ScoreOptions& opts) {
  return cosine_similarity(sentence_sum(embed_sentence(s, table, opts), true),
                           sentence_sum(embed_sentence(t, table, opts), true));
}

ScoreOptions wrd_default_options() { return ScoreOptions{}; }

ScoreOptions wmd_default_options(std::shared_ptr<const StopwordSet> stopwords) {
  ScoreOptions opts;
  opts.remove_stopwords = true;
  opts.stopwords = std::move(stopwords);
  return opts;
}

void write_alignment_tsv(std::ostream& out, const Alignment& alignment, int precision) {
  const auto& plan = alignment.plan.plan;
  for (Eigen::Index i = 0; i < plan.rows(); ++i) {
    for (Eigen::Index j = 0; j < plan.cols(); ++j) {
      if (!(plan(i, j) > 0.0)) continue;
      fmt::print(out, "{}\t{}\t{:.{}f}\t{:.{}f}\n", alignment.source_tokens[static_cast<std::size_t>(i)],
                 alignment.target_tokens[static_cast<std::size_t>(j)], plan(i, j), precision,
                 alignment.cost(i, j), precision);
    }
  }
}

}  // namespace wrd
