#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "wrdist/errors.hpp"
#include "wrdist/evaluation.hpp"

namespace wrd {
namespace {

using testing::TempDir;

TEST(Pearson, Examples) {
  const std::vector<double> x{1, 2, 3};
  EXPECT_NEAR(pearson(x, std::vector<double>{2, 4, 6}), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, std::vector<double>{6, 4, 2}), -1.0, 1e-15);
  EXPECT_NEAR(pearson(x, std::vector<double>{1, 3, 2}), 0.5, 1e-15);
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), DataError);
  EXPECT_THROW(pearson(x, std::vector<double>{2, 2, 2}), DataError);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), DataError);
}

TEST(Spearman, Examples) {
  EXPECT_NEAR(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{10, 20, 25, 100}), 1.0, 1e-15);
  EXPECT_NEAR(spearman(std::vector<double>{1, 2, 3, 4}, std::vector<double>{1, 3, 2, 4}), 0.8, 1e-15);
  EXPECT_NEAR(spearman(std::vector<double>{1, 1, 2}, std::vector<double>{1, 2, 3}), std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_THROW(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), DataError);
  EXPECT_THROW(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), DataError);
}

TEST(AverageRanks, Ties) {
  EXPECT_EQ(average_ranks(std::vector<double>{3, 1, 3, 2}), (std::vector<double>{3.5, 1, 3.5, 2}));
}

TEST(Correlation, AffineAndMonotoneInvariance) {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> coef(0.1, 5.0);
  for (int k = 0; k < 200; ++k) {
    std::vector<double> x(20), y(20);
    for (auto& v : x) v = normal(rng);
    for (auto& v : y) v = normal(rng) + 0.5 * x[&v - y.data()];
    const double a = coef(rng);
    const double b = normal(rng);
    std::vector<double> pos(y.size()), neg(y.size()), mono(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      pos[i] = a * y[i] + b;
      neg[i] = -a * y[i] + b;
      mono[i] = std::exp(y[i]) + y[i] * y[i] * y[i];
    }
    EXPECT_NEAR(pearson(x, pos), pearson(x, y), 1e-12);
    EXPECT_NEAR(pearson(x, neg), -pearson(x, y), 1e-12);
    EXPECT_EQ(spearman(x, mono), spearman(x, y));
  }
}

TEST(ParseSts, SimpleFormat) {
  TempDir dir;
  const auto ds = parse_sts(dir.write("s.tsv", "4.5\ta b\tc d\n"), StsFormat::simple);
  ASSERT_EQ(ds.pairs.size(), 1u);
  EXPECT_EQ(ds.pairs[0].first, (Sentence{"a", "b"}));
  EXPECT_EQ(ds.pairs[0].second, (Sentence{"c", "d"}));
  EXPECT_EQ(ds.pairs[0].gold, 4.5);
}

TEST(ParseSts, StsbFormat) {
  TempDir dir;
  const auto ds = parse_sts(dir.write("s.tsv", "main-captions\tMSRvid\t2012test\t0001\t5.000\tA man .\tA man .\n"),
                            StsFormat::stsb);
  ASSERT_EQ(ds.pairs.size(), 1u);
  EXPECT_EQ(ds.pairs[0].gold, 5.0);
  EXPECT_EQ(ds.pairs[0].first, (Sentence{"A", "man", "."}));
}

TEST(ParseSts, ErrorsCarryLineNumbers) {
  TempDir dir;
  try {
    parse_sts(dir.write("s.tsv", "1\ta\tb\n2\t\tb\n"), StsFormat::simple);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(":2:"), std::string::npos) << e.what();
  }
  EXPECT_THROW(parse_sts(dir.write("t.tsv", "1\ta\n"), StsFormat::simple), DataError);
  EXPECT_THROW(parse_sts(dir.write("u.tsv", "x\ta\tb\n"), StsFormat::simple), DataError);
  EXPECT_THROW(parse_sts(dir.write("v.tsv", "g\tf\ty\t1\t2\ta\n"), StsFormat::stsb), DataError);
}

TEST(ParseWordsim, Basics) {
  TempDir dir;
  auto ds = parse_wordsim(dir.write("w.tsv", "cat\tdog\t7.8\n"));
  ASSERT_EQ(ds.pairs.size(), 1u);
  EXPECT_EQ(ds.pairs[0].first, "cat");
  EXPECT_EQ(ds.pairs[0].gold, 7.8);
  ds = parse_wordsim(dir.write("h.tsv", "w1\tw2\tscore\ncat\tdog\t7.8\n"));
  EXPECT_EQ(ds.pairs.size(), 1u);
  EXPECT_THROW(parse_wordsim(dir.write("bad.tsv", "cat\tdog\n")), DataError);
}

EmbeddingTable basis_table() {
  return testing::make_table(2, {{"a", {1, 0}}, {"b", {0, 1}}, {"c", {1, 1}}, {"huge", {100, 1}}});
}

// WRD values: 0, 1 - 1/sqrt(2), 1/2 (masses 1/2,1/2 onto a single point), 1.
StsDataset four_pairs() {
  StsDataset ds;
  ds.source = "fixture";
  ds.pairs = {{{"a"}, {"a"}, 5.0}, {{"a"}, {"c"}, 3.5}, {{"a", "b"}, {"a"}, 2.0}, {{"a"}, {"b"}, 0.0}};
  return ds;
}

double hand_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

TEST(EvaluateSts, FourPairFixture) {
  const auto report = evaluate_sts(four_pairs(), Scorer{ScorerKind::wrd}, basis_table(), {}, 1);
  const std::vector<double> predicted{0.0, -(1.0 - 1.0 / std::sqrt(2.0)), -0.5, -1.0};
  const std::vector<double> gold{5.0, 3.5, 2.0, 0.0};
  const double expected = hand_pearson(predicted, gold);
  EXPECT_NEAR(expected, 0.9934476145154454, 1e-12);  // scipy.stats.pearsonr on the same values
  EXPECT_NEAR(report.pearson_r, expected, 1e-9);
  EXPECT_NEAR(report.spearman_rho, 1.0, 1e-12);
  EXPECT_EQ(report.skipped_count, 0u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(report.per_pair[i].predicted, predicted[i], 1e-12);
}

TEST(EvaluateSts, PerfectLinearOrdering) {
  StsDataset ds;
  ds.pairs = {{{"a"}, {"a"}, 4.0}, {{"a"}, {"b"}, 2.0}, {{"a", "b"}, {"a", "b"}, 4.0}};
  // additive cosine: 1, 0, 1 -> linear in gold.
  const auto report = evaluate_sts(ds, Scorer{ScorerKind::additive_cosine}, basis_table(), {});
  EXPECT_NEAR(report.pearson_r, 1.0, 1e-12);
}

TEST(EvaluateSts, OovPairSkippedOrFatal) {
  auto ds = four_pairs();
  ds.pairs.push_back({{"zzz"}, {"a"}, 1.0});
  const auto report = evaluate_sts(ds, Scorer{ScorerKind::wrd}, basis_table(), {});
  EXPECT_EQ(report.skipped_count, 1u);
  EXPECT_EQ(report.scored_count(), 4u);
  EXPECT_TRUE(report.per_pair[4].skipped);
  EXPECT_NEAR(report.pearson_r, 0.9934476145154454, 1e-9);

  ScoreOptions strict;
  strict.oov_policy = OovPolicy::error;
  EXPECT_THROW(evaluate_sts(ds, Scorer{ScorerKind::wrd}, basis_table(), strict), DataError);
}

TEST(EvaluateSts, NeedsTwoScorablePairs) {
  StsDataset ds;
  ds.pairs = {{{"a"}, {"b"}, 1.0}, {{"zzz"}, {"a"}, 2.0}};
  EXPECT_THROW(evaluate_sts(ds, Scorer{ScorerKind::wrd}, basis_table(), {}), DataError);
  EXPECT_THROW(evaluate_sts(StsDataset{}, Scorer{ScorerKind::wrd}, basis_table(), {}), DataError);
}

TEST(EvaluateSts, OrientationAndDeterminism) {
  std::mt19937_64 rng(62);
  const auto table = testing::random_table(30, 6, rng);
  StsDataset ds;
  std::uniform_real_distribution<double> gold(0.0, 5.0);
  for (int i = 0; i < 40; ++i) {
    ds.pairs.push_back({testing::random_sentence(30, 1, 8, rng), testing::random_sentence(30, 1, 8, rng), gold(rng)});
  }
  const auto a = evaluate_sts(ds, Scorer{ScorerKind::wrd}, table, {}, 4);
  const auto b = evaluate_sts(ds, Scorer{ScorerKind::wrd}, table, {}, 1);
  std::vector<double> one_minus;
  std::vector<double> golds;
  for (std::size_t i = 0; i < a.per_pair.size(); ++i) {
    EXPECT_EQ(a.per_pair[i].predicted, b.per_pair[i].predicted);
    one_minus.push_back(1.0 + a.per_pair[i].predicted);
    golds.push_back(a.per_pair[i].gold);
  }
  EXPECT_NEAR(pearson(one_minus, golds), a.pearson_r, 1e-12);
}

TEST(EvaluateWordsim, IdenticalWordsAreAllTied) {
  WordSimDataset ds;
  ds.pairs = {{"a", "a", 1.0}, {"b", "b", 2.0}, {"a", "a", 3.0}};
  EXPECT_THROW(evaluate_wordsim(ds, WordMeasure::cos, basis_table()), DataError);
}

TEST(EvaluateWordsim, HandRankedFixture) {
  WordSimDataset ds;
  // cos: 1, 1/sqrt(2), 0 -> ranks 3,2,1; gold ranks 3,1,2.
  ds.pairs = {{"a", "a", 10.0}, {"a", "c", 1.0}, {"a", "b", 5.0}, {"a", "missing", 3.0}};
  const auto r = evaluate_wordsim(ds, WordMeasure::cos, basis_table());
  EXPECT_NEAR(r.spearman_rho, 0.5, 1e-12);
  EXPECT_EQ(r.skipped_count, 1u);
}

TEST(EvaluateWordsim, L2IsNegatedDistance) {
  WordSimDataset ds;
  ds.pairs = {{"a", "a", 10.0}, {"a", "c", 5.0}, {"a", "huge", 1.0}};
  const auto r = evaluate_wordsim(ds, WordMeasure::l2, basis_table());
  EXPECT_EQ(r.per_pair[0].predicted, 0.0);
  EXPECT_LT(r.per_pair[1].predicted, 0.0);
  EXPECT_NEAR(r.spearman_rho, 1.0, 1e-12);
  // dot rewards the long vector and flips the ordering.
  EXPECT_LT(evaluate_wordsim(ds, WordMeasure::dot, basis_table()).spearman_rho, 0.0);
}

}  // namespace
}  // namespace wrd
