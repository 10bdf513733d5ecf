#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "test_support.hpp"
#include "wrdist/errors.hpp"
#include "wrdist/geometry.hpp"
#include "wrdist/similarity.hpp"

namespace wrd {
namespace {

EmbeddingTable toy() {
  return testing::make_table(2, {{"a", {1, 0}},
                                 {"b", {0, 1}},
                                 {"c", {1, 1}},
                                 {"big", {2, 0}},
                                 {"one", {1, 0}},
                                 {"origin", {0, 0}},
                                 {"two", {2, 0}},
                                 {"p", {1, 0}},
                                 {"q", {3, 0}},
                                 {"r", {0, 1}},
                                 {"x", {2, 0}},
                                 {"y", {0, 3}},
                                 {"z", {5, 0}}});
}

TEST(EmbedSentence, Basics) {
  const auto t = toy();
  const ScoreOptions opts;
  EXPECT_EQ(embed_sentence({"a", "b"}, t, opts).vectors.size(), 2u);
  const auto dup = embed_sentence({"a", "a"}, t, opts);
  ASSERT_EQ(dup.vectors.size(), 2u);
  EXPECT_EQ(dup.vectors[0], dup.vectors[1]);
  EXPECT_THROW(embed_sentence({"zzz"}, t, opts), EmptyBagError);
}

TEST(EmbedSentence, FilteringAndPolicies) {
  const auto t = toy();
  ScoreOptions opts;
  const auto bag = embed_sentence({"a", "zzz", "origin", "b"}, t, opts);
  EXPECT_EQ(bag.retained_tokens, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(bag.skipped, 2u);

  opts.oov_policy = OovPolicy::error;
  EXPECT_THROW(embed_sentence({"a", "zzz"}, t, opts), DataError);
  EXPECT_THROW(embed_sentence({"a", "origin"}, t, opts), ZeroNormError);

  ScoreOptions lower;
  EXPECT_THROW(embed_sentence({"A"}, t, lower), EmptyBagError);
  lower.lowercase = true;
  EXPECT_EQ(embed_sentence({"A"}, t, lower).retained_tokens.front(), "a");

  ScoreOptions stop;
  stop.remove_stopwords = true;
  EXPECT_THROW(embed_sentence({"a"}, t, stop), ConfigError);
  stop.stopwords = std::make_shared<StopwordSet>(std::unordered_set<std::string>{"a"});
  const auto kept = embed_sentence({"a", "b"}, t, stop);
  EXPECT_EQ(kept.retained_tokens, (std::vector<std::string>{"b"}));
  EXPECT_EQ(kept.skipped, 1u);
}

TEST(Wrd, Examples) {
  const auto t = toy();
  const ScoreOptions opts;
  EXPECT_NEAR(wrd({"a", "c", "b"}, {"a", "c", "b"}, t, opts).distance, 0.0, 1e-12);
  EXPECT_EQ(wrd({"a"}, {"c"}, t, opts).distance, cosine_distance(*t.lookup("a"), *t.lookup("c")));
  // Masses 2/3 and 1/3 on (2,0) and (0,1), all moved to (1,0).
  EXPECT_NEAR(wrd({"big", "b"}, {"one"}, t, opts).distance, 1.0 / 3.0, 1e-12);
}

TEST(Wrd, AlignmentCarriesTokensAndMarginals) {
  const auto t = toy();
  const auto al = wrd({"big", "b"}, {"one", "c"}, t, ScoreOptions{});
  EXPECT_EQ(al.source_tokens, (std::vector<std::string>{"big", "b"}));
  EXPECT_EQ(al.target_tokens, (std::vector<std::string>{"one", "c"}));
  EXPECT_NEAR(al.plan.plan.row(0).sum(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(al.plan.plan.col(1).sum(), std::sqrt(2.0) / (1.0 + std::sqrt(2.0)), 1e-12);
  std::ostringstream tsv;
  write_alignment_tsv(tsv, al);
  EXPECT_NE(tsv.str().find("big\tone\t"), std::string::npos) << tsv.str();
}

TEST(Wmd, Examples) {
  const auto t = toy();
  const ScoreOptions opts;
  EXPECT_NEAR(wmd({"a", "b"}, {"a", "b"}, t, opts).distance, 0.0, 1e-12);
  EXPECT_EQ(wmd({"a"}, {"y"}, t, opts).distance, euclidean_distance(*t.lookup("a"), *t.lookup("y")));
  // Zero vectors are filtered out of bags, so the two-points-at-distance-1
  // case uses {(1,0),(3,0)} vs {(2,0)}.
  EXPECT_NEAR(wmd({"one", "q"}, {"two"}, t, opts).distance, 1.0, 1e-12);
}

TEST(WmdSif, Examples) {
  const auto t = toy();
  const ScoreOptions opts;
  const UnigramModel u({{"p", 1e-3}});
  // Weights 0.5 for p and 1.0 for q -> masses 1/3, 2/3.
  const double expected = std::sqrt(2.0) / 3.0 + 2.0 * std::sqrt(10.0) / 3.0;
  EXPECT_NEAR(wmd_sif({"p", "q"}, {"r"}, t, u, 1e-3, opts).distance, expected, 1e-12);
  EXPECT_NEAR(wmd_sif({"p", "q"}, {"p", "q"}, t, u, 1e-3, opts).distance, 0.0, 1e-12);

  const UnigramModel flat({{"a", 0.1}, {"b", 0.1}, {"c", 0.1}, {"x", 0.1}, {"y", 0.1}});
  EXPECT_NEAR(wmd_sif({"a", "b", "c"}, {"x", "y"}, t, flat, 1e-3, opts).distance,
              wmd({"a", "b", "c"}, {"x", "y"}, t, opts).distance, 1e-9);
}

TEST(Additive, Examples) {
  const auto t = toy();
  const ScoreOptions opts;
  EXPECT_NEAR(additive_cosine({"a", "c"}, {"a", "c"}, t, opts), 1.0, 1e-15);
  EXPECT_NEAR(additive_cosine({"a", "b"}, {"one"}, t, opts), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(additive_cosine({"a", "b", "c"}, {"y", "z"}, t, opts),
            additive_cosine({"c", "a", "b"}, {"y", "z"}, t, opts));
  EXPECT_NEAR(additive_normalized_cosine({"x", "y"}, {"z"}, t, opts), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(additive_normalized_cosine({"x", "y"}, {"x", "y"}, t, opts), 1.0, 1e-15);
  // Norm-weighted vs direction-only composition disagree here.
  EXPECT_GT(std::abs(additive_cosine({"x", "y"}, {"z"}, t, opts) -
                     additive_normalized_cosine({"x", "y"}, {"z"}, t, opts)),
            0.1);
}

TEST(Additive, ZeroSumSentence) {
  const auto t = testing::make_table(2, {{"u", {1, 0}}, {"v", {-1, 0}}, {"w", {0, 1}}});
  EXPECT_THROW(additive_cosine({"u", "v"}, {"w"}, t, ScoreOptions{}), ZeroNormError);
}

TEST(Additive, NormalizedIgnoresPerWordScale) {
  std::mt19937_64 rng(51);
  const auto t = testing::random_table(10, 4, rng);
  EmbeddingTable scaled(4);
  for (std::size_t i = 0; i < t.size(); ++i) scaled.add(t.token(i), (1.0 + i) * t.vector(i));
  const Sentence s{"w0", "w3", "w5"};
  const Sentence s2{"w1", "w2"};
  EXPECT_NEAR(additive_normalized_cosine(s, s2, t, {}), additive_normalized_cosine(s, s2, scaled, {}), 1e-12);
}

class RandomSentences : public ::testing::Test {
 protected:
  std::mt19937_64 rng{52};
  EmbeddingTable table = testing::random_table(50, 10, rng);
};

TEST_F(RandomSentences, WrdRangeSymmetryIdentity) {
  for (int k = 0; k < 300; ++k) {
    const auto s = testing::random_sentence(50, 1, 12, rng);
    const auto t = testing::random_sentence(50, 1, 12, rng);
    const double d = wrd(s, t, table, {}).distance;
    EXPECT_GE(d, 0.0);
    EXPECT_LE(d, 2.0);
    EXPECT_NEAR(d, wrd(t, s, table, {}).distance, 1e-9);
    EXPECT_NEAR(wrd(s, s, table, {}).distance, 0.0, 1e-9);
    EXPECT_NEAR(wmd(s, t, table, {}).distance, wmd(t, s, table, {}).distance, 1e-9);
    EXPECT_NEAR(wmd(s, s, table, {}).distance, 0.0, 1e-9);
  }
}

TEST_F(RandomSentences, WrdGlobalScaleInvariance) {
  EmbeddingTable scaled(10);
  for (std::size_t i = 0; i < table.size(); ++i) scaled.add(table.token(i), 3.7 * table.vector(i));
  for (int k = 0; k < 100; ++k) {
    const auto s = testing::random_sentence(50, 1, 10, rng);
    const auto t = testing::random_sentence(50, 1, 10, rng);
    EXPECT_NEAR(wrd(s, t, table, {}).distance, wrd(s, t, scaled, {}).distance, 1e-8);
  }
}

TEST_F(RandomSentences, UniformWmdMatchesAssignmentOracle) {
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 1 + k % 5;
    Sentence s;
    Sentence t;
    std::uniform_int_distribution<int> w(0, 49);
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back("w" + std::to_string(w(rng)));
      t.push_back("w" + std::to_string(w(rng)));
    }
    Eigen::MatrixXd c(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            (*table.lookup(s[i]) - *table.lookup(t[j])).norm();
    EXPECT_NEAR(wmd(s, t, table, {}).distance, oracle::assignment_by_permutation(c), 1e-6);
  }
}

TEST(DefaultOptions, StopwordPolicyPerScorer) {
  EXPECT_FALSE(wrd_default_options().remove_stopwords);
  const auto sw = std::make_shared<StopwordSet>(std::unordered_set<std::string>{"the"});
  const auto w = wmd_default_options(sw);
  EXPECT_TRUE(w.remove_stopwords);
  EXPECT_EQ(w.stopwords, sw);
}

}  // namespace
}  // namespace wrd
