#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "support.hpp"
#include "wvenrich/embedding.hpp"
#include "wvenrich/error.hpp"

namespace wvenrich {
namespace {

EmbeddingModel from_text(const std::string& s) {
  std::istringstream in(s);
  return read_word2vec_text(in);
}

TEST(Word2vecText, ReadsHeaderAndRows) {
  const auto m = from_text("2 3\na 1 0 0\nb 0 1 0\n");
  EXPECT_EQ(m.size(), 2u);
  EXPECT_EQ(m.dimension(), 3u);
  EXPECT_TRUE(m.contains("b"));
  EXPECT_FLOAT_EQ(m.vector("b")[1], 1.0f);
  EXPECT_FALSE(m.training_params());
}

TEST(Word2vecText, RowCountMismatch) {
  EXPECT_THROW(from_text("2 3\na 1 0 0\n"), ParseError);
  EXPECT_THROW(from_text("1 3\na 1 0 0\nb 0 1 0\n"), ParseError);
}

TEST(Word2vecText, ComponentCountErrorNamesRow) {
  try {
    from_text("2 3\nb 1 0 0\na 1 0\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos) << e.what();
  }
  EXPECT_THROW(from_text("1 3\na 1 0 0 4\n"), ParseError);
  EXPECT_THROW(from_text("1 2\na 1 zz\n"), ParseError);
  EXPECT_THROW(from_text("x y\n"), ParseError);
  EXPECT_THROW(from_text(""), ParseError);
}

TEST(Word2vecText, RoundTripIsBitExact) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<float> u(-3.0f, 3.0f);
  EmbeddingModel m(7);
  for (int i = 0; i < 50; ++i) {
    std::vector<float> v(7);
    for (auto& x : v) x = u(rng);
    v[0] = (i == 3) ? 1e-30f : v[0];
    m.add("tok" + std::to_string(i), v);
  }
  std::ostringstream out;
  write_word2vec_text(m, out);
  const auto back = from_text(out.str());
  ASSERT_EQ(back.size(), m.size());
  for (std::size_t r = 0; r < m.size(); ++r) {
    EXPECT_EQ(back.token(r), m.token(r));
    for (std::size_t c = 0; c < 7; ++c) {
      EXPECT_EQ(back.vector(r)[c], m.vector(r)[c]);
    }
  }
}

TEST(EmbeddingModel, AddValidates) {
  EmbeddingModel m(2);
  const std::vector<float> v = {1, 2};
  const std::vector<float> w = {1, 2, 3};
  m.add("a", v);
  EXPECT_THROW(m.add("a", v), InvalidArgument);
  EXPECT_THROW(m.add("b", w), DimensionError);
  EXPECT_NEAR(m.norm(0), std::sqrt(5.0), 1e-12);
}

TEST(Cosine, Examples) {
  const std::vector<float> v = {1.5f, -2.0f, 0.25f};
  const std::vector<float> neg = {-1.5f, 2.0f, -0.25f};
  EXPECT_NEAR(cosine(v, v), 1.0, 1e-12);
  EXPECT_NEAR(cosine(v, neg), -1.0, 1e-12);
  const std::vector<float> e1 = {1, 0}, e2 = {0, 1};
  EXPECT_EQ(cosine(e1, e2), 0.0);
  const std::vector<float> zero = {0, 0};
  EXPECT_THROW(cosine(e1, zero), InvalidArgument);
  EXPECT_THROW(cosine(e1, v), DimensionError);
}

TEST(Cosine, SymmetricAndScaleInvariant) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  for (int i = 0; i < 300; ++i) {
    std::vector<float> a(5), b(5), scaled(5);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    const float alpha = 0.5f + static_cast<float>(rng() % 8);
    for (std::size_t j = 0; j < 5; ++j) scaled[j] = alpha * a[j];
    const double c = cosine(a, b);
    EXPECT_GE(c, -1.0);
    EXPECT_LE(c, 1.0);
    EXPECT_NEAR(c, cosine(b, a), 1e-12);
    EXPECT_NEAR(c, cosine(scaled, b), 1e-6);
  }
}

TEST(NearestNeighbors, ThreeTokenExample) {
  EmbeddingModel m(2);
  m.add("first", std::vector<float>{1.0f, 0.0f});
  m.add("second", std::vector<float>{0.9f, 0.1f});
  m.add("third", std::vector<float>{0.0f, 1.0f});
  const auto nn = nearest_neighbors(m, "first", 2);
  ASSERT_EQ(nn.size(), 2u);
  EXPECT_EQ(nn[0].token, "second");
  EXPECT_EQ(nn[1].token, "third");
  EXPECT_GT(nn[0].similarity, nn[1].similarity);
}

TEST(NearestNeighbors, EdgeCases) {
  EmbeddingModel m(2);
  m.add("a", std::vector<float>{1.0f, 0.0f});
  m.add("b", std::vector<float>{0.0f, 1.0f});
  EXPECT_TRUE(nearest_neighbors(m, "missing", 3).empty());
  EXPECT_EQ(nearest_neighbors(m, "a", 10).size(), 1u);
  EXPECT_THROW(nearest_neighbors(m, "a", 0), InvalidArgument);
  EXPECT_TRUE(nearest_neighbors(m, "a", 1, [](std::string_view) { return false; }).empty());
}

// Exhaustive pairwise ranking, computed independently in double precision.
// Integer-valued vectors of dimension 3 give distinct cosines at least 1e-4
// apart, so anything closer than 1e-9 is a tie.
std::vector<std::string> brute_ranking(const EmbeddingModel& m, const std::string& q,
                                       const TokenFilter& admit) {
  const auto qv = m.vector(q);
  std::vector<std::pair<double, std::string>> all;
  for (std::size_t r = 0; r < m.size(); ++r) {
    if (m.token(r) == q || (admit && !admit(m.token(r)))) continue;
    const auto v = m.vector(r);
    double dot = 0, nq = 0, nv = 0;
    for (std::size_t i = 0; i < m.dimension(); ++i) {
      dot += double(qv[i]) * v[i];
      nq += double(qv[i]) * qv[i];
      nv += double(v[i]) * v[i];
    }
    all.emplace_back(dot / std::sqrt(nq * nv), m.token(r));
  }
  std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
    if (std::abs(x.first - y.first) > 1e-9) return x.first > y.first;
    return x.second < y.second;
  });
  std::vector<std::string> out;
  for (auto& [_, t] : all) out.push_back(t);
  return out;
}

std::vector<std::string> tokens_of(const std::vector<Neighbor>& nn) {
  std::vector<std::string> out;
  for (const auto& n : nn) out.push_back(n.token);
  return out;
}

TEST(NearestNeighbors, MatchesBruteForceWithTies) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::string> tokens;
    const std::size_t n = 5 + rng() % 96;
    for (std::size_t i = 0; i < n; ++i) tokens.push_back("w" + std::to_string(rng() % 100000) + "_" + std::to_string(i));
    const auto m = testing::random_model(tokens, 3, rng);
    const NeighborCache cache(m, 8);
    TokenFilter odd = [](std::string_view t) { return t.back() % 2 == 1; };
    for (const auto& q : tokens) {
      const auto full = nearest_neighbors(m, q, n - 1);
      EXPECT_EQ(tokens_of(full), brute_ranking(m, q, {}));
      for (std::size_t i = 1; i < full.size(); ++i) {
        EXPECT_GE(full[i - 1].similarity, full[i].similarity - 1e-12);
      }
      const auto filtered = brute_ranking(m, q, odd);
      const auto got = tokens_of(nearest_neighbors(m, q, 3, odd));
      EXPECT_EQ(got, std::vector<std::string>(
                         filtered.begin(),
                         filtered.begin() + std::min<std::size_t>(3, filtered.size())));
      EXPECT_EQ(cache.query(q, 3, odd), nearest_neighbors(m, q, 3, odd));
      EXPECT_EQ(cache.query(q, 12), nearest_neighbors(m, q, 12));
    }
  }
}

TEST(Skipgram, DefaultsAndValidation) {
  const SkipgramParams p;
  EXPECT_EQ(p.dimension, 100u);
  EXPECT_EQ(p.window, 10u);
  EXPECT_EQ(p.min_count, 2u);
  EXPECT_EQ(p.epochs, 10u);
  SkipgramParams bad = p;
  bad.epochs = 0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
  bad = p;
  bad.initial_learning_rate = 0.0;
  EXPECT_THROW(bad.validate(), InvalidArgument);
}

TEST(Skipgram, MinCountFiltersAndEmptyVocabularyFails) {
  const std::vector<std::vector<std::string>> sentences = {
      {"a", "b", "a", "b", "once"}, {"b", "a"}};
  SkipgramParams p;
  p.dimension = 8;
  p.epochs = 2;
  const auto m = train_skipgram(sentences, p);
  EXPECT_TRUE(m.contains("a"));
  EXPECT_TRUE(m.contains("b"));
  EXPECT_FALSE(m.contains("once"));
  ASSERT_TRUE(m.training_params());
  EXPECT_EQ(m.training_params()->dimension, 8u);
  const std::vector<std::vector<std::string>> rare = {{"x", "y"}};
  EXPECT_THROW(train_skipgram(rare, p), InvalidArgument);
}

TEST(Skipgram, DeterministicPerSeed) {
  const auto corpus = testing::two_group_corpus(60, 3);
  SkipgramParams p;
  p.dimension = 16;
  p.epochs = 3;
  const auto a = train_skipgram(corpus, p);
  const auto b = train_skipgram(corpus, p);
  p.seed = 2;
  const auto c = train_skipgram(corpus, p);
  ASSERT_EQ(a.size(), b.size());
  bool differs = false;
  for (std::size_t r = 0; r < a.size(); ++r) {
    ASSERT_EQ(a.token(r), b.token(r));
    for (std::size_t i = 0; i < 16; ++i) {
      EXPECT_EQ(a.vector(r)[i], b.vector(r)[i]);
      differs = differs || a.vector(r)[i] != c.vector(a.token(r))[i];
    }
  }
  EXPECT_TRUE(differs);
}

TEST(Skipgram, SeparatesInterchangeableGroups) {
  const auto corpus = testing::two_group_corpus(200, 5);
  SkipgramParams p;
  p.dimension = 20;
  p.window = 5;
  p.epochs = 10;
  const auto m = train_skipgram(corpus, p);
  ASSERT_EQ(m.size(), 20u);
  std::size_t same = 0;
  for (const auto& t : m.tokens()) {
    const auto nn = nearest_neighbors(m, t, 1);
    ASSERT_EQ(nn.size(), 1u);
    if (testing::group_of(nn[0].token) == testing::group_of(t)) ++same;
  }
  EXPECT_GE(same, 18u);
}

TEST(Skipgram, MultiWorkerTrainsAllTokens) {
  const auto corpus = testing::two_group_corpus(100, 8);
  SkipgramParams p;
  p.dimension = 12;
  p.epochs = 2;
  p.workers = 3;
  const auto m = train_skipgram(corpus, p);
  EXPECT_EQ(m.size(), 20u);
  for (std::size_t r = 0; r < m.size(); ++r) {
    for (float x : m.vector(r)) EXPECT_TRUE(std::isfinite(x));
  }
}

}  // namespace
}  // namespace wvenrich
