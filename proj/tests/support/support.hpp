#pragma once

// Oracles, property checks and synthetic corpora shared by the unit and
// acceptance tests. The oracles are written from the definitions and do not
// call the code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include "wvenrich/bow.hpp"
#include "wvenrich/corpus.hpp"
#include "wvenrich/embedding.hpp"
#include "wvenrich/enrichment.hpp"

namespace wvenrich::testing {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::rational<BigInt>;

inline Document doc(std::string id, std::string text,
                    std::vector<std::string> labels) {
  return Document::make(std::move(id), std::move(text), std::move(labels));
}

// Exact Bayes decision for a Laplace-smoothed multinomial model. Returns
// every class attaining the maximum posterior, in label order.
inline std::vector<std::string> mnb_oracle(
    const std::vector<std::vector<std::uint32_t>>& train_counts,
    const std::vector<std::string>& train_labels,
    const std::vector<std::uint32_t>& test_counts) {
  const std::size_t dim = test_counts.size();
  std::map<std::string, std::size_t> docs;
  std::map<std::string, std::vector<std::uint64_t>> per_term;
  for (std::size_t d = 0; d < train_labels.size(); ++d) {
    ++docs[train_labels[d]];
    auto& v = per_term[train_labels[d]];
    v.resize(dim, 0);
    for (std::size_t t = 0; t < dim; ++t) v[t] += train_counts[d][t];
  }
  std::map<std::string, Rational> posterior;
  for (const auto& [label, nd] : docs) {
    const auto& counts = per_term[label];
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    Rational p(BigInt(nd), BigInt(train_labels.size()));
    for (std::size_t t = 0; t < dim; ++t) {
      Rational q(BigInt(counts[t] + 1), BigInt(total + dim));
      for (std::uint32_t r = 0; r < test_counts[t]; ++r) p *= q;
    }
    posterior.emplace(label, p);
  }
  Rational best(0);
  for (const auto& [_, p] : posterior) best = std::max(best, p);
  std::vector<std::string> winners;
  for (const auto& [label, p] : posterior) {
    if (p == best) winners.push_back(label);
  }
  return winners;
}

// Two-sided signed-rank p-value by enumerating all 2^n sign patterns of the
// (average-tied) ranks of the non-zero differences.
struct BruteWilcoxon {
  double w_plus = 0.0;
  double p_value = 1.0;
  std::size_t n = 0;
};

inline BruteWilcoxon wilcoxon_brute(const std::vector<double>& diffs) {
  std::vector<double> d;
  for (double x : diffs) {
    if (x != 0.0) d.push_back(x);
  }
  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(d[a]) < std::abs(d[b]);
  });
  // Doubled ranks keep everything integral.
  std::vector<long> rank2(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && std::abs(d[order[j]]) == std::abs(d[order[i]])) ++j;
    for (std::size_t t = i; t < j; ++t) rank2[order[t]] = static_cast<long>(i + j + 1);
    i = j;
  }
  long observed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0) observed += rank2[i];
  }
  std::uint64_t le = 0, ge = 0;
  const std::uint64_t patterns = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < patterns; ++m) {
    long s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (m >> i & 1) s += rank2[i];
    }
    if (s <= observed) ++le;
    if (s >= observed) ++ge;
  }
  BruteWilcoxon out;
  out.n = n;
  out.w_plus = static_cast<double>(observed) / 2.0;
  out.p_value = std::min(1.0, 2.0 * static_cast<double>(std::min(le, ge)) /
                                  static_cast<double>(patterns));
  return out;
}

// Sentences over two groups of ten tokens; every sentence draws all of its
// words from one group, so tokens within a group share contexts.
inline std::vector<std::vector<std::string>> two_group_corpus(
    std::size_t sentences, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::string>> out;
  for (std::size_t s = 0; s < sentences; ++s) {
    const char group = (s % 2 == 0) ? 'a' : 'b';
    std::vector<std::string> sentence;
    for (int w = 0; w < 10; ++w) {
      sentence.push_back(std::string(1, group) + std::to_string(rng() % 10));
    }
    out.push_back(std::move(sentence));
  }
  return out;
}

inline char group_of(const std::string& token) { return token.front(); }

// Random embedding over `tokens` with small integer-valued coordinates so
// that cosine ties occur.
inline EmbeddingModel random_model(const std::vector<std::string>& tokens,
                                   std::size_t dim, std::mt19937_64& rng) {
  EmbeddingModel m(dim);
  std::vector<float> v(dim);
  for (const auto& t : tokens) {
    do {
      for (auto& x : v) x = static_cast<float>(static_cast<int>(rng() % 5) - 2);
    } while (std::all_of(v.begin(), v.end(), [](float x) { return x == 0.0f; }));
    m.add(t, v);
  }
  return m;
}

// Labelled short documents where each class has a handful of frequent cue
// words and a pool of rare synonyms that share contexts with the cues in an
// unlabelled embedding corpus. Used to check that enrichment helps end to end.
struct SynonymCorpus {
  std::vector<Document> documents;
  std::vector<std::vector<std::string>> sentences;
};

inline SynonymCorpus synonym_corpus(std::size_t classes, std::size_t docs_per_class,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SynonymCorpus out;
  const std::vector<std::string> filler = {"the", "a", "of", "report", "said",
                                           "new", "on", "week"};
  auto word = [](char kind, std::size_t c, std::size_t i) {
    return std::string(1, kind) + std::to_string(c) + "x" + std::to_string(i);
  };
  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t d = 0; d < docs_per_class; ++d) {
      // One content word, usually a rare synonym, among filler words.
      std::string text = filler[rng() % filler.size()] + " ";
      text += (rng() % 5 == 0 ? word('c', c, rng() % 3) : word('s', c, rng() % 100)) + " ";
      text += filler[rng() % filler.size()] + " " + filler[rng() % filler.size()];
      out.documents.push_back(doc("d" + std::to_string(c) + "_" + std::to_string(d),
                                  text, {"class" + std::to_string(c)}));
    }
    for (std::size_t s = 0; s < 300; ++s) {
      std::vector<std::string> sentence;
      for (int w = 0; w < 8; ++w) {
        sentence.push_back(rng() % 2 ? word('c', c, rng() % 3)
                                     : word('s', c, rng() % 100));
      }
      out.sentences.push_back(std::move(sentence));
    }
  }
  return out;
}

// One random (tokens, vocabulary, model, n, k) instance. Returns an empty
// string when every enrichment invariant holds, otherwise a description.
inline std::string check_random_enrichment(std::mt19937_64& rng) {
  const std::size_t pool_size = 5 + rng() % 40;
  std::vector<std::string> pool;
  for (std::size_t i = 0; i < pool_size; ++i) pool.push_back("w" + std::to_string(i));
  std::vector<Document> docs;
  const std::size_t ndocs = 1 + rng() % 6;
  for (std::size_t d = 0; d < ndocs; ++d) {
    std::string text;
    const std::size_t len = 1 + rng() % 10;
    for (std::size_t j = 0; j < len; ++j) text += pool[rng() % (pool_size * 2 / 3 + 1)] + " ";
    docs.push_back(doc(std::to_string(d), text, {"c"}));
  }
  const Vocabulary vocab = build_vocabulary(docs);
  std::vector<std::string> in_model;
  for (const auto& t : pool) {
    if (rng() % 5) in_model.push_back(t);
  }
  if (in_model.empty()) in_model.push_back(pool.front());
  const EmbeddingModel model = random_model(in_model, 1 + rng() % 4, rng);

  std::vector<std::string> tokens;
  const std::size_t len = rng() % 12;
  for (std::size_t j = 0; j < len; ++j) tokens.push_back(pool[rng() % pool_size]);
  const std::uint64_t n = rng() % 5;
  const std::size_t k = rng() % 5;

  const SparseVector base = vectorize(tokens, vocab);
  const SparseVector rich = enrich(tokens, vocab, model, {n, k});
  if (k == 0 || n == 0) {
    return rich == base ? "" : "disabled enrichment differs from vectorize";
  }
  std::set<std::string> rare;
  for (const auto& t : tokens) {
    if (vocab.freq_of(t) < n) rare.insert(t);
  }
  for (const auto& e : rich.entries()) {
    if (vocab.train_freq(e.index) == 0) return "added index unseen in training";
  }
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const auto idx = static_cast<SparseVector::Index>(i);
    if (rich[idx] < base[idx]) return "enriched entry below baseline";
  }
  if (rich.mass() - base.mass() > k * rare.size()) return "added mass exceeds k * rare";
  return "";
}

// Largest projected-gradient violation of the hinge-loss dual, with the
// primal recomputed from the dual variables. The bias is the weight of a
// constant 1 feature.
inline double kkt_violation(const std::vector<SparseVector>& xs,
                            const std::vector<int>& ys,
                            const std::vector<double>& alphas, double C) {
  const std::size_t dim = xs.front().dimension();
  std::vector<double> w(dim, 0.0);
  double b = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (const auto& e : xs[i].entries()) w[e.index] += alphas[i] * ys[i] * e.count;
    b += alphas[i] * ys[i];
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double f = b;
    for (const auto& e : xs[i].entries()) f += w[e.index] * e.count;
    const double g = ys[i] * f - 1.0;
    double pg = g;
    if (alphas[i] <= 0.0) pg = std::min(g, 0.0);
    if (alphas[i] >= C) pg = std::max(g, 0.0);
    worst = std::max(worst, std::abs(pg));
    if (alphas[i] < 0.0 || alphas[i] > C) worst = std::max(worst, 1e9);
  }
  return worst;
}

}  // namespace wvenrich::testing
