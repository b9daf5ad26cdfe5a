// Acceptance checks. Prints one [PASS]/[FAIL] line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "support.hpp"
#include "wvenrich/classify.hpp"
#include "wvenrich/enrichment.hpp"
#include "wvenrich/harness.hpp"
#include "wvenrich/metrics.hpp"

namespace {

using namespace wvenrich;
using Clock = std::chrono::steady_clock;
using E = SparseVector::Entry;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

SparseVector sv(std::size_t dim, std::vector<E> e) {
  return SparseVector::from_entries(dim, std::move(e));
}

// 1. Enrichment identity, monotonicity and bounded addition.
Outcome enrichment_identity() {
  std::mt19937_64 rng(2024);
  const auto t0 = Clock::now();
  std::size_t failures = 0;
  std::string first;
  for (int i = 0; i < 1000; ++i) {
    const std::string why = testing::check_random_enrichment(rng);
    if (!why.empty() && failures++ == 0) first = why;
  }
  const double elapsed = seconds_since(t0);
  return {failures == 0 && elapsed < 1.0,
          "1000 instances, " + std::to_string(failures) + " violations" +
              (first.empty() ? "" : " (" + first + ")") + ", " +
              fmt("%.3f", elapsed) + " s (limit 1 s)"};
}

// 2. MNB against the exact rational oracle.
Outcome mnb_oracle() {
  std::size_t corpora = 0, vectors = 0, mismatches = 0;
  auto check = [&](const std::vector<std::vector<std::uint32_t>>& counts,
                   const std::vector<std::string>& labels, std::size_t dim) {
    std::vector<LabeledVector> data;
    for (std::size_t d = 0; d < counts.size(); ++d) {
      std::vector<E> e;
      for (std::size_t t = 0; t < dim; ++t) {
        e.push_back({static_cast<SparseVector::Index>(t), counts[d][t]});
      }
      data.push_back({sv(dim, e), labels[d]});
    }
    const MNBModel model = train_mnb(data);
    ++corpora;
    for (std::uint32_t mask = 0; mask < (1u << dim); ++mask) {
      std::vector<std::uint32_t> test(dim);
      std::vector<E> e;
      for (std::size_t t = 0; t < dim; ++t) {
        test[t] = mask >> t & 1;
        e.push_back({static_cast<SparseVector::Index>(t), test[t]});
      }
      const auto winners = testing::mnb_oracle(counts, labels, test);
      if (predict_mnb(model, sv(dim, e)).best() != winners.front()) ++mismatches;
      ++vectors;
    }
  };

  // Every corpus of up to three documents over three tokens with binary
  // counts and labels from {A, B}.
  constexpr std::size_t kDim = 3;
  for (std::size_t ndocs = 1; ndocs <= 3; ++ndocs) {
    const std::size_t doc_choices = 1u << kDim;
    std::size_t total = 1;
    for (std::size_t d = 0; d < ndocs; ++d) total *= doc_choices * 2;
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      std::vector<std::vector<std::uint32_t>> counts(ndocs, std::vector<std::uint32_t>(kDim));
      std::vector<std::string> labels(ndocs);
      for (std::size_t d = 0; d < ndocs; ++d) {
        const std::size_t bits = c % doc_choices;
        c /= doc_choices;
        labels[d] = (c % 2) ? "B" : "A";
        c /= 2;
        for (std::size_t t = 0; t < kDim; ++t) counts[d][t] = bits >> t & 1;
      }
      check(counts, labels, kDim);
    }
  }
  // Random corpora up to five documents over up to five tokens, counts 0..3,
  // up to three classes.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 3000; ++trial) {
    const std::size_t dim = 1 + rng() % 5;
    const std::size_t ndocs = 1 + rng() % 5;
    std::vector<std::vector<std::uint32_t>> counts(ndocs, std::vector<std::uint32_t>(dim));
    std::vector<std::string> labels(ndocs);
    for (std::size_t d = 0; d < ndocs; ++d) {
      for (auto& x : counts[d]) x = static_cast<std::uint32_t>(rng() % 4);
      labels[d] = std::string(1, char('A' + rng() % 3));
    }
    check(counts, labels, dim);
  }
  return {mismatches == 0, std::to_string(corpora) + " corpora, " +
                               std::to_string(vectors) + " test vectors, " +
                               std::to_string(mismatches) + " mismatches"};
}

// 3. Metric identities.
Outcome metric_identities() {
  std::mt19937_64 rng(3);
  std::size_t mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<std::vector<std::string>> gold;
    std::vector<std::string> pred;
    const std::size_t n = 1 + rng() % 200;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back({"c" + std::to_string(rng() % 7)});
      pred.push_back("c" + std::to_string(rng() % 7));
      if (gold.back()[0] == pred.back()) ++correct;
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(n);
    if (micro_recall(tally(gold, pred)) != accuracy) ++mismatches;
  }
  const double er = error_reduction(0.178, 0.212);
  const bool er_ok = std::abs(er - 4.14) <= 0.005;
  return {mismatches == 0 && er_ok,
          "micro recall vs accuracy: " + std::to_string(mismatches) +
              " mismatches in 1000 tallies; error_reduction(0.178, 0.212) = " +
              fmt("%.4f", er) + "% (target 4.14 +/- 0.005)"};
}

// 4. Wilcoxon exact value and exact/normal agreement.
Outcome wilcoxon() {
  const std::vector<double> five = {1, 2, 3, 4, 5};
  const auto r = wilcoxon_signed_rank(five, WilcoxonMethod::Exact);
  const bool exact_ok = std::abs(r.p_value - 0.0625) < 1e-12;
  std::mt19937_64 rng(20);
  std::normal_distribution<double> effect(0.0, 0.6);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    std::normal_distribution<double> dist(effect(rng), 1.0);
    std::vector<double> d(20);
    for (auto& x : d) x = dist(rng);
    const double pe = wilcoxon_signed_rank(d, WilcoxonMethod::Exact).p_value;
    const double pn = wilcoxon_signed_rank(d, WilcoxonMethod::Normal).p_value;
    worst = std::max(worst, std::abs(pe - pn));
  }
  return {exact_ok && worst <= 0.02,
          "p([1..5]) = " + fmt("%.6g", r.p_value) +
              " (target 0.0625); max |exact - normal| over 100 samples of n=20 = " +
              fmt("%.4f", worst) + " (limit 0.02)"};
}

// 5. SVM contract.
Outcome svm_contract() {
  std::mt19937_64 rng(9);
  auto separable = [&](std::size_t classes, std::size_t per_class) {
    const std::size_t dim = 3 * classes + 5;
    std::vector<LabeledVector> out;
    for (std::size_t c = 0; c < classes; ++c) {
      for (std::size_t i = 0; i < per_class; ++i) {
        std::vector<E> e = {{static_cast<SparseVector::Index>(3 * c + rng() % 3),
                             static_cast<SparseVector::Count>(1 + rng() % 3)}};
        for (int j = 0; j < 2; ++j) {
          e.push_back({static_cast<SparseVector::Index>(3 * classes + rng() % 5), 1});
        }
        out.push_back({sv(dim, e), "class" + std::to_string(c)});
      }
    }
    return out;
  };

  const auto two = separable(2, 100);
  const SVMModel binary = train_svm_ovo(two);
  std::size_t correct = 0;
  for (const auto& ex : two) {
    if (predict_svm(binary, ex.vector).best() == ex.label) ++correct;
  }
  const double recall = static_cast<double>(correct) / static_cast<double>(two.size());

  bool counts_ok = true;
  std::string counts;
  for (std::size_t m : {2u, 3u, 10u}) {
    const auto model = train_svm_ovo(separable(m, 10));
    counts += std::to_string(m) + "->" + std::to_string(model.pairs().size()) + " ";
    counts_ok = counts_ok && model.pairs().size() == m * (m - 1) / 2;
  }

  // KKT on every pairwise subproblem of a noisy three-class corpus, checked
  // from the returned multipliers.
  double worst = 0.0;
  bool converged = true;
  std::vector<LabeledVector> noisy;
  for (int i = 0; i < 150; ++i) {
    std::vector<E> e;
    for (int j = 0; j < 5; ++j) {
      e.push_back({static_cast<SparseVector::Index>(rng() % 25),
                   static_cast<SparseVector::Count>(1 + rng() % 2)});
    }
    noisy.push_back({sv(25, e), "k" + std::to_string(rng() % 3)});
  }
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      std::vector<SparseVector> xs;
      std::vector<int> ys;
      for (const auto& ex : noisy) {
        if (ex.label == "k" + std::to_string(a)) {
          xs.push_back(ex.vector);
          ys.push_back(1);
        } else if (ex.label == "k" + std::to_string(b)) {
          xs.push_back(ex.vector);
          ys.push_back(-1);
        }
      }
      std::vector<const SparseVector*> ptrs;
      for (const auto& x : xs) ptrs.push_back(&x);
      const auto sol = train_binary_svm(ptrs, ys, 25, SvmOptions{});
      converged = converged && sol.converged;
      worst = std::max(worst, testing::kkt_violation(xs, ys, sol.alphas, 1.0));
    }
  }
  return {recall == 1.0 && counts_ok && converged && worst <= 1e-3 + 1e-9,
          "separable training recall " + fmt("%.3f", recall) + "; pair counts " + counts +
              "; max KKT violation " + fmt("%.2e", worst) + " (limit 1e-3)"};
}

// 6. Skip-gram sanity on two interchangeable token groups.
Outcome skipgram_sanity() {
  const auto corpus = testing::two_group_corpus(200, 6);
  SkipgramParams p;  // the documented defaults
  const auto t0 = Clock::now();
  const auto a = train_skipgram(corpus, p);
  const auto b = train_skipgram(corpus, p);
  const double elapsed = seconds_since(t0) / 2.0;
  std::size_t same = 0;
  for (const auto& t : a.tokens()) {
    const auto nn = nearest_neighbors(a, t, 1);
    if (!nn.empty() && testing::group_of(nn[0].token) == testing::group_of(t)) ++same;
  }
  bool identical = a.size() == b.size();
  for (std::size_t r = 0; identical && r < a.size(); ++r) {
    identical = a.token(r) == b.token(r) &&
                std::equal(a.vector(r).begin(), a.vector(r).end(), b.vector(r).begin());
  }
  const double share = static_cast<double>(same) / static_cast<double>(a.size());
  return {a.size() == 20 && share >= 0.9 && identical && elapsed < 60.0,
          std::to_string(same) + "/" + std::to_string(a.size()) +
              " tokens with a same-group top-1 neighbor (need >= 90%); same-seed runs " +
              (identical ? "identical" : "DIFFER") + "; " + fmt("%.2f", elapsed) +
              " s per run (limit 60 s)"};
}

// 8. Top-3 dominance on every cell for both classifiers.
Outcome top3_dominance() {
  const auto corpus = testing::synonym_corpus(6, 30, 8);
  SkipgramParams p;
  p.dimension = 32;
  p.window = 4;
  p.epochs = 5;
  p.min_count = 1;
  const auto model = train_skipgram(corpus.sentences, p);
  std::size_t cells = 0, violations = 0;
  double top1 = 0, top3 = 0;
  for (auto kind : {ClassifierKind::Mnb, ClassifierKind::Svm}) {
    ExperimentConfig cfg;
    cfg.dataset = "synthetic";
    cfg.classifier = kind;
    cfg.top_k = 1;
    const auto r1 = run_cv(corpus.documents, model, cfg);
    cfg.top_k = 3;
    const auto r3 = run_cv(corpus.documents, model, cfg);
    for (std::size_t i = 0; i < r1.cells.size(); ++i) {
      ++cells;
      if (r3.cells[i].baseline_micro < r1.cells[i].baseline_micro ||
          r3.cells[i].enriched_micro < r1.cells[i].enriched_micro) {
        ++violations;
      }
    }
    if (kind == ClassifierKind::Mnb) {
      top1 = r1.baseline.micro;
      top3 = r3.baseline.micro;
    }
  }
  return {violations == 0 && cells == 200,
          std::to_string(cells) + " cells (MNB and SVM, 10x10), " +
              std::to_string(violations) + " with top-3 below top-1; MNB baseline " +
              fmt("%.3f", top1) + " -> " + fmt("%.3f", top3) + " at top-3"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "enrichment identity", enrichment_identity},
      {2, "MNB oracle equivalence", mnb_oracle},
      {3, "metric identities", metric_identities},
      {4, "Wilcoxon correctness", wilcoxon},
      {5, "SVM contract", svm_contract},
      {6, "skip-gram sanity", skipgram_sanity},
      {8, "top-3 dominance", top3_dominance},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("7 Reuters-21578 reproduction: reported by wvenrich_acceptance_reuters\n");
  return failed == 0 ? 0 : 1;
}
