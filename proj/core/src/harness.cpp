#include "wvenrich/harness.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "wvenrich/error.hpp"
#include "wvenrich/rng.hpp"

namespace wvenrich {

namespace {

struct Arms {
  std::vector<std::vector<std::string>> baseline;
  std::vector<std::vector<std::string>> enriched;
  std::size_t baseline_nonzero = 0;
  std::size_t enriched_nonzero = 0;
};

// Training side of one (repeat, fold) cell.
struct FoldModel {
  std::vector<std::size_t> test;
  Vocabulary vocab;
  ClassifierModel classifier;
};

FoldModel train_fold(std::span<const Document> docs, const FoldPlan& plan,
                     std::size_t repeat, std::size_t fold,
                     const ExperimentConfig& cfg) {
  const auto train = plan.train_indices(repeat, fold);
  Vocabulary vocab = build_vocabulary(docs, train);
  std::vector<LabeledVector> examples;
  examples.reserve(train.size());
  for (std::size_t i : train) {
    examples.push_back({vectorize(docs[i].tokens, vocab), docs[i].primary_label()});
  }

  auto make_classifier = [&]() -> ClassifierModel {
    if (cfg.classifier == ClassifierKind::Mnb) return train_mnb(examples);
    SvmOptions svm = cfg.svm;
    svm.seed = classifier_seed(cfg.seed, repeat, fold);
    return train_svm_ovo(examples, svm);
  };
  ClassifierModel classifier = make_classifier();
  return FoldModel{plan.test_indices(repeat, fold), std::move(vocab),
                   std::move(classifier)};
}

Arms score_fold(std::span<const Document> docs, const FoldModel& fm,
                const NeighborCache& neighbors, const EnrichmentConfig& enrich,
                std::size_t top, bool with_baseline) {
  const Enricher enricher(fm.vocab, neighbors, enrich);
  Arms arms;
  for (std::size_t i : fm.test) {
    const auto& tokens = docs[i].tokens;
    const SparseVector raw = vectorize(tokens, fm.vocab);
    std::vector<std::string> raw_top;
    if (with_baseline || !enrich.enabled()) {
      raw_top = top_k(predict(fm.classifier, raw), top);
    }
    if (with_baseline) {
      arms.baseline.push_back(raw_top);
      arms.baseline_nonzero += nonzero_count(raw);
    }
    if (!enrich.enabled()) {
      arms.enriched.push_back(std::move(raw_top));
      arms.enriched_nonzero += nonzero_count(raw);
      continue;
    }
    const SparseVector rich = enricher(tokens);
    arms.enriched_nonzero += nonzero_count(rich);
    arms.enriched.push_back(top_k(predict(fm.classifier, rich), top));
  }
  return arms;
}

std::vector<std::vector<std::string>> gold_labels(
    std::span<const Document> docs, std::span<const std::size_t> idx) {
  std::vector<std::vector<std::string>> gold;
  gold.reserve(idx.size());
  for (std::size_t i : idx) gold.push_back(docs[i].labels);
  return gold;
}

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
  std::size_t n = requested;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, jobs));
}

std::optional<WilcoxonResult> paired_test(std::span<const double> base,
                                          std::span<const double> treat) {
  PairedSample s{{base.begin(), base.end()}, {treat.begin(), treat.end()}};
  try {
    return wilcoxon_signed_rank(s);
  } catch (const NoDifferenceError&) {
    return std::nullopt;
  }
}

std::optional<double> safe_error_reduction(double base, double treat) {
  if (!(base < 1.0)) return std::nullopt;
  return error_reduction(base, treat);
}

}  // namespace

ClassifierKind parse_classifier_kind(std::string_view name) {
  if (name == "mnb") return ClassifierKind::Mnb;
  if (name == "svm") return ClassifierKind::Svm;
  throw InvalidArgument("unknown classifier \"" + std::string(name) +
                        "\" (expected mnb or svm)");
}

std::string_view to_string(ClassifierKind kind) {
  return kind == ClassifierKind::Mnb ? "mnb" : "svm";
}

void ExperimentConfig::validate() const {
  if (folds < 2) throw InvalidArgument("folds must be >= 2");
  if (repeats < 1) throw InvalidArgument("repeats must be >= 1");
  if (top_k < 1) throw InvalidArgument("top_k must be >= 1");
  if (embedding_source == EmbeddingSource::Load && embedding_path.empty()) {
    throw InvalidArgument("an embedding path is required");
  }
  if (!(svm.C > 0.0)) throw InvalidArgument("svm C must be > 0");
  skipgram.validate();
}

std::uint64_t fold_seed(std::uint64_t master) { return derive_seed(master, 1); }
std::uint64_t embedding_seed(std::uint64_t master) {
  return derive_seed(master, 2);
}
std::uint64_t classifier_seed(std::uint64_t master, std::size_t repeat,
                              std::size_t fold) {
  return derive_seed(derive_seed(master, 3), repeat * 1000 + fold);
}

ExperimentInputs prepare_inputs(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentInputs in;
  in.documents = load_dataset(cfg.dataset, cfg.format);
  if (cfg.embedding_source == EmbeddingSource::Load) {
    in.embedding = load_word2vec_text(cfg.embedding_path);
    in.embedding_description = cfg.embedding_path.filename().string();
  } else {
    std::vector<std::vector<std::string>> sentences;
    sentences.reserve(in.documents.size());
    for (const auto& d : in.documents) sentences.push_back(d.tokens);
    SkipgramParams p = cfg.skipgram;
    p.seed = embedding_seed(cfg.seed);
    in.embedding = train_skipgram(sentences, p);
    in.embedding_description =
        "domain skip-gram (d=" + std::to_string(p.dimension) +
        ", window=" + std::to_string(p.window) +
        ", min_count=" + std::to_string(p.min_count) +
        ", epochs=" + std::to_string(p.epochs) + ")";
  }
  return in;
}

EvalResult run_cv(std::span<const Document> docs, const EmbeddingModel& model,
                  const ExperimentConfig& cfg) {
  cfg.validate();
  const FoldPlan plan = make_folds(docs, cfg.repeats, cfg.folds, fold_seed(cfg.seed));
  const NeighborCache neighbors(model);

  EvalResult result;
  result.dataset = cfg.dataset.filename().string();
  result.classifier = cfg.classifier;
  result.documents = docs.size();
  {
    std::set<std::string_view> classes;
    for (const auto& d : docs) classes.insert(d.primary_label());
    result.classes = classes.size();
  }
  result.repeats = cfg.repeats;
  result.folds = cfg.folds;
  result.seed = cfg.seed;
  result.top_k = cfg.top_k;
  result.enrichment = cfg.enrichment;

  const std::size_t cells = cfg.repeats * cfg.folds;
  result.cells.resize(cells);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    while (true) {
      const std::size_t c = next.fetch_add(1);
      if (c >= cells) return;
      const std::size_t repeat = c / cfg.folds;
      const std::size_t fold = c % cfg.folds;
      try {
        const FoldModel fm = train_fold(docs, plan, repeat, fold, cfg);
        const Arms arms =
            score_fold(docs, fm, neighbors, cfg.enrichment, cfg.top_k, true);
        const auto gold = gold_labels(docs, fm.test);
        const auto base = tally_ranked(gold, arms.baseline);
        const auto rich = tally_ranked(gold, arms.enriched);
        result.cells[c] = CellResult{repeat,
                                     fold,
                                     fm.test.size(),
                                     micro_recall(base),
                                     macro_recall(base),
                                     micro_recall(rich),
                                     macro_recall(rich),
                                     arms.baseline_nonzero,
                                     arms.enriched_nonzero};
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::make_exception_ptr(
              Error("repeat " + std::to_string(repeat) + " fold " +
                    std::to_string(fold) + ": " + e.what()));
        }
        next.store(cells);
        return;
      }
    }
  };

  const std::size_t nthreads = worker_count(cfg.threads, cells);
  if (nthreads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<double> bm, bM, em, eM;
  for (const auto& c : result.cells) {
    bm.push_back(c.baseline_micro);
    bM.push_back(c.baseline_macro);
    em.push_back(c.enriched_micro);
    eM.push_back(c.enriched_macro);
  }
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  result.baseline = {mean(bm), mean(bM)};
  result.enriched = {mean(em), mean(eM)};
  result.micro_error_reduction =
      safe_error_reduction(result.baseline.micro, result.enriched.micro);
  result.macro_error_reduction =
      safe_error_reduction(result.baseline.macro, result.enriched.macro);
  result.micro_test = paired_test(bm, em);
  result.macro_test = paired_test(bM, eM);
  return result;
}

EvalResult run_cv(const ExperimentConfig& cfg) {
  const auto inputs = prepare_inputs(cfg);
  EvalResult r = run_cv(inputs.documents, inputs.embedding, cfg);
  r.embedding = inputs.embedding_description;
  return r;
}

GridSearchResult grid_search(std::span<const Document> docs,
                             const EmbeddingModel& model,
                             const ExperimentConfig& cfg,
                             std::span<const std::uint64_t> n_range,
                             std::span<const std::size_t> k_range) {
  if (n_range.empty() || k_range.empty()) {
    throw InvalidArgument("grid search needs non-empty n and k ranges");
  }
  cfg.validate();
  const FoldPlan plan = make_folds(docs, cfg.repeats, cfg.folds, fold_seed(cfg.seed));
  const NeighborCache neighbors(model);
  const FoldModel fm = train_fold(docs, plan, 0, 0, cfg);
  const auto gold = gold_labels(docs, fm.test);

  std::vector<std::uint64_t> ns(n_range.begin(), n_range.end());
  std::vector<std::size_t> ks(k_range.begin(), k_range.end());
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  GridSearchResult out;
  {
    const Arms arms = score_fold(docs, fm, neighbors, {0, 0}, cfg.top_k, true);
    out.baseline_micro = micro_recall(tally_ranked(gold, arms.baseline));
  }
  std::optional<double> best;
  for (auto n : ns) {
    for (auto k : ks) {
      const Arms arms = score_fold(docs, fm, neighbors, {n, k}, cfg.top_k, false);
      const auto t = tally_ranked(gold, arms.enriched);
      GridPoint gp{n, k, micro_recall(t), macro_recall(t)};
      out.points.push_back(gp);
      if (!best || gp.enriched_micro > *best) {
        best = gp.enriched_micro;
        out.n = n;
        out.k = k;
      }
    }
  }
  return out;
}

}  // namespace wvenrich
