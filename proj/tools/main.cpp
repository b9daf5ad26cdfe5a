// wvenrich: dataset preparation, embedding training and cross-validated
// evaluation of word-vector bag-of-words enrichment.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wvenrich/corpus.hpp"
#include "wvenrich/embedding.hpp"
#include "wvenrich/error.hpp"
#include "wvenrich/harness.hpp"

namespace {

using namespace wvenrich;

struct SkipgramFlags {
  std::optional<std::size_t> dim, window, min_count, epochs, negative, workers;
  std::optional<double> learning_rate;

  void add_to(CLI::App& app) {
    app.add_option("--dim", dim, "Embedding dimension (default 100)");
    app.add_option("--window", window, "Context window (default 10)");
    app.add_option("--min-count", min_count, "Minimum token frequency (default 2)");
    app.add_option("--epochs", epochs, "Training epochs (default 10)");
    app.add_option("--negative", negative, "Negative samples (default 5)");
    app.add_option("--learning-rate", learning_rate,
                   "Initial learning rate (default 0.025)");
    app.add_option("--workers", workers,
                   "Training threads; 1 is reproducible (default 1)");
  }

  void apply(SkipgramParams& p) const {
    if (dim) p.dimension = *dim;
    if (window) p.window = *window;
    if (min_count) p.min_count = *min_count;
    if (epochs) p.epochs = *epochs;
    if (negative) p.negative_samples = *negative;
    if (learning_rate) p.initial_learning_rate = *learning_rate;
    if (workers) p.workers = *workers;
  }
};

struct EvaluateFlags {
  std::optional<std::string> config;
  std::optional<std::string> dataset, format, classifier, embedding;
  bool train_domain = false;
  SkipgramFlags skipgram;
  std::optional<std::uint64_t> n, seed;
  std::optional<std::size_t> k, repeats, folds, top_k, threads;
  std::optional<double> svm_c;
  std::optional<std::string> report, report_format, records;
  std::vector<std::uint64_t> n_range;
  std::vector<std::size_t> k_range;

  void add_to(CLI::App& app, bool grid) {
    app.add_option("--config", config, "JSON config file; flags override it");
    app.add_option("--dataset", dataset, "Dataset path");
    app.add_option("--format", format, "records | reuters-sgml (default records)");
    app.add_option("--classifier", classifier, "mnb | svm (default mnb)");
    auto* emb = app.add_option("--embedding", embedding,
                               "Pretrained word2vec text model");
    auto* dom = app.add_flag("--train-domain", train_domain,
                             "Train a skip-gram model on the dataset text");
    emb->excludes(dom);
    skipgram.add_to(app);
    if (!grid) {
      app.add_option("--n", n, "Rare-word threshold (default 3)");
      app.add_option("--k", k, "Neighbors per rare word (default 3)");
    } else {
      app.add_option("--n-range", n_range, "Candidate n values, comma separated")
          ->delimiter(',');
      app.add_option("--k-range", k_range, "Candidate k values, comma separated")
          ->delimiter(',');
    }
    app.add_option("--repeats", repeats, "Cross-validation repeats (default 10)");
    app.add_option("--folds", folds, "Folds per repeat (default 10)");
    app.add_option("--seed", seed, "Master seed (default 1)");
    app.add_option("--top-k", top_k, "Ranked predictions counted (default 1)");
    app.add_option("--svm-c", svm_c, "SVM regularization C (default 1)");
    app.add_option("--threads", threads, "Concurrent folds (0 = all cores)");
    app.add_option("--report", report, "Write the report to this file");
    app.add_option("--report-format", report_format,
                   "table | records (default table)");
    app.add_option("--records", records,
                   "Also write per-fold records to this file");
  }

  ExperimentConfig build() const {
    ExperimentConfig cfg;
    if (config) apply_config_file(*config, cfg);
    if (dataset) cfg.dataset = *dataset;
    if (format) cfg.format = parse_dataset_format(*format);
    if (classifier) cfg.classifier = parse_classifier_kind(*classifier);
    if (embedding) {
      cfg.embedding_source = EmbeddingSource::Load;
      cfg.embedding_path = *embedding;
    }
    if (train_domain) cfg.embedding_source = EmbeddingSource::TrainDomain;
    skipgram.apply(cfg.skipgram);
    if (n) cfg.enrichment.n = *n;
    if (k) cfg.enrichment.k = *k;
    if (!n_range.empty()) cfg.n_range = n_range;
    if (!k_range.empty()) cfg.k_range = k_range;
    if (repeats) cfg.repeats = *repeats;
    if (folds) cfg.folds = *folds;
    if (seed) cfg.seed = *seed;
    if (top_k) cfg.top_k = *top_k;
    if (svm_c) cfg.svm.C = *svm_c;
    if (threads) cfg.threads = *threads;
    if (cfg.dataset.empty()) throw InvalidArgument("--dataset is required");
    return cfg;
  }

  void emit(const EvalResult& r) const {
    const ReportFormat fmt =
        report_format ? parse_report_format(*report_format) : ReportFormat::Table;
    write_report(r, ReportFormat::Table, std::cout);
    if (report) emit_report(r, fmt, *report);
    if (records) emit_report(r, ReportFormat::Records, *records);
  }
};

int run_prep(const std::string& input, const std::string& format,
             const std::string& out, std::optional<std::size_t> max_tokens,
             const std::vector<std::string>& excluded) {
  auto docs = load_dataset(input, parse_dataset_format(format));
  const std::size_t loaded = docs.size();
  if (max_tokens || !excluded.empty()) {
    std::set<std::string, std::less<>> ex(excluded.begin(), excluded.end());
    docs = filter_short_subset(docs, max_tokens.value_or(SIZE_MAX), ex);
  }
  save_records(docs, out);
  std::set<std::string> classes;
  std::size_t tokens = 0;
  std::set<std::string> vocab;
  for (const auto& d : docs) {
    classes.insert(d.primary_label());
    tokens += d.tokens.size();
    vocab.insert(d.tokens.begin(), d.tokens.end());
  }
  std::cout << "loaded " << loaded << " documents, wrote " << docs.size()
            << " documents over " << classes.size() << " classes ("
            << vocab.size() << " unique tokens, mean length "
            << (docs.empty() ? 0.0
                             : static_cast<double>(tokens) /
                                   static_cast<double>(docs.size()))
            << ") to " << out << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Word-vector enrichment of bag-of-words short-text classifiers"};
  app.require_subcommand(1);

  // prep
  std::string prep_input, prep_format = "records", prep_out;
  std::optional<std::size_t> prep_max_tokens;
  std::vector<std::string> prep_exclude;
  auto* prep = app.add_subcommand("prep", "Convert a dataset to records, optionally filtering it");
  prep->add_option("--input", prep_input, "Input dataset (file or Reuters directory)")->required();
  prep->add_option("--format", prep_format, "records | reuters-sgml");
  prep->add_option("--out", prep_out, "Output records file")->required();
  prep->add_option("--max-tokens", prep_max_tokens, "Keep documents with at most this many tokens");
  prep->add_option("--exclude-label", prep_exclude, "Drop documents carrying this label (repeatable)");

  // train-embedding
  std::string emb_input, emb_format = "records", emb_out;
  std::optional<std::uint64_t> emb_seed;
  SkipgramFlags emb_flags;
  auto* train = app.add_subcommand("train-embedding", "Train a skip-gram model and save it as word2vec text");
  train->add_option("--input", emb_input, "Training text (records file or Reuters directory)")->required();
  train->add_option("--format", emb_format, "records | reuters-sgml");
  train->add_option("--out", emb_out, "Output word2vec text file")->required();
  train->add_option("--seed", emb_seed, "Random seed (default 1)");
  emb_flags.add_to(*train);

  EvaluateFlags eval_flags;
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validate baseline against enriched classification");
  eval_flags.add_to(*evaluate, false);

  EvaluateFlags grid_flags;
  auto* grid = app.add_subcommand("grid-search", "Tune n and k on the first fold, then cross-validate");
  grid_flags.add_to(*grid, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (prep->parsed()) {
      return run_prep(prep_input, prep_format, prep_out, prep_max_tokens, prep_exclude);
    }
    if (train->parsed()) {
      SkipgramParams p;
      emb_flags.apply(p);
      if (emb_seed) p.seed = *emb_seed;
      const auto sentences = load_sentences(emb_input, parse_dataset_format(emb_format));
      const auto model = train_skipgram(sentences, p);
      save_word2vec_text(model, emb_out);
      std::cout << "trained " << model.size() << " vectors of dimension "
                << model.dimension() << " from " << sentences.size()
                << " sentences; wrote " << emb_out << '\n';
      return 0;
    }
    if (evaluate->parsed()) {
      const ExperimentConfig cfg = eval_flags.build();
      eval_flags.emit(run_cv(cfg));
      return 0;
    }
    if (grid->parsed()) {
      ExperimentConfig cfg = grid_flags.build();
      if (cfg.n_range.empty() || cfg.k_range.empty()) {
        throw InvalidArgument("--n-range and --k-range are required");
      }
      const auto inputs = prepare_inputs(cfg);
      const auto best = grid_search(inputs.documents, inputs.embedding, cfg,
                                    cfg.n_range, cfg.k_range);
      cfg.enrichment = {best.n, best.k};
      EvalResult r = run_cv(inputs.documents, inputs.embedding, cfg);
      r.embedding = inputs.embedding_description;
      r.grid = best;
      grid_flags.emit(r);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
