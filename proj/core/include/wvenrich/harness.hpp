#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "wvenrich/classify.hpp"
#include "wvenrich/corpus.hpp"
#include "wvenrich/embedding.hpp"
#include "wvenrich/enrichment.hpp"
#include "wvenrich/metrics.hpp"

namespace wvenrich {

enum class ClassifierKind { Mnb, Svm };

ClassifierKind parse_classifier_kind(std::string_view name);
std::string_view to_string(ClassifierKind kind);

enum class EmbeddingSource { TrainDomain, Load };

struct ExperimentConfig {
  std::filesystem::path dataset;
  DatasetFormat format = DatasetFormat::Records;
  ClassifierKind classifier = ClassifierKind::Mnb;

  EmbeddingSource embedding_source = EmbeddingSource::TrainDomain;
  std::filesystem::path embedding_path;
  SkipgramParams skipgram;

  EnrichmentConfig enrichment;
  std::vector<std::uint64_t> n_range;
  std::vector<std::size_t> k_range;

  std::size_t repeats = 10;
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  std::size_t top_k = 1;

  SvmOptions svm;
  /// Concurrent (repeat, fold) cells; 0 uses the hardware concurrency.
  std::size_t threads = 0;

  /// Throws InvalidArgument on an unusable setting.
  void validate() const;
};

/// Overlays the keys present in `j` onto `cfg`. Recognised keys: dataset,
/// format, classifier, embedding, train_domain, dim, window, min_count,
/// epochs, negative, learning_rate, workers, n, k, n_range, k_range,
/// repeats, folds, seed, top_k, svm_c, svm_tolerance, threads. Unknown keys
/// raise ParseError.
void apply_config(const nlohmann::json& j, ExperimentConfig& cfg);
void apply_config_file(const std::filesystem::path& path, ExperimentConfig& cfg);

/// Seeds derived from ExperimentConfig::seed.
std::uint64_t fold_seed(std::uint64_t master);
std::uint64_t embedding_seed(std::uint64_t master);
std::uint64_t classifier_seed(std::uint64_t master, std::size_t repeat,
                              std::size_t fold);

struct CellResult {
  std::size_t repeat = 0;
  std::size_t fold = 0;
  std::size_t test_size = 0;
  double baseline_micro = 0.0;
  double baseline_macro = 0.0;
  double enriched_micro = 0.0;
  double enriched_macro = 0.0;
  /// Summed non-zero entries over the fold's test vectors.
  std::size_t baseline_nonzero = 0;
  std::size_t enriched_nonzero = 0;
  bool operator==(const CellResult&) const = default;
};

struct ArmSummary {
  double micro = 0.0;
  double macro = 0.0;
};

struct GridPoint {
  std::uint64_t n = 0;
  std::size_t k = 0;
  double enriched_micro = 0.0;
  double enriched_macro = 0.0;
};

struct GridSearchResult {
  std::uint64_t n = 0;
  std::size_t k = 0;
  double baseline_micro = 0.0;
  std::vector<GridPoint> points;
};

struct EvalResult {
  std::string dataset;
  ClassifierKind classifier = ClassifierKind::Mnb;
  std::string embedding;
  std::size_t documents = 0;
  std::size_t classes = 0;
  std::size_t repeats = 0;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::size_t top_k = 1;
  EnrichmentConfig enrichment;

  std::vector<CellResult> cells;
  ArmSummary baseline;
  ArmSummary enriched;
  /// Empty when the baseline recall is already 1.
  std::optional<double> micro_error_reduction;
  std::optional<double> macro_error_reduction;
  /// Empty when every paired difference is zero.
  std::optional<WilcoxonResult> micro_test;
  std::optional<WilcoxonResult> macro_test;

  std::optional<GridSearchResult> grid;
};

/// Loads the dataset and obtains the embedding named by `cfg`: either loaded
/// from a word2vec text file or trained once on every document's tokens.
struct ExperimentInputs {
  std::vector<Document> documents;
  EmbeddingModel embedding;
  std::string embedding_description;
};
ExperimentInputs prepare_inputs(const ExperimentConfig& cfg);

/// Repeated k-fold cross-validation. In every (repeat, fold) cell the
/// classifier is trained once on the raw training vectors and scores the
/// test fold twice: raw (baseline) and enriched. Metrics are aggregated
/// as means over cells and the per-cell micro and macro recalls are
/// compared with the Wilcoxon signed-rank test.
EvalResult run_cv(std::span<const Document> docs, const EmbeddingModel& model,
                  const ExperimentConfig& cfg);
EvalResult run_cv(const ExperimentConfig& cfg);

/// Scores every (n, k) pair on repeat 0 / fold 0 and keeps the one with the
/// highest enriched micro recall, preferring smaller n then smaller k.
/// Throws InvalidArgument on an empty range.
GridSearchResult grid_search(std::span<const Document> docs,
                             const EmbeddingModel& model,
                             const ExperimentConfig& cfg,
                             std::span<const std::uint64_t> n_range,
                             std::span<const std::size_t> k_range);

enum class ReportFormat { Table, Records };

ReportFormat parse_report_format(std::string_view name);

/// Summary table with 3-decimal recalls and 2-decimal percentages.
std::string render_table(const EvalResult& r);
/// One JSON object per (repeat, fold) cell.
std::string render_records(const EvalResult& r);
void write_report(const EvalResult& r, ReportFormat format, std::ostream& out);
void emit_report(const EvalResult& r, ReportFormat format,
                 const std::filesystem::path& path);

}  // namespace wvenrich
