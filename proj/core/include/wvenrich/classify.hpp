#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wvenrich/bow.hpp"

namespace wvenrich {

struct LabeledVector {
  SparseVector vector;
  std::string label;
};

struct ScoredLabel {
  std::string label;
  double score;
  bool operator==(const ScoredLabel&) const = default;
};

/// Every class, best first. Scores are non-increasing.
struct Prediction {
  std::vector<ScoredLabel> ranked;

  const std::string& best() const { return ranked.front().label; }
  bool operator==(const Prediction&) const = default;
};

/// First min(k, classes) labels of `p`. Throws InvalidArgument when k == 0.
std::vector<std::string> top_k(const Prediction& p, std::size_t k);

// ---------------------------------------------------------------------------
// Multinomial naive Bayes

/// Log priors and Laplace-smoothed log conditionals, classes in
/// lexicographic order.
class MNBModel {
 public:
  /// Validates shapes: one prior per class and classes x dimension
  /// conditionals. Throws InvalidArgument otherwise.
  MNBModel(std::vector<std::string> classes, std::vector<double> log_prior,
           std::vector<double> log_cond, std::size_t dimension);

  std::span<const std::string> classes() const { return classes_; }
  std::size_t dimension() const { return dimension_; }
  double log_prior(std::size_t c) const { return log_prior_.at(c); }
  double log_cond(std::size_t c, std::size_t term) const {
    return log_cond_.at(c * dimension_ + term);
  }
  std::span<const double> log_priors() const { return log_prior_; }
  /// Row-major classes x dimension.
  std::span<const double> log_conds() const { return log_cond_; }

  bool operator==(const MNBModel&) const = default;

 private:
  std::vector<std::string> classes_;
  std::vector<double> log_prior_;
  std::vector<double> log_cond_;
  std::size_t dimension_;
};

/// P(c) = |docs in c| / |docs|;
/// P(t|c) = (count of t in c + 1) / (tokens in c + |V|).
/// Throws InvalidArgument on an empty training set or mixed dimensions.
MNBModel train_mnb(std::span<const LabeledVector> training);

/// score(c) = log P(c) + sum_i v[i] log P(t_i|c). Scores equal up to
/// rounding are ranked by label. Throws DimensionError on a mismatch.
Prediction predict_mnb(const MNBModel& model, const SparseVector& v);

// ---------------------------------------------------------------------------
// Linear SVM, one-vs-one

struct SvmOptions {
  double C = 1.0;
  /// Largest admissible projected-gradient (KKT) violation of the dual.
  double tolerance = 1e-3;
  std::size_t max_iterations = 5000;
  std::uint64_t seed = 1;
};

/// Soft-margin linear SVM on +1/-1 labels solved by dual coordinate descent.
/// The bias is learned as the weight of a constant feature 1 appended to
/// every input.
struct BinarySvmSolution {
  std::vector<double> weights;  ///< dense, input dimension
  double bias = 0.0;
  std::vector<double> alphas;   ///< dual variables, one per example
  std::size_t iterations = 0;
  double max_violation = 0.0;
  bool converged = false;
};

BinarySvmSolution train_binary_svm(std::span<const SparseVector* const> xs,
                                   std::span<const int> ys,
                                   std::size_t dimension,
                                   const SvmOptions& options);

/// Decision function w.x + b of one class pair. Positive favours
/// `positive`, the lexicographically smaller label.
struct PairwiseSvm {
  std::string positive;
  std::string negative;
  double bias = 0.0;
  std::vector<SparseVector::Index> indices;
  std::vector<double> weights;

  double decision(const SparseVector& v) const;
  bool operator==(const PairwiseSvm&) const = default;
};

class SVMModel {
 public:
  /// Pairs must be ordered (0,1), (0,2), ..., (m-2,m-1) over `classes`.
  /// Throws InvalidArgument otherwise.
  SVMModel(std::vector<std::string> classes, std::vector<PairwiseSvm> pairs,
           double C, std::size_t dimension);

  std::span<const std::string> classes() const { return classes_; }
  std::span<const PairwiseSvm> pairs() const { return pairs_; }
  double C() const { return C_; }
  std::size_t dimension() const { return dimension_; }

  /// Decision value of every pair for `v`, in pairs() order.
  std::vector<double> decisions(const SparseVector& v) const;

  bool operator==(const SVMModel& o) const {
    return classes_ == o.classes_ && pairs_ == o.pairs_ && C_ == o.C_ &&
           dimension_ == o.dimension_;
  }

 private:
  struct Column {
    std::uint32_t pair;
    double weight;
  };

  std::vector<std::string> classes_;
  std::vector<PairwiseSvm> pairs_;
  double C_;
  std::size_t dimension_;
  // Feature-major copy of the pair weights, so one pass over a test vector
  // scores every pair.
  std::vector<std::size_t> column_start_;
  std::vector<Column> columns_;
};

/// One binary SVM per unordered class pair, trained on that pair's
/// instances. Throws InvalidArgument with fewer than two classes.
SVMModel train_svm_ovo(std::span<const LabeledVector> training,
                       const SvmOptions& options = {});

/// Each pair votes by the sign of its decision value (zero votes for the
/// positive class). Vote ties are broken by each class's summed margin over
/// its own pairs, then by label. Scores are vote counts.
Prediction predict_svm(const SVMModel& model, const SparseVector& v);

// ---------------------------------------------------------------------------

using ClassifierModel = std::variant<MNBModel, SVMModel>;

Prediction predict(const ClassifierModel& model, const SparseVector& v);

/// Versioned JSON; doubles round-trip bit-exactly.
void write_model(const ClassifierModel& model, std::ostream& out);
ClassifierModel read_model(std::istream& in);
void save_model(const ClassifierModel& model, const std::filesystem::path& path);
ClassifierModel load_model(const std::filesystem::path& path);

}  // namespace wvenrich
