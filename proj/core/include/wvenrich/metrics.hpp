#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "wvenrich/error.hpp"

namespace wvenrich {

/// Per-class instance and true-positive counts. Each instance is counted
/// under one evaluation class, normally its primary gold label.
class ConfusionTally {
 public:
  struct ClassCount {
    std::size_t instances = 0;
    std::size_t true_positives = 0;
    bool operator==(const ClassCount&) const = default;
  };

  void record(const std::string& eval_class, bool correct);

  const std::map<std::string, ClassCount>& classes() const { return classes_; }
  std::size_t total() const { return total_; }
  std::size_t correct() const { return correct_; }

  bool operator==(const ConfusionTally&) const = default;

 private:
  std::map<std::string, ClassCount> classes_;
  std::size_t total_ = 0;
  std::size_t correct_ = 0;
};

/// An instance is correct when `predicted[i]` is any of `gold[i]`; it is
/// counted under `eval_class[i]`. Throws InvalidArgument on length mismatch.
ConfusionTally tally(std::span<const std::vector<std::string>> gold,
                     std::span<const std::string> predicted,
                     std::span<const std::string> eval_class);

/// As above with the first gold label of each instance as its class.
ConfusionTally tally(std::span<const std::vector<std::string>> gold,
                     std::span<const std::string> predicted);

/// Ranked variant: correct when any label in `ranked[i]` is in `gold[i]`.
ConfusionTally tally_ranked(std::span<const std::vector<std::string>> gold,
                            std::span<const std::vector<std::string>> ranked);

/// sum tp_i / |C|. Throws InvalidArgument on an empty tally.
double micro_recall(const ConfusionTally& t);

/// Mean of tp_i / |C_i| over classes with at least one instance. Throws
/// InvalidArgument when no class is populated.
double macro_recall(const ConfusionTally& t);

/// Relative reduction of the error (1 - recall), in percent:
/// 100 (treatment - baseline) / (1 - baseline). Throws InvalidArgument when
/// baseline >= 1.
double error_reduction(double baseline, double treatment);

// ---------------------------------------------------------------------------

/// Thrown when every paired difference is zero.
class NoDifferenceError : public Error {
 public:
  using Error::Error;
};

struct PairedSample {
  std::vector<double> baseline;
  std::vector<double> treatment;
};

enum class WilcoxonMethod {
  Auto,    ///< exact for at most kWilcoxonExactLimit non-zero pairs
  Exact,   ///< full null distribution of the signed-rank sum
  Normal,  ///< normal approximation, tie and continuity corrected
};

inline constexpr std::size_t kWilcoxonExactLimit = 20;

struct WilcoxonResult {
  double statistic = 0.0;  ///< W+, sum of ranks of positive differences
  double p_value = 1.0;    ///< two-sided
  std::size_t n = 0;       ///< pairs with non-zero difference
  bool exact = false;
};

/// Signed-rank test on treatment - baseline. Zero differences are dropped
/// and tied |differences| share their average rank. Throws
/// InvalidArgument on unequal lengths and NoDifferenceError when no
/// difference is non-zero.
WilcoxonResult wilcoxon_signed_rank(const PairedSample& s,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);
WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);

}  // namespace wvenrich
