#include <algorithm>
#include <cmath>
#include <map>

#include "ranking.hpp"
#include "wvenrich/classify.hpp"
#include "wvenrich/error.hpp"

namespace wvenrich {

namespace {

// Log-space sums of a few thousand terms agree to ~1e-13 relative when the
// underlying products are equal.
constexpr double kTieTolerance = 1e-11;

}  // namespace

MNBModel::MNBModel(std::vector<std::string> classes,
                   std::vector<double> log_prior, std::vector<double> log_cond,
                   std::size_t dimension)
    : classes_(std::move(classes)),
      log_prior_(std::move(log_prior)),
      log_cond_(std::move(log_cond)),
      dimension_(dimension) {
  if (classes_.empty()) throw InvalidArgument("MNB model needs a class");
  if (log_prior_.size() != classes_.size() ||
      log_cond_.size() != classes_.size() * dimension_) {
    throw InvalidArgument("MNB model parameter shapes do not match");
  }
  if (!std::is_sorted(classes_.begin(), classes_.end()) ||
      std::adjacent_find(classes_.begin(), classes_.end()) != classes_.end()) {
    throw InvalidArgument("MNB classes must be sorted and distinct");
  }
}

MNBModel train_mnb(std::span<const LabeledVector> training) {
  if (training.empty()) throw InvalidArgument("cannot train MNB on no data");
  const std::size_t dim = training.front().vector.dimension();

  std::map<std::string, std::size_t> class_index;
  for (const auto& ex : training) {
    if (ex.vector.dimension() != dim) {
      throw DimensionError("training vectors have mixed dimensions");
    }
    class_index.emplace(ex.label, 0);
  }
  std::vector<std::string> classes;
  for (auto& [label, idx] : class_index) {
    idx = classes.size();
    classes.push_back(label);
  }
  const std::size_t m = classes.size();

  std::vector<std::uint64_t> docs(m, 0);
  std::vector<std::uint64_t> tokens(m, 0);
  std::vector<std::uint64_t> counts(m * dim, 0);
  for (const auto& ex : training) {
    const std::size_t c = class_index[ex.label];
    ++docs[c];
    for (const auto& e : ex.vector.entries()) {
      counts[c * dim + e.index] += e.count;
      tokens[c] += e.count;
    }
  }

  std::vector<double> log_prior(m);
  std::vector<double> log_cond(m * dim);
  const double n = static_cast<double>(training.size());
  for (std::size_t c = 0; c < m; ++c) {
    log_prior[c] = std::log(static_cast<double>(docs[c]) / n);
    const double denom = std::log(static_cast<double>(tokens[c] + dim));
    for (std::size_t t = 0; t < dim; ++t) {
      log_cond[c * dim + t] =
          std::log(static_cast<double>(counts[c * dim + t] + 1)) - denom;
    }
  }
  return MNBModel(std::move(classes), std::move(log_prior), std::move(log_cond),
                  dim);
}

Prediction predict_mnb(const MNBModel& model, const SparseVector& v) {
  if (v.dimension() != model.dimension()) {
    throw DimensionError("vector dimension " + std::to_string(v.dimension()) +
                         " does not match MNB model dimension " +
                         std::to_string(model.dimension()));
  }
  const std::size_t m = model.classes().size();
  std::vector<double> scores(m);
  for (std::size_t c = 0; c < m; ++c) {
    double s = model.log_prior(c);
    for (const auto& e : v.entries()) {
      s += static_cast<double>(e.count) * model.log_cond(c, e.index);
    }
    scores[c] = s;
  }
  return rank_scores(model.classes(), scores, kTieTolerance);
}

}  // namespace wvenrich
