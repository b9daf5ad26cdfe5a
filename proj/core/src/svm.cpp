// Linear SVM by dual coordinate descent (Hsieh et al., ICML 2008) for the
// hinge loss:
//
//   min_a  1/2 a'Qa - e'a   s.t. 0 <= a_i <= C,   Q_ij = y_i y_j x_i.x_j
//
// with x augmented by a constant 1 so the bias is the last primal weight.
// Each coordinate step solves its one-dimensional subproblem exactly and
// keeps w = sum_i a_i y_i x_i current.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "wvenrich/classify.hpp"
#include "wvenrich/error.hpp"
#include "wvenrich/rng.hpp"

namespace wvenrich {

namespace {

double margin(const std::vector<double>& w, double b, const SparseVector& x) {
  double s = b;
  for (const auto& e : x.entries()) s += w[e.index] * e.count;
  return s;
}

double projected_gradient(double g, double alpha, double C) {
  if (alpha <= 0.0) return std::min(g, 0.0);
  if (alpha >= C) return std::max(g, 0.0);
  return g;
}

double max_violation(std::span<const SparseVector* const> xs,
                     std::span<const int> ys, const std::vector<double>& w,
                     double b, const std::vector<double>& alphas, double C) {
  double worst = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double g = ys[i] * margin(w, b, *xs[i]) - 1.0;
    worst = std::max(worst, std::abs(projected_gradient(g, alphas[i], C)));
  }
  return worst;
}

}  // namespace

BinarySvmSolution train_binary_svm(std::span<const SparseVector* const> xs,
                                   std::span<const int> ys,
                                   std::size_t dimension,
                                   const SvmOptions& options) {
  if (xs.size() != ys.size()) {
    throw InvalidArgument("SVM inputs and labels differ in length");
  }
  if (!(options.C > 0.0)) throw InvalidArgument("SVM C must be > 0");
  for (int y : ys) {
    if (y != 1 && y != -1) throw InvalidArgument("SVM labels must be +1/-1");
  }
  for (const auto* x : xs) {
    if (x->dimension() != dimension) {
      throw DimensionError("SVM input dimension mismatch");
    }
  }

  const std::size_t n = xs.size();
  const double C = options.C;
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    double q = 1.0;
    for (const auto& e : xs[i]->entries()) {
      q += static_cast<double>(e.count) * e.count;
    }
    diag[i] = q;
  }

  BinarySvmSolution sol;
  sol.weights.assign(dimension, 0.0);
  sol.alphas.assign(n, 0.0);
  auto& w = sol.weights;
  auto& alpha = sol.alphas;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(options.seed);

  for (sol.iterations = 0; sol.iterations < options.max_iterations;) {
    ++sol.iterations;
    rng.shuffle(std::span(order));
    double sweep_violation = 0.0;
    for (std::size_t i : order) {
      const auto& x = *xs[i];
      const double g = ys[i] * margin(w, sol.bias, x) - 1.0;
      const double pg = projected_gradient(g, alpha[i], C);
      sweep_violation = std::max(sweep_violation, std::abs(pg));
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / diag[i], 0.0, C);
      const double step = (alpha[i] - old) * ys[i];
      if (step == 0.0) continue;
      for (const auto& e : x.entries()) w[e.index] += step * e.count;
      sol.bias += step;
    }
    // The sweep measures violations against a moving w; confirm on the final
    // iterate before declaring convergence.
    if (sweep_violation <= options.tolerance &&
        max_violation(xs, ys, w, sol.bias, alpha, C) <= options.tolerance) {
      sol.converged = true;
      break;
    }
  }
  sol.max_violation = max_violation(xs, ys, w, sol.bias, alpha, C);
  sol.converged = sol.max_violation <= options.tolerance;
  return sol;
}

double PairwiseSvm::decision(const SparseVector& v) const {
  double s = bias;
  std::size_t j = 0;
  for (const auto& e : v.entries()) {
    while (j < indices.size() && indices[j] < e.index) ++j;
    if (j == indices.size()) break;
    if (indices[j] == e.index) s += weights[j] * e.count;
  }
  return s;
}

SVMModel::SVMModel(std::vector<std::string> classes,
                   std::vector<PairwiseSvm> pairs, double C,
                   std::size_t dimension)
    : classes_(std::move(classes)),
      pairs_(std::move(pairs)),
      C_(C),
      dimension_(dimension) {
  const std::size_t m = classes_.size();
  if (m < 2) throw InvalidArgument("SVM model needs at least two classes");
  if (!std::is_sorted(classes_.begin(), classes_.end()) ||
      std::adjacent_find(classes_.begin(), classes_.end()) != classes_.end()) {
    throw InvalidArgument("SVM classes must be sorted and distinct");
  }
  if (pairs_.size() != m * (m - 1) / 2) {
    throw InvalidArgument("SVM model needs m(m-1)/2 pairwise models");
  }
  std::size_t p = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b, ++p) {
      const auto& pair = pairs_[p];
      if (pair.positive != classes_[a] || pair.negative != classes_[b]) {
        throw InvalidArgument("SVM pairwise models are out of order");
      }
      if (pair.indices.size() != pair.weights.size() ||
          !std::is_sorted(pair.indices.begin(), pair.indices.end()) ||
          (!pair.indices.empty() && pair.indices.back() >= dimension_)) {
        throw InvalidArgument("malformed SVM weight vector");
      }
    }
  }

  column_start_.assign(dimension_ + 1, 0);
  for (const auto& pair : pairs_) {
    for (auto i : pair.indices) ++column_start_[i + 1];
  }
  std::partial_sum(column_start_.begin(), column_start_.end(),
                   column_start_.begin());
  columns_.resize(column_start_.back());
  std::vector<std::size_t> fill(column_start_.begin(), column_start_.end() - 1);
  for (std::uint32_t pi = 0; pi < pairs_.size(); ++pi) {
    const auto& pair = pairs_[pi];
    for (std::size_t j = 0; j < pair.indices.size(); ++j) {
      columns_[fill[pair.indices[j]]++] = {pi, pair.weights[j]};
    }
  }
}

std::vector<double> SVMModel::decisions(const SparseVector& v) const {
  if (v.dimension() != dimension_) {
    throw DimensionError("vector dimension " + std::to_string(v.dimension()) +
                         " does not match SVM model dimension " +
                         std::to_string(dimension_));
  }
  std::vector<double> out(pairs_.size());
  for (std::size_t p = 0; p < pairs_.size(); ++p) out[p] = pairs_[p].bias;
  for (const auto& e : v.entries()) {
    for (std::size_t j = column_start_[e.index]; j < column_start_[e.index + 1];
         ++j) {
      out[columns_[j].pair] += columns_[j].weight * e.count;
    }
  }
  return out;
}

SVMModel train_svm_ovo(std::span<const LabeledVector> training,
                       const SvmOptions& options) {
  if (training.empty()) throw InvalidArgument("cannot train SVM on no data");
  const std::size_t dim = training.front().vector.dimension();
  std::map<std::string, std::vector<const SparseVector*>> by_class;
  for (const auto& ex : training) {
    if (ex.vector.dimension() != dim) {
      throw DimensionError("training vectors have mixed dimensions");
    }
    by_class[ex.label].push_back(&ex.vector);
  }
  if (by_class.size() < 2) {
    throw InvalidArgument("one-vs-one SVM needs at least two classes");
  }

  std::vector<std::string> classes;
  std::vector<const std::vector<const SparseVector*>*> members;
  for (const auto& [label, xs] : by_class) {
    classes.push_back(label);
    members.push_back(&xs);
  }

  std::vector<PairwiseSvm> pairs;
  std::vector<const SparseVector*> xs;
  std::vector<int> ys;
  std::uint64_t pair_no = 0;
  for (std::size_t a = 0; a < classes.size(); ++a) {
    for (std::size_t b = a + 1; b < classes.size(); ++b, ++pair_no) {
      xs.assign(members[a]->begin(), members[a]->end());
      xs.insert(xs.end(), members[b]->begin(), members[b]->end());
      ys.assign(members[a]->size(), 1);
      ys.insert(ys.end(), members[b]->size(), -1);

      SvmOptions opts = options;
      opts.seed = derive_seed(options.seed, pair_no);
      auto sol = train_binary_svm(xs, ys, dim, opts);

      PairwiseSvm pair;
      pair.positive = classes[a];
      pair.negative = classes[b];
      pair.bias = sol.bias;
      for (std::size_t i = 0; i < dim; ++i) {
        if (sol.weights[i] != 0.0) {
          pair.indices.push_back(static_cast<SparseVector::Index>(i));
          pair.weights.push_back(sol.weights[i]);
        }
      }
      pairs.push_back(std::move(pair));
    }
  }
  return SVMModel(std::move(classes), std::move(pairs), options.C, dim);
}

Prediction predict_svm(const SVMModel& model, const SparseVector& v) {
  const auto dec = model.decisions(v);
  const auto classes = model.classes();
  const std::size_t m = classes.size();
  std::vector<std::size_t> votes(m, 0);
  std::vector<double> margins(m, 0.0);
  std::size_t p = 0;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b, ++p) {
      ++votes[dec[p] >= 0.0 ? a : b];
      margins[a] += dec[p];
      margins[b] -= dec[p];
    }
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (votes[x] != votes[y]) return votes[x] > votes[y];
    if (margins[x] != margins[y]) return margins[x] > margins[y];
    return classes[x] < classes[y];
  });
  Prediction pred;
  pred.ranked.reserve(m);
  for (std::size_t c : order) {
    pred.ranked.push_back({classes[c], static_cast<double>(votes[c])});
  }
  return pred;
}

}  // namespace wvenrich
