#include "ranking.hpp"

#include <algorithm>
#include <cmath>

#include "wvenrich/error.hpp"

namespace wvenrich {

std::vector<std::string> top_k(const Prediction& p, std::size_t k) {
  if (k == 0) throw InvalidArgument("top_k requires k >= 1");
  std::vector<std::string> out;
  const std::size_t n = std::min(k, p.ranked.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(p.ranked[i].label);
  return out;
}

Prediction rank_scores(std::span<const std::string> labels,
                       std::span<const double> scores, double rel_tolerance) {
  Prediction p;
  p.ranked.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    p.ranked.push_back({labels[i], scores[i]});
  }
  auto& r = p.ranked;
  std::sort(r.begin(), r.end(), [](const ScoredLabel& a, const ScoredLabel& b) {
    return a.score != b.score ? a.score > b.score : a.label < b.label;
  });
  if (rel_tolerance <= 0.0) return p;

  // Chains of adjacent scores within tolerance form one tie group, ordered
  // by label and sharing the group's top score.
  std::size_t begin = 0;
  while (begin < r.size()) {
    std::size_t end = begin + 1;
    while (end < r.size()) {
      const double a = r[end - 1].score;
      const double b = r[end].score;
      const double scale = std::max({1.0, std::abs(a), std::abs(b)});
      if (a - b > rel_tolerance * scale) break;
      ++end;
    }
    if (end - begin > 1) {
      const double top = r[begin].score;
      std::sort(r.begin() + static_cast<std::ptrdiff_t>(begin),
                r.begin() + static_cast<std::ptrdiff_t>(end),
                [](const ScoredLabel& a, const ScoredLabel& b) {
                  return a.label < b.label;
                });
      for (std::size_t i = begin; i < end; ++i) r[i].score = top;
    }
    begin = end;
  }
  return p;
}

Prediction predict(const ClassifierModel& model, const SparseVector& v) {
  return std::visit(
      [&](const auto& m) -> Prediction {
        if constexpr (std::is_same_v<std::decay_t<decltype(m)>, MNBModel>) {
          return predict_mnb(m, v);
        } else {
          return predict_svm(m, v);
        }
      },
      model);
}

}  // namespace wvenrich
