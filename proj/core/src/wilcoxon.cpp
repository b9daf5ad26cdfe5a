#include <algorithm>
#include <cmath>
#include <numeric>

#include "wvenrich/metrics.hpp"

namespace wvenrich {

namespace {

// Exact null distribution of the signed-rank sum: every rank enters with a
// + or - sign with probability 1/2. Works on doubled ranks, which stay
// integral under average-rank ties.
double exact_p(std::span<const std::size_t> doubled_ranks,
               std::size_t doubled_statistic) {
  const std::size_t total =
      std::accumulate(doubled_ranks.begin(), doubled_ranks.end(), std::size_t{0});
  std::vector<double> ways(total + 1, 0.0);
  ways[0] = 1.0;
  std::size_t reach = 0;
  for (std::size_t r : doubled_ranks) {
    reach += r;
    for (std::size_t s = reach; s >= r; --s) {
      ways[s] += ways[s - r];
      if (s == r) break;
    }
  }
  const double all = std::ldexp(1.0, static_cast<int>(doubled_ranks.size()));
  double lower = 0.0;
  double upper = 0.0;
  for (std::size_t s = 0; s <= total; ++s) {
    if (s <= doubled_statistic) lower += ways[s];
    if (s >= doubled_statistic) upper += ways[s];
  }
  return std::min(1.0, 2.0 * std::min(lower, upper) / all);
}

double normal_p(std::size_t n, double statistic,
                std::span<const std::size_t> tie_sizes) {
  const double nd = static_cast<double>(n);
  const double mean = nd * (nd + 1.0) / 4.0;
  double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0;
  for (std::size_t t : tie_sizes) {
    const double td = static_cast<double>(t);
    var -= (td * td * td - td) / 48.0;
  }
  if (var <= 0.0) return 1.0;
  const double z = std::max(0.0, std::abs(statistic - mean) - 0.5) / std::sqrt(var);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(std::span<const double> differences,
                                    WilcoxonMethod method) {
  std::vector<double> d;
  for (double x : differences) {
    if (x != 0.0) d.push_back(x);
  }
  if (d.empty()) {
    throw NoDifferenceError("all paired differences are zero");
  }
  const std::size_t n = d.size();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(d[a]) < std::abs(d[b]);
  });

  // Doubled average ranks: a tie block occupying ranks i+1..j gets i+j+1.
  std::vector<std::size_t> doubled(n);
  std::vector<std::size_t> tie_sizes;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && std::abs(d[order[j]]) == std::abs(d[order[i]])) ++j;
    for (std::size_t k = i; k < j; ++k) doubled[order[k]] = i + j + 1;
    if (j - i > 1) tie_sizes.push_back(j - i);
    i = j;
  }

  std::size_t doubled_w = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (d[i] > 0.0) doubled_w += doubled[i];
  }

  WilcoxonResult r;
  r.n = n;
  r.statistic = static_cast<double>(doubled_w) / 2.0;
  r.exact = method == WilcoxonMethod::Exact ||
            (method == WilcoxonMethod::Auto && n <= kWilcoxonExactLimit);
  r.p_value = r.exact ? exact_p(doubled, doubled_w)
                      : normal_p(n, r.statistic, tie_sizes);
  return r;
}

WilcoxonResult wilcoxon_signed_rank(const PairedSample& s,
                                    WilcoxonMethod method) {
  if (s.baseline.size() != s.treatment.size()) {
    throw InvalidArgument("paired samples differ in length");
  }
  if (s.baseline.empty()) throw InvalidArgument("paired sample is empty");
  std::vector<double> diffs(s.baseline.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    diffs[i] = s.treatment[i] - s.baseline[i];
  }
  return wilcoxon_signed_rank(diffs, method);
}

}  // namespace wvenrich
