#include "wvenrich/metrics.hpp"

#include <algorithm>

namespace wvenrich {

void ConfusionTally::record(const std::string& eval_class, bool correct) {
  auto& c = classes_[eval_class];
  ++c.instances;
  ++total_;
  if (correct) {
    ++c.true_positives;
    ++correct_;
  }
}

namespace {

bool contains(const std::vector<std::string>& labels, const std::string& l) {
  return std::find(labels.begin(), labels.end(), l) != labels.end();
}

void check_gold(std::span<const std::vector<std::string>> gold) {
  for (const auto& g : gold) {
    if (g.empty()) throw InvalidArgument("instance without gold labels");
  }
}

}  // namespace

ConfusionTally tally(std::span<const std::vector<std::string>> gold,
                     std::span<const std::string> predicted,
                     std::span<const std::string> eval_class) {
  if (gold.size() != predicted.size() || gold.size() != eval_class.size()) {
    throw InvalidArgument("tally inputs differ in length");
  }
  ConfusionTally t;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    t.record(eval_class[i], contains(gold[i], predicted[i]));
  }
  return t;
}

ConfusionTally tally(std::span<const std::vector<std::string>> gold,
                     std::span<const std::string> predicted) {
  if (gold.size() != predicted.size()) {
    throw InvalidArgument("tally inputs differ in length");
  }
  check_gold(gold);
  ConfusionTally t;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    t.record(gold[i].front(), contains(gold[i], predicted[i]));
  }
  return t;
}

ConfusionTally tally_ranked(std::span<const std::vector<std::string>> gold,
                            std::span<const std::vector<std::string>> ranked) {
  if (gold.size() != ranked.size()) {
    throw InvalidArgument("tally inputs differ in length");
  }
  check_gold(gold);
  ConfusionTally t;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    bool hit = std::any_of(ranked[i].begin(), ranked[i].end(),
                           [&](const std::string& l) { return contains(gold[i], l); });
    t.record(gold[i].front(), hit);
  }
  return t;
}

double micro_recall(const ConfusionTally& t) {
  if (t.total() == 0) throw InvalidArgument("micro recall of an empty tally");
  std::size_t tp = 0;
  for (const auto& [label, c] : t.classes()) tp += c.true_positives;
  return static_cast<double>(tp) / static_cast<double>(t.total());
}

double macro_recall(const ConfusionTally& t) {
  double sum = 0.0;
  std::size_t populated = 0;
  for (const auto& [label, c] : t.classes()) {
    if (c.instances == 0) continue;
    sum += static_cast<double>(c.true_positives) / static_cast<double>(c.instances);
    ++populated;
  }
  if (populated == 0) throw InvalidArgument("macro recall with no populated class");
  return sum / static_cast<double>(populated);
}

double error_reduction(double baseline, double treatment) {
  if (!(baseline < 1.0)) {
    throw InvalidArgument("error reduction is undefined for baseline recall 1");
  }
  return 100.0 * (treatment - baseline) / (1.0 - baseline);
}

}  // namespace wvenrich
