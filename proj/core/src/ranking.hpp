#pragma once

#include <span>
#include <string>

#include "wvenrich/classify.hpp"

namespace wvenrich {

// Sorts labels by descending score, then ascending label. With a positive
// tolerance, scores within `rel_tolerance` (relative, floor 1) of their
// neighbour are treated as tied.
Prediction rank_scores(std::span<const std::string> labels,
                       std::span<const double> scores, double rel_tolerance);

}  // namespace wvenrich
