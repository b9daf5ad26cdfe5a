#include <algorithm>
#include <cmath>
#include <cstdint>

#include "wvenrich/embedding.hpp"
#include "wvenrich/error.hpp"

namespace wvenrich {

namespace {

// Similarities that are equal in exact arithmetic can differ in the last bits
// depending on how the dot product and norms round. Ranking compares them on a
// 2^-40 grid so such values tie and fall back to token order; the grid keeps
// the order a total one on every subset, which the cache relies on.
std::int64_t rank_key(double similarity) {
  return std::llround(std::ldexp(similarity, 40));
}

struct Scored {
  double similarity;
  std::int64_t key;
  std::size_t row;
};

std::vector<Neighbor> rank_rows(const EmbeddingModel& model, std::size_t query,
                                std::size_t k, const TokenFilter& admit) {
  const double qnorm = model.norm(query);
  if (qnorm == 0.0) return {};
  const auto q = model.vector(query);
  const std::size_t dim = model.dimension();

  std::vector<Scored> scored;
  scored.reserve(model.size());
  for (std::size_t r = 0; r < model.size(); ++r) {
    if (r == query) continue;
    const double rnorm = model.norm(r);
    if (rnorm == 0.0) continue;
    if (admit && !admit(model.token(r))) continue;
    const auto v = model.vector(r);
    double dot = 0.0;
    for (std::size_t i = 0; i < dim; ++i) dot += static_cast<double>(q[i]) * v[i];
    const double sim = std::clamp(dot / (qnorm * rnorm), -1.0, 1.0);
    scored.push_back({sim, rank_key(sim), r});
  }

  auto better = [&](const Scored& a, const Scored& b) {
    if (a.key != b.key) return a.key > b.key;
    return model.token(a.row) < model.token(b.row);
  };
  const std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take),
                    scored.end(), better);

  std::vector<Neighbor> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.push_back({model.token(scored[i].row), scored[i].similarity});
  }
  return out;
}

}  // namespace

std::vector<Neighbor> nearest_neighbors(const EmbeddingModel& model,
                                        std::string_view token, std::size_t k,
                                        const TokenFilter& admit) {
  if (k == 0) throw InvalidArgument("nearest_neighbors requires k >= 1");
  auto row = model.index_of(token);
  if (!row) return {};
  return rank_rows(model, *row, k, admit);
}

NeighborCache::NeighborCache(const EmbeddingModel& model, std::size_t depth)
    : model_(&model), depth_(std::max<std::size_t>(depth, 1)) {}

std::vector<Neighbor> NeighborCache::query(std::string_view token,
                                           std::size_t k,
                                           const TokenFilter& admit) const {
  if (k == 0) throw InvalidArgument("nearest_neighbors requires k >= 1");
  auto row = model_->index_of(token);
  if (!row) return {};

  std::shared_ptr<const std::vector<Neighbor>> ranked;
  {
    std::shared_lock lock(mutex_);
    if (auto it = ranked_.find(*row); it != ranked_.end()) ranked = it->second;
  }
  if (!ranked) {
    auto fresh = std::make_shared<const std::vector<Neighbor>>(
        rank_rows(*model_, *row, depth_, {}));
    std::unique_lock lock(mutex_);
    ranked = ranked_.try_emplace(*row, std::move(fresh)).first->second;
  }

  // The admitted ranking is a subsequence of the unfiltered one, so the
  // cached prefix answers the query whenever it yields k admitted tokens or
  // covers the whole model.
  std::vector<Neighbor> out;
  for (const auto& n : *ranked) {
    if (admit && !admit(n.token)) continue;
    out.push_back(n);
    if (out.size() == k) return out;
  }
  if (ranked->size() < depth_) return out;
  return rank_rows(*model_, *row, k, admit);
}

}  // namespace wvenrich
