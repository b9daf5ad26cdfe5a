#include "wvenrich/enrichment.hpp"

#include <algorithm>

#include "wvenrich/error.hpp"

namespace wvenrich {

namespace {

SparseVector to_vector(const std::vector<Neighbor>& neighbors,
                       const Vocabulary& vocab) {
  std::vector<SparseVector::Entry> entries;
  entries.reserve(neighbors.size());
  for (const auto& n : neighbors) {
    entries.push_back({*vocab.index_of(n.token), 1});
  }
  return SparseVector::from_entries(vocab.size(), std::move(entries));
}

TokenFilter in_training_data(const Vocabulary& vocab) {
  return [&vocab](std::string_view t) { return vocab.freq_of(t) > 0; };
}

template <typename NeighborFn>
SparseVector enrich_with(std::span<const std::string> tokens,
                         const Vocabulary& vocab, const EnrichmentConfig& cfg,
                         NeighborFn&& neighbor_fn) {
  SparseVector out = vectorize(tokens, vocab);
  if (!cfg.enabled()) return out;
  for (const auto& rare : find_rare_tokens(tokens, vocab, cfg.n)) {
    out = add(out, neighbor_fn(rare));
  }
  return out;
}

}  // namespace

std::vector<std::string> find_rare_tokens(std::span<const std::string> tokens,
                                          const Vocabulary& vocab,
                                          std::uint64_t n) {
  std::vector<std::string> rare;
  if (n == 0) return rare;
  for (const auto& t : tokens) {
    if (vocab.freq_of(t) < n &&
        std::find(rare.begin(), rare.end(), t) == rare.end()) {
      rare.push_back(t);
    }
  }
  return rare;
}

SparseVector neighbor_vector(std::string_view token,
                             const EmbeddingModel& model,
                             const Vocabulary& vocab, std::size_t k) {
  if (k == 0) throw InvalidArgument("neighbor_vector requires k >= 1");
  return to_vector(nearest_neighbors(model, token, k, in_training_data(vocab)),
                   vocab);
}

SparseVector enrich(std::span<const std::string> tokens,
                    const Vocabulary& vocab, const EmbeddingModel& model,
                    const EnrichmentConfig& cfg) {
  return enrich_with(tokens, vocab, cfg, [&](const std::string& t) {
    return neighbor_vector(t, model, vocab, cfg.k);
  });
}

Enricher::Enricher(const Vocabulary& vocab, const NeighborCache& neighbors,
                   EnrichmentConfig cfg)
    : vocab_(&vocab), neighbors_(&neighbors), cfg_(cfg) {}

SparseVector Enricher::neighbor_vector(std::string_view token) const {
  if (cfg_.k == 0) throw InvalidArgument("neighbor_vector requires k >= 1");
  return to_vector(neighbors_->query(token, cfg_.k, in_training_data(*vocab_)),
                   *vocab_);
}

SparseVector Enricher::operator()(std::span<const std::string> tokens) const {
  return enrich_with(tokens, *vocab_, cfg_, [&](const std::string& t) {
    return neighbor_vector(t);
  });
}

}  // namespace wvenrich
