#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wvenrich/bow.hpp"
#include "wvenrich/corpus.hpp"
#include "wvenrich/embedding.hpp"

namespace wvenrich {

/// Rare-word threshold `n` and neighbor count `k`. Either one at zero turns
/// enrichment off.
struct EnrichmentConfig {
  std::uint64_t n = 3;
  std::size_t k = 3;

  bool enabled() const { return n > 0 && k > 0; }
  bool operator==(const EnrichmentConfig&) const = default;
};

/// Distinct tokens whose training frequency is strictly below `n`, in order
/// of first occurrence. Out-of-vocabulary tokens have frequency 0.
std::vector<std::string> find_rare_tokens(std::span<const std::string> tokens,
                                          const Vocabulary& vocab,
                                          std::uint64_t n);

/// Count-1 entries for the up-to-k nearest embedding neighbors of `token`
/// that occur in the training vocabulary. Empty when the token has no
/// embedding. Throws InvalidArgument when k == 0.
SparseVector neighbor_vector(std::string_view token,
                             const EmbeddingModel& model,
                             const Vocabulary& vocab, std::size_t k);

/// vectorize(tokens) plus one neighbor_vector per distinct rare token.
SparseVector enrich(std::span<const std::string> tokens,
                    const Vocabulary& vocab, const EmbeddingModel& model,
                    const EnrichmentConfig& cfg);

/// Enrichment bound to one training vocabulary, sharing a neighbor cache
/// across calls. Used by the evaluation harness, where the same rare tokens
/// recur across folds.
class Enricher {
 public:
  Enricher(const Vocabulary& vocab, const NeighborCache& neighbors,
           EnrichmentConfig cfg);

  SparseVector neighbor_vector(std::string_view token) const;
  SparseVector operator()(std::span<const std::string> tokens) const;

  const EnrichmentConfig& config() const { return cfg_; }

 private:
  const Vocabulary* vocab_;
  const NeighborCache* neighbors_;
  EnrichmentConfig cfg_;
};

}  // namespace wvenrich
