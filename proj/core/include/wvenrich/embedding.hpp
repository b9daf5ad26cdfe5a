#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wvenrich {

/// Continuous skip-gram with negative sampling. Defaults follow the
/// evaluation setup: d = 100, window 10, min_count 2, 10 epochs.
struct SkipgramParams {
  std::size_t dimension = 100;
  std::size_t window = 10;
  std::size_t min_count = 2;
  std::size_t epochs = 10;
  std::size_t negative_samples = 5;
  double initial_learning_rate = 0.025;
  std::uint64_t seed = 1;
  /// Worker threads. 1 is bit-reproducible; more trades determinism for
  /// speed (lock-free interleaved updates).
  std::size_t workers = 1;

  /// Throws InvalidArgument when a count is zero or the rate is not positive.
  void validate() const;
};

/// Dense vectors keyed by token, stored row-major in one buffer.
class EmbeddingModel {
 public:
  EmbeddingModel() = default;
  explicit EmbeddingModel(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return tokens_.size(); }
  bool contains(std::string_view token) const;
  std::optional<std::size_t> index_of(std::string_view token) const;
  const std::string& token(std::size_t row) const { return tokens_.at(row); }
  std::span<const std::string> tokens() const { return tokens_; }

  std::span<const float> vector(std::size_t row) const;
  /// Empty span when the token is absent.
  std::span<const float> vector(std::string_view token) const;

  /// Appends a token. Throws DimensionError on a length mismatch and
  /// InvalidArgument on a duplicate token.
  void add(std::string token, std::span<const float> values);

  /// Training settings; empty for models loaded from disk.
  const std::optional<SkipgramParams>& training_params() const {
    return params_;
  }
  void set_training_params(SkipgramParams p) { params_ = p; }

  /// Euclidean norm of row `row` (0 for an all-zero vector).
  double norm(std::size_t row) const { return norms_.at(row); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::size_t dimension_ = 0;
  std::vector<std::string> tokens_;
  std::vector<float> values_;
  std::vector<double> norms_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::optional<SkipgramParams> params_;
};

/// Trains skip-gram embeddings; each inner list is one sentence and context
/// windows never cross sentences. Tokens below min_count are dropped before
/// windowing. Throws InvalidArgument when no token survives min_count.
EmbeddingModel train_skipgram(std::span<const std::vector<std::string>> sentences,
                              const SkipgramParams& params);

/// word2vec text format: header "<count> <dimension>" then one row per
/// token, "token v1 ... vd", space separated.
EmbeddingModel read_word2vec_text(std::istream& in);
EmbeddingModel load_word2vec_text(const std::filesystem::path& path);
void write_word2vec_text(const EmbeddingModel& model, std::ostream& out);
void save_word2vec_text(const EmbeddingModel& model,
                        const std::filesystem::path& path);

/// dot(u, v) / (|u| |v|). Throws DimensionError on length mismatch and
/// InvalidArgument when either vector is all zero.
double cosine(std::span<const float> u, std::span<const float> v);

struct Neighbor {
  std::string token;
  double similarity;
  bool operator==(const Neighbor&) const = default;
};

using TokenFilter = std::function<bool(std::string_view)>;

/// The k admitted tokens most cosine-similar to `token`, excluding the token
/// itself, best first; ties (similarities within about 1e-12) go to the
/// lexicographically smaller token.
/// Returns an empty list when `token` is not in the model. An empty `admit`
/// admits every token. Throws InvalidArgument when k == 0.
std::vector<Neighbor> nearest_neighbors(const EmbeddingModel& model,
                                        std::string_view token, std::size_t k,
                                        const TokenFilter& admit = {});

/// Memoizes unfiltered neighbor rankings so repeated filtered queries (one
/// per rare token per cross-validation fold) avoid rescanning the model.
/// Results are identical to nearest_neighbors. Safe for concurrent use.
class NeighborCache {
 public:
  /// `depth` is how many unfiltered neighbors are kept per token; queries
  /// that cannot be answered from the cached prefix fall back to a full scan.
  explicit NeighborCache(const EmbeddingModel& model, std::size_t depth = 256);

  std::vector<Neighbor> query(std::string_view token, std::size_t k,
                              const TokenFilter& admit = {}) const;

  const EmbeddingModel& model() const { return *model_; }

 private:
  const EmbeddingModel* model_;
  std::size_t depth_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::size_t, std::shared_ptr<const std::vector<Neighbor>>>
      ranked_;
};

}  // namespace wvenrich
