#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wvenrich/corpus.hpp"

namespace wvenrich {

/// Term-frequency vector over a vocabulary. Entries are kept sorted by index
/// and never hold a zero count.
class SparseVector {
 public:
  using Index = Vocabulary::Index;
  using Count = std::uint32_t;
  struct Entry {
    Index index;
    Count count;
    bool operator==(const Entry&) const = default;
  };

  SparseVector() = default;
  explicit SparseVector(std::size_t dimension) : dimension_(dimension) {}

  /// Builds from arbitrary (index, count) pairs: duplicates are summed and
  /// zero counts dropped. Throws DimensionError for an index >= dimension.
  static SparseVector from_entries(std::size_t dimension,
                                   std::vector<Entry> entries);

  std::size_t dimension() const { return dimension_; }
  std::span<const Entry> entries() const { return entries_; }
  Count operator[](Index index) const;
  bool empty() const { return entries_.empty(); }

  /// Sum of all counts.
  std::uint64_t mass() const;

  bool operator==(const SparseVector&) const = default;

 private:
  std::size_t dimension_ = 0;
  std::vector<Entry> entries_;

  friend SparseVector add(const SparseVector& a, const SparseVector& b);
};

/// Counts in-vocabulary tokens; out-of-vocabulary tokens contribute nothing.
SparseVector vectorize(std::span<const std::string> tokens,
                       const Vocabulary& vocab);

/// Entrywise sum. Throws DimensionError when dimensions differ.
SparseVector add(const SparseVector& a, const SparseVector& b);

inline std::size_t nonzero_count(const SparseVector& v) {
  return v.entries().size();
}

std::string to_string(const SparseVector& v);

}  // namespace wvenrich
