#include "wvenrich/bow.hpp"

#include <algorithm>
#include <numeric>

#include "wvenrich/error.hpp"

namespace wvenrich {

SparseVector SparseVector::from_entries(std::size_t dimension,
                                        std::vector<Entry> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.index < b.index; });
  SparseVector v(dimension);
  for (const auto& e : entries) {
    if (e.index >= dimension) {
      throw DimensionError("index " + std::to_string(e.index) +
                           " out of range for dimension " +
                           std::to_string(dimension));
    }
    if (e.count == 0) continue;
    if (!v.entries_.empty() && v.entries_.back().index == e.index) {
      v.entries_.back().count += e.count;
    } else {
      v.entries_.push_back(e);
    }
  }
  return v;
}

SparseVector::Count SparseVector::operator[](Index index) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), index,
      [](const Entry& e, Index i) { return e.index < i; });
  return (it != entries_.end() && it->index == index) ? it->count : 0;
}

std::uint64_t SparseVector::mass() const {
  return std::accumulate(
      entries_.begin(), entries_.end(), std::uint64_t{0},
      [](std::uint64_t s, const Entry& e) { return s + e.count; });
}

SparseVector vectorize(std::span<const std::string> tokens,
                       const Vocabulary& vocab) {
  std::vector<SparseVector::Entry> entries;
  entries.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (auto idx = vocab.index_of(t)) entries.push_back({*idx, 1});
  }
  return SparseVector::from_entries(vocab.size(), std::move(entries));
}

SparseVector add(const SparseVector& a, const SparseVector& b) {
  if (a.dimension() != b.dimension()) {
    throw DimensionError("cannot add vectors of dimension " +
                         std::to_string(a.dimension()) + " and " +
                         std::to_string(b.dimension()));
  }
  SparseVector out(a.dimension());
  auto& dst = out.entries_;
  dst.reserve(a.entries_.size() + b.entries_.size());
  auto i = a.entries_.begin();
  auto j = b.entries_.begin();
  while (i != a.entries_.end() || j != b.entries_.end()) {
    if (j == b.entries_.end() || (i != a.entries_.end() && i->index < j->index)) {
      dst.push_back(*i++);
    } else if (i == a.entries_.end() || j->index < i->index) {
      dst.push_back(*j++);
    } else {
      dst.push_back({i->index, i->count + j->count});
      ++i;
      ++j;
    }
  }
  return out;
}

std::string to_string(const SparseVector& v) {
  std::string s = "{";
  bool first = true;
  for (const auto& e : v.entries()) {
    if (!first) s += ", ";
    first = false;
    s += std::to_string(e.index) + ":" + std::to_string(e.count);
  }
  return s + "}";
}

}  // namespace wvenrich
