#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace wvenrich {

/// Lowercased maximal runs of ASCII letters and digits, in input order.
/// Every other byte (punctuation, whitespace, non-ASCII) separates tokens.
std::vector<std::string> tokenize(std::string_view text);

/// A labelled text. `labels` keeps the order given in the source with
/// duplicates removed; the first entry is the primary label used for
/// stratification and per-class tallies.
struct Document {
  std::string id;
  std::string text;
  std::vector<std::string> tokens;
  std::vector<std::string> labels;

  /// Builds a document, tokenizing `text`. Throws InvalidArgument when
  /// `labels` is empty.
  static Document make(std::string id, std::string text,
                       std::vector<std::string> labels);

  const std::string& primary_label() const { return labels.front(); }
  bool has_label(std::string_view label) const;
};

enum class DatasetFormat { Records, ReutersSgml };

DatasetFormat parse_dataset_format(std::string_view name);
std::string_view to_string(DatasetFormat format);

/// Loads a dataset.
///
/// Records: one JSON object per line with string "id", string "text" and a
/// non-empty string array "labels". Blank lines are ignored. Malformed
/// records raise ParseError naming the 1-based line number.
///
/// ReutersSgml: `path` is a single .sgm file or a directory whose
/// reut2-*.sgm files are read in name order. Only articles with at least one
/// TOPICS label and a BODY element are returned.
///
/// Duplicate ids raise ParseError in both formats.
std::vector<Document> load_dataset(const std::filesystem::path& path,
                                   DatasetFormat format);

std::vector<Document> read_records(std::istream& in);
std::vector<Document> read_reuters_sgml(std::istream& in);

/// Token lists for embedding training. Records: the tokens of every record.
/// ReutersSgml: title plus body of every article, labelled or not.
std::vector<std::vector<std::string>> load_sentences(
    const std::filesystem::path& path, DatasetFormat format);
std::vector<std::vector<std::string>> read_reuters_sentences(std::istream& in);

/// Writes documents in the records format, one JSON object per line.
void write_records(std::span<const Document> docs, std::ostream& out);
void save_records(std::span<const Document> docs,
                  const std::filesystem::path& path);

/// Keeps documents with at most `max_tokens` tokens and no label in
/// `excluded_labels`. `max_tokens` must be >= 1.
std::vector<Document> filter_short_subset(
    std::span<const Document> docs, std::size_t max_tokens,
    const std::set<std::string, std::less<>>& excluded_labels);

/// Bijection between training tokens and indices 0..size()-1, with the
/// number of occurrences of each token in the training documents.
/// Indices follow lexicographic token order.
class Vocabulary {
 public:
  using Index = std::uint32_t;

  std::size_t size() const { return tokens_.size(); }
  std::optional<Index> index_of(std::string_view token) const;
  const std::string& token(Index index) const { return tokens_.at(index); }
  std::uint64_t train_freq(Index index) const { return freqs_.at(index); }
  /// Training frequency of `token`, 0 when out of vocabulary.
  std::uint64_t freq_of(std::string_view token) const;
  std::uint64_t total_count() const;
  std::span<const std::string> tokens() const { return tokens_; }

  friend Vocabulary build_vocabulary(std::span<const Document> training_docs);
  friend Vocabulary build_vocabulary(
      std::span<const Document> docs, std::span<const std::size_t> subset);

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  static Vocabulary from_counts(
      std::unordered_map<std::string, std::uint64_t, Hash, std::equal_to<>>
          counts);

  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> freqs_;
  std::unordered_map<std::string, Index, Hash, std::equal_to<>> index_;
};

/// Throws InvalidArgument when there are no documents.
Vocabulary build_vocabulary(std::span<const Document> training_docs);
/// Same, restricted to docs[subset[i]].
Vocabulary build_vocabulary(std::span<const Document> docs,
                            std::span<const std::size_t> subset);

/// Seeded repeated k-fold partition of a document list.
class FoldPlan {
 public:
  std::size_t repeats() const { return assignment_.size(); }
  std::size_t folds() const { return folds_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t document_count() const { return ids_.size(); }

  /// Fold of document `doc` (position in the list given to make_folds).
  std::size_t fold_of(std::size_t repeat, std::size_t doc) const {
    return assignment_.at(repeat).at(doc);
  }
  std::optional<std::size_t> fold_of(std::size_t repeat,
                                     std::string_view id) const;

  std::vector<std::size_t> test_indices(std::size_t repeat,
                                        std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t repeat,
                                         std::size_t fold) const;

  bool operator==(const FoldPlan&) const = default;

  friend FoldPlan make_folds(std::span<const Document> docs,
                             std::size_t repeats, std::size_t folds,
                             std::uint64_t seed);

 private:
  std::size_t folds_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<std::string> ids_;
  std::vector<std::vector<std::size_t>> assignment_;
};

/// Each repeat is an independent seeded partition into `folds` folds whose
/// sizes differ by at most one. Documents of a primary class with at least
/// `folds` members are spread evenly over the folds.
FoldPlan make_folds(std::span<const Document> docs, std::size_t repeats,
                    std::size_t folds, std::uint64_t seed);

}  // namespace wvenrich
