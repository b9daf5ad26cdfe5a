#include "wvenrich/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "wvenrich/error.hpp"
#include "wvenrich/rng.hpp"

namespace wvenrich {

namespace {

bool is_ascii_alnum(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z');
}

char ascii_lower(unsigned char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a')
                                : static_cast<char>(c);
}

std::vector<std::string> dedup_labels(std::vector<std::string> labels) {
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (auto& label : labels) {
    if (std::find(out.begin(), out.end(), label) == out.end()) {
      out.push_back(std::move(label));
    }
  }
  return out;
}

Document parse_record(const std::string& line, std::size_t line_no) {
  auto fail = [line_no](const std::string& what) -> ParseError {
    return ParseError("line " + std::to_string(line_no) + ": " + what);
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw fail("record is not an object");
  auto id = j.find("id");
  auto text = j.find("text");
  auto labels = j.find("labels");
  if (id == j.end() || !id->is_string()) throw fail("missing string field \"id\"");
  if (text == j.end() || !text->is_string())
    throw fail("missing string field \"text\"");
  if (labels == j.end() || !labels->is_array())
    throw fail("missing array field \"labels\"");
  std::vector<std::string> label_list;
  for (const auto& l : *labels) {
    if (!l.is_string()) throw fail("non-string entry in \"labels\"");
    label_list.push_back(l.get<std::string>());
  }
  if (label_list.empty()) throw fail("\"labels\" is empty");
  return Document::make(id->get<std::string>(), text->get<std::string>(),
                        std::move(label_list));
}

void check_unique_ids(std::span<const Document> docs) {
  std::unordered_set<std::string_view> seen;
  for (const auto& d : docs) {
    if (!seen.insert(d.id).second) {
      throw ParseError("duplicate document id \"" + d.id + "\"");
    }
  }
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_ascii_alnum(c)) {
      current.push_back(ascii_lower(c));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Document Document::make(std::string id, std::string text,
                        std::vector<std::string> labels) {
  if (labels.empty()) {
    throw InvalidArgument("document \"" + id + "\" has no labels");
  }
  Document d;
  d.id = std::move(id);
  d.tokens = tokenize(text);
  d.text = std::move(text);
  d.labels = dedup_labels(std::move(labels));
  return d;
}

bool Document::has_label(std::string_view label) const {
  return std::find(labels.begin(), labels.end(), label) != labels.end();
}

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "records") return DatasetFormat::Records;
  if (name == "reuters-sgml") return DatasetFormat::ReutersSgml;
  throw InvalidArgument("unknown dataset format \"" + std::string(name) +
                        "\" (expected records or reuters-sgml)");
}

std::string_view to_string(DatasetFormat format) {
  return format == DatasetFormat::Records ? "records" : "reuters-sgml";
}

std::vector<Document> read_records(std::istream& in) {
  std::vector<Document> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    docs.push_back(parse_record(line, line_no));
  }
  check_unique_ids(docs);
  return docs;
}

namespace {

std::vector<std::filesystem::path> reuters_files(
    const std::filesystem::path& path) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      const auto name = entry.path().filename().string();
      if (entry.is_regular_file() && name.starts_with("reut2-") &&
          entry.path().extension() == ".sgm") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
      throw Error("no reut2-*.sgm files in " + path.string());
    }
  } else {
    files.push_back(path);
  }
  return files;
}

}  // namespace

std::vector<Document> load_dataset(const std::filesystem::path& path,
                                   DatasetFormat format) {
  if (format == DatasetFormat::Records) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset " + path.string());
    return read_records(in);
  }

  std::vector<Document> docs;
  for (const auto& file : reuters_files(path)) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open " + file.string());
    auto part = read_reuters_sgml(in);
    docs.insert(docs.end(), std::make_move_iterator(part.begin()),
                std::make_move_iterator(part.end()));
  }
  check_unique_ids(docs);
  return docs;
}

std::vector<std::vector<std::string>> load_sentences(
    const std::filesystem::path& path, DatasetFormat format) {
  std::vector<std::vector<std::string>> out;
  if (format == DatasetFormat::Records) {
    for (auto& d : load_dataset(path, format)) out.push_back(std::move(d.tokens));
    return out;
  }
  for (const auto& file : reuters_files(path)) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("cannot open " + file.string());
    auto part = read_reuters_sentences(in);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

void write_records(std::span<const Document> docs, std::ostream& out) {
  for (const auto& d : docs) {
    nlohmann::json j;
    j["id"] = d.id;
    j["text"] = d.text;
    j["labels"] = d.labels;
    // Reuters text is not guaranteed to be valid UTF-8.
    out << j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace)
        << '\n';
  }
}

void save_records(std::span<const Document> docs,
                  const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_records(docs, out);
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<Document> filter_short_subset(
    std::span<const Document> docs, std::size_t max_tokens,
    const std::set<std::string, std::less<>>& excluded_labels) {
  if (max_tokens < 1) throw InvalidArgument("max_tokens must be >= 1");
  std::vector<Document> kept;
  for (const auto& d : docs) {
    if (d.tokens.size() > max_tokens) continue;
    bool excluded = std::any_of(
        d.labels.begin(), d.labels.end(),
        [&](const std::string& l) { return excluded_labels.contains(l); });
    if (!excluded) kept.push_back(d);
  }
  return kept;
}

// ---------------------------------------------------------------------------
// Vocabulary

std::optional<Vocabulary::Index> Vocabulary::index_of(
    std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t Vocabulary::freq_of(std::string_view token) const {
  auto it = index_.find(token);
  return it == index_.end() ? 0 : freqs_[it->second];
}

std::uint64_t Vocabulary::total_count() const {
  return std::accumulate(freqs_.begin(), freqs_.end(), std::uint64_t{0});
}

Vocabulary Vocabulary::from_counts(
    std::unordered_map<std::string, std::uint64_t, Hash, std::equal_to<>>
        counts) {
  Vocabulary v;
  v.tokens_.reserve(counts.size());
  for (auto& [token, n] : counts) v.tokens_.push_back(token);
  std::sort(v.tokens_.begin(), v.tokens_.end());
  v.freqs_.reserve(v.tokens_.size());
  v.index_.reserve(v.tokens_.size());
  for (Index i = 0; i < v.tokens_.size(); ++i) {
    v.freqs_.push_back(counts.find(v.tokens_[i])->second);
    v.index_.emplace(v.tokens_[i], i);
  }
  return v;
}

Vocabulary build_vocabulary(std::span<const Document> training_docs) {
  if (training_docs.empty()) {
    throw InvalidArgument("cannot build a vocabulary from an empty corpus");
  }
  std::unordered_map<std::string, std::uint64_t, Vocabulary::Hash,
                     std::equal_to<>>
      counts;
  for (const auto& d : training_docs) {
    for (const auto& t : d.tokens) ++counts[t];
  }
  return Vocabulary::from_counts(std::move(counts));
}

Vocabulary build_vocabulary(std::span<const Document> docs,
                            std::span<const std::size_t> subset) {
  if (subset.empty()) {
    throw InvalidArgument("cannot build a vocabulary from an empty corpus");
  }
  std::unordered_map<std::string, std::uint64_t, Vocabulary::Hash,
                     std::equal_to<>>
      counts;
  for (std::size_t i : subset) {
    for (const auto& t : docs[i].tokens) ++counts[t];
  }
  return Vocabulary::from_counts(std::move(counts));
}

// ---------------------------------------------------------------------------
// Folds

std::optional<std::size_t> FoldPlan::fold_of(std::size_t repeat,
                                             std::string_view id) const {
  auto it = std::find(ids_.begin(), ids_.end(), id);
  if (it == ids_.end()) return std::nullopt;
  return fold_of(repeat, static_cast<std::size_t>(it - ids_.begin()));
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t repeat,
                                                std::size_t fold) const {
  const auto& a = assignment_.at(repeat);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t repeat,
                                                 std::size_t fold) const {
  const auto& a = assignment_.at(repeat);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != fold) out.push_back(i);
  }
  return out;
}

FoldPlan make_folds(std::span<const Document> docs, std::size_t repeats,
                    std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("folds must be >= 2");
  if (repeats < 1) throw InvalidArgument("repeats must be >= 1");
  if (docs.size() < folds) {
    throw InvalidArgument("cannot split " + std::to_string(docs.size()) +
                          " documents into " + std::to_string(folds) +
                          " folds");
  }

  std::map<std::string_view, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    by_class[docs[i].primary_label()].push_back(i);
  }

  FoldPlan plan;
  plan.folds_ = folds;
  plan.seed_ = seed;
  plan.ids_.reserve(docs.size());
  for (const auto& d : docs) plan.ids_.push_back(d.id);

  for (std::size_t r = 0; r < repeats; ++r) {
    Rng rng(derive_seed(seed, r));

    // Large classes are laid out contiguously so round-robin dealing spreads
    // each over all folds; small classes are pooled at the end.
    std::vector<std::size_t> order;
    order.reserve(docs.size());
    std::vector<std::size_t> pooled;
    for (auto& [label, members] : by_class) {
      std::vector<std::size_t> shuffled = members;
      rng.shuffle(std::span(shuffled));
      auto& dst = shuffled.size() >= folds ? order : pooled;
      dst.insert(dst.end(), shuffled.begin(), shuffled.end());
    }
    rng.shuffle(std::span(pooled));
    order.insert(order.end(), pooled.begin(), pooled.end());

    // Random fold relabelling so the folds that receive one extra document
    // vary between repeats.
    std::vector<std::size_t> relabel(folds);
    std::iota(relabel.begin(), relabel.end(), std::size_t{0});
    rng.shuffle(std::span(relabel));

    std::vector<std::size_t> assignment(docs.size());
    for (std::size_t p = 0; p < order.size(); ++p) {
      assignment[order[p]] = relabel[p % folds];
    }
    plan.assignment_.push_back(std::move(assignment));
  }
  return plan;
}

}  // namespace wvenrich
