#include "wvenrich/embedding.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "wvenrich/error.hpp"

namespace wvenrich {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

double squared_norm(std::span<const float> v) {
  double s = 0.0;
  for (float x : v) s += static_cast<double>(x) * x;
  return s;
}

}  // namespace

void SkipgramParams::validate() const {
  if (dimension < 1 || window < 1 || min_count < 1 || epochs < 1 ||
      negative_samples < 1 || workers < 1) {
    throw InvalidArgument("skip-gram counts must all be >= 1");
  }
  if (!(initial_learning_rate > 0.0)) {
    throw InvalidArgument("skip-gram learning rate must be > 0");
  }
}

bool EmbeddingModel::contains(std::string_view token) const {
  return index_.find(token) != index_.end();
}

std::optional<std::size_t> EmbeddingModel::index_of(
    std::string_view token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const float> EmbeddingModel::vector(std::size_t row) const {
  if (row >= tokens_.size()) throw InvalidArgument("embedding row out of range");
  return std::span<const float>(values_).subspan(row * dimension_, dimension_);
}

std::span<const float> EmbeddingModel::vector(std::string_view token) const {
  auto row = index_of(token);
  if (!row) return {};
  return vector(*row);
}

void EmbeddingModel::add(std::string token, std::span<const float> values) {
  if (values.size() != dimension_) {
    throw DimensionError("vector for \"" + token + "\" has " +
                         std::to_string(values.size()) +
                         " components, expected " + std::to_string(dimension_));
  }
  if (contains(token)) {
    throw InvalidArgument("duplicate embedding token \"" + token + "\"");
  }
  index_.emplace(token, tokens_.size());
  tokens_.push_back(std::move(token));
  values_.insert(values_.end(), values.begin(), values.end());
  norms_.push_back(std::sqrt(squared_norm(values)));
}

EmbeddingModel read_word2vec_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("missing word2vec header");
  auto header = split_fields(line);
  std::size_t count = 0;
  std::size_t dim = 0;
  if (header.size() != 2 || !parse_number(header[0], count) ||
      !parse_number(header[1], dim) || dim == 0) {
    throw ParseError("malformed word2vec header \"" + line + "\"");
  }

  EmbeddingModel model(dim);
  std::vector<float> values(dim);
  std::size_t rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = split_fields(line);
    if (fields.empty()) continue;
    ++rows;
    if (rows > count) {
      throw ParseError("word2vec file has more rows than the header count " +
                       std::to_string(count));
    }
    if (fields.size() != dim + 1) {
      throw ParseError("row " + std::to_string(rows) + " (line " +
                       std::to_string(line_no) + "): expected " +
                       std::to_string(dim) + " components, found " +
                       std::to_string(fields.size() - 1));
    }
    for (std::size_t i = 0; i < dim; ++i) {
      if (!parse_number(fields[i + 1], values[i])) {
        throw ParseError("row " + std::to_string(rows) + " (line " +
                         std::to_string(line_no) + "): bad component \"" +
                         std::string(fields[i + 1]) + "\"");
      }
    }
    try {
      model.add(std::string(fields[0]), values);
    } catch (const InvalidArgument& e) {
      throw ParseError("row " + std::to_string(rows) + ": " + e.what());
    }
  }
  if (rows != count) {
    throw ParseError("word2vec header declares " + std::to_string(count) +
                     " rows, found " + std::to_string(rows));
  }
  return model;
}

EmbeddingModel load_word2vec_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embedding file " + path.string());
  return read_word2vec_text(in);
}

void write_word2vec_text(const EmbeddingModel& model, std::ostream& out) {
  out << model.size() << ' ' << model.dimension() << '\n';
  char buf[64];
  for (std::size_t r = 0; r < model.size(); ++r) {
    out << model.token(r);
    for (float x : model.vector(r)) {
      // Shortest representation that parses back to the same float.
      auto res = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf));
    }
    out << '\n';
  }
}

void save_word2vec_text(const EmbeddingModel& model,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_word2vec_text(model, out);
  if (!out) throw Error("write failed for " + path.string());
}

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size()) {
    throw DimensionError("cosine of vectors with lengths " +
                         std::to_string(u.size()) + " and " +
                         std::to_string(v.size()));
  }
  double dot = 0.0;
  double uu = 0.0;
  double vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<double>(u[i]) * v[i];
    uu += static_cast<double>(u[i]) * u[i];
    vv += static_cast<double>(v[i]) * v[i];
  }
  if (uu == 0.0 || vv == 0.0) {
    throw InvalidArgument("cosine is undefined for a zero vector");
  }
  double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace wvenrich
