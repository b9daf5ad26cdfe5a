#include <fstream>

#include <nlohmann/json.hpp>

#include "wvenrich/classify.hpp"
#include "wvenrich/error.hpp"

namespace wvenrich {

namespace {

constexpr const char* kFormat = "wvenrich-classifier";
constexpr int kVersion = 1;

using nlohmann::json;

json to_json(const MNBModel& m) {
  json j;
  j["type"] = "mnb";
  j["dimension"] = m.dimension();
  j["classes"] = std::vector<std::string>(m.classes().begin(), m.classes().end());
  j["log_prior"] = std::vector<double>(m.log_priors().begin(), m.log_priors().end());
  json rows = json::array();
  for (std::size_t c = 0; c < m.classes().size(); ++c) {
    auto row = m.log_conds().subspan(c * m.dimension(), m.dimension());
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["log_cond"] = std::move(rows);
  return j;
}

json to_json(const SVMModel& m) {
  json j;
  j["type"] = "svm";
  j["dimension"] = m.dimension();
  j["C"] = m.C();
  j["classes"] = std::vector<std::string>(m.classes().begin(), m.classes().end());
  json pairs = json::array();
  for (const auto& p : m.pairs()) {
    pairs.push_back({{"positive", p.positive},
                     {"negative", p.negative},
                     {"bias", p.bias},
                     {"indices", p.indices},
                     {"weights", p.weights}});
  }
  j["pairs"] = std::move(pairs);
  return j;
}

MNBModel mnb_from_json(const json& j) {
  const auto dim = j.at("dimension").get<std::size_t>();
  auto classes = j.at("classes").get<std::vector<std::string>>();
  auto prior = j.at("log_prior").get<std::vector<double>>();
  std::vector<double> cond;
  cond.reserve(classes.size() * dim);
  for (const auto& row : j.at("log_cond")) {
    auto values = row.get<std::vector<double>>();
    if (values.size() != dim) {
      throw ParseError("MNB conditional row has wrong length");
    }
    cond.insert(cond.end(), values.begin(), values.end());
  }
  return MNBModel(std::move(classes), std::move(prior), std::move(cond), dim);
}

SVMModel svm_from_json(const json& j) {
  std::vector<PairwiseSvm> pairs;
  for (const auto& p : j.at("pairs")) {
    PairwiseSvm pair;
    pair.positive = p.at("positive").get<std::string>();
    pair.negative = p.at("negative").get<std::string>();
    pair.bias = p.at("bias").get<double>();
    pair.indices = p.at("indices").get<std::vector<SparseVector::Index>>();
    pair.weights = p.at("weights").get<std::vector<double>>();
    pairs.push_back(std::move(pair));
  }
  return SVMModel(j.at("classes").get<std::vector<std::string>>(),
                  std::move(pairs), j.at("C").get<double>(),
                  j.at("dimension").get<std::size_t>());
}

}  // namespace

void write_model(const ClassifierModel& model, std::ostream& out) {
  json j = std::visit([](const auto& m) { return to_json(m); }, model);
  j["format"] = kFormat;
  j["version"] = kVersion;
  out << j.dump() << '\n';
}

ClassifierModel read_model(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
    if (j.value("format", "") != kFormat) {
      throw ParseError("not a wvenrich classifier file");
    }
    if (j.value("version", 0) != kVersion) {
      throw ParseError("unsupported classifier file version " +
                       std::to_string(j.value("version", 0)));
    }
    const auto type = j.at("type").get<std::string>();
    if (type == "mnb") return mnb_from_json(j);
    if (type == "svm") return svm_from_json(j);
    throw ParseError("unknown classifier type \"" + type + "\"");
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed classifier file: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("inconsistent classifier file: ") + e.what());
  }
}

void save_model(const ClassifierModel& model,
                const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_model(model, out);
  if (!out) throw Error("write failed for " + path.string());
}

ClassifierModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return read_model(in);
}

}  // namespace wvenrich
