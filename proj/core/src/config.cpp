#include <fstream>

#include <nlohmann/json.hpp>

#include "wvenrich/error.hpp"
#include "wvenrich/harness.hpp"

namespace wvenrich {

void apply_config(const nlohmann::json& j, ExperimentConfig& cfg) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "dataset") {
        cfg.dataset = value.get<std::string>();
      } else if (key == "format") {
        cfg.format = parse_dataset_format(value.get<std::string>());
      } else if (key == "classifier") {
        cfg.classifier = parse_classifier_kind(value.get<std::string>());
      } else if (key == "embedding") {
        cfg.embedding_path = value.get<std::string>();
        cfg.embedding_source = EmbeddingSource::Load;
      } else if (key == "train_domain") {
        if (value.get<bool>()) cfg.embedding_source = EmbeddingSource::TrainDomain;
      } else if (key == "dim") {
        cfg.skipgram.dimension = value.get<std::size_t>();
      } else if (key == "window") {
        cfg.skipgram.window = value.get<std::size_t>();
      } else if (key == "min_count") {
        cfg.skipgram.min_count = value.get<std::size_t>();
      } else if (key == "epochs") {
        cfg.skipgram.epochs = value.get<std::size_t>();
      } else if (key == "negative") {
        cfg.skipgram.negative_samples = value.get<std::size_t>();
      } else if (key == "learning_rate") {
        cfg.skipgram.initial_learning_rate = value.get<double>();
      } else if (key == "workers") {
        cfg.skipgram.workers = value.get<std::size_t>();
      } else if (key == "n") {
        cfg.enrichment.n = value.get<std::uint64_t>();
      } else if (key == "k") {
        cfg.enrichment.k = value.get<std::size_t>();
      } else if (key == "n_range") {
        cfg.n_range = value.get<std::vector<std::uint64_t>>();
      } else if (key == "k_range") {
        cfg.k_range = value.get<std::vector<std::size_t>>();
      } else if (key == "repeats") {
        cfg.repeats = value.get<std::size_t>();
      } else if (key == "folds") {
        cfg.folds = value.get<std::size_t>();
      } else if (key == "seed") {
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "top_k") {
        cfg.top_k = value.get<std::size_t>();
      } else if (key == "svm_c") {
        cfg.svm.C = value.get<double>();
      } else if (key == "svm_tolerance") {
        cfg.svm.tolerance = value.get<double>();
      } else if (key == "threads") {
        cfg.threads = value.get<std::size_t>();
      } else {
        throw ParseError("unknown config key \"" + key + "\"");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad config value: ") + e.what());
  }
}

void apply_config_file(const std::filesystem::path& path,
                       ExperimentConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("config " + path.string() + ": " + e.what());
  }
  apply_config(j, cfg);
}

}  // namespace wvenrich
