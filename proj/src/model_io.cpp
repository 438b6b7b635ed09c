#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "argmine/error.hpp"
#include "argmine/labeler.hpp"

namespace argmine {
namespace {

using json = nlohmann::json;

json scores_json(const LabelScores& s) {
  json a = json::array();
  for (double x : s) a.push_back(x);
  return a;
}

LabelScores scores_from(const json& a, const std::string& where) {
  if (!a.is_array() || a.size() != kNumBioLabels) {
    throw ParseError("model: " + where + " must be an array of " + std::to_string(kNumBioLabels) + " numbers");
  }
  LabelScores s{};
  for (std::size_t y = 0; y < kNumBioLabels; ++y) {
    if (!a[y].is_number()) throw ParseError("model: " + where + " holds a non-number");
    s[y] = a[y].get<double>();
    if (!std::isfinite(s[y])) throw ParseError("model: " + where + " holds a non-finite weight");
  }
  return s;
}

const json& at(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(std::string("model: missing field '") + key + "'");
  return obj.at(key);
}

}  // namespace

std::string model_to_json(const LinearChainModel& model) {
  json root;
  root["version"] = kModelFormatVersion;
  json order = json::array();
  for (std::size_t y = 0; y < kNumBioLabels; ++y) order.push_back(std::string(to_string(bio_from_index(y))));
  root["label_order"] = order;
  const auto& fc = model.feature_config;
  root["feature_config"] = {{"sets", fc.sets.to_string()},
                            {"window", fc.window},
                            {"min_count", fc.min_count},
                            {"lowercase_lookup", fc.lowercase_lookup}};
  json em = json::object();
  for (const auto& [k, w] : model.emission) {
    const auto base = static_cast<std::uint32_t>(k >> 8);
    const int offset = static_cast<int>(k & 0xFF) - 128;
    em[position_prefix(offset) + model.space.name(base)] = scores_json(w);
  }
  root["emission_weights"] = std::move(em);
  json tr = json::object();
  for (std::size_t p = 0; p < kNumBioLabels; ++p) tr[std::string(to_string(bio_from_index(p)))] = scores_json(model.transition[p]);
  root["transition_weights"] = std::move(tr);
  const auto& md = model.metadata;
  root["training_metadata"] = {{"epochs", md.epochs},
                               {"seed", md.seed},
                               {"shuffle", md.shuffle},
                               {"averaging", md.averaging},
                               {"documents", md.documents},
                               {"errors_per_epoch", md.errors_per_epoch},
                               {"embedding_dimension", md.embedding_dimension},
                               {"topics", md.topics},
                               {"topic_model_file", md.topic_model_file}};
  return root.dump(1, '\t') + "\n";
}

LinearChainModel model_from_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model: malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("model: top level must be an object");
  const auto& version = at(root, "version");
  if (!version.is_number_integer() || version.get<int>() != kModelFormatVersion) {
    throw ConfigError("model format version " + version.dump() + " is not supported (expected " +
                      std::to_string(kModelFormatVersion) + ")");
  }
  try {
    const auto& order = at(root, "label_order");
    if (!order.is_array() || order.size() != kNumBioLabels) throw ParseError("model: label_order must list 11 labels");
    for (std::size_t y = 0; y < kNumBioLabels; ++y) {
      if (order[y] != std::string(to_string(bio_from_index(y)))) {
        throw ParseError("model: unexpected label order at position " + std::to_string(y));
      }
    }
    LinearChainModel model;
    const auto& fc = at(root, "feature_config");
    model.feature_config.sets = FeatureSets::parse(at(fc, "sets").get<std::string>());
    model.feature_config.window = at(fc, "window").get<int>();
    model.feature_config.min_count = at(fc, "min_count").get<std::size_t>();
    model.feature_config.lowercase_lookup = at(fc, "lowercase_lookup").get<bool>();

    const auto& em = at(root, "emission_weights");
    if (!em.is_object()) throw ParseError("model: emission_weights must be an object");
    for (const auto& [name, w] : em.items()) {
      const auto [offset, base] = split_feature_name(name);
      if (offset < -127 || offset > 127) throw ParseError("model: window offset out of range in '" + name + "'");
      const auto id = model.space.intern(base);
      model.emission[LinearChainModel::key(id, offset)] = scores_from(w, "emission weight '" + name + "'");
    }
    const auto& tr = at(root, "transition_weights");
    for (std::size_t p = 0; p < kNumBioLabels; ++p) {
      const std::string label(to_string(bio_from_index(p)));
      model.transition[p] = scores_from(at(tr, label.c_str()), "transition row " + label);
    }
    const auto& md = at(root, "training_metadata");
    model.metadata.epochs = at(md, "epochs").get<std::size_t>();
    model.metadata.seed = at(md, "seed").get<std::uint64_t>();
    model.metadata.shuffle = at(md, "shuffle").get<bool>();
    model.metadata.averaging = at(md, "averaging").get<bool>();
    model.metadata.documents = at(md, "documents").get<std::size_t>();
    model.metadata.errors_per_epoch = at(md, "errors_per_epoch").get<std::vector<std::size_t>>();
    model.metadata.embedding_dimension = at(md, "embedding_dimension").get<std::size_t>();
    model.metadata.topics = at(md, "topics").get<std::size_t>();
    model.metadata.topic_model_file = at(md, "topic_model_file").get<std::string>();
    return model;
  } catch (const json::exception& e) {
    throw ParseError(std::string("model: ") + e.what());
  }
}

void save_model(const LinearChainModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write model file " + path.string());
  out << model_to_json(model);
  if (!out) throw IoError("failed writing model file " + path.string());
}

LinearChainModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read model file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace argmine
