#include <fstream>
#include <sstream>

#include <json.hpp>

#include "a11yrev/learners.hpp"

namespace a11yrev {

namespace {

using json = nlohmann::ordered_json;

json tree_to_json(const Tree& t) {
  return json{{"feature", t.feature},
              {"threshold", t.threshold},
              {"left", t.left},
              {"right", t.right},
              {"value", t.value}};
}

Tree tree_from_json(const nlohmann::json& j) {
  Tree t;
  j.at("feature").get_to(t.feature);
  j.at("threshold").get_to(t.threshold);
  j.at("left").get_to(t.left);
  j.at("right").get_to(t.right);
  j.at("value").get_to(t.value);
  return t;
}

json spec_to_json(const LearnerSpec& spec) {
  json hp = json::object();
  for (const auto& [name, value] : spec.hyperparameters) hp[name] = value;
  return json{{"algorithm", std::string(to_string(spec.algorithm))},
              {"seed", spec.seed},
              {"hyperparameters", std::move(hp)}};
}

LearnerSpec spec_from_json(const nlohmann::json& j) {
  LearnerSpec spec;
  spec.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
  spec.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& [name, value] : j.at("hyperparameters").items()) {
    spec.hyperparameters[name] = value.get<double>();
  }
  return spec;
}

}  // namespace

std::string serialize_model(const TrainedModel& model) {
  json params = json::object();
  params["features"] = model.features();
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, LinearParams>) {
          params["weights"] = p.weights;
          params["bias"] = p.bias;
        } else if constexpr (std::is_same_v<T, ForestParams>) {
          auto trees = json::array();
          for (const auto& t : p.trees) trees.push_back(tree_to_json(t));
          params["trees"] = std::move(trees);
        } else if constexpr (std::is_same_v<T, BoostedParams>) {
          params["base_score"] = p.base_score;
          auto trees = json::array();
          for (const auto& t : p.trees) trees.push_back(tree_to_json(t));
          params["trees"] = std::move(trees);
          params["importance"] = p.importance;
        } else {
          params["hidden"] = p.hidden;
          params["hidden_weights"] = p.hidden_weights;
          params["hidden_bias"] = p.hidden_bias;
          params["output_weights"] = p.output_weights;
          params["output_bias"] = p.output_bias;
        }
      },
      model.parameters());

  json doc;
  doc["format_version"] = kModelFormatVersion;
  doc["algorithm"] = std::string(to_string(model.algorithm()));
  doc["dimension"] = model.dimension();
  doc["threshold"] = model.threshold();
  doc["spec"] = spec_to_json(model.spec());
  if (const auto& f = model.featurizer()) {
    doc["featurizer"] = json{{"bits", f->config.bits},
                             {"signed", f->config.signed_hash},
                             {"max_n", f->config.max_n},
                             {"select_k", f->config.select_k},
                             {"stop_words", f->stop_words}};
  }
  doc["parameters"] = std::move(params);
  return doc.dump();
}

TrainedModel deserialize_model(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelFormatError(ModelFormatError::Kind::corrupt,
                           std::string("corrupt model file: ") + e.what());
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelFormatError(ModelFormatError::Kind::version,
                             "unsupported model format_version " + std::to_string(version) +
                                 " (this build reads version " +
                                 std::to_string(kModelFormatVersion) + ")");
    }
    const auto spec = spec_from_json(doc.at("spec"));
    if (doc.at("algorithm").get<std::string>() != to_string(spec.algorithm)) {
      throw ModelFormatError(ModelFormatError::Kind::corrupt, "corrupt model file: algorithm mismatch");
    }
    const auto& p = doc.at("parameters");
    auto features = p.at("features").get<std::vector<std::uint32_t>>();
    ModelParameters params;
    switch (spec.algorithm) {
      case Algorithm::logreg:
      case Algorithm::linear_svm:
      case Algorithm::avg_perceptron:
      case Algorithm::bayes_point: {
        LinearParams lp;
        p.at("weights").get_to(lp.weights);
        lp.bias = p.at("bias").get<double>();
        params = std::move(lp);
        break;
      }
      case Algorithm::decision_forest: {
        ForestParams fp;
        for (const auto& t : p.at("trees")) fp.trees.push_back(tree_from_json(t));
        params = std::move(fp);
        break;
      }
      case Algorithm::boosted_trees: {
        BoostedParams bp;
        bp.base_score = p.at("base_score").get<double>();
        for (const auto& t : p.at("trees")) bp.trees.push_back(tree_from_json(t));
        p.at("importance").get_to(bp.importance);
        params = std::move(bp);
        break;
      }
      case Algorithm::neural_net: {
        NetworkParams np;
        np.hidden = p.at("hidden").get<std::size_t>();
        p.at("hidden_weights").get_to(np.hidden_weights);
        p.at("hidden_bias").get_to(np.hidden_bias);
        p.at("output_weights").get_to(np.output_weights);
        np.output_bias = p.at("output_bias").get<double>();
        params = std::move(np);
        break;
      }
    }
    TrainedModel model(spec, doc.at("dimension").get<std::uint32_t>(), std::move(features),
                       std::move(params), doc.at("threshold").get<double>());
    if (doc.contains("featurizer")) {
      const auto& f = doc.at("featurizer");
      ModelFeaturizer mf;
      mf.config.bits = f.at("bits").get<int>();
      mf.config.signed_hash = f.at("signed").get<bool>();
      mf.config.max_n = f.at("max_n").get<int>();
      mf.config.select_k = f.at("select_k").get<std::size_t>();
      f.at("stop_words").get_to(mf.stop_words);
      mf.config.validate();
      model = model.with_featurizer(std::move(mf));
    }
    return model;
  } catch (const ModelFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelFormatError(ModelFormatError::Kind::corrupt,
                           std::string("corrupt model file: ") + e.what());
  }
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LearnerError("cannot write model file '" + path.string() + "'");
  out << serialize_model(model) << '\n';
  if (!out) throw LearnerError("failed writing model file '" + path.string() + "'");
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LearnerError("cannot open model file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace a11yrev
