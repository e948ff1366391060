#include "saldet/model_io.hpp"

#include <fstream>
#include <json.hpp>

#include "saldet/error.hpp"

namespace saldet {

namespace {

using nlohmann::json;

json config_to_json(const PipelineConfig& cfg) {
  json templates = json::array();
  for (const auto& t : cfg.shf.templates) templates.push_back({t.x, t.y, t.w, t.h});
  return json{
      {"block_size", cfg.block_size},
      {"gt_threshold", cfg.gt_threshold},
      {"lbp",
       {{"p", cfg.lbp.neighbors},
        {"r", cfg.lbp.radius},
        {"mode", cfg.lbp_mode == LbpMode::gray ? "gray" : "color"},
        {"color_normal", cfg.color_normal}}},
      {"shf",
       {{"levels", cfg.shf.levels},
        {"templates", templates},
        {"distance", cfg.shf_distance == HistDistance::l1 ? "l1" : "chi2"}}},
      {"train",
       {{"alpha", cfg.train.alpha},
        {"epochs", cfg.train.epochs},
        {"l2", cfg.train.l2},
        {"seed", cfg.train.seed},
        {"mode", cfg.train.mode == TrainMode::exact_dp ? "exact-dp" : "pseudolikelihood"},
        {"max_exact_height", cfg.train.max_exact_height}}},
      {"beta_squared", cfg.beta_squared},
  };
}

PipelineConfig config_from_json(const json& j) {
  PipelineConfig cfg;
  cfg.block_size = j.at("block_size").get<int>();
  cfg.gt_threshold = j.at("gt_threshold").get<double>();

  const json& lbp = j.at("lbp");
  cfg.lbp.neighbors = lbp.at("p").get<int>();
  cfg.lbp.radius = lbp.at("r").get<double>();
  cfg.lbp_mode = lbp.at("mode").get<std::string>() == "color" ? LbpMode::color : LbpMode::gray;
  cfg.color_normal = lbp.at("color_normal").get<std::array<double, 3>>();

  const json& shf = j.at("shf");
  cfg.shf.levels = shf.at("levels").get<int>();
  cfg.shf.templates.clear();
  for (const auto& t : shf.at("templates")) {
    cfg.shf.templates.push_back(
        {t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>(),
         t.at(3).get<double>()});
  }
  cfg.shf_distance =
      shf.at("distance").get<std::string>() == "chi2" ? HistDistance::chi2 : HistDistance::l1;

  const json& train = j.at("train");
  cfg.train.alpha = train.at("alpha").get<double>();
  cfg.train.epochs = train.at("epochs").get<int>();
  cfg.train.l2 = train.at("l2").get<double>();
  cfg.train.seed = train.at("seed").get<std::uint64_t>();
  cfg.train.mode = train.at("mode").get<std::string>() == "pseudolikelihood"
                       ? TrainMode::pseudolikelihood
                       : TrainMode::exact_dp;
  cfg.train.max_exact_height = train.at("max_exact_height").get<int>();

  cfg.beta_squared = j.at("beta_squared").get<double>();
  validate(cfg);
  return cfg;
}

}  // namespace

std::string model_to_json_text(const ModelFile& model) {
  json j{
      {"schema_version", model.schema_version},
      {"config", config_to_json(model.config)},
      {"average_shf",
       {{"sample_count", model.average_shf.sample_count},
        {"per_template", model.average_shf.model.per_template}}},
      {"normalization",
       {{"mu", model.normalization.mu},
        {"sigma", model.normalization.sigma},
        {"epsilon", model.normalization.epsilon}}},
      {"crf",
       {{"unary_weights", model.crf.unary_weights},
        {"pairwise_weight", model.crf.pairwise_weight}}},
  };
  return j.dump(2) + "\n";
}

ModelFile model_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kModelSchemaVersion)
      throw ModelError("model schema version " + std::to_string(version) +
                       " is not supported (expected " + std::to_string(kModelSchemaVersion) + ")");

    ModelFile m;
    m.schema_version = version;
    m.config = config_from_json(j.at("config"));

    const json& avg = j.at("average_shf");
    m.average_shf.sample_count = avg.at("sample_count").get<int>();
    m.average_shf.model.per_template =
        avg.at("per_template").get<std::vector<std::vector<double>>>();

    const json& norm = j.at("normalization");
    m.normalization.mu = norm.at("mu").get<std::vector<double>>();
    m.normalization.sigma = norm.at("sigma").get<std::vector<double>>();
    m.normalization.epsilon = norm.at("epsilon").get<double>();

    const json& crf = j.at("crf");
    m.crf.unary_weights = crf.at("unary_weights").get<std::vector<double>>();
    m.crf.pairwise_weight = crf.at("pairwise_weight").get<double>();
    return m;
  } catch (const json::exception& e) {
    throw ModelError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const ModelFile& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(IoError::Kind::write_failed, "cannot write model file: " + path.string());
  out << model_to_json_text(model);
  if (!out) throw IoError(IoError::Kind::write_failed, "failed writing model file: " + path.string());
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoError::Kind::unreadable, "cannot read model file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return model_from_json_text(buf.str());
}

}  // namespace saldet
