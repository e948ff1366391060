#include "saldet/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "saldet/error.hpp"

namespace saldet {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view key, std::string_view value) {
  const std::string v(trim(value));
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config key '" + std::string(key) + "': not a real number: '" + v + "'");
  }
  if (pos != v.size())
    throw ConfigError("config key '" + std::string(key) + "': trailing characters in '" + v + "'");
  return out;
}

long long parse_int(std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("config key '" + std::string(key) + "': not an integer: '" +
                      std::string(v) + "'");
  return out;
}

std::vector<double> parse_real_list(std::string_view key, std::string_view value, char sep) {
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(value)};
  while (std::getline(in, item, sep)) out.push_back(parse_real(key, item));
  return out;
}

std::vector<TemplateRect> parse_templates(std::string_view key, std::string_view value) {
  std::vector<TemplateRect> out;
  std::string quad;
  std::istringstream in{std::string(value)};
  while (std::getline(in, quad, ';')) {
    const auto parts = parse_real_list(key, quad, ',');
    if (parts.size() != 4)
      throw ConfigError("config key '" + std::string(key) +
                        "': each template needs 4 comma-separated reals (x,y,w,h)");
    out.push_back({parts[0], parts[1], parts[2], parts[3]});
  }
  if (out.empty())
    throw ConfigError("config key '" + std::string(key) + "': empty template list");
  return out;
}

void apply_key(PipelineConfig& cfg, std::string_view key, std::string_view value) {
  const std::string v(trim(value));
  if (key == "dataset.block_size") {
    cfg.block_size = static_cast<int>(parse_int(key, v));
  } else if (key == "dataset.gt_threshold") {
    cfg.gt_threshold = parse_real(key, v);
  } else if (key == "lbp.p") {
    cfg.lbp.neighbors = static_cast<int>(parse_int(key, v));
  } else if (key == "lbp.r") {
    cfg.lbp.radius = parse_real(key, v);
  } else if (key == "lbp.mode") {
    if (v == "gray") cfg.lbp_mode = LbpMode::gray;
    else if (v == "color") cfg.lbp_mode = LbpMode::color;
    else throw ConfigError("config key 'lbp.mode': expected gray or color, got '" + v + "'");
  } else if (key == "lbp.color_normal") {
    const auto parts = parse_real_list(key, v, ',');
    if (parts.size() != 3)
      throw ConfigError("config key 'lbp.color_normal': expected 3 comma-separated reals");
    cfg.color_normal = normalize_color_normal({parts[0], parts[1], parts[2]});
  } else if (key == "shf.levels") {
    cfg.shf.levels = static_cast<int>(parse_int(key, v));
  } else if (key == "shf.templates") {
    cfg.shf.templates = parse_templates(key, v);
  } else if (key == "shf.distance") {
    if (v == "l1") cfg.shf_distance = HistDistance::l1;
    else if (v == "chi2") cfg.shf_distance = HistDistance::chi2;
    else throw ConfigError("config key 'shf.distance': expected l1 or chi2, got '" + v + "'");
  } else if (key == "crf.alpha") {
    cfg.train.alpha = parse_real(key, v);
  } else if (key == "crf.epochs") {
    cfg.train.epochs = static_cast<int>(parse_int(key, v));
  } else if (key == "crf.l2") {
    cfg.train.l2 = parse_real(key, v);
  } else if (key == "crf.seed") {
    cfg.train.seed = static_cast<std::uint64_t>(parse_int(key, v));
  } else if (key == "crf.mode") {
    if (v == "exact-dp") cfg.train.mode = TrainMode::exact_dp;
    else if (v == "pseudolikelihood") cfg.train.mode = TrainMode::pseudolikelihood;
    else throw ConfigError("config key 'crf.mode': expected exact-dp or pseudolikelihood, got '" +
                           v + "'");
  } else if (key == "crf.max_exact_height") {
    cfg.train.max_exact_height = static_cast<int>(parse_int(key, v));
  } else if (key == "metrics.beta2") {
    cfg.beta_squared = parse_real(key, v);
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

}  // namespace

std::array<double, 3> normalize_color_normal(const std::array<double, 3>& n) {
  const double norm = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
  if (!(norm > 0.0) || !std::isfinite(norm))
    throw ConfigError("color LBP normal must be a finite nonzero vector");
  return {n[0] / norm, n[1] / norm, n[2] / norm};
}

void validate(const PipelineConfig& cfg) {
  if (cfg.block_size < 2) throw ConfigError("dataset.block_size must be >= 2");
  if (cfg.gt_threshold <= 0.0 || cfg.gt_threshold > 1.0)
    throw ConfigError("dataset.gt_threshold must lie in (0, 1]");
  try {
    validate(cfg.lbp);
    ColorLbpParams color{cfg.lbp, cfg.color_normal};
    validate(color);
    validate(cfg.shf);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  validate(cfg.train);
  if (cfg.beta_squared < 0.0) throw ConfigError("metrics.beta2 must be >= 0");
}

PipelineConfig parse_config_text(std::string_view text) {
  PipelineConfig cfg;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    apply_key(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  validate(cfg);
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(IoError::Kind::unreadable, "cannot read config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace saldet
