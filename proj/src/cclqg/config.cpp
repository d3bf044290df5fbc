#include "cclqg/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cclqg/errors.hpp"

namespace cclqg {

namespace {

using nlohmann::json;

double number_or_inf(const json& v, const char* what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s == "inf" || s == "Inf" || s == "Infinity") return std::numeric_limits<double>::infinity();
  }
  raise(ErrorCode::ParseError, std::string(what) + " must be a number or \"inf\"");
}

Matrix parse_matrix(const json& v, const char* what) {
  if (!v.is_array() || v.empty()) raise(ErrorCode::ParseError, std::string(what) + " must be a nonempty array of rows");
  const std::size_t rows = v.size();
  if (!v[0].is_array() || v[0].empty())
    raise(ErrorCode::ParseError, std::string(what) + " rows must be nonempty arrays");
  const std::size_t cols = v[0].size();
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols)
      raise(ErrorCode::ParseError, std::string(what) + " rows differ in length");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!v[i][j].is_number()) raise(ErrorCode::ParseError, std::string(what) + " entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i][j].get<double>();
    }
  }
  return m;
}

GroupSpec parse_group(const json& g, std::size_t index) {
  if (!g.is_object()) raise(ErrorCode::ParseError, "group entries must be objects");
  GroupSpec spec;
  spec.label = g.value("label", "g" + std::to_string(index));
  spec.mult = g.value("mult", 1);

  const bool scalar_form = g.contains("a");
  const bool block_form = g.contains("A");
  if (scalar_form == block_form)
    raise(ErrorCode::ParseError,
          "group '" + spec.label + "' must use either scalar keys (a,c,s2w,s2v) or block keys (A,C,Sw,Sv)");

  if (scalar_form) {
    for (const char* key : {"a", "c", "s2w", "s2v"})
      if (!g.contains(key) || !g[key].is_number())
        raise(ErrorCode::ParseError, "group '" + spec.label + "' needs numeric '" + key + "'");
    spec.a = Matrix::Constant(1, 1, g["a"].get<double>());
    spec.c = Matrix::Constant(1, 1, g["c"].get<double>());
    spec.sw = Matrix::Constant(1, 1, g["s2w"].get<double>());
    spec.sv = Matrix::Constant(1, 1, g["s2v"].get<double>());
    if (g.contains("sigma0")) spec.sigma0 = Matrix::Constant(1, 1, g["sigma0"].get<double>());
  } else {
    for (const char* key : {"A", "C", "Sw", "Sv"})
      if (!g.contains(key))
        raise(ErrorCode::ParseError, "group '" + spec.label + "' needs matrix '" + key + "'");
    spec.a = parse_matrix(g["A"], "A");
    spec.c = parse_matrix(g["C"], "C");
    spec.sw = parse_matrix(g["Sw"], "Sw");
    spec.sv = parse_matrix(g["Sv"], "Sv");
    if (g.contains("Sigma0")) spec.sigma0 = parse_matrix(g["Sigma0"], "Sigma0");
  }
  return spec;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    raise(ErrorCode::ParseError, std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) raise(ErrorCode::ParseError, "config must be a JSON object");

  ExperimentConfig cfg;

  if (!root.contains("system") || !root["system"].is_object())
    raise(ErrorCode::ParseError, "config needs a 'system' object");
  const json& sys = root["system"];
  if (!sys.contains("groups") || !sys["groups"].is_array() || sys["groups"].empty())
    raise(ErrorCode::ParseError, "system.groups must be a nonempty array");
  for (std::size_t i = 0; i < sys["groups"].size(); ++i)
    cfg.structure.groups.push_back(parse_group(sys["groups"][i], i));

  std::string s0 = sys.value("sigma0", "stationary");
  if (s0 == "stationary")
    cfg.sigma0_mode = Sigma0Mode::Stationary;
  else if (s0 == "zero")
    cfg.sigma0_mode = Sigma0Mode::Zero;
  else
    raise(ErrorCode::ParseError, "system.sigma0 must be 'stationary' or 'zero'");

  if (root.contains("capacity")) {
    const json& cap = root["capacity"];
    if (!cap.is_object()) raise(ErrorCode::ParseError, "'capacity' must be an object");
    if (cap.contains("grid")) {
      if (!cap["grid"].is_array()) raise(ErrorCode::ParseError, "capacity.grid must be an array");
      for (const json& v : cap["grid"]) cfg.grid.push_back(number_or_inf(v, "capacity.grid entry"));
    }
    cfg.unit = cap.value("unit", "nats");
    if (cfg.unit != "nats" && cfg.unit != "bits")
      raise(ErrorCode::ParseError, "capacity.unit must be 'nats' or 'bits'");
  }

  if (root.contains("sim")) {
    const json& sim = root["sim"];
    if (!sim.is_object()) raise(ErrorCode::ParseError, "'sim' must be an object");
    cfg.horizon = sim.value("horizon", cfg.horizon);
    cfg.n = sim.value("n", cfg.n);
    if (sim.contains("seed")) cfg.seed = sim["seed"].get<std::uint64_t>();
    cfg.burn_in = sim.value("burn_in", cfg.burn_in);
    cfg.mode = sim.value("mode", cfg.mode);
    if (cfg.mode != "steady" && cfg.mode != "finite")
      raise(ErrorCode::ParseError, "sim.mode must be 'steady' or 'finite'");
    cfg.tol_sigma = sim.value("tol_sigma", cfg.tol_sigma);
    if (cfg.horizon < 1 || cfg.n < 1) raise(ErrorCode::ParseError, "sim.horizon and sim.n must be positive");
  }

  if (root.contains("out")) {
    const json& out = root["out"];
    if (!out.is_object()) raise(ErrorCode::ParseError, "'out' must be an object");
    cfg.out_dir = out.value("dir", cfg.out_dir);
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

double capacity_to_nats(double value, const std::string& unit) {
  if (unit == "nats") return value;
  if (unit == "bits") return value * std::log(2.0);
  raise(ErrorCode::InvalidArgument, "unknown capacity unit: " + unit);
}

std::vector<double> grid_nats(const ExperimentConfig& config) {
  std::vector<double> out;
  out.reserve(config.grid.size());
  for (double b : config.grid) out.push_back(capacity_to_nats(b, config.unit));
  return out;
}

ExperimentConfig apply_scale(const ExperimentConfig& config, int k) {
  if (k < 1) raise(ErrorCode::InvalidArgument, "scale must be a positive integer");
  ExperimentConfig out = config;
  for (GroupSpec& g : out.structure.groups)
    g.mult = std::max(1, static_cast<int>(std::lround(static_cast<double>(g.mult) / k)));
  for (double& b : out.grid)
    if (!std::isinf(b)) b /= static_cast<double>(k);
  return out;
}

LqgSystem build_system(const ExperimentConfig& config, const Tolerances& tols) {
  return build_structured(config.structure, config.sigma0_mode, tols);
}

}  // namespace cclqg
