#include "afb/cli/experiment.hpp"

#include "afb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

namespace afb::cli {

using nlohmann::json;

namespace {

std::string field(std::string const &where, std::string_view key)
{
  return where + "." + std::string(key);
}

void require_object(json const &obj, std::string const &where)
{
  if (!obj.is_object()) {
    throw ParameterError("'" + where + "' must be a JSON object");
  }
}

void check_keys(json const &obj, std::string const &where, std::initializer_list<std::string_view> allowed)
{
  require_object(obj, where);
  for (auto const &[key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParameterError("unknown key '" + field(where, key) + "'");
    }
  }
}

double number(json const &v, std::string const &name)
{
  if (!v.is_number()) {
    throw ParameterError("'" + name + "' must be a number");
  }
  double const d = v.get<double>();
  if (!std::isfinite(d)) {
    throw ParameterError("'" + name + "' must be finite");
  }
  return d;
}

std::uint64_t unsigned_integer(json const &v, std::string const &name)
{
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    return v.get<std::uint64_t>();
  }
  if (v.is_number()) {
    throw ParameterError("'" + name + "' must be a nonnegative integer");
  }
  throw ParameterError("'" + name + "' must be an integer");
}

std::string string_value(json const &v, std::string const &name)
{
  if (!v.is_string()) {
    throw ParameterError("'" + name + "' must be a string");
  }
  return v.get<std::string>();
}

template <class Fn>
auto named(std::string const &name, Fn &&fn)
{
  try {
    return fn();
  } catch (ParameterError const &e) {
    throw ParameterError("'" + name + "': " + e.what());
  }
}

PhantomSpec phantom_from_json(json const &obj)
{
  check_keys(obj, "phantom", {"size", "coils", "noise_sigma", "seed"});
  PhantomSpec spec;
  if (obj.contains("size")) {
    spec.size = unsigned_integer(obj["size"], "phantom.size");
  }
  if (obj.contains("coils")) {
    spec.coils = unsigned_integer(obj["coils"], "phantom.coils");
  }
  if (obj.contains("noise_sigma")) {
    spec.noise_sigma = number(obj["noise_sigma"], "phantom.noise_sigma");
  }
  if (obj.contains("seed")) {
    spec.seed = unsigned_integer(obj["seed"], "phantom.seed");
  }
  named("phantom", [&] { spec.validate(); });
  return spec;
}

void masks_from_json(json const &obj, std::string const &where, std::size_t size, std::vector<MaskSpec> &out)
{
  check_keys(obj, where, {"kind", "ratio", "ratios", "acs", "seed"});
  MaskSpec base;
  if (!obj.contains("kind")) {
    throw ParameterError("missing key '" + field(where, "kind") + "'");
  }
  base.kind = named(field(where, "kind"), [&] { return parse_mask_kind(string_value(obj["kind"], field(where, "kind"))); });
  if (base.kind == MaskKind::External) {
    throw ParameterError("'" + field(where, "kind") + "' must name a generated mask family");
  }
  if (obj.contains("acs")) {
    base.acs = unsigned_integer(obj["acs"], field(where, "acs"));
  }
  if (obj.contains("seed")) {
    base.seed = unsigned_integer(obj["seed"], field(where, "seed"));
  }

  std::vector<double> ratios;
  if (obj.contains("ratio") == obj.contains("ratios")) {
    throw ParameterError("'" + where + "' needs exactly one of 'ratio' and 'ratios'");
  }
  if (obj.contains("ratio")) {
    ratios.push_back(number(obj["ratio"], field(where, "ratio")));
  } else {
    auto const &list = obj["ratios"];
    if (!list.is_array() || list.empty()) {
      throw ParameterError("'" + field(where, "ratios") + "' must be a non-empty array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      ratios.push_back(number(list[i], field(where, "ratios") + "[" + std::to_string(i) + "]"));
    }
  }

  for (double r : ratios) {
    if (!(r > 0.0 && r <= 1.0)) {
      throw ParameterError("'" + field(where, "ratio") + "' must lie in (0, 1], got " + std::to_string(r));
    }
    MaskSpec spec = base;
    spec.ratio = r;
    if (spec.acs && spec.kind != MaskKind::Radial && r < 1.0) {
      auto const rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(r * double(size))));
      if (*spec.acs >= size || *spec.acs > rows) {
        throw ParameterError("'" + field(where, "acs") + "' = " + std::to_string(*spec.acs) +
                             " does not fit " + std::to_string(rows) + " kept rows of " + std::to_string(size));
      }
    }
    out.push_back(spec);
  }
}

} // namespace

json read_json_file(std::filesystem::path const &path)
{
  std::ifstream in(path);
  if (!in) {
    throw ParameterError("cannot read " + path.string());
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (json::parse_error const &e) {
    throw ParameterError(path.string() + " is not valid JSON: " + e.what());
  }
}

json to_json(SolverConfig const &cfg)
{
  json schedule = json::array();
  for (auto const &s : cfg.schedule.steps) {
    schedule.push_back({{"alpha", s.alpha}, {"beta", s.beta}, {"gamma", s.gamma}});
  }
  return json{{"eta0", cfg.eta0},       {"tau0", cfg.tau0},           {"sigma", cfg.sigma},
              {"mu", cfg.mu},           {"delta", cfg.delta},         {"epsilon", cfg.epsilon},
              {"max_iters", cfg.max_iters}, {"schedule", std::move(schedule)}};
}

json to_json(RegularizerSpec const &spec)
{
  json out{{"family", to_string(spec.family)}};
  out["lambda_r"] = spec.weight ? json(*spec.weight) : json(nullptr);
  return out;
}

SolverConfig solver_from_json(json const &obj, std::string const &where)
{
  check_keys(obj, where, {"eta0", "tau0", "sigma", "mu", "delta", "epsilon", "max_iters", "schedule"});
  SolverConfig cfg;
  for (auto [key, slot] : {std::pair{"eta0", &cfg.eta0}, std::pair{"tau0", &cfg.tau0},
                           std::pair{"sigma", &cfg.sigma}, std::pair{"mu", &cfg.mu},
                           std::pair{"delta", &cfg.delta}, std::pair{"epsilon", &cfg.epsilon}}) {
    if (obj.contains(key)) {
      *slot = number(obj[key], field(where, key));
    }
  }
  if (obj.contains("max_iters")) {
    cfg.max_iters = unsigned_integer(obj["max_iters"], field(where, "max_iters"));
  }
  if (obj.contains("schedule")) {
    auto const &list = obj["schedule"];
    if (!list.is_array()) {
      throw ParameterError("'" + field(where, "schedule") + "' must be an array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      auto const name = field(where, "schedule") + "[" + std::to_string(i) + "]";
      check_keys(list[i], name, {"alpha", "beta", "gamma"});
      for (char const *key : {"alpha", "beta", "gamma"}) {
        if (!list[i].contains(key)) {
          throw ParameterError("missing key '" + field(name, key) + "'");
        }
      }
      cfg.schedule.steps.push_back(PhaseStep{number(list[i]["alpha"], field(name, "alpha")),
                                             number(list[i]["beta"], field(name, "beta")),
                                             number(list[i]["gamma"], field(name, "gamma"))});
    }
  }
  named(where, [&] { cfg.validate(); });
  return cfg;
}

RegularizerSpec regularizer_from_json(json const &obj)
{
  check_keys(obj, "regularizer", {"family", "lambda_r"});
  RegularizerSpec spec;
  if (obj.contains("family")) {
    spec.family = named("regularizer.family", [&] {
      return parse_regularizer_family(string_value(obj["family"], "regularizer.family"));
    });
  }
  if (obj.contains("lambda_r") && !obj["lambda_r"].is_null()) {
    double const w = number(obj["lambda_r"], "regularizer.lambda_r");
    if (w < 0.0) {
      throw ParameterError("'regularizer.lambda_r' must be nonnegative");
    }
    spec.weight = w;
  }
  return spec;
}

ExperimentConfig parse_experiment(json const &doc)
{
  check_keys(doc, "config", {"version", "phantom", "mask", "masks", "solver", "regularizer", "outputs"});
  if (!doc.contains("version")) {
    throw ParameterError("missing key 'version'");
  }
  if (!doc["version"].is_number_integer() || doc["version"].get<long long>() != kConfigVersion) {
    throw ParameterError("unsupported config 'version' (expected " + std::to_string(kConfigVersion) + ")");
  }

  ExperimentConfig cfg;
  if (doc.contains("phantom")) {
    cfg.phantom = phantom_from_json(doc["phantom"]);
  }
  if (doc.contains("mask") && doc.contains("masks")) {
    throw ParameterError("give either 'mask' or 'masks', not both");
  }
  if (doc.contains("mask")) {
    masks_from_json(doc["mask"], "mask", cfg.phantom.size, cfg.masks);
  }
  if (doc.contains("masks")) {
    auto const &list = doc["masks"];
    if (!list.is_array()) {
      throw ParameterError("'masks' must be an array");
    }
    for (std::size_t i = 0; i < list.size(); ++i) {
      masks_from_json(list[i], "masks[" + std::to_string(i) + "]", cfg.phantom.size, cfg.masks);
    }
  }
  if (doc.contains("solver")) {
    cfg.solver = solver_from_json(doc["solver"]);
  }
  if (doc.contains("regularizer")) {
    cfg.regularizer = regularizer_from_json(doc["regularizer"]);
  }
  if (doc.contains("outputs")) {
    check_keys(doc["outputs"], "outputs", {"directory"});
    if (doc["outputs"].contains("directory")) {
      cfg.output_directory = string_value(doc["outputs"]["directory"], "outputs.directory");
    }
  }
  return cfg;
}

ExperimentConfig load_experiment(std::filesystem::path const &path)
{
  return parse_experiment(read_json_file(path));
}

std::size_t resolve_acs(MaskKind kind, std::size_t size, double ratio, std::optional<std::size_t> acs)
{
  if (acs) {
    return *acs;
  }
  if (kind == MaskKind::Radial || kind == MaskKind::External) {
    return 0;
  }
  auto const rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(ratio * double(size))));
  return std::min(default_acs_lines(size), rows / 2);
}

} // namespace afb::cli
