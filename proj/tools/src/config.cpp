#include "basinctl/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "basinctl/errors.hpp"

namespace basinctl::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t line_of(const std::string& text, std::size_t byte) {
  const auto end = text.begin() + static_cast<std::ptrdiff_t>(std::min(byte, text.size()));
  return 1 + static_cast<std::size_t>(std::count(text.begin(), end, '\n'));
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    const std::size_t line = line_of(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("line " + std::to_string(line) + ": " + e.what(), line);
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      throw ValidationError("unknown key '" + key + "' in " + where);
    }
  }
}

double as_number(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "-inf") return -kInf;
    if (s == "+inf" || s == "inf") return kInf;
  }
  throw ValidationError(where + " must be a number or \"-inf\"/\"+inf\"");
}

double finite_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ValidationError(where + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ValidationError(where + " must be an integer");
  return j.get<int>();
}

Vector as_vector(const json& j, const std::string& where, bool allow_inf) {
  if (!j.is_array()) throw ValidationError(where + " must be an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string item = where + "[" + std::to_string(i) + "]";
    v[static_cast<Eigen::Index>(i)] = allow_inf ? as_number(j[i], item) : finite_number(j[i], item);
  }
  return v;
}

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] == kInf) arr.push_back("+inf");
    else if (v[i] == -kInf) arr.push_back("-inf");
    else arr.push_back(v[i]);
  }
  return arr;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

void check_writable(const fs::path& path, const std::string& what) {
  const fs::path parent = path.parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw ValidationError(what + " directory does not exist: " + parent.string());
  }
}

ControlParams parse_control(const json& j) {
  ControlParams p;
  if (j.is_null()) return p;
  require_object(j, "control");
  reject_unknown(j, {"eps0", "eps1", "it_max", "t_max", "dt", "t_test", "tol", "n_test", "metric",
                     "weights"},
                 "control");
  if (j.contains("eps0")) p.eps0 = finite_number(j["eps0"], "control.eps0");
  if (j.contains("eps1")) p.eps1 = finite_number(j["eps1"], "control.eps1");
  if (j.contains("it_max")) p.it_max = as_int(j["it_max"], "control.it_max");
  if (j.contains("t_max")) p.t_max = finite_number(j["t_max"], "control.t_max");
  if (j.contains("dt")) p.dt = finite_number(j["dt"], "control.dt");
  if (j.contains("t_test")) p.t_test = finite_number(j["t_test"], "control.t_test");
  if (j.contains("tol")) p.tol = finite_number(j["tol"], "control.tol");
  if (j.contains("n_test")) p.n_test = as_int(j["n_test"], "control.n_test");
  const std::string metric = j.value("metric", std::string("euclidean"));
  if (metric == "weighted") {
    if (!j.contains("weights")) throw ValidationError("weighted metric needs control.weights");
    p.metric = Metric::weighted(as_vector(j["weights"], "control.weights", false));
  } else if (metric != "euclidean") {
    throw ValidationError("control.metric must be \"euclidean\" or \"weighted\"");
  } else if (j.contains("weights")) {
    throw ValidationError("control.weights requires metric \"weighted\"");
  }
  p.validate();
  return p;
}

json control_json(const ControlParams& p) {
  json j = {{"eps0", p.eps0},     {"eps1", p.eps1}, {"it_max", p.it_max},
            {"t_max", p.t_max},   {"dt", p.dt},     {"t_test", p.t_test},
            {"tol", p.tol},       {"n_test", p.n_test}, {"metric", p.metric.name()}};
  if (p.metric.kind() == Metric::Kind::weighted) j["weights"] = vector_json(p.metric.weights());
  return j;
}

}  // namespace

DynamicalSystem build_model(const ModelSpec& spec) {
  if (spec.topology && !fs::exists(*spec.topology)) {
    throw ValidationError("topology file not found: " + spec.topology->string());
  }
  std::optional<EdgeList> edges = spec.edges;
  if (spec.topology) edges = read_edge_list(*spec.topology);
  return registry_build(spec.name, spec.params, edges);
}

DynamicalSystem RunConfig::build_system() const { return build_model(model); }

ConstraintSet RunConfig::constraint_set() const { return ConstraintSet(lb, ub, feas_tol); }

void validate(const RunConfig& config) {
  if (config.model.topology && !fs::exists(*config.model.topology)) {
    throw ValidationError("topology file not found: " + config.model.topology->string());
  }
  DynamicalSystem system;
  try {
    system = config.build_system();
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
  const auto n = static_cast<Eigen::Index>(system.dimension);
  auto check_len = [&](const Vector& v, const char* what) {
    if (v.size() != n) {
      throw ValidationError(std::string(what) + " has " + std::to_string(v.size()) +
                            " entries; model dimension is " + std::to_string(n));
    }
  };
  check_len(config.y0, "y0");
  check_len(config.yt, "yt");
  check_len(config.lb, "constraints.lb");
  check_len(config.ub, "constraints.ub");
  if (!config.y0.allFinite() || !config.yt.allFinite()) {
    throw ValidationError("y0 and yt must be finite");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (config.lb[i] > config.ub[i]) {
      throw ValidationError("constraints: lb > ub at component " + std::to_string(i));
    }
  }
  if (!(config.feas_tol > 0.0)) throw ValidationError("constraints.feas_tol must be positive");
  if (config.control.metric.kind() == Metric::Kind::weighted &&
      config.control.metric.weights().size() != n) {
    throw ValidationError("control.weights must have one entry per component");
  }
  config.control.validate();
  if (config.output.report) check_writable(*config.output.report, "report");
  if (config.output.trajectory) check_writable(*config.output.trajectory, "trajectory");
}

namespace {

template <typename Fn>
auto translate_json_errors(Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

ModelSpec parse_model_json(const json& model, const fs::path& base_dir) {
  ModelSpec spec;
  require_object(model, "model");
  reject_unknown(model, {"name", "params", "topology", "edges"}, "model");
  if (!model.contains("name") || !model["name"].is_string()) {
    throw ValidationError("model.name must be a string");
  }
  spec.name = model["name"].get<std::string>();
  if (model.contains("params")) {
    require_object(model["params"], "model.params");
    for (const auto& [key, value] : model["params"].items()) {
      spec.params[key] = finite_number(value, "model.params." + key);
    }
  }
  if (model.contains("topology")) {
    if (!model["topology"].is_string()) throw ValidationError("model.topology must be a path");
    spec.topology = resolve(base_dir, model["topology"].get<std::string>());
  }
  if (model.contains("edges")) {
    EdgeList edges;
    for (const auto& e : model["edges"]) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
          !e[1].is_number_unsigned()) {
        throw ValidationError("model.edges entries must be [i, j] with i, j >= 0");
      }
      edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
    spec.edges = std::move(edges);
  }
  return spec;
}

RunConfig parse_run_json(const json& j, const fs::path& base_dir) {
  require_object(j, "config");
  reject_unknown(j, {"model", "y0", "yt", "constraints", "control", "output"}, "config");
  if (!j.contains("model") || !j.contains("y0") || !j.contains("yt")) {
    throw ValidationError("config needs model, y0 and yt");
  }

  RunConfig cfg;
  cfg.model = parse_model_json(j["model"], base_dir);

  cfg.y0 = as_vector(j["y0"], "y0", false);
  cfg.yt = as_vector(j["yt"], "yt", false);
  const auto n = cfg.y0.size();
  cfg.lb = Vector::Constant(n, -kInf);
  cfg.ub = Vector::Constant(n, kInf);
  if (j.contains("constraints")) {
    const json& c = j["constraints"];
    require_object(c, "constraints");
    reject_unknown(c, {"lb", "ub", "feas_tol"}, "constraints");
    if (c.contains("lb")) cfg.lb = as_vector(c["lb"], "constraints.lb", true);
    if (c.contains("ub")) cfg.ub = as_vector(c["ub"], "constraints.ub", true);
    if (c.contains("feas_tol")) cfg.feas_tol = finite_number(c["feas_tol"], "constraints.feas_tol");
  }
  cfg.control = parse_control(j.contains("control") ? j["control"] : json());

  if (j.contains("output")) {
    const json& o = j["output"];
    require_object(o, "output");
    reject_unknown(o, {"report", "verbosity", "trajectory"}, "output");
    if (o.contains("report")) cfg.output.report = resolve(base_dir, o["report"].get<std::string>());
    if (o.contains("trajectory")) {
      cfg.output.trajectory = resolve(base_dir, o["trajectory"].get<std::string>());
    }
    const std::string verbosity = o.value("verbosity", std::string("lean"));
    if (verbosity == "full") cfg.output.verbosity = Verbosity::full;
    else if (verbosity != "lean") throw ValidationError("output.verbosity must be lean or full");
  }

  validate(cfg);
  return cfg;
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const fs::path& base_dir) {
  const json j = parse_json(text);
  return translate_json_errors([&] { return parse_run_json(j, base_dir); });
}

RunConfig parse_config(const fs::path& path) {
  return parse_config_text(read_file(path), path.parent_path());
}

std::string serialize(const RunConfig& config) {
  json model = {{"name", config.model.name}};
  if (!config.model.params.empty()) {
    model["params"] = json::object();
    for (const auto& [key, value] : config.model.params) model["params"][key] = value;
  }
  if (config.model.topology) model["topology"] = config.model.topology->string();
  if (config.model.edges) {
    json edges = json::array();
    for (const auto& [i, j] : *config.model.edges) edges.push_back({i, j});
    model["edges"] = edges;
  }
  json out = {{"verbosity", config.output.verbosity == Verbosity::full ? "full" : "lean"}};
  if (config.output.report) out["report"] = config.output.report->string();
  if (config.output.trajectory) out["trajectory"] = config.output.trajectory->string();

  const json j = {
      {"model", model},
      {"y0", vector_json(config.y0)},
      {"yt", vector_json(config.yt)},
      {"constraints",
       {{"lb", vector_json(config.lb)}, {"ub", vector_json(config.ub)}, {"feas_tol", config.feas_tol}}},
      {"control", control_json(config.control)},
      {"output", out},
  };
  return j.dump(2) + "\n";
}

namespace {

std::vector<std::uint64_t> parse_seeds(const json& j) {
  std::vector<std::uint64_t> seeds;
  if (j.is_string()) {
    // "first..last", inclusive
    const auto s = j.get<std::string>();
    const auto dots = s.find("..");
    if (dots == std::string::npos) throw ValidationError("seeds range must look like \"1..30\"");
    try {
      const auto first = std::stoull(s.substr(0, dots));
      const auto last = std::stoull(s.substr(dots + 2));
      if (last < first) throw ValidationError("seeds range is empty");
      for (auto k = first; k <= last; ++k) seeds.push_back(k);
    } catch (const std::logic_error&) {
      throw ValidationError("seeds range must look like \"1..30\"");
    }
    return seeds;
  }
  if (!j.is_array()) throw ValidationError("seeds must be a list or a \"first..last\" range");
  for (const auto& s : j) {
    if (!s.is_number_unsigned()) throw ValidationError("seeds must be non-negative integers");
    seeds.push_back(s.get<std::uint64_t>());
  }
  if (seeds.empty()) throw ValidationError("seeds must not be empty");
  return seeds;
}

GeneratorOptions parse_generator(const json& j, const ControlParams& check) {
  GeneratorOptions g;
  g.check_params = check;
  if (j.is_null()) return g;
  require_object(j, "generator");
  reject_unknown(j, {"coupling", "mean_degree", "perturbable_fraction", "box_half_width",
                     "witness_noise", "flip_low", "flip_high", "max_attempts"},
                 "generator");
  if (j.contains("coupling")) g.coupling = finite_number(j["coupling"], "generator.coupling");
  if (j.contains("mean_degree")) g.mean_degree = finite_number(j["mean_degree"], "generator.mean_degree");
  if (j.contains("perturbable_fraction")) {
    g.perturbable_fraction = finite_number(j["perturbable_fraction"], "generator.perturbable_fraction");
  }
  if (j.contains("box_half_width")) g.box_half_width = finite_number(j["box_half_width"], "generator.box_half_width");
  if (j.contains("witness_noise")) g.witness_noise = finite_number(j["witness_noise"], "generator.witness_noise");
  if (j.contains("flip_low")) g.flip_low = finite_number(j["flip_low"], "generator.flip_low");
  if (j.contains("flip_high")) g.flip_high = finite_number(j["flip_high"], "generator.flip_high");
  if (j.contains("max_attempts")) g.max_attempts = as_int(j["max_attempts"], "generator.max_attempts");
  if (!(g.perturbable_fraction > 0.0 && g.perturbable_fraction <= 1.0)) {
    throw ValidationError("generator.perturbable_fraction must be in (0, 1]");
  }
  if (!(g.flip_low <= g.flip_high) || g.max_attempts < 1 || !(g.mean_degree > 0.0)) {
    throw ValidationError("generator: invalid ranges");
  }
  return g;
}

}  // namespace

namespace {

BenchConfig parse_bench_json(const json& j, const fs::path& base_dir) {
  require_object(j, "bench config");
  reject_unknown(j, {"mode", "n", "seeds", "dims", "seeds_per_dim", "control", "generator",
                     "output", "threads"},
                 "bench config");
  BenchConfig cfg;
  const std::string mode = j.value("mode", std::string("suite"));
  if (mode == "suite") cfg.mode = BenchMode::suite;
  else if (mode == "scaling") cfg.mode = BenchMode::scaling;
  else throw ValidationError("mode must be \"suite\" or \"scaling\"");

  cfg.control = parse_control(j.contains("control") ? j["control"] : json());
  cfg.generator = parse_generator(j.contains("generator") ? j["generator"] : json(), cfg.control);
  if (j.contains("output")) cfg.output = resolve(base_dir, j["output"].get<std::string>());
  if (j.contains("threads")) {
    const int threads = as_int(j["threads"], "threads");
    if (threads < 1) throw ValidationError("threads must be >= 1");
    cfg.threads = static_cast<unsigned>(threads);
  }

  if (cfg.mode == BenchMode::suite) {
    if (j.contains("n")) {
      const int n = as_int(j["n"], "n");
      if (n < 2) throw ValidationError("suite needs n >= 2");
      cfg.n = static_cast<std::size_t>(n);
    }
    if (j.contains("seeds")) {
      cfg.seeds = parse_seeds(j["seeds"]);
    } else {
      for (std::uint64_t s = 1; s <= 30; ++s) cfg.seeds.push_back(s);
    }
  } else {
    if (!j.contains("dims") || !j["dims"].is_array()) throw ValidationError("scaling needs dims");
    for (const auto& d : j["dims"]) {
      const int n = as_int(d, "dims[]");
      if (n < 2) throw ValidationError("scaling dims must be >= 2");
      cfg.dims.push_back(static_cast<std::size_t>(n));
    }
    if (cfg.dims.size() < 3) throw ValidationError("scaling needs at least 3 dims");
    for (std::size_t i = 1; i < cfg.dims.size(); ++i) {
      if (cfg.dims[i] <= cfg.dims[i - 1]) throw ValidationError("dims must be strictly increasing");
    }
    if (j.contains("seeds_per_dim")) cfg.seeds_per_dim = as_int(j["seeds_per_dim"], "seeds_per_dim");
    if (cfg.seeds_per_dim < 1) throw ValidationError("seeds_per_dim must be >= 1");
  }
  if (cfg.output) check_writable(*cfg.output, "output");
  return cfg;
}

}  // namespace

BenchConfig parse_bench_config_text(const std::string& text, const fs::path& base_dir) {
  const json j = parse_json(text);
  return translate_json_errors([&] { return parse_bench_json(j, base_dir); });
}

ModelSpec parse_model_config(const fs::path& path) {
  const std::string text = read_file(path);
  const json j = parse_json(text);
  return translate_json_errors([&] {
    require_object(j, "config");
    if (!j.contains("model")) throw ValidationError("config needs a model section");
    return parse_model_json(j["model"], path.parent_path());
  });
}

BenchConfig parse_bench_config(const fs::path& path) {
  return parse_bench_config_text(read_file(path), path.parent_path());
}

}  // namespace basinctl::cli
