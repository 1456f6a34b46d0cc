#include "gfd/cli.hpp"

#include "gfd/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#ifndef GFD_CLOUD_DIR
#define GFD_CLOUD_DIR "clouds"
#endif

namespace fs = std::filesystem;

namespace gfd::cli {
namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"discretization", {"grid", "cloud", "star_size", "weight_power", "seed"}},
      {"time", {"dt", "t_final", "report_times", "snapshot_times"}},
      {"model", {"gamma", "mu", "initial", "bump_a", "bump_b", "initial_value"}},
      {"stability", {"mode", "cadence"}},
      {"output", {"dir"}},
  };
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected a number, got '" + text + "'");
  }
  if (!std::isfinite(v)) throw ConfigError(key, "value must be finite");
  return v;
}

template <typename Int>
Int to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError(key, "expected an integer, got '" + text + "'");
  }
  return v;
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(key, item));
  return out;
}

const std::string& required(const ConfigMap& map, const std::string& key) {
  const auto it = map.find(key);
  if (it == map.end()) throw ConfigError(key, "missing required key");
  return it->second;
}

std::optional<std::string> optional_key(const ConfigMap& map, const std::string& key) {
  const auto it = map.find(key);
  if (it == map.end()) return std::nullopt;
  return it->second;
}

bool is_multiple(double t, double dt) { return step_index(t, dt).has_value(); }

std::string format_time(double t) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), t);
  return std::string(buf, ptr);
}

void open_for_write(std::ofstream& f, const fs::path& path) {
  f.open(path);
  if (!f) throw Error("cannot write " + path.string());
}

constexpr const char* kExample12Times = "0.05, 1, 2.5, 5, 10";
constexpr const char* kExample3Times = "0.05, 0.1, 0.25, 0.5, 1, 2.5";

std::string preset_body(const std::string& discretization, const std::string& gamma,
                        const std::string& mu, const std::string& initial,
                        const std::string& times, const std::string& t_final) {
  std::ostringstream s;
  s << "[discretization]\n" << discretization << "\nstar_size = 8\nweight_power = 1\n\n"
    << "[time]\ndt = 0.001\nt_final = " << t_final << "\nreport_times = " << times << "\n\n"
    << "[model]\ngamma = " << gamma << "\nmu = " << mu << "\n" << initial << "\n\n"
    << "[stability]\nmode = warn\ncadence = 100\n";
  return s.str();
}

std::string irregular_cloud() {
  return std::string("cloud = ") + GFD_CLOUD_DIR + "/irregular-361.txt";
}

}  // namespace

ConfigMap read_config_map(std::istream& in) {
  ConfigMap map;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        throw ConfigError("line " + std::to_string(lineno), "malformed section header");
      }
      section = trim(std::string_view(t).substr(1, t.size() - 2));
      if (!schema().contains(section)) throw ConfigError(section, "unknown section");
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno), "expected 'key = value'");
    }
    const std::string key = trim(std::string_view(t).substr(0, eq));
    const std::string value = trim(std::string_view(t).substr(eq + 1));
    if (section.empty()) throw ConfigError(key, "key outside any section");
    const std::string full = section + "." + key;
    if (!schema().at(section).contains(key)) throw ConfigError(full, "unknown key");
    map[full] = value;
  }
  return map;
}

SimulationConfig config_from_map(const ConfigMap& map) {
  for (const auto& [full, value] : map) {
    const auto dot = full.find('.');
    const auto sec = schema().find(full.substr(0, dot));
    if (dot == std::string::npos || sec == schema().end() ||
        !sec->second.contains(full.substr(dot + 1))) {
      throw ConfigError(full, "unknown key");
    }
  }

  SimulationConfig c;
  const auto grid = optional_key(map, "discretization.grid");
  const auto cloud = optional_key(map, "discretization.cloud");
  if (grid && cloud) throw ConfigError("discretization.cloud", "give either grid or cloud, not both");
  if (!grid && !cloud) throw ConfigError("discretization.grid", "missing required key");
  if (grid) c.grid_n = to_int<int>("discretization.grid", *grid);
  if (cloud) c.cloud_path = *cloud;
  if (auto v = optional_key(map, "discretization.star_size")) {
    c.star_size = to_int<int>("discretization.star_size", *v);
  }
  if (auto v = optional_key(map, "discretization.weight_power")) {
    c.weight_power = to_double("discretization.weight_power", *v);
  }
  if (auto v = optional_key(map, "discretization.seed")) {
    c.seed = to_int<std::uint64_t>("discretization.seed", *v);
  }

  c.dt = to_double("time.dt", required(map, "time.dt"));
  c.t_final = to_double("time.t_final", required(map, "time.t_final"));
  if (auto v = optional_key(map, "time.report_times")) {
    c.report_times = to_list("time.report_times", *v);
  }
  if (auto v = optional_key(map, "time.snapshot_times")) {
    c.snapshot_times = to_list("time.snapshot_times", *v);
  }

  c.gamma = required(map, "model.gamma");
  c.mu = to_double("model.mu", required(map, "model.mu"));
  const std::string& initial = required(map, "model.initial");
  if (initial == "bump") {
    c.initial.kind = InitialKind::bump;
  } else if (initial == "cosine") {
    c.initial.kind = InitialKind::cosine;
  } else if (initial == "mixed") {
    c.initial.kind = InitialKind::mixed;
  } else if (initial == "constant") {
    c.initial.kind = InitialKind::constant;
  } else {
    throw ConfigError("model.initial", "expected bump, cosine, mixed or constant");
  }
  if (auto v = optional_key(map, "model.bump_a")) c.initial.a = to_double("model.bump_a", *v);
  if (auto v = optional_key(map, "model.bump_b")) c.initial.b = to_double("model.bump_b", *v);
  if (auto v = optional_key(map, "model.initial_value")) {
    c.initial.value = to_double("model.initial_value", *v);
  }

  if (auto v = optional_key(map, "stability.mode")) {
    if (*v == "off") {
      c.stability = StabilityMode::off;
    } else if (*v == "warn") {
      c.stability = StabilityMode::warn;
    } else if (*v == "strict") {
      c.stability = StabilityMode::strict;
    } else {
      throw ConfigError("stability.mode", "expected off, warn or strict");
    }
  }
  if (auto v = optional_key(map, "stability.cadence")) {
    c.cadence = to_int<int>("stability.cadence", *v);
  }
  if (auto v = optional_key(map, "output.dir")) c.output_dir = *v;

  validate_config(c);
  return c;
}

SimulationConfig parse_config(std::istream& in) { return config_from_map(read_config_map(in)); }

void validate_config(const SimulationConfig& c) {
  if (c.grid_n.has_value() == !c.cloud_path.empty()) {
    throw ConfigError("discretization.grid", "give exactly one of grid or cloud");
  }
  if (c.grid_n && *c.grid_n < 3) throw ConfigError("discretization.grid", "need n >= 3");
  if (c.star_size < kMinStarSize) {
    throw ConfigError("discretization.star_size", "must be at least 5");
  }
  if (!(c.weight_power > 0.0)) throw ConfigError("discretization.weight_power", "must be > 0");
  if (!(c.dt > 0.0) || !std::isfinite(c.dt)) throw ConfigError("time.dt", "must be > 0");
  if (!(c.t_final > 0.0)) throw ConfigError("time.t_final", "must be > 0");
  if (!is_multiple(c.t_final, c.dt)) {
    throw ConfigError("time.t_final", "must be a multiple of dt");
  }
  auto check_times = [&](const std::vector<double>& times, const std::string& key) {
    for (double t : times) {
      if (t < 0.0) throw ConfigError(key, "times must be non-negative");
      if (!is_multiple(t, c.dt)) {
        throw ConfigError(key, format_time(t) + " is not a multiple of dt");
      }
      if (t > c.t_final + 1e-9) {
        throw ConfigError("time.t_final", "must be at least " + format_time(t));
      }
    }
  };
  check_times(c.report_times, "time.report_times");
  check_times(c.snapshot_times, "time.snapshot_times");
  if (c.gamma != "gamma1" && c.gamma != "gamma2") {
    throw ConfigError("model.gamma", "expected gamma1 or gamma2");
  }
  if (!(c.mu >= 0.0) || !std::isfinite(c.mu)) throw ConfigError("model.mu", "must be >= 0");
  if (c.initial.kind == InitialKind::bump) {
    if (!(c.initial.a > 0.0)) throw ConfigError("model.bump_a", "must be > 0");
    if (!(c.initial.b > 0.0)) throw ConfigError("model.bump_b", "must be > 0");
  }
  if (c.initial.kind == InitialKind::constant && !(c.initial.value > 0.0)) {
    throw ConfigError("model.initial_value", "must be > 0");
  }
  if (c.cadence < 1) throw ConfigError("stability.cadence", "must be >= 1");
}

std::vector<std::string> preset_names() {
  return {"example1",        "example2",          "example3-gamma1",
          "example3-gamma2", "example1-irregular", "example2-irregular"};
}

std::string preset_text(const std::string& name) {
  const std::string bump = "initial = bump\nbump_a = 0.1\nbump_b = 5";
  const std::string grid = "grid = 19";
  if (name == "example1") return preset_body(grid, "gamma1", "3", bump, kExample12Times, "10");
  if (name == "example2") {
    return preset_body(grid, "gamma2", "5", "initial = cosine", kExample12Times, "10");
  }
  if (name == "example3-gamma1" || name == "example3-gamma2") {
    return preset_body(grid, name.substr(9), "5", "initial = mixed", kExample3Times, "2.5");
  }
  if (name == "example1-irregular") {
    return preset_body(irregular_cloud(), "gamma1", "3", bump, kExample12Times, "10");
  }
  if (name == "example2-irregular") {
    return preset_body(irregular_cloud(), "gamma2", "5", "initial = cosine", kExample12Times,
                       "10");
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

ConfigMap preset_map(const std::string& name) {
  std::istringstream in(preset_text(name));
  return read_config_map(in);
}

SimulationConfig preset(const std::string& name) { return config_from_map(preset_map(name)); }

PointCloud build_cloud(const SimulationConfig& c) {
  if (c.grid_n) return add_fictitious_nodes(build_regular_grid(*c.grid_n, unit_square));
  std::ifstream in(c.cloud_path);
  if (!in) throw ConfigError("discretization.cloud", "cannot open '" + c.cloud_path + "'");
  return add_fictitious_nodes(load_cloud(in));
}

InitialCondition make_initial(const SimulationConfig& c) {
  switch (c.initial.kind) {
    case InitialKind::bump:
      return initial_bump(c.initial.a, c.initial.b);
    case InitialKind::cosine:
      return initial_cosine();
    case InitialKind::mixed:
      return initial_mixed();
    case InitialKind::constant:
      return initial_constant(c.initial.value);
  }
  throw ConfigError("model.initial", "unhandled initial condition");
}

ModelParams make_params(const SimulationConfig& c) {
  ModelParams p;
  p.mu = c.mu;
  p.gamma = motility_by_name(c.gamma);
  return p;
}

RunSettings make_settings(const SimulationConfig& c) {
  RunSettings s;
  s.dt = c.dt;
  s.t_final = c.t_final;
  s.report_times = c.report_times;
  s.snapshot_times = c.snapshot_times;
  s.stability = c.stability;
  s.stability_cadence = c.cadence;
  return s;
}

void write_snapshot_csv(const PointCloud& cloud, const Eigen::VectorXd& U,
                        const Eigen::VectorXd& V, std::ostream& out) {
  out << "id,x,y,kind,U,V\n" << std::setprecision(17);
  for (const auto& node : cloud.nodes()) {
    const auto i = static_cast<Eigen::Index>(node.id);
    out << node.id << ',' << node.position.x() << ',' << node.position.y() << ','
        << static_cast<int>(node.kind) << ',' << U(i) << ',' << V(i) << '\n';
  }
}

void write_bounds_csv(const std::vector<BoundRecord>& bounds, std::ostream& out) {
  out << "step,t,dt,bound,limiting_node,non_informative,dt_ok\n" << std::setprecision(17);
  for (const auto& b : bounds) {
    out << b.step << ',' << b.time << ',' << b.dt << ',' << b.global_bound << ',';
    if (b.limiting_node) out << *b.limiting_node;
    out << ',' << b.non_informative << ',' << (b.dt <= b.global_bound ? 1 : 0) << '\n';
  }
}

RunOutcome run_command(const SimulationConfig& config, std::ostream& log) {
  validate_config(config);
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);

  Simulation sim(build_cloud(config), config.star_size, WeightScheme(config.weight_power),
                 make_params(config));
  log << "cloud: " << sim.cloud().count(NodeKind::inner) << " inner, "
      << sim.cloud().count(NodeKind::boundary) << " boundary, "
      << sim.cloud().count(NodeKind::fictitious) << " fictitious\n";
  if (config.dump_stencils) {
    std::ofstream f;
    open_for_write(f, dir / "stencils.txt");
    write_stencil_table(sim.stencils(), f);
  }

  const Eigen::VectorXd u0 = eval_initial(make_initial(config), sim.cloud());
  RunOutcome outcome;
  try {
    outcome.result = sim.run(u0, make_settings(config));
  } catch (const RunAborted& e) {
    outcome.result = e.partial();
    outcome.aborted = true;
    outcome.message = e.what();
  }
  const RunResult& r = outcome.result;

  {
    std::ofstream f;
    open_for_write(f, dir / "errors.csv");
    write_error_csv(r.report, f);
  }
  if (config.stability != StabilityMode::off) {
    std::ofstream f;
    open_for_write(f, dir / "bounds.csv");
    write_bounds_csv(r.bounds, f);
  }
  for (const auto& snap : r.snapshots) {
    std::ofstream f;
    open_for_write(f, dir / ("snapshot_t" + format_time(snap.time) + ".csv"));
    write_snapshot_csv(sim.cloud(), snap.U, snap.V, f);
  }
  if (outcome.aborted) {
    std::ofstream f;
    open_for_write(f, dir / "last_state.csv");
    write_snapshot_csv(sim.cloud(), r.final_state.U, r.final_state.V, f);
  }

  log << std::setprecision(6);
  for (std::size_t i = 0; i < r.report.size(); ++i) {
    log << "t = " << r.report.times[i] << "  |U-1| = " << r.report.err_u[i]
        << "  |V-1| = " << r.report.err_v[i] << '\n';
  }
  if (!r.warnings.empty()) {
    log << "warning: " << r.warnings.front();
    if (r.warnings.size() > 1) log << " (+" << r.warnings.size() - 1 << " more, see bounds.csv)";
    log << '\n';
  }
  if (outcome.aborted) {
    log << "aborted at step " << r.final_state.step << ": " << outcome.message << '\n';
  }
  return outcome;
}

ConvergenceStudy study_command(const std::vector<int>& resolutions, int star_size,
                               double weight_power, const std::string& output_dir,
                               std::ostream& log) {
  const ConvergenceStudy study =
      manufactured_elliptic_study(resolutions, star_size, WeightScheme(weight_power));
  fs::create_directories(output_dir);
  std::ofstream f;
  open_for_write(f, fs::path(output_dir) / "convergence.csv");
  write_convergence_csv(study, f);
  log << std::setprecision(6);
  for (std::size_t i = 0; i < study.resolutions.size(); ++i) {
    log << "n = " << study.resolutions[i] << "  h = " << study.spacings[i]
        << "  max error = " << study.errors[i] << '\n';
  }
  log << "fitted order " << study.order << '\n';
  return study;
}

CompareOutcome compare_command(const SimulationConfig& base, std::ostream& log) {
  CompareOutcome out;
  SimulationConfig a = base;
  SimulationConfig b = base;
  a.gamma = "gamma1";
  b.gamma = "gamma2";
  a.output_dir = (fs::path(base.output_dir) / "gamma1").string();
  b.output_dir = (fs::path(base.output_dir) / "gamma2").string();
  log << "[gamma1]\n";
  out.a = run_command(a, log);
  log << "[gamma2]\n";
  out.b = run_command(b, log);
  if (out.a.aborted || out.b.aborted) {
    throw Error("compare: a run aborted; partial results are under " + base.output_dir);
  }
  out.table = comparison_report(out.a.result.report, out.b.result.report);
  std::ofstream f;
  open_for_write(f, fs::path(base.output_dir) / "dominance.csv");
  write_dominance_csv(out.a.result.report, out.b.result.report, out.table, f);
  log << "gamma1 below gamma2 at every time: U " << (out.table.u_dominates ? "yes" : "no")
      << ", V " << (out.table.v_dominates ? "yes" : "no") << '\n';
  return out;
}

HypothesisReport validate_command(const SimulationConfig& config, std::ostream& log) {
  const ModelParams params = make_params(config);
  const HypothesisReport h = validate_hypotheses(params);
  log << std::setprecision(6) << params.gamma.name << ": mu0 = " << h.mu0
      << ", c_gamma = " << h.c_gamma << ", sign chain " << (h.sign_chain_ok ? "ok" : "violated")
      << ", mu = " << params.mu << " -> " << (h.passes ? "hypotheses hold" : "hypotheses fail")
      << '\n';
  return h;
}

namespace {

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

constexpr FlagSpec kConfigFlags[] = {
    {"--grid", "discretization.grid", "n x n regular grid of the unit square"},
    {"--cloud", "discretization.cloud", "point cloud file"},
    {"--star-size", "discretization.star_size", "neighbours per star"},
    {"--weight-power", "discretization.weight_power", "weight exponent p"},
    {"--seed", "discretization.seed", "seed for cloud utilities"},
    {"--dt", "time.dt", "time step"},
    {"--t-final", "time.t_final", "final time"},
    {"--report-times", "time.report_times", "comma separated report times"},
    {"--snapshot-times", "time.snapshot_times", "comma separated snapshot times"},
    {"--gamma", "model.gamma", "gamma1 or gamma2"},
    {"--mu", "model.mu", "logistic rate"},
    {"--initial", "model.initial", "bump, cosine, mixed or constant"},
    {"--bump-a", "model.bump_a", "bump offset a"},
    {"--bump-b", "model.bump_b", "bump amplitude b"},
    {"--initial-value", "model.initial_value", "value for the constant initial condition"},
    {"--stability", "stability.mode", "off, warn or strict"},
    {"--cadence", "stability.cadence", "steps between stability checks"},
    {"--output-dir", "output.dir", "directory for all outputs"},
};

struct ConfigOptions {
  std::string preset;
  std::string config_file;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

void add_config_options(CLI::App* app, ConfigOptions& opts) {
  app->add_option("--preset", opts.preset, "built-in configuration");
  app->add_option("--config", opts.config_file, "configuration file")->check(CLI::ExistingFile);
  for (const auto& spec : kConfigFlags) {
    opts.options[spec.key] = app->add_option(spec.flag, opts.values[spec.key], spec.help);
  }
}

ConfigMap collect(const ConfigOptions& opts, const std::string& preset_name) {
  ConfigMap map;
  if (!preset_name.empty()) map = preset_map(preset_name);
  if (!opts.config_file.empty()) {
    std::ifstream in(opts.config_file);
    for (auto& [k, v] : read_config_map(in)) map[k] = v;
  }
  for (const auto& [key, option] : opts.options) {
    if (option->count() == 0) continue;
    map[key] = opts.values.at(key);
    if (key == "discretization.grid") map.erase("discretization.cloud");
    if (key == "discretization.cloud") map.erase("discretization.grid");
  }
  return map;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meshless GFD solver for the parabolic-elliptic chemotaxis system"};
  app.require_subcommand(1);

  ConfigOptions run_opts;
  bool dump_stencils = false;
  auto* run = app.add_subcommand("run", "run one simulation");
  add_config_options(run, run_opts);
  run->add_flag("--dump-stencils", dump_stencils, "write the stencil coefficient table");

  std::vector<int> resolutions{11, 21, 41};
  int study_s = kDefaultStarSize;
  double study_p = 1.0;
  std::string study_dir = ".";
  auto* study = app.add_subcommand("study", "manufactured-solution convergence study");
  study->add_option("--resolutions", resolutions, "grid sizes")->delimiter(',');
  study->add_option("--star-size", study_s, "neighbours per star");
  study->add_option("--weight-power", study_p, "weight exponent p");
  study->add_option("--output-dir", study_dir, "directory for convergence.csv");

  ConfigOptions cmp_opts;
  auto* compare = app.add_subcommand("compare", "run gamma1 and gamma2 and compare errors");
  add_config_options(compare, cmp_opts);

  ConfigOptions val_opts;
  auto* validate = app.add_subcommand("validate", "check the motility hypotheses");
  add_config_options(validate, val_opts);

  int cloud_n = 19;
  double cloud_jitter = 0.25;
  std::uint64_t cloud_seed = 1;
  std::string cloud_out;
  auto* cloud = app.add_subcommand("cloud", "write a perturbed-grid point cloud");
  cloud->add_option("--grid", cloud_n, "base grid size");
  cloud->add_option("--jitter", cloud_jitter, "jitter in grid spacings");
  cloud->add_option("--seed", cloud_seed, "random seed");
  cloud->add_option("--out", cloud_out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      SimulationConfig c = config_from_map(collect(run_opts, run_opts.preset));
      c.dump_stencils = dump_stencils;
      const RunOutcome o = run_command(c, std::cout);
      return o.aborted ? 2 : 0;
    }
    if (study->parsed()) {
      study_command(resolutions, study_s, study_p, study_dir, std::cout);
      return 0;
    }
    if (compare->parsed()) {
      const std::string name = cmp_opts.preset == "example3" ? "example3-gamma1" : cmp_opts.preset;
      compare_command(config_from_map(collect(cmp_opts, name)), std::cout);
      return 0;
    }
    if (validate->parsed()) {
      ConfigMap map = collect(val_opts, val_opts.preset);
      SimulationConfig c;
      if (auto it = map.find("model.gamma"); it != map.end()) c.gamma = it->second;
      c.mu = to_double("model.mu", required(map, "model.mu"));
      if (c.gamma != "gamma1" && c.gamma != "gamma2") {
        throw ConfigError("model.gamma", "expected gamma1 or gamma2");
      }
      return validate_command(c, std::cout).passes ? 0 : 1;
    }
    if (cloud->parsed()) {
      const PointCloud pc = build_perturbed_grid(cloud_n, unit_square, cloud_jitter, cloud_seed);
      std::ofstream f;
      open_for_write(f, cloud_out);
      f << "# perturbed " << cloud_n << "x" << cloud_n << " grid, jitter " << cloud_jitter
        << " spacings, seed " << cloud_seed << '\n';
      save_cloud(pc, f);
      std::cout << "wrote " << pc.size() << " nodes to " << cloud_out << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace gfd::cli
