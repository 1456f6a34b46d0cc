// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include "gfd/analysis.hpp"
#include "gfd/cli.hpp"
#include "gfd/errors.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#ifndef GFD_CLI_EXE
#error "GFD_CLI_EXE must name the gfd_chemotaxis executable"
#endif

using namespace gfd;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, const std::string& title, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << title << "  | "
            << detail << std::endl;
  if (!pass) ++failures;
}

bool within(double got, double want, double rel) { return std::abs(got - want) <= rel * want; }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(5);
  s << v;
  return s.str();
}

double at(const ErrorReport& r, const std::vector<double>& which, double t) {
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (std::abs(r.times[i] - t) < 1e-12) return which[i];
  }
  throw std::runtime_error("no report at t = " + fmt(t));
}

struct PresetRun {
  ErrorReport report;
  double seconds = 0.0;
  bool aborted = false;
};

PresetRun run_preset(const std::string& name) {
  cli::SimulationConfig c = cli::preset(name);
  c.output_dir = (fs::temp_directory_path() / ("gfd_acceptance_" + name)).string();
  std::ostringstream log;
  const auto t0 = std::chrono::steady_clock::now();
  const cli::RunOutcome o = cli::run_command(c, log);
  PresetRun r;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.report = o.result.report;
  r.aborted = o.aborted;
  fs::remove_all(c.output_dir);
  return r;
}

std::map<std::string, PresetRun>& runs() {
  static std::map<std::string, PresetRun> cache;
  return cache;
}

const PresetRun& preset_run(const std::string& name) {
  auto it = runs().find(name);
  if (it == runs().end()) it = runs().emplace(name, run_preset(name)).first;
  return it->second;
}

template <typename F>
void criterion(int id, const std::string& title, F&& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, title, false, std::string("exception: ") + e.what());
  }
}

void table1() {
  const PresetRun& r = preset_run("example1");
  const auto& u = r.report.err_u;
  const auto& v = r.report.err_v;
  const ErrorReport& e = r.report;
  bool ok = !r.aborted && r.seconds <= 30.0;
  ok = ok && within(at(e, u, 0.05), 0.8777, 0.10) && within(at(e, u, 1), 0.2821, 0.10) &&
       within(at(e, u, 2.5), 0.0043, 0.50) && at(e, u, 5) < 1e-4 && at(e, u, 10) < 1e-8;
  ok = ok && within(at(e, v, 0.05), 0.8721, 0.10) && within(at(e, v, 1), 0.2827, 0.10) &&
       within(at(e, v, 2.5), 0.0043, 0.50) && at(e, v, 5) < 1e-4 && at(e, v, 10) < 1e-8;
  std::ostringstream d;
  d << "U " << fmt(at(e, u, 0.05)) << ' ' << fmt(at(e, u, 1)) << ' ' << fmt(at(e, u, 2.5)) << ' '
    << fmt(at(e, u, 5)) << ' ' << fmt(at(e, u, 10)) << "; V " << fmt(at(e, v, 0.05)) << ' '
    << fmt(at(e, v, 1)) << ' ' << fmt(at(e, v, 2.5)) << ' ' << fmt(at(e, v, 5)) << ' '
    << fmt(at(e, v, 10)) << "; " << fmt(r.seconds) << " s";
  report(1, "Example 1 table", ok, d.str());
}

void table2() {
  const PresetRun& r = preset_run("example2");
  const ErrorReport& e = r.report;
  const auto& u = e.err_u;
  const auto& v = e.err_v;
  const bool ok = !r.aborted && within(at(e, u, 0.05), 2.3649, 0.10) &&
                  within(at(e, v, 0.05), 1.6528, 0.10) && at(e, u, 2.5) < 1e-4 &&
                  at(e, v, 2.5) < 1e-4 && at(e, u, 10) < 1e-8 && at(e, v, 10) < 1e-8;
  std::ostringstream d;
  d << "t=0.05 U " << fmt(at(e, u, 0.05)) << " V " << fmt(at(e, v, 0.05)) << "; t=2.5 U "
    << fmt(at(e, u, 2.5)) << " V " << fmt(at(e, v, 2.5)) << "; t=10 U " << fmt(at(e, u, 10))
    << " V " << fmt(at(e, v, 10));
  report(2, "Example 2 table", ok, d.str());
}

void tables34() {
  const PresetRun& a = preset_run("example3-gamma1");
  const PresetRun& b = preset_run("example3-gamma2");
  bool dominance = !a.aborted && !b.aborted;
  for (double t : {0.05, 0.1, 0.25, 0.5, 1.0}) {
    dominance = dominance && at(a.report, a.report.err_u, t) < at(b.report, b.report.err_u, t) &&
                at(a.report, a.report.err_v, t) < at(b.report, b.report.err_v, t);
  }
  const double ua = at(a.report, a.report.err_u, 0.05);
  const double ub = at(b.report, b.report.err_u, 0.05);
  const bool ok = dominance && within(ua, 0.4314, 0.15) && within(ub, 0.5206, 0.15);
  report(3, "Example 3 dominance", ok,
         std::string("gamma1 below gamma2 at all times: ") + (dominance ? "yes" : "no") +
             "; t=0.05 U gamma1 " + fmt(ua) + " gamma2 " + fmt(ub));
}

void quadratic_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  test::Rng rng(4);
  int accepted = 0;
  double worst = 0.0;
  const Derivative five[] = {Derivative::dx, Derivative::dy, Derivative::dxx, Derivative::dyy,
                             Derivative::dxy};
  while (accepted < 200) {
    const PointCloud c = test::random_cloud(rng, rng.integer(20, 100));
    const int s = rng.pick(std::vector<int>{5, 8, 12});
    const Index center = static_cast<Index>(rng.integer(0, static_cast<int>(c.size()) - 1));
    Stencil st;
    try {
      st = build_stencil(select_star(c, center, s), WeightScheme{});
    } catch (const DegenerateStar&) {
      continue;
    }
    ++accepted;
    const test::Quadratic q = test::Quadratic::random(rng);
    const Eigen::VectorXd f = test::sample(c, q);
    const Point p = c.node(center).position;
    const double exact[5] = {q.dx(p.x(), p.y()), q.dy(p.x(), p.y()), q.dxx(), q.dyy(), q.dxy()};
    for (int r = 0; r < 5; ++r) worst = std::max(worst, test::rel_err(apply(st, f, five[r]), exact[r]));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report(4, "quadratic exactness", worst <= 1e-10 && secs <= 5.0,
         "200 stars, worst relative error " + fmt(worst) + ", " + fmt(secs) + " s");
}

void equilibrium() {
  Simulation sim(add_fictitious_nodes(build_regular_grid(19)), 8, WeightScheme{},
                 ModelParams{3.0, gamma_exponential()});
  State s = sim.initial_state(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(sim.cloud().size())));
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    s = sim.advance(s, 1e-3);
    worst = std::max({worst, linf_vs_one(s.U, sim.cloud()), linf_vs_one(s.V, sim.cloud())});
  }
  report(5, "equilibrium preservation", worst <= 1e-12, "max error over 1000 steps " + fmt(worst));
}

void logistic() {
  Simulation sim(add_fictitious_nodes(build_regular_grid(19)), 8, WeightScheme{},
                 ModelParams{3.0, gamma_exponential()});
  const double exact = 1.0 / (1.0 + (1.0 / 0.5 - 1.0) * std::exp(-3.0));
  auto error_at_one = [&](double dt) {
    RunSettings rs;
    rs.dt = dt;
    rs.t_final = 1.0;
    rs.stability = StabilityMode::off;
    const RunResult r =
        sim.run(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(sim.cloud().size()), 0.5), rs);
    double e = 0.0;
    for (const auto& n : sim.cloud().nodes()) {
      if (n.kind != NodeKind::fictitious) {
        e = std::max(e, std::abs(r.final_state.U(static_cast<Eigen::Index>(n.id)) - exact));
      }
    }
    return e;
  };
  const double e1 = error_at_one(1e-3);
  const double e2 = error_at_one(5e-4);
  const double ratio = e1 / e2;
  report(6, "logistic consistency", ratio >= 1.8 && ratio <= 2.2,
         "errors " + fmt(e1) + " / " + fmt(e2) + ", ratio " + fmt(ratio));
}

void manufactured() {
  const ConvergenceStudy s = manufactured_elliptic_study({11, 21, 41});
  const bool ok = s.errors[0] > s.errors[1] && s.errors[1] > s.errors[2] && s.order >= 1.0;
  report(7, "manufactured elliptic study", ok,
         "errors " + fmt(s.errors[0]) + " " + fmt(s.errors[1]) + " " + fmt(s.errors[2]) +
             ", order " + fmt(s.order));
}

void stability() {
  const cli::SimulationConfig c = cli::preset("example1");
  Simulation sim(cli::build_cloud(c), c.star_size, WeightScheme(c.weight_power),
                 cli::make_params(c));
  const Eigen::VectorXd u0 = eval_initial(cli::make_initial(c), sim.cloud());
  const StabilityBound b = stability_bound(sim.initial_state(u0), sim.stencils(), sim.params());
  const bool positive = b.global > 0.0 && std::isfinite(b.global);
  const bool exceeds = b.global > 1e-3;

  RunSettings rs = cli::make_settings(c);
  rs.dt = 10.0 * b.global;
  rs.t_final = 10 * rs.dt;
  rs.report_times.clear();
  rs.stability = StabilityMode::strict;
  bool aborted = false;
  try {
    sim.run(u0, rs);
  } catch (const RunAborted& e) {
    aborted = std::string(e.what()).find("stability") != std::string::npos;
  }
  std::ostringstream d;
  d << "bound at t=0 " << fmt(b.global) << " (positive " << (positive ? "yes" : "no")
    << ", > 1e-3 " << (exceeds ? "yes" : "no") << "); strict abort at 10x bound "
    << (aborted ? "yes" : "no");
  report(8, "stability monitor", positive && exceeds && aborted, d.str());
}

void asymptotic() {
  bool ok = true;
  std::ostringstream d;
  for (const char* name : {"example1", "example2", "example3-gamma1", "example3-gamma2"}) {
    const PresetRun& r = preset_run(name);
    double prev = std::numeric_limits<double>::infinity();
    bool mono = !r.aborted;
    for (std::size_t i = 0; i < r.report.size(); ++i) {
      if (r.report.times[i] < 1.0) continue;
      const double sum = r.report.err_u[i] + r.report.err_v[i];
      mono = mono && sum < prev;
      prev = sum;
    }
    d << name << (mono ? " ok " : " NOT monotone ");
    ok = ok && mono;
  }
  report(9, "asymptotic decay", ok, d.str());
}

void determinism() {
  const fs::path base = fs::temp_directory_path() / "gfd_acceptance_determinism";
  fs::remove_all(base);
  std::string csv[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = base / std::to_string(i);
    const std::string cmd = std::string("\"") + GFD_CLI_EXE + "\" run --preset example1 --output-dir \"" +
                            out.string() + "\" > /dev/null";
    if (std::system(cmd.c_str()) != 0) throw std::runtime_error("run --preset example1 failed");
    std::ifstream in(out / "errors.csv", std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    csv[i] = ss.str();
  }
  fs::remove_all(base);
  const bool ok = !csv[0].empty() && csv[0] == csv[1];
  report(10, "determinism", ok, std::to_string(csv[0].size()) + " bytes, identical: " +
                                    (csv[0] == csv[1] ? "yes" : "no"));
}

}  // namespace

int main() {
  criterion(1, "Example 1 table", table1);
  criterion(2, "Example 2 table", table2);
  criterion(3, "Example 3 dominance", tables34);
  criterion(4, "quadratic exactness", quadratic_exactness);
  criterion(5, "equilibrium preservation", equilibrium);
  criterion(6, "logistic consistency", logistic);
  criterion(7, "manufactured elliptic study", manufactured);
  criterion(8, "stability monitor", stability);
  criterion(9, "asymptotic decay", asymptotic);
  criterion(10, "determinism", determinism);
  std::cout << (10 - failures) << "/10 criteria passed" << std::endl;
  return failures;
}
