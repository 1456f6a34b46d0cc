#include "gfd/analysis.hpp"

#include "gfd/errors.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

namespace gfd {

void write_error_csv(const ErrorReport& report, std::ostream& out) {
  out << "t,err_u,err_v\n" << std::setprecision(17);
  for (std::size_t i = 0; i < report.size(); ++i) {
    out << report.times[i] << ',' << report.err_u[i] << ',' << report.err_v[i] << '\n';
  }
}

double fit_order(const std::vector<double>& spacings, const std::vector<double>& errors) {
  if (spacings.size() != errors.size() || spacings.size() < 2) {
    throw std::invalid_argument("order fit needs at least two (h, error) pairs");
  }
  const auto n = static_cast<Eigen::Index>(spacings.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (!(spacings[k] > 0.0) || !(errors[k] > 0.0)) {
      throw std::invalid_argument("order fit needs positive spacings and errors");
    }
    design(i, 0) = std::log(spacings[k]);
    design(i, 1) = 1.0;
    y(i) = std::log(errors[k]);
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(y);
  return coef(0);
}

ConvergenceStudy manufactured_elliptic_study(const std::vector<int>& resolutions, int star_size,
                                             const WeightScheme& scheme) {
  using std::numbers::pi;
  ConvergenceStudy study;
  int previous = 0;
  for (int n : resolutions) {
    if (n < 5) throw std::invalid_argument("manufactured study needs resolutions >= 5");
    if (n <= previous) throw std::invalid_argument("resolutions must be increasing");
    previous = n;

    const PointCloud cloud = add_fictitious_nodes(build_regular_grid(n, unit_square));
    const StencilSet stencils = build_stencil_set(cloud, star_size, scheme);
    const EllipticSystem system = assemble_elliptic(cloud, stencils);

    Eigen::VectorXd u = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cloud.size()));
    for (const auto& node : cloud.nodes()) {
      const double x = node.position.x();
      const double y = node.position.y();
      u(static_cast<Eigen::Index>(node.id)) =
          (1.0 + 2.0 * pi * pi) * std::cos(pi * x) * std::cos(pi * y);
    }
    const Eigen::VectorXd v = solve_elliptic(system, u);
    double err = 0.0;
    for (const auto& node : cloud.nodes()) {
      if (node.kind == NodeKind::fictitious) continue;
      const double exact = std::cos(pi * node.position.x()) * std::cos(pi * node.position.y());
      err = std::max(err, std::abs(v(static_cast<Eigen::Index>(node.id)) - exact));
    }
    study.resolutions.push_back(n);
    study.spacings.push_back(1.0 / (n - 1));
    study.errors.push_back(err);
  }
  if (study.errors.size() >= 2) study.order = fit_order(study.spacings, study.errors);
  return study;
}

Eigen::VectorXd rhs_oracle(const State& state, const StencilSet& stencils,
                           const ModelParams& params) {
  const Eigen::VectorXd& U = state.U;
  const Eigen::VectorXd& V = state.V;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(U.size());
  for (Index c : stencils.centers()) {
    const Stencil& st = stencils.at(c);
    const auto center = static_cast<Eigen::Index>(c);
    // -lambda_0r F_0 + sum_i lambda_ir F_i, straight from the coefficient table.
    auto derivative = [&](const Eigen::VectorXd& f, int r) {
      double sum = -st.lambda0(r) * f(center);
      for (std::size_t i = 0; i < st.neighbor_ids.size(); ++i) {
        sum += st.lambda(r, static_cast<Eigen::Index>(i)) *
               f(static_cast<Eigen::Index>(st.neighbor_ids[i]));
      }
      return sum;
    };
    const double u0 = U(center);
    const double v0 = V(center);
    const double gam = params.gamma.eval(v0);
    const double gam1 = params.gamma.d1(v0);
    const double gam2 = params.gamma.d2(v0);

    const double lap_u = derivative(U, 2) + derivative(U, 3);
    const double ux = derivative(U, 0);
    const double uy = derivative(U, 1);
    const double vx = derivative(V, 0);
    const double vy = derivative(V, 1);

    double total = 0.0;
    total += gam * lap_u;
    total += 2.0 * gam1 * ux * vx;
    total += 2.0 * gam1 * uy * vy;
    total += u0 * gam2 * (vx * vx + vy * vy);
    total += u0 * gam1 * (v0 - u0);
    total += params.mu * u0 * (1.0 - u0);
    out(center) = total;
  }
  return out;
}

double rhs_oracle_compare(const State& state, const StencilSet& stencils,
                          const ModelParams& params) {
  const Eigen::VectorXd production = parabolic_rhs(state, stencils, params);
  const Eigen::VectorXd oracle = rhs_oracle(state, stencils, params);
  return (production - oracle).cwiseAbs().maxCoeff();
}

DominanceTable comparison_report(const ErrorReport& a, const ErrorReport& b) {
  if (a.times != b.times) {
    throw ComparisonError("reports cover different time lists");
  }
  DominanceTable t;
  t.times = a.times;
  t.u_dominates = !a.times.empty();
  t.v_dominates = !a.times.empty();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool u = a.err_u[i] < b.err_u[i];
    const bool v = a.err_v[i] < b.err_v[i];
    t.u_smaller.push_back(u);
    t.v_smaller.push_back(v);
    t.u_dominates = t.u_dominates && u;
    t.v_dominates = t.v_dominates && v;
  }
  return t;
}

void write_dominance_csv(const ErrorReport& a, const ErrorReport& b, const DominanceTable& table,
                         std::ostream& out) {
  out << "t,err_u_a,err_u_b,u_a_smaller,err_v_a,err_v_b,v_a_smaller\n" << std::setprecision(17);
  for (std::size_t i = 0; i < table.times.size(); ++i) {
    out << table.times[i] << ',' << a.err_u[i] << ',' << b.err_u[i] << ','
        << (table.u_smaller[i] ? 1 : 0) << ',' << a.err_v[i] << ',' << b.err_v[i] << ','
        << (table.v_smaller[i] ? 1 : 0) << '\n';
  }
}

void write_convergence_csv(const ConvergenceStudy& study, std::ostream& out) {
  out << "n,h,max_error\n" << std::setprecision(17);
  for (std::size_t i = 0; i < study.resolutions.size(); ++i) {
    out << study.resolutions[i] << ',' << study.spacings[i] << ',' << study.errors[i] << '\n';
  }
  out << "# fitted order " << study.order << '\n';
}

}  // namespace gfd
