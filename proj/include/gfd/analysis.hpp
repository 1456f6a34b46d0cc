#pragma once

#include "gfd/geometry.hpp"
#include "gfd/model.hpp"
#include "gfd/norms.hpp"
#include "gfd/solver.hpp"
#include "gfd/stencil.hpp"

#include <iosfwd>
#include <vector>

namespace gfd {

struct ConvergenceStudy {
  std::vector<int> resolutions;
  std::vector<double> spacings;
  /// max |V - v_exact| over inner and boundary nodes.
  std::vector<double> errors;
  double order = 0.0;
};

/// Least-squares slope of log(error) against log(h).
double fit_order(const std::vector<double>& spacings, const std::vector<double>& errors);

/// Solves the elliptic equation on n x n grids of the unit square with
/// u = (1 + 2 pi^2) cos(pi x) cos(pi y), whose exact solution
/// v = cos(pi x) cos(pi y) satisfies the Neumann condition.
ConvergenceStudy manufactured_elliptic_study(const std::vector<int>& resolutions,
                                             int star_size = kDefaultStarSize,
                                             const WeightScheme& scheme = WeightScheme{});

/// Re-evaluates the u right-hand side term by term straight from the raw
/// lambda coefficients and returns max |parabolic_rhs - oracle| over all
/// stencil centres.
double rhs_oracle_compare(const State& state, const StencilSet& stencils,
                          const ModelParams& params);

/// Term-by-term right-hand side used by rhs_oracle_compare.
Eigen::VectorXd rhs_oracle(const State& state, const StencilSet& stencils,
                           const ModelParams& params);

struct DominanceTable {
  std::vector<double> times;
  /// err_a < err_b at each time.
  std::vector<bool> u_smaller;
  std::vector<bool> v_smaller;
  bool u_dominates = false;
  bool v_dominates = false;
  bool full_dominance() const { return u_dominates && v_dominates; }
};

/// Compares report a against report b time by time. Throws ComparisonError
/// when the time lists differ.
DominanceTable comparison_report(const ErrorReport& a, const ErrorReport& b);

/// CSV `t,err_u_a,err_u_b,u_a_smaller,err_v_a,err_v_b,v_a_smaller`.
void write_dominance_csv(const ErrorReport& a, const ErrorReport& b, const DominanceTable& table,
                         std::ostream& out);

void write_convergence_csv(const ConvergenceStudy& study, std::ostream& out);

}  // namespace gfd
