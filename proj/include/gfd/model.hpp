#pragma once

#include "gfd/geometry.hpp"

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>

namespace gfd {

/// gamma(s) and its first three derivatives at one point.
struct MotilityValues {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

/// Motility regulation gamma(v). User-defined functions must supply all
/// three derivatives explicitly.
struct MotilityFunction {
  using Fn = std::function<double(double)>;

  std::string name;
  Fn eval;
  Fn d1;
  Fn d2;
  Fn d3;
  /// Exact suprema over s >= 0, when known in closed form. They replace the
  /// sampled estimates in validate_hypotheses.
  std::optional<double> exact_mu0;
  std::optional<double> exact_c_gamma;
};

/// gamma_1(s) = exp(-s).
MotilityFunction gamma_exponential();
/// gamma_2(s) = 1 / (1 + s)^2.
MotilityFunction gamma_inverse_square();
/// Built-in by name: "gamma1" or "gamma2".
MotilityFunction motility_by_name(const std::string& name);

/// Throws DomainError for s < 0 or non-finite s.
MotilityValues gamma_derivatives(const MotilityFunction& g, double s);

struct ModelParams {
  double mu = 3.0;
  MotilityFunction gamma = gamma_exponential();
};

struct HypothesisReport {
  /// sup_{s>=0} -2 gamma'(s) + gamma''(s) s
  double mu0 = 0.0;
  /// sup_{s>=0} gamma'(s)^2 / gamma(s)
  double c_gamma = 0.0;
  bool sign_chain_ok = false;
  bool passes = false;
};

inline constexpr double kDefaultHypothesisSMax = 50.0;
inline constexpr int kDefaultHypothesisSamples = 100000;

/// Samples [0, s_max] (uniform grid plus a geometric refinement towards both
/// ends) to estimate mu0 and c_gamma and check the sign chain
/// gamma >= 0, gamma' <= 0, gamma'' >= 0, gamma''' <= 0.
HypothesisReport validate_hypotheses(const ModelParams& params,
                                     double s_max = kDefaultHypothesisSMax,
                                     int n_samples = kDefaultHypothesisSamples);

struct InitialCondition {
  std::string name;
  std::function<double(const Point&)> eval;
};

/// a + b phi(r), phi(r) = exp(-1 / (0.25 - r^2)) for r < 1/2 and 0 otherwise,
/// r the Euclidean distance to (1/2, 1/2). Requires a, b > 0.
InitialCondition initial_bump(double a, double b);
/// 6 + 5 cos(pi x).
InitialCondition initial_cosine();
/// 1 + 50 cos(pi y) exp(-1 / (x (1 - x))) on 0 < x < 1, else 1.
InitialCondition initial_mixed();
/// u0 = c everywhere.
InitialCondition initial_constant(double c);

/// u0 at every node; fictitious nodes copy their mirror. Throws
/// HypothesisViolation if u0 <= 0 at any non-fictitious node.
Eigen::VectorXd eval_initial(const InitialCondition& ic, const PointCloud& cloud);

}  // namespace gfd
