#include "gfd/model.hpp"

#include "gfd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace gfd {

MotilityFunction gamma_exponential() {
  MotilityFunction g;
  g.name = "gamma1";
  g.eval = [](double s) { return std::exp(-s); };
  g.d1 = [](double s) { return -std::exp(-s); };
  g.d2 = [](double s) { return std::exp(-s); };
  g.d3 = [](double s) { return -std::exp(-s); };
  // (2 + s) e^{-s} is decreasing on s >= 0; gamma'^2 / gamma = e^{-s}.
  g.exact_mu0 = 2.0;
  g.exact_c_gamma = 1.0;
  return g;
}

MotilityFunction gamma_inverse_square() {
  MotilityFunction g;
  g.name = "gamma2";
  g.eval = [](double s) { return 1.0 / ((1.0 + s) * (1.0 + s)); };
  g.d1 = [](double s) { return -2.0 / std::pow(1.0 + s, 3); };
  g.d2 = [](double s) { return 6.0 / std::pow(1.0 + s, 4); };
  g.d3 = [](double s) { return -24.0 / std::pow(1.0 + s, 5); };
  // 4/(1+s)^3 + 6s/(1+s)^4 is decreasing on s >= 0; gamma'^2 / gamma = 4/(1+s)^4.
  g.exact_mu0 = 4.0;
  g.exact_c_gamma = 4.0;
  return g;
}

MotilityFunction motility_by_name(const std::string& name) {
  if (name == "gamma1") return gamma_exponential();
  if (name == "gamma2") return gamma_inverse_square();
  throw std::invalid_argument("unknown motility function '" + name +
                              "' (expected gamma1 or gamma2)");
}

MotilityValues gamma_derivatives(const MotilityFunction& g, double s) {
  if (!(s >= 0.0) || !std::isfinite(s)) {
    std::ostringstream msg;
    msg << "motility function '" << g.name << "' evaluated at s = " << s << " < 0";
    throw DomainError(msg.str());
  }
  return {g.eval(s), g.d1(s), g.d2(s), g.d3(s)};
}

HypothesisReport validate_hypotheses(const ModelParams& params, double s_max, int n_samples) {
  if (!(s_max > 0.0)) throw std::invalid_argument("s_max must be positive");
  if (n_samples < 100) throw std::invalid_argument("n_samples must be >= 100");

  const auto& g = params.gamma;
  std::vector<double> samples;
  samples.reserve(static_cast<std::size_t>(n_samples) + 200);
  for (int i = 0; i < n_samples; ++i) {
    samples.push_back(s_max * static_cast<double>(i) / static_cast<double>(n_samples - 1));
  }
  // Geometric refinement near both endpoints.
  for (int k = 1; k <= 100; ++k) {
    const double t = s_max * std::pow(10.0, -0.1 * k);
    samples.push_back(t);
    samples.push_back(s_max - t);
  }

  HypothesisReport rep;
  rep.mu0 = -std::numeric_limits<double>::infinity();
  rep.c_gamma = 0.0;
  rep.sign_chain_ok = true;
  for (double s : samples) {
    const MotilityValues v = gamma_derivatives(g, s);
    if (v.value < 0.0 || v.d1 > 0.0 || v.d2 < 0.0 || v.d3 > 0.0) rep.sign_chain_ok = false;
    rep.mu0 = std::max(rep.mu0, -2.0 * v.d1 + v.d2 * s);
    if (v.value > 0.0) {
      rep.c_gamma = std::max(rep.c_gamma, v.d1 * v.d1 / v.value);
    } else if (v.d1 != 0.0) {
      rep.c_gamma = std::numeric_limits<double>::infinity();
    }
  }
  if (g.exact_mu0) rep.mu0 = *g.exact_mu0;
  if (g.exact_c_gamma) rep.c_gamma = *g.exact_c_gamma;
  rep.passes = rep.sign_chain_ok && rep.mu0 < params.mu && std::isfinite(rep.c_gamma);
  return rep;
}

InitialCondition initial_bump(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("bump initial condition needs a > 0 and b > 0");
  }
  return {"bump", [a, b](const Point& p) {
            const double r = std::hypot(p.x() - 0.5, p.y() - 0.5);
            const double phi = r < 0.5 ? std::exp(-1.0 / (0.25 - r * r)) : 0.0;
            return a + b * phi;
          }};
}

InitialCondition initial_cosine() {
  return {"cosine", [](const Point& p) { return 6.0 + 5.0 * std::cos(std::numbers::pi * p.x()); }};
}

InitialCondition initial_mixed() {
  return {"mixed", [](const Point& p) {
            const double x = p.x();
            if (!(x > 0.0 && x < 1.0)) return 1.0;
            return 1.0 + 50.0 * std::cos(std::numbers::pi * p.y()) * std::exp(-1.0 / (x * (1.0 - x)));
          }};
}

InitialCondition initial_constant(double c) {
  return {"constant", [c](const Point&) { return c; }};
}

Eigen::VectorXd eval_initial(const InitialCondition& ic, const PointCloud& cloud) {
  Eigen::VectorXd u(static_cast<Eigen::Index>(cloud.size()));
  for (const auto& node : cloud.nodes()) {
    if (node.kind == NodeKind::fictitious) continue;
    const double value = ic.eval(node.position);
    if (!(value > 0.0) || !std::isfinite(value)) {
      std::ostringstream msg;
      msg << "initial condition '" << ic.name << "' is " << value << " at node " << node.id
          << "; u0 must be strictly positive";
      throw HypothesisViolation(msg.str());
    }
    u(static_cast<Eigen::Index>(node.id)) = value;
  }
  for (const auto& node : cloud.nodes()) {
    if (node.kind == NodeKind::fictitious) {
      u(static_cast<Eigen::Index>(node.id)) = u(static_cast<Eigen::Index>(*node.mirror_id));
    }
  }
  return u;
}

}  // namespace gfd
