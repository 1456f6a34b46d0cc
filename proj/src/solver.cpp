#include "gfd/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

namespace gfd {

namespace {

Eigen::Index ix(Index i) { return static_cast<Eigen::Index>(i); }

}  // namespace

// ---------------------------------------------------------------------------
// Elliptic system

EllipticSystem::EllipticSystem(const PointCloud& cloud, const StencilSet& stencils) {
  const auto n = cloud.size();
  if (stencils.num_nodes() != n) {
    throw SolverSetupError("stencil set was built for a different cloud");
  }
  is_ghost_.assign(n, false);
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(n * static_cast<std::size_t>(stencils.star_size() + 1));
  for (const auto& node : cloud.nodes()) {
    const auto row = ix(node.id);
    if (node.kind == NodeKind::fictitious) {
      is_ghost_[node.id] = true;
      triplets.emplace_back(row, row, 1.0);
      triplets.emplace_back(row, ix(*node.mirror_id), -1.0);
      continue;
    }
    if (!stencils.contains(node.id)) {
      throw SolverSetupError("node " + std::to_string(node.id) +
                             " has no stencil; the elliptic system needs every inner and "
                             "boundary node");
    }
    const Stencil& st = stencils.at(node.id);
    triplets.emplace_back(row, row, 1.0 + st.lap0);
    for (std::size_t i = 0; i < st.size(); ++i) {
      triplets.emplace_back(row, ix(st.neighbor_ids[i]), -st.lap(static_cast<Eigen::Index>(i)));
    }
  }
  matrix_.resize(ix(n), ix(n));
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();

  lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  lu_->analyzePattern(matrix_);
  lu_->factorize(matrix_);
  if (lu_->info() != Eigen::Success) {
    throw SolverSetupError("elliptic factorisation failed (smallest pivot 0): " +
                           lu_->lastErrorMessage());
  }
  // The diagonal blocks of U live in the supernodes of the L factor.
  const auto& supernodal = lu_->matrixL().m_mapL;
  double min_pivot = std::numeric_limits<double>::infinity();
  double max_pivot = 0.0;
  for (Eigen::Index j = 0; j < matrix_.cols(); ++j) {
    for (typename std::decay_t<decltype(supernodal)>::InnerIterator it(supernodal, j); it; ++it) {
      if (it.index() == j) {
        min_pivot = std::min(min_pivot, std::abs(it.value()));
        max_pivot = std::max(max_pivot, std::abs(it.value()));
        break;
      }
    }
  }
  relative_min_pivot_ = max_pivot > 0.0 ? min_pivot / max_pivot : 0.0;
  if (!(relative_min_pivot_ > kEllipticPivotTolerance)) {
    std::ostringstream msg;
    msg << "elliptic matrix is numerically singular: smallest pivot " << min_pivot
        << " (relative " << relative_min_pivot_ << ")";
    throw SolverSetupError(msg.str());
  }
}

Eigen::VectorXd EllipticSystem::rhs(const Eigen::VectorXd& U) const {
  if (U.size() != matrix_.rows()) {
    throw std::invalid_argument("field size does not match the elliptic system");
  }
  Eigen::VectorXd b = U;
  for (std::size_t i = 0; i < is_ghost_.size(); ++i) {
    if (is_ghost_[i]) b(ix(i)) = 0.0;
  }
  return b;
}

Eigen::VectorXd EllipticSystem::solve_rhs(const Eigen::VectorXd& b) const {
  if (b.size() != matrix_.rows()) {
    throw std::invalid_argument("right-hand side size does not match the elliptic system");
  }
  return lu_->solve(b);
}

EllipticSystem assemble_elliptic(const PointCloud& cloud, const StencilSet& stencils) {
  return EllipticSystem(cloud, stencils);
}

namespace {

// b - A v with long double accumulation.
Eigen::VectorXd wide_residual(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& b,
                              const Eigen::VectorXd& v) {
  std::vector<long double> acc(static_cast<std::size_t>(b.size()));
  for (Eigen::Index i = 0; i < b.size(); ++i) acc[static_cast<std::size_t>(i)] = b(i);
  for (Eigen::Index k = 0; k < a.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) {
      acc[static_cast<std::size_t>(it.row())] -=
          static_cast<long double>(it.value()) * static_cast<long double>(v(it.col()));
    }
  }
  Eigen::VectorXd r(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) r(i) = static_cast<double>(acc[static_cast<std::size_t>(i)]);
  return r;
}

}  // namespace

Eigen::VectorXd solve_elliptic(const EllipticSystem& system, const Eigen::VectorXd& U) {
  if (!U.allFinite()) throw NumericError("elliptic solve received a non-finite field");
  const Eigen::VectorXd b = system.rhs(U);
  Eigen::VectorXd v = system.solve(U);
  // Two refinement passes against a residual accumulated in long double.
  for (int pass = 0; pass < 2; ++pass) v += system.solve_rhs(wide_residual(system.matrix(), b, v));
  const double tol = 1e-10 * std::max(U.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const Eigen::VectorXd r = b - system.matrix() * v;
  if (!(r.cwiseAbs().maxCoeff() <= tol)) {
    std::ostringstream msg;
    msg << "elliptic residual " << r.cwiseAbs().maxCoeff() << " exceeds " << tol;
    throw NumericError(msg.str());
  }
  if (!v.allFinite()) throw NumericError("elliptic solve produced non-finite values");
  return v;
}

// ---------------------------------------------------------------------------
// Explicit step

Eigen::VectorXd parabolic_rhs(const State& state, const StencilSet& stencils,
                              const ModelParams& params) {
  const auto& U = state.U;
  const auto& V = state.V;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(U.size());
  for (Index id : stencils.centers()) {
    const Stencil& st = stencils.at(id);
    const double u0 = U(ix(id));
    const double v0 = V(ix(id));
    const MotilityValues g = gamma_derivatives(params.gamma, v0);

    const double ux = apply(st, U, Derivative::dx);
    const double uy = apply(st, U, Derivative::dy);
    const double vx = apply(st, V, Derivative::dx);
    const double vy = apply(st, V, Derivative::dy);
    const double lap_u = apply(st, U, Derivative::laplacian);

    const double value = g.value * lap_u + 2.0 * g.d1 * (ux * vx + uy * vy) +
                         u0 * g.d2 * (vx * vx + vy * vy) + u0 * g.d1 * (v0 - u0) +
                         params.mu * u0 * (1.0 - u0);
    if (!std::isfinite(value)) {
      throw DivergenceError(id, state.step, "non-finite right-hand side");
    }
    rhs(ix(id)) = value;
  }
  return rhs;
}

Eigen::VectorXd parabolic_step(const PointCloud& cloud, const State& state,
                               const StencilSet& stencils, const ModelParams& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  Eigen::VectorXd next = state.U + dt * parabolic_rhs(state, stencils, params);
  for (const auto& node : cloud.nodes()) {
    if (node.kind == NodeKind::fictitious) next(ix(node.id)) = next(ix(*node.mirror_id));
  }
  return next;
}

// ---------------------------------------------------------------------------
// Stability monitor

StarBound star_stability(const Stencil& st, const State& state, const ModelParams& params) {
  const auto& U = state.U;
  const auto& V = state.V;
  const double u0 = U(ix(st.center_id));
  const double v0 = V(ix(st.center_id));
  const MotilityValues g = gamma_derivatives(params.gamma, v0);
  const double mu = params.mu;

  const double sx = st.lambda0(0);  // sum_i lambda_i1
  const double sy = st.lambda0(1);  // sum_i lambda_i2
  const double s0 = st.lap0;        // sum_i lambda_i0

  const double ux = apply(st, U, Derivative::dx);
  const double uy = apply(st, U, Derivative::dy);
  const double vx = apply(st, V, Derivative::dx);
  const double vy = apply(st, V, Derivative::dy);
  const double lap_u = apply(st, U, Derivative::laplacian);
  const double grad_v2 = vx * vx + vy * vy;
  // Stencil of (v + V) with v <- V.
  const double wx = 2.0 * vx;
  const double wy = 2.0 * vy;

  StarBound b;
  b.center = st.center_id;

  // A1 = |1 - dt A1'| + dt A1''
  const double inner_a = -s0 - 2.0 * g.d1 * sx * vx - 2.0 * g.d1 * sy * vy + g.d2 * grad_v2 +
                         v0 * g.d1 + u0 * g.d1 - (u0 + u0) * g.d1 + mu - mu * (u0 + u0);
  b.a1p = -inner_a;
  b.a1pp = std::abs(g.d1 * s0) + 2.0 * std::abs(g.d2 * vx * sx) + 2.0 * std::abs(g.d2 * vy * sy);

  const double inner_b = g.d1 * lap_u + 2.0 * g.d2 * ux * vx + 2.0 * g.d2 * uy * vy -
                         2.0 * g.d1 * ux * sx - 2.0 * g.d1 * uy * sy + u0 * g.d3 * grad_v2 -
                         u0 * g.d2 * wx * sx - u0 * g.d2 * wy * sy + u0 * v0 * g.d2 -
                         u0 * u0 * g.d2;
  b.b1 = std::abs(inner_b) + 2.0 * std::abs(g.d1 * ux * sx) + 2.0 * std::abs(g.d1 * uy * sy) +
         std::abs(u0 * g.d2 * wx * sx) + std::abs(u0 * g.d2 * wy * sy);

  const double abs_sum = st.lap.cwiseAbs().sum();
  b.k_elliptic = std::abs(1.0 - s0) + abs_sum;
  b.numerator = 2.0 + std::abs(s0) + abs_sum;
  b.denominator = b.k_elliptic * (b.a1p + b.a1pp) + b.b1;
  b.informative = b.denominator > 0.0 && std::isfinite(b.denominator);
  b.dt_max = b.informative ? b.numerator / b.denominator : std::numeric_limits<double>::infinity();
  return b;
}

StabilityBound stability_bound(const State& state, const StencilSet& stencils,
                               const ModelParams& params) {
  if (!state.U.allFinite() || !state.V.allFinite()) {
    throw NumericError("stability bound needs finite U and V");
  }
  StabilityBound out;
  out.global = std::numeric_limits<double>::infinity();
  for (Index id : stencils.centers()) {
    StarBound b = star_stability(stencils.at(id), state, params);
    if (!b.informative) {
      ++out.non_informative;
    } else if (b.dt_max < out.global) {
      out.global = b.dt_max;
      out.limiting_node = id;
    }
    out.stars.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Driver

std::optional<long> step_index(double t, double dt) {
  if (!(dt > 0.0) || !(t >= 0.0)) return std::nullopt;
  const double rounded = std::round(t / dt);
  if (std::abs(t - rounded * dt) > 1e-9) return std::nullopt;
  return static_cast<long>(rounded);
}

Simulation::Simulation(PointCloud cloud, int star_size, WeightScheme scheme, ModelParams params)
    : cloud_(std::move(cloud)),
      params_(std::move(params)),
      stencils_(build_stencil_set(cloud_, star_size, scheme)),
      elliptic_(cloud_, stencils_) {}

State Simulation::initial_state(const Eigen::VectorXd& u0) const {
  if (u0.size() != static_cast<Eigen::Index>(cloud_.size())) {
    throw std::invalid_argument("initial field size does not match the cloud");
  }
  State s;
  s.U = u0;
  for (const auto& node : cloud_.nodes()) {
    if (node.kind == NodeKind::fictitious) s.U(ix(node.id)) = s.U(ix(*node.mirror_id));
  }
  s.V = solve_elliptic(elliptic_, s.U);
  return s;
}

State Simulation::advance(const State& state, double dt, double overflow_guard) const {
  State next;
  next.U = parabolic_step(cloud_, state, stencils_, params_, dt);
  next.step = state.step + 1;
  next.time = static_cast<double>(next.step) * dt;
  for (const auto& node : cloud_.nodes()) {
    if (node.kind == NodeKind::fictitious) continue;
    const double u = next.U(ix(node.id));
    if (!std::isfinite(u) || std::abs(u) > overflow_guard) {
      std::ostringstream msg;
      msg << "|U| = " << std::abs(u) << " exceeds the overflow guard";
      throw DivergenceError(node.id, next.step, msg.str());
    }
  }
  next.V = solve_elliptic(elliptic_, next.U);
  return next;
}

RunResult Simulation::run(const Eigen::VectorXd& u0, const RunSettings& settings) const {
  if (!(settings.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const auto final_step = step_index(settings.t_final, settings.dt);
  if (!final_step) throw std::invalid_argument("t_final must be a multiple of dt");

  std::map<long, double> report_at;
  std::map<long, double> snapshot_at;
  for (double t : settings.report_times) {
    const auto k = step_index(t, settings.dt);
    if (!k || *k > *final_step) throw std::invalid_argument("bad report time");
    report_at.emplace(*k, t);
  }
  for (double t : settings.snapshot_times) {
    const auto k = step_index(t, settings.dt);
    if (!k || *k > *final_step) throw std::invalid_argument("bad snapshot time");
    snapshot_at.emplace(*k, t);
  }
  const int cadence = std::max(1, settings.stability_cadence);

  RunResult result;
  State state = initial_state(u0);
  state.time = 0.0;
  for (;;) {
    const long n = state.step;
    if (const auto it = report_at.find(n); it != report_at.end()) {
      result.report.push(it->second, linf_vs_one(state.U, cloud_), linf_vs_one(state.V, cloud_));
    }
    if (const auto it = snapshot_at.find(n); it != snapshot_at.end()) {
      result.snapshots.push_back({it->second, state.U, state.V});
    }
    if (settings.stability != StabilityMode::off && n % cadence == 0) {
      const StabilityBound bound = stability_bound(state, stencils_, params_);
      BoundRecord rec{n, state.time, settings.dt, bound.global, bound.limiting_node,
                      bound.non_informative};
      result.bounds.push_back(rec);
      if (bound.non_informative > 0) {
        result.warnings.push_back("step " + std::to_string(n) + ": " +
                                  std::to_string(bound.non_informative) +
                                  " star(s) gave a non-informative stability bound");
      }
      if (settings.dt > bound.global) {
        std::ostringstream msg;
        msg << "step " << n << " (t = " << state.time << "): dt = " << settings.dt
            << " exceeds the stability bound " << bound.global;
        if (bound.limiting_node) msg << " set by node " << *bound.limiting_node;
        if (settings.stability == StabilityMode::strict) {
          result.final_state = state;
          throw RunAborted("stability violation: " + msg.str(), std::move(result));
        }
        result.warnings.push_back(msg.str());
      }
    }
    if (n >= *final_step) break;
    try {
      state = advance(state, settings.dt, settings.overflow_guard);
    } catch (const Error& e) {
      result.final_state = state;
      throw RunAborted(e.what(), std::move(result));
    }
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace gfd
