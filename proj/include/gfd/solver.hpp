#pragma once

// Time stepping for the parabolic-elliptic chemotaxis system
//
//   u_t = Laplacian(gamma(v) u) + mu u (1 - u),   -Laplacian(v) + v = u,
//
// with homogeneous Neumann conditions. u advances by forward Euler with the
// Laplacian of gamma(v) u expanded through the elliptic equation:
//
//   Lap(gamma(v) u) = gamma Lap u + 2 gamma' grad u . grad v
//                   + u gamma'' |grad v|^2 + u gamma' (v - u),
//
// and v is recovered from u by one sparse direct solve per step.

#include "gfd/errors.hpp"
#include "gfd/geometry.hpp"
#include "gfd/model.hpp"
#include "gfd/norms.hpp"
#include "gfd/stencil.hpp"

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace gfd {

struct State {
  Eigen::VectorXd U;
  Eigen::VectorXd V;
  long step = 0;
  double time = 0.0;
};

/// The time-invariant operator of the discrete elliptic equation, factorised
/// once. Rows at inner and boundary nodes read
///   (1 + lap0) V_0 - sum_i lap_i V_i = U_0,
/// rows at ghost nodes read V_ghost - V_mirror = 0.
class EllipticSystem {
 public:
  EllipticSystem(const PointCloud& cloud, const StencilSet& stencils);

  EllipticSystem(EllipticSystem&&) noexcept = default;
  EllipticSystem& operator=(EllipticSystem&&) noexcept = default;

  const Eigen::SparseMatrix<double>& matrix() const { return matrix_; }
  std::size_t size() const { return static_cast<std::size_t>(matrix_.rows()); }
  /// Smallest |U_jj| of the LU factor divided by the largest.
  double relative_min_pivot() const { return relative_min_pivot_; }

  /// Right-hand side for a given U: U at governed nodes, 0 at ghosts.
  Eigen::VectorXd rhs(const Eigen::VectorXd& U) const;
  Eigen::VectorXd solve(const Eigen::VectorXd& U) const { return solve_rhs(rhs(U)); }
  /// Solves matrix() x = b for an arbitrary right-hand side.
  Eigen::VectorXd solve_rhs(const Eigen::VectorXd& b) const;

 private:
  Eigen::SparseMatrix<double> matrix_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
  std::vector<bool> is_ghost_;
  double relative_min_pivot_ = 0.0;
};

/// Relative pivot below which the elliptic matrix is declared singular.
inline constexpr double kEllipticPivotTolerance = 1e-14;

EllipticSystem assemble_elliptic(const PointCloud& cloud, const StencilSet& stencils);

/// Solves for V and checks the residual against 1e-10 * ||U||_inf, refining
/// once if needed. Throws NumericError on non-finite input or if the residual
/// check still fails.
Eigen::VectorXd solve_elliptic(const EllipticSystem& system, const Eigen::VectorXd& U);

/// Right-hand side of the u equation at every node with a stencil (zero
/// elsewhere). Throws DivergenceError if a value is non-finite.
Eigen::VectorXd parabolic_rhs(const State& state, const StencilSet& stencils,
                              const ModelParams& params);

/// U + dt * rhs on governed nodes; ghosts copy their mirror afterwards.
Eigen::VectorXd parabolic_step(const PointCloud& cloud, const State& state,
                               const StencilSet& stencils, const ModelParams& params, double dt);

// ---------------------------------------------------------------------------
// Stability monitor

/// Per-star terms of the convergence bound. Exact-solution samples are
/// replaced by the discrete U, V and mean-value points by V_0.
struct StarBound {
  Index center = 0;
  double a1p = 0.0;   // A1'
  double a1pp = 0.0;  // A1''
  double b1 = 0.0;    // B1 with the dt factor removed
  double k_elliptic = 0.0;  // |1 - lap0| + sum |lap_i|
  double numerator = 0.0;   // 2 + |lap0| + sum |lap_i|
  double denominator = 0.0;
  /// numerator / denominator, or +inf when the denominator is not positive.
  double dt_max = 0.0;
  bool informative = false;
};

struct StabilityBound {
  std::vector<StarBound> stars;
  double global = 0.0;
  std::optional<Index> limiting_node;
  std::size_t non_informative = 0;
};

StarBound star_stability(const Stencil& stencil, const State& state, const ModelParams& params);

/// Evaluates every star; stars with a non-positive denominator are excluded
/// from the global minimum and counted in `non_informative`.
StabilityBound stability_bound(const State& state, const StencilSet& stencils,
                               const ModelParams& params);

// ---------------------------------------------------------------------------
// Driver

enum class StabilityMode { off, warn, strict };

inline constexpr double kOverflowGuard = 1e6;
inline constexpr int kDefaultStabilityCadence = 100;

struct RunSettings {
  double dt = 1e-3;
  double t_final = 1.0;
  std::vector<double> report_times;
  std::vector<double> snapshot_times;
  StabilityMode stability = StabilityMode::warn;
  int stability_cadence = kDefaultStabilityCadence;
  double overflow_guard = kOverflowGuard;
};

struct Snapshot {
  double time = 0.0;
  Eigen::VectorXd U;
  Eigen::VectorXd V;
};

struct BoundRecord {
  long step = 0;
  double time = 0.0;
  double dt = 0.0;
  double global_bound = 0.0;
  std::optional<Index> limiting_node;
  std::size_t non_informative = 0;
};

struct RunResult {
  ErrorReport report;
  std::vector<Snapshot> snapshots;
  std::vector<BoundRecord> bounds;
  std::vector<std::string> warnings;
  State final_state;
};

/// Raised when a run stops early; carries everything recorded so far and the
/// last state that passed all checks.
class RunAborted : public Error {
 public:
  RunAborted(const std::string& what, RunResult partial)
      : Error(what), partial_(std::move(partial)) {}
  const RunResult& partial() const { return partial_; }

 private:
  RunResult partial_;
};

/// Geometry, stencils and the factorised elliptic operator for one cloud.
class Simulation {
 public:
  /// `cloud` must already carry its ghost nodes.
  Simulation(PointCloud cloud, int star_size, WeightScheme scheme, ModelParams params);

  const PointCloud& cloud() const { return cloud_; }
  const StencilSet& stencils() const { return stencils_; }
  const EllipticSystem& elliptic() const { return elliptic_; }
  const ModelParams& params() const { return params_; }

  /// Step-0 state: U = u0 (ghosts mirrored) and V from the elliptic solve.
  State initial_state(const Eigen::VectorXd& u0) const;
  /// One full step: explicit U update followed by the elliptic solve.
  State advance(const State& state, double dt, double overflow_guard = kOverflowGuard) const;

  RunResult run(const Eigen::VectorXd& u0, const RunSettings& settings) const;

 private:
  PointCloud cloud_;
  ModelParams params_;
  StencilSet stencils_;
  EllipticSystem elliptic_;
};

/// Index of the step that lands on `t`, or nullopt if t is not a multiple of
/// dt to within 1e-9.
std::optional<long> step_index(double t, double dt);

}  // namespace gfd
