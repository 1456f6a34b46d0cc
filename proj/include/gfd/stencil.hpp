#pragma once

// Weighted least-squares derivative stencils on E_s-stars.
//
// For a star with offsets (h_i, k_i) and weights w_i, the second-order
// Taylor fit of the neighbour values gives the normal equations
//
//   A D = b,   A = C^T W^2 C,   c_i = (h_i, k_i, h_i^2/2, k_i^2/2, h_i k_i)
//
// so every derivative is a fixed linear combination of nodal values:
//
//   D_r U = -lambda0_r U_0 + sum_i lambda_ir U_i,
//   lambda_ir = w_i^2 (A^{-1} c_i)_r,   lambda0_r = sum_i lambda_ir.
//
// The core routines are templated on the scalar type; the rest of the library
// instantiates them with double.

#include "gfd/errors.hpp"
#include "gfd/geometry.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfd {

/// Row order of the derivative operators inside a stencil.
enum class Derivative : int { dx = 0, dy = 1, dxx = 2, dyy = 3, dxy = 4, laplacian = 5 };

inline constexpr int kNumDerivatives = 5;

/// Relative Cholesky pivot threshold below which a star is degenerate.
inline constexpr double kPivotTolerance = 1e-12;

/// w_i = (h_i^2 + k_i^2)^(-p). p = 1 gives w = 1 / (h^2 + k^2).
struct WeightScheme {
  double power = 1.0;

  explicit WeightScheme(double p = 1.0) : power(p) {
    if (!(p > 0.0) || !std::isfinite(p)) {
      throw std::invalid_argument("weight power must be positive and finite");
    }
  }
};

template <typename Scalar>
using Matrix5 = Eigen::Matrix<Scalar, kNumDerivatives, kNumDerivatives>;
template <typename Scalar>
using Vector5 = Eigen::Matrix<Scalar, kNumDerivatives, 1>;
template <typename Scalar>
using OffsetMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;
template <typename Scalar>
using CoefficientMatrix = Eigen::Matrix<Scalar, kNumDerivatives, Eigen::Dynamic>;

template <typename Scalar>
struct DerivativeStencil {
  Index center_id = 0;
  std::vector<Index> neighbor_ids;
  /// Rows: d/dx, d/dy, d2/dx2, d2/dy2, d2/dxdy; one column per neighbour.
  CoefficientMatrix<Scalar> lambda;
  /// Row sums of lambda.
  Vector5<Scalar> lambda0;
  /// lambda row dxx + row dyy.
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> lap;
  Scalar lap0 = Scalar(0);
  /// max/min Cholesky diagonal, squared.
  Scalar condition_estimate = Scalar(1);

  std::size_t size() const { return neighbor_ids.size(); }

  /// Coefficient row for `which` (laplacian included).
  Eigen::Matrix<Scalar, 1, Eigen::Dynamic> row(Derivative which) const {
    if (which == Derivative::laplacian) return lap;
    return lambda.row(static_cast<int>(which));
  }
  Scalar row_sum(Derivative which) const {
    if (which == Derivative::laplacian) return lap0;
    return lambda0(static_cast<int>(which));
  }
};

using Stencil = DerivativeStencil<double>;

/// Taylor row c_i = (h, k, h^2/2, k^2/2, h k) for every offset.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, kNumDerivatives> taylor_rows(
    const OffsetMatrix<Scalar>& offsets) {
  const auto h = offsets.col(0).array();
  const auto k = offsets.col(1).array();
  Eigen::Matrix<Scalar, Eigen::Dynamic, kNumDerivatives> c(offsets.rows(), kNumDerivatives);
  c.col(0) = h.matrix();
  c.col(1) = k.matrix();
  c.col(2) = (Scalar(0.5) * h.square()).matrix();
  c.col(3) = (Scalar(0.5) * k.square()).matrix();
  c.col(4) = (h * k).matrix();
  return c;
}

template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> compute_weights(const OffsetMatrix<Scalar>& offsets,
                                                         const WeightScheme& scheme) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d2 = offsets.rowwise().squaredNorm();
  for (Eigen::Index i = 0; i < d2.size(); ++i) {
    if (!(d2(i) > Scalar(0))) {
      throw SingularWeight("zero offset at star position " + std::to_string(i));
    }
  }
  return d2.array().pow(Scalar(-scheme.power)).matrix();
}

inline Eigen::VectorXd compute_weights(const Star& star, const WeightScheme& scheme) {
  return compute_weights<double>(star.offsets, scheme);
}

/// A = C^T W^2 C.
template <typename Scalar>
Matrix5<Scalar> assemble_normal_matrix(const OffsetMatrix<Scalar>& offsets,
                                       const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& weights) {
  const Eigen::Matrix<Scalar, Eigen::Dynamic, kNumDerivatives> wc =
      weights.asDiagonal() * taylor_rows<Scalar>(offsets);
  Matrix5<Scalar> a = Matrix5<Scalar>::Zero();
  a.template selfadjointView<Eigen::Lower>().rankUpdate(wc.transpose());
  return a.template selfadjointView<Eigen::Lower>();
}

inline Eigen::Matrix<double, 5, 5> assemble_normal_matrix(const Star& star,
                                                          const Eigen::VectorXd& weights) {
  return assemble_normal_matrix<double>(star.offsets, weights);
}

/// Cholesky-factorises A and forms lambda = A^{-1} C^T W^2.
/// Throws DegenerateStar when a pivot falls below kPivotTolerance times the
/// largest diagonal entry of A.
template <typename Scalar>
DerivativeStencil<Scalar> solve_lambdas(Index center_id, const std::vector<Index>& neighbor_ids,
                                        const OffsetMatrix<Scalar>& offsets,
                                        const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& weights,
                                        const Matrix5<Scalar>& a) {
  const Scalar scale = a.diagonal().cwiseAbs().maxCoeff();
  if (!(scale > Scalar(0)) || !a.allFinite()) {
    throw DegenerateStar(center_id, "normal matrix is zero or non-finite");
  }
  Eigen::LLT<Matrix5<Scalar>> llt(a);
  const Matrix5<Scalar> l = llt.matrixL();
  const Vector5<Scalar> pivots = l.diagonal().array().square().matrix();
  if (llt.info() != Eigen::Success || !l.allFinite() ||
      pivots.minCoeff() <= Scalar(kPivotTolerance) * scale) {
    throw DegenerateStar(center_id, "Cholesky pivot below tolerance (star is rank deficient)");
  }

  const auto c = taylor_rows<Scalar>(offsets);
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> w2 = weights.array().square().matrix();

  DerivativeStencil<Scalar> st;
  st.center_id = center_id;
  st.neighbor_ids = neighbor_ids;
  st.lambda = llt.solve(c.transpose() * w2.asDiagonal());
  // Corrections against the exactness residual lambda C - I; the normal
  // equations square the conditioning of C, these undo most of that.
  for (int pass = 0; pass < 2; ++pass) {
    const Matrix5<Scalar> resid = st.lambda * c - Matrix5<Scalar>::Identity();
    st.lambda -= resid * st.lambda;
  }
  st.lambda0 = st.lambda.rowwise().sum();
  st.lap = st.lambda.row(2) + st.lambda.row(3);
  st.lap0 = st.lambda0(2) + st.lambda0(3);
  const Scalar lmax = l.diagonal().maxCoeff();
  const Scalar lmin = l.diagonal().minCoeff();
  st.condition_estimate = (lmax / lmin) * (lmax / lmin);
  return st;
}

inline Stencil solve_lambdas(const Star& star, const Eigen::VectorXd& weights,
                             const Eigen::Matrix<double, 5, 5>& a) {
  return solve_lambdas<double>(star.center_id, star.neighbor_ids, star.offsets, weights, a);
}

/// Full pipeline for one star. The 5x5 solve runs in long double and is
/// rounded once at the end; stars near the pivot limit lose too many digits
/// otherwise.
inline Stencil build_stencil(const Star& star, const WeightScheme& scheme) {
  using Ld = long double;
  const OffsetMatrix<Ld> offsets = star.offsets.cast<Ld>();
  const Eigen::Matrix<Ld, Eigen::Dynamic, 1> w = compute_weights<Ld>(offsets, scheme);
  const auto wide =
      solve_lambdas<Ld>(star.center_id, star.neighbor_ids, offsets, w,
                        assemble_normal_matrix<Ld>(offsets, w));
  Stencil st;
  st.center_id = wide.center_id;
  st.neighbor_ids = wide.neighbor_ids;
  st.lambda = wide.lambda.cast<double>();
  st.lambda0 = st.lambda.rowwise().sum();
  st.lap = st.lambda.row(2) + st.lambda.row(3);
  st.lap0 = st.lambda0(2) + st.lambda0(3);
  st.condition_estimate = static_cast<double>(wide.condition_estimate);
  return st;
}

/// -lambda0_r f(center) + sum_i lambda_ir f(neighbour_i), evaluated as
/// sum_i lambda_ir (f_i - f_0) so constant fields map to exactly zero.
template <typename Scalar, typename Derived>
Scalar apply(const DerivativeStencil<Scalar>& st, const Eigen::MatrixBase<Derived>& field,
             Derivative which) {
  const auto n = static_cast<std::size_t>(field.size());
  if (st.center_id >= n) {
    throw std::out_of_range("field has no value at stencil centre " +
                            std::to_string(st.center_id));
  }
  const Scalar f0 = field(static_cast<Eigen::Index>(st.center_id));
  const int r = static_cast<int>(which);
  Scalar acc = Scalar(0);
  for (std::size_t i = 0; i < st.neighbor_ids.size(); ++i) {
    const Index j = st.neighbor_ids[i];
    if (j >= n) throw std::out_of_range("field has no value at node " + std::to_string(j));
    const auto col = static_cast<Eigen::Index>(i);
    const Scalar coeff = which == Derivative::laplacian ? st.lap(col) : st.lambda(r, col);
    acc += coeff * (field(static_cast<Eigen::Index>(j)) - f0);
  }
  return acc;
}

/// Stencils for every node a PDE is solved at (inner, and optionally
/// boundary), indexed by node id.
class StencilSet {
 public:
  StencilSet() = default;
  StencilSet(std::size_t num_nodes, WeightScheme scheme, int star_size)
      : slots_(num_nodes), scheme_(scheme), star_size_(star_size) {}

  void insert(Stencil st) {
    const Index id = st.center_id;
    slots_.at(id) = std::move(st);
  }
  bool contains(Index id) const { return id < slots_.size() && slots_[id].has_value(); }
  const Stencil& at(Index id) const {
    if (!contains(id)) throw std::out_of_range("no stencil at node " + std::to_string(id));
    return *slots_[id];
  }
  /// Node ids with stencils, ascending.
  std::vector<Index> centers() const {
    std::vector<Index> ids;
    for (Index i = 0; i < slots_.size(); ++i) {
      if (slots_[i]) ids.push_back(i);
    }
    return ids;
  }
  std::size_t size() const {
    return static_cast<std::size_t>(
        std::count_if(slots_.begin(), slots_.end(), [](const auto& s) { return s.has_value(); }));
  }
  std::size_t num_nodes() const { return slots_.size(); }
  const WeightScheme& weight_scheme() const { return scheme_; }
  int star_size() const { return star_size_; }

  double min_condition = std::numeric_limits<double>::infinity();
  double max_condition = 0.0;

 private:
  std::vector<std::optional<Stencil>> slots_;
  WeightScheme scheme_{};
  int star_size_ = kDefaultStarSize;
};

enum class StencilCoverage { inner_only, inner_and_boundary };

/// Builds one stencil per inner node (and per boundary node unless
/// coverage is inner_only). Degenerate stars are collected and reported
/// together in a single DegenerateStar error naming every offending centre.
StencilSet build_stencil_set(const PointCloud& cloud, int s, const WeightScheme& scheme,
                             StencilCoverage coverage = StencilCoverage::inner_and_boundary);

/// Text dump: for each stencil a header `stencil <center> <s>`, a
/// `neighbors` line, then one line per operator (dx dy dxx dyy dxy) holding
/// lambda0 followed by the s neighbour coefficients.
void write_stencil_table(const StencilSet& set, std::ostream& out);

}  // namespace gfd
