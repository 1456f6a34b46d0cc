#pragma once

#include "gfd/geometry.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

namespace gfd {

/// max |f - 1| over inner and boundary nodes (ghosts excluded).
template <typename Derived>
double linf_vs_one(const Eigen::MatrixBase<Derived>& field, const PointCloud& cloud) {
  double m = 0.0;
  for (const auto& node : cloud.nodes()) {
    if (node.kind == NodeKind::fictitious) continue;
    m = std::max(m, std::abs(field(static_cast<Eigen::Index>(node.id)) - 1.0));
  }
  return m;
}

/// Distance to the homogeneous state (1, 1) over time.
struct ErrorReport {
  std::vector<double> times;
  std::vector<double> err_u;
  std::vector<double> err_v;

  void push(double t, double eu, double ev) {
    times.push_back(t);
    err_u.push_back(eu);
    err_v.push_back(ev);
  }
  std::size_t size() const { return times.size(); }
};

/// CSV with header `t,err_u,err_v`, 17 significant digits.
void write_error_csv(const ErrorReport& report, std::ostream& out);

}  // namespace gfd
