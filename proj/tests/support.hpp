#pragma once

#include "gfd/geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gfd::test {

/// Small deterministic generator for property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform(double a, double b) {
    return a + (b - a) * std::generate_canonical<double, 53>(eng_);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(eng_); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 eng_;
};

/// q(x, y) = c0 + c1 x + c2 y + c3 x^2 + c4 y^2 + c5 x y.
struct Quadratic {
  std::array<double, 6> c{};

  static Quadratic random(Rng& rng) {
    Quadratic q;
    for (double& v : q.c) v = rng.uniform(-3.0, 3.0);
    return q;
  }
  double operator()(double x, double y) const {
    return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * y * y + c[5] * x * y;
  }
  double dx(double x, double y) const { return c[1] + 2.0 * c[3] * x + c[5] * y; }
  double dy(double x, double y) const { return c[2] + 2.0 * c[4] * y + c[5] * x; }
  double dxx() const { return 2.0 * c[3]; }
  double dyy() const { return 2.0 * c[4]; }
  double dxy() const { return c[5]; }
};

/// n points uniformly scattered in [x0, x0 + size]^2, all tagged inner.
inline PointCloud random_cloud(Rng& rng, int n, double x0 = 0.0, double size = 1.0) {
  const Rectangle domain{x0, x0 + size, x0, x0 + size};
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) {
    Node node;
    node.id = static_cast<Index>(i);
    node.position = Point(rng.uniform(x0, x0 + size), rng.uniform(x0, x0 + size));
    node.kind = NodeKind::inner;
    nodes.push_back(node);
  }
  return PointCloud(std::move(nodes), domain);
}

template <typename F>
Eigen::VectorXd sample(const PointCloud& cloud, F&& f) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(cloud.size()));
  for (const auto& node : cloud.nodes()) {
    v(static_cast<Eigen::Index>(node.id)) = f(node.position.x(), node.position.y());
  }
  return v;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace gfd::test
