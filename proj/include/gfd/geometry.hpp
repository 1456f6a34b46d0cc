#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace gfd {

using Index = std::size_t;
using Point = Eigen::Vector2d;

enum class NodeKind : int { inner = 0, boundary = 1, fictitious = 2 };

struct Node {
  Index id = 0;
  Point position = Point::Zero();
  NodeKind kind = NodeKind::inner;
  /// Set iff kind == fictitious; the node whose value this ghost copies.
  std::optional<Index> mirror_id;
};

struct Rectangle {
  double xmin = 0.0;
  double xmax = 1.0;
  double ymin = 0.0;
  double ymax = 1.0;

  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains(const Point& p, double tol = 0.0) const {
    return p.x() >= xmin - tol && p.x() <= xmax + tol && p.y() >= ymin - tol &&
           p.y() <= ymax + tol;
  }
};

inline constexpr Rectangle unit_square{0.0, 1.0, 0.0, 1.0};

/// Smallest star the 5-unknown least-squares problem admits.
inline constexpr int kMinStarSize = 5;
inline constexpr int kDefaultStarSize = 8;

/// Uniform bucket grid over a fixed point set. k-nearest queries visit
/// buckets ring by ring, so cost is O(k) amortised on quasi-uniform clouds.
class SpatialIndex {
 public:
  SpatialIndex() = default;
  explicit SpatialIndex(const std::vector<Point>& points);

  /// The k nearest points to `query` (excluding `exclude`), ordered by
  /// distance; distances equal to within 1e-12 relative are ordered by id.
  std::vector<Index> nearest(const Point& query, std::size_t k,
                             std::optional<Index> exclude = std::nullopt) const;

  std::size_t size() const { return points_.size(); }

 private:
  std::vector<Point> points_;
  Eigen::Vector2d origin_ = Eigen::Vector2d::Zero();
  double cell_ = 1.0;
  long nx_ = 1;
  long ny_ = 1;
  std::vector<std::vector<Index>> buckets_;
};

/// Immutable set of nodes over an axis-aligned rectangle.
class PointCloud {
 public:
  PointCloud(std::vector<Node> nodes, Rectangle domain);

  const std::vector<Node>& nodes() const { return nodes_; }
  const Node& node(Index id) const { return nodes_.at(id); }
  std::size_t size() const { return nodes_.size(); }
  const Rectangle& domain() const { return domain_; }
  double min_separation() const { return min_separation_; }
  /// Median nearest-neighbour distance over non-fictitious nodes.
  double median_spacing() const { return median_spacing_; }
  const SpatialIndex& index() const { return index_; }

  std::size_t count(NodeKind kind) const;
  bool has_fictitious() const { return count(NodeKind::fictitious) > 0; }

 private:
  std::vector<Node> nodes_;
  Rectangle domain_;
  SpatialIndex index_;
  double min_separation_ = 0.0;
  double median_spacing_ = 0.0;
};

struct Star {
  Index center_id = 0;
  std::vector<Index> neighbor_ids;
  /// Row i holds (h_i, k_i) = neighbour position minus centre position.
  Eigen::Matrix<double, Eigen::Dynamic, 2> offsets;

  std::size_t size() const { return neighbor_ids.size(); }
};

/// n x n uniform grid; perimeter nodes are boundary, the rest inner.
PointCloud build_regular_grid(int n, const Rectangle& domain = unit_square);

/// Grid whose interior nodes are jittered by up to `jitter` grid spacings in
/// each axis and whose non-corner boundary nodes slide along their edge.
PointCloud build_perturbed_grid(int n, const Rectangle& domain, double jitter,
                                std::uint64_t seed);

/// Text cloud format:
///   [domain xmin xmax ymin ymax]
///   x y kind        (kind 0 = inner, 1 = boundary)
/// `#` starts a comment. Without a domain header the bounding box is used.
PointCloud load_cloud(std::istream& in);

/// Writes inner and boundary nodes in the load_cloud format; fictitious
/// nodes are dropped.
void save_cloud(const PointCloud& cloud, std::ostream& out);

/// Adds a ghost ring outside the domain. Each boundary node reflects its
/// nearest inner node (inside a 45 degree cone around the inward normal)
/// across its edge; corners additionally reflect the nearest boundary node of
/// each adjacent edge, giving one ghost per outward axis direction. Ghosts
/// already present are not duplicated.
PointCloud add_fictitious_nodes(const PointCloud& cloud);

/// The s nearest nodes to `center_id` (any kind, centre excluded).
Star select_star(const PointCloud& cloud, Index center_id, int s);

}  // namespace gfd
