#include "gfd/geometry.hpp"

#include "gfd/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>

namespace gfd {

namespace {

constexpr double kTieTolerance = 1e-12;

double squared_distance(const Point& a, const Point& b) { return (a - b).squaredNorm(); }

// Sorts (d2, id) pairs by distance, treating distances that agree to
// kTieTolerance as equal so that ties resolve by id regardless of roundoff.
void sort_with_ties(std::vector<std::pair<double, Index>>& items) {
  std::sort(items.begin(), items.end());
  std::size_t start = 0;
  while (start < items.size()) {
    std::size_t end = start + 1;
    const double ref = items[start].first;
    while (end < items.size() && items[end].first <= ref * (1.0 + 2.0 * kTieTolerance)) {
      ++end;
    }
    std::sort(items.begin() + static_cast<long>(start), items.begin() + static_cast<long>(end),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    start = end;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SpatialIndex

SpatialIndex::SpatialIndex(const std::vector<Point>& points) : points_(points) {
  if (points_.empty()) return;
  Eigen::Vector2d lo = points_.front();
  Eigen::Vector2d hi = points_.front();
  for (const auto& p : points_) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Eigen::Vector2d extent = (hi - lo).cwiseMax(1e-300);
  const double area = std::max(extent.x() * extent.y(),
                               std::pow(std::max(extent.x(), extent.y()), 2) * 1e-6);
  cell_ = std::sqrt(area / static_cast<double>(points_.size())) * 1.5;
  if (!(cell_ > 0.0) || !std::isfinite(cell_)) cell_ = 1.0;
  origin_ = lo;
  nx_ = std::max<long>(1, static_cast<long>(std::floor(extent.x() / cell_)) + 1);
  ny_ = std::max<long>(1, static_cast<long>(std::floor(extent.y() / cell_)) + 1);
  buckets_.assign(static_cast<std::size_t>(nx_ * ny_), {});
  for (Index i = 0; i < points_.size(); ++i) {
    const long cx = std::clamp(static_cast<long>((points_[i].x() - origin_.x()) / cell_), 0L, nx_ - 1);
    const long cy = std::clamp(static_cast<long>((points_[i].y() - origin_.y()) / cell_), 0L, ny_ - 1);
    buckets_[static_cast<std::size_t>(cy * nx_ + cx)].push_back(i);
  }
}

std::vector<Index> SpatialIndex::nearest(const Point& query, std::size_t k,
                                         std::optional<Index> exclude) const {
  std::vector<std::pair<double, Index>> found;
  if (k == 0 || points_.empty()) return {};

  const long qx = static_cast<long>(std::floor((query.x() - origin_.x()) / cell_));
  const long qy = static_cast<long>(std::floor((query.y() - origin_.y()) / cell_));
  // Ring radius beyond which every bucket has been visited.
  const long max_ring = std::max({std::abs(qx), std::abs(qx - (nx_ - 1)), std::abs(qy),
                                  std::abs(qy - (ny_ - 1))});

  auto visit = [&](long cx, long cy) {
    if (cx < 0 || cy < 0 || cx >= nx_ || cy >= ny_) return;
    for (Index id : buckets_[static_cast<std::size_t>(cy * nx_ + cx)]) {
      if (exclude && *exclude == id) continue;
      found.emplace_back(squared_distance(points_[id], query), id);
    }
  };

  for (long ring = 0; ring <= max_ring; ++ring) {
    if (ring == 0) {
      visit(qx, qy);
    } else {
      for (long dx = -ring; dx <= ring; ++dx) {
        visit(qx + dx, qy - ring);
        visit(qx + dx, qy + ring);
      }
      for (long dy = -ring + 1; dy <= ring - 1; ++dy) {
        visit(qx - ring, qy + dy);
        visit(qx + ring, qy + dy);
      }
    }
    if (found.size() >= k) {
      // Buckets outside this ring are at least ring * cell_ away.
      std::nth_element(found.begin(), found.begin() + static_cast<long>(k - 1), found.end());
      const double kth = std::sqrt(found[k - 1].first);
      if (kth * (1.0 + 4.0 * kTieTolerance) < static_cast<double>(ring) * cell_) break;
    }
  }

  sort_with_ties(found);
  const std::size_t take = std::min(k, found.size());
  std::vector<Index> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(found[i].second);
  return out;
}

// ---------------------------------------------------------------------------
// PointCloud

PointCloud::PointCloud(std::vector<Node> nodes, Rectangle domain)
    : nodes_(std::move(nodes)), domain_(domain) {
  if (!(domain_.width() > 0.0) || !(domain_.height() > 0.0)) {
    throw InvalidDiscretization("domain must have positive area");
  }
  if (nodes_.size() < 2) {
    throw InvalidDiscretization("a cloud needs at least two nodes");
  }
  const double tol = 1e-12 * std::max(domain_.width(), domain_.height());
  std::vector<Point> positions;
  positions.reserve(nodes_.size());
  for (Index i = 0; i < nodes_.size(); ++i) {
    const Node& node = nodes_[i];
    if (node.id != i) {
      throw InvalidDiscretization("node ids must be dense 0..m-1; found id " +
                                  std::to_string(node.id) + " at position " + std::to_string(i));
    }
    if (!node.position.allFinite()) {
      throw InvalidDiscretization("node " + std::to_string(i) + " has a non-finite position");
    }
    if (node.kind == NodeKind::fictitious) {
      if (!node.mirror_id || *node.mirror_id >= nodes_.size() ||
          nodes_[*node.mirror_id].kind == NodeKind::fictitious) {
        throw InvalidDiscretization("fictitious node " + std::to_string(i) +
                                    " must mirror a non-fictitious node");
      }
      if (domain_.contains(node.position, -tol)) {
        throw InvalidDiscretization("fictitious node " + std::to_string(i) +
                                    " lies inside the domain");
      }
    } else {
      if (node.mirror_id) {
        throw InvalidDiscretization("only fictitious nodes carry a mirror (node " +
                                    std::to_string(i) + ")");
      }
      if (!domain_.contains(node.position, tol)) {
        std::ostringstream msg;
        msg << "node " << i << " at (" << node.position.x() << ", " << node.position.y()
            << ") lies outside the domain";
        throw InvalidDiscretization(msg.str());
      }
    }
    positions.push_back(node.position);
  }

  index_ = SpatialIndex(positions);

  min_separation_ = std::numeric_limits<double>::infinity();
  std::vector<double> spacings;
  for (Index i = 0; i < nodes_.size(); ++i) {
    const auto nn = index_.nearest(positions[i], 1, i);
    const double d = (positions[nn.front()] - positions[i]).norm();
    if (d <= tol) {
      throw InvalidDiscretization("nodes " + std::to_string(std::min(i, nn.front())) + " and " +
                                  std::to_string(std::max(i, nn.front())) +
                                  " share the same position");
    }
    min_separation_ = std::min(min_separation_, d);
    if (nodes_[i].kind != NodeKind::fictitious) spacings.push_back(d);
  }
  std::sort(spacings.begin(), spacings.end());
  median_spacing_ = spacings.empty() ? min_separation_ : spacings[spacings.size() / 2];
}

std::size_t PointCloud::count(NodeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(), [kind](const Node& n) { return n.kind == kind; }));
}

// ---------------------------------------------------------------------------
// Builders

namespace {

void check_grid_args(int n, const Rectangle& domain) {
  if (n < 3) throw InvalidDiscretization("grid needs n >= 3, got " + std::to_string(n));
  if (!(domain.width() > 0.0) || !(domain.height() > 0.0)) {
    throw InvalidDiscretization("domain must have positive area");
  }
}

double grid_coord(double lo, double hi, int i, int n) {
  if (i == n - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

// Uniform on [-1, 1), reproducible across standard libraries.
double symmetric_unit(std::mt19937_64& rng) {
  return 2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0;
}

}  // namespace

PointCloud build_regular_grid(int n, const Rectangle& domain) {
  check_grid_args(n, domain);
  std::vector<Node> nodes;
  nodes.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Node node;
      node.id = nodes.size();
      node.position = {grid_coord(domain.xmin, domain.xmax, i, n),
                       grid_coord(domain.ymin, domain.ymax, j, n)};
      const bool edge = i == 0 || j == 0 || i == n - 1 || j == n - 1;
      node.kind = edge ? NodeKind::boundary : NodeKind::inner;
      nodes.push_back(node);
    }
  }
  return PointCloud(std::move(nodes), domain);
}

PointCloud build_perturbed_grid(int n, const Rectangle& domain, double jitter,
                                std::uint64_t seed) {
  check_grid_args(n, domain);
  if (!(jitter >= 0.0 && jitter < 0.5)) {
    throw InvalidDiscretization("jitter must lie in [0, 0.5)");
  }
  std::mt19937_64 rng(seed);
  const double dx = domain.width() / (n - 1);
  const double dy = domain.height() / (n - 1);
  std::vector<Node> nodes;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      Node node;
      node.id = nodes.size();
      double x = grid_coord(domain.xmin, domain.xmax, i, n);
      double y = grid_coord(domain.ymin, domain.ymax, j, n);
      const bool x_edge = i == 0 || i == n - 1;
      const bool y_edge = j == 0 || j == n - 1;
      const double ex = symmetric_unit(rng) * jitter;
      const double ey = symmetric_unit(rng) * jitter;
      if (!x_edge && !y_edge) {
        x += ex * dx;
        y += ey * dy;
        node.kind = NodeKind::inner;
      } else {
        node.kind = NodeKind::boundary;
        if (x_edge && !y_edge) y += ey * dy;
        if (y_edge && !x_edge) x += ex * dx;
      }
      node.position = {x, y};
      nodes.push_back(node);
    }
  }
  return PointCloud(std::move(nodes), domain);
}

// ---------------------------------------------------------------------------
// Text I/O

namespace {

std::vector<std::string> split_tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

double parse_double(const std::string& tok, std::size_t line) {
  double value = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(line, "expected a finite number, got '" + tok + "'");
  }
  return value;
}

}  // namespace

PointCloud load_cloud(std::istream& in) {
  std::optional<Rectangle> domain;
  std::vector<Node> nodes;
  std::string raw;
  std::size_t line_no = 0;
  bool seen_record = false;
  while (std::getline(in, raw)) {
    ++line_no;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const auto tokens = split_tokens(raw);
    if (tokens.empty()) continue;
    if (tokens.front() == "domain") {
      if (seen_record) throw ParseError(line_no, "domain header must be the first record");
      if (tokens.size() != 5) throw ParseError(line_no, "domain needs xmin xmax ymin ymax");
      Rectangle r{parse_double(tokens[1], line_no), parse_double(tokens[2], line_no),
                  parse_double(tokens[3], line_no), parse_double(tokens[4], line_no)};
      if (!(r.width() > 0.0) || !(r.height() > 0.0)) {
        throw InvalidDiscretization("domain must have positive area");
      }
      domain = r;
      seen_record = true;
      continue;
    }
    seen_record = true;
    if (tokens.size() != 3) throw ParseError(line_no, "expected 'x y kind'");
    Node node;
    node.id = nodes.size();
    node.position = {parse_double(tokens[0], line_no), parse_double(tokens[1], line_no)};
    if (tokens[2] == "0") {
      node.kind = NodeKind::inner;
    } else if (tokens[2] == "1") {
      node.kind = NodeKind::boundary;
    } else {
      throw ParseError(line_no, "kind must be 0 (inner) or 1 (boundary), got '" + tokens[2] + "'");
    }
    nodes.push_back(node);
  }
  if (nodes.empty()) throw InvalidDiscretization("cloud file contains no nodes");
  if (!domain) {
    Rectangle box{nodes.front().position.x(), nodes.front().position.x(),
                  nodes.front().position.y(), nodes.front().position.y()};
    for (const auto& n : nodes) {
      box.xmin = std::min(box.xmin, n.position.x());
      box.xmax = std::max(box.xmax, n.position.x());
      box.ymin = std::min(box.ymin, n.position.y());
      box.ymax = std::max(box.ymax, n.position.y());
    }
    domain = box;
  }
  return PointCloud(std::move(nodes), *domain);
}

void save_cloud(const PointCloud& cloud, std::ostream& out) {
  const auto& d = cloud.domain();
  out << std::setprecision(17);
  out << "domain " << d.xmin << ' ' << d.xmax << ' ' << d.ymin << ' ' << d.ymax << '\n';
  for (const auto& node : cloud.nodes()) {
    if (node.kind == NodeKind::fictitious) continue;
    out << node.position.x() << ' ' << node.position.y() << ' '
        << (node.kind == NodeKind::boundary ? 1 : 0) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Fictitious nodes

namespace {

enum class Edge { left, right, bottom, top };

Eigen::Vector2d inward_normal(Edge e) {
  switch (e) {
    case Edge::left: return {1.0, 0.0};
    case Edge::right: return {-1.0, 0.0};
    case Edge::bottom: return {0.0, 1.0};
    case Edge::top: return {0.0, -1.0};
  }
  return {0.0, 0.0};
}

Point reflect_across(const Point& p, Edge e, const Rectangle& d) {
  switch (e) {
    case Edge::left: return {2.0 * d.xmin - p.x(), p.y()};
    case Edge::right: return {2.0 * d.xmax - p.x(), p.y()};
    case Edge::bottom: return {p.x(), 2.0 * d.ymin - p.y()};
    case Edge::top: return {p.x(), 2.0 * d.ymax - p.y()};
  }
  return p;
}

std::vector<Edge> edges_of(const Point& p, const Rectangle& d, double tol) {
  std::vector<Edge> edges;
  if (std::abs(p.x() - d.xmin) <= tol) edges.push_back(Edge::left);
  if (std::abs(p.x() - d.xmax) <= tol) edges.push_back(Edge::right);
  if (std::abs(p.y() - d.ymin) <= tol) edges.push_back(Edge::bottom);
  if (std::abs(p.y() - d.ymax) <= tol) edges.push_back(Edge::top);
  return edges;
}

}  // namespace

PointCloud add_fictitious_nodes(const PointCloud& cloud) {
  const Rectangle& dom = cloud.domain();
  const double extent = std::max(dom.width(), dom.height());
  const double tol = 1e-9 * extent;
  const double reach = 3.0 * cloud.median_spacing();
  const auto& nodes = cloud.nodes();

  std::vector<Node> out = nodes;
  auto add_ghost = [&](const Point& p, Index mirror) {
    for (const auto& n : out) {
      if (n.kind == NodeKind::fictitious && n.mirror_id == mirror && (n.position - p).norm() <= tol) {
        return;
      }
    }
    Node g;
    g.id = out.size();
    g.position = p;
    g.kind = NodeKind::fictitious;
    g.mirror_id = mirror;
    out.push_back(g);
  };

  for (const auto& b : nodes) {
    if (b.kind != NodeKind::boundary) continue;
    const auto edges = edges_of(b.position, dom, tol);
    if (edges.empty()) {
      throw InvalidDiscretization("boundary node " + std::to_string(b.id) +
                                  " does not lie on the domain perimeter");
    }
    for (Edge e : edges) {
      const Eigen::Vector2d inward = inward_normal(e);
      const bool corner = edges.size() > 1;
      std::vector<std::pair<double, Index>> candidates;
      for (const auto& q : nodes) {
        if (q.id == b.id || q.kind == NodeKind::fictitious) continue;
        const Eigen::Vector2d rel = q.position - b.position;
        const double along = rel.dot(inward);
        const double lateral = std::abs(rel.x() * inward.y() - rel.y() * inward.x());
        if (along <= tol || rel.norm() > reach) continue;
        if (corner) {
          // Corner ghosts copy the next node along the perpendicular edge.
          if (q.kind != NodeKind::boundary || lateral > tol) continue;
        } else {
          if (q.kind != NodeKind::inner || lateral > along) continue;
        }
        candidates.emplace_back(rel.squaredNorm(), q.id);
      }
      if (candidates.empty()) {
        throw InvalidDiscretization("boundary node " + std::to_string(b.id) +
                                    " has no node within 3x median spacing along its inward "
                                    "normal to mirror");
      }
      sort_with_ties(candidates);
      const Index best = candidates.front().second;
      add_ghost(reflect_across(nodes[best].position, e, dom), best);
    }
  }
  return PointCloud(std::move(out), dom);
}

Star select_star(const PointCloud& cloud, Index center_id, int s) {
  if (s < kMinStarSize) {
    throw InvalidDiscretization("star size must be >= " + std::to_string(kMinStarSize) +
                                ", got " + std::to_string(s));
  }
  if (center_id >= cloud.size()) {
    throw InvalidDiscretization("star centre " + std::to_string(center_id) + " out of range");
  }
  const Node& center = cloud.node(center_id);
  if (center.kind == NodeKind::fictitious) {
    throw InvalidDiscretization("star centre " + std::to_string(center_id) + " is fictitious");
  }
  const auto need = static_cast<std::size_t>(s);
  if (cloud.size() - 1 < need) {
    throw InvalidDiscretization("star of size " + std::to_string(s) + " at node " +
                                std::to_string(center_id) + " but only " +
                                std::to_string(cloud.size() - 1) + " candidates");
  }
  Star star;
  star.center_id = center_id;
  star.neighbor_ids = cloud.index().nearest(center.position, need, center_id);
  star.offsets.resize(static_cast<Eigen::Index>(need), 2);
  for (std::size_t i = 0; i < need; ++i) {
    star.offsets.row(static_cast<Eigen::Index>(i)) =
        (cloud.node(star.neighbor_ids[i]).position - center.position).transpose();
  }
  return star;
}

}  // namespace gfd
