#include "gfd/stencil.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace gfd {

StencilSet build_stencil_set(const PointCloud& cloud, int s, const WeightScheme& scheme,
                             StencilCoverage coverage) {
  StencilSet set(cloud.size(), scheme, s);
  std::vector<Index> failed;
  std::string first_reason;
  for (const auto& node : cloud.nodes()) {
    const bool wanted = node.kind == NodeKind::inner ||
                        (node.kind == NodeKind::boundary &&
                         coverage == StencilCoverage::inner_and_boundary);
    if (!wanted) continue;
    try {
      Stencil st = build_stencil(select_star(cloud, node.id, s), scheme);
      set.min_condition = std::min(set.min_condition, st.condition_estimate);
      set.max_condition = std::max(set.max_condition, st.condition_estimate);
      set.insert(std::move(st));
    } catch (const DegenerateStar& e) {
      if (failed.empty()) first_reason = e.what();
      failed.push_back(node.id);
    }
  }
  if (!failed.empty()) {
    std::ostringstream msg;
    msg << failed.size() << " degenerate star(s) at nodes";
    for (Index id : failed) msg << ' ' << id;
    msg << " (first: " << first_reason << ')';
    throw DegenerateStar(failed.front(), msg.str());
  }
  return set;
}

void write_stencil_table(const StencilSet& set, std::ostream& out) {
  static constexpr const char* kNames[kNumDerivatives] = {"dx", "dy", "dxx", "dyy", "dxy"};
  out << std::setprecision(17);
  for (Index id : set.centers()) {
    const Stencil& st = set.at(id);
    out << "stencil " << id << ' ' << st.size() << '\n';
    out << "neighbors";
    for (Index j : st.neighbor_ids) out << ' ' << j;
    out << '\n';
    for (int r = 0; r < kNumDerivatives; ++r) {
      out << kNames[r] << ' ' << st.lambda0(r);
      for (Eigen::Index i = 0; i < st.lambda.cols(); ++i) out << ' ' << st.lambda(r, i);
      out << '\n';
    }
  }
}

}  // namespace gfd
