#include "rwdiag/dl.hpp"

#include "rwdiag/errors.hpp"

#include <cstdlib>

namespace rwdiag {

DLVertex dl_base() { return DLVertex{tree_root(), tree_root()}; }

bool dl_valid(const DLVertex& v) { return v.left.height + v.right.height == 0; }

DLVertex dl_apply(const DLVertex& v, const DLStep& step, std::int32_t p, std::int32_t q) {
  DLVertex out;
  if (step.dir == +1) {
    out.left = tree_child(v.left, step.digit, p);
    out.right = tree_parent(v.right);
  } else if (step.dir == -1) {
    out.left = tree_parent(v.left);
    out.right = tree_child(v.right, step.digit, q);
  } else {
    throw FamilyError("dl_apply: step direction must be +1 or -1");
  }
  return out;
}

std::vector<DLVertex> dl_neighbors(const DLVertex& v, std::int32_t p, std::int32_t q) {
  std::vector<DLVertex> out;
  out.reserve(static_cast<std::size_t>(p + q));
  for (std::int32_t d = 0; d < p; ++d) {
    out.push_back(dl_apply(v, DLStep{+1, static_cast<std::int16_t>(d)}, p, q));
  }
  for (std::int32_t d = 0; d < q; ++d) {
    out.push_back(dl_apply(v, DLStep{-1, static_cast<std::int16_t>(d)}, p, q));
  }
  return out;
}

std::int64_t dl_distance(const DLVertex& v, const DLVertex& w) {
  const std::int64_t d1 = tree_distance(v.left, w.left);
  const std::int64_t d2 = tree_distance(v.right, w.right);
  const std::int64_t dh = std::llabs(static_cast<long long>(w.left.height) - v.left.height);
  return d1 + d2 - dh;
}

std::string format_dl_vertex(const DLVertex& v) {
  return "(" + format_tree_vertex(v.left) + "," + format_tree_vertex(v.right) + ")";
}

}  // namespace rwdiag
