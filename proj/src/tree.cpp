#include "rwdiag/tree.hpp"

#include "rwdiag/errors.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace rwdiag {

TreeVertex tree_root() { return TreeVertex{}; }

TreeVertex tree_parent(const TreeVertex& v) {
  TreeVertex out;
  out.height = v.height - 1;
  out.digits.reserve(v.digits.size());
  for (const auto& [pos, d] : v.digits) {
    if (pos < out.height) out.digits.emplace_back(pos, d);
  }
  return out;
}

TreeVertex tree_child(const TreeVertex& v, std::int32_t digit, std::int32_t p) {
  if (p < 2) throw FamilyError("tree_child: branching number must be >= 2");
  if (digit < 0 || digit >= p) throw FamilyError("tree_child: digit out of range");
  TreeVertex out = v;
  if (digit != 0) out.digits.emplace_back(v.height, static_cast<std::int16_t>(digit));
  out.height = v.height + 1;
  return out;
}

std::int16_t tree_digit_at(const TreeVertex& v, std::int32_t position) {
  for (const auto& [pos, d] : v.digits) {
    if (pos == position) return d;
    if (pos > position) break;
  }
  return 0;
}

std::int64_t tree_confluence_height(const TreeVertex& u, const TreeVertex& v) {
  // Largest m <= min(heights) such that the digit streams agree below m;
  // equivalently min(heights, smallest position of disagreement).
  std::int64_t m = std::min(u.height, v.height);
  std::size_t i = 0, j = 0;
  std::int64_t disagree = std::numeric_limits<std::int64_t>::max();
  while (i < u.digits.size() || j < v.digits.size()) {
    const std::int64_t pu =
        i < u.digits.size() ? u.digits[i].first : std::numeric_limits<std::int64_t>::max();
    const std::int64_t pv =
        j < v.digits.size() ? v.digits[j].first : std::numeric_limits<std::int64_t>::max();
    if (pu == pv) {
      if (u.digits[i].second != v.digits[j].second) {
        disagree = pu;
        break;
      }
      ++i;
      ++j;
    } else if (pu < pv) {
      disagree = pu;
      break;
    } else {
      disagree = pv;
      break;
    }
  }
  return std::min(m, disagree);
}

std::int64_t tree_distance(const TreeVertex& u, const TreeVertex& v) {
  const std::int64_t m = tree_confluence_height(u, v);
  return (u.height - m) + (v.height - m);
}

std::string format_tree_vertex(const TreeVertex& v) {
  std::ostringstream os;
  os << "h" << v.height << "[";
  bool first = true;
  for (const auto& [pos, d] : v.digits) {
    if (!first) os << ",";
    os << pos << ":" << d;
    first = false;
  }
  os << "]";
  return os.str();
}

TreeVertex truncate_end(const TreeEnd& end, std::int32_t m) {
  if (m > end.depth) throw ResolutionError("truncate_end: requested depth exceeds resolution");
  TreeVertex out;
  out.height = m;
  for (const auto& [pos, d] : end.digits) {
    if (pos < m) out.digits.emplace_back(pos, d);
  }
  return out;
}

}  // namespace rwdiag
