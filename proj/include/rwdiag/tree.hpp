#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rwdiag {

/// Vertex of the homogeneous tree with branching number p (every vertex has
/// one neighbour toward the fixed end omega and p children away from it), in
/// horocyclic coordinates. `height` is the Busemann value relative to omega
/// (heights decrease toward omega; the root o has height 0); `digits` holds
/// the nonzero child choices, one entry (position, digit) per level below the
/// reference ray, sorted by position, positions < height, digits in 1..p-1.
/// Zero digits are implicit, so equal vertices have equal encodings.
struct TreeVertex {
  std::int32_t height = 0;
  std::vector<std::pair<std::int32_t, std::int16_t>> digits;

  bool operator==(const TreeVertex&) const = default;
};

inline std::int64_t busemann_height(const TreeVertex& v) { return v.height; }

TreeVertex tree_root();
TreeVertex tree_parent(const TreeVertex& v);
TreeVertex tree_child(const TreeVertex& v, std::int32_t digit, std::int32_t p);
std::int16_t tree_digit_at(const TreeVertex& v, std::int32_t position);

/// Height of the deepest common ancestor (confluence toward omega).
std::int64_t tree_confluence_height(const TreeVertex& u, const TreeVertex& v);

/// Simplicial graph distance, computed from heights and the confluence.
std::int64_t tree_distance(const TreeVertex& u, const TreeVertex& v);

std::string format_tree_vertex(const TreeVertex& v);

/// End of the tree on the side opposite omega, truncated at height `depth`:
/// the digit stream is resolved for all positions < depth. Truncations are
/// nested by construction (a depth-m truncation is the prefix of depth-m').
struct TreeEnd {
  std::int32_t depth = 0;
  std::vector<std::pair<std::int32_t, std::int16_t>> digits;

  bool operator==(const TreeEnd&) const = default;
};

/// Vertex at height m on the geodesic from omega to the end (m <= depth).
TreeVertex truncate_end(const TreeEnd& end, std::int32_t m);

}  // namespace rwdiag
