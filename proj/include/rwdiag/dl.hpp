#pragma once

#include "rwdiag/tree.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rwdiag {

/// Vertex of the Diestel-Leader graph DL_{p,q}: a pair of tree vertices with
/// opposite Busemann heights, h(left) + h(right) = 0.
struct DLVertex {
  TreeVertex left;
  TreeVertex right;

  bool operator==(const DLVertex&) const = default;
};

/// One edge step at the vertex level. dir = +1 moves the left coordinate away
/// from its end (choosing `digit` among p children) while the right
/// coordinate moves toward its end; dir = -1 is the mirror move with `digit`
/// among q children. These moves generate the graph: a DL vertex has p + q
/// neighbours.
struct DLStep {
  std::int8_t dir = +1;
  std::int16_t digit = 0;

  bool operator==(const DLStep&) const = default;
};

DLVertex dl_base();
bool dl_valid(const DLVertex& v);

DLVertex dl_apply(const DLVertex& v, const DLStep& step, std::int32_t p, std::int32_t q);
std::vector<DLVertex> dl_neighbors(const DLVertex& v, std::int32_t p, std::int32_t q);

/// Graph distance d = d1(left) + d2(right) - |height difference|.
std::int64_t dl_distance(const DLVertex& v, const DLVertex& w);

std::string format_dl_vertex(const DLVertex& v);

}  // namespace rwdiag
