#pragma once

#include "rwdiag/affine.hpp"
#include "rwdiag/dl.hpp"
#include "rwdiag/free_group.hpp"
#include "rwdiag/lamplighter.hpp"
#include "rwdiag/sol.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace rwdiag {

/// A DL_{p,q} walk step tagged with its graph parameters. Vertex-level moves
/// carry no group law (the digit of a reversed move depends on the vertex);
/// compose/inverse on this family raise FamilyError, and walks over it
/// produce orbit paths of DLVertex values instead of prefix products.
struct DLMoveElement {
  std::int32_t p = 2;
  std::int32_t q = 2;
  DLStep step;

  bool operator==(const DLMoveElement&) const = default;
};

using GroupElement = std::variant<FreeWord, LampElement, DLMoveElement, AffineElement, SolElement>;

const char* family_name(const GroupElement& g);
bool same_family(const GroupElement& a, const GroupElement& b);

GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);
GroupElement identity_like(const GroupElement& g);
bool is_identity(const GroupElement& g, double tol = 0.0);
bool approx_equal(const GroupElement& a, const GroupElement& b, double tol);

std::size_t hash_element(const GroupElement& g);
std::string format_element(const GroupElement& g);

struct ElementHash {
  std::size_t operator()(const GroupElement& g) const { return hash_element(g); }
};

/// Vertical coordinate of a step: lamplighter shift, DL move direction,
/// Busemann height for Aff(R) and Sol, 0 for free words.
double family_height(const GroupElement& g);

/// Model-space point for the orbit actions in scope: the Cayley tree of a
/// free group (vertices are reduced words), a DL graph vertex, or a real.
using ModelPoint = std::variant<FreeWord, DLVertex, double>;

/// Orbit action: free words on the Cayley tree, lamplighter on DL_{p,p}
/// vertices, DL moves on DL vertices, Aff(R) on the real line.
ModelPoint act(const GroupElement& g, const ModelPoint& x);

}  // namespace rwdiag
