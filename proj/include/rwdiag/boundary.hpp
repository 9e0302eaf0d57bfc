#pragma once

#include "rwdiag/free_group.hpp"
#include "rwdiag/group.hpp"
#include "rwdiag/tree.hpp"

#include <cstdint>
#include <variant>
#include <vector>

namespace rwdiag {

/// One-point boundary of walks with trivial asymptotics.
struct TrivialBoundary {
  bool operator==(const TrivialBoundary&) const = default;
};

/// End of the Cayley tree of a free group, materialized as a truncation: the
/// reduced-word prefix resolved so far (cylinder semantics).
struct WordEnd {
  FreeWord prefix;

  bool operator==(const WordEnd&) const = default;
};

/// Limit point on the real line (Aff(R) with contracting drift).
struct RealLimit {
  double x = 0.0;

  bool operator==(const RealLimit&) const = default;
};

/// Boundary point of DL_{p,q} with positive vertical drift: an end of the
/// left tree paired with the fixed end of the right tree.
struct DLBoundary {
  TreeEnd left;

  bool operator==(const DLBoundary&) const = default;
};

using BoundaryPoint = std::variant<TrivialBoundary, WordEnd, TreeEnd, RealLimit, DLBoundary>;

/// g . end for free groups: the reduced product of g with the resolved
/// prefix; the truncation depth shrinks by at most |g|.
WordEnd act_on_word_end(const FreeWord& g, const WordEnd& end);

/// Deepest prefix shared by positions sampled over the stabilization window,
/// plus the stability verdict: the prefix must reach `required_depth`.
struct WordEndExtraction {
  WordEnd end;
  std::int64_t stable_depth = 0;
  bool stable = false;
};
WordEndExtraction extract_word_end(const std::vector<FreeWord>& window_positions,
                                   std::int64_t required_depth);

/// Same for lamplighter / DL walks: the digit stream of the left coordinate,
/// resolved to the largest height below which all window positions agree.
struct TreeEndExtraction {
  TreeEnd end;
  std::int64_t stable_depth = 0;
  bool stable = false;
};
TreeEndExtraction extract_tree_end(const std::vector<TreeVertex>& window_positions,
                                   std::int64_t required_depth);

}  // namespace rwdiag
