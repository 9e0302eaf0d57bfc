#pragma once

#include "rwdiag/dl.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace rwdiag {

/// Element of the wreath product Z_p wr Z: a finitely supported lamp
/// configuration Z -> Z_p plus the lamplighter position. Lamps are stored as
/// sorted (position, value) pairs with values in 1..p-1; zero lamps are never
/// stored, so equal elements have equal encodings.
struct LampElement {
  std::int32_t mod = 2;
  std::vector<std::pair<std::int32_t, std::int16_t>> lamps;
  std::int32_t shift = 0;

  bool operator==(const LampElement&) const = default;
};

LampElement lamp_identity(std::int32_t mod);

/// (f, s)(f', s') = (f + f'(. - s), s + s'), lampwise mod p.
LampElement compose(const LampElement& x, const LampElement& y);
LampElement inverse(const LampElement& x);

std::int16_t lamp_value_at(const LampElement& x, std::int32_t position);

/// Word length with respect to the generators {move +-1, increment the lamp
/// at the current position}: lamp costs plus the shortest tour that starts at
/// 0, covers every lit lamp, and ends at the final position.
std::int64_t lamplighter_word_norm(const LampElement& x);

/// Standard identification of Z_p wr Z with the vertices of DL_{p,p}: the
/// left tree records lamps below the current position, the right tree the
/// lamps at or above it (reversed).
DLVertex lamplighter_to_dl(const LampElement& x);
LampElement lamplighter_from_dl(const DLVertex& v, std::int32_t mod);

/// Left-multiplication action on DL_{p,p} vertices (a graph automorphism).
DLVertex lamplighter_act(const LampElement& g, const DLVertex& v);

std::string format_lamp(const LampElement& x);

}  // namespace rwdiag
