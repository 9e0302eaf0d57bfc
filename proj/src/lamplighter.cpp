#include "rwdiag/lamplighter.hpp"

#include "rwdiag/errors.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace rwdiag {

LampElement lamp_identity(std::int32_t mod) {
  if (mod < 2) throw FamilyError("lamp_identity: modulus must be >= 2");
  return LampElement{mod, {}, 0};
}

LampElement compose(const LampElement& x, const LampElement& y) {
  if (x.mod != y.mod) throw FamilyError("compose: lamplighter modulus mismatch");
  LampElement out{x.mod, {}, x.shift + y.shift};
  out.lamps.reserve(x.lamps.size() + y.lamps.size());
  // Merge x.lamps with y.lamps translated by x.shift; both inputs are sorted.
  std::size_t i = 0, j = 0;
  const std::int32_t p = x.mod;
  while (i < x.lamps.size() || j < y.lamps.size()) {
    const std::int64_t px = i < x.lamps.size() ? x.lamps[i].first
                                               : std::numeric_limits<std::int64_t>::max();
    const std::int64_t py = j < y.lamps.size()
                                ? static_cast<std::int64_t>(y.lamps[j].first) + x.shift
                                : std::numeric_limits<std::int64_t>::max();
    if (px < py) {
      out.lamps.emplace_back(x.lamps[i].first, x.lamps[i].second);
      ++i;
    } else if (py < px) {
      out.lamps.emplace_back(static_cast<std::int32_t>(py), y.lamps[j].second);
      ++j;
    } else {
      const int v = (x.lamps[i].second + y.lamps[j].second) % p;
      if (v != 0) out.lamps.emplace_back(x.lamps[i].first, static_cast<std::int16_t>(v));
      ++i;
      ++j;
    }
  }
  return out;
}

LampElement inverse(const LampElement& x) {
  // (f, s)^-1 = (g, -s) with g(t) = -f(t + s); the shift keeps order intact.
  LampElement out{x.mod, {}, -x.shift};
  out.lamps.reserve(x.lamps.size());
  for (const auto& [pos, v] : x.lamps) {
    out.lamps.emplace_back(pos - x.shift, static_cast<std::int16_t>((x.mod - v) % x.mod));
  }
  return out;
}

std::int16_t lamp_value_at(const LampElement& x, std::int32_t position) {
  for (const auto& [pos, v] : x.lamps) {
    if (pos == position) return v;
    if (pos > position) break;
  }
  return 0;
}

std::int64_t lamplighter_word_norm(const LampElement& x) {
  std::int64_t toggles = 0;
  for (const auto& [pos, v] : x.lamps) {
    (void)pos;
    toggles += std::min<std::int64_t>(v, x.mod - v);
  }
  std::int64_t travel = std::llabs(static_cast<long long>(x.shift));
  if (!x.lamps.empty()) {
    const std::int64_t lo = x.lamps.front().first;
    const std::int64_t hi = x.lamps.back().first;
    const std::int64_t seg_lo = std::min<std::int64_t>(0, x.shift);
    const std::int64_t seg_hi = std::max<std::int64_t>(0, x.shift);
    // Detours beyond the straight 0 -> shift segment are walked twice.
    travel += 2 * std::max<std::int64_t>(0, hi - seg_hi) +
              2 * std::max<std::int64_t>(0, seg_lo - lo);
  }
  return toggles + travel;
}

DLVertex lamplighter_to_dl(const LampElement& x) {
  DLVertex v;
  v.left.height = x.shift;
  v.right.height = -x.shift;
  for (const auto& [pos, val] : x.lamps) {
    if (pos < x.shift) {
      v.left.digits.emplace_back(pos, val);
    } else {
      // Lamp at position j >= shift lands at right-tree position -1-j.
      v.right.digits.emplace_back(-1 - pos, val);
    }
  }
  std::sort(v.right.digits.begin(), v.right.digits.end());
  return v;
}

LampElement lamplighter_from_dl(const DLVertex& v, std::int32_t mod) {
  if (!dl_valid(v)) throw FamilyError("lamplighter_from_dl: height constraint violated");
  LampElement out{mod, {}, v.left.height};
  for (const auto& [pos, val] : v.left.digits) out.lamps.emplace_back(pos, val);
  for (const auto& [pos, val] : v.right.digits) out.lamps.emplace_back(-1 - pos, val);
  std::sort(out.lamps.begin(), out.lamps.end());
  return out;
}

DLVertex lamplighter_act(const LampElement& g, const DLVertex& v) {
  return lamplighter_to_dl(compose(g, lamplighter_from_dl(v, g.mod)));
}

std::string format_lamp(const LampElement& x) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [pos, v] : x.lamps) {
    if (!first) os << ",";
    os << pos << ":" << v;
    first = false;
  }
  os << "|" << x.shift << "}";
  return os.str();
}

}  // namespace rwdiag
