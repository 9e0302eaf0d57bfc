#include "rwdiag/group.hpp"

#include "rwdiag/errors.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace rwdiag {

namespace {

inline void hash_mix(std::size_t& h, std::uint64_t v) {
  h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
}

inline std::uint64_t double_bits(double x) { return std::bit_cast<std::uint64_t>(x); }

bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol * (1.0 + std::max(std::fabs(a), std::fabs(b)));
}

}  // namespace

const char* family_name(const GroupElement& g) {
  switch (g.index()) {
    case 0: return "free";
    case 1: return "lamplighter";
    case 2: return "dl";
    case 3: return "affine";
    case 4: return "sol";
  }
  return "?";
}

bool same_family(const GroupElement& a, const GroupElement& b) {
  if (a.index() != b.index()) return false;
  if (const auto* fa = std::get_if<FreeWord>(&a)) {
    return fa->rank == std::get<FreeWord>(b).rank;
  }
  if (const auto* la = std::get_if<LampElement>(&a)) {
    return la->mod == std::get<LampElement>(b).mod;
  }
  if (const auto* da = std::get_if<DLMoveElement>(&a)) {
    const auto& db = std::get<DLMoveElement>(b);
    return da->p == db.p && da->q == db.q;
  }
  if (const auto* sa = std::get_if<SolElement>(&a)) {
    const auto& sb = std::get<SolElement>(b);
    return sa->p == sb.p && sa->q == sb.q;
  }
  return true;
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
  if (!same_family(a, b)) {
    throw FamilyError(std::string("compose: family mismatch (") + family_name(a) + " vs " +
                      family_name(b) + ")");
  }
  if (const auto* x = std::get_if<FreeWord>(&a)) return compose(*x, std::get<FreeWord>(b));
  if (const auto* x = std::get_if<LampElement>(&a)) return compose(*x, std::get<LampElement>(b));
  if (std::holds_alternative<DLMoveElement>(a)) {
    throw FamilyError("compose: DL vertex-level moves carry no group law");
  }
  if (const auto* x = std::get_if<AffineElement>(&a)) {
    return compose(*x, std::get<AffineElement>(b));
  }
  return compose(std::get<SolElement>(a), std::get<SolElement>(b));
}

GroupElement inverse(const GroupElement& g) {
  if (const auto* x = std::get_if<FreeWord>(&g)) return inverse(*x);
  if (const auto* x = std::get_if<LampElement>(&g)) return inverse(*x);
  if (std::holds_alternative<DLMoveElement>(g)) {
    throw FamilyError("inverse: DL vertex-level moves carry no group law");
  }
  if (const auto* x = std::get_if<AffineElement>(&g)) return inverse(*x);
  return inverse(std::get<SolElement>(g));
}

GroupElement identity_like(const GroupElement& g) {
  if (const auto* x = std::get_if<FreeWord>(&g)) return free_identity(x->rank);
  if (const auto* x = std::get_if<LampElement>(&g)) return lamp_identity(x->mod);
  if (std::holds_alternative<DLMoveElement>(g)) {
    throw FamilyError("identity_like: DL vertex-level moves carry no group law");
  }
  if (std::holds_alternative<AffineElement>(g)) return affine_identity();
  const auto& s = std::get<SolElement>(g);
  return sol_identity(s.p, s.q);
}

bool is_identity(const GroupElement& g, double tol) {
  if (const auto* x = std::get_if<FreeWord>(&g)) return x->letters.empty();
  if (const auto* x = std::get_if<LampElement>(&g)) return x->lamps.empty() && x->shift == 0;
  if (std::holds_alternative<DLMoveElement>(g)) return false;
  if (const auto* x = std::get_if<AffineElement>(&g)) {
    return close(x->log_a, 0.0, tol) && close(x->b, 0.0, tol);
  }
  const auto& s = std::get<SolElement>(g);
  return close(s.a, 0.0, tol) && close(s.b, 0.0, tol) && close(s.c, 0.0, tol);
}

bool approx_equal(const GroupElement& a, const GroupElement& b, double tol) {
  if (!same_family(a, b)) return false;
  if (const auto* x = std::get_if<AffineElement>(&a)) {
    const auto& y = std::get<AffineElement>(b);
    return close(x->log_a, y.log_a, tol) && close(x->b, y.b, tol);
  }
  if (const auto* x = std::get_if<SolElement>(&a)) {
    const auto& y = std::get<SolElement>(b);
    return close(x->a, y.a, tol) && close(x->b, y.b, tol) && close(x->c, y.c, tol);
  }
  return a == b;
}

std::size_t hash_element(const GroupElement& g) {
  std::size_t h = g.index() * 0x9E3779B9u;
  if (const auto* x = std::get_if<FreeWord>(&g)) {
    hash_mix(h, static_cast<std::uint64_t>(x->rank));
    for (auto l : x->letters) hash_mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(l)));
  } else if (const auto* x = std::get_if<LampElement>(&g)) {
    hash_mix(h, static_cast<std::uint64_t>(x->mod));
    hash_mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(x->shift)));
    for (const auto& [pos, v] : x->lamps) {
      hash_mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(pos)));
      hash_mix(h, static_cast<std::uint64_t>(v));
    }
  } else if (const auto* x = std::get_if<DLMoveElement>(&g)) {
    hash_mix(h, static_cast<std::uint64_t>(x->p));
    hash_mix(h, static_cast<std::uint64_t>(x->q));
    hash_mix(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(x->step.dir)));
    hash_mix(h, static_cast<std::uint64_t>(x->step.digit));
  } else if (const auto* x = std::get_if<AffineElement>(&g)) {
    hash_mix(h, double_bits(x->log_a));
    hash_mix(h, double_bits(x->b));
  } else {
    const auto& s = std::get<SolElement>(g);
    hash_mix(h, double_bits(s.a));
    hash_mix(h, double_bits(s.b));
    hash_mix(h, double_bits(s.c));
  }
  return h;
}

std::string format_element(const GroupElement& g) {
  if (const auto* x = std::get_if<FreeWord>(&g)) return format_word(*x);
  if (const auto* x = std::get_if<LampElement>(&g)) return format_lamp(*x);
  if (const auto* x = std::get_if<DLMoveElement>(&g)) {
    std::ostringstream os;
    os << (x->step.dir > 0 ? "+" : "-") << "d" << x->step.digit;
    return os.str();
  }
  if (const auto* x = std::get_if<AffineElement>(&g)) return format_affine(*x);
  return format_sol(std::get<SolElement>(g));
}

std::string format_affine(const AffineElement& g) {
  std::ostringstream os;
  os << "(a=" << std::exp(g.log_a) << ",b=" << g.b << ")";
  return os.str();
}

std::string format_sol(const SolElement& g) {
  std::ostringstream os;
  os << "(" << g.a << "," << g.b << "," << g.c << ")";
  return os.str();
}

double family_height(const GroupElement& g) {
  if (std::holds_alternative<FreeWord>(g)) return 0.0;
  if (const auto* x = std::get_if<LampElement>(&g)) return static_cast<double>(x->shift);
  if (const auto* x = std::get_if<DLMoveElement>(&g)) return static_cast<double>(x->step.dir);
  if (const auto* x = std::get_if<AffineElement>(&g)) return affine_height(*x);
  return sol_height(std::get<SolElement>(g));
}

ModelPoint act(const GroupElement& g, const ModelPoint& x) {
  if (const auto* w = std::get_if<FreeWord>(&g)) {
    if (const auto* v = std::get_if<FreeWord>(&x)) return compose(*w, *v);
    throw FamilyError("act: free words act on Cayley-tree vertices (words)");
  }
  if (const auto* l = std::get_if<LampElement>(&g)) {
    if (const auto* v = std::get_if<DLVertex>(&x)) return lamplighter_act(*l, *v);
    throw FamilyError("act: lamplighter elements act on DL vertices");
  }
  if (const auto* m = std::get_if<DLMoveElement>(&g)) {
    if (const auto* v = std::get_if<DLVertex>(&x)) return dl_apply(*v, m->step, m->p, m->q);
    throw FamilyError("act: DL moves act on DL vertices");
  }
  if (const auto* a = std::get_if<AffineElement>(&g)) {
    if (const auto* r = std::get_if<double>(&x)) return affine_apply(*a, *r);
    throw FamilyError("act: affine maps act on the real line");
  }
  throw FamilyError("act: no model-space action implemented for this family");
}

}  // namespace rwdiag
