#include "rwdiag/free_group.hpp"

#include "rwdiag/errors.hpp"

#include <algorithm>
#include <cstdlib>

namespace rwdiag {

FreeWord free_identity(std::int32_t rank) { return FreeWord{rank, {}}; }

FreeWord free_generator(std::int32_t rank, std::int32_t index, bool inv) {
  if (index < 1 || index > rank) throw FamilyError("free_generator: index out of range");
  FreeWord w{rank, {static_cast<std::int16_t>(inv ? -index : index)}};
  return w;
}

FreeWord compose(const FreeWord& x, const FreeWord& y) {
  if (x.rank != y.rank) throw FamilyError("compose: free-group rank mismatch");
  FreeWord out{x.rank, x.letters};
  out.letters.reserve(x.letters.size() + y.letters.size());
  for (std::int16_t s : y.letters) {
    if (!out.letters.empty() && out.letters.back() == -s) {
      out.letters.pop_back();
    } else {
      out.letters.push_back(s);
    }
  }
  return out;
}

FreeWord inverse(const FreeWord& x) {
  FreeWord out{x.rank, {}};
  out.letters.reserve(x.letters.size());
  for (auto it = x.letters.rbegin(); it != x.letters.rend(); ++it) {
    out.letters.push_back(static_cast<std::int16_t>(-*it));
  }
  return out;
}

std::int64_t common_prefix_length(const FreeWord& a, const FreeWord& b) {
  const std::size_t n = std::min(a.letters.size(), b.letters.size());
  std::size_t i = 0;
  while (i < n && a.letters[i] == b.letters[i]) ++i;
  return static_cast<std::int64_t>(i);
}

std::int64_t word_distance(const FreeWord& u, const FreeWord& v) {
  // u^-1 v cancels exactly the common prefix; the words are reduced.
  const std::int64_t c = common_prefix_length(u, v);
  return word_length(u) + word_length(v) - 2 * c;
}

FreeWord word_prefix(const FreeWord& w, std::int64_t len) {
  len = std::clamp<std::int64_t>(len, 0, word_length(w));
  FreeWord out{w.rank, {}};
  out.letters.assign(w.letters.begin(), w.letters.begin() + len);
  return out;
}

std::string format_word(const FreeWord& w) {
  if (w.letters.empty()) return "e";
  std::string s;
  s.reserve(w.letters.size());
  for (std::int16_t l : w.letters) {
    const int idx = std::abs(static_cast<int>(l));
    if (idx > 26) return "<word rank>26>";
    s.push_back(static_cast<char>((l > 0 ? 'a' : 'A') + idx - 1));
  }
  return s;
}

FreeWord parse_word(std::int32_t rank, const std::string& text) {
  FreeWord out = free_identity(rank);
  if (text == "e" || text.empty()) return out;
  for (char c : text) {
    int letter = 0;
    if (c >= 'a' && c <= 'z') letter = c - 'a' + 1;
    else if (c >= 'A' && c <= 'Z') letter = -(c - 'A' + 1);
    else throw ValidationError(std::string("parse_word: bad character '") + c + "'");
    if (std::abs(letter) > rank) throw ValidationError("parse_word: letter exceeds rank");
    out = compose(out, FreeWord{rank, {static_cast<std::int16_t>(letter)}});
  }
  return out;
}

}  // namespace rwdiag
