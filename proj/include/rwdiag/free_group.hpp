#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rwdiag {

/// Reduced word in the free group F_k. Letters are nonzero integers in
/// [-rank, rank]; letter -s is the inverse of letter s. The letters vector is
/// always freely reduced (no adjacent s, -s), which makes equality and
/// hashing structural. F_1 is the integers.
struct FreeWord {
  std::int32_t rank = 2;
  std::vector<std::int16_t> letters;

  bool operator==(const FreeWord&) const = default;
};

FreeWord free_identity(std::int32_t rank);
FreeWord free_generator(std::int32_t rank, std::int32_t index, bool inverse = false);

FreeWord compose(const FreeWord& x, const FreeWord& y);
FreeWord inverse(const FreeWord& x);

inline std::int64_t word_length(const FreeWord& w) {
  return static_cast<std::int64_t>(w.letters.size());
}

/// Length of the longest common prefix of two reduced words.
std::int64_t common_prefix_length(const FreeWord& a, const FreeWord& b);

/// Graph distance between u and v as vertices of the Cayley tree: |u^-1 v|.
std::int64_t word_distance(const FreeWord& u, const FreeWord& v);

FreeWord word_prefix(const FreeWord& w, std::int64_t len);

/// "e" for the identity; otherwise letters a..z for generators 1..26 and
/// A..Z for their inverses ("abA" = a b a^-1).
std::string format_word(const FreeWord& w);
FreeWord parse_word(std::int32_t rank, const std::string& text);

}  // namespace rwdiag
