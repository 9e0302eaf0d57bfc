#include "rwdiag/boundary.hpp"

#include "rwdiag/errors.hpp"

#include <algorithm>

namespace rwdiag {

WordEnd act_on_word_end(const FreeWord& g, const WordEnd& end) {
  return WordEnd{compose(g, end.prefix)};
}

WordEndExtraction extract_word_end(const std::vector<FreeWord>& window,
                                   std::int64_t required_depth) {
  if (window.empty()) throw ValidationError("extract_word_end: empty window");
  WordEndExtraction out;
  std::int64_t common = word_length(window.front());
  for (std::size_t i = 1; i < window.size(); ++i) {
    common = std::min(common, common_prefix_length(window.front(), window[i]));
  }
  out.end.prefix = word_prefix(window.front(), common);
  out.stable_depth = common;
  out.stable = common >= required_depth;
  return out;
}

TreeEndExtraction extract_tree_end(const std::vector<TreeVertex>& window,
                                   std::int64_t required_depth) {
  if (window.empty()) throw ValidationError("extract_tree_end: empty window");
  TreeEndExtraction out;
  std::int64_t m = window.front().height;
  for (std::size_t i = 1; i < window.size(); ++i) {
    m = std::min(m, tree_confluence_height(window.front(), window[i]));
  }
  out.end.depth = static_cast<std::int32_t>(m);
  for (const auto& [pos, d] : window.front().digits) {
    if (pos < m) out.end.digits.emplace_back(pos, d);
  }
  out.stable_depth = m;
  out.stable = m >= required_depth;
  return out;
}

}  // namespace rwdiag
