#pragma once

#include <random>

#include "cgd/game.hpp"

namespace cgd::testing {

// Random brace form of birthday <= depth; option lists may repeat and
// contain dominated or reversible entries.
inline RawGamePtr random_raw(std::mt19937& rng, int depth) {
  auto g = make_raw({}, {});
  if (depth <= 0) return g;
  std::uniform_int_distribution<int> count(0, 2);
  int nl = count(rng), nr = count(rng);
  for (int i = 0; i < nl; ++i) g->left.emplace_back(random_raw(rng, depth - 1));
  for (int i = 0; i < nr; ++i) g->right.emplace_back(random_raw(rng, depth - 1));
  return g;
}

inline Game random_game(std::mt19937& rng, int depth) { return canonicalize(random_raw(rng, depth)); }

}  // namespace cgd::testing
