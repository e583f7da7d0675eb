#pragma once

// Exhaustive reference for the weighted edit distance on tiny DAGs. Shares
// nothing with the library's DAG or search code: its own graph type, its own
// legality rules, and isomorphism by trying every permutation.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

// Edge (tail, head, color); color 0 blue, 1 red. Node 0 is the source.
struct Graph {
  std::vector<bool> alive{true};
  std::set<std::tuple<int, int, int>> edges;

  int size() const { return static_cast<int>(alive.size()); }
  bool operator<(const Graph& o) const { return std::tie(alive, edges) < std::tie(o.alive, o.edges); }
};

inline std::vector<int> bfs(const Graph& g) {
  std::vector<int> d(g.size(), -1);
  d[0] = 0;
  std::queue<int> q;
  q.push(0);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (auto [t, h, c] : g.edges)
      if (t == v && d[h] < 0) {
        d[h] = d[v] + 1;
        q.push(h);
      }
  }
  return d;
}

inline bool path(const Graph& g, int from, int to) {
  if (from == to) return true;
  for (auto [t, h, c] : g.edges)
    if (t == from && path(g, h, to)) return true;
  return false;
}

inline int longest(const Graph& g, int v) {
  int best = 0;
  for (auto [t, h, c] : g.edges)
    if (t == v) best = std::max(best, 1 + longest(g, h));
  return best;
}

inline bool isolated(const Graph& g, int v) {
  for (auto [t, h, c] : g.edges)
    if (t == v || h == v) return false;
  return true;
}

// Live nodes in id order mapped to 0..n-1, dead ids dropped.
inline Graph compact(const Graph& g) {
  std::vector<int> idx(g.size(), -1);
  int n = 0;
  for (int v = 0; v < g.size(); ++v)
    if (g.alive[v]) idx[v] = n++;
  Graph out;
  out.alive.assign(n, true);
  for (auto [t, h, c] : g.edges) out.edges.insert({idx[t], idx[h], c});
  return out;
}

inline bool iso(const Graph& a0, const Graph& b0) {
  Graph a = compact(a0), b = compact(b0);
  if (a.size() != b.size() || a.edges.size() != b.edges.size()) return false;
  std::vector<int> p(a.size());
  std::iota(p.begin(), p.end(), 0);
  do {
    if (p[0] != 0) continue;
    bool ok = true;
    for (auto [t, h, c] : a.edges)
      if (!b.edges.count({p[t], p[h], c})) {
        ok = false;
        break;
      }
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

// Every legal successor with its cost in units of 1/2^scale.
inline std::vector<std::pair<Graph, int>> moves(const Graph& g, int scale) {
  std::vector<std::pair<Graph, int>> out;
  auto d = bfs(g);
  for (int t = 0; t < g.size(); ++t) {
    if (!g.alive[t] || d[t] < 0) continue;
    int cost = 1 << (scale - d[t]);
    for (int c = 0; c < 2; ++c) {
      for (int h = 0; h <= g.size(); ++h) {
        Graph n = g;
        if (h == g.size()) {
          n.alive.push_back(true);
        } else if (!g.alive[h]) {
          continue;
        }
        auto e = std::make_tuple(t, h, c);
        if (h < g.size() && g.edges.count(e)) {
          n.edges.erase(e);
          if (h != 0 && isolated(n, h)) n.alive[h] = false;
          out.emplace_back(n, cost);
          continue;
        }
        if (h < g.size() && path(g, h, t)) continue;
        n.edges.insert(e);
        out.emplace_back(n, cost);
      }
    }
  }
  return out;
}

// Least cost (units of 1/2^scale) from `from` to a graph isomorphic to `to`,
// over scripts of cost <= cap whose graphs keep depth <= max_depth.
inline std::optional<int> distance(const Graph& from, const Graph& to, int cap, int max_depth, int scale) {
  using Item = std::pair<int, Graph>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
  std::map<Graph, int> best;
  Graph s = compact(from);
  pq.push({0, s});
  best[s] = 0;
  while (!pq.empty()) {
    auto [c, g] = pq.top();
    pq.pop();
    if (best[g] < c) continue;
    if (iso(g, to)) return c;
    for (auto& [n0, w] : moves(g, scale)) {
      Graph n = compact(n0);
      int nc = c + w;
      if (nc > cap || longest(n, 0) > max_depth) continue;
      auto it = best.find(n);
      if (it != best.end() && it->second <= nc) continue;
      best[n] = nc;
      pq.push({nc, n});
    }
  }
  return std::nullopt;
}

}  // namespace oracle
