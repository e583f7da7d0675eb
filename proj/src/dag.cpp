#include "cgd/dag.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace cgd {

std::string_view to_string(Color c) { return c == Color::Blue ? "blue" : "red"; }

GameDag::GameDag() { add_node(); }

std::vector<NodeId> GameDag::nodes() const {
  std::vector<NodeId> out;
  out.reserve(live_nodes_);
  for (NodeId v = 0; v < alive_.size(); ++v)
    if (alive_[v]) out.push_back(v);
  return out;
}

bool GameDag::has_edge(NodeId tail, NodeId head, Color c) const {
  if (!alive(tail)) return false;
  auto kids = children(tail, c);
  return std::binary_search(kids.begin(), kids.end(), head);
}

NodeId GameDag::add_node() {
  NodeId id = static_cast<NodeId>(alive_.size());
  blue_.emplace_back();
  red_.emplace_back();
  in_.push_back(0);
  alive_.push_back(true);
  labels_.emplace_back();
  ++live_nodes_;
  return id;
}

bool GameDag::add_edge(NodeId tail, NodeId head, Color c) {
  auto& kids = c == Color::Blue ? blue_[tail] : red_[tail];
  auto it = std::lower_bound(kids.begin(), kids.end(), head);
  if (it != kids.end() && *it == head) return false;
  kids.insert(it, head);
  ++in_[head];
  ++edges_;
  return true;
}

bool GameDag::remove_edge(NodeId tail, NodeId head, Color c) {
  auto& kids = c == Color::Blue ? blue_[tail] : red_[tail];
  auto it = std::lower_bound(kids.begin(), kids.end(), head);
  if (it == kids.end() || *it != head) return false;
  kids.erase(it);
  --in_[head];
  --edges_;
  return true;
}

bool GameDag::remove_if_isolated(NodeId v) {
  if (v == source_ || !alive(v) || in_[v] != 0 || out_degree(v) != 0) return false;
  alive_[v] = false;
  labels_[v].reset();
  --live_nodes_;
  return true;
}

bool GameDag::reaches(NodeId from, NodeId to) const {
  if (from == to) return true;
  std::vector<bool> seen(alive_.size(), false);
  std::vector<NodeId> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    for (Color c : {Color::Blue, Color::Red}) {
      for (NodeId w : children(v, c)) {
        if (w == to) return true;
        if (!seen[w]) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
  }
  return false;
}

std::vector<int> GameDag::source_distances() const {
  std::vector<int> dist(alive_.size(), -1);
  std::deque<NodeId> queue{source_};
  dist[source_] = 0;
  while (!queue.empty()) {
    NodeId v = queue.front();
    queue.pop_front();
    for (Color c : {Color::Blue, Color::Red}) {
      for (NodeId w : children(v, c)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  return dist;
}

std::size_t GameDag::depth() const {
  // memoized longest path over the part reachable from the source
  std::vector<int> memo(alive_.size(), -1);
  auto longest = [&](auto&& self, NodeId v) -> int {
    if (memo[v] >= 0) return memo[v];
    int best = 0;
    for (Color c : {Color::Blue, Color::Red})
      for (NodeId w : children(v, c)) best = std::max(best, 1 + self(self, w));
    memo[v] = best;
    return best;
  };
  return static_cast<std::size_t>(longest(longest, source_));
}

GameDag build_dag(Game g) {
  GameDag d;
  std::unordered_map<Game, NodeId> index{{g, d.source()}};
  d.set_label(d.source(), g);
  std::deque<Game> queue{g};
  auto node_for = [&](Game x) {
    auto [it, fresh] = index.try_emplace(x, 0);
    if (fresh) {
      it->second = d.add_node();
      d.set_label(it->second, x);
      queue.push_back(x);
    }
    return it->second;
  };
  while (!queue.empty()) {
    Game x = queue.front();
    queue.pop_front();
    NodeId v = index.at(x);
    for (Game o : left_options(x)) d.add_edge(v, node_for(o), Color::Blue);
    for (Game o : right_options(x)) d.add_edge(v, node_for(o), Color::Red);
  }
  return d;
}

std::size_t source_distance(const GameDag& d, NodeId v) {
  if (!d.alive(v)) throw std::invalid_argument("node " + std::to_string(v) + " does not exist");
  int dist = d.source_distances()[v];
  if (dist < 0) throw std::invalid_argument("node " + std::to_string(v) + " is unreachable from the source");
  return static_cast<std::size_t>(dist);
}

namespace {

constexpr std::uint32_t kSep = 0xffffffffu;
constexpr std::size_t kMaxLeaves = 200000;

struct Labeler {
  const GameDag& d;
  std::vector<NodeId> nodes;
  std::vector<std::uint32_t> pos;  // node id -> index into nodes
  std::vector<std::vector<std::uint32_t>> kids[2], parents[2];
  std::size_t leaves = 0;
  std::vector<std::uint32_t> prefix;
  std::vector<std::vector<std::uint32_t>> autos;

  explicit Labeler(const GameDag& dag) : d(dag), nodes(dag.nodes()), pos(dag.id_bound(), 0) {
    for (std::uint32_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = i;
    for (int c = 0; c < 2; ++c) {
      kids[c].resize(nodes.size());
      parents[c].resize(nodes.size());
    }
    for (std::uint32_t i = 0; i < nodes.size(); ++i) {
      for (int c = 0; c < 2; ++c) {
        for (NodeId w : d.children(nodes[i], static_cast<Color>(c))) {
          kids[c][i].push_back(pos[w]);
          parents[c][pos[w]].push_back(i);
        }
      }
    }
  }

  // Colour refinement to a stable partition. Colours are ranks of sorted
  // signatures, so they do not depend on node numbering.
  std::vector<std::uint32_t> refine(std::vector<std::uint32_t> color) const {
    std::size_t classes = count_classes(color);
    for (;;) {
      std::vector<std::vector<std::uint32_t>> sig(nodes.size());
      std::vector<std::uint32_t> tmp;
      for (std::uint32_t i = 0; i < nodes.size(); ++i) {
        auto& s = sig[i];
        s.push_back(color[i]);
        for (int c = 0; c < 2; ++c) {
          for (const auto* adj : {&kids[c][i], &parents[c][i]}) {
            tmp.clear();
            for (std::uint32_t j : *adj) tmp.push_back(color[j]);
            std::sort(tmp.begin(), tmp.end());
            s.push_back(kSep);
            s.insert(s.end(), tmp.begin(), tmp.end());
          }
        }
      }
      std::vector<std::uint32_t> order(nodes.size());
      for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sig[a] < sig[b]; });
      std::vector<std::uint32_t> next(nodes.size());
      std::uint32_t rank = 0;
      for (std::size_t k = 0; k < order.size(); ++k) {
        if (k > 0 && sig[order[k]] != sig[order[k - 1]]) ++rank;
        next[order[k]] = rank;
      }
      std::size_t now = order.empty() ? 0 : rank + 1;
      color = std::move(next);
      if (now == classes) return color;
      classes = now;
    }
  }

  static std::size_t count_classes(const std::vector<std::uint32_t>& color) {
    std::vector<std::uint32_t> c = color;
    std::sort(c.begin(), c.end());
    return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
  }

  std::vector<std::uint32_t> encode(const std::vector<std::uint32_t>& label) const {
    std::vector<std::uint32_t> out;
    out.push_back(static_cast<std::uint32_t>(nodes.size()));
    out.push_back(label[pos[d.source()]]);
    std::vector<std::uint32_t> by_label(nodes.size());
    for (std::uint32_t i = 0; i < nodes.size(); ++i) by_label[label[i]] = i;
    std::vector<std::uint32_t> tmp;
    for (std::uint32_t l = 0; l < nodes.size(); ++l) {
      std::uint32_t i = by_label[l];
      for (int c = 0; c < 2; ++c) {
        tmp.clear();
        for (std::uint32_t j : kids[c][i]) tmp.push_back(label[j]);
        std::sort(tmp.begin(), tmp.end());
        out.push_back(kSep);
        out.insert(out.end(), tmp.begin(), tmp.end());
      }
    }
    return out;
  }

  // Individualise-and-refine; keeps the lexicographically least encoding.
  // Leaves that tie with the best one yield automorphisms, used to skip
  // branches already covered by symmetry.
  void search(std::vector<std::uint32_t> color, std::optional<std::vector<std::uint32_t>>& best,
              std::vector<std::uint32_t>& best_label) {
    color = refine(std::move(color));
    std::map<std::uint32_t, std::vector<std::uint32_t>> cells;
    for (std::uint32_t i = 0; i < nodes.size(); ++i) cells[color[i]].push_back(i);
    const std::vector<std::uint32_t>* target = nullptr;
    for (const auto& [c, members] : cells) {
      if (members.size() > 1) {
        target = &members;
        break;
      }
    }
    if (!target) {
      if (++leaves > kMaxLeaves) throw ResourceLimitError("canonical labeling search too large");
      auto code = encode(color);
      if (!best || code < *best) {
        best = std::move(code);
        best_label = color;
      } else if (code == *best) {
        std::vector<std::uint32_t> at_label(nodes.size());
        for (std::uint32_t i = 0; i < nodes.size(); ++i) at_label[color[i]] = i;
        std::vector<std::uint32_t> sigma(nodes.size());
        for (std::uint32_t i = 0; i < nodes.size(); ++i) sigma[i] = at_label[best_label[i]];
        autos.push_back(std::move(sigma));
      }
      return;
    }
    const std::vector<std::uint32_t> cell = *target;
    std::vector<std::uint32_t> tried;
    for (std::uint32_t v : cell) {
      if (!tried.empty() && covered(tried, v)) continue;
      tried.push_back(v);
      // Split v off its cell: v keeps a colour just below its former
      // cell-mates. Doubling keeps all colours distinct and ordered.
      std::vector<std::uint32_t> next(color.size());
      for (std::uint32_t i = 0; i < color.size(); ++i) next[i] = 2 * color[i] + 1;
      next[v] = 2 * color[v];
      prefix.push_back(v);
      search(std::move(next), best, best_label);
      prefix.pop_back();
    }
  }

  // v is the image of a tried vertex under the group generated by twin
  // swaps and the known automorphisms fixing the current prefix.
  bool covered(const std::vector<std::uint32_t>& tried, std::uint32_t v) const {
    for (std::uint32_t u : tried) {
      bool twin = true;
      for (int c = 0; c < 2 && twin; ++c)
        twin = kids[c][u] == kids[c][v] && parents[c][u] == parents[c][v];
      if (twin) return true;
    }
    std::vector<std::uint32_t> root(nodes.size());
    for (std::uint32_t i = 0; i < root.size(); ++i) root[i] = i;
    auto find = [&](std::uint32_t x) {
      while (root[x] != x) x = root[x] = root[root[x]];
      return x;
    };
    bool any = false;
    for (const auto& sigma : autos) {
      bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](std::uint32_t p) { return sigma[p] == p; });
      if (!fixes) continue;
      any = true;
      for (std::uint32_t i = 0; i < sigma.size(); ++i) root[find(i)] = find(sigma[i]);
    }
    if (!any) return false;
    for (std::uint32_t u : tried)
      if (find(u) == find(v)) return true;
    return false;
  }

  std::vector<std::uint32_t> run(std::vector<std::uint32_t>& labels_out) {
    std::vector<std::uint32_t> color(nodes.size(), 1);
    if (!nodes.empty()) color[pos[d.source()]] = 0;
    std::optional<std::vector<std::uint32_t>> best;
    search(std::move(color), best, labels_out);
    return *best;
  }
};

}  // namespace

CanonicalCode canonical_code(const GameDag& d) {
  Labeler lab(d);
  std::vector<std::uint32_t> labels;
  auto words = lab.run(labels);
  CanonicalCode code;
  code.bytes.resize(words.size() * sizeof(std::uint32_t));
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (int b = 0; b < 4; ++b) code.bytes[4 * i + b] = static_cast<char>((words[i] >> (24 - 8 * b)) & 0xff);
  }
  return code;
}

std::optional<std::vector<NodeId>> find_isomorphism(const GameDag& a, const GameDag& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return std::nullopt;
  Labeler la(a), lb(b);
  std::vector<std::uint32_t> label_a, label_b;
  if (la.run(label_a) != lb.run(label_b)) return std::nullopt;
  std::vector<NodeId> by_label(lb.nodes.size());
  for (std::uint32_t i = 0; i < lb.nodes.size(); ++i) by_label[label_b[i]] = lb.nodes[i];
  std::vector<NodeId> map(a.id_bound(), 0);
  for (std::uint32_t i = 0; i < la.nodes.size(); ++i) map[la.nodes[i]] = by_label[label_a[i]];
  return map;
}

bool isomorphic(const GameDag& a, const GameDag& b) { return find_isomorphism(a, b).has_value(); }

std::vector<Game> follower_set(Game g) {
  std::vector<Game> out{g};
  std::unordered_map<Game, bool> seen{{g, true}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (auto opts : {left_options(out[i]), right_options(out[i])}) {
      for (Game o : opts) {
        if (seen.emplace(o, true).second) out.push_back(o);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::string default_label(const GameDag&, NodeId v) { return std::to_string(v); }

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string to_dot(const GameDag& d, const NodeLabeler& label) {
  const NodeLabeler& name = label ? label : NodeLabeler(default_label);
  std::ostringstream os;
  os << "digraph G {\n  rankdir=TB;\n  node [shape=circle];\n";
  for (NodeId v : d.nodes()) {
    os << "  n" << v << " [label=\"" << escape(name(d, v)) << "\"";
    if (v == d.source()) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (NodeId v : d.nodes()) {
    for (Color c : {Color::Blue, Color::Red}) {
      for (NodeId w : d.children(v, c)) os << "  n" << v << " -> n" << w << " [color=" << to_string(c) << "];\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string to_tikz(const GameDag& d, const NodeLabeler& label) {
  const NodeLabeler& name = label ? label : NodeLabeler(default_label);
  // layer = longest path from the source, so every edge points downward
  std::vector<int> layer(d.id_bound(), 0);
  std::vector<NodeId> order;
  {
    std::vector<std::uint32_t> indeg(d.id_bound(), 0);
    for (NodeId v : d.nodes()) indeg[v] = static_cast<std::uint32_t>(d.in_degree(v));
    std::deque<NodeId> ready;
    for (NodeId v : d.nodes())
      if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
      NodeId v = ready.front();
      ready.pop_front();
      order.push_back(v);
      for (Color c : {Color::Blue, Color::Red}) {
        for (NodeId w : d.children(v, c)) {
          layer[w] = std::max(layer[w], layer[v] + 1);
          if (--indeg[w] == 0) ready.push_back(w);
        }
      }
    }
  }
  std::map<int, int> used;
  std::ostringstream os;
  os << "\\begin{tikzpicture}[>=Stealth]\n";
  for (NodeId v : order) {
    int x = used[layer[v]]++;
    os << "  \\node[circle,draw,fill=white,minimum size=6pt,inner sep=1pt";
    if (v == d.source()) os << ",double";
    os << "] (n" << v << ") at (" << x << "," << -layer[v] << ") {\\tiny " << name(d, v) << "};\n";
  }
  for (NodeId v : order) {
    for (Color c : {Color::Blue, Color::Red}) {
      for (NodeId w : d.children(v, c)) {
        os << "  \\draw[->," << to_string(c) << ",thick" << (c == Color::Blue ? ",bend right=10" : ",bend left=10")
           << "] (n" << v << ") to (n" << w << ");\n";
      }
    }
  }
  os << "\\end{tikzpicture}\n";
  return os.str();
}

}  // namespace cgd
