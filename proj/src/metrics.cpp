#include "cgd/metrics.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <queue>
#include <unordered_map>

#include <json.hpp>

#include "cgd/errors.hpp"

namespace cgd {

std::string_view to_string(IllegalReason r) {
  switch (r) {
    case IllegalReason::DeadTail: return "tail does not exist";
    case IllegalReason::UnreachableTail: return "tail unreachable from the source";
    case IllegalReason::DeadHead: return "head does not exist";
    case IllegalReason::DuplicateEdge: return "edge already present";
    case IllegalReason::MissingEdge: return "edge not present";
    case IllegalReason::CycleCreated: return "edge would create a cycle";
    case IllegalReason::RemoveNewNode: return "removal needs an existing head";
  }
  return "?";
}

IllegalEditError::IllegalEditError(std::size_t index, IllegalReason reason)
    : std::runtime_error("illegal edit #" + std::to_string(index) + ": " + std::string(to_string(reason))),
      index_(index),
      reason_(reason) {}

namespace {

// Applies e and returns the tail's source distance before the edit.
int apply_raw(GameDag& d, const Edit& e, std::size_t index) {
  if (!d.alive(e.tail)) throw IllegalEditError(index, IllegalReason::DeadTail);
  int dist = d.source_distances()[e.tail];
  if (dist < 0) throw IllegalEditError(index, IllegalReason::UnreachableTail);
  if (e.action == EditAction::Add) {
    if (e.head) {
      NodeId h = *e.head;
      if (!d.alive(h)) throw IllegalEditError(index, IllegalReason::DeadHead);
      if (d.has_edge(e.tail, h, e.color)) throw IllegalEditError(index, IllegalReason::DuplicateEdge);
      if (d.reaches(h, e.tail)) throw IllegalEditError(index, IllegalReason::CycleCreated);
      d.add_edge(e.tail, h, e.color);
    } else {
      NodeId h = d.add_node();
      d.add_edge(e.tail, h, e.color);
    }
  } else {
    if (!e.head) throw IllegalEditError(index, IllegalReason::RemoveNewNode);
    NodeId h = *e.head;
    if (!d.alive(h) || !d.remove_edge(e.tail, h, e.color)) throw IllegalEditError(index, IllegalReason::MissingEdge);
    d.remove_if_isolated(h);
    d.remove_if_isolated(e.tail);
  }
  return dist;
}

}  // namespace

Dyadic apply_edit(GameDag& d, const Edit& e, std::size_t index) { return Dyadic::pow2(-apply_raw(d, e, index)); }

Simulation simulate(const EditScript& script, const GameDag& start) {
  Simulation out{start, Dyadic(0)};
  for (std::size_t i = 0; i < script.size(); ++i) out.cost += apply_edit(out.dag, script[i], i);
  return out;
}

EditScript reverse_script(const EditScript& script, const GameDag& start, const GameDag& target) {
  // Replay forward, remembering the id each NewNode received.
  GameDag fwd = start;
  std::vector<NodeId> created(script.size(), 0);
  for (std::size_t i = 0; i < script.size(); ++i) {
    created[i] = static_cast<NodeId>(fwd.id_bound());
    apply_raw(fwd, script[i], i);
  }
  auto iso = find_isomorphism(fwd, target);
  if (!iso) throw std::invalid_argument("script does not reach the target");
  constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
  std::vector<NodeId> map(fwd.id_bound(), kNone);
  for (NodeId v : fwd.nodes()) map[v] = (*iso)[v];

  GameDag back = target;
  EditScript out;
  for (std::size_t k = script.size(); k-- > 0;) {
    const Edit& e = script[k];
    NodeId head = e.head ? *e.head : created[k];
    Edit r{e.action == EditAction::Add ? EditAction::Remove : EditAction::Add, e.color, map[e.tail], std::nullopt};
    if (r.action == EditAction::Remove) {
      r.head = map[head];
    } else if (map[head] != kNone && back.alive(map[head])) {
      r.head = map[head];
    } else {
      map[head] = static_cast<NodeId>(back.id_bound());
    }
    apply_raw(back, r, out.size());
    out.push_back(r);
  }
  return out;
}

std::string edit_to_string(const Edit& e) {
  std::string s = e.action == EditAction::Add ? "add " : "remove ";
  s += to_string(e.color);
  s += " " + std::to_string(e.tail) + " -> " + (e.head ? std::to_string(*e.head) : std::string("new"));
  return s;
}

std::string to_json(const DistanceResult& r) {
  nlohmann::ordered_json j;
  j["lower"] = r.lower.to_wire();
  j["upper"] = r.upper.to_wire();
  j["certified"] = r.certified;
  nlohmann::ordered_json w = nlohmann::ordered_json::array();
  for (const Edit& e : r.witness) {
    nlohmann::ordered_json x;
    x["action"] = e.action == EditAction::Add ? "add" : "remove";
    x["color"] = std::string(to_string(e.color));
    x["tail"] = e.tail;
    if (e.head) x["head"] = *e.head;
    else x["head"] = "new";
    w.push_back(x);
  }
  j["witness"] = w;
  return j.dump();
}

// ---------------------------------------------------------------------------
// bounds

Dyadic separation_bound(Game g, Game h) {
  if (g == h) return Dyadic(0);
  std::int64_t d = std::max(birthday(g), birthday(h));
  return Dyadic::pow2(1 - d);
}

std::size_t source_degree_gap(Game g, Game h) {
  auto gap = [](std::size_t a, std::size_t b) { return a > b ? a - b : b - a; };
  return gap(left_options(g).size(), left_options(h).size()) + gap(right_options(g).size(), right_options(h).size());
}

namespace {

constexpr std::int64_t kUnmatched = -1;

std::vector<NodeId> topo_order(const GameDag& d) {
  std::vector<std::uint32_t> indeg(d.id_bound(), 0);
  for (NodeId v : d.nodes()) indeg[v] = static_cast<std::uint32_t>(d.in_degree(v));
  std::deque<NodeId> ready;
  for (NodeId v : d.nodes())
    if (indeg[v] == 0) ready.push_back(v);
  std::vector<NodeId> order;
  while (!ready.empty()) {
    NodeId v = ready.front();
    ready.pop_front();
    order.push_back(v);
    for (Color c : {Color::Blue, Color::Red})
      for (NodeId w : d.children(v, c))
        if (--indeg[w] == 0) ready.push_back(w);
  }
  return order;
}

struct Plan {
  EditScript script;
  Dyadic cost;
};

// Turns a partial node matching A -> B into a legal script, or nothing if
// the chosen order trips a legality rule.
std::optional<Plan> plan_from_matching(const GameDag& A, const GameDag& B, const std::vector<std::int64_t>& match,
                                       bool removals_first) {
  std::vector<std::int64_t> inv(B.id_bound(), kUnmatched);
  for (NodeId a = 0; a < match.size(); ++a)
    if (match[a] != kUnmatched) inv[match[a]] = a;

  struct E {
    NodeId tail, head;
    Color c;
  };
  std::vector<E> removals, additions;
  auto topo = topo_order(A);
  std::vector<std::size_t> rank(A.id_bound(), 0);
  for (std::size_t i = 0; i < topo.size(); ++i) rank[topo[i]] = i;
  for (NodeId a : A.nodes()) {
    for (Color c : {Color::Blue, Color::Red}) {
      for (NodeId w : A.children(a, c)) {
        bool kept = match[a] != kUnmatched && match[w] != kUnmatched &&
                    B.has_edge(static_cast<NodeId>(match[a]), static_cast<NodeId>(match[w]), c);
        if (!kept) removals.push_back({a, w, c});
      }
    }
  }
  std::stable_sort(removals.begin(), removals.end(), [&](const E& x, const E& y) { return rank[x.tail] > rank[y.tail]; });
  auto distB = B.source_distances();
  for (NodeId b : B.nodes()) {
    for (Color c : {Color::Blue, Color::Red}) {
      for (NodeId w : B.children(b, c)) {
        bool kept = inv[b] != kUnmatched && inv[w] != kUnmatched &&
                    A.has_edge(static_cast<NodeId>(inv[b]), static_cast<NodeId>(inv[w]), c);
        if (!kept) additions.push_back({b, w, c});
      }
    }
  }
  std::stable_sort(additions.begin(), additions.end(),
                   [&](const E& x, const E& y) { return distB[x.tail] < distB[y.tail]; });

  GameDag work = A;
  Plan plan{{}, Dyadic(0)};
  std::vector<std::int64_t> cur = inv;  // B node -> id in work
  auto emit = [&](const Edit& e) {
    plan.cost += apply_edit(work, e, plan.script.size());
    plan.script.push_back(e);
  };
  auto do_removals = [&] {
    for (const E& r : removals) emit({EditAction::Remove, r.c, r.tail, r.head});
  };
  auto do_additions = [&] {
    for (const E& x : additions) {
      std::int64_t t = cur[x.tail];
      if (t == kUnmatched || !work.alive(static_cast<NodeId>(t))) return false;
      std::int64_t h = cur[x.head];
      if (h != kUnmatched && work.alive(static_cast<NodeId>(h))) {
        emit({EditAction::Add, x.c, static_cast<NodeId>(t), static_cast<NodeId>(h)});
      } else {
        cur[x.head] = static_cast<std::int64_t>(work.id_bound());
        emit({EditAction::Add, x.c, static_cast<NodeId>(t), std::nullopt});
      }
    }
    return true;
  };
  try {
    if (removals_first) {
      do_removals();
      if (!do_additions()) return std::nullopt;
    } else {
      if (!do_additions()) return std::nullopt;
      do_removals();
    }
  } catch (const IllegalEditError&) {
    return std::nullopt;
  }
  if (!isomorphic(work, B)) return std::nullopt;
  return plan;
}

std::vector<std::int64_t> greedy_matching(const GameDag& A, const GameDag& B, bool reuse_labels, bool pin_zero) {
  std::vector<std::int64_t> match(A.id_bound(), kUnmatched), inv(B.id_bound(), kUnmatched);
  auto bind = [&](NodeId a, NodeId b) {
    match[a] = b;
    inv[b] = a;
  };
  bind(A.source(), B.source());
  // the two zero sinks
  std::int64_t za = kUnmatched, zb = kUnmatched;
  for (NodeId a : A.nodes())
    if (A.label(a) == zero()) za = a;
  for (NodeId b : B.nodes())
    if (B.label(b) == zero()) zb = b;
  if (pin_zero && za != kUnmatched && zb != kUnmatched && match[za] == kUnmatched && inv[zb] == kUnmatched)
    bind(static_cast<NodeId>(za), static_cast<NodeId>(zb));

  std::vector<bool> seen(B.id_bound(), false);
  std::deque<NodeId> queue{B.source()};
  seen[B.source()] = true;
  while (!queue.empty()) {
    NodeId b = queue.front();
    queue.pop_front();
    std::int64_t a = inv[b];
    for (Color c : {Color::Blue, Color::Red}) {
      auto bk = B.children(b, c);
      std::vector<NodeId> ak;
      if (a != kUnmatched)
        for (NodeId v : A.children(static_cast<NodeId>(a), c)) ak.push_back(v);
      for (NodeId w : bk) {
        if (inv[w] != kUnmatched) continue;
        for (NodeId v : ak) {
          if (match[v] == kUnmatched && A.label(v) == B.label(w)) {
            bind(v, w);
            break;
          }
        }
      }
      if (reuse_labels) {
        for (NodeId w : bk) {
          if (inv[w] != kUnmatched) continue;
          for (NodeId v : A.nodes()) {
            if (match[v] == kUnmatched && A.label(v) == B.label(w)) {
              bind(v, w);
              break;
            }
          }
        }
      }
      for (NodeId w : bk) {
        if (inv[w] != kUnmatched) continue;
        std::int64_t best = kUnmatched;
        std::int64_t best_gap = 0;
        for (NodeId v : ak) {
          if (match[v] != kUnmatched) continue;
          std::int64_t gap = std::abs(static_cast<std::int64_t>(birthday(*A.label(v))) -
                                      static_cast<std::int64_t>(birthday(*B.label(w))));
          if (best == kUnmatched || gap < best_gap) {
            best = v;
            best_gap = gap;
          }
        }
        if (best != kUnmatched) bind(static_cast<NodeId>(best), w);
      }
      for (NodeId w : bk) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
  }
  return match;
}

Plan best_plan(const GameDag& A, const GameDag& B) {
  std::optional<Plan> best;
  auto consider = [&](std::optional<Plan> p) {
    if (p && (!best || p->cost < best->cost || (p->cost == best->cost && p->script.size() < best->script.size())))
      best = std::move(p);
  };
  for (bool pin : {true, false})
    for (bool reuse : {false, true}) {
      auto m = greedy_matching(A, B, reuse, pin);
      consider(plan_from_matching(A, B, m, true));
      consider(plan_from_matching(A, B, m, false));
    }
  // source-only matching always works with removals first
  std::vector<std::int64_t> bare(A.id_bound(), kUnmatched);
  bare[A.source()] = B.source();
  consider(plan_from_matching(A, B, bare, true));
  return *best;
}

// ---------------------------------------------------------------------------
// exact search

struct SearchNode {
  GameDag dag;
  std::uint64_t g;
  std::int64_t parent;
  Edit edit;
  bool closed = false;
};

struct EngineOut {
  std::optional<EditScript> script;  // strictly better than the incumbent
  std::uint64_t best;                // incumbent or improved cost, in units
  std::uint64_t lower;
  std::size_t states;
};

class Engine {
 public:
  // Costs are integers: 2^(budget - d) for the weighted distance, 1 per
  // edit when unit is set.
  Engine(const GameDag& start, const GameDag& target, std::size_t budget, bool unit, std::uint64_t incumbent,
         std::size_t max_states)
      : target_code_(canonical_code(target)),
        target_level_(level_one(target)),
        budget_(budget),
        unit_(unit),
        best_(incumbent),
        max_states_(max_states) {
    nodes_.push_back({start, 0, -1, {}, false});
    index_.emplace(canonical_code(start).bytes, 0);
  }

  EngineOut run() {
    std::uint64_t depth_pruned = kInf;
    std::int64_t best_node = -1;
    if (canonical_code(nodes_[0].dag) == target_code_) {
      best_ = 0;
      best_node = 0;
    }
    using Entry = std::tuple<std::uint64_t, std::uint64_t, std::uint32_t>;  // f, -g, node
    auto cmp = [](const Entry& x, const Entry& y) { return x > y; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> open(cmp);
    open.emplace(heuristic(nodes_[0].dag), kInf, 0);
    std::uint64_t lower = best_;
    while (!open.empty()) {
      auto [f, neg_g, idx] = open.top();
      if (f >= best_) break;
      if (nodes_.size() > max_states_) {
        lower = f;
        break;
      }
      open.pop();
      SearchNode& node = nodes_[idx];
      if (node.closed || kInf - neg_g != node.g) continue;
      node.closed = true;
      expand(idx, open, depth_pruned, best_node);
    }
    if (open.empty() || std::get<0>(open.top()) >= best_) lower = best_;
    lower = std::min(lower, best_);
    depth_pruned_ = depth_pruned;
    EngineOut out{std::nullopt, best_, lower, nodes_.size()};
    if (best_node >= 0) {
      EditScript s;
      for (std::int64_t i = best_node; nodes_[i].parent >= 0; i = nodes_[i].parent) s.push_back(nodes_[i].edit);
      std::reverse(s.begin(), s.end());
      out.script = std::move(s);
    }
    return out;
  }

 private:
  static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

  std::uint64_t unit_cost(int dist) const { return unit_ ? 1 : std::uint64_t{1} << (budget_ - dist); }

  // A child of the source: which source edges point at it, and its own
  // out-degrees.
  struct Slot {
    int blue, red, out_blue, out_red;
  };

  static std::vector<Slot> level_one(const GameDag& d) {
    std::vector<Slot> out;
    auto blue = d.children(d.source(), Color::Blue);
    auto red = d.children(d.source(), Color::Red);
    std::vector<NodeId> all(blue.begin(), blue.end());
    all.insert(all.end(), red.begin(), red.end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    for (NodeId v : all) {
      out.push_back({static_cast<int>(std::binary_search(blue.begin(), blue.end(), v)),
                     static_cast<int>(std::binary_search(red.begin(), red.end(), v)),
                     static_cast<int>(d.children(v, Color::Blue).size()),
                     static_cast<int>(d.children(v, Color::Red).size())});
    }
    return out;
  }

  // Least cost of reshaping the source's children: a source edge costs a
  // depth-0 edit, one out-degree step a depth-1 edit. Each edit moves this
  // by at most its own cost, so it is consistent.
  std::uint64_t heuristic(const GameDag& d) const {
    const std::uint64_t F = unit_cost(0), O = unit_cost(1);
    auto xs = level_one(d);
    const auto& ys = target_level_;
    auto flags = [](const Slot& s) { return static_cast<std::uint64_t>(s.blue + s.red); };
    auto gap = [](int a, int b) { return static_cast<std::uint64_t>(a > b ? a - b : b - a); };
    if (ys.size() > 12 || xs.size() > 24) {
      std::uint64_t n = 0;
      int xb = 0, xr = 0, yb = 0, yr = 0;
      for (const Slot& x : xs) xb += x.blue, xr += x.red;
      for (const Slot& y : ys) yb += y.blue, yr += y.red;
      n = gap(xb, yb) + gap(xr, yr);
      return n * F;
    }
    const std::size_t m = ys.size();
    const std::size_t full = std::size_t{1} << m;
    std::vector<std::uint64_t> dp(full, kInf), next(full);
    dp[0] = 0;
    for (const Slot& x : xs) {
      std::fill(next.begin(), next.end(), kInf);
      for (std::size_t mask = 0; mask < full; ++mask) {
        if (dp[mask] == kInf) continue;
        next[mask] = std::min(next[mask], dp[mask] + F * flags(x));
        for (std::size_t j = 0; j < m; ++j) {
          if (mask & (std::size_t{1} << j)) continue;
          const Slot& y = ys[j];
          std::uint64_t pair = F * (gap(x.blue, y.blue) + gap(x.red, y.red)) +
                               O * (gap(x.out_blue, y.out_blue) + gap(x.out_red, y.out_red));
          pair = std::min(pair, F * (flags(x) + flags(y)));
          auto& slot = next[mask | (std::size_t{1} << j)];
          slot = std::min(slot, dp[mask] + pair);
        }
      }
      dp.swap(next);
    }
    std::uint64_t best = kInf;
    for (std::size_t mask = 0; mask < full; ++mask) {
      if (dp[mask] == kInf) continue;
      std::uint64_t rest = 0;
      for (std::size_t j = 0; j < m; ++j)
        if (!(mask & (std::size_t{1} << j))) rest += F * flags(ys[j]);
      best = std::min(best, dp[mask] + rest);
    }
    return best;
  }

  template <class Queue>
  void expand(std::uint32_t idx, Queue& open, std::uint64_t& depth_pruned, std::int64_t& best_node) {
    const GameDag base = nodes_[idx].dag;
    const std::uint64_t g0 = nodes_[idx].g;
    auto dist = base.source_distances();
    auto live = base.nodes();
    auto consider = [&](const Edit& e, int d) {
      GameDag next = base;
      try {
        apply_raw(next, e, 0);
      } catch (const IllegalEditError&) {
        return;
      }
      std::uint64_t g = g0 + unit_cost(d);
      std::uint64_t f = g + heuristic(next);
      if (f >= best_) return;
      if (next.depth() > budget_) {
        depth_pruned = std::min(depth_pruned, f);
        return;
      }
      auto code = canonical_code(next);
      auto [it, fresh] = index_.try_emplace(code.bytes, static_cast<std::uint32_t>(nodes_.size()));
      std::uint32_t at = it->second;
      if (fresh) {
        nodes_.push_back({std::move(next), g, idx, e, false});
      } else {
        SearchNode& old = nodes_[at];
        if (old.closed || old.g <= g) return;
        old = {std::move(next), g, idx, e, false};
      }
      if (code == target_code_) {
        if (g < best_) {
          best_ = g;
          best_node = at;
        }
        return;
      }
      open.emplace(f, kInf - g, at);
    };
    for (NodeId t : live) {
      if (dist[t] < 0) continue;
      for (Color c : {Color::Blue, Color::Red}) {
        for (NodeId w : base.children(t, c)) consider({EditAction::Remove, c, t, w}, dist[t]);
        for (NodeId w : live) {
          if (w == t || base.has_edge(t, w, c) || base.reaches(w, t)) continue;
          consider({EditAction::Add, c, t, w}, dist[t]);
        }
        consider({EditAction::Add, c, t, std::nullopt}, dist[t]);
      }
    }
  }

  CanonicalCode target_code_;
  std::vector<Slot> target_level_;
  std::uint64_t depth_pruned_ = kInf;
  std::size_t budget_;
  bool unit_;
  std::uint64_t best_;
  std::size_t max_states_;
  std::vector<SearchNode> nodes_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

constexpr std::size_t kMaxBudget = 48;

std::uint64_t to_units_ceil(const Dyadic& x, std::size_t budget) {
  Dyadic scaled = x * Dyadic::pow2(static_cast<std::int64_t>(budget));
  BigInt c = scaled.ceil();
  if (c < 0) return 0;
  if (c > BigInt(std::numeric_limits<std::uint64_t>::max() / 4)) return std::numeric_limits<std::uint64_t>::max() / 4;
  return static_cast<std::uint64_t>(c);
}

// Cheapest of the plans for both directions; a plan for h -> g is turned
// around with reverse_script.
Plan symmetric_plan(const GameDag& A, const GameDag& B, bool unit) {
  Plan fwd = best_plan(A, B);
  Plan back = best_plan(B, A);
  Plan rev{reverse_script(back.script, B, A), back.cost};
  auto key = [&](const Plan& p) { return unit ? Dyadic(static_cast<std::int64_t>(p.script.size())) : p.cost; };
  return key(rev) < key(fwd) ? rev : fwd;
}

DistanceResult run_exact(Game g, Game h, const SearchOptions& opts, bool unit) {
  GameDag A = build_dag(g), B = build_dag(h);
  std::size_t budget = opts.depth_budget.value_or(std::max(birthday(g), birthday(h)) + 2);
  budget = std::max<std::size_t>(budget, std::max(birthday(g), birthday(h)));
  if (budget > kMaxBudget) throw ResourceLimitError("depth budget too large for exact search");
  const std::size_t scale = unit ? 0 : budget;

  Plan plan = symmetric_plan(A, B, unit);
  Dyadic plan_cost = unit ? Dyadic(static_cast<std::int64_t>(plan.script.size())) : plan.cost;
  std::uint64_t incumbent = to_units_ceil(plan_cost, scale);
  if (opts.cost_cap) incumbent = std::min(incumbent, to_units_ceil(*opts.cost_cap, scale));

  DistanceResult r;
  r.witness = plan.script;
  r.upper = plan_cost;
  std::uint64_t lower = 0;
  // The distance is symmetric, so a search from h that stalls less is as
  // good as one from g. A short try each way comes first.
  for (std::size_t cap : {std::max<std::size_t>(opts.max_states / 16, 1), opts.max_states}) {
    for (bool forward : {true, false}) {
      if (lower >= incumbent) break;
      Engine engine(forward ? A : B, forward ? B : A, budget, unit, incumbent, cap);
      EngineOut out = engine.run();
      r.states += out.states;
      lower = std::max(lower, out.lower);
      if (out.script) {
        incumbent = out.best;
        r.witness = forward ? *out.script : reverse_script(*out.script, B, A);
        Simulation sim = simulate(r.witness, A);
        r.upper = unit ? Dyadic(static_cast<std::int64_t>(r.witness.size())) : sim.cost;
      }
    }
  }

  auto from_units = [&](std::uint64_t u) {
    Dyadic x(BigInt(u), 0);
    return unit ? x : x * Dyadic::pow2(-static_cast<std::int64_t>(budget));
  };
  Dyadic degree(static_cast<std::int64_t>(source_degree_gap(g, h)));
  Dyadic base_lower = unit ? degree : std::max(degree, separation_bound(g, h));
  if (unit && g != h) base_lower = std::max(base_lower, Dyadic(1));
  r.lower = std::min(std::max(from_units(lower), base_lower), r.upper);
  r.certified = r.lower == r.upper;
  return r;
}

}  // namespace

DistanceResult wd_bounds(Game g, Game h) {
  DistanceResult r;
  if (g == h) return r;
  GameDag A = build_dag(g), B = build_dag(h);
  Plan plan = symmetric_plan(A, B, false);
  Simulation sim = simulate(plan.script, A);
  r.witness = std::move(plan.script);
  r.upper = sim.cost;
  r.lower = std::max(Dyadic(static_cast<std::int64_t>(source_degree_gap(g, h))), separation_bound(g, h));
  r.lower = std::min(r.lower, r.upper);
  r.certified = r.lower == r.upper;
  return r;
}

DistanceResult wd_exact(Game g, Game h, const SearchOptions& opts) { return run_exact(g, h, opts, false); }

DistanceResult ed_exact(Game g, Game h, const SearchOptions& opts) { return run_exact(g, h, opts, true); }

std::size_t metric_ed(Game g, Game h) {
  DistanceResult r = ed_exact(g, h);
  if (!r.certified) throw ResourceLimitError("edit distance search did not certify");
  return static_cast<std::size_t>(r.upper.to_int64());
}

Dyadic metric_discrete(Game g, Game h) { return Dyadic(g == h ? 0 : 1); }

namespace {

std::vector<Game> follower_difference(Game g, Game h) {
  auto a = follower_set(g), b = follower_set(h);
  std::vector<Game> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::size_t metric_bd(Game g, Game h) {
  auto diff = follower_difference(g, h);
  if (diff.empty()) return 0;
  std::uint32_t best = birthday(diff.front());
  for (Game x : diff) best = std::min(best, birthday(x));
  return best;
}

Dyadic metric_bs(Game g, Game h) {
  Dyadic sum(0);
  for (Game x : follower_difference(g, h)) sum += Dyadic::pow2(-static_cast<std::int64_t>(birthday(x)));
  return sum;
}

}  // namespace cgd
