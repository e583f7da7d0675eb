#include "cgd/game.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace cgd {

namespace {

using Id = Game::Id;

struct Node {
  std::vector<Game> left;   // sorted, unique
  std::vector<Game> right;  // sorted, unique
  bool canonical = false;
  std::optional<Dyadic> number;  // set for canonical numbers
  std::uint32_t birthday = 0;
};

struct KeyHash {
  std::size_t operator()(const std::vector<Id>& k) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Id v : k) {
      h ^= v;
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Interning table for brace forms. Forms met during simplification are
// interned too so that leq can memoize comparisons against them; only ids
// flagged canonical ever escape as Game handles.
class Store {
 public:
  static constexpr std::size_t kChunkBits = 12;
  static constexpr std::size_t kChunkSize = std::size_t{1} << kChunkBits;
  static constexpr std::size_t kMaxChunks = std::size_t{1} << 16;

  Store() {
    for (auto& c : chunks_) c.store(nullptr, std::memory_order_relaxed);
    Id z = intern({}, {});
    mark_canonical(z);
  }

  ~Store() {
    for (auto& c : chunks_) delete[] c.load(std::memory_order_relaxed);
  }

  const Node& node(Id id) const {
    return chunks_[id >> kChunkBits].load(std::memory_order_acquire)[id & (kChunkSize - 1)];
  }

  std::recursive_mutex mu;

  Id intern(std::vector<Game> left, std::vector<Game> right) {
    normalize(left);
    normalize(right);
    std::vector<Id> key;
    key.reserve(left.size() + right.size() + 1);
    for (Game g : left) key.push_back(g.id());
    key.push_back(UINT32_MAX);
    for (Game g : right) key.push_back(g.id());
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    Id id = static_cast<Id>(size_);
    if ((id >> kChunkBits) >= kMaxChunks) throw ResourceLimitError("game table exhausted");
    auto& slot = chunks_[id >> kChunkBits];
    Node* chunk = slot.load(std::memory_order_relaxed);
    if (chunk == nullptr) {
      chunk = new Node[kChunkSize];
      slot.store(chunk, std::memory_order_release);
    }
    Node& n = chunk[id & (kChunkSize - 1)];
    std::uint32_t b = 0;
    for (Game g : left) b = std::max(b, node(g.id()).birthday + 1);
    for (Game g : right) b = std::max(b, node(g.id()).birthday + 1);
    n.left = std::move(left);
    n.right = std::move(right);
    n.birthday = b;
    ++size_;
    index_.emplace(std::move(key), id);
    return id;
  }

  void mark_canonical(Id id) {
    Node& n = mutable_node(id);
    if (n.canonical) return;
    n.canonical = true;
    canonical_of_[id] = id;
    // Canonical numbers have at most one option per side, both numbers.
    if (n.left.empty() && n.right.empty()) {
      n.number = Dyadic(0);
    } else if (n.left.size() <= 1 && n.right.size() <= 1) {
      const Node* l = n.left.empty() ? nullptr : &node(n.left[0].id());
      const Node* r = n.right.empty() ? nullptr : &node(n.right[0].id());
      bool nums = (!l || l->number) && (!r || r->number);
      if (nums && (!l || !r || *l->number < *r->number)) {
        n.number = Dyadic::simplest_between(l ? &*l->number : nullptr, r ? &*r->number : nullptr);
      }
    }
    canonical_ids_.push_back(id);
  }

  std::size_t size() const { return size_; }
  const std::vector<Id>& canonical_ids() const { return canonical_ids_; }

  std::unordered_map<std::uint64_t, bool> leq_memo;
  std::unordered_map<Id, Id> canonical_of_;
  std::unordered_map<std::uint64_t, Id> add_memo;
  std::unordered_map<Id, Id> neg_memo;
  std::unordered_map<std::uint64_t, Id> ordinal_memo;
  std::map<Dyadic, Id> number_memo;
  std::unordered_map<std::uint32_t, Id> nimber_memo;

 private:
  Node& mutable_node(Id id) {
    return chunks_[id >> kChunkBits].load(std::memory_order_relaxed)[id & (kChunkSize - 1)];
  }

  static void normalize(std::vector<Game>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::array<std::atomic<Node*>, kMaxChunks> chunks_;
  std::size_t size_ = 0;
  std::unordered_map<std::vector<Id>, Id, KeyHash> index_;
  std::vector<Id> canonical_ids_;
};

Store& store() {
  static Store s;
  return s;
}

std::uint64_t pair_key(Id a, Id b) { return (std::uint64_t{a} << 32) | b; }

// --- internal routines; caller holds store().mu ------------------------------

bool leq_ids(Id g, Id h) {
  if (g == h) return true;
  Store& s = store();
  const Node& gn = s.node(g);
  const Node& hn = s.node(h);
  if (gn.number && hn.number) return *gn.number <= *hn.number;
  auto key = pair_key(g, h);
  if (auto it = s.leq_memo.find(key); it != s.leq_memo.end()) return it->second;
  bool result = true;
  for (Game gl : gn.left) {
    if (leq_ids(h, gl.id())) {
      result = false;
      break;
    }
  }
  if (result) {
    for (Game hr : hn.right) {
      if (leq_ids(hr.id(), g)) {
        result = false;
        break;
      }
    }
  }
  s.leq_memo.emplace(key, result);
  return result;
}

Id number_id(const Dyadic& x);

Id canonical_form(std::vector<Game> left, std::vector<Game> right) {
  Store& s = store();
  auto dedup = [](std::vector<Game>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  dedup(left);
  dedup(right);

  // Simplest-number rule, only when every option is a number.
  auto all_numbers = [&](const std::vector<Game>& v) {
    return std::all_of(v.begin(), v.end(), [&](Game g) { return s.node(g.id()).number.has_value(); });
  };
  if (all_numbers(left) && all_numbers(right)) {
    std::optional<Dyadic> max_l, min_r;
    for (Game g : left) {
      const Dyadic& x = *s.node(g.id()).number;
      if (!max_l || *max_l < x) max_l = x;
    }
    for (Game g : right) {
      const Dyadic& x = *s.node(g.id()).number;
      if (!min_r || x < *min_r) min_r = x;
    }
    if (!max_l || !min_r || *max_l < *min_r) {
      return number_id(Dyadic::simplest_between(max_l ? &*max_l : nullptr, min_r ? &*min_r : nullptr));
    }
  }

  Id form = s.intern(left, right);
  if (auto it = s.canonical_of_.find(form); it != s.canonical_of_.end()) return it->second;
  const Id original = form;

  for (;;) {
    // Remove dominated options. Distinct canonical games are never equal,
    // so a non-strict comparison suffices.
    std::vector<Game> l2, r2;
    for (Game a : left) {
      bool dominated = std::any_of(left.begin(), left.end(),
                                   [&](Game b) { return b != a && leq_ids(a.id(), b.id()); });
      if (!dominated) l2.push_back(a);
    }
    for (Game a : right) {
      bool dominated = std::any_of(right.begin(), right.end(),
                                   [&](Game b) { return b != a && leq_ids(b.id(), a.id()); });
      if (!dominated) r2.push_back(a);
    }
    left = std::move(l2);
    right = std::move(r2);
    form = s.intern(left, right);

    // Bypass reversible options. All replacements in one pass compare
    // against the same value, so doing them together is sound.
    bool changed = false;
    std::vector<Game> l3, r3;
    for (Game a : left) {
      const Node& an = s.node(a.id());
      const Game* rev = nullptr;
      for (const Game& ar : an.right) {
        if (leq_ids(ar.id(), form)) {
          rev = &ar;
          break;
        }
      }
      if (rev) {
        const Node& arn = s.node(rev->id());
        l3.insert(l3.end(), arn.left.begin(), arn.left.end());
        changed = true;
      } else {
        l3.push_back(a);
      }
    }
    for (Game a : right) {
      const Node& an = s.node(a.id());
      const Game* rev = nullptr;
      for (const Game& al : an.left) {
        if (leq_ids(form, al.id())) {
          rev = &al;
          break;
        }
      }
      if (rev) {
        const Node& aln = s.node(rev->id());
        r3.insert(r3.end(), aln.right.begin(), aln.right.end());
        changed = true;
      } else {
        r3.push_back(a);
      }
    }
    if (!changed) break;
    dedup(l3);
    dedup(r3);
    left = std::move(l3);
    right = std::move(r3);
  }

  s.mark_canonical(form);
  s.canonical_of_[original] = form;
  return form;
}

Id number_id(const Dyadic& x) {
  Store& s = store();
  if (auto it = s.number_memo.find(x); it != s.number_memo.end()) return it->second;
  Id id;
  if (x.is_zero()) {
    id = 0;
  } else if (x.is_integer()) {
    if (x.sign() > 0) id = s.intern({Game::from_id(number_id(x - 1))}, {});
    else id = s.intern({}, {Game::from_id(number_id(x + 1))});
  } else {
    Dyadic step(1, x.exponent());
    id = s.intern({Game::from_id(number_id(x - step))}, {Game::from_id(number_id(x + step))});
  }
  s.mark_canonical(id);
  s.number_memo.emplace(x, id);
  return id;
}

Id neg_id(Id g) {
  Store& s = store();
  if (g == 0) return 0;
  if (auto it = s.neg_memo.find(g); it != s.neg_memo.end()) return it->second;
  const Node& n = s.node(g);
  std::vector<Game> l, r;
  for (Game x : n.right) l.push_back(Game::from_id(neg_id(x.id())));
  for (Game x : n.left) r.push_back(Game::from_id(neg_id(x.id())));
  Id out = s.intern(std::move(l), std::move(r));
  s.mark_canonical(out);
  s.neg_memo.emplace(g, out);
  s.neg_memo.emplace(out, g);
  return out;
}

Id add_ids(Id g, Id h) {
  Store& s = store();
  if (g == 0) return h;
  if (h == 0) return g;
  if (g > h) std::swap(g, h);
  auto key = pair_key(g, h);
  if (auto it = s.add_memo.find(key); it != s.add_memo.end()) return it->second;
  const Node& gn = s.node(g);
  const Node& hn = s.node(h);
  Id out;
  if (gn.number && hn.number) {
    out = number_id(*gn.number + *hn.number);
  } else if (gn.number || hn.number) {
    // Translation: for x a number and G not, G + x = {G^L + x | G^R + x}.
    Id x = gn.number ? g : h;
    const Node& other = gn.number ? hn : gn;
    std::vector<Game> l, r;
    for (Game o : other.left) l.push_back(Game::from_id(add_ids(o.id(), x)));
    for (Game o : other.right) r.push_back(Game::from_id(add_ids(o.id(), x)));
    out = canonical_form(std::move(l), std::move(r));
  } else {
    std::vector<Game> l, r;
    for (Game o : gn.left) l.push_back(Game::from_id(add_ids(o.id(), h)));
    for (Game o : hn.left) l.push_back(Game::from_id(add_ids(g, o.id())));
    for (Game o : gn.right) r.push_back(Game::from_id(add_ids(o.id(), h)));
    for (Game o : hn.right) r.push_back(Game::from_id(add_ids(g, o.id())));
    out = canonical_form(std::move(l), std::move(r));
  }
  s.add_memo.emplace(key, out);
  return out;
}

Id ordinal_ids(Id base, Id exponent) {
  Store& s = store();
  if (exponent == 0) return base;
  auto key = pair_key(base, exponent);
  if (auto it = s.ordinal_memo.find(key); it != s.ordinal_memo.end()) return it->second;
  const Node& bn = s.node(base);
  const Node& en = s.node(exponent);
  std::vector<Game> l(bn.left.begin(), bn.left.end());
  std::vector<Game> r(bn.right.begin(), bn.right.end());
  for (Game e : en.left) l.push_back(Game::from_id(ordinal_ids(base, e.id())));
  for (Game e : en.right) r.push_back(Game::from_id(ordinal_ids(base, e.id())));
  Id out = canonical_form(std::move(l), std::move(r));
  s.ordinal_memo.emplace(key, out);
  return out;
}

Game canonicalize_raw(const RawGame& g, std::unordered_map<const RawGame*, Game>& done,
                      std::unordered_set<const RawGame*>& on_path) {
  if (auto it = done.find(&g); it != done.end()) return it->second;
  if (!on_path.insert(&g).second) throw NotShortError("cycle detected in game option structure");
  auto resolve = [&](const std::vector<RawOption>& opts) {
    std::vector<Game> out;
    out.reserve(opts.size());
    for (const RawOption& o : opts) {
      if (const Game* c = std::get_if<Game>(&o)) {
        out.push_back(*c);
      } else {
        const RawGamePtr& p = std::get<RawGamePtr>(o);
        if (!p) throw std::invalid_argument("null raw option");
        out.push_back(canonicalize_raw(*p, done, on_path));
      }
    }
    return out;
  };
  std::vector<Game> l = resolve(g.left);
  std::vector<Game> r = resolve(g.right);
  Game result = Game::from_id(canonical_form(std::move(l), std::move(r)));
  on_path.erase(&g);
  done.emplace(&g, result);
  return result;
}

}  // namespace

RawGamePtr make_raw(std::vector<RawOption> left, std::vector<RawOption> right) {
  auto p = std::make_shared<RawGame>();
  p->left = std::move(left);
  p->right = std::move(right);
  return p;
}

RawGamePtr raw_of(Game g) {
  auto p = std::make_shared<RawGame>();
  for (Game o : left_options(g)) p->left.emplace_back(o);
  for (Game o : right_options(g)) p->right.emplace_back(o);
  return p;
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::L: return "L";
    case Outcome::R: return "R";
    case Outcome::N: return "N";
    case Outcome::P: return "P";
  }
  return "?";
}

Game canonicalize(const RawGame& g) {
  std::lock_guard lock(store().mu);
  std::unordered_map<const RawGame*, Game> done;
  std::unordered_set<const RawGame*> on_path;
  return canonicalize_raw(g, done, on_path);
}

Game canonicalize(const RawGamePtr& g) {
  if (!g) throw std::invalid_argument("null raw game");
  return canonicalize(*g);
}

Game make_game(std::span<const Game> left, std::span<const Game> right) {
  std::lock_guard lock(store().mu);
  return Game::from_id(canonical_form({left.begin(), left.end()}, {right.begin(), right.end()}));
}

bool leq(Game g, Game h) {
  std::lock_guard lock(store().mu);
  return leq_ids(g.id(), h.id());
}

Game neg(Game g) {
  std::lock_guard lock(store().mu);
  return Game::from_id(neg_id(g.id()));
}

Game add(Game g, Game h) {
  std::lock_guard lock(store().mu);
  return Game::from_id(add_ids(g.id(), h.id()));
}

Game ordinal_sum(Game base, Game exponent) {
  std::lock_guard lock(store().mu);
  return Game::from_id(ordinal_ids(base.id(), exponent.id()));
}

Outcome outcome(Game g) {
  Game z = zero();
  bool le = leq(g, z);
  bool ge = leq(z, g);
  if (le && ge) return Outcome::P;
  if (ge) return Outcome::L;
  if (le) return Outcome::R;
  return Outcome::N;
}

std::uint32_t birthday(Game g) { return store().node(g.id()).birthday; }

std::span<const Game> left_options(Game g) { return store().node(g.id()).left; }
std::span<const Game> right_options(Game g) { return store().node(g.id()).right; }

std::optional<Dyadic> number_value(Game g) { return store().node(g.id()).number; }

Game zero() { return Game(); }

Game number(const Dyadic& x) {
  std::lock_guard lock(store().mu);
  return Game::from_id(number_id(x));
}

Game integer(std::int64_t n) { return number(Dyadic(n)); }

Game dyadic(std::int64_t p, std::uint32_t e) { return number(Dyadic(BigInt(p), e)); }

Game nimber(std::uint32_t n) {
  Store& s = store();
  std::lock_guard lock(s.mu);
  if (n == 0) return zero();
  if (auto it = s.nimber_memo.find(n); it != s.nimber_memo.end()) return Game::from_id(it->second);
  std::vector<Game> opts;
  for (std::uint32_t k = 0; k < n; ++k) opts.push_back(nimber(k));
  Id id = s.intern(opts, opts);
  s.mark_canonical(id);
  s.nimber_memo.emplace(n, id);
  return Game::from_id(id);
}

Game star() { return nimber(1); }

Game up_multiple(std::int64_t n, bool with_star) {
  Game up = make_game(std::array{zero()}, std::array{star()});
  Game step = n >= 0 ? up : neg(up);
  Game acc = with_star ? star() : zero();
  for (std::int64_t i = 0; i < (n >= 0 ? n : -n); ++i) acc = add(acc, step);
  return acc;
}

Game up_power(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("up_power requires n >= 1");
  Game s = star();
  return sub(ordinal_sum(s, integer(n)), ordinal_sum(s, integer(n - 1)));
}

Game up_bracket(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("up_bracket requires n >= 1");
  Game s = star();
  return sub(ordinal_sum(s, integer(n)), s);
}

Game semistar() {
  Game up = up_multiple(1, false);
  Game down_star = up_multiple(-1, true);
  return make_game(std::array{star(), up}, std::array{down_star, zero()});
}

Game switch_game(Game a, Game b) {
  if (!less(b, a)) throw std::invalid_argument("switch requires a > b");
  return make_game(std::array{a}, std::array{b});
}

std::vector<Game> interned_games() {
  Store& s = store();
  std::lock_guard lock(s.mu);
  std::vector<Game> out;
  out.reserve(s.canonical_ids().size());
  for (Id id : s.canonical_ids()) out.push_back(Game::from_id(id));
  return out;
}

}  // namespace cgd
