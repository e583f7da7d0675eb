#include "cgd/loopy.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <thread>
#include <utility>

#include "cgd/dag.hpp"
#include "cgd/parser.hpp"
#include "json.hpp"

namespace cgd {

namespace {

constexpr std::string_view kBuiltin =
    "on = {on|}\n"
    "off = {|off}\n"
    "over = {0|over}\n"
    "under = {under|0}\n"
    "upon = {upon|*}\n"
    "dud = {dud|dud}\n"
    "tis = {tisn|}\n"
    "tisn = {|tis}\n"
    "chi = {on | {chi | off}}\n"
    "psi = {0, psi | 0, psi}\n"
    "# carousel\n"
    "alpha = {0, beta | 0}\n"
    "beta = {1 | gamma, 1}\n"
    "gamma = {*, delta | *}\n"
    "delta = {1* | alpha, 1*}\n";

Game brace(std::vector<Game> l, std::vector<Game> r) { return make_game(l, r); }

std::int64_t fib(std::size_t k) {
  std::int64_t a = 0, b = 1;
  for (std::size_t i = 0; i < k; ++i) {
    a += b;
    std::swap(a, b);
  }
  return a;
}

const std::map<Family, std::string_view>& family_names() {
  static const std::map<Family, std::string_view> names{
      {Family::Fractions, "fractions"},
      {Family::Upstars, "upstars"},
      {Family::Integers, "integers"},
      {Family::UptimalBrackets, "uptimal_brackets"},
      {Family::UptimalPowers, "uptimal_powers"},
      {Family::Sigma, "sigma"},
      {Family::Zeta, "zeta"},
      {Family::Chi, "chi"},
      {Family::Psi, "psi"},
      {Family::Delta, "delta"},
      {Family::DeltaN, "deltaN"},
      {Family::H1, "h1"},
      {Family::H2, "h2"},
      {Family::Switches, "s_switches"},
      {Family::Nimbers, "nimbers"},
      {Family::CxA, "cx_a"},
      {Family::CxB, "cx_b"},
  };
  return names;
}

// 2^k as a dyadic, k possibly negative
Dyadic p2(std::int64_t k) { return Dyadic::pow2(k); }
std::int64_t si(std::size_t n) { return static_cast<std::int64_t>(n); }

Bound exact(Dyadic d) { return Bound{d, d.to_double()}; }

// Smallest multiple of 2^-40 not below x.
Dyadic round_up(double x) {
  double scaled = std::ceil(std::ldexp(x, 40));
  return Dyadic(BigInt(static_cast<std::int64_t>(scaled)), 40);
}

}  // namespace

const LoopySystem& builtin_loopy() {
  static const LoopySystem sys = parse_loopy(kBuiltin);
  return sys;
}

Game unroll(const LoopySystem& sys, const std::string& name, std::size_t k, const Leaf& leaf) {
  if (k < 1) throw std::invalid_argument("unroll depth must be at least 1");
  std::map<std::pair<std::string, std::size_t>, Game> memo;
  std::function<Game(const std::string&, std::size_t)> expand = [&](const std::string& n, std::size_t level) -> Game {
    auto key = std::make_pair(n, level);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    const ExprPtr& eq = sys.equation(n);
    Game g = evaluate(eq, [&](const std::string& m) -> std::optional<Game> {
      if (level < k) return expand(m, level + 1);
      if (auto* x = std::get_if<Game>(&leaf)) return *x;
      return std::nullopt;
    });
    memo.emplace(key, g);
    return g;
  };
  return expand(name, 1);
}

std::vector<Game> sidle(const ExprPtr& body, Game seed, std::size_t steps, const std::string& var) {
  if (!mentions(body, var)) throw std::invalid_argument("sidling body never mentions " + var);
  std::vector<Game> out;
  Game x = seed;
  for (std::size_t i = 0; i < steps; ++i) {
    x = evaluate(body, [&](const std::string& m) -> std::optional<Game> {
      if (m != var) throw std::invalid_argument("unbound name '" + m + "'");
      return x;
    });
    out.push_back(x);
  }
  return out;
}

std::vector<Game> sidle(std::string_view body, Game seed, std::size_t steps) {
  return sidle(parse_expr(body, {"x"}), seed, steps, "x");
}

std::string_view to_string(Family f) { return family_names().at(f); }

std::optional<Family> family_from_string(std::string_view s) {
  for (const auto& [f, n] : family_names())
    if (n == s) return f;
  return std::nullopt;
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> fams = [] {
    std::vector<Family> v;
    for (const auto& [f, _] : family_names()) v.push_back(f);
    return v;
  }();
  return fams;
}

std::size_t default_max_n(Family f) {
  switch (f) {
    case Family::Delta: return 14;
    case Family::DeltaN: return 3;
    case Family::H2: return 12;
    case Family::Chi:
    case Family::Psi:
    case Family::H1: return 48;
    case Family::UptimalBrackets:
    case Family::UptimalPowers:
    case Family::Switches: return 32;
    case Family::Zeta:
    case Family::Nimbers: return 256;
    default: return 1024;
  }
}

RawGamePtr zeta_raw(std::size_t n) {
  Game b = term({Family::Upstars}, n);
  return make_raw({b}, {neg(b)});
}

Game term(const SequenceSpec& spec, std::size_t n) {
  if (n < 1) throw std::invalid_argument("sequence index must be at least 1");
  if (spec.family == Family::DeltaN && n > 3) throw std::invalid_argument("deltaN is defined for n <= 3 only");
  std::size_t limit = spec.max_n ? spec.max_n : default_max_n(spec.family);
  if (n > limit)
    throw ResourceLimitError(std::string(to_string(spec.family)) + " term " + std::to_string(n) + " exceeds limit " +
                             std::to_string(limit));
  auto sn = si(n);
  switch (spec.family) {
    case Family::Fractions: return dyadic(1, static_cast<std::uint32_t>(n));
    case Family::Upstars: return up_multiple(sn, n % 2 == 0);
    case Family::Integers: return integer(sn);
    case Family::UptimalBrackets: return up_bracket(sn);
    case Family::UptimalPowers: return up_power(sn);
    case Family::Sigma: return switch_game(integer(sn + 1), integer(sn));
    case Family::Zeta: return canonicalize(zeta_raw(n));
    case Family::Chi: {
      Game g = switch_game(integer(1), integer(-1));
      for (std::int64_t i = 1; i < sn; ++i) g = brace({integer(2 * i + 1)}, {brace({g}, {integer(-2 * i)})});
      return g;
    }
    case Family::Psi: {
      Game g = brace({zero()}, {star(), zero()});
      for (std::size_t i = 1; i < n; ++i) g = brace({g, zero()}, {brace({g, zero()}, {g, zero()}), zero()});
      return g;
    }
    case Family::Delta: {
      if (spec.fib_offset < 1) throw std::invalid_argument("fibonacci offset must be positive");
      Game g = parse_canonical("{3|2||1|0}");
      for (std::size_t i = 1; i < n; ++i) g = brace({add(g, integer(fib(i + spec.fib_offset)))}, {g});
      return g;
    }
    case Family::DeltaN: {
      static const char* shown[] = {
          "{2|1||-1|-2}",
          "{3|2||1|0|||0|-1||-2|-3}",
          "{6|5||4|3|||3|2||1|-1||||1|-1||-2|-3|||-3|-4||-5|-6}",
      };
      return parse_canonical(shown[n - 1]);
    }
    case Family::H1: {
      Game g = star();
      for (std::size_t i = 1; i < n; ++i) g = brace({zero()}, {sub(g, integer(1))});
      return g;
    }
    case Family::H2: {
      Game g = star();
      for (std::size_t i = 1; i < n; ++i) g = brace({add(add(g, integer(1)), semistar())}, {zero()});
      return g;
    }
    case Family::Switches: {
      std::int64_t p = sn + 1;
      std::vector<Game> l, r;
      for (std::int64_t k = 1; k < p; ++k) {
        Game s = switch_game(integer(p + k), integer(p - k));
        l.push_back(s);
        r.push_back(neg(s));
      }
      return brace(l, r);
    }
    case Family::Nimbers: return nimber(static_cast<std::uint32_t>(n));
    case Family::CxA: return dyadic(1, static_cast<std::uint32_t>((n - 1) / 2));
    case Family::CxB: return dyadic(-1, static_cast<std::uint32_t>(n / 2));
  }
  throw std::logic_error("bad family");
}

bool has_closed_form(Family f) {
  switch (f) {
    case Family::Fractions:
    case Family::Upstars:
    case Family::Integers:
    case Family::UptimalBrackets:
    case Family::Sigma:
    case Family::Chi:
    case Family::Psi:
    case Family::H1:
    case Family::H2:
    case Family::Delta: return true;
    default: return false;
  }
}

Bound paper_bound(Family f, std::size_t n, std::optional<std::size_t> m) {
  if (n < 1) throw std::invalid_argument("bound index must be at least 1");
  if (m && *m >= n) throw std::invalid_argument("two-index bound needs m < n");
  auto N = si(n);
  switch (f) {
    case Family::Fractions:
      if (m) return exact(Dyadic(3) * p2(-si(*m)) - Dyadic(3) * p2(-N));
      return exact(Dyadic(3) * p2(-N));
    case Family::Upstars:
      if (m) return exact(p2(2 - si(*m)) - p2(1 - N));
      return exact(p2(2 - N));
    case Family::Integers:
      if (m) return exact(p2(1 - si(*m)) - p2(1 - N));
      return exact(p2(1 - N));
    case Family::Sigma:
      if (m) return exact(p2(1 - si(*m)) - p2(-N));
      return exact(p2(1 - N));
    case Family::H1:
      if (m) return exact(p2(2 - si(*m)) - p2(2 - N) + p2(-N));
      return exact(p2(2 - N));
    case Family::H2:
      if (m) return exact(Dyadic(7) * p2(-si(*m) - 1) + p2(1 - si(*m)) - p2(2 - N));
      return exact(Dyadic(7) * p2(-N - 1) + p2(1 - N));
    default: break;
  }
  if (m) throw std::invalid_argument(std::string("no two-index bound for ") + std::string(to_string(f)));
  switch (f) {
    case Family::UptimalBrackets: return exact(p2(3 - N));
    case Family::Chi: return exact(p2(3 - 2 * N) + Dyadic(5) * p2(2 - 2 * N));
    case Family::Psi: return exact(p2(4 - N));
    case Family::Delta: {
      // the two-index bound with the far index sent to infinity
      const double phi = (1 + std::sqrt(5.0)) / 2, r5 = std::sqrt(5.0);
      double v = std::pow(phi, 4) / r5 * std::pow(phi / 2, N + 1) - std::ldexp(1.0, -static_cast<int>(N)) +
                 2 * std::pow(phi, 5) / r5 * std::ldexp(1.0, -static_cast<int>(N));
      return Bound{std::nullopt, v};
    }
    default: break;
  }
  throw std::invalid_argument(std::string("no closed form for ") + std::string(to_string(f)));
}

ConvergenceReport convergence_report(const SequenceSpec& spec, const std::string& target, std::size_t max_n,
                                     std::size_t jobs) {
  if (max_n < 1) throw std::invalid_argument("max_n must be at least 1");
  static const std::map<std::string, Family> surrogates{
      {"psi", Family::Psi}, {"chi", Family::Chi}, {"dud", Family::Delta}};
  ConvergenceReport rep{spec.family, target, 0, false, Dyadic(0), {}};
  Game goal;
  auto it = surrogates.find(target);
  if (it != surrogates.end() && it->second == spec.family) {
    rep.surrogate_term = true;
    std::size_t limit = spec.max_n ? spec.max_n : default_max_n(spec.family);
    rep.depth = std::min(max_n + 7, limit);
    if (rep.depth <= max_n) throw ResourceLimitError("no room for a surrogate term beyond max_n");
    goal = term(spec, rep.depth);
    Bound b = paper_bound(spec.family, rep.depth);
    rep.tail = b.exact ? *b.exact : round_up(b.value);
  } else {
    rep.depth = max_n + 7;
    Leaf leaf = target == "upon" ? Leaf(zero()) : Leaf(Drop{});
    goal = unroll(builtin_loopy(), target, rep.depth, leaf);
    rep.tail = p2(2 - si(rep.depth));
  }

  rep.rows.resize(max_n);
  std::vector<Game> terms(max_n);
  for (std::size_t n = 1; n <= max_n; ++n) terms[n - 1] = term(spec, n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < max_n;) {
      ConvergenceRow& row = rep.rows[i];
      row.n = i + 1;
      row.upper = wd_bounds(terms[i], goal).upper + rep.tail;
      if (has_closed_form(spec.family)) row.bound = paper_bound(spec.family, row.n);
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < std::max<std::size_t>(jobs, 1); ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  for (std::size_t i = 0; i < max_n; ++i) {
    auto& row = rep.rows[i];
    row.ratio = row.bound.value > 0 ? row.upper.to_double() / row.bound.value : 0;
    row.step_ratio = i ? row.upper.to_double() / rep.rows[i - 1].upper.to_double() : 0;
  }
  return rep;
}

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string bound_text(const Bound& b) { return b.exact ? b.exact->to_string() : num(b.value); }

}  // namespace

std::string to_csv(const ConvergenceReport& r) {
  std::string out = "n,upper,paper_bound,ratio,step_ratio\n";
  for (const auto& row : r.rows) {
    out += std::to_string(row.n) + "," + row.upper.to_string() + "," +
           (has_closed_form(r.family) ? bound_text(row.bound) : "") + "," + num(row.ratio) + "," +
           num(row.step_ratio) + "\n";
  }
  return out;
}

std::string to_json(const ConvergenceReport& r) {
  nlohmann::ordered_json j;
  j["family"] = std::string(to_string(r.family));
  j["target"] = r.target;
  j["depth"] = r.depth;
  j["surrogate_term"] = r.surrogate_term;
  j["tail"] = r.tail.to_string();
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json o;
    o["n"] = row.n;
    o["upper"] = row.upper.to_string();
    o["upper_value"] = row.upper.to_double();
    if (has_closed_form(r.family)) {
      o["paper_bound"] = bound_text(row.bound);
      o["paper_bound_value"] = row.bound.value;
    } else {
      o["paper_bound"] = nullptr;
      o["paper_bound_value"] = nullptr;
    }
    o["ratio"] = row.ratio;
    o["step_ratio"] = row.step_ratio;
    j["rows"].push_back(std::move(o));
  }
  return j.dump(2);
}

RawGamePtr carousel_approximant(std::size_t n, Game x) {
  if (n < 1) throw std::invalid_argument("carousel approximant needs n >= 1");
  Game one = integer(1), st = star(), one_st = add(integer(1), star());
  RawOption below = make_raw({zero(), x}, {zero()});  // alpha_{n+1}
  for (std::size_t i = 0; i < n; ++i) {
    auto delta = make_raw({one_st}, {below, one_st});
    auto gamma = make_raw({st, delta}, {st});
    auto beta = make_raw({one}, {gamma, one});
    below = make_raw({zero(), beta}, {zero()});
  }
  return std::get<RawGamePtr>(below);
}

namespace {

NodeId labelled(const GameDag& d, Game g) {
  for (NodeId v : d.nodes())
    if (d.label(v) == g) return v;
  throw std::logic_error("label missing from dag");
}

}  // namespace

EditScript fraction_extension_script(std::size_t m, std::size_t n) {
  if (n < m) throw std::invalid_argument("extension needs n >= m");
  GameDag d = build_dag(dyadic(1, static_cast<std::uint32_t>(m)));
  NodeId end = labelled(d, integer(1)), sink = labelled(d, zero());
  auto fresh = static_cast<NodeId>(d.id_bound());
  EditScript s;
  for (std::size_t i = m; i < n; ++i) {
    s.push_back({EditAction::Add, Color::Red, end, std::nullopt});
    s.push_back({EditAction::Add, Color::Blue, fresh, sink});
    end = fresh++;
  }
  return s;
}

EditScript integer_ladder_script(std::size_t n, std::size_t k) {
  if (k < n) throw std::invalid_argument("ladder needs k >= n");
  GameDag d = build_dag(integer(si(n)));
  NodeId end = labelled(d, zero());
  auto fresh = static_cast<NodeId>(d.id_bound());
  EditScript s;
  for (std::size_t i = n; i < k; ++i) {
    s.push_back({EditAction::Add, Color::Blue, end, std::nullopt});
    end = fresh++;
  }
  return s;
}

}  // namespace cgd
