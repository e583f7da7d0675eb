#include "doctest.h"

#include <random>
#include <set>

#include "cgd/dag.hpp"
#include "cgd/loopy.hpp"
#include "cgd/parser.hpp"
#include "test_support.hpp"

using namespace cgd;

namespace {

Game T(Family f, std::size_t n) { return term({f}, n); }

// One-sided raw game: every position has Left options only.
RawGamePtr left_only(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> count(0, depth > 0 ? 3 : 0);
  std::vector<RawOption> l;
  int k = count(rng);
  for (int i = 0; i < k; ++i) l.push_back(left_only(rng, depth - 1));
  return make_raw(std::move(l), {});
}

}  // namespace

TEST_CASE("builtin systems") {
  const auto& sys = builtin_loopy();
  for (const char* n : {"on", "off", "over", "under", "upon", "dud", "tis", "tisn", "chi", "psi", "alpha", "beta",
                        "gamma", "delta"}) {
    INFO(n);
    CHECK(sys.defines(n));
    CHECK(sys.loopy.count(n) == 1);
  }
}

TEST_CASE("unroll") {
  const auto& sys = builtin_loopy();
  CHECK(unroll(sys, "over", 2) == dyadic(1, 1));
  CHECK(unroll(sys, "over", 1) == integer(1));
  CHECK(unroll(sys, "on", 1) == zero());
  CHECK(unroll(sys, "on", 5) == integer(4));
  CHECK(unroll(sys, "under", 3) == dyadic(-1, 2));
  for (std::size_t k = 1; k <= 5; ++k) {
    CHECK(unroll(sys, "over", k) == dyadic(1, static_cast<std::uint32_t>(k - 1)));
    CHECK(unroll(sys, "upon", k, zero()) == up_bracket(static_cast<std::int64_t>(k)));
  }
  CHECK(unroll(sys, "over", 3, star()) == up_multiple(3, false));
  CHECK_THROWS_AS(unroll(sys, "nope", 2), std::invalid_argument);
  CHECK_THROWS_AS(unroll(sys, "over", 0), std::invalid_argument);
}

TEST_CASE("sidling") {
  auto a = sidle("{0|x}", integer(1), 6);
  auto b = sidle("{0|x}", star(), 6);
  auto c = sidle("{x|}", zero(), 6);
  for (std::size_t k = 1; k <= 6; ++k) {
    CHECK(a[k - 1] == T(Family::Fractions, k));
    CHECK(b[k - 1] == T(Family::Upstars, k));
    Game expect = star();
    for (std::size_t i = 0; i < k; ++i) expect = add(expect, up_multiple(1, true));
    CHECK(b[k - 1] == expect);
    CHECK(c[k - 1] == integer(static_cast<std::int64_t>(k)));
  }
  CHECK(print_game(b[1]) == "upstar(2)");
  CHECK(sidle("{x|*}", zero(), 4) == std::vector<Game>{up_bracket(1), up_bracket(2), up_bracket(3), up_bracket(4)});
  CHECK_THROWS_AS(sidle("{0|1}", zero(), 2), std::invalid_argument);
}

TEST_CASE("displayed terms") {
  CHECK(print_game(T(Family::Chi, 2)) == "{3||pm(1,-1)|-2}");
  CHECK(T(Family::Chi, 3) == parse_canonical("{5||||3||pm(1,-1)|-2|||-4}"));
  CHECK(T(Family::Fractions, 3) == dyadic(1, 3));
  CHECK(print_game(T(Family::Delta, 2)) == "{6|5||4|3|||3|2||1|0}");
  CHECK(print_game(T(Family::Delta, 3)) == "{11|10||9|8|||8|7||6|5||||6|5||4|3|||3|2||1|0}");
  CHECK(T(Family::DeltaN, 1) == parse_canonical("{2|1||-1|-2}"));
  CHECK(T(Family::Psi, 1) == neg(up_multiple(1, true)));
  CHECK(T(Family::Psi, 2) == parse_canonical("{-upstar(1),0|{-upstar(1),0|-upstar(1),0},0}"));
  CHECK(T(Family::Sigma, 3) == switch_game(integer(4), integer(3)));
  CHECK(T(Family::Switches, 1) == parse_canonical("{3|1||-1|-3}"));
  CHECK(T(Family::Switches, 2) == parse_canonical("{{4|2},{5|1}|{-2|-4},{-1|-5}}"));
  CHECK(T(Family::H1, 2) == parse_canonical("{0|*-1}"));
  CHECK(T(Family::H2, 2) == parse_canonical("{* + 1 + semistar | 0}"));
  CHECK(T(Family::Nimbers, 5) == nimber(5));
  std::vector<Game> a, b;
  for (std::size_t k = 1; k <= 6; ++k) {
    a.push_back(T(Family::CxA, k));
    b.push_back(T(Family::CxB, k));
  }
  CHECK(a == std::vector<Game>{integer(1), integer(1), dyadic(1, 1), dyadic(1, 1), dyadic(1, 2), dyadic(1, 2)});
  CHECK(b == std::vector<Game>{integer(-1), dyadic(-1, 1), dyadic(-1, 1), dyadic(-1, 2), dyadic(-1, 2), dyadic(-1, 3)});
}

TEST_CASE("delta offset and limits") {
  SequenceSpec four{Family::Delta, 4};
  Game d1 = T(Family::Delta, 1);
  CHECK(term(four, 2) == make_game(std::vector<Game>{add(d1, integer(5))}, std::vector<Game>{d1}));
  CHECK(term(four, 2) != T(Family::Delta, 2));
  CHECK_THROWS_AS(term({Family::Delta, 3, 4}, 5), ResourceLimitError);
  CHECK_THROWS_AS(T(Family::DeltaN, 4), std::invalid_argument);
  CHECK_THROWS_AS(T(Family::Fractions, 0), std::invalid_argument);
  for (Family f : all_families()) CHECK(family_from_string(to_string(f)) == f);
}

TEST_CASE("zeta terms are already canonical") {
  // except the first: {up|down} has the reversible options and is *
  CHECK(T(Family::Zeta, 1) == star());
  for (std::size_t n = 2; n <= 6; ++n) {
    auto raw = zeta_raw(n);
    Game z = canonicalize(raw);
    CHECK(z == T(Family::Zeta, n));
    REQUIRE(left_options(z).size() == 1);
    REQUIRE(right_options(z).size() == 1);
    CHECK(left_options(z)[0] == std::get<Game>(raw->left[0]));
    CHECK(right_options(z)[0] == std::get<Game>(raw->right[0]));
  }
}

TEST_CASE("outcomes") {
  for (std::size_t n = 1; n <= 5; ++n) {
    CHECK(outcome(T(Family::Delta, n)) == Outcome::L);
    CHECK(outcome(neg(T(Family::Delta, n))) == Outcome::R);
  }
  for (std::size_t n = 1; n <= 3; ++n) CHECK(outcome(T(Family::DeltaN, n)) == Outcome::N);
}

TEST_CASE("non-Cauchy sum") {
  for (std::size_t k = 1; k <= 10; ++k) {
    Game x = add(T(Family::CxA, k), T(Family::CxB, k));
    Game y = add(T(Family::CxA, k + 1), T(Family::CxB, k + 1));
    CHECK((k % 2 == 1 ? x : y) == zero());
    CHECK(wd_bounds(x, y).lower >= Dyadic(1));
  }
}

TEST_CASE("fraction and upstar sequences sit 2^-n apart") {
  // certified exactly for small n; the single red edge from * to 0 sits at
  // depth n, not n+1
  for (std::size_t n = 1; n <= 4; ++n) {
    auto r = wd_exact(T(Family::Fractions, n), T(Family::Upstars, n));
    CHECK(r.certified);
    CHECK(r.upper == Dyadic::pow2(-static_cast<std::int64_t>(n)));
  }
}

TEST_CASE("switch family bounds between consecutive terms") {
  // recorded values: the bounds do not grow with n
  for (std::size_t n = 1; n <= 5; ++n) {
    auto r = wd_bounds(T(Family::Switches, n), T(Family::Switches, n + 1));
    CHECK(r.lower == Dyadic(2));
    CHECK(r.upper == Dyadic(11).half());
  }
}

TEST_CASE("one-sided games are integers") {
  std::mt19937 rng(77);
  for (int i = 0; i < 500; ++i) {
    Game g = canonicalize(left_only(rng, 5));
    CHECK(number_value(g).has_value());
    CHECK(number_value(g)->is_integer());
  }
  // only the root one-sided
  for (int i = 0; i < 300; ++i) {
    std::vector<RawOption> l;
    for (int k = 0; k < 3; ++k) l.push_back(testing::random_raw(rng, 3));
    Game g = canonicalize(make_raw(std::move(l), {}));
    REQUIRE(number_value(g).has_value());
    CHECK(number_value(g)->is_integer());
  }
  for (std::size_t k = 1; k <= 6; ++k) {
    CHECK(number_value(unroll(builtin_loopy(), "tis", k)).has_value());
    CHECK(number_value(unroll(builtin_loopy(), "tisn", k)).has_value());
  }
}

TEST_CASE("carousel approximants") {
  for (std::size_t n : {1, 2, 3}) {
    auto raw = carousel_approximant(n, zero());
    Game g = canonicalize(raw);
    for (Game l : left_options(g)) CHECK(l != zero());
    Game beta = canonicalize(std::get<RawGamePtr>(raw->left[1]));
    CHECK(leq(zero(), beta));
    CHECK(!leq(beta, zero()));
    // chain length: follow alpha -> beta -> gamma -> delta -> alpha ...
    std::size_t chain = 1;
    RawGamePtr at = raw;
    for (std::size_t step = 0;; ++step) {
      const auto& opts = step % 2 == 0 ? at->left : at->right;
      const auto& other = step % 2 == 0 ? at->right : at->left;
      RawGamePtr next;
      for (const auto& o : opts)
        if (auto* p = std::get_if<RawGamePtr>(&o)) next = *p;
      for (const auto& o : other) CHECK(std::holds_alternative<Game>(o));
      if (!next) break;
      at = next;
      ++chain;
    }
    CHECK(chain == 4 * n + 1);
  }
}

TEST_CASE("closed forms") {
  CHECK(*paper_bound(Family::Fractions, 3, 1).exact == Dyadic(9) * Dyadic::pow2(-3));
  CHECK(*paper_bound(Family::Psi, 4).exact == Dyadic(1));
  CHECK(*paper_bound(Family::Chi, 1).exact == Dyadic(7));
  CHECK(*paper_bound(Family::Upstars, 5, 2).exact == Dyadic::pow2(0) - Dyadic::pow2(-4));
  CHECK(*paper_bound(Family::UptimalBrackets, 3).exact == Dyadic(1));
  CHECK(*paper_bound(Family::H2, 1).exact == Dyadic(7) * Dyadic::pow2(-2) + Dyadic(1));
  auto d = paper_bound(Family::Delta, 1);
  CHECK(!d.exact);
  CHECK(d.value == doctest::Approx(6.4659053651246747).epsilon(1e-12));
  CHECK_THROWS_AS(paper_bound(Family::Nimbers, 3), std::invalid_argument);
  CHECK_THROWS_AS(paper_bound(Family::Psi, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(paper_bound(Family::Fractions, 3, 3), std::invalid_argument);
}

TEST_CASE("extension scripts") {
  for (auto [m, n] : {std::pair<std::size_t, std::size_t>{1, 3}, {2, 5}, {3, 8}}) {
    auto sim = simulate(fraction_extension_script(m, n), build_dag(T(Family::Fractions, m)));
    CHECK(sim.cost == *paper_bound(Family::Fractions, n, m).exact);
    CHECK(isomorphic(sim.dag, build_dag(T(Family::Fractions, n))));
  }
  const std::size_t K = 17;
  Game on = unroll(builtin_loopy(), "on", K);
  Dyadic tail = Dyadic::pow2(2 - static_cast<std::int64_t>(K));
  for (std::size_t n = 1; n <= 10; ++n) {
    auto sim = simulate(integer_ladder_script(n, K - 1), build_dag(integer(static_cast<std::int64_t>(n))));
    CHECK(sim.cost == Dyadic::pow2(1 - static_cast<std::int64_t>(n)) - tail);
    CHECK(isomorphic(sim.dag, build_dag(on)));
  }
}

TEST_CASE("convergence tables") {
  auto frac = convergence_report({Family::Fractions}, "over", 8, 2);
  CHECK(frac.depth == 15);
  CHECK(frac.tail == Dyadic::pow2(-13));
  REQUIRE(frac.rows.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    const auto& r = frac.rows[i];
    CHECK(r.n == i + 1);
    CHECK(r.upper > Dyadic(0));
    CHECK(r.upper <= *r.bound.exact);
    if (i) CHECK(r.upper < frac.rows[i - 1].upper);
    if (r.n >= 5) CHECK(r.step_ratio == doctest::Approx(0.5).epsilon(0.2));
  }
  auto ints = convergence_report({Family::Integers}, "on", 8);
  for (const auto& r : ints.rows) CHECK(r.upper <= Dyadic::pow2(1 - static_cast<std::int64_t>(r.n)));
  auto ups = convergence_report({Family::UptimalBrackets}, "upon", 6);
  for (const auto& r : ups.rows) CHECK(r.upper <= Dyadic::pow2(3 - static_cast<std::int64_t>(r.n)));
  auto sig = convergence_report({Family::Sigma}, "on", 5);
  for (const auto& r : sig.rows) CHECK(r.upper > Dyadic(0));

  auto chi = convergence_report({Family::Chi}, "chi", 4);
  CHECK(chi.surrogate_term);
  CHECK(chi.depth == 11);

  std::string csv = to_csv(frac);
  CHECK(csv.rfind("n,upper,paper_bound,ratio,step_ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  CHECK(to_json(frac).find("\"surrogate_term\": false") != std::string::npos);
  // deterministic under parallel rows
  CHECK(to_csv(convergence_report({Family::Fractions}, "over", 8, 4)) == csv);
}
