#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cgd/dyadic.hpp"
#include "cgd/expr.hpp"
#include "cgd/game.hpp"
#include "cgd/metrics.hpp"

namespace cgd {

// on, off, over, under, upon, dud, tis, tisn, chi, psi and the carousel
// alpha, beta, gamma, delta, all in one system.
const LoopySystem& builtin_loopy();

// Leaf for unroll: a remaining reference is dropped, or replaced by a game.
struct Drop {};
using Leaf = std::variant<Drop, Game>;

// Expands `name` k reference levels deep. unroll(over, 2, Drop) = {0|{0|}}.
Game unroll(const LoopySystem& sys, const std::string& name, std::size_t k, const Leaf& leaf = Drop{});

// x_{k+1} = body[x := x_k] for k < steps; returns x_1..x_steps.
std::vector<Game> sidle(const ExprPtr& body, Game seed, std::size_t steps, const std::string& var = "x");
std::vector<Game> sidle(std::string_view body, Game seed, std::size_t steps);

enum class Family {
  Fractions,
  Upstars,
  Integers,
  UptimalBrackets,
  UptimalPowers,
  Sigma,
  Zeta,
  Chi,
  Psi,
  Delta,
  DeltaN,
  H1,
  H2,
  Switches,
  Nimbers,
  CxA,
  CxB,
};

std::string_view to_string(Family f);
std::optional<Family> family_from_string(std::string_view s);
const std::vector<Family>& all_families();

struct SequenceSpec {
  Family family = Family::Fractions;
  // delta uses F_{n+fib_offset}; 3 reproduces the displayed terms.
  int fib_offset = 3;
  // 0: the family default
  std::size_t max_n = 0;
};

std::size_t default_max_n(Family f);
// Throws ResourceLimitError beyond max_n, std::invalid_argument for n < 1
// or an index the family does not define.
Game term(const SequenceSpec& spec, std::size_t n);
// The raw recurrence for zeta, before canonicalization.
RawGamePtr zeta_raw(std::size_t n);

struct Bound {
  std::optional<Dyadic> exact;  // dyadic closed forms
  double value = 0;
};
bool has_closed_form(Family f);
// Distance bound to the family's limit; with m, the bound between terms n
// and m (n > m) where the closed form has one. Throws std::invalid_argument
// for families without a closed form.
Bound paper_bound(Family f, std::size_t n, std::optional<std::size_t> m = std::nullopt);

struct ConvergenceRow {
  std::size_t n = 0;
  Dyadic upper;       // wd_bounds upper to the surrogate, plus tail
  Bound bound;        // closed form at n
  double ratio = 0;   // upper / bound
  double step_ratio = 0;  // upper(n) / upper(n-1); 0 on the first row
};

struct ConvergenceReport {
  Family family;
  std::string target;
  std::size_t depth = 0;  // unroll depth or surrogate term index
  bool surrogate_term = false;
  Dyadic tail;
  std::vector<ConvergenceRow> rows;
};

// Rows n = 1..max_n. Targets over, on, under, off unroll with Drop leaves,
// upon with 0 leaves; psi, chi and dud are stood in for by a deep term of
// the family itself.
ConvergenceReport convergence_report(const SequenceSpec& spec, const std::string& target, std::size_t max_n,
                                     std::size_t jobs = 1);
std::string to_csv(const ConvergenceReport& r);
std::string to_json(const ConvergenceReport& r);

// Chain alpha_1, beta_1, gamma_1, delta_1, alpha_2, ..., alpha_{n+1}, the
// last with a Left move to x.
RawGamePtr carousel_approximant(std::size_t n, Game x);

// Grows D(1/2^m) into D(1/2^n) one red/blue pair at a time.
EditScript fraction_extension_script(std::size_t m, std::size_t n);
// Grows D(n) into D(k), k > n, along the blue path.
EditScript integer_ladder_script(std::size_t n, std::size_t k);

}  // namespace cgd
