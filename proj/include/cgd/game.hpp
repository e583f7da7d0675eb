#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "cgd/dyadic.hpp"
#include "cgd/errors.hpp"

namespace cgd {

// Handle to an interned short game in canonical form. Two handles compare
// equal exactly when the games are equal, so structural equality is id
// equality. The default-constructed handle is 0.
class Game {
 public:
  using Id = std::uint32_t;

  Game() = default;

  Id id() const { return id_; }

  friend bool operator==(Game a, Game b) = default;
  friend auto operator<=>(Game a, Game b) = default;

  // Only ids handed out by the store are meaningful.
  static Game from_id(Id id) { return Game(id); }

 private:
  explicit Game(Id id) : id_(id) {}
  Id id_ = 0;
};

struct RawGame;
using RawGamePtr = std::shared_ptr<RawGame>;
using RawOption = std::variant<Game, RawGamePtr>;

// A game in brace form; option lists may hold duplicates, dominated and
// reversible options. Subgames may be shared.
struct RawGame {
  std::vector<RawOption> left;
  std::vector<RawOption> right;
};

RawGamePtr make_raw(std::vector<RawOption> left, std::vector<RawOption> right);
// Brace form of a canonical game (its own option lists).
RawGamePtr raw_of(Game g);

enum class Outcome { L, R, N, P };
std::string_view to_string(Outcome o);

// --- construction and algebra ---------------------------------------------

Game canonicalize(const RawGame& g);
Game canonicalize(const RawGamePtr& g);
// {left | right} over canonical options.
Game make_game(std::span<const Game> left, std::span<const Game> right);

bool leq(Game g, Game h);
inline bool geq(Game g, Game h) { return leq(h, g); }
inline bool less(Game g, Game h) { return leq(g, h) && !leq(h, g); }
inline bool confused(Game g, Game h) { return !leq(g, h) && !leq(h, g); }

Game neg(Game g);
Game add(Game g, Game h);
inline Game sub(Game g, Game h) { return add(g, neg(h)); }
Game ordinal_sum(Game base, Game exponent);

Outcome outcome(Game g);
std::uint32_t birthday(Game g);

std::span<const Game> left_options(Game g);
std::span<const Game> right_options(Game g);

std::optional<Dyadic> number_value(Game g);
inline bool is_number(Game g) { return number_value(g).has_value(); }

// --- named constructors ----------------------------------------------------

Game zero();
Game integer(std::int64_t n);
Game number(const Dyadic& x);
Game dyadic(std::int64_t p, std::uint32_t e);
Game nimber(std::uint32_t n);
Game star();
// n.up, or n.up + * when with_star; n may be negative (downs).
Game up_multiple(std::int64_t n, bool with_star);
// up^n (n >= 1), equal to (*:n) - (*:(n-1)).
Game up_power(std::int64_t n);
// up^[n] (n >= 1), equal to (*:n) - *.
Game up_bracket(std::int64_t n);
// {*, up | down*, 0}
Game semistar();
// {a | b}; requires a > b.
Game switch_game(Game a, Game b);

// Canonical games currently in the interning table.
std::vector<Game> interned_games();

}  // namespace cgd

template <>
struct std::hash<cgd::Game> {
  std::size_t operator()(cgd::Game g) const noexcept { return std::hash<std::uint32_t>{}(g.id()); }
};
