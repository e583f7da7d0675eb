#pragma once

#include <set>
#include <string>
#include <string_view>

#include "cgd/errors.hpp"
#include "cgd/expr.hpp"
#include "cgd/game.hpp"

namespace cgd {

// Brace/bar notation. "{a|b||c|d}" is {{a|b}|{c|d}}: the longest bar run
// splits a brace, shorter runs nest. Also: integers, p/q with q a power of
// two, *, *k, postfix star ("1*", "up(1)*"), + and -, up(n), upstar(n),
// uppow(n), upbrack(n), semistar, pm(a,b), pm(a), and the aliases
// ↑ ↓ ⇑ ⇓ ± − on input. Errors are ParseError with 1-based line/column
// (columns count bytes).
RawGamePtr parse_game(std::string_view text);
Game parse_canonical(std::string_view text);

// Expression whose names must come from `names`.
ExprPtr parse_expr(std::string_view text, const std::set<std::string>& names, std::size_t line = 1);

// Lines "name = expression"; '#' starts a comment.
LoopySystem parse_loopy(std::string_view text);

inline constexpr std::size_t kMaxBars = 12;

// Shortest rendering this library knows; parse_game of it canonicalizes
// back to g.
std::string print_game(Game g);

}  // namespace cgd
