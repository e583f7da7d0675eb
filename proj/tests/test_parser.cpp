#include "doctest.h"

#include <array>
#include <random>

#include "cgd/parser.hpp"
#include "test_support.hpp"

using namespace cgd;

namespace {

Game up() { return up_multiple(1, false); }
Game g2(Game l, Game r) { return canonicalize(make_raw({l}, {r})); }

// Structural equality of raw forms, option order included.
bool same_raw(const RawOption& a, const RawOption& b);
bool same_raw(const RawGame& a, const RawGame& b) {
  if (a.left.size() != b.left.size() || a.right.size() != b.right.size()) return false;
  for (std::size_t i = 0; i < a.left.size(); ++i)
    if (!same_raw(a.left[i], b.left[i])) return false;
  for (std::size_t i = 0; i < a.right.size(); ++i)
    if (!same_raw(a.right[i], b.right[i])) return false;
  return true;
}
bool same_raw(const RawOption& a, const RawOption& b) {
  if (a.index() != b.index()) return false;
  if (auto* g = std::get_if<Game>(&a)) return *g == std::get<Game>(b);
  return same_raw(*std::get<RawGamePtr>(a), *std::get<RawGamePtr>(b));
}

}  // namespace

TEST_CASE("atoms") {
  CHECK(parse_canonical("*") == star());
  CHECK(parse_canonical("*3") == nimber(3));
  CHECK(parse_canonical("1/2") == dyadic(1, 1));
  CHECK(parse_canonical("-3/8") == dyadic(-3, 3));
  CHECK(parse_canonical("1*") == add(integer(1), star()));
  CHECK(parse_canonical("up(2)") == up_multiple(2, false));
  CHECK(parse_canonical("up") == up());
  CHECK(parse_canonical("upstar(1)") == up_multiple(1, true));
  CHECK(parse_canonical("uppow(3)") == up_power(3));
  CHECK(parse_canonical("upbrack(3)") == up_bracket(3));
  CHECK(parse_canonical("semistar + semistar") == star());
  CHECK(parse_canonical("pm(1)") == switch_game(integer(1), integer(-1)));
  CHECK(parse_canonical("pm(3,1)") == switch_game(integer(3), integer(1)));
  CHECK(parse_canonical("2 - 1/2 + *") == add(dyadic(3, 1), star()));
  CHECK(parse_canonical("\xE2\x86\x91*") == up_multiple(1, true));
  CHECK(parse_canonical("\xE2\x87\x91") == up_multiple(2, false));
  CHECK(parse_canonical("\xE2\x86\x93") == neg(up()));
  CHECK(parse_canonical("\xC2\xB1" "1") == switch_game(integer(1), integer(-1)));
  CHECK(parse_canonical("\xE2\x88\x92" "2") == integer(-2));
}

TEST_CASE("braces and bars") {
  CHECK(parse_canonical("{0|0}") == star());
  CHECK(parse_canonical("{|}") == zero());
  CHECK(parse_canonical("{*,1|0}") == g2(integer(1), zero()));
  CHECK(parse_canonical("{0|*}") == up());
  auto raw = parse_game("{3|2||1|0}");
  auto expect = make_raw({make_raw({integer(3)}, {integer(2)})}, {make_raw({integer(1)}, {integer(0)})});
  CHECK(same_raw(*raw, *expect));
  CHECK(same_raw(*parse_game("{1|2||3|4}"), *parse_game("{{1|2}|{3|4}}")));
  // explicit braces and bar nesting agree on a sample of atoms
  std::array<const char*, 6> atoms{"0", "*", "1/2", "-1", "up", "pm(2)"};
  for (auto a : atoms)
    for (auto b : atoms)
      for (auto c : atoms) {
        std::string d = "*2";
        std::string bars = std::string("{") + a + "|" + b + "||" + c + "|" + d + "}";
        std::string nest = std::string("{{") + a + "|" + b + "}|{" + c + "|" + d + "}}";
        CHECK(same_raw(*parse_game(bars), *parse_game(nest)));
      }
  // commas bind tighter than bars
  CHECK(parse_canonical("{0,*|1||-1}") == canonicalize(make_raw({make_raw({zero(), star()}, {integer(1)})}, {integer(-1)})));
  CHECK(parse_canonical("{||1|0}") == canonicalize(make_raw({}, {make_raw({integer(1)}, {zero()})})));
}

TEST_CASE("chi_3 display") {
  Game chi1 = switch_game(integer(1), integer(-1));
  Game chi2 = g2(integer(3), g2(chi1, integer(-2)));
  Game chi3 = g2(integer(5), g2(chi2, integer(-4)));
  CHECK(parse_canonical("{5||||3||pm(1,-1)|-2|||-4}") == chi3);
  CHECK(parse_canonical("{5||||3||\xC2\xB1" "1|\xE2\x88\x92" "2|||\xE2\x88\x92" "4}") == chi3);
  CHECK(parse_canonical("{3||pm(1,-1)|-2}") == chi2);
  CHECK(print_game(chi2) == "{3||pm(1,-1)|-2}");
  CHECK(print_game(chi3) == "{5||||3||pm(1,-1)|-2|||-4}");
}

TEST_CASE("printing") {
  CHECK(print_game(star()) == "*");
  CHECK(print_game(dyadic(1, 1)) == "1/2");
  CHECK(print_game(zero()) == "0");
  CHECK(print_game(g2(integer(1), zero())) == "{1|0}");
  CHECK(print_game(up()) == "up(1)");
  CHECK(print_game(neg(up_multiple(2, true))) == "-upstar(2)");
  CHECK(print_game(add(dyadic(-1, 1), star())) == "-1/2*");
  CHECK(print_game(add(integer(2), nimber(3))) == "2*3");
  CHECK(print_game(nimber(4)) == "*4");
  Game d1 = g2(g2(integer(3), integer(2)), g2(integer(1), zero()));
  CHECK(print_game(d1) == "{3|2||1|0}");
}

TEST_CASE("round trip on random canonical games") {
  std::mt19937 rng(31);
  for (int i = 0; i < 1000; ++i) {
    Game g = testing::random_game(rng, 4);
    std::string text = print_game(g);
    INFO(text);
    CHECK(parse_canonical(text) == g);
  }
}

TEST_CASE("errors carry positions") {
  auto column = [](std::string_view text) -> std::size_t {
    try {
      parse_game(text);
    } catch (const ParseError& e) {
      return e.column();
    }
    return 0;
  };
  CHECK(column("{1|0") == 1);
  CHECK(column("{1|2|3}") == 5);
  CHECK(column("foo") == 1);
  CHECK(column("1/3") == 1);
  CHECK(column("{1,,2|0}") == 4);
  CHECK(column("{1}") == 1);
  CHECK(column("{1|0} x") == 7);
  CHECK(column(std::string("{") + std::string(13, '|') + "}") == 2);
  CHECK(column("{1|||||||||||||0}") == 3);
  CHECK_NOTHROW(parse_game(std::string("{1") + std::string(12, '|') + "0}"));
}

TEST_CASE("fuzzed input never escapes as anything but ParseError") {
  std::mt19937 rng(4242);
  const std::string alphabet = "{}|,*+-/0123456789 ()upmstarbck\xE2\x86\x91\x88\x92\xC2\xB1";
  std::uniform_int_distribution<int> len(0, 24), pick(0, static_cast<int>(alphabet.size()) - 1), byte(0, 255),
      mode(0, 1);
  int ok = 0, rejected = 0;
  for (int i = 0; i < 100000; ++i) {
    std::string s;
    int n = len(rng);
    bool raw_bytes = mode(rng) == 0;
    for (int k = 0; k < n; ++k) s.push_back(raw_bytes ? static_cast<char>(byte(rng)) : alphabet[pick(rng)]);
    try {
      parse_game(s);
      ++ok;
    } catch (const ParseError& e) {
      ++rejected;
      CHECK(e.column() >= 1);
    }
  }
  CHECK(ok + rejected == 100000);
  CHECK(ok > 0);
}

TEST_CASE("loopy definitions") {
  auto over = parse_loopy("over = {0|over}\n");
  CHECK(over.is_loopy());
  CHECK(over.loopy.count("over") == 1);
  auto flat = parse_loopy("a = {|}\n");
  CHECK(!flat.is_loopy());
  auto carousel = parse_loopy(
      "# four mutually recursive positions\n"
      "alpha = {0, beta | 0}\n"
      "beta = {1 | gamma, 1}\n"
      "gamma = {*, delta | *}\n"
      "delta = {1* | alpha, 1*}\n");
  CHECK(carousel.loopy.size() == 4);
  CHECK(carousel.order.size() == 4);
  CHECK_THROWS_AS(parse_loopy("a = {b|}\n"), ParseError);
  CHECK_THROWS_AS(parse_loopy("a = {a|}\na = 0\n"), ParseError);
  try {
    parse_loopy("x = 0\ny = {x | q}\n");
    FAIL("undefined name accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 10);
  }
}
