#include "cgd/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <vector>

#include "cgd/dyadic.hpp"

namespace cgd {

namespace {

constexpr std::size_t kMaxNesting = 200;
constexpr std::int64_t kMaxMagnitude = 4096;
constexpr std::int64_t kMaxArg = 64;

bool is_builtin(std::string_view id) {
  return id == "up" || id == "upstar" || id == "uppow" || id == "upbrack" || id == "semistar" || id == "pm";
}

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view text, const std::set<std::string>& names, std::size_t line, std::size_t col0)
      : s_(text), names_(names), line_(line), col0_(col0) {}

  ExprPtr whole() {
    ExprPtr e = expr();
    ws();
    if (i_ < s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  struct Item {
    enum Kind { Term, Comma, Bars } kind;
    ExprPtr e;
    std::size_t bars = 0;
    std::size_t at = 0;
  };

  [[noreturn]] void fail(const std::string& what) const { fail_at(i_, what); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const {
    throw ParseError(line_, col0_ + at + 1, what);
  }

  void ws() {
    while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t' || s_[i_] == '\r' || s_[i_] == '\n')) ++i_;
  }

  bool eat(std::string_view sym) {
    if (s_.substr(i_, sym.size()) == sym) {
      i_ += sym.size();
      return true;
    }
    return false;
  }

  bool at_minus() const {
    return (i_ < s_.size() && s_[i_] == '-') || s_.substr(i_, 3) == "\xE2\x88\x92";
  }

  struct Depth {
    Parser& p;
    explicit Depth(Parser& q) : p(q) {
      if (++p.depth_ > kMaxNesting) p.fail("nesting too deep");
    }
    ~Depth() { --p.depth_; }
  };

  ExprPtr expr() {
    Depth guard(*this);
    ExprPtr e = unary();
    for (;;) {
      ws();
      if (i_ < s_.size() && s_[i_] == '+') {
        ++i_;
        e = Expr::sum(e, unary());
      } else if (at_minus()) {
        eat("-") || eat("\xE2\x88\x92");
        e = Expr::sum(e, Expr::negate(unary()));
      } else {
        return e;
      }
    }
  }

  ExprPtr unary() {
    Depth guard(*this);
    ws();
    if (at_minus()) {
      eat("-") || eat("\xE2\x88\x92");
      return Expr::negate(unary());
    }
    if (eat("\xC2\xB1")) {  // ±
      ExprPtr x = postfix();
      return Expr::brace({x}, {Expr::negate(x)});
    }
    return postfix();
  }

  ExprPtr postfix() {
    ExprPtr e = atom();
    for (;;) {
      ws();
      if (i_ < s_.size() && s_[i_] == '*') {
        ++i_;
        e = Expr::sum(e, Expr::literal(nimber(star_index())));
      } else {
        return e;
      }
    }
  }

  // digits right after a '*'; none means 1
  std::uint32_t star_index() {
    if (i_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[i_]))) return 1;
    std::size_t at = i_;
    std::int64_t k = digits();
    if (k > kMaxArg) fail_at(at, "nimber index too large");
    return static_cast<std::uint32_t>(k);
  }

  std::int64_t digits() {
    std::size_t at = i_;
    std::int64_t v = 0;
    while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
      if (i_ - at >= 12) fail_at(at, "number too large");
      v = v * 10 + (s_[i_] - '0');
      ++i_;
    }
    if (i_ == at) fail("expected digits");
    return v;
  }

  ExprPtr number() {
    std::size_t at = i_;
    std::int64_t p = digits();
    std::int64_t q = 1;
    if (i_ < s_.size() && s_[i_] == '/') {
      ++i_;
      q = digits();
      if (q == 0 || (q & (q - 1)) != 0) fail_at(at, "denominator must be a power of two");
    }
    if (p / q > kMaxMagnitude) fail_at(at, "number too large");
    std::uint32_t e = 0;
    while ((std::int64_t{1} << e) < q) ++e;
    return Expr::literal(cgd::number(Dyadic(BigInt(p), e)));
  }

  std::int64_t int_arg() {
    ws();
    bool negative = false;
    if (at_minus()) {
      eat("-") || eat("\xE2\x88\x92");
      negative = true;
      ws();
    }
    std::size_t at = i_;
    std::int64_t v = digits();
    if (v > kMaxArg) fail_at(at, "argument too large");
    return negative ? -v : v;
  }

  void expect(char c) {
    ws();
    if (i_ >= s_.size() || s_[i_] != c) fail(std::string("expected '") + c + "'");
    ++i_;
  }

  bool peek(char c) {
    ws();
    return i_ < s_.size() && s_[i_] == c;
  }

  ExprPtr builtin(const std::string& id, std::size_t at) {
    if (id == "semistar") return Expr::literal(semistar());
    if (id == "pm") {
      expect('(');
      ExprPtr a = expr();
      ExprPtr b;
      if (peek(',')) {
        ++i_;
        b = expr();
      } else {
        b = Expr::negate(a);
      }
      expect(')');
      return Expr::brace({a}, {b});
    }
    std::int64_t n = 1;
    bool has_arg = peek('(');
    if (has_arg) {
      ++i_;
      n = int_arg();
      expect(')');
    } else if (id == "uppow" || id == "upbrack") {
      fail_at(at, id + " needs an argument");
    }
    if (id == "up" || id == "upstar") {
      Game g = up_multiple(n < 0 ? -n : n, id == "upstar");
      return Expr::literal(n < 0 ? neg(g) : g);
    }
    if (n < 1) fail_at(at, id + " needs an argument of at least 1");
    return Expr::literal(id == "uppow" ? up_power(n) : up_bracket(n));
  }

  ExprPtr atom() {
    Depth guard(*this);
    ws();
    if (i_ >= s_.size()) fail("unexpected end of input");
    char c = s_[i_];
    std::size_t at = i_;
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (c == '*') {
      ++i_;
      return Expr::literal(nimber(star_index()));
    }
    if (c == '{') {
      ++i_;
      return brace(at);
    }
    if (c == '(') {
      ++i_;
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (eat("\xE2\x86\x91")) return Expr::literal(up_multiple(1, false));        // ↑
    if (eat("\xE2\x86\x93")) return Expr::literal(neg(up_multiple(1, false)));   // ↓
    if (eat("\xE2\x87\x91")) return Expr::literal(up_multiple(2, false));        // ⇑
    if (eat("\xE2\x87\x93")) return Expr::literal(neg(up_multiple(2, false)));   // ⇓
    if (is_ident_start(c)) {
      std::size_t b = i_;
      while (i_ < s_.size() && is_ident_char(s_[i_])) ++i_;
      std::string id(s_.substr(b, i_ - b));
      if (is_builtin(id)) return builtin(id, at);
      if (names_.count(id)) return Expr::ref(id);
      fail_at(at, "unknown identifier '" + id + "'");
    }
    fail_at(at, "unexpected '" + std::string(1, c) + "'");
  }

  ExprPtr brace(std::size_t open_at) {
    std::vector<Item> items;
    for (;;) {
      ws();
      if (i_ >= s_.size()) fail_at(open_at, "unbalanced '{'");
      char c = s_[i_];
      if (c == '}') {
        ++i_;
        break;
      }
      if (c == '|') {
        std::size_t at = i_;
        while (i_ < s_.size() && s_[i_] == '|') ++i_;
        items.push_back({Item::Bars, nullptr, i_ - at, at});
      } else if (c == ',') {
        items.push_back({Item::Comma, nullptr, 0, i_});
        ++i_;
      } else {
        std::size_t at = i_;
        items.push_back({Item::Term, expr(), 0, at});
        ws();
        if (i_ < s_.size() && s_[i_] != ',' && s_[i_] != '|' && s_[i_] != '}')
          fail("unexpected '" + std::string(1, s_[i_]) + "'");
      }
    }
    return assemble(items, 0, items.size(), open_at);
  }

  ExprPtr assemble(const std::vector<Item>& items, std::size_t b, std::size_t e, std::size_t at) {
    std::size_t top = 0, where = e, count = 0;
    for (std::size_t k = b; k < e; ++k) {
      if (items[k].kind != Item::Bars) continue;
      if (items[k].bars > top) {
        top = items[k].bars;
        where = k;
        count = 1;
      } else if (items[k].bars == top) {
        ++count;
        if (count == 2) fail_at(items[k].at, "ambiguous bars: two runs of " + std::to_string(top));
      }
    }
    if (top == 0) fail_at(at, "expected '|' in braces");
    if (top > kMaxBars) fail_at(items[where].at, "too many bars (at most " + std::to_string(kMaxBars) + ")");
    return Expr::brace(side(items, b, where), side(items, where + 1, e));
  }

  std::vector<ExprPtr> side(const std::vector<Item>& items, std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k)
      if (items[k].kind == Item::Bars) return {assemble(items, b, e, items[b].at)};
    std::vector<ExprPtr> out;
    if (b == e) return out;
    bool want_term = true;
    for (std::size_t k = b; k < e; ++k) {
      if (want_term != (items[k].kind == Item::Term)) fail_at(items[k].at, "empty option");
      if (want_term) out.push_back(items[k].e);
      want_term = !want_term;
    }
    if (want_term) fail_at(items[e - 1].at, "empty option");
    return out;
  }

  std::string_view s_;
  const std::set<std::string>& names_;
  std::size_t line_, col0_;
  std::size_t i_ = 0;
  std::size_t depth_ = 0;
};

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

ExprPtr parse_expr(std::string_view text, const std::set<std::string>& names, std::size_t line) {
  return Parser(text, names, line, 0).whole();
}

RawGamePtr parse_game(std::string_view text) {
  static const std::set<std::string> none;
  ExprPtr e = Parser(text, none, 1, 0).whole();
  RawOption o = evaluate_raw(e);
  if (auto* g = std::get_if<Game>(&o)) return raw_of(*g);
  return std::get<RawGamePtr>(o);
}

Game parse_canonical(std::string_view text) { return canonicalize(parse_game(text)); }

LoopySystem parse_loopy(std::string_view text) {
  struct Line {
    std::size_t no, col;
    std::string name;
    std::string_view rhs;
  };
  std::vector<Line> lines;
  std::set<std::string> names;
  std::size_t no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++no;
    pos = end + 1;
    std::size_t hash = raw.find('#');
    if (hash != std::string_view::npos) raw = raw.substr(0, hash);
    if (trim(raw).empty()) continue;
    std::size_t eq = raw.find('=');
    if (eq == std::string_view::npos) throw ParseError(no, 1, "expected 'name = expression'");
    std::string name = trim(raw.substr(0, eq));
    if (name.empty() || !is_ident_start(name[0]) || !std::all_of(name.begin(), name.end(), is_ident_char))
      throw ParseError(no, 1, "bad name '" + name + "'");
    if (is_builtin(name)) throw ParseError(no, 1, "'" + name + "' is a built-in name");
    if (!names.insert(name).second) throw ParseError(no, 1, "duplicate definition of '" + name + "'");
    lines.push_back({no, eq + 1, name, raw.substr(eq + 1)});
  }
  LoopySystem sys;
  for (const Line& l : lines) sys.define(l.name, Parser(l.rhs, names, l.no, l.col).whole());
  sys.resolve();
  return sys;
}

// ---------------------------------------------------------------------------
// printing

namespace {

std::optional<std::uint32_t> nimber_value(Game g) {
  if (g == zero()) return 0;
  auto l = left_options(g), r = right_options(g);
  if (l.size() != r.size() || !std::equal(l.begin(), l.end(), r.begin())) return std::nullopt;
  std::vector<bool> seen(l.size(), false);
  for (Game o : l) {
    auto k = nimber_value(o);
    if (!k || *k >= l.size() || seen[*k]) return std::nullopt;
    seen[*k] = true;
  }
  return static_cast<std::uint32_t>(l.size());
}

const std::map<Game, std::string>& named_values() {
  static const std::map<Game, std::string> table = [] {
    std::map<Game, std::string> t;
    auto put = [&](Game g, const std::string& s) {
      t.emplace(g, s);
      t.emplace(neg(g), "-" + s);
    };
    for (int n = 1; n <= 8; ++n) put(up_multiple(n, false), "up(" + std::to_string(n) + ")");
    for (int n = 1; n <= 8; ++n) put(up_multiple(n, true), "upstar(" + std::to_string(n) + ")");
    for (int n = 2; n <= 6; ++n) put(up_power(n), "uppow(" + std::to_string(n) + ")");
    for (int n = 2; n <= 6; ++n) put(up_bracket(n), "upbrack(" + std::to_string(n) + ")");
    put(semistar(), "semistar");
    return t;
  }();
  return table;
}

std::optional<std::string> name_of(Game g) {
  if (auto x = number_value(g)) return x->to_string();
  if (auto k = nimber_value(g)) return *k == 1 ? std::string("*") : "*" + std::to_string(*k);
  const auto& table = named_values();
  if (auto it = table.find(g); it != table.end()) return it->second;
  auto l = left_options(g), r = right_options(g);
  // x + *k: both sides are x, x+*, ..., x+*(k-1)
  if (!l.empty() && l.size() == r.size() && std::equal(l.begin(), l.end(), r.begin())) {
    for (Game o : l) {
      auto x = number_value(o);
      if (!x) continue;
      auto k = nimber_value(sub(g, o));
      if (k && *k > 0) return x->to_string() + "*" + (*k == 1 ? std::string() : std::to_string(*k));
    }
  }
  // symmetric switch of numbers
  if (l.size() == 1 && r.size() == 1 && l[0] == neg(r[0])) {
    auto a = number_value(l[0]);
    if (a && a->sign() > 0) return "pm(" + a->to_string() + "," + (-*a).to_string() + ")";
  }
  return std::nullopt;
}

struct Form {
  std::string body;   // full text when bars == 0, else the inside of a brace
  std::size_t bars;
};

std::string full(const Form& f) { return f.bars == 0 ? f.body : "{" + f.body + "}"; }

class Printer {
 public:
  const Form& form(Game g) {
    if (auto it = memo_.find(g); it != memo_.end()) return it->second;
    Form f;
    if (auto n = name_of(g)) {
      f = {*n, 0};
    } else {
      std::size_t li = 0, ri = 0;
      std::string ls = side(left_options(g), true, li), rs = side(right_options(g), true, ri);
      std::size_t bars = std::max(li, ri) + 1;
      if (bars > kMaxBars) {
        ls = side(left_options(g), false, li);
        rs = side(right_options(g), false, ri);
        bars = 1;
      }
      f = {ls + std::string(bars, '|') + rs, bars};
    }
    return memo_.emplace(g, std::move(f)).first->second;
  }

 private:
  std::string side(std::span<const Game> opts, bool flatten, std::size_t& inner) {
    inner = 0;
    if (opts.size() == 1 && flatten) {
      const Form& f = form(opts[0]);
      inner = f.bars;
      return f.body;
    }
    std::string out;
    for (std::size_t k = 0; k < opts.size(); ++k) {
      if (k) out += ",";
      out += full(form(opts[k]));
    }
    return out;
  }

  std::map<Game, Form> memo_;
};

}  // namespace

std::string print_game(Game g) {
  Printer p;
  return full(p.form(g));
}

}  // namespace cgd
