#pragma once

#include <functional>
#include <map>
#include <optional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "cgd/game.hpp"

namespace cgd {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Game expression tree. Names refer to loopy-system equations or to a
// sidling variable; everything else is closed.
struct Expr {
  enum class Kind { Literal, Name, Brace, Sum, Neg };
  Kind kind = Kind::Literal;
  Game value;                         // Literal
  std::string name;                   // Name
  std::vector<ExprPtr> left, right;   // Brace
  ExprPtr a, b;                       // Sum: a + b; Neg: -a

  static ExprPtr literal(Game g);
  static ExprPtr ref(std::string n);
  static ExprPtr brace(std::vector<ExprPtr> l, std::vector<ExprPtr> r);
  static ExprPtr sum(ExprPtr x, ExprPtr y);
  static ExprPtr negate(ExprPtr x);
};

bool mentions(const ExprPtr& e, const std::string& name);
// Closed expressions only; a Name throws std::invalid_argument. Braces keep
// their raw option lists, sums and negations are taken canonically.
RawOption evaluate_raw(const ExprPtr& e);
Game evaluate(const ExprPtr& e);
void collect_names(const ExprPtr& e, std::set<std::string>& out);

// Names are looked up through `bind`. An empty result drops the option the
// name stands for, which is only allowed directly inside a brace.
using NameBinding = std::function<std::optional<Game>(const std::string&)>;
Game evaluate(const ExprPtr& e, const NameBinding& bind);

// name = expression, in file order.
struct LoopySystem {
  std::map<std::string, ExprPtr> equations;
  std::vector<std::string> order;
  // names lying on a cycle of references
  std::set<std::string> loopy;

  bool defines(const std::string& n) const { return equations.count(n) != 0; }
  const ExprPtr& equation(const std::string& n) const;
  bool is_loopy() const { return !loopy.empty(); }
  // Adds an equation; throws std::invalid_argument on a duplicate name.
  void define(const std::string& n, ExprPtr e);
  // Recomputes `loopy`; throws std::invalid_argument on undefined names.
  void resolve();
};

}  // namespace cgd
