#include "cgd/expr.hpp"

#include <functional>
#include <stdexcept>

namespace cgd {

ExprPtr Expr::literal(Game g) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Literal;
  e->value = g;
  return e;
}

ExprPtr Expr::ref(std::string n) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Name;
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::brace(std::vector<ExprPtr> l, std::vector<ExprPtr> r) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Brace;
  e->left = std::move(l);
  e->right = std::move(r);
  return e;
}

ExprPtr Expr::sum(ExprPtr x, ExprPtr y) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Sum;
  e->a = std::move(x);
  e->b = std::move(y);
  return e;
}

ExprPtr Expr::negate(ExprPtr x) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Neg;
  e->a = std::move(x);
  return e;
}

void collect_names(const ExprPtr& e, std::set<std::string>& out) {
  switch (e->kind) {
    case Expr::Kind::Literal: return;
    case Expr::Kind::Name: out.insert(e->name); return;
    case Expr::Kind::Brace:
      for (const auto& x : e->left) collect_names(x, out);
      for (const auto& x : e->right) collect_names(x, out);
      return;
    case Expr::Kind::Sum:
      collect_names(e->a, out);
      collect_names(e->b, out);
      return;
    case Expr::Kind::Neg: collect_names(e->a, out); return;
  }
}

bool mentions(const ExprPtr& e, const std::string& name) {
  std::set<std::string> names;
  collect_names(e, names);
  return names.count(name) != 0;
}

RawOption evaluate_raw(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Literal: return e->value;
    case Expr::Kind::Name: throw std::invalid_argument("unbound name '" + e->name + "'");
    case Expr::Kind::Brace: {
      std::vector<RawOption> l, r;
      for (const auto& x : e->left) l.push_back(evaluate_raw(x));
      for (const auto& x : e->right) r.push_back(evaluate_raw(x));
      return make_raw(std::move(l), std::move(r));
    }
    case Expr::Kind::Sum: return add(evaluate(e->a), evaluate(e->b));
    case Expr::Kind::Neg: return neg(evaluate(e->a));
  }
  throw std::logic_error("bad expression");
}

Game evaluate(const ExprPtr& e) {
  RawOption o = evaluate_raw(e);
  if (auto* g = std::get_if<Game>(&o)) return *g;
  return canonicalize(std::get<RawGamePtr>(o));
}

namespace {

std::optional<RawOption> eval_bound(const ExprPtr& e, const NameBinding& bind) {
  switch (e->kind) {
    case Expr::Kind::Literal: return RawOption(e->value);
    case Expr::Kind::Name: {
      auto g = bind(e->name);
      if (!g) return std::nullopt;
      return RawOption(*g);
    }
    case Expr::Kind::Brace: {
      std::vector<RawOption> l, r;
      for (const auto& x : e->left)
        if (auto o = eval_bound(x, bind)) l.push_back(std::move(*o));
      for (const auto& x : e->right)
        if (auto o = eval_bound(x, bind)) r.push_back(std::move(*o));
      return RawOption(make_raw(std::move(l), std::move(r)));
    }
    case Expr::Kind::Sum:
      return RawOption(add(evaluate(e->a, bind), evaluate(e->b, bind)));
    case Expr::Kind::Neg: return RawOption(neg(evaluate(e->a, bind)));
  }
  throw std::logic_error("bad expression");
}

}  // namespace

Game evaluate(const ExprPtr& e, const NameBinding& bind) {
  auto o = eval_bound(e, bind);
  if (!o) throw std::invalid_argument("a dropped reference must be an option");
  if (auto* g = std::get_if<Game>(&*o)) return *g;
  return canonicalize(std::get<RawGamePtr>(*o));
}

const ExprPtr& LoopySystem::equation(const std::string& n) const {
  auto it = equations.find(n);
  if (it == equations.end()) throw std::invalid_argument("undefined name '" + n + "'");
  return it->second;
}

void LoopySystem::define(const std::string& n, ExprPtr e) {
  if (!equations.emplace(n, std::move(e)).second) throw std::invalid_argument("duplicate definition of '" + n + "'");
  order.push_back(n);
}

void LoopySystem::resolve() {
  std::map<std::string, std::set<std::string>> refs;
  for (const auto& [n, e] : equations) {
    collect_names(e, refs[n]);
    for (const auto& r : refs[n])
      if (!defines(r)) throw std::invalid_argument("undefined name '" + r + "' in definition of '" + n + "'");
  }
  // n is loopy when it can reach itself through references
  loopy.clear();
  for (const auto& [n, _] : equations) {
    std::set<std::string> seen;
    std::vector<std::string> stack(refs[n].begin(), refs[n].end());
    bool cyc = false;
    while (!stack.empty() && !cyc) {
      std::string x = stack.back();
      stack.pop_back();
      if (x == n) cyc = true;
      if (!seen.insert(x).second) continue;
      for (const auto& y : refs[x]) stack.push_back(y);
    }
    if (cyc) loopy.insert(n);
  }
}

}  // namespace cgd
