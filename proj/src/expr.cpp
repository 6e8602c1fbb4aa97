#include "pspace/expr.hpp"

#include <algorithm>
#include <stdexcept>

namespace pspace {

namespace {

ExprPtr make(ExprKind kind) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  return e;
}

ExprPtr make2(ExprKind kind, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->kids = {std::move(a), std::move(b)};
  return e;
}

}  // namespace

ExprPtr Expr::int_const(std::int64_t v) {
  auto e = make(ExprKind::IntConst);
  std::const_pointer_cast<Expr>(e)->value = v;
  return e;
}

ExprPtr Expr::var_ref(int index) {
  auto e = make(ExprKind::VarRef);
  std::const_pointer_cast<Expr>(e)->var = index;
  return e;
}

ExprPtr Expr::cap_of(int index) {
  auto e = make(ExprKind::CapOf);
  std::const_pointer_cast<Expr>(e)->var = index;
  return e;
}

ExprPtr Expr::sum_all() { return make(ExprKind::SumAll); }

ExprPtr Expr::add(ExprPtr a, ExprPtr b) { return make2(ExprKind::Add, std::move(a), std::move(b)); }
ExprPtr Expr::sub(ExprPtr a, ExprPtr b) { return make2(ExprKind::Sub, std::move(a), std::move(b)); }
ExprPtr Expr::min2(ExprPtr a, ExprPtr b) { return make2(ExprKind::Min, std::move(a), std::move(b)); }
ExprPtr Expr::max2(ExprPtr a, ExprPtr b) { return make2(ExprKind::Max, std::move(a), std::move(b)); }

ExprPtr Expr::cmp(CmpOp op, ExprPtr a, ExprPtr b) {
  auto e = make2(ExprKind::Cmp, std::move(a), std::move(b));
  std::const_pointer_cast<Expr>(e)->cmp_op = op;
  return e;
}

ExprPtr Expr::logical_and(ExprPtr a, ExprPtr b) { return make2(ExprKind::And, std::move(a), std::move(b)); }
ExprPtr Expr::logical_or(ExprPtr a, ExprPtr b) { return make2(ExprKind::Or, std::move(a), std::move(b)); }

ExprPtr Expr::logical_not(ExprPtr a) {
  auto e = make(ExprKind::Not);
  std::const_pointer_cast<Expr>(e)->kids = {std::move(a)};
  return e;
}

namespace {

inline int resolve(int var, const EvalEnv& env) {
  return env.binding.empty() ? var : env.binding[static_cast<size_t>(var)];
}

}  // namespace

std::int64_t eval_int(const Expr& e, const EvalEnv& env) {
  switch (e.kind) {
    case ExprKind::IntConst: return e.value;
    case ExprKind::VarRef: return env.values[static_cast<size_t>(resolve(e.var, env))];
    case ExprKind::CapOf: return env.caps[static_cast<size_t>(resolve(e.var, env))];
    case ExprKind::SumAll: {
      std::int64_t s = 0;
      for (int v : env.values) s += v;
      return s;
    }
    case ExprKind::Add: return eval_int(*e.kids[0], env) + eval_int(*e.kids[1], env);
    case ExprKind::Sub: return eval_int(*e.kids[0], env) - eval_int(*e.kids[1], env);
    case ExprKind::Min: return std::min(eval_int(*e.kids[0], env), eval_int(*e.kids[1], env));
    case ExprKind::Max: return std::max(eval_int(*e.kids[0], env), eval_int(*e.kids[1], env));
    default: throw std::invalid_argument("eval_int on boolean expression");
  }
}

bool eval_bool(const Expr& e, const EvalEnv& env) {
  switch (e.kind) {
    case ExprKind::Cmp: {
      std::int64_t a = eval_int(*e.kids[0], env);
      std::int64_t b = eval_int(*e.kids[1], env);
      switch (e.cmp_op) {
        case CmpOp::Eq: return a == b;
        case CmpOp::Ne: return a != b;
        case CmpOp::Lt: return a < b;
        case CmpOp::Le: return a <= b;
        case CmpOp::Gt: return a > b;
        case CmpOp::Ge: return a >= b;
      }
      return false;
    }
    case ExprKind::And: return eval_bool(*e.kids[0], env) && eval_bool(*e.kids[1], env);
    case ExprKind::Or: return eval_bool(*e.kids[0], env) || eval_bool(*e.kids[1], env);
    case ExprKind::Not: return !eval_bool(*e.kids[0], env);
    default: throw std::invalid_argument("eval_bool on integer expression");
  }
}

ExprType type_of(const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntConst:
    case ExprKind::VarRef:
    case ExprKind::CapOf:
    case ExprKind::SumAll:
      return ExprType::Int;
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Min:
    case ExprKind::Max:
      if (type_of(*e.kids[0]) != ExprType::Int || type_of(*e.kids[1]) != ExprType::Int)
        throw std::invalid_argument("arithmetic on boolean operand");
      return ExprType::Int;
    case ExprKind::Cmp:
      if (type_of(*e.kids[0]) != ExprType::Int || type_of(*e.kids[1]) != ExprType::Int)
        throw std::invalid_argument("comparison on boolean operand");
      return ExprType::Bool;
    case ExprKind::And:
    case ExprKind::Or:
      if (type_of(*e.kids[0]) != ExprType::Bool || type_of(*e.kids[1]) != ExprType::Bool)
        throw std::invalid_argument("logical connective on integer operand");
      return ExprType::Bool;
    case ExprKind::Not:
      if (type_of(*e.kids[0]) != ExprType::Bool)
        throw std::invalid_argument("not on integer operand");
      return ExprType::Bool;
  }
  throw std::invalid_argument("unknown expression kind");
}

int expr_depth(const Expr& e) {
  int d = 0;
  for (const auto& k : e.kids) d = std::max(d, expr_depth(*k));
  return d + 1;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::IntConst:
      if (a.value != b.value) return false;
      break;
    case ExprKind::VarRef:
    case ExprKind::CapOf:
      if (a.var != b.var) return false;
      break;
    case ExprKind::Cmp:
      if (a.cmp_op != b.cmp_op) return false;
      break;
    default: break;
  }
  if (a.kids.size() != b.kids.size()) return false;
  for (size_t i = 0; i < a.kids.size(); i++)
    if (!expr_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

std::uint64_t expr_hash(const Expr& e, std::uint64_t seed) {
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  };
  std::uint64_t h = mix(seed, static_cast<std::uint64_t>(e.kind));
  h = mix(h, static_cast<std::uint64_t>(e.value));
  h = mix(h, static_cast<std::uint64_t>(e.var + 1));
  h = mix(h, static_cast<std::uint64_t>(e.cmp_op));
  for (const auto& k : e.kids) h = expr_hash(*k, h);
  return h;
}

namespace {

// Higher binds tighter. Or=1, And=2, Not=3, Cmp=4, Add/Sub=5, atoms=6.
int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Or: return 1;
    case ExprKind::And: return 2;
    case ExprKind::Not: return 3;
    case ExprKind::Cmp: return 4;
    case ExprKind::Add:
    case ExprKind::Sub: return 5;
    default: return 6;
  }
}

const char* cmp_token(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Ne: return "!=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "=";
}

void fmt(const Expr& e, std::span<const std::string> names, std::string& out);

// Child of a binary operator: parenthesize when the child binds no tighter
// than the parent, except a left child at the same level (left association).
void fmt_child(const Expr& child, const Expr& parent, bool left,
               std::span<const std::string> names, std::string& out) {
  int pc = precedence(child);
  int pp = precedence(parent);
  bool parens = pc < pp || (pc == pp && !left);
  if (parens) out += '(';
  fmt(child, names, out);
  if (parens) out += ')';
}

void fmt(const Expr& e, std::span<const std::string> names, std::string& out) {
  switch (e.kind) {
    case ExprKind::IntConst: out += std::to_string(e.value); return;
    case ExprKind::VarRef: out += names[static_cast<size_t>(e.var)]; return;
    case ExprKind::CapOf:
      out += "cap(";
      out += names[static_cast<size_t>(e.var)];
      out += ')';
      return;
    case ExprKind::SumAll: out += "sum()"; return;
    case ExprKind::Add:
    case ExprKind::Sub:
      fmt_child(*e.kids[0], e, true, names, out);
      out += e.kind == ExprKind::Add ? " + " : " - ";
      fmt_child(*e.kids[1], e, false, names, out);
      return;
    case ExprKind::Min:
    case ExprKind::Max:
      out += e.kind == ExprKind::Min ? "min(" : "max(";
      fmt(*e.kids[0], names, out);
      out += ", ";
      fmt(*e.kids[1], names, out);
      out += ')';
      return;
    case ExprKind::Cmp:
      fmt_child(*e.kids[0], e, true, names, out);
      out += ' ';
      out += cmp_token(e.cmp_op);
      out += ' ';
      fmt_child(*e.kids[1], e, false, names, out);
      return;
    case ExprKind::And:
      fmt_child(*e.kids[0], e, true, names, out);
      out += " and ";
      fmt_child(*e.kids[1], e, false, names, out);
      return;
    case ExprKind::Or:
      fmt_child(*e.kids[0], e, true, names, out);
      out += " or ";
      fmt_child(*e.kids[1], e, false, names, out);
      return;
    case ExprKind::Not: {
      const Expr& k = *e.kids[0];
      out += "not ";
      bool parens = precedence(k) <= precedence(e) && k.kind != ExprKind::Not;
      if (parens) out += '(';
      fmt(k, names, out);
      if (parens) out += ')';
      return;
    }
  }
}

}  // namespace

std::string format_expr(const Expr& e, std::span<const std::string> names) {
  std::string out;
  fmt(e, names, out);
  return out;
}

}  // namespace pspace
