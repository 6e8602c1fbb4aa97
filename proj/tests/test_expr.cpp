#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "pspace/expr.hpp"

using namespace pspace;

namespace {

EvalEnv env_of(const std::vector<int>& values, const std::vector<int>& caps,
               const std::vector<int>& binding = {}) {
  EvalEnv env;
  env.values = values;
  env.caps = caps;
  env.binding = binding;
  return env;
}

}  // namespace

TEST_CASE("integer evaluation covers every arithmetic node") {
  std::vector<int> values = {3, 7};
  std::vector<int> caps = {4, 9};
  EvalEnv env = env_of(values, caps);

  CHECK(eval_int(*Expr::int_const(42), env) == 42);
  CHECK(eval_int(*Expr::var_ref(0), env) == 3);
  CHECK(eval_int(*Expr::var_ref(1), env) == 7);
  CHECK(eval_int(*Expr::cap_of(0), env) == 4);
  CHECK(eval_int(*Expr::cap_of(1), env) == 9);
  CHECK(eval_int(*Expr::add(Expr::var_ref(0), Expr::var_ref(1)), env) == 10);
  CHECK(eval_int(*Expr::sub(Expr::cap_of(1), Expr::var_ref(1)), env) == 2);
  CHECK(eval_int(*Expr::min2(Expr::var_ref(0), Expr::var_ref(1)), env) == 3);
  CHECK(eval_int(*Expr::max2(Expr::var_ref(0), Expr::var_ref(1)), env) == 7);
  CHECK(eval_int(*Expr::sum_all(), env) == 10);
}

TEST_CASE("boolean evaluation covers comparisons and connectives") {
  std::vector<int> values = {3, 7};
  std::vector<int> caps = {4, 9};
  EvalEnv env = env_of(values, caps);

  auto v0 = Expr::var_ref(0);
  auto v1 = Expr::var_ref(1);
  CHECK(eval_bool(*Expr::cmp(CmpOp::Eq, v0, Expr::int_const(3)), env));
  CHECK(eval_bool(*Expr::cmp(CmpOp::Ne, v0, v1), env));
  CHECK(eval_bool(*Expr::cmp(CmpOp::Lt, v0, v1), env));
  CHECK(eval_bool(*Expr::cmp(CmpOp::Le, v0, Expr::int_const(3)), env));
  CHECK(eval_bool(*Expr::cmp(CmpOp::Gt, v1, v0), env));
  CHECK(eval_bool(*Expr::cmp(CmpOp::Ge, v1, Expr::int_const(7)), env));
  CHECK_FALSE(eval_bool(*Expr::cmp(CmpOp::Gt, v0, v1), env));

  auto t = Expr::cmp(CmpOp::Eq, Expr::int_const(1), Expr::int_const(1));
  auto f = Expr::cmp(CmpOp::Eq, Expr::int_const(1), Expr::int_const(2));
  CHECK(eval_bool(*Expr::logical_and(t, t), env));
  CHECK_FALSE(eval_bool(*Expr::logical_and(t, f), env));
  CHECK(eval_bool(*Expr::logical_or(f, t), env));
  CHECK_FALSE(eval_bool(*Expr::logical_or(f, f), env));
  CHECK(eval_bool(*Expr::logical_not(f), env));
  CHECK_FALSE(eval_bool(*Expr::logical_not(t), env));
}

TEST_CASE("binding remaps slot indices onto the state") {
  // Slot 0 -> variable 1, slot 1 -> variable 0, as a grounded pour(j9,j4)
  // would bind them.
  std::vector<int> values = {2, 5};
  std::vector<int> caps = {4, 9};
  std::vector<int> binding = {1, 0};
  EvalEnv env = env_of(values, caps, binding);

  CHECK(eval_int(*Expr::var_ref(0), env) == 5);
  CHECK(eval_int(*Expr::var_ref(1), env) == 2);
  CHECK(eval_int(*Expr::cap_of(0), env) == 9);
  CHECK(eval_int(*Expr::cap_of(1), env) == 4);
}

TEST_CASE("sum_all ignores the binding and sums the whole state") {
  std::vector<int> values = {1, 2, 3};
  std::vector<int> caps = {2, 3, 5};
  std::vector<int> binding = {2, 0};  // binary grounding over a 3-var space
  EvalEnv env = env_of(values, caps, binding);

  CHECK(eval_int(*Expr::sum_all(), env) == 6);
}

TEST_CASE("type_of distinguishes int and bool trees") {
  CHECK(type_of(*Expr::int_const(1)) == ExprType::Int);
  CHECK(type_of(*Expr::var_ref(0)) == ExprType::Int);
  CHECK(type_of(*Expr::cap_of(0)) == ExprType::Int);
  CHECK(type_of(*Expr::sum_all()) == ExprType::Int);
  CHECK(type_of(*Expr::add(Expr::var_ref(0), Expr::int_const(1))) == ExprType::Int);
  CHECK(type_of(*Expr::cmp(CmpOp::Lt, Expr::var_ref(0), Expr::cap_of(0))) == ExprType::Bool);
  auto cond = Expr::cmp(CmpOp::Gt, Expr::var_ref(0), Expr::int_const(0));
  CHECK(type_of(*Expr::logical_and(cond, cond)) == ExprType::Bool);
  CHECK(type_of(*Expr::logical_not(cond)) == ExprType::Bool);
}

TEST_CASE("type_of rejects ill-typed trees") {
  auto cond = Expr::cmp(CmpOp::Gt, Expr::var_ref(0), Expr::int_const(0));
  auto num = Expr::var_ref(0);
  CHECK_THROWS_AS((void)type_of(*Expr::add(cond, num)), std::invalid_argument);
  CHECK_THROWS_AS((void)type_of(*Expr::min2(num, cond)), std::invalid_argument);
  CHECK_THROWS_AS((void)type_of(*Expr::cmp(CmpOp::Eq, cond, num)), std::invalid_argument);
  CHECK_THROWS_AS((void)type_of(*Expr::logical_and(num, cond)), std::invalid_argument);
  CHECK_THROWS_AS((void)type_of(*Expr::logical_or(cond, num)), std::invalid_argument);
  CHECK_THROWS_AS((void)type_of(*Expr::logical_not(num)), std::invalid_argument);
}

TEST_CASE("format_expr renders with minimal parentheses") {
  std::vector<std::string> names = {"j4", "j9"};
  auto v0 = Expr::var_ref(0);
  auto v1 = Expr::var_ref(1);

  CHECK(format_expr(*Expr::int_const(6), names) == "6");
  CHECK(format_expr(*v0, names) == "j4");
  CHECK(format_expr(*Expr::cap_of(1), names) == "cap(j9)");
  CHECK(format_expr(*Expr::sum_all(), names) == "sum()");
  CHECK(format_expr(*Expr::add(v0, v1), names) == "j4 + j9");
  // Left-assoc chains need no parens; right nesting of - does.
  CHECK(format_expr(*Expr::sub(Expr::sub(v0, v1), Expr::int_const(1)), names) ==
        "j4 - j9 - 1");
  CHECK(format_expr(*Expr::sub(v0, Expr::sub(v1, Expr::int_const(1))), names) ==
        "j4 - (j9 - 1)");
  CHECK(format_expr(*Expr::min2(v0, Expr::add(v1, Expr::int_const(1))), names) ==
        "min(j4, j9 + 1)");
  CHECK(format_expr(*Expr::max2(Expr::int_const(0),
                                Expr::sub(v0, Expr::sub(Expr::cap_of(1), v1))),
                    names) == "max(0, j4 - (cap(j9) - j9))");

  auto a = Expr::cmp(CmpOp::Eq, v0, Expr::int_const(6));
  auto b = Expr::cmp(CmpOp::Eq, v1, Expr::int_const(6));
  auto c = Expr::cmp(CmpOp::Gt, v0, Expr::int_const(0));
  CHECK(format_expr(*a, names) == "j4 = 6");
  CHECK(format_expr(*Expr::cmp(CmpOp::Ne, v0, v1), names) == "j4 != j9");
  CHECK(format_expr(*Expr::cmp(CmpOp::Le, v0, Expr::cap_of(0)), names) == "j4 <= cap(j4)");
  CHECK(format_expr(*Expr::logical_or(a, b), names) == "j4 = 6 or j9 = 6");
  // and binds tighter than or: the or-inside-and side needs parens.
  CHECK(format_expr(*Expr::logical_and(Expr::logical_or(a, b), c), names) ==
        "(j4 = 6 or j9 = 6) and j4 > 0");
  CHECK(format_expr(*Expr::logical_or(Expr::logical_and(a, c), b), names) ==
        "j4 = 6 and j4 > 0 or j9 = 6");
  CHECK(format_expr(*Expr::logical_not(a), names) == "not j4 = 6");
  CHECK(format_expr(*Expr::logical_not(Expr::logical_and(a, b)), names) ==
        "not (j4 = 6 and j9 = 6)");
}

TEST_CASE("expr_equal and expr_hash agree on structural identity") {
  auto make = [] {
    return Expr::logical_or(
        Expr::cmp(CmpOp::Eq, Expr::var_ref(0), Expr::int_const(6)),
        Expr::cmp(CmpOp::Eq, Expr::var_ref(1), Expr::int_const(6)));
  };
  auto a = make();
  auto b = make();
  CHECK(expr_equal(*a, *b));
  CHECK(expr_hash(*a) == expr_hash(*b));

  auto c = Expr::logical_or(
      Expr::cmp(CmpOp::Eq, Expr::var_ref(0), Expr::int_const(6)),
      Expr::cmp(CmpOp::Eq, Expr::var_ref(1), Expr::int_const(7)));
  CHECK_FALSE(expr_equal(*a, *c));
  CHECK(expr_hash(*a) != expr_hash(*c));

  // Same shape, different comparison op.
  auto lt = Expr::cmp(CmpOp::Lt, Expr::var_ref(0), Expr::int_const(6));
  auto le = Expr::cmp(CmpOp::Le, Expr::var_ref(0), Expr::int_const(6));
  CHECK_FALSE(expr_equal(*lt, *le));
  CHECK(expr_hash(*lt) != expr_hash(*le));
}

TEST_CASE("expr_depth counts the longest path") {
  CHECK(expr_depth(*Expr::int_const(0)) == 1);
  CHECK(expr_depth(*Expr::add(Expr::var_ref(0), Expr::int_const(1))) == 2);
  auto deep = Expr::max2(
      Expr::int_const(0),
      Expr::sub(Expr::var_ref(0), Expr::sub(Expr::cap_of(1), Expr::var_ref(1))));
  CHECK(expr_depth(*deep) == 4);
  CHECK(kMaxExprDepth == 64);
}
