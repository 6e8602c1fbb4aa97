#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace pspace {

// Integer/boolean expression trees shared by operator schemas, goals and
// failure predicates. Trees are immutable and shared; variables are referred
// to by index, resolved against either a schema's parameter slots or a
// space's variable list depending on context.
enum class ExprKind {
  IntConst,
  VarRef,   // value of variable/slot `var`
  CapOf,    // capacity of variable/slot `var`
  SumAll,   // sum of all variable values (never slot-relative)
  Add,
  Sub,
  Min,
  Max,
  Cmp,
  And,
  Or,
  Not,
};

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

enum class ExprType { Int, Bool };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind;
  std::int64_t value = 0;  // IntConst
  int var = -1;            // VarRef / CapOf
  CmpOp cmp_op = CmpOp::Eq;  // Cmp
  std::vector<ExprPtr> kids;

  static ExprPtr int_const(std::int64_t v);
  static ExprPtr var_ref(int index);
  static ExprPtr cap_of(int index);
  static ExprPtr sum_all();
  static ExprPtr add(ExprPtr a, ExprPtr b);
  static ExprPtr sub(ExprPtr a, ExprPtr b);
  static ExprPtr min2(ExprPtr a, ExprPtr b);
  static ExprPtr max2(ExprPtr a, ExprPtr b);
  static ExprPtr cmp(CmpOp op, ExprPtr a, ExprPtr b);
  static ExprPtr logical_and(ExprPtr a, ExprPtr b);
  static ExprPtr logical_or(ExprPtr a, ExprPtr b);
  static ExprPtr logical_not(ExprPtr a);
};

// Evaluation environment. `binding` remaps expression variable indices to
// positions in `values`/`caps` (used for grounded operator schemas); empty
// binding means indices address `values` directly. SumAll always sums the
// whole `values` span.
struct EvalEnv {
  std::span<const int> values;
  std::span<const int> caps;
  std::span<const int> binding = {};
};

std::int64_t eval_int(const Expr& e, const EvalEnv& env);
bool eval_bool(const Expr& e, const EvalEnv& env);

// Type of a tree; throws std::invalid_argument on an ill-typed node so the
// parser can reject before anything evaluates.
ExprType type_of(const Expr& e);

int expr_depth(const Expr& e);
bool expr_equal(const Expr& a, const Expr& b);
std::uint64_t expr_hash(const Expr& e, std::uint64_t seed = 1469598103934665603ull);

// Canonical source form, parenthesized only where precedence requires.
// `names` supplies the identifier for each variable index.
std::string format_expr(const Expr& e, std::span<const std::string> names);

inline constexpr int kMaxExprDepth = 64;

}  // namespace pspace
