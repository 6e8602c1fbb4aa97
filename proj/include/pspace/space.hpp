#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pspace/expr.hpp"

namespace pspace {

struct VarSpec {
  std::string name;
  int capacity = 0;        // values range over 0..capacity inclusive
  std::string unit_label;  // optional, empty when unspecified

  bool operator==(const VarSpec&) const = default;
};

// A state is one integer per declared variable, in declaration order.
struct StateVector {
  std::vector<int> values;

  bool operator==(const StateVector&) const = default;
};

struct StateHash {
  std::size_t operator()(const StateVector& s) const {
    std::uint64_t h = 1469598103934665603ull;
    for (int v : s.values) {
      h ^= static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
  }
};

// Operator schema over parameter slots. Expressions index slots; effects
// assign `slot := expr` and are evaluated simultaneously against the
// pre-state. Slots bind to pairwise-distinct variables when grounded.
struct OperatorSchema {
  std::string name;
  std::vector<std::string> params;
  ExprPtr precondition;
  std::vector<std::pair<int, ExprPtr>> effects;
};

struct GroundOperator {
  int schema = -1;
  std::vector<int> binding;  // slot index -> variable index
  std::string display;       // canonical name, e.g. pour(j9,j4)
};

enum class PathConstraint { NoUndo, NoLoopOnPath };

struct ProblemSpace {
  std::string name;
  std::vector<VarSpec> vars;
  std::vector<OperatorSchema> schemas;
  bool no_undo = false;
  bool no_loop = false;
  ExprPtr failure;  // boolean over variables; null when not declared

  int var_index(std::string_view name) const;  // -1 when unknown
  std::vector<int> capacities() const;
  std::vector<std::string> var_names() const;
};

struct ProblemInstance {
  std::string label;
  StateVector initial;
  ExprPtr goal;  // boolean over variables; null only in malformed documents
};

enum class StateClass { Goal, Failure, Ongoing };

// All groundings of all schemas, sorted by display name. Unary schemas
// ground once per variable, binary ones once per ordered pair of distinct
// variables (and so on for higher arities).
std::vector<GroundOperator> ground_operators(const ProblemSpace& space);

bool applicable(const ProblemSpace& space, const GroundOperator& op,
                std::span<const int> state);

// Successor state; throws std::logic_error when the operator is not
// applicable in `state`.
StateVector apply(const ProblemSpace& space, const GroundOperator& op,
                  const StateVector& state);

// In-place variant used by the search hot path; no applicability check.
void apply_unchecked(const ProblemSpace& space, const GroundOperator& op,
                     std::span<const int> state, std::span<int> out);

// Goal dominates Failure; Failure only reported when failure_detection.
StateClass classify(const ProblemSpace& space, const ProblemInstance& instance,
                    std::span<const int> state, bool failure_detection);

// Structural fingerprint of space + goal + constraint configuration; used to
// guard persistent evaluation caches against reuse across problems.
std::uint64_t space_fingerprint(const ProblemSpace& space, const ExprPtr& goal,
                                bool failure_detection, bool path_constraints);

}  // namespace pspace
