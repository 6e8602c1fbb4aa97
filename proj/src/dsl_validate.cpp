#include <queue>
#include <unordered_set>

#include "pspace/dsl.hpp"

namespace pspace {

namespace {

// Enumeration guard: spaces larger than this skip the exhaustive checks.
constexpr long long kMaxEnumStates = 2000000;

long long state_count(const ProblemSpace& sp) {
  long long n = 1;
  for (const VarSpec& v : sp.vars) {
    n *= v.capacity + 1;
    if (n > kMaxEnumStates) return -1;
  }
  return n;
}

// Iterates every in-bounds state, calling fn(state); returns false when the
// space is too large to enumerate.
template <typename Fn>
bool for_each_state(const ProblemSpace& sp, Fn&& fn) {
  if (state_count(sp) < 0) return false;
  std::vector<int> s(sp.vars.size(), 0);
  for (;;) {
    fn(std::span<const int>(s));
    size_t i = 0;
    while (i < s.size()) {
      if (s[i] < sp.vars[i].capacity) { s[i]++; break; }
      s[i] = 0;
      i++;
    }
    if (i == s.size()) return true;
  }
}

}  // namespace

const char* finding_kind_name(FindingKind kind) {
  switch (kind) {
    case FindingKind::MissingGoal: return "missing-goal";
    case FindingKind::UnsatisfiablePrecondition: return "unsatisfiable-precondition";
    case FindingKind::VarNeverWritten: return "var-never-written";
    case FindingKind::FailureSubsumesGoal: return "failure-subsumes-goal";
    case FindingKind::UnreachableGoal: return "unreachable-goal";
  }
  return "?";
}

std::vector<Finding> validate_spec(const SpecDocument& doc) {
  std::vector<Finding> findings;
  const ProblemSpace& sp = doc.space;
  std::vector<GroundOperator> ops = ground_operators(sp);

  for (const ProblemInstance& inst : doc.instances)
    if (!inst.goal)
      findings.push_back({FindingKind::MissingGoal, true, inst.label,
                          "instance '" + inst.label + "' has no goal expression"});

  // A schema is dead when no grounding is applicable in any in-bounds state.
  for (size_t si = 0; si < sp.schemas.size(); si++) {
    bool satisfiable = false;
    bool enumerated = for_each_state(sp, [&](std::span<const int> s) {
      if (satisfiable) return;
      for (const GroundOperator& op : ops)
        if (op.schema == static_cast<int>(si) && applicable(sp, op, s)) {
          satisfiable = true;
          return;
        }
    });
    if (enumerated && !satisfiable)
      findings.push_back({FindingKind::UnsatisfiablePrecondition, true, sp.schemas[si].name,
                          "operator '" + sp.schemas[si].name +
                              "' is applicable in no in-bounds state"});
  }

  for (size_t vi = 0; vi < sp.vars.size(); vi++) {
    bool written = false;
    for (const GroundOperator& op : ops)
      for (const auto& [slot, _] : sp.schemas[static_cast<size_t>(op.schema)].effects)
        if (op.binding[static_cast<size_t>(slot)] == static_cast<int>(vi)) written = true;
    if (!written)
      findings.push_back({FindingKind::VarNeverWritten, false, sp.vars[vi].name,
                          "variable '" + sp.vars[vi].name + "' is never written by any operator"});
  }

  for (const ProblemInstance& inst : doc.instances) {
    if (!inst.goal) continue;
    if (sp.failure) {
      bool goal_seen = false, counterexample = false;
      std::vector<int> caps = sp.capacities();
      bool enumerated = for_each_state(sp, [&](std::span<const int> s) {
        EvalEnv env{s, caps};
        if (!eval_bool(*inst.goal, env)) return;
        goal_seen = true;
        if (!eval_bool(*sp.failure, env)) counterexample = true;
      });
      if (enumerated && goal_seen && !counterexample)
        findings.push_back({FindingKind::FailureSubsumesGoal, false, inst.label,
                            "every goal state of '" + inst.label +
                                "' also satisfies the failure predicate"});
    }

    // Brute-force reachability from the initial state, ignoring path
    // constraints and failure detection (they never remove every route to a
    // reachable state).
    if (state_count(sp) >= 0) {
      std::unordered_set<StateVector, StateHash> seen;
      std::queue<StateVector> frontier;
      seen.insert(inst.initial);
      frontier.push(inst.initial);
      bool reachable = false;
      std::vector<int> caps = sp.capacities();
      {
        EvalEnv env{inst.initial.values, caps};
        reachable = eval_bool(*inst.goal, env);
      }
      std::vector<int> buf(sp.vars.size());
      while (!frontier.empty() && !reachable) {
        StateVector s = std::move(frontier.front());
        frontier.pop();
        for (const GroundOperator& op : ops) {
          if (!applicable(sp, op, s.values)) continue;
          apply_unchecked(sp, op, s.values, buf);
          StateVector t{buf};
          if (!seen.insert(t).second) continue;
          EvalEnv env{t.values, caps};
          if (eval_bool(*inst.goal, env)) { reachable = true; break; }
          frontier.push(std::move(t));
        }
      }
      if (!reachable)
        findings.push_back({FindingKind::UnreachableGoal, false, inst.label,
                            "no reachable state satisfies the goal of '" + inst.label + "'"});
    }
  }

  return findings;
}

}  // namespace pspace
