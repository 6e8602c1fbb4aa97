#include "pspace/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace pspace {

int ProblemSpace::var_index(std::string_view name) const {
  for (size_t i = 0; i < vars.size(); i++)
    if (vars[i].name == name) return static_cast<int>(i);
  return -1;
}

std::vector<int> ProblemSpace::capacities() const {
  std::vector<int> caps(vars.size());
  for (size_t i = 0; i < vars.size(); i++) caps[i] = vars[i].capacity;
  return caps;
}

std::vector<std::string> ProblemSpace::var_names() const {
  std::vector<std::string> names(vars.size());
  for (size_t i = 0; i < vars.size(); i++) names[i] = vars[i].name;
  return names;
}

namespace {

void enumerate_bindings(const ProblemSpace& space, int schema_index,
                        std::vector<int>& binding, std::vector<GroundOperator>& out) {
  const OperatorSchema& schema = space.schemas[static_cast<size_t>(schema_index)];
  if (binding.size() == schema.params.size()) {
    GroundOperator op;
    op.schema = schema_index;
    op.binding = binding;
    op.display = schema.name + "(";
    for (size_t i = 0; i < binding.size(); i++) {
      if (i) op.display += ",";
      op.display += space.vars[static_cast<size_t>(binding[i])].name;
    }
    op.display += ")";
    out.push_back(std::move(op));
    return;
  }
  for (size_t v = 0; v < space.vars.size(); v++) {
    int vi = static_cast<int>(v);
    if (std::find(binding.begin(), binding.end(), vi) != binding.end()) continue;
    binding.push_back(vi);
    enumerate_bindings(space, schema_index, binding, out);
    binding.pop_back();
  }
}

}  // namespace

std::vector<GroundOperator> ground_operators(const ProblemSpace& space) {
  std::vector<GroundOperator> ops;
  std::vector<int> binding;
  for (size_t s = 0; s < space.schemas.size(); s++)
    enumerate_bindings(space, static_cast<int>(s), binding, ops);
  std::sort(ops.begin(), ops.end(),
            [](const GroundOperator& a, const GroundOperator& b) { return a.display < b.display; });
  return ops;
}

bool applicable(const ProblemSpace& space, const GroundOperator& op,
                std::span<const int> state) {
  const OperatorSchema& schema = space.schemas[static_cast<size_t>(op.schema)];
  thread_local std::vector<int> caps;
  caps.clear();
  for (const VarSpec& v : space.vars) caps.push_back(v.capacity);
  EvalEnv env{state, caps, op.binding};
  return eval_bool(*schema.precondition, env);
}

void apply_unchecked(const ProblemSpace& space, const GroundOperator& op,
                     std::span<const int> state, std::span<int> out) {
  const OperatorSchema& schema = space.schemas[static_cast<size_t>(op.schema)];
  thread_local std::vector<int> caps;
  caps.clear();
  for (const VarSpec& v : space.vars) caps.push_back(v.capacity);
  EvalEnv env{state, caps, op.binding};
  std::copy(state.begin(), state.end(), out.begin());
  // Effects read the pre-state; `state` and `out` must not alias.
  for (const auto& [slot, rhs] : schema.effects) {
    int target = op.binding[static_cast<size_t>(slot)];
    out[static_cast<size_t>(target)] = static_cast<int>(eval_int(*rhs, env));
  }
}

StateVector apply(const ProblemSpace& space, const GroundOperator& op,
                  const StateVector& state) {
  if (!applicable(space, op, state.values))
    throw std::logic_error("apply: operator " + op.display + " not applicable");
  StateVector next;
  next.values.resize(state.values.size());
  apply_unchecked(space, op, state.values, next.values);
  return next;
}

StateClass classify(const ProblemSpace& space, const ProblemInstance& instance,
                    std::span<const int> state, bool failure_detection) {
  thread_local std::vector<int> caps;
  caps.clear();
  for (const VarSpec& v : space.vars) caps.push_back(v.capacity);
  EvalEnv env{state, caps};
  if (instance.goal && eval_bool(*instance.goal, env)) return StateClass::Goal;
  if (failure_detection && space.failure && eval_bool(*space.failure, env))
    return StateClass::Failure;
  return StateClass::Ongoing;
}

std::uint64_t space_fingerprint(const ProblemSpace& space, const ExprPtr& goal,
                                bool failure_detection, bool path_constraints) {
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  };
  std::uint64_t h = 0x243f6a8885a308d3ull;
  for (const VarSpec& v : space.vars) {
    for (char c : v.name) h = mix(h, static_cast<unsigned char>(c));
    h = mix(h, static_cast<std::uint64_t>(v.capacity));
  }
  for (const OperatorSchema& s : space.schemas) {
    for (char c : s.name) h = mix(h, static_cast<unsigned char>(c));
    h = mix(h, s.params.size());
    h = expr_hash(*s.precondition, h);
    for (const auto& [slot, rhs] : s.effects) {
      h = mix(h, static_cast<std::uint64_t>(slot));
      h = expr_hash(*rhs, h);
    }
  }
  h = mix(h, space.no_undo ? 3 : 5);
  h = mix(h, space.no_loop ? 7 : 11);
  if (space.failure) h = expr_hash(*space.failure, h);
  if (goal) h = expr_hash(*goal, h);
  h = mix(h, failure_detection ? 13 : 17);
  h = mix(h, path_constraints ? 19 : 23);
  return h;
}

}  // namespace pspace
