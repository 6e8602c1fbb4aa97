#pragma once

#include <string>
#include <vector>

namespace pspace {

// Analysis nodes of the formulation pipeline, in execution order, plus the
// single-shot and extraction nodes. ProblemSolvingCharacteristics is a
// reserved id for an analysis stage that is not implemented; the sequencer
// rejects it.
enum class NodeId {
  Characterize,
  RefineCharacterization,
  Operators,
  RefineOperators,
  SearchControl,
  TestCases,
  OneShotFormulate,
  OneShotSolve,
  ExtractSpec,
  ProblemSolvingCharacteristics,
};

inline constexpr NodeId kPipelineNodes[] = {
    NodeId::Characterize, NodeId::RefineCharacterization, NodeId::Operators,
    NodeId::RefineOperators, NodeId::SearchControl, NodeId::TestCases,
};

const char* node_name(NodeId id);
// Throws std::invalid_argument on an unknown name.
NodeId node_from_name(const std::string& name);

// Fixed prompt texts. These are the exact strings the agents run with,
// including their historical typos; tests pin them byte-for-byte.
const std::string& general_system_prompt();
const std::string& closing_line();
const std::string& analysis_instructions(NodeId id);  // throws for non-analysis ids
const std::string& oneshot_solver_preamble();
const std::string& oneshot_formulate_instruction();

// Full prompt text for an analysis node: the general system prompt, the
// specific problem, every prior response in node order, the node's
// instructions and the closing line, joined by single newlines. Throws
// std::invalid_argument on an empty problem description or a reserved node.
std::string render_prompt(NodeId id, const std::string& problem_description,
                          const std::vector<std::string>& prior_responses);

std::string render_oneshot_solve_prompt(const std::string& problem_description);
std::string render_oneshot_formulate_prompt(const std::string& problem_description);

}  // namespace pspace
