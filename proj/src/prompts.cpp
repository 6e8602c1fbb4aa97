#include "pspace/prompts.hpp"

#include <stdexcept>

namespace pspace {

// The prompt constants below are frozen: spacing, line breaks and spelling
// (including "operaetor", "corect", "identfying", "ambigious") are part of
// the recorded agent behavior and must not be edited.

namespace {

const std::string kGeneralSystemPrompt =
    "You are an expert in cognitive task analysis. "
    "You are helping to design a reasoner/problem solver that can solve many different instances of a class of problem. "
    "Problems are defined in 1-2 paragraphs. There will be a specific example problem provided. "
    "However,  your responses should focus creating a general formulation of the problem space, not a problem space specific to the example only. "
    "Focus each response on the most recent, specific question asked of you. "
    "The questions are designed to break the problem-space formulation into a set of discrete steps. "
    "Unless otherwise directed, be concise in each response (i.e., respond in one sentence or expression).\n"
    "\n"
    "Use these definitions:\n"
    "Problem Space: A problem space consists a set of symbolic structures (the states of the space) and a set of operators over the space. "
    "Each operator takes a state as input and produces a state as output (although there may be other inputs and outputs as well). "
    "The operators may be partial (i.e., not defined for all states). Sequences of operators define paths that thread their way through sequences of states. \n"
    "         \n"
    "Problem: A problem in a problem space consists of a set of initial states, a set of goal states, and a set of path constraints. "
    "The problem is to find a path through the space that starts at the initial state, passes only along paths that satisfy the path constraints, and ends at any goal state. ";

const std::string kClosingLine =
    "LIMIT YOUR RESPONSE TO THIS QUESTION ONLY/ASPECT OF ANALYSIS.";

const std::string kCharacterize =
    "For this response, focus on characterizing the problem itself. "
    "What is the initial state? "
    "What is the final state? "
    "Are there illegal / impossible states that are not allowed for this problem? If so, identify them.\n"
    "Use formal notation and/or mathematical expressions if/as possible to characterize the problem. Be concise.";

const std::string kRefineCharacterization =
    "You are an expert in Cognitive Task Analysis and specialize in reviewing the work of other analysts. "
    "Given the PROBLEM DESCRIPTION and the previous response characterizing the problem, improve the prior problem characterization."
    "Are elements incorrect? If so, correct them. "
    "Are elements missing? If so, add them. Focus on problem characterization only (specifications of states). We will ask about actions and path constraints later. "
    "Are elements poorly formed or ambigious? Replace qualitative terms such as 'less' or 'more' with specific expressions that reflect quantitative values. "
    "Respond with a revised problem characterization that reflects your analysis. "
    "Use formal notation and/or mathematical expressions to characterize the problem. ";

const std::string kOperators =
    "For this response, focus on characterizing the problem space that could be used to solve various instances of the problem. "
    "What actions/operators are relevant?\n"
    "What are the preconditions for each operator?\n"
    "What are the effects or postconditions of each operaetor?\n"
    "Use formal notation and/or mathematical expressions if/as possible to characterize the problem space. Be concise.";

const std::string kRefineOperators =
    "You are an expert in Cognitive Task Analysis and specialize in reviewing the work of other analysts."
    "Given the PROBLEM DESCRIPTION and the previous AI response characterizing the problem, your task is to improve the problem space characterization."
    "Does the set of operators appear complete? If not, suggest additional operators.\n"
    "Are the preconditions for each operator correct? If not, corect them. \n"
    "Are the postconditions for each operator correct? If not, corect them. \n"
    "Focus on problem space characterization only (specifications of operators) rather than the state specification.\n"
    "Respond with a revised problem space characterization (operators with pre- and post-conditions) that reflects your analysis. "
    "Use formal notation and/or mathematical expressions to characterize the problem space.";

const std::string kSearchControl =
    "The solution to this problem will be solved by a search from the initial state to the goal state using the operators specified thus far."
    "Search can be made more efficient by identfying unproductive paths such as loops and dead-ends. Your task is to identify/specify these. \n"
    "What are undesirable states? For example, generating a state that is identical to the initial state is often not a productive step.\n"
    "What are undesirable sequences of operator applications? For example, an operator sequence that undoes the action of the immediately previous operator is often not desirable."
    "Use formal notation and/or mathematical expressions to characterize any undesirable states or operator sequences.";

const std::string kTestCases =
    "You are an expert in Cognitive Task Analysis and specialize in identifying new problem instances."
    "Given the PROBLEM DESCRIPTION and the previous AI responses characterizing the problem and problem space, "
    "your task is to identify specific cases that test/evaluate the problem space."
    "Create three use cases. Number each case. For each case, specify the initial state and goal state using the notation from the problem characterization \n"
    "and describe (in one short sentence) why this is an apt test case for the problem space."
    "Emphasize the generation of \"edge\" cases that test assumptions in the problem space.";

const std::string kOneShotSolverPreamble =
    "You are an expert problem solver with years of experience solving many different types of puzzles. What is your solution for this problem?";

const std::string kOneShotFormulateInstruction =
    "Produce a problem space formulation for the general problem, specifying initial and goal states, operators, "
    "and preconditions and postconditions for each operator. Identify any illegal or undesirable states. Introduce and use notation for describing states and operators.";

}  // namespace

const char* node_name(NodeId id) {
  switch (id) {
    case NodeId::Characterize: return "Characterize";
    case NodeId::RefineCharacterization: return "RefineCharacterization";
    case NodeId::Operators: return "Operators";
    case NodeId::RefineOperators: return "RefineOperators";
    case NodeId::SearchControl: return "SearchControl";
    case NodeId::TestCases: return "TestCases";
    case NodeId::OneShotFormulate: return "OneShotFormulate";
    case NodeId::OneShotSolve: return "OneShotSolve";
    case NodeId::ExtractSpec: return "ExtractSpec";
    case NodeId::ProblemSolvingCharacteristics: return "ProblemSolvingCharacteristics";
  }
  return "?";
}

NodeId node_from_name(const std::string& name) {
  for (NodeId id : {NodeId::Characterize, NodeId::RefineCharacterization, NodeId::Operators,
                    NodeId::RefineOperators, NodeId::SearchControl, NodeId::TestCases,
                    NodeId::OneShotFormulate, NodeId::OneShotSolve, NodeId::ExtractSpec,
                    NodeId::ProblemSolvingCharacteristics})
    if (name == node_name(id)) return id;
  throw std::invalid_argument("unknown node id: " + name);
}

const std::string& general_system_prompt() { return kGeneralSystemPrompt; }
const std::string& closing_line() { return kClosingLine; }

const std::string& analysis_instructions(NodeId id) {
  switch (id) {
    case NodeId::Characterize: return kCharacterize;
    case NodeId::RefineCharacterization: return kRefineCharacterization;
    case NodeId::Operators: return kOperators;
    case NodeId::RefineOperators: return kRefineOperators;
    case NodeId::SearchControl: return kSearchControl;
    case NodeId::TestCases: return kTestCases;
    case NodeId::ProblemSolvingCharacteristics:
      throw std::invalid_argument(
          "node ProblemSolvingCharacteristics is reserved and not implemented");
    default:
      throw std::invalid_argument(std::string("node ") + node_name(id) +
                                  " has no analysis instructions");
  }
}

const std::string& oneshot_solver_preamble() { return kOneShotSolverPreamble; }
const std::string& oneshot_formulate_instruction() { return kOneShotFormulateInstruction; }

std::string render_prompt(NodeId id, const std::string& problem_description,
                          const std::vector<std::string>& prior_responses) {
  if (problem_description.empty())
    throw std::invalid_argument("render_prompt: empty problem description");
  const std::string& instructions = analysis_instructions(id);  // rejects reserved ids
  std::string out = kGeneralSystemPrompt;
  out += "\nSPECIFIC PROBLEM:\n";
  out += problem_description;
  for (const std::string& prior : prior_responses) {
    out += '\n';
    out += prior;
  }
  out += '\n';
  out += instructions;
  out += '\n';
  out += kClosingLine;
  return out;
}

std::string render_oneshot_solve_prompt(const std::string& problem_description) {
  if (problem_description.empty())
    throw std::invalid_argument("render_oneshot_solve_prompt: empty problem description");
  return kOneShotSolverPreamble + "\n\nSPECIFIC PROBLEM:\n" + problem_description +
         "\n\nThink step-by-step in producing a response.";
}

std::string render_oneshot_formulate_prompt(const std::string& problem_description) {
  if (problem_description.empty())
    throw std::invalid_argument("render_oneshot_formulate_prompt: empty problem description");
  return kGeneralSystemPrompt + "\nSPECIFIC PROBLEM:\n" + problem_description + "\n" +
         kOneShotFormulateInstruction;
}

}  // namespace pspace
