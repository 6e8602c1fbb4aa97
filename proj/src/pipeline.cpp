#include "pspace/pipeline.hpp"

#include <ctime>

namespace pspace {

namespace {

std::string default_run_id(const std::string& label) {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%d%H%M%S", &tm);
  return (label.empty() ? std::string("run") : label) + "-" + buf;
}

std::string user_turn(NodeId id, const std::string& problem) {
  return "SPECIFIC PROBLEM:\n" + problem + "\n" + analysis_instructions(id) + "\n" +
         closing_line();
}

void persist(PipelineResult& result, const PipelineOptions& options) {
  if (options.transcript_dir.empty()) return;
  std::filesystem::create_directories(options.transcript_dir);
  std::filesystem::path path =
      options.transcript_dir / (result.transcript.run_id + ".transcript.json");
  save_transcript(result.transcript, path.string());
  result.transcript_path = path;
}

PipelineResult run_single_node(NodeId id, const std::string& prompt,
                               std::vector<ChatMessage> messages, LlmTransport& transport,
                               const PipelineOptions& options) {
  PipelineResult result;
  result.transcript.run_id =
      options.run_id.empty() ? default_run_id(options.problem_label) : options.run_id;
  result.transcript.problem_label = options.problem_label;
  result.transcript.model_id = options.model_id;
  result.transcript.temperature = options.temperature;

  TranscriptNode node;
  node.id = id;
  node.prompt = prompt;
  node.started_at = iso8601_now();
  try {
    ChatRequest request{options.model_id, options.temperature, std::move(messages)};
    ChatResponse response = transport.complete(id, request);
    node.finished_at = iso8601_now();
    node.response = response.content;
    node.prompt_tokens = response.prompt_tokens;
    node.completion_tokens = response.completion_tokens;
    result.transcript.nodes.push_back(std::move(node));
    result.transcript.complete = true;
    result.status = RunStatus::Complete;
  } catch (const FixtureMissError& e) {
    result.status = RunStatus::FixtureMiss;
    result.error = e.what();
    result.failed_node = e.node;
  } catch (const TransportError& e) {
    result.status = RunStatus::TransportError;
    result.error = e.what();
    result.failed_node = id;
  }
  persist(result, options);
  return result;
}

}  // namespace

std::vector<ChatMessage> messages_for_node(NodeId id, const std::string& problem_description,
                                           const std::vector<std::string>& prior_responses) {
  std::vector<ChatMessage> messages;
  messages.push_back({"system", general_system_prompt()});
  for (size_t i = 0; i < prior_responses.size(); i++) {
    messages.push_back({"user", user_turn(kPipelineNodes[i], problem_description)});
    messages.push_back({"assistant", prior_responses[i]});
  }
  messages.push_back({"user", user_turn(id, problem_description)});
  return messages;
}

PipelineResult run_pipeline(const std::string& problem_description, LlmTransport& transport,
                            const PipelineOptions& options) {
  PipelineResult result;
  if (problem_description.empty()) {
    result.status = RunStatus::InputError;
    result.error = "empty problem description";
    return result;
  }
  result.transcript.run_id =
      options.run_id.empty() ? default_run_id(options.problem_label) : options.run_id;
  result.transcript.problem_label = options.problem_label;
  result.transcript.model_id = options.model_id;
  result.transcript.temperature = options.temperature;

  std::vector<std::string> priors;
  for (NodeId id : kPipelineNodes) {
    TranscriptNode node;
    node.id = id;
    node.prompt = render_prompt(id, problem_description, priors);
    node.started_at = iso8601_now();
    try {
      ChatRequest request{options.model_id, options.temperature,
                          messages_for_node(id, problem_description, priors)};
      ChatResponse response = transport.complete(id, request);
      node.finished_at = iso8601_now();
      node.response = response.content;
      node.prompt_tokens = response.prompt_tokens;
      node.completion_tokens = response.completion_tokens;
    } catch (const FixtureMissError& e) {
      result.status = RunStatus::FixtureMiss;
      result.error = e.what();
      result.failed_node = e.node;
      persist(result, options);
      return result;
    } catch (const TransportError& e) {
      result.status = RunStatus::TransportError;
      result.error = e.what();
      result.failed_node = id;
      persist(result, options);
      return result;
    }
    priors.push_back(node.response);
    result.transcript.nodes.push_back(std::move(node));
  }
  result.transcript.complete = true;
  result.status = RunStatus::Complete;
  persist(result, options);
  return result;
}

PipelineResult run_oneshot_solve(const std::string& problem_description,
                                 LlmTransport& transport, const PipelineOptions& options) {
  PipelineResult result;
  if (problem_description.empty()) {
    result.status = RunStatus::InputError;
    result.error = "empty problem description";
    return result;
  }
  std::vector<ChatMessage> messages = {
      {"system", oneshot_solver_preamble()},
      {"user", "SPECIFIC PROBLEM:\n" + problem_description +
                   "\n\nThink step-by-step in producing a response."}};
  return run_single_node(NodeId::OneShotSolve,
                         render_oneshot_solve_prompt(problem_description),
                         std::move(messages), transport, options);
}

PipelineResult run_oneshot_formulate(const std::string& problem_description,
                                     LlmTransport& transport, const PipelineOptions& options) {
  PipelineResult result;
  if (problem_description.empty()) {
    result.status = RunStatus::InputError;
    result.error = "empty problem description";
    return result;
  }
  std::vector<ChatMessage> messages = {
      {"system", general_system_prompt()},
      {"user", "SPECIFIC PROBLEM:\n" + problem_description + "\n" +
                   oneshot_formulate_instruction()}};
  return run_single_node(NodeId::OneShotFormulate,
                         render_oneshot_formulate_prompt(problem_description),
                         std::move(messages), transport, options);
}

}  // namespace pspace
