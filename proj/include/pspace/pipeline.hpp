#pragma once

#include <filesystem>

#include "pspace/transport.hpp"

namespace pspace {

inline constexpr const char* kDefaultModelId = "gpt-4-0125-preview";

struct PipelineOptions {
  std::string run_id;         // derived from the label when empty
  std::string problem_label;
  std::string model_id = kDefaultModelId;
  double temperature = 0.0;
  // Transcripts are written here as <run_id>.transcript.json; empty keeps the
  // run in memory only.
  std::filesystem::path transcript_dir;
};

enum class RunStatus { Complete, TransportError, FixtureMiss, InputError };

struct PipelineResult {
  Transcript transcript;
  RunStatus status = RunStatus::Complete;
  std::string error;
  std::optional<NodeId> failed_node;
  std::filesystem::path transcript_path;  // empty when nothing was written

  bool ok() const { return status == RunStatus::Complete; }
};

// Runs the six analysis nodes in order, feeding every prior response into
// each later prompt. A mid-run failure persists the partial transcript with
// complete=false and reports the failing node.
PipelineResult run_pipeline(const std::string& problem_description, LlmTransport& transport,
                            const PipelineOptions& options);

// Single-node runs: the chain-of-thought solver and the one-shot formulator.
PipelineResult run_oneshot_solve(const std::string& problem_description,
                                 LlmTransport& transport, const PipelineOptions& options);
PipelineResult run_oneshot_formulate(const std::string& problem_description,
                                     LlmTransport& transport, const PipelineOptions& options);

// Chat-message view of a node prompt: system turn, then the prior exchange
// as alternating user/assistant turns, then the current user turn.
std::vector<ChatMessage> messages_for_node(NodeId id, const std::string& problem_description,
                                           const std::vector<std::string>& prior_responses);

}  // namespace pspace
