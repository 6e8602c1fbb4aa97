#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pspace/prompts.hpp"

namespace pspace {

struct TranscriptNode {
  NodeId id = NodeId::Characterize;
  std::string prompt;
  std::string response;
  std::string started_at;   // ISO-8601 UTC, empty in fixtures
  std::string finished_at;
  std::optional<long long> prompt_tokens;
  std::optional<long long> completion_tokens;

  bool operator==(const TranscriptNode&) const = default;
};

// Record of one pipeline (or single-shot) run. Replay fixture files use the
// same shape; their `response` fields drive the replay transport.
struct Transcript {
  std::string run_id;
  std::string problem_label;
  std::string model_id;
  double temperature = 0.0;
  bool complete = false;
  std::vector<TranscriptNode> nodes;

  bool operator==(const Transcript&) const = default;

  // First node with the given id, or nullptr.
  const TranscriptNode* find(NodeId id) const;
};

std::string transcript_to_json(const Transcript& t);
Transcript transcript_from_json(const std::string& json_text);  // throws std::runtime_error

void save_transcript(const Transcript& t, const std::string& path);
Transcript load_transcript(const std::string& path);

// Current time as ISO-8601 UTC ("2026-01-02T03:04:05Z").
std::string iso8601_now();

}  // namespace pspace
