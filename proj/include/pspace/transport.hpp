#pragma once

#include <atomic>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "pspace/transcript.hpp"

namespace pspace {

struct ChatMessage {
  std::string role;  // "system" | "user" | "assistant"
  std::string content;
};

struct ChatRequest {
  std::string model;
  double temperature = 0.0;
  std::vector<ChatMessage> messages;
};

struct ChatResponse {
  std::string content;
  std::optional<long long> prompt_tokens;
  std::optional<long long> completion_tokens;
};

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by the replay transport when a fixture has no response queued for
// the requested node.
struct FixtureMissError : TransportError {
  NodeId node;
  explicit FixtureMissError(NodeId n)
      : TransportError(std::string("no fixture response for node ") + node_name(n)), node(n) {}
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class LlmTransport {
 public:
  virtual ~LlmTransport() = default;
  virtual ChatResponse complete(NodeId node, const ChatRequest& request) = 0;
  virtual bool is_replay() const = 0;
};

// Serves recorded responses from a fixture transcript; performs no I/O at
// all. Multiple fixture entries for one node id form a FIFO queue, which is
// how repair-loop sequences are replayed.
class ReplayTransport : public LlmTransport {
 public:
  explicit ReplayTransport(const Transcript& fixture);

  ChatResponse complete(NodeId node, const ChatRequest& request) override;
  bool is_replay() const override { return true; }

  long long serves() const { return serves_; }

 private:
  std::map<NodeId, std::deque<TranscriptNode>> queues_;
  long long serves_ = 0;
};

// Environment variable holding the API key; the key never appears in config
// files or on the command line.
inline constexpr const char* kApiKeyEnvVar = "PSW_LLM_API_KEY";

struct HttpTransportOptions {
  std::string endpoint;       // e.g. https://api.openai.com/v1/chat/completions
  int retries = 3;            // retry attempts after the initial one
  int backoff_base_ms = 1000; // 1s, then 2s, then 4s
};

// Live chat-completions transport. Construction fails with ConfigError when
// the endpoint is missing or the API key is absent from the environment.
class HttpTransport : public LlmTransport {
 public:
  explicit HttpTransport(const HttpTransportOptions& options);

  ChatResponse complete(NodeId node, const ChatRequest& request) override;
  bool is_replay() const override { return false; }

  // Process-wide count of attempted HTTP requests; lets tests assert that
  // replay paths never reach the network layer.
  static long long request_count() { return request_count_.load(); }

 private:
  HttpTransportOptions options_;
  std::string api_key_;
  static std::atomic<long long> request_count_;
};

}  // namespace pspace
