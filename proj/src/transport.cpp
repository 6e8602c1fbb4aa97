#include "pspace/transport.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"

namespace pspace {

using nlohmann::json;

ReplayTransport::ReplayTransport(const Transcript& fixture) {
  for (const TranscriptNode& n : fixture.nodes) queues_[n.id].push_back(n);
}

ChatResponse ReplayTransport::complete(NodeId node, const ChatRequest&) {
  auto it = queues_.find(node);
  if (it == queues_.end() || it->second.empty()) throw FixtureMissError(node);
  TranscriptNode n = std::move(it->second.front());
  it->second.pop_front();
  serves_++;
  ChatResponse r;
  r.content = std::move(n.response);
  r.prompt_tokens = n.prompt_tokens;
  r.completion_tokens = n.completion_tokens;
  return r;
}

std::atomic<long long> HttpTransport::request_count_{0};

HttpTransport::HttpTransport(const HttpTransportOptions& options) : options_(options) {
  if (options_.endpoint.empty())
    throw ConfigError("live transport needs an endpoint (config key 'endpoint')");
  const char* key = std::getenv(kApiKeyEnvVar);
  if (!key || !*key)
    throw ConfigError(std::string("live transport needs the API key in $") + kApiKeyEnvVar);
  api_key_ = key;
}

namespace {

// Splits "scheme://host[:port]/path" into the client base and the path.
std::pair<std::string, std::string> split_endpoint(const std::string& endpoint) {
  size_t scheme = endpoint.find("://");
  if (scheme == std::string::npos)
    throw ConfigError("endpoint must start with http:// or https://");
  size_t path = endpoint.find('/', scheme + 3);
  if (path == std::string::npos) return {endpoint, "/"};
  return {endpoint.substr(0, path), endpoint.substr(path)};
}

}  // namespace

ChatResponse HttpTransport::complete(NodeId, const ChatRequest& request) {
  json body;
  body["model"] = request.model;
  body["temperature"] = request.temperature;
  body["messages"] = json::array();
  for (const ChatMessage& m : request.messages)
    body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  std::string payload = body.dump();

  auto [base, path] = split_endpoint(options_.endpoint);
  std::string last_error;
  for (int attempt = 0; attempt <= options_.retries; attempt++) {
    if (attempt > 0) {
      int delay = options_.backoff_base_ms << (attempt - 1);
      std::this_thread::sleep_for(std::chrono::milliseconds(delay));
    }
    request_count_.fetch_add(1);
    httplib::Client client(base);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
    httplib::Result result = client.Post(path, headers, payload, "application/json");
    if (!result) {
      last_error = "connection failed: " + httplib::to_string(result.error());
      continue;
    }
    if (result->status != 200) {
      last_error = "HTTP " + std::to_string(result->status);
      // 4xx other than 429 will not get better on retry
      if (result->status >= 400 && result->status < 500 && result->status != 429) break;
      continue;
    }
    try {
      json reply = json::parse(result->body);
      ChatResponse out;
      out.content = reply.at("choices").at(0).at("message").at("content").get<std::string>();
      if (reply.contains("usage")) {
        const json& usage = reply["usage"];
        if (usage.contains("prompt_tokens"))
          out.prompt_tokens = usage["prompt_tokens"].get<long long>();
        if (usage.contains("completion_tokens"))
          out.completion_tokens = usage["completion_tokens"].get<long long>();
      }
      return out;
    } catch (const json::exception& e) {
      last_error = std::string("malformed completion response: ") + e.what();
      break;
    }
  }
  throw TransportError("chat completion failed after retries: " + last_error);
}

}  // namespace pspace
