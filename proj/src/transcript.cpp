#include "pspace/transcript.hpp"

#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace pspace {

using nlohmann::json;

const TranscriptNode* Transcript::find(NodeId id) const {
  for (const TranscriptNode& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::string transcript_to_json(const Transcript& t) {
  json j;
  j["run_id"] = t.run_id;
  j["problem_label"] = t.problem_label;
  j["model_id"] = t.model_id;
  j["temperature"] = t.temperature;
  j["complete"] = t.complete;
  j["nodes"] = json::array();
  for (const TranscriptNode& n : t.nodes) {
    json jn;
    jn["id"] = node_name(n.id);
    jn["prompt"] = n.prompt;
    jn["response"] = n.response;
    jn["started_at"] = n.started_at;
    jn["finished_at"] = n.finished_at;
    if (n.prompt_tokens) jn["prompt_tokens"] = *n.prompt_tokens;
    if (n.completion_tokens) jn["completion_tokens"] = *n.completion_tokens;
    j["nodes"].push_back(std::move(jn));
  }
  return j.dump(2) + "\n";
}

Transcript transcript_from_json(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("transcript is not valid JSON: ") + e.what());
  }
  Transcript t;
  try {
    t.run_id = j.at("run_id").get<std::string>();
    t.problem_label = j.at("problem_label").get<std::string>();
    t.model_id = j.at("model_id").get<std::string>();
    t.temperature = j.at("temperature").get<double>();
    t.complete = j.at("complete").get<bool>();
    for (const json& jn : j.at("nodes")) {
      TranscriptNode n;
      n.id = node_from_name(jn.at("id").get<std::string>());
      n.prompt = jn.at("prompt").get<std::string>();
      n.response = jn.at("response").get<std::string>();
      n.started_at = jn.value("started_at", "");
      n.finished_at = jn.value("finished_at", "");
      if (jn.contains("prompt_tokens")) n.prompt_tokens = jn["prompt_tokens"].get<long long>();
      if (jn.contains("completion_tokens"))
        n.completion_tokens = jn["completion_tokens"].get<long long>();
      t.nodes.push_back(std::move(n));
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("transcript field error: ") + e.what());
  }
  return t;
}

void save_transcript(const Transcript& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write transcript: " + path);
  out << transcript_to_json(t);
}

Transcript load_transcript(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open transcript: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return transcript_from_json(buf.str());
}

std::string iso8601_now() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace pspace
