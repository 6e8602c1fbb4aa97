#include "pspace/extraction.hpp"

#include <fstream>
#include <sstream>

#include "pspace/search.hpp"

namespace pspace {

namespace {

constexpr long long kMaxGateStates = 2000000;

// Fixture responses may wrap the document in a markdown fence; unwrap it.
std::string strip_code_fence(const std::string& text) {
  size_t open = text.find("```");
  if (open == std::string::npos) return text;
  size_t body = text.find('\n', open);
  if (body == std::string::npos) return text;
  body++;
  size_t close = text.find("```", body);
  if (close == std::string::npos) return text.substr(body);
  return text.substr(body, close - body);
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
  std::ostringstream out;
  for (const Diagnostic& d : diags) {
    if (d.at.line > 0)
      out << "line " << d.at.line << " col " << d.at.col << ": ";
    out << d.message << "\n";
  }
  return out.str();
}

// Parse + validate + terminating-oracle gate shared by both entry points.
// Returns true and fills `result` on acceptance; otherwise fills `diags`.
bool gate_spec(const std::string& text, ExtractionResult& result,
               std::vector<Diagnostic>& diags) {
  ParseResult parsed = parse_spec(text);
  if (!parsed.ok()) {
    diags = parsed.diagnostics;
    return false;
  }
  const SpecDocument& doc = *parsed.doc;
  std::vector<Finding> findings = validate_spec(doc);
  bool blocked = false;
  for (const Finding& f : findings) {
    if (!f.blocking) continue;
    blocked = true;
    diags.push_back({doc.decl_spans.count("space") ? doc.decl_spans.at("space") : SourceSpan{},
                     std::string(finding_kind_name(f.kind)) + " (" + f.subject + "): " +
                         f.message});
  }
  if (blocked) return false;

  long long states = 1;
  for (const VarSpec& v : doc.space.vars) {
    states *= v.capacity + 1;
    if (states > kMaxGateStates) {
      diags.push_back({{}, "state space too large to verify by exhaustive search"});
      return false;
    }
  }
  // The oracle must terminate with a classified outcome (solved or proven
  // unsolvable by exhaustion) on every instance.
  for (const ProblemInstance& inst : doc.instances) solve_bfs(doc.space, inst);

  result.spec = doc;
  result.findings = std::move(findings);
  return true;
}

}  // namespace

const std::string& dsl_grammar_reference() {
  static const std::string text =
      "space <id> {\n"
      "  var <id> : 0..<max> [unit \"<label>\"];   # one per state variable\n"
      "  op <id>(<slot>, ...) {\n"
      "    pre: <boolean expression over slots>;\n"
      "    eff: <slot> := <integer expression>;    # effects read the pre-state\n"
      "  }\n"
      "  constraint no_undo;\n"
      "  constraint no_loop;\n"
      "  failure: <boolean expression over vars>;\n"
      "}\n"
      "\n"
      "instance <id> of <space id> {\n"
      "  init: <var> = <int>, ...;                 # every variable exactly once\n"
      "  goal: <boolean expression over vars>;\n"
      "}\n"
      "\n"
      "Expressions: integer literals, variable/slot names, cap(x) for a\n"
      "container's capacity, sum() for the total held across all variables,\n"
      "min(a, b), max(a, b), + and -, comparisons = != < <= > >=, and/or/not.\n"
      "All values are integers; fractions are rejected.";
  return text;
}

std::vector<ChatMessage> extraction_messages(
    const Transcript& transcript,
    const std::vector<std::pair<std::string, std::string>>& rejected) {
  const TranscriptNode* ops = transcript.find(NodeId::Operators);
  const TranscriptNode* refined = transcript.find(NodeId::RefineOperators);
  if (!ops || !refined)
    throw std::invalid_argument(
        "extraction requires a transcript complete through RefineOperators");

  std::vector<ChatMessage> messages;
  messages.push_back(
      {"system",
       "You translate operator analyses of a problem into a small machine-readable "
       "problem-space language. Respond with one complete document in that language "
       "and nothing else."});
  std::string ask = "The language:\n\n" + dsl_grammar_reference() +
                    "\n\nOPERATOR ANALYSIS:\n" + ops->response +
                    "\n\nREVISED OPERATOR ANALYSIS:\n" + refined->response +
                    "\n\nEmit one space block and one instance block capturing the revised "
                    "analysis. Use the container names from the analysis as variable names.";
  messages.push_back({"user", ask});
  for (const auto& [emission, why] : rejected) {
    messages.push_back({"assistant", emission});
    messages.push_back({"user",
                        "That document was rejected:\n" + why +
                            "Emit a corrected document. Respond with the language only."});
  }
  return messages;
}

ExtractionResult extract_spec(const Transcript& transcript, LlmTransport& transport) {
  ExtractionResult result;
  result.provenance = Provenance::LlmEmitted;

  std::vector<std::pair<std::string, std::string>> rejected;
  std::vector<Diagnostic> last_diags;
  for (int attempt = 1; attempt <= 3; attempt++) {
    ChatRequest request{transcript.model_id, transcript.temperature,
                        extraction_messages(transcript, rejected)};
    ChatResponse response = transport.complete(NodeId::ExtractSpec, request);
    result.attempts = attempt;

    std::vector<Diagnostic> diags;
    if (gate_spec(strip_code_fence(response.content), result, diags)) return result;
    last_diags = diags;
    rejected.emplace_back(response.content, format_diagnostics(diags));
  }
  throw ExtractionError("extraction failed after 3 attempts:\n" + format_diagnostics(last_diags),
                        std::move(last_diags));
}

ExtractionResult import_manual_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw ExtractionError("cannot open spec file: " + path.string(), {});
  std::ostringstream buf;
  buf << in.rdbuf();

  ExtractionResult result;
  result.provenance = Provenance::ManualImport;
  std::vector<Diagnostic> diags;
  if (!gate_spec(buf.str(), result, diags))
    throw ExtractionError("spec rejected: " + path.string() + "\n" + format_diagnostics(diags),
                          std::move(diags));
  return result;
}

std::filesystem::path write_extracted_spec(const ExtractionResult& result,
                                           const std::string& run_id,
                                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::filesystem::path path = dir / (run_id + ".extracted.pspace");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << render_spec(result.spec);
  return path;
}

}  // namespace pspace
