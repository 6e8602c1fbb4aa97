#pragma once

#include <filesystem>
#include <stdexcept>

#include "pspace/dsl.hpp"
#include "pspace/transport.hpp"

namespace pspace {

enum class Provenance { LlmEmitted, ManualImport };

struct ExtractionResult {
  SpecDocument spec;
  int attempts = 0;  // completion calls consumed; 0 for manual imports
  std::vector<Finding> findings;  // validator output for the accepted spec
  Provenance provenance = Provenance::LlmEmitted;
};

// Raised after the repair loop runs out of attempts; carries the last
// attempt's parse/validate diagnostics.
struct ExtractionError : std::runtime_error {
  std::vector<Diagnostic> diagnostics;

  ExtractionError(const std::string& msg, std::vector<Diagnostic> diags)
      : std::runtime_error(msg), diagnostics(std::move(diags)) {}
};

// Grammar reference embedded in extraction prompts.
const std::string& dsl_grammar_reference();

// Chat messages for one extraction attempt. `rejected` holds earlier
// emissions paired with the diagnostics that rejected them; they become
// assistant/user repair turns.
std::vector<ChatMessage> extraction_messages(
    const Transcript& transcript,
    const std::vector<std::pair<std::string, std::string>>& rejected);

// Turns a transcript's operator analyses into an executable spec: asks the
// model for DSL text, then gates on parse + zero blocking findings + a
// terminating oracle run on every instance. Rejections feed a repair prompt,
// up to three attempts total. Requires the transcript to contain the
// Operators and RefineOperators responses.
ExtractionResult extract_spec(const Transcript& transcript, LlmTransport& transport);

// Parses and validates a hand-written spec file. Parse errors and blocking
// findings surface as ExtractionError.
ExtractionResult import_manual_spec(const std::filesystem::path& path);

// Writes the canonical rendering to dir/<run_id>.extracted.pspace.
std::filesystem::path write_extracted_spec(const ExtractionResult& result,
                                           const std::string& run_id,
                                           const std::filesystem::path& dir);

}  // namespace pspace
