#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pspace/space.hpp"

namespace pspace {

struct SourceSpan {
  int line = 0;  // 1-based
  int col = 0;   // 1-based
};

struct Diagnostic {
  SourceSpan at;
  std::string message;
};

// A parsed .pspace document: one problem space plus any number of instances.
// `decl_spans` maps declaration keys ("var:j4", "op:pour", "instance:deliver_6",
// "space", "goal:deliver_6", ...) to their source locations for later findings.
struct SpecDocument {
  ProblemSpace space;
  std::vector<ProblemInstance> instances;
  std::map<std::string, SourceSpan> decl_spans;
};

struct ParseResult {
  std::optional<SpecDocument> doc;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return doc.has_value(); }
};

ParseResult parse_spec(std::string_view source);

// Canonical rendering: stable layout, two-space indent, LF line endings, no
// trailing whitespace, newline-terminated. parse(render(d)) reproduces d.
std::string render_spec(const SpecDocument& doc);

// Structural equality ignoring source spans.
bool documents_equal(const SpecDocument& a, const SpecDocument& b);

enum class FindingKind {
  MissingGoal,                // instance without a goal clause
  UnsatisfiablePrecondition,  // no in-bounds state satisfies any grounding
  VarNeverWritten,            // no ground operator assigns the variable
  FailureSubsumesGoal,        // every goal state is also a failure state
  UnreachableGoal,            // brute-force reachability finds no goal state
};

struct Finding {
  FindingKind kind;
  bool blocking = false;  // blocking findings reject extraction imports
  std::string subject;    // variable / operator / instance label
  std::string message;
};

std::vector<Finding> validate_spec(const SpecDocument& doc);

const char* finding_kind_name(FindingKind kind);

}  // namespace pspace
