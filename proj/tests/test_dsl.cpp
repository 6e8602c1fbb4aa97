#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pspace/dsl.hpp"

using namespace pspace;

namespace {

const std::filesystem::path kDataDir = PSPACE_DATA_DIR;

const char* kBundledSpecs[] = {
    "water_jugs_4_9", "water_jugs_3_5", "water_jugs_9_17",
    "volume_4q_9g",   "volume_2_3_5",   "flucotone_4_9",
};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

// Expects exactly one diagnostic whose message contains `needle`.
void expect_error(const std::string& source, const std::string& needle) {
  ParseResult r = parse_spec(source);
  CHECK_FALSE(r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  INFO("message: ", r.diagnostics[0].message);
  CHECK(r.diagnostics[0].message.find(needle) != std::string::npos);
  CHECK(r.diagnostics[0].at.line >= 1);
  CHECK(r.diagnostics[0].at.col >= 1);
}

SpecDocument parse_ok(const std::string& source) {
  ParseResult r = parse_spec(source);
  if (!r.ok()) {
    for (const auto& d : r.diagnostics)
      MESSAGE("line ", d.at.line, ": ", d.message);
  }
  REQUIRE(r.ok());
  return *r.doc;
}

const std::string kMinimalSpace =
    "space s {\n"
    "  var a : 0..4;\n"
    "  var b : 0..9;\n"
    "  op move(x, y) {\n"
    "    pre: x > 0 and y < cap(y);\n"
    "    eff: x := x - 1;\n"
    "    eff: y := y + 1;\n"
    "  }\n"
    "}\n";

}  // namespace

TEST_CASE("bundled water jug document parses to the expected structure") {
  SpecDocument doc = parse_ok(read_file(kDataDir / "specs" / "water_jugs_4_9.pspace"));
  CHECK(doc.space.name == "water_jugs_4_9");
  REQUIRE(doc.space.vars.size() == 2);
  CHECK(doc.space.vars[0].name == "j4");
  CHECK(doc.space.vars[0].capacity == 4);
  CHECK(doc.space.vars[0].unit_label == "qt");
  CHECK(doc.space.vars[1].name == "j9");
  CHECK(doc.space.vars[1].capacity == 9);
  REQUIRE(doc.space.schemas.size() == 3);
  CHECK(doc.space.schemas[0].name == "fill");
  CHECK(doc.space.schemas[1].name == "empty");
  CHECK(doc.space.schemas[2].name == "pour");
  CHECK(doc.space.schemas[2].params.size() == 2);
  CHECK(doc.space.schemas[2].effects.size() == 2);
  CHECK(doc.space.no_undo);
  CHECK(doc.space.no_loop);
  REQUIRE(doc.space.failure != nullptr);
  REQUIRE(doc.instances.size() == 1);
  CHECK(doc.instances[0].label == "deliver_6");
  CHECK(doc.instances[0].initial.values == std::vector<int>{0, 0});
  REQUIRE(doc.instances[0].goal != nullptr);
  CHECK(format_expr(*doc.instances[0].goal, doc.space.var_names()) ==
        "j4 = 6 or j9 = 6");
  CHECK(doc.decl_spans.count("space") == 1);
  CHECK(doc.decl_spans.count("var:j4") == 1);
  CHECK(doc.decl_spans.count("op:pour") == 1);
  CHECK(doc.decl_spans.count("instance:deliver_6") == 1);
  CHECK(doc.decl_spans.count("goal:deliver_6") == 1);
}

TEST_CASE("bundled files are already in canonical form") {
  for (const char* label : kBundledSpecs) {
    std::string source = read_file(kDataDir / "specs" / (std::string(label) + ".pspace"));
    INFO("spec: ", label);
    SpecDocument doc = parse_ok(source);
    CHECK(render_spec(doc) == source);
  }
}

TEST_CASE("render round-trips through the parser") {
  std::string noisy =
      "# weights puzzle\n"
      "space   weights{var w :0..10 unit \"kg\" ;\n"
      "op add (x){pre: x<cap( x ) ;eff: x:=x+1;};\n"
      "op drop(x){pre:x>0;eff:x:=0;}\n"
      "constraint no_loop;failure: w = 10;}\n"
      "instance start of weights { init: w=2; goal: sum ( ) = 7 ; }\n";
  SpecDocument doc = parse_ok(noisy);
  std::string canon = render_spec(doc);
  SpecDocument again = parse_ok(canon);
  CHECK(documents_equal(doc, again));
  CHECK(render_spec(again) == canon);
  // Canonical form is stable and newline-terminated, without the comment.
  CHECK(canon.back() == '\n');
  CHECK(canon.find('#') == std::string::npos);
}

TEST_CASE("documents_equal is structural") {
  SpecDocument a = parse_ok(read_file(kDataDir / "specs" / "water_jugs_4_9.pspace"));
  SpecDocument b = parse_ok(render_spec(a));
  CHECK(documents_equal(a, b));
  b.instances[0].goal = Expr::cmp(CmpOp::Eq, Expr::var_ref(0), Expr::int_const(2));
  CHECK_FALSE(documents_equal(a, b));
  SpecDocument c = parse_ok(render_spec(a));
  c.space.vars[1].capacity = 10;
  CHECK_FALSE(documents_equal(a, c));
}

TEST_CASE("lexer diagnostics") {
  expect_error("space s {\n  var a : 0..4.5;\n}\n",
               "fractional values are not supported");
  expect_error("space s {\n  var a : 0..99999999999999999999;\n}\n",
               "integer literal too large");
  expect_error("space s {\n  var a : 0..4 unit \"qt;\n}\n", "unterminated string");
  expect_error("space s {\n  var a : 0..4; $\n}\n", "unexpected character");
  expect_error("space s {\n  var a : 0..4;\n  failure: a ! 0;\n}\n",
               "expected '=' after '!'");
}

TEST_CASE("keywords are reserved words") {
  expect_error("space op {\n  var a : 0..4;\n}\n", "'op' is a reserved word");
  expect_error("space s {\n  var goal : 0..4;\n}\n", "'goal' is a reserved word");
  expect_error("space s {\n  var a : 0..4;\n  failure: a = init;\n}\n",
               "'init' is a reserved word");
}

TEST_CASE("declaration-level diagnostics") {
  expect_error("", "empty document");
  expect_error("instance i of s {\n  init: a = 0;\n}\n",
               "instance declared before any space");
  expect_error("space s {\n  var a : 0..4;\n}\nspace t {\n  var b : 0..4;\n}\n",
               "document already declares space 's'");
  expect_error("space s {\n}\n", "declares no variables");
  expect_error("space s {\n  var a : 0..4;\n  var a : 0..9;\n}\n",
               "duplicate variable 'a'");
  expect_error("space s {\n  var a : 1..4;\n}\n", "variable ranges start at 0");
  expect_error("space s {\n  var a : 0..0;\n}\n", "capacity out of supported range");
  expect_error("space s {\n  var a : 0..1000001;\n}\n",
               "capacity out of supported range");
}

TEST_CASE("operator diagnostics") {
  expect_error(
      "space s {\n  var a : 0..4;\n  op f(x) {\n    pre: x < 1;\n    eff: x := 0;\n  }\n"
      "  op f(x) {\n    pre: x < 1;\n    eff: x := 0;\n  }\n}\n",
      "duplicate operator 'f'");
  expect_error("space s {\n  var a : 0..4;\n  op f() {\n    pre: a < 1;\n  }\n}\n",
               "operator needs at least one parameter");
  expect_error(
      "space s {\n  var a : 0..4;\n  op f(x, y) {\n    pre: x < 1;\n    eff: x := 0;\n  }\n}\n",
      "more parameters than variables");
  expect_error(
      "space s {\n  var a : 0..4;\n  op f(x, x) {\n    pre: x < 1;\n    eff: x := 0;\n  }\n}\n",
      "duplicate parameter 'x'");
  expect_error("space s {\n  var a : 0..4;\n  op f(x) {\n    pre: x < 1;\n  }\n}\n",
               "operator needs at least one effect");
  expect_error(
      "space s {\n  var a : 0..4;\n  op f(x) {\n    pre: x < 1;\n    eff: z := 0;\n  }\n}\n",
      "effect target 'z' is not a parameter");
  expect_error(
      "space s {\n  var a : 0..4;\n  op f(x) {\n    pre: x < 1;\n    eff: x := 0;\n"
      "    eff: x := 1;\n  }\n}\n",
      "parameter 'x' assigned twice");
  expect_error(
      "space s {\n  var a : 0..4;\n  op f(x) {\n    pre: x;\n    eff: x := 0;\n  }\n}\n",
      "precondition must be a condition");
  expect_error(
      "space s {\n  var a : 0..4;\n  op f(x) {\n    pre: x < 1;\n    eff: x := x < 1;\n  }\n}\n",
      "effect must be an integer expression");
  expect_error(
      "space s {\n  var a : 0..4;\n  op f(x) {\n    pre: sum() > 0;\n    eff: x := 0;\n  }\n}\n",
      "sum() is not available in operator bodies");
}

TEST_CASE("expression diagnostics") {
  expect_error("space s {\n  var a : 0..4;\n  failure: b = 0;\n}\n",
               "unknown name 'b'");
  // Parentheses alone add no tree depth; nested calls do.
  std::string deep = "space s {\n  var a : 0..4;\n  failure: a = ";
  for (int i = 0; i < 70; i++) deep += "min(a, ";
  deep += "a";
  for (int i = 0; i < 70; i++) deep += ")";
  deep += ";\n}\n";
  expect_error(deep, "nesting exceeds depth limit");
  std::string shallow = "space s {\n  var a : 0..4;\n  failure: a = ((((a))));\n}\n";
  CHECK(parse_spec(shallow).ok());
  expect_error("space s {\n  var a : 0..4;\n  failure: a = 0;\n  failure: a = 1;\n}\n",
               "duplicate failure predicate");
  expect_error("space s {\n  var a : 0..4;\n  constraint maybe;\n}\n",
               "expected 'no_undo' or 'no_loop'");
}

TEST_CASE("instance diagnostics") {
  std::string sp = kMinimalSpace;
  expect_error(sp + "instance i of t {\n  init: a = 0, b = 0;\n}\n",
               "unknown space 't'");
  expect_error(sp + "instance i of s {\n  init: a = 0, c = 0;\n}\n",
               "unknown variable 'c'");
  expect_error(sp + "instance i of s {\n  init: a = 0, a = 1;\n}\n",
               "variable 'a' initialized twice");
  expect_error(sp + "instance i of s {\n  init: a = 5, b = 0;\n}\n",
               "initial value 5 out of bounds for 'a'");
  expect_error(sp + "instance i of s {\n  init: a = 0;\n}\n",
               "variable 'b' not initialized");
  expect_error(sp + "instance i of s {\n  init: a = 0, b = 0;\n}\n"
                    "instance i of s {\n  init: a = 0, b = 0;\n}\n",
               "duplicate instance 'i'");
}

TEST_CASE("randomized documents survive a render/parse round trip") {
  std::mt19937 rng(7);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };

  for (int trial = 0; trial < 60; trial++) {
    SpecDocument doc;
    doc.space.name = "fuzz" + std::to_string(trial);
    int nvars = pick(1, 4);
    for (int i = 0; i < nvars; i++) {
      VarSpec v;
      v.name = "v" + std::to_string(i);
      v.capacity = pick(1, 20);
      if (pick(0, 1)) v.unit_label = pick(0, 1) ? "qt" : "u u";
      doc.space.vars.push_back(v);
    }

    // Random int expression over `arity` slots, depth-bounded.
    std::function<ExprPtr(int, int)> rand_int = [&](int arity, int depth) -> ExprPtr {
      int choice = depth <= 0 ? pick(0, 2) : pick(0, 6);
      switch (choice) {
        case 0: return Expr::int_const(pick(0, 9));
        case 1: return Expr::var_ref(pick(0, arity - 1));
        case 2: return Expr::cap_of(pick(0, arity - 1));
        case 3: return Expr::add(rand_int(arity, depth - 1), rand_int(arity, depth - 1));
        case 4: return Expr::sub(rand_int(arity, depth - 1), rand_int(arity, depth - 1));
        case 5: return Expr::min2(rand_int(arity, depth - 1), rand_int(arity, depth - 1));
        default: return Expr::max2(rand_int(arity, depth - 1), rand_int(arity, depth - 1));
      }
    };
    std::function<ExprPtr(int, int)> rand_bool = [&](int arity, int depth) -> ExprPtr {
      static const CmpOp ops[] = {CmpOp::Eq, CmpOp::Ne, CmpOp::Lt,
                                  CmpOp::Le, CmpOp::Gt, CmpOp::Ge};
      if (depth <= 0 || pick(0, 2) == 0)
        return Expr::cmp(ops[pick(0, 5)], rand_int(arity, depth - 1),
                         rand_int(arity, depth - 1));
      switch (pick(0, 2)) {
        case 0:
          return Expr::logical_and(rand_bool(arity, depth - 1), rand_bool(arity, depth - 1));
        case 1:
          return Expr::logical_or(rand_bool(arity, depth - 1), rand_bool(arity, depth - 1));
        default:
          return Expr::logical_not(rand_bool(arity, depth - 1));
      }
    };

    int nops = pick(1, 3);
    for (int i = 0; i < nops; i++) {
      OperatorSchema s;
      s.name = "act" + std::to_string(i);
      int arity = pick(1, nvars);
      for (int p = 0; p < arity; p++) s.params.push_back("p" + std::to_string(p));
      s.precondition = rand_bool(arity, 2);
      int neffs = pick(1, arity);
      for (int e = 0; e < neffs; e++) s.effects.emplace_back(e, rand_int(arity, 2));
      doc.space.schemas.push_back(std::move(s));
    }
    doc.space.no_undo = pick(0, 1) != 0;
    doc.space.no_loop = pick(0, 1) != 0;
    if (pick(0, 1)) doc.space.failure = rand_bool(nvars, 2);

    int ninsts = pick(0, 2);
    for (int i = 0; i < ninsts; i++) {
      ProblemInstance inst;
      inst.label = "case" + std::to_string(i);
      for (int v = 0; v < nvars; v++)
        inst.initial.values.push_back(pick(0, doc.space.vars[v].capacity));
      if (pick(0, 3) != 0) inst.goal = rand_bool(nvars, 2);
      doc.instances.push_back(std::move(inst));
    }

    std::string rendered = render_spec(doc);
    INFO("trial ", trial, ":\n", rendered);
    ParseResult r = parse_spec(rendered);
    REQUIRE(r.ok());
    CHECK(documents_equal(doc, *r.doc));
    CHECK(render_spec(*r.doc) == rendered);
  }
}

TEST_CASE("mutated sources never crash the parser") {
  std::string base = read_file(kDataDir / "specs" / "water_jugs_4_9.pspace");
  std::mt19937 rng(11);
  auto pick = [&](int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
  };
  const char alphabet[] = "{}();:=.,<>!#\"abz019 \n";

  for (int trial = 0; trial < 300; trial++) {
    std::string s = base;
    int edits = pick(1, 4);
    for (int e = 0; e < edits && !s.empty(); e++) {
      int pos = pick(0, static_cast<int>(s.size()) - 1);
      switch (pick(0, 2)) {
        case 0: s.erase(static_cast<size_t>(pos), 1); break;
        case 1:
          s.insert(static_cast<size_t>(pos), 1,
                   alphabet[pick(0, static_cast<int>(sizeof(alphabet)) - 2)]);
          break;
        default:
          s[static_cast<size_t>(pos)] =
              alphabet[pick(0, static_cast<int>(sizeof(alphabet)) - 2)];
          break;
      }
    }
    ParseResult r = parse_spec(s);  // must terminate without throwing
    if (!r.ok()) {
      REQUIRE(r.diagnostics.size() == 1);
      CHECK_FALSE(r.diagnostics[0].message.empty());
    } else {
      // Whatever parsed must round-trip.
      ParseResult rt = parse_spec(render_spec(*r.doc));
      REQUIRE(rt.ok());
      CHECK(documents_equal(*r.doc, *rt.doc));
    }
  }
}

TEST_CASE("bundled specs validate clean") {
  for (const char* label : kBundledSpecs) {
    SpecDocument doc =
        parse_ok(read_file(kDataDir / "specs" / (std::string(label) + ".pspace")));
    INFO("spec: ", label);
    CHECK(validate_spec(doc).empty());
  }
}

TEST_CASE("validator reports a missing goal as blocking") {
  SpecDocument doc = parse_ok(kMinimalSpace +
                              "instance i of s {\n  init: a = 1, b = 0;\n}\n");
  auto findings = validate_spec(doc);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].kind == FindingKind::MissingGoal);
  CHECK(findings[0].blocking);
  CHECK(findings[0].subject == "i");
  CHECK(findings[0].message == "instance 'i' has no goal expression");
}

TEST_CASE("validator reports an unsatisfiable precondition as blocking") {
  SpecDocument doc = parse_ok(
      "space s {\n  var a : 0..4;\n"
      "  op f(x) {\n    pre: x > cap(x);\n    eff: x := 0;\n  }\n"
      "  op g(x) {\n    pre: x < cap(x);\n    eff: x := x + 1;\n  }\n}\n"
      "instance i of s {\n  init: a = 0;\n  goal: a = 4;\n}\n");
  auto findings = validate_spec(doc);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].kind == FindingKind::UnsatisfiablePrecondition);
  CHECK(findings[0].blocking);
  CHECK(findings[0].subject == "f");
  CHECK(findings[0].message == "operator 'f' is applicable in no in-bounds state");
}

TEST_CASE("validator reports variables no operator writes") {
  // Grounding binds every slot to every variable, so any schema with an
  // effect writes every variable; the finding fires when nothing does.
  SpecDocument doc = parse_ok("space s {\n  var a : 0..4;\n  var b : 0..9;\n}\n");
  auto findings = validate_spec(doc);
  REQUIRE(findings.size() == 2);
  for (const auto& f : findings) {
    CHECK(f.kind == FindingKind::VarNeverWritten);
    CHECK_FALSE(f.blocking);
    CHECK(f.message == "variable '" + f.subject + "' is never written by any operator");
  }
  CHECK(findings[0].subject == "a");
  CHECK(findings[1].subject == "b");

  // One schema with one effect suffices to write both variables.
  SpecDocument ok = parse_ok(
      "space s {\n  var a : 0..4;\n  var b : 0..9;\n"
      "  op f(x) {\n    pre: x < cap(x);\n    eff: x := x + 1;\n  }\n}\n");
  CHECK(validate_spec(ok).empty());
}

TEST_CASE("validator reports failure subsuming the goal") {
  SpecDocument doc = parse_ok(
      "space s {\n  var a : 0..4;\n"
      "  op f(x) {\n    pre: x < cap(x);\n    eff: x := x + 1;\n  }\n"
      "  op g(x) {\n    pre: x > 0;\n    eff: x := x - 1;\n  }\n"
      "  failure: a = 0 or a = 4;\n}\n"
      "instance i of s {\n  init: a = 2;\n  goal: a = 4;\n}\n");
  auto findings = validate_spec(doc);
  bool saw = false;
  for (const auto& f : findings)
    if (f.kind == FindingKind::FailureSubsumesGoal) {
      saw = true;
      CHECK_FALSE(f.blocking);
      CHECK(f.subject == "i");
      CHECK(f.message == "every goal state of 'i' also satisfies the failure predicate");
    }
  CHECK(saw);
}

TEST_CASE("validator reports unreachable goals") {
  // cap 4 jug can never hold 6: brute-force reachability proves it.
  SpecDocument doc = parse_ok(
      "space s {\n  var a : 0..4;\n"
      "  op f(x) {\n    pre: x < cap(x);\n    eff: x := x + 1;\n  }\n"
      "  op g(x) {\n    pre: x > 0;\n    eff: x := x - 1;\n  }\n}\n"
      "instance i of s {\n  init: a = 0;\n  goal: a = 6;\n}\n");
  auto findings = validate_spec(doc);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0].kind == FindingKind::UnreachableGoal);
  CHECK_FALSE(findings[0].blocking);
  CHECK(findings[0].subject == "i");
  CHECK(findings[0].message == "no reachable state satisfies the goal of 'i'");
}

TEST_CASE("finding kind names are stable") {
  CHECK(std::string(finding_kind_name(FindingKind::MissingGoal)) == "missing-goal");
  CHECK(std::string(finding_kind_name(FindingKind::UnsatisfiablePrecondition)) ==
        "unsatisfiable-precondition");
  CHECK(std::string(finding_kind_name(FindingKind::VarNeverWritten)) ==
        "var-never-written");
  CHECK(std::string(finding_kind_name(FindingKind::FailureSubsumesGoal)) ==
        "failure-subsumes-goal");
  CHECK(std::string(finding_kind_name(FindingKind::UnreachableGoal)) ==
        "unreachable-goal");
}
