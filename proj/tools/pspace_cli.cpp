// Workbench CLI: solve / oracle / validate / formulate / extract / bench /
// replay over .pspace files and run transcripts.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pspace/bench.hpp"
#include "pspace/extraction.hpp"
#include "pspace/kvconfig.hpp"
#include "pspace/pipeline.hpp"

#ifndef PSPACE_DATA_DIR
#define PSPACE_DATA_DIR "data"
#endif

namespace {

using namespace pspace;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

SpecDocument parse_file_or_die(const std::string& path) {
  ParseResult parsed = parse_spec(read_file(path));
  if (!parsed.ok()) {
    for (const Diagnostic& d : parsed.diagnostics)
      std::cerr << path << ":" << d.at.line << ":" << d.at.col << ": " << d.message << "\n";
    throw std::runtime_error("parse failed: " + path);
  }
  return *parsed.doc;
}

// Problem descriptions are embedded in prompts verbatim; the file's trailing
// newline is an artifact of storage, not part of the text.
std::string read_problem(const std::string& path) {
  std::string text = read_file(path);
  while (!text.empty() && text.back() == '\n') text.pop_back();
  return text;
}

const ProblemInstance& pick_instance(const SpecDocument& doc, const std::string& label) {
  if (doc.instances.empty()) throw std::runtime_error("spec declares no instance");
  if (label.empty()) return doc.instances.front();
  for (const ProblemInstance& inst : doc.instances)
    if (inst.label == label) return inst;
  throw std::runtime_error("no instance named " + label);
}

LearningMode learning_from(const std::string& s) {
  if (s == "none") return LearningMode::None;
  if (s == "during") return LearningMode::During;
  if (s == "persist") return LearningMode::Persist;
  throw std::runtime_error("unknown learning mode " + s);
}

// Problem description embedded in a stored prompt, between the SPECIFIC
// PROBLEM header and the node's instruction block.
std::string problem_from_prompt(const TranscriptNode& node) {
  const std::string marker = "\nSPECIFIC PROBLEM:\n";
  size_t start = node.prompt.find(marker);
  if (start == std::string::npos) return "";
  start += marker.size();
  const std::string tail = "\n" + analysis_instructions(node.id);
  size_t end = node.prompt.find(tail, start);
  if (end == std::string::npos) return "";
  return node.prompt.substr(start, end - start);
}

int cmd_solve(const std::string& path, const std::string& instance_label, bool fd,
              const std::string& learning, std::uint64_t seed, bool seeded, bool trace,
              int max_depth, std::optional<long long> budget) {
  SpecDocument doc = parse_file_or_die(path);
  const ProblemInstance& inst = pick_instance(doc, instance_label);

  SearchConfig config;
  config.failure_detection = fd;
  config.learning = learning_from(learning);
  config.max_depth = max_depth;
  config.expansion_budget = budget;
  if (seeded) {
    config.ordering = Ordering::Seeded;
    config.seed = seed;
  }
  EvaluationCache cache;
  SolveResult result = solve_iddfs(doc.space, inst,
                                   config,
                                   config.learning == LearningMode::Persist ? &cache : nullptr);

  switch (result.status) {
    case SolveStatus::Solved:
      std::cout << "solved " << inst.label << " in " << result.solution->length()
                << " steps\n";
      break;
    case SolveStatus::ProvenUnsolvable:
      std::cout << "proven unsolvable: " << inst.label << "\n";
      break;
    case SolveStatus::DepthBudgetExhausted:
      std::cout << "no solution within depth " << config.max_depth << "\n";
      break;
    case SolveStatus::ExpansionBudgetExceeded:
      std::cout << "expansion budget exceeded\n";
      break;
  }
  std::cout << "expansions: " << result.stats.expansions
            << "  generated: " << result.stats.generated
            << "  cache hits: " << result.stats.cache_hits
            << "  iterations: " << result.stats.iterations << "\n";
  if (trace && result.solution)
    std::cout << format_trace(doc.space, *result.solution);
  return result.status == SolveStatus::Solved ? 0 : 1;
}

int cmd_oracle(const std::string& path, const std::string& instance_label) {
  SpecDocument doc = parse_file_or_die(path);
  const ProblemInstance& inst = pick_instance(doc, instance_label);
  BfsResult result = solve_bfs(doc.space, inst);
  if (result.solution)
    std::cout << "shortest solution: " << result.solution->length() << " steps\n";
  else
    std::cout << "unsolvable\n";
  std::cout << "reachable states: " << result.reachable_count << "\n";
  return result.solution ? 0 : 1;
}

int cmd_validate(const std::string& path) {
  SpecDocument doc = parse_file_or_die(path);
  std::vector<Finding> findings = validate_spec(doc);
  bool blocked = false;
  for (const Finding& f : findings) {
    std::cout << (f.blocking ? "error" : "note") << ": " << finding_kind_name(f.kind) << " ("
              << f.subject << "): " << f.message << "\n";
    blocked = blocked || f.blocking;
  }
  if (findings.empty()) std::cout << "no findings\n";
  return blocked ? 1 : 0;
}

std::unique_ptr<LlmTransport> make_transport(bool live, const std::string& replay_dir,
                                             const std::string& label, const KvConfig& config,
                                             Transcript* fixture_out) {
  if (live) {
    HttpTransportOptions options;
    options.endpoint = config.get_or("endpoint", "");
    return std::make_unique<HttpTransport>(options);
  }
  std::filesystem::path path =
      std::filesystem::path(replay_dir) / (label + ".transcript.json");
  Transcript fixture = load_transcript(path.string());
  if (fixture_out) *fixture_out = fixture;
  return std::make_unique<ReplayTransport>(fixture);
}

int cmd_formulate(const std::string& problem_path, bool live, const std::string& replay_dir,
                  std::string label, const std::string& run_id, const std::string& out_dir,
                  const KvConfig& config) {
  if (label.empty()) label = std::filesystem::path(problem_path).stem().string();
  std::unique_ptr<LlmTransport> transport =
      make_transport(live, replay_dir, label, config, nullptr);

  PipelineOptions options;
  options.problem_label = label;
  options.run_id = run_id;
  options.model_id = config.get_or("model_id", kDefaultModelId);
  options.temperature = std::stod(config.get_or("temperature", "0"));
  options.transcript_dir = out_dir;

  PipelineResult result = run_pipeline(read_problem(problem_path), *transport, options);
  if (!result.ok()) {
    std::cerr << "pipeline failed: " << result.error << "\n";
    return 1;
  }
  std::cout << "completed " << result.transcript.nodes.size() << " nodes";
  if (!result.transcript_path.empty())
    std::cout << ", transcript " << result.transcript_path.string();
  std::cout << "\n";
  return 0;
}

int cmd_extract(const std::string& transcript_path, bool live, const std::string& out_dir,
                const KvConfig& config) {
  Transcript transcript = load_transcript(transcript_path);
  std::unique_ptr<LlmTransport> transport;
  if (live) {
    HttpTransportOptions options;
    options.endpoint = config.get_or("endpoint", "");
    transport = std::make_unique<HttpTransport>(options);
  } else {
    transport = std::make_unique<ReplayTransport>(transcript);
  }
  ExtractionResult result = extract_spec(transcript, *transport);
  std::filesystem::path dir =
      out_dir.empty() ? std::filesystem::path(transcript_path).parent_path()
                      : std::filesystem::path(out_dir);
  if (dir.empty()) dir = ".";
  std::filesystem::path written = write_extracted_spec(result, transcript.run_id, dir);
  std::cout << "extracted after " << result.attempts << " attempt(s): " << written.string()
            << "\n";
  for (const Finding& f : result.findings)
    std::cout << "note: " << finding_kind_name(f.kind) << " (" << f.subject << "): "
              << f.message << "\n";
  return 0;
}

int cmd_bench(const std::string& data_dir, const std::string& out_dir, int reps,
              long long cap) {
  BenchReport report = run_matrix(load_bench_cases(data_dir), reps, cap);
  std::string text = render_text(report);
  if (out_dir.empty()) {
    std::cout << text;
    return 0;
  }
  std::filesystem::create_directories(out_dir);
  std::filesystem::path csv_path = std::filesystem::path(out_dir) / "report.csv";
  std::filesystem::path txt_path = std::filesystem::path(out_dir) / "report.txt";
  std::ofstream(csv_path) << render_csv(report);
  std::ofstream(txt_path) << text;
  std::cout << "wrote " << csv_path.string() << " and " << txt_path.string() << "\n";
  return 0;
}

int cmd_replay(const std::string& transcript_path, std::string problem_text) {
  Transcript fixture = load_transcript(transcript_path);
  if (fixture.nodes.empty()) {
    std::cerr << "empty transcript\n";
    return 1;
  }
  if (problem_text.empty()) problem_text = problem_from_prompt(fixture.nodes.front());
  if (problem_text.empty()) {
    std::cerr << "cannot recover the problem description; pass --problem\n";
    return 1;
  }

  ReplayTransport transport(fixture);
  PipelineOptions options;
  options.run_id = fixture.run_id;
  options.problem_label = fixture.problem_label;
  options.model_id = fixture.model_id;
  options.temperature = fixture.temperature;
  PipelineResult result = run_pipeline(problem_text, transport, options);
  if (!result.ok()) {
    std::cerr << "replay failed: " << result.error << "\n";
    return 1;
  }

  int mismatches = 0;
  for (const TranscriptNode& node : result.transcript.nodes) {
    const TranscriptNode* recorded = fixture.find(node.id);
    bool prompt_ok = recorded && recorded->prompt == node.prompt;
    bool response_ok = recorded && recorded->response == node.response;
    std::cout << node_name(node.id) << ": prompt "
              << (prompt_ok ? "matches" : "DIFFERS") << ", response "
              << (response_ok ? "matches" : "DIFFERS") << "\n";
    if (!prompt_ok || !response_ok) mismatches++;
  }
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"problem-space workbench"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "key = value configuration file");

  std::string spec_path, instance_label;
  std::string fd = "on", learning = "during";
  std::uint64_t seed = 0;
  bool trace = false;
  int max_depth = 64;
  long long budget = -1;

  CLI::App* solve = app.add_subcommand("solve", "find a minimum-length solution");
  solve->add_option("spec", spec_path, "problem space file")->required();
  solve->add_option("--instance", instance_label, "instance label (default: first)");
  solve->add_option("--fd", fd, "failure detection")->check(CLI::IsMember({"on", "off"}));
  solve->add_option("--learning", learning, "evaluation cache mode")
      ->check(CLI::IsMember({"none", "during", "persist"}));
  CLI::Option* seed_opt = solve->add_option("--seed", seed, "seeded operator ordering");
  solve->add_flag("--trace", trace, "print the solution trace");
  solve->add_option("--max-depth", max_depth, "deepening limit");
  solve->add_option("--budget", budget, "expansion budget");

  std::string oracle_spec, oracle_instance;
  CLI::App* oracle = app.add_subcommand("oracle", "breadth-first shortest solution");
  oracle->add_option("spec", oracle_spec, "problem space file")->required();
  oracle->add_option("--instance", oracle_instance, "instance label");

  std::string validate_spec_path;
  CLI::App* validate = app.add_subcommand("validate", "report spec findings");
  validate->add_option("spec", validate_spec_path, "problem space file")->required();

  std::string problem_path, replay_dir, label, run_id, out_dir;
  bool live = false;
  CLI::App* formulate = app.add_subcommand("formulate", "run the analysis pipeline");
  formulate->add_option("problem", problem_path, "problem description file")->required();
  CLI::Option* replay_opt =
      formulate->add_option("--replay", replay_dir, "fixture transcript directory");
  CLI::Option* live_opt = formulate->add_flag("--live", live, "use the live endpoint");
  replay_opt->excludes(live_opt);
  formulate->add_option("--label", label, "problem label (default: file stem)");
  formulate->add_option("--run-id", run_id, "run id (default: label + timestamp)");
  formulate->add_option("--out", out_dir, "transcript output directory");

  std::string extract_path, extract_out;
  bool extract_live = false;
  CLI::App* extract = app.add_subcommand("extract", "emit an executable spec from a run");
  extract->add_option("transcript", extract_path, "transcript file")->required();
  extract->add_flag("--live", extract_live, "use the live endpoint");
  extract->add_option("--out", extract_out, "output directory (default: beside transcript)");

  std::string bench_out, bench_data = PSPACE_DATA_DIR;
  int reps = 5;
  long long cap = 5000000;
  CLI::App* bench = app.add_subcommand("bench", "run the evaluation matrix");
  bench->add_option("--out", bench_out, "write report.csv and report.txt here");
  bench->add_option("--reps", reps, "repetitions per cell");
  bench->add_option("--data", bench_data, "bundled data directory");
  bench->add_option("--cap", cap, "expansion cap per run");

  std::string replay_transcript, replay_problem_path;
  CLI::App* replay = app.add_subcommand("replay", "re-render prompts against a transcript");
  replay->add_option("transcript", replay_transcript, "transcript file")->required();
  replay->add_option("--problem", replay_problem_path, "problem description file");

  CLI11_PARSE(app, argc, argv);

  try {
    KvConfig config;
    if (!config_path.empty()) config = KvConfig::from_file(config_path);

    if (solve->parsed())
      return cmd_solve(spec_path, instance_label, fd == "on", learning, seed,
                       seed_opt->count() > 0, trace, max_depth,
                       budget < 0 ? std::optional<long long>{} : std::optional<long long>{budget});
    if (oracle->parsed()) return cmd_oracle(oracle_spec, oracle_instance);
    if (validate->parsed()) return cmd_validate(validate_spec_path);
    if (formulate->parsed()) {
      if (!live && replay_dir.empty()) {
        std::cerr << "formulate needs --replay DIR or --live\n";
        return 2;
      }
      return cmd_formulate(problem_path, live, replay_dir, label, run_id, out_dir, config);
    }
    if (extract->parsed()) return cmd_extract(extract_path, extract_live, extract_out, config);
    if (bench->parsed()) return cmd_bench(bench_data, bench_out, reps, cap);
    if (replay->parsed())
      return cmd_replay(replay_transcript,
                        replay_problem_path.empty() ? "" : read_problem(replay_problem_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
