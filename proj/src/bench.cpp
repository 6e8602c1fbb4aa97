#include "pspace/bench.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pspace {

namespace {

std::string fmt1(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

BenchCell run_cell(const BenchCase& bc, const BenchConfig& config, int repetitions,
                   long long expansion_cap) {
  SearchConfig sc;
  sc.failure_detection = config.failure_detection;
  sc.learning = config.learning;
  sc.expansion_budget = expansion_cap;

  BenchCell cell;
  long long expansions = 0, generated = 0, cache_hits = 0, novel = 0;
  for (int rep = 0; rep < repetitions; rep++) {
    SolveResult run;
    if (config.learning == LearningMode::Persist) {
      EvaluationCache cache;
      SolveResult cold = solve_iddfs(bc.space, bc.instance, sc, &cache);
      if (cold.status == SolveStatus::ExpansionBudgetExceeded) {
        run = cold;  // the warm-up already blew the budget
      } else {
        run = solve_iddfs(bc.space, bc.instance, sc, &cache);
      }
    } else {
      run = solve_iddfs(bc.space, bc.instance, sc);
    }
    cell.reps_run++;
    expansions += run.stats.expansions;
    generated += run.stats.generated;
    cache_hits += run.stats.cache_hits;
    novel += run.stats.novel_generated;
    cell.solution_length = run.stats.solution_length;
    switch (run.status) {
      case SolveStatus::Solved: cell.status = "ok"; break;
      case SolveStatus::ProvenUnsolvable: cell.status = "unsolvable"; break;
      case SolveStatus::DepthBudgetExhausted: cell.status = "depth-exhausted"; break;
      case SolveStatus::ExpansionBudgetExceeded: cell.status = "budget-exceeded"; break;
    }
    // A blown budget on the first run marks the whole cell; repeating an
    // identical capped run tells us nothing new.
    if (run.status == SolveStatus::ExpansionBudgetExceeded) break;
  }
  cell.mean_expansions = double(expansions) / cell.reps_run;
  cell.mean_generated = double(generated) / cell.reps_run;
  cell.mean_cache_hits = double(cache_hits) / cell.reps_run;
  cell.mean_novel = double(novel) / cell.reps_run;
  return cell;
}

}  // namespace

std::string bench_config_name(const BenchConfig& config) {
  std::string name = config.failure_detection ? "fd=on/" : "fd=off/";
  switch (config.learning) {
    case LearningMode::None: return name + "none";
    case LearningMode::During: return name + "during";
    case LearningMode::Persist: return name + "persist";
  }
  return name;
}

BenchReport run_matrix(const std::vector<BenchCase>& cases, int repetitions,
                       long long expansion_cap) {
  BenchReport report;
  report.repetitions = repetitions;
  report.expansion_cap = expansion_cap;
  for (const BenchCase& bc : cases) {
    BenchRow row;
    row.label = bc.label;
    try {
      for (int i = 0; i < 6; i++)
        row.cells[i] = run_cell(bc, kBenchConfigs[i], repetitions, expansion_cap);
      for (const BenchCell& cell : row.cells) {
        if (cell.solution_length) {
          row.min_solution = cell.solution_length;
          break;
        }
      }
    } catch (const std::exception& e) {
      row.error = e.what();
      row.cells = {};
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<BenchCase> load_bench_cases(const std::filesystem::path& data_dir) {
  static const char* kNames[] = {"water_jugs_4_9", "water_jugs_3_5", "water_jugs_9_17",
                                 "volume_4q_9g",   "volume_2_3_5",   "flucotone_4_9"};
  std::vector<BenchCase> cases;
  for (const char* name : kNames) {
    std::filesystem::path path = data_dir / "specs" / (std::string(name) + ".pspace");
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    ParseResult parsed = parse_spec(buf.str());
    if (!parsed.ok()) {
      std::string msg = "parse failure in " + path.string();
      for (const Diagnostic& d : parsed.diagnostics)
        msg += "\n  line " + std::to_string(d.at.line) + ": " + d.message;
      throw std::runtime_error(msg);
    }
    if (parsed.doc->instances.empty())
      throw std::runtime_error("no instance in " + path.string());
    cases.push_back({name, parsed.doc->space, parsed.doc->instances.front()});
  }
  return cases;
}

std::string render_csv(const BenchReport& report) {
  std::ostringstream out;
  out << "case,config,failure_detection,learning,repetitions,status,mean_expansions,"
         "mean_generated,mean_cache_hits,mean_novel,solution_length,min_solution\n";
  for (const BenchRow& row : report.rows) {
    if (!row.error.empty()) {
      out << csv_field(row.label) << ",,,,,"
          << csv_field("error: " + row.error) << ",,,,,,\n";
      continue;
    }
    for (int i = 0; i < 6; i++) {
      const BenchConfig& cfg = kBenchConfigs[i];
      const BenchCell& cell = row.cells[i];
      out << csv_field(row.label) << ',' << bench_config_name(cfg) << ','
          << (cfg.failure_detection ? "on" : "off") << ','
          << (cfg.learning == LearningMode::None
                  ? "none"
                  : cfg.learning == LearningMode::During ? "during" : "persist")
          << ',' << cell.reps_run << ',' << cell.status << ',' << fmt1(cell.mean_expansions)
          << ',' << fmt1(cell.mean_generated) << ',' << fmt1(cell.mean_cache_hits) << ','
          << fmt1(cell.mean_novel) << ','
          << (cell.solution_length ? std::to_string(*cell.solution_length) : "") << ','
          << (row.min_solution ? std::to_string(*row.min_solution) : "") << '\n';
    }
  }
  return out.str();
}

namespace {

void render_table(std::ostringstream& out, const BenchReport& report, const char* title,
                  double BenchCell::*metric) {
  out << title << "\n";
  std::vector<std::string> headers = {"case", "Min. Soln"};
  for (const BenchConfig& cfg : kBenchConfigs) headers.push_back(bench_config_name(cfg));

  std::vector<std::vector<std::string>> grid;
  grid.push_back(headers);
  for (const BenchRow& row : report.rows) {
    std::vector<std::string> line = {row.label};
    if (!row.error.empty()) {
      line.push_back("error: " + row.error);
      grid.push_back(std::move(line));
      continue;
    }
    line.push_back(row.min_solution ? std::to_string(*row.min_solution) : "-");
    for (const BenchCell& cell : row.cells)
      line.push_back(cell.status == "ok" ? fmt1(cell.*metric) : cell.status);
    grid.push_back(std::move(line));
  }

  std::vector<size_t> widths(headers.size(), 0);
  for (const auto& line : grid)
    for (size_t i = 0; i < line.size() && i < widths.size(); i++)
      widths[i] = std::max(widths[i], line[i].size());
  for (const auto& line : grid) {
    for (size_t i = 0; i < line.size(); i++) {
      out << line[i];
      if (i + 1 < line.size())
        out << std::string(widths[i] - line[i].size() + 2, ' ');
    }
    out << "\n";
  }
  out << "\n";
}

}  // namespace

std::string render_text(const BenchReport& report) {
  std::ostringstream out;
  out << "Benchmark matrix: " << report.repetitions << " repetitions per cell, expansion cap "
      << report.expansion_cap << "\n\n";
  render_table(out, report, "Mean expansions", &BenchCell::mean_expansions);
  render_table(out, report, "Mean newly generated states", &BenchCell::mean_novel);
  return out.str();
}

}  // namespace pspace
