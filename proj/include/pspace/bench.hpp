#pragma once

#include <array>
#include <filesystem>

#include "pspace/dsl.hpp"
#include "pspace/search.hpp"

namespace pspace {

struct BenchCase {
  std::string label;
  ProblemSpace space;
  ProblemInstance instance;
};

struct BenchConfig {
  bool failure_detection;
  LearningMode learning;
};

// Column order of the matrix: failure detection on then off, learning
// None/During/Persist within each.
inline constexpr BenchConfig kBenchConfigs[6] = {
    {true, LearningMode::None},   {true, LearningMode::During},
    {true, LearningMode::Persist}, {false, LearningMode::None},
    {false, LearningMode::During}, {false, LearningMode::Persist},
};

std::string bench_config_name(const BenchConfig& config);

struct BenchCell {
  std::string status;  // "ok", "budget-exceeded", "depth-exhausted", "unsolvable"
  int reps_run = 0;
  double mean_expansions = 0;
  double mean_generated = 0;
  double mean_cache_hits = 0;
  double mean_novel = 0;  // newly generated states; Persist re-solves report 0
  std::optional<int> solution_length;
};

struct BenchRow {
  std::string label;
  std::string error;  // whole-row failure; cells empty when set
  std::optional<int> min_solution;
  std::array<BenchCell, 6> cells;
};

struct BenchReport {
  int repetitions = 5;
  long long expansion_cap = 5000000;
  std::vector<BenchRow> rows;
};

// Runs every (case, config) cell `repetitions` times and averages the stats.
// Persist cells measure a warm re-solve after an unmeasured cold solve on the
// same cache. A cell whose first run exceeds the expansion cap records
// "budget-exceeded" and skips its remaining repetitions. A case whose setup
// fails reports an error row; the other rows proceed.
BenchReport run_matrix(const std::vector<BenchCase>& cases, int repetitions = 5,
                       long long expansion_cap = 5000000);

// The six bundled cases in canonical order, loaded from <data_dir>/specs.
std::vector<BenchCase> load_bench_cases(const std::filesystem::path& data_dir);

std::string render_csv(const BenchReport& report);
std::string render_text(const BenchReport& report);

}  // namespace pspace
