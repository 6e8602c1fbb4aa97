#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "pspace/space.hpp"

namespace pspace {

enum class LearningMode { None, During, Persist };
enum class Ordering { Lexicographic, Seeded };

struct SearchConfig {
  bool failure_detection = true;
  LearningMode learning = LearningMode::During;
  int max_depth = 64;
  Ordering ordering = Ordering::Lexicographic;
  std::uint64_t seed = 0;
  bool path_constraints_enabled = true;
  // Optional hard cap on expansions; exceeded -> ExpansionBudgetExceeded.
  std::optional<long long> expansion_budget;
};

struct SearchStats {
  long long expansions = 0;       // states whose successors were generated
  long long generated = 0;        // successor states produced
  long long cache_hits = 0;
  long long novel_generated = 0;  // generated states not already in the cache's seen set
  int iterations = 0;             // completed deepening rounds
  std::optional<int> solution_length;

  bool operator==(const SearchStats&) const = default;
};

struct SolutionStep {
  std::string op_display;
  StateVector state;  // state after the step
};

struct Solution {
  std::vector<SolutionStep> steps;

  int length() const { return static_cast<int>(steps.size()); }
};

// Failed-evaluation cache emulating compiled search control: an entry means
// "no goal reachable from `state` within `fail_depth` steps under the active
// constraints". `witness` is a concrete constraint-clean path found below
// `state` (deepest one seen); entries whose witness is shorter than
// fail_depth were enumerated past their last frontier, so the verdict holds
// at every depth. Keeping the witness states - not just a depth - matters
// for proving unsolvability: frontier evidence may only be borrowed when the
// witness avoids the current search path, otherwise the composed path would
// revisit a state and claim depth no real constraint-clean path has. The
// goal is never cached. A persistent cache is bound to a fingerprint of
// space + goal + constraint configuration and clears itself when the
// fingerprint changes. The seen set backs the novel_generated statistic and
// survives across solves with the cache.
class EvaluationCache {
 public:
  struct Entry {
    int fail_depth = 0;
    std::vector<StateVector> witness;  // deepest clean path below the state

    int reach() const { return static_cast<int>(witness.size()); }

    // True when the subtree below the state is fully enumerated: nothing
    // exists beyond the witness, so no goal is reachable at any depth.
    bool finite() const { return reach() < fail_depth; }
  };

  void bind(std::uint64_t fingerprint) {
    if (bound_ && fingerprint_ == fingerprint) return;
    entries_.clear();
    seen_.clear();
    fingerprint_ = fingerprint;
    bound_ = true;
  }

  const Entry* lookup(const StateVector& s) const {
    auto it = entries_.find(s);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void record_fail(const StateVector& s, int depth, std::vector<StateVector> witness) {
    Entry& e = entries_[s];
    if (depth > e.fail_depth) e.fail_depth = depth;
    if (witness.size() > e.witness.size()) e.witness = std::move(witness);
  }

  // Returns true when the state was not in the seen set before.
  bool note_seen(const StateVector& s) { return seen_.insert(s).second; }

  std::size_t size() const { return entries_.size(); }
  std::size_t seen_count() const { return seen_.size(); }
  std::uint64_t fingerprint() const { return fingerprint_; }

 private:
  std::unordered_map<StateVector, Entry, StateHash> entries_;
  std::unordered_set<StateVector, StateHash> seen_;
  std::uint64_t fingerprint_ = 0;
  bool bound_ = false;
};

enum class SolveStatus {
  Solved,
  ProvenUnsolvable,          // some completed round generated no depth cutoff
  DepthBudgetExhausted,      // max_depth reached, cutoffs still occurring
  ExpansionBudgetExceeded,
};

struct SolveResult {
  SolveStatus status = SolveStatus::DepthBudgetExhausted;
  std::optional<Solution> solution;
  SearchStats stats;
};

// Iterative-deepening DFS with path constraints, failure detection and
// failed-evaluation caching. learning=Persist requires `cache`; During uses a
// private per-solve cache; None uses no cache.
SolveResult solve_iddfs(const ProblemSpace& space, const ProblemInstance& instance,
                        const SearchConfig& config, EvaluationCache* cache = nullptr);

struct BfsResult {
  std::optional<Solution> solution;
  long long reachable_count = 0;  // distinct states reachable from the initial state
};

// Optimality oracle: plain breadth-first search, no constraints, no failure
// detection, full reachable-set enumeration.
BfsResult solve_bfs(const ProblemSpace& space, const ProblemInstance& instance);

enum class Evaluation { Goal, Failure, DepthCutoff, Ongoing };

// Pure state evaluation as seen by the solver: Goal wins; any non-goal state
// at remaining_depth 0 is a DepthCutoff; failure predicate and cached
// dead-ends classify as Failure.
Evaluation evaluate(const ProblemSpace& space, const ProblemInstance& instance,
                    const StateVector& state, int remaining_depth,
                    const SearchConfig& config, const EvaluationCache* cache = nullptr);

// One line per step: "<n>: <OP>(<args>)" followed by one "<var>: <value>"
// line per variable in declaration order.
std::string format_trace(const ProblemSpace& space, const Solution& solution);

struct TraceReplay {
  bool ok = false;
  std::string error;
  std::vector<StateVector> states;  // state after each step
};

// Re-executes a trace from `initial` through apply(), cross-checking the
// variable lines against the recomputed states.
TraceReplay replay_trace(const ProblemSpace& space, const StateVector& initial,
                         const std::string& trace_text);

}  // namespace pspace
