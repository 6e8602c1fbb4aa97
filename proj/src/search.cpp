#include "pspace/search.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>
#include <stdexcept>

namespace pspace {

namespace {

// Sentinel for "no path-constraint match in this subtree".
constexpr int kNoMatch = INT32_MAX;

struct Dfs {
  const ProblemSpace& space;
  const ProblemInstance& instance;
  const SearchConfig& config;
  std::vector<GroundOperator> ops;
  std::vector<int> caps;
  EvaluationCache* cache = nullptr;
  SearchStats stats;
  bool budget_hit = false;
  bool use_no_undo = false;
  bool use_no_loop = false;

  // Flat path storage: states on the current path, one row per depth.
  std::vector<std::vector<int>> path;
  std::vector<int> chosen;  // operator index per step of the found solution

  Dfs(const ProblemSpace& sp, const ProblemInstance& inst, const SearchConfig& cfg)
      : space(sp), instance(inst), config(cfg) {
    ops = ground_operators(sp);
    if (cfg.ordering == Ordering::Seeded) {
      std::mt19937_64 rng(cfg.seed);
      std::shuffle(ops.begin(), ops.end(), rng);
    }
    caps = sp.capacities();
    use_no_undo = cfg.path_constraints_enabled && sp.no_undo;
    use_no_loop = cfg.path_constraints_enabled && sp.no_loop;
  }

  bool is_goal(std::span<const int> s) const {
    EvalEnv env{s, caps};
    return instance.goal && eval_bool(*instance.goal, env);
  }

  bool is_failure(std::span<const int> s) const {
    EvalEnv env{s, caps};
    return config.failure_detection && space.failure && eval_bool(*space.failure, env);
  }

  void note_generated(std::span<const int> s) {
    stats.generated++;
    if (cache) {
      StateVector sv{std::vector<int>(s.begin(), s.end())};
      if (cache->note_seen(sv)) stats.novel_generated++;
    } else {
      stats.novel_generated++;
    }
  }

  struct SubResult {
    bool found = false;
    int min_match = kNoMatch;  // lowest path index referenced by constraint pruning
    std::vector<StateVector> witness;  // deepest clean path evidenced below this node
  };

  // A cached witness may only serve as frontier evidence here if appending it
  // to the current path keeps the path constraint satisfied; `depth` is the
  // path index of the witness's would-be parent's parent (the borrow happens
  // at a child of path[depth]).
  bool witness_clear(const std::vector<StateVector>& w, int depth) const {
    if (use_no_loop) {
      for (const StateVector& ws : w)
        for (int i = 0; i <= depth; i++)
          if (ws.values == path[static_cast<size_t>(i)]) return false;
    } else if (use_no_undo) {
      // Only the witness's first step can undo: it must not step back onto
      // the borrow point's parent. Deeper pairs were validated when recorded.
      if (!w.empty() && w.front().values == path[static_cast<size_t>(depth)]) return false;
    }
    return true;
  }

  // Keep the longer of res.witness and next + suffix.
  static void adopt_witness(SubResult& res, const std::vector<int>& next,
                            const std::vector<StateVector>& suffix) {
    if (1 + suffix.size() <= res.witness.size()) return;
    res.witness.clear();
    res.witness.reserve(1 + suffix.size());
    res.witness.emplace_back(StateVector{next});
    res.witness.insert(res.witness.end(), suffix.begin(), suffix.end());
  }

  // `depth` = path index of s (path[depth] == s); `remaining` > 0.
  // `path` is pre-sized by the caller: deeper rows stay put during recursion,
  // so `next` below remains valid and unmodified across the recursive call.
  SubResult descend(std::span<const int> s, int depth, int remaining) {
    SubResult res;
    if (budget_hit) return res;
    stats.expansions++;
    if (config.expansion_budget && stats.expansions > *config.expansion_budget) {
      budget_hit = true;
      return res;
    }
    std::vector<int>& next = path[static_cast<size_t>(depth) + 1];
    next.resize(s.size());

    for (size_t oi = 0; oi < ops.size(); oi++) {
      const GroundOperator& op = ops[oi];
      const OperatorSchema& schema = space.schemas[static_cast<size_t>(op.schema)];
      EvalEnv env{s, caps, op.binding};
      if (!eval_bool(*schema.precondition, env)) continue;
      apply_unchecked(space, op, s, next);
      note_generated(next);

      if (is_goal(next)) {
        chosen.assign(1, static_cast<int>(oi));
        res.found = true;
        return res;
      }

      // Failure first: it prunes regardless of how the state was reached, so
      // it must not count as a path-constraint match (which would taint the
      // subtree and block caching).
      if (is_failure(next)) continue;

      // Path constraints: no_loop rejects any state already on the path,
      // no_undo just the predecessor's predecessor.
      int match = kNoMatch;
      if (use_no_loop) {
        for (int i = 0; i <= depth; i++)
          if (std::equal(next.begin(), next.end(), path[static_cast<size_t>(i)].begin())) {
            match = i;
            break;
          }
      } else if (use_no_undo && depth >= 1) {
        if (std::equal(next.begin(), next.end(), path[static_cast<size_t>(depth) - 1].begin()))
          match = depth - 1;
      }
      if (match != kNoMatch) {
        res.min_match = std::min(res.min_match, match);
        continue;
      }

      if (remaining == 1) {
        adopt_witness(res, next, {});
        continue;
      }

      if (cache) {
        StateVector key{next};
        if (const EvaluationCache::Entry* e = cache->lookup(key)) {
          // A finite entry covers any budget; a frontier entry covers the
          // child's budget of remaining-1. The prune additionally needs the
          // entry's witness to compose with the current path, otherwise the
          // borrowed frontier evidence would count a path that revisits a
          // state; in that case fall through and re-explore for an honest
          // witness under this prefix.
          if ((e->finite() || e->fail_depth >= remaining - 1) &&
              witness_clear(e->witness, depth)) {
            stats.cache_hits++;
            adopt_witness(res, next, e->witness);
            continue;
          }
        }
      }

      SubResult child = descend(next, depth + 1, remaining - 1);
      if (budget_hit) return res;
      if (child.found) {
        chosen.push_back(static_cast<int>(oi));
        res.found = true;
        return res;
      }
      res.min_match = std::min(res.min_match, child.min_match);
      adopt_witness(res, next, child.witness);

      // Cache the child's failure only when nothing in its subtree referenced
      // a path state above the child (a prefix-dependent failure is not a
      // fact about the state alone).
      if (cache && child.min_match >= depth + 1)
        cache->record_fail(StateVector{next}, remaining - 1, std::move(child.witness));
    }
    return res;
  }
};

}  // namespace

SolveResult solve_iddfs(const ProblemSpace& space, const ProblemInstance& instance,
                        const SearchConfig& config, EvaluationCache* cache) {
  if (!instance.goal) throw std::invalid_argument("solve_iddfs: instance has no goal");
  if (config.learning == LearningMode::Persist && !cache)
    throw std::invalid_argument("solve_iddfs: learning=Persist requires a cache");

  SolveResult result;
  Dfs dfs(space, instance, config);

  EvaluationCache local;
  std::uint64_t fp = space_fingerprint(space, instance.goal, config.failure_detection,
                                       config.path_constraints_enabled);
  switch (config.learning) {
    case LearningMode::None: dfs.cache = nullptr; break;
    case LearningMode::During:
      local.bind(fp);
      dfs.cache = &local;
      break;
    case LearningMode::Persist:
      cache->bind(fp);
      dfs.cache = cache;
      break;
  }

  // Depth-0 round: the initial state may already satisfy the goal.
  if (dfs.is_goal(instance.initial.values)) {
    result.status = SolveStatus::Solved;
    result.solution = Solution{};
    result.stats = dfs.stats;
    result.stats.solution_length = 0;
    return result;
  }

  dfs.path.resize(static_cast<size_t>(config.max_depth) + 2);
  dfs.path[0] = instance.initial.values;

  for (int limit = 1; limit <= config.max_depth; limit++) {
    // Consult the cache at the root before a round. A finite entry is a
    // completed exhaustion proof; a frontier entry at least as deep as the
    // limit makes the round a no-op (its witness covers the horizon, and
    // above the root there is no path for it to collide with).
    bool skip_round = false;
    bool frontier = false;  // evidence of clean states at the depth horizon
    if (dfs.cache) {
      if (const EvaluationCache::Entry* e = dfs.cache->lookup(instance.initial)) {
        if (e->finite()) {
          dfs.stats.cache_hits++;
          result.status = SolveStatus::ProvenUnsolvable;
          result.stats = dfs.stats;
          return result;
        }
        if (e->fail_depth >= limit) {
          dfs.stats.cache_hits++;
          skip_round = true;
          frontier = true;
        }
      }
    }

    Dfs::SubResult res;
    if (!skip_round) {
      res = dfs.descend(instance.initial.values, 0, limit);
      frontier = static_cast<int>(res.witness.size()) >= limit;
    }
    if (dfs.budget_hit) {
      result.status = SolveStatus::ExpansionBudgetExceeded;
      result.stats = dfs.stats;
      result.stats.iterations = dfs.stats.iterations;
      return result;
    }
    dfs.stats.iterations++;

    if (res.found) {
      // `chosen` holds operator indices from goal back to root.
      Solution sol;
      StateVector s = instance.initial;
      for (auto it = dfs.chosen.rbegin(); it != dfs.chosen.rend(); ++it) {
        const GroundOperator& op = dfs.ops[static_cast<size_t>(*it)];
        s = apply(space, op, s);
        sol.steps.push_back({op.display, s});
      }
      dfs.stats.solution_length = sol.length();
      result.status = SolveStatus::Solved;
      result.solution = std::move(sol);
      result.stats = dfs.stats;
      return result;
    }

    // The root is path index 0, so no constraint match can be above it; its
    // failed rounds are always sound to cache.
    if (!skip_round && dfs.cache)
      dfs.cache->record_fail(instance.initial, limit, std::move(res.witness));

    if (!frontier) {
      result.status = SolveStatus::ProvenUnsolvable;
      result.stats = dfs.stats;
      return result;
    }
  }

  result.status = SolveStatus::DepthBudgetExhausted;
  result.stats = dfs.stats;
  return result;
}

BfsResult solve_bfs(const ProblemSpace& space, const ProblemInstance& instance) {
  if (!instance.goal) throw std::invalid_argument("solve_bfs: instance has no goal");
  BfsResult result;
  std::vector<GroundOperator> ops = ground_operators(space);
  std::vector<int> caps = space.capacities();

  struct Visit {
    int parent = -1;  // index into order
    int op = -1;
  };
  std::vector<StateVector> order;
  std::vector<Visit> meta;
  std::unordered_map<StateVector, int, StateHash> index;

  auto push = [&](StateVector s, int parent, int op) {
    int id = static_cast<int>(order.size());
    index.emplace(s, id);
    order.push_back(std::move(s));
    meta.push_back({parent, op});
    return id;
  };

  push(instance.initial, -1, -1);
  int goal_id = -1;
  {
    EvalEnv env{instance.initial.values, caps};
    if (eval_bool(*instance.goal, env)) goal_id = 0;
  }

  std::vector<int> buf(space.vars.size());
  for (size_t head = 0; head < order.size(); head++) {
    // push() may reallocate `order`; work on a copy of the head state
    const StateVector s = order[head];
    for (size_t oi = 0; oi < ops.size(); oi++) {
      if (!applicable(space, ops[oi], s.values)) continue;
      apply_unchecked(space, ops[oi], s.values, buf);
      StateVector t{buf};
      if (index.contains(t)) continue;
      int id = push(std::move(t), static_cast<int>(head), static_cast<int>(oi));
      if (goal_id < 0) {
        EvalEnv env{order[static_cast<size_t>(id)].values, caps};
        if (eval_bool(*instance.goal, env)) goal_id = id;
      }
    }
  }

  result.reachable_count = static_cast<long long>(order.size());
  if (goal_id >= 0) {
    Solution sol;
    for (int id = goal_id; meta[static_cast<size_t>(id)].parent >= 0;
         id = meta[static_cast<size_t>(id)].parent)
      sol.steps.push_back({ops[static_cast<size_t>(meta[static_cast<size_t>(id)].op)].display,
                           order[static_cast<size_t>(id)]});
    std::reverse(sol.steps.begin(), sol.steps.end());
    result.solution = std::move(sol);
  }
  return result;
}

Evaluation evaluate(const ProblemSpace& space, const ProblemInstance& instance,
                    const StateVector& state, int remaining_depth,
                    const SearchConfig& config, const EvaluationCache* cache) {
  switch (classify(space, instance, state.values, false)) {
    case StateClass::Goal: return Evaluation::Goal;
    default: break;
  }
  if (remaining_depth <= 0) return Evaluation::DepthCutoff;
  if (classify(space, instance, state.values, config.failure_detection) == StateClass::Failure)
    return Evaluation::Failure;
  if (cache && config.learning != LearningMode::None) {
    if (const EvaluationCache::Entry* e = cache->lookup(state))
      if (e->finite() || e->fail_depth >= remaining_depth) return Evaluation::Failure;
  }
  return Evaluation::Ongoing;
}

std::string format_trace(const ProblemSpace& space, const Solution& solution) {
  std::string out;
  int n = 0;
  for (const SolutionStep& step : solution.steps) {
    n++;
    std::string display = step.op_display;
    size_t paren = display.find('(');
    for (size_t i = 0; i < paren && i < display.size(); i++)
      display[i] = static_cast<char>(std::toupper(static_cast<unsigned char>(display[i])));
    out += std::to_string(n) + ": " + display + "\n";
    for (size_t v = 0; v < space.vars.size(); v++)
      out += space.vars[v].name + ": " + std::to_string(step.state.values[v]) + "\n";
  }
  return out;
}

TraceReplay replay_trace(const ProblemSpace& space, const StateVector& initial,
                         const std::string& trace_text) {
  TraceReplay replay;
  std::vector<GroundOperator> ops = ground_operators(space);
  StateVector current = initial;

  std::istringstream in(trace_text);
  std::string line;
  int expected_step = 1;
  size_t var_cursor = space.vars.size();  // vars matched for the current step

  auto lower = [](std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t colon = line.find(": ");
    if (colon == std::string::npos) {
      replay.error = "malformed trace line: " + line;
      return replay;
    }
    std::string head = line.substr(0, colon);
    std::string rest = line.substr(colon + 2);
    if (head == std::to_string(expected_step)) {
      if (var_cursor != space.vars.size()) {
        replay.error = "step " + head + " begins before all variables were listed";
        return replay;
      }
      std::string want = lower(rest);
      const GroundOperator* found = nullptr;
      for (const GroundOperator& op : ops)
        if (lower(op.display) == want) { found = &op; break; }
      if (!found) {
        replay.error = "unknown operator in trace: " + rest;
        return replay;
      }
      if (!applicable(space, *found, current.values)) {
        replay.error = "operator " + rest + " not applicable at step " + head;
        return replay;
      }
      current = apply(space, *found, current);
      replay.states.push_back(current);
      expected_step++;
      var_cursor = 0;
    } else {
      int vi = space.var_index(head);
      if (vi < 0) {
        replay.error = "unknown variable in trace: " + head;
        return replay;
      }
      if (rest != std::to_string(current.values[static_cast<size_t>(vi)])) {
        replay.error = "trace claims " + head + " = " + rest + " but replay computed " +
                       std::to_string(current.values[static_cast<size_t>(vi)]);
        return replay;
      }
      var_cursor++;
    }
  }
  if (var_cursor != space.vars.size() && !replay.states.empty()) {
    replay.error = "trace ends mid-step";
    return replay;
  }
  replay.ok = true;
  return replay;
}

}  // namespace pspace
