#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fsdpplan/bounds.hpp"
#include "fsdpplan/model_math.hpp"

// Exhaustive grid search over (assumed HFU, gamma, ZeRO stage) plus the
// multi-model/multi-cluster sweep built on top of it.

namespace fsdpplan {

enum class Objective { MaxMFU, MaxHFU, MaxThroughput };
const char* to_string(Objective o);
Objective objective_from_string(const std::string& s);  // "mfu"|"hfu"|"tgs", throws ParseError

struct GridParams {
  double alpha_min = 0.01, alpha_max = 1.0, alpha_step = 0.01;
  double gamma_min = 0.0, gamma_max = 1.0, gamma_step = 0.01;
  bool stage12 = true, stage3 = true;
  Objective objective = Objective::MaxMFU;

  void validate() const;          // throws ValidationError
  long long point_count() const;  // exact cartesian size, capped at 1e6 by validate()
  // inclusive axes on integer micro-units so a 0.05 grid is exactly a subset
  // of a 0.01 grid (no floating-point drift over 100 steps)
  std::vector<double> alpha_axis() const;
  std::vector<double> gamma_axis() const;
};

struct EvalResult {
  bool feasible = false;
  std::string reason;     // set when infeasible, names the violated constraint
  PerfEstimate estimate;  // valid only when feasible
};

// One grid point: memory -> tokens -> phase times at the plan's assumed HFU ->
// step time -> throughput/HFU/MFU. Infeasible when free memory <= 0, the token
// capacity is zero, a requested batch_tokens does not fit, or the achieved HFU
// exceeds the assumed HFU (the algorithm's acceptance test; the last cannot
// trigger under derived tokens since step time >= t_fwd + t_bwd).
EvalResult evaluate_point(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);

struct FrontierRow {
  TrainPlan plan;
  PerfEstimate estimate;
};

struct SearchResult {
  TrainPlan best_plan;
  PerfEstimate best_estimate;
  long long feasible_count = 0;
  long long evaluated_count = 0;
  std::vector<FrontierRow> frontier;  // all feasible points, grid order; only when requested
};

struct SearchOptions {
  bool collect_frontier = false;
  int num_threads = 0;  // 0 or 1 = serial; winners are identical either way
};

// Evaluates every grid point, returns the best under grid.objective.
// Tie-break: higher gamma, then Stage3 over Stage12, then lower assumed HFU.
// seq_len overrides the model's sequence length when given.
// Throws NoFeasibleConfig when nothing on the grid is feasible.
SearchResult grid_search(const ModelSpec& m, const ClusterSpec& c, const GridParams& grid,
                         std::optional<long long> seq_len = std::nullopt,
                         const SearchOptions& opts = {});

struct SweepRow {
  std::string model_name;
  long long params = 0;
  std::string cluster_name;
  long long num_gpus = 0;
  long long seq_len = 0;
  bool feasible = false;
  std::string reason;  // set when the whole grid was infeasible
  TrainPlan plan;
  PerfEstimate estimate;
  BindingResource binding = BindingResource::Compute;
};

// one row per (model, cluster, gpu count); per-row infeasibility is recorded
// in-row and never aborts the sweep
std::vector<SweepRow> sweep(const std::vector<ModelSpec>& models,
                            const std::vector<ClusterSpec>& clusters,
                            const std::vector<long long>& gpu_counts, const GridParams& grid);

}  // namespace fsdpplan
