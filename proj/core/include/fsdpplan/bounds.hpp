#pragma once

#include "fsdpplan/types.hpp"

// Closed-form ceilings on token capacity, utilization, and throughput for a
// (model, cluster, plan) triple. The "loose" forms drop the gamma dependence
// of activation memory (worst case gamma = 0); the "tight" forms keep the
// plan's gamma in the denominator. Both assume the step is compute-bound
// (transfer/compute ratio <= 1); bandwidth-bound operating points can exceed
// the utilization ceilings -- see the threshold functions in search.hpp's
// evaluate_point output (r_fwd) for the regime test.

namespace fsdpplan {

enum class BindingResource { Bandwidth, Memory, Compute };
const char* to_string(BindingResource r);

struct BoundReport {
  double e_max = 0;      // tokens per GPU at the gamma = 0 memory floor
  double hfu_bound = 0;  // loose forms; hfu/mfu clamped to [0,1]
  double mfu_bound = 0;
  double k_bound = 0;  // tokens per GPU per second, unclamped
  double hfu_bound_tight = 0;
  double mfu_bound_tight = 0;
  double k_bound_tight = 0;
  bool hfu_clamped = false;  // true when the raw inequality exceeded 1
  bool mfu_clamped = false;
  // which resource saturates first; planner diagnostic, not a published quantity
  BindingResource binding = BindingResource::Compute;
};

// E_MAX = free/(L*H*Q), additionally capped by gpu_mem/(L*H*Q).
// Throws InfeasibleConfig when free memory <= 0.
double max_token_capacity(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);

// (2 + l/(3H)) / (L*H*Q^2) * bandwidth*free/peak, clamped to [0,1]
double hfu_bound(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);
// (2 + l/(3H)) * 3/(4*L*H*Q^2) * bandwidth*free/peak, clamped to [0,1]
double mfu_bound(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);
// free*bandwidth / (24*Q^2*L^2*H^3)
double throughput_bound(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);

// pre-relaxation forms with denominator (Q + 15*gamma*Q + 2*gamma) at the plan's gamma
double hfu_bound_tight(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);
double mfu_bound_tight(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);
double throughput_bound_tight(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);

BoundReport bound_report(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);

}  // namespace fsdpplan
