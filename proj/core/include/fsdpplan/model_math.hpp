#pragma once

#include "fsdpplan/types.hpp"

// Analytical training-step model: memory footprint, FLOPs, phase times, and
// utilization for one FSDP/ZeRO training step. All functions are pure.

namespace fsdpplan {

// parameter count phi = 12*L*H^2, embedding layers excluded
long long param_count(const ModelSpec& m);

struct StateMemory {
  long long params_bytes = 0;     // Q*phi
  long long grad_bytes = 0;       // Q*phi
  long long optimizer_bytes = 0;  // 6*Q*phi: velocity + moment + full-precision copy
};
StateMemory model_state_memory(const ModelSpec& m);

// per-GPU memory left for activations after the reserve and the sharded
// training state; Stage3 also shards the parameters, Stage12 keeps them whole.
// Negative result means infeasible -- returned, not thrown, so grid search can
// reject points cheaply.
double free_memory(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);

// bytes per token: (1-gamma)*L*H*Q checkpoints + gamma*(16*L*H*Q + 2*L*H) live
double activation_memory_per_token(const ModelSpec& m, double gamma);

// memory-limited tokens per GPU per step, floor of free/per-token.
// Throws InfeasibleConfig when free memory <= 0; returns 0 when free memory
// is positive but below one token (callers surface that as infeasible).
long long token_capacity(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);

// full per-GPU picture at the plan's token count (derived when absent)
MemoryBreakdown memory_breakdown(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p);

// all-gather time per step: phi*Q/bandwidth + L*N*latency
double transfer_time(const ModelSpec& m, const ClusterSpec& c);

struct FlopsPerToken {
  double fwd = 0;    // 2*phi + 4*L*H*l_seq
  double bwd = 0;    // (3-gamma)*fwd: grads cost 2x, recomputation adds (1-gamma)x
  double total = 0;  // (4-gamma)*fwd
};
FlopsPerToken flops_per_token(const ModelSpec& m, double gamma);

struct PhaseTimes {
  double fwd = 0, bwd = 0;  // seconds at the plan's assumed HFU
};
PhaseTimes phase_times(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p,
                       long long tokens);

// step time with communication overlap: max(t_fwd, t_transfer) + max(t_bwd, t_transfer)
double step_time(double t_fwd, double t_bwd, double t_transfer);

struct PhaseRatios {
  double fwd = 0, bwd = 0;  // transfer/compute; a phase is bandwidth-limited iff > 1
};
// throws InfeasibleConfig when a compute time is zero
PhaseRatios ratios(double t_fwd, double t_bwd, double t_transfer);

struct Utilization {
  double throughput = 0;  // K = E/T, tokens per GPU per second
  double hfu = 0;         // K*F/peak: all executed FLOPs incl. recomputation
  double mfu = 0;         // 3*K*F_fwd/peak: useful model FLOPs only
};
Utilization metrics(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p,
                    long long tokens, double t_step);

}  // namespace fsdpplan
