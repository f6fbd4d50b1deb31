#include "fsdpplan/model_math.hpp"

#include <algorithm>
#include <cmath>

namespace fsdpplan {

long long param_count(const ModelSpec& m) { return 12LL * m.layers * m.hidden * m.hidden; }

StateMemory model_state_memory(const ModelSpec& m) {
  const long long phi_q = param_count(m) * m.bytes_per_value;
  return {phi_q, phi_q, 6 * phi_q};
}

double free_memory(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const StateMemory s = model_state_memory(m);
  const double n = static_cast<double>(c.num_gpus);
  const double sharded = (static_cast<double>(s.optimizer_bytes) + s.grad_bytes) / n;
  const double params =
      static_cast<double>(s.params_bytes) / (p.stage == ZeroStage::Stage3 ? n : 1.0);
  return c.gpu_mem_bytes - c.reserved_bytes - sharded - params;
}

double activation_memory_per_token(const ModelSpec& m, double gamma) {
  const double lh = static_cast<double>(m.layers) * m.hidden;
  const double q = m.bytes_per_value;
  return (1.0 - gamma) * lh * q + gamma * (16.0 * lh * q + 2.0 * lh);
}

long long token_capacity(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const double free = free_memory(m, c, p);
  if (free <= 0)
    throw InfeasibleConfig("model states leave no free memory on '" + c.name + "' (" +
                           std::to_string(free / kGiB) + " GiB)");
  return static_cast<long long>(std::floor(free / activation_memory_per_token(m, p.gamma)));
}

MemoryBreakdown memory_breakdown(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const StateMemory s = model_state_memory(m);
  MemoryBreakdown b;
  b.params_bytes = s.params_bytes;
  b.grad_bytes = s.grad_bytes;
  b.optimizer_bytes = s.optimizer_bytes;
  b.free_bytes = free_memory(m, c, p);
  b.act_per_token_bytes = activation_memory_per_token(m, p.gamma);
  long long tokens = 0;
  if (p.batch_tokens)
    tokens = *p.batch_tokens;
  else if (b.free_bytes > 0)
    tokens = static_cast<long long>(std::floor(b.free_bytes / b.act_per_token_bytes));
  b.act_total_bytes = static_cast<double>(tokens) * b.act_per_token_bytes;
  return b;
}

double transfer_time(const ModelSpec& m, const ClusterSpec& c) {
  const double traffic = static_cast<double>(param_count(m)) * m.bytes_per_value;
  return traffic / c.bandwidth_bps +
         static_cast<double>(m.layers) * static_cast<double>(c.num_gpus) * c.latency_s;
}

FlopsPerToken flops_per_token(const ModelSpec& m, double gamma) {
  const double fwd = 2.0 * static_cast<double>(param_count(m)) +
                     4.0 * static_cast<double>(m.layers) * m.hidden * m.seq_len;
  return {fwd, (3.0 - gamma) * fwd, (4.0 - gamma) * fwd};
}

PhaseTimes phase_times(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p,
                       long long tokens) {
  const FlopsPerToken f = flops_per_token(m, p.gamma);
  const double budget = p.assumed_hfu * c.peak_flops;
  return {f.fwd * tokens / budget, f.bwd * tokens / budget};
}

double step_time(double t_fwd, double t_bwd, double t_transfer) {
  return std::max(t_fwd, t_transfer) + std::max(t_bwd, t_transfer);
}

PhaseRatios ratios(double t_fwd, double t_bwd, double t_transfer) {
  if (t_fwd <= 0 || t_bwd <= 0)
    throw InfeasibleConfig("phase ratios undefined: compute time is zero");
  return {t_transfer / t_fwd, t_transfer / t_bwd};
}

Utilization metrics(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p,
                    long long tokens, double t_step) {
  const FlopsPerToken f = flops_per_token(m, p.gamma);
  const double k = static_cast<double>(tokens) / t_step;
  return {k, k * f.total / c.peak_flops, 3.0 * k * f.fwd / c.peak_flops};
}

}  // namespace fsdpplan
