#include "fsdpplan/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "fsdpplan/model_math.hpp"

namespace fsdpplan {

namespace {

double checked_free(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const double free = free_memory(m, c, p);
  if (free <= 0)
    throw InfeasibleConfig("model states leave no free memory on '" + c.name + "' (" +
                           std::to_string(free / kGiB) + " GiB)");
  return free;
}

// shared prefactor of the utilization ceilings: (2 + l/(3H)) * bw * free / peak
double rate_prefactor(const ModelSpec& m, const ClusterSpec& c, double free) {
  const double seq_term = 2.0 + static_cast<double>(m.seq_len) / (3.0 * m.hidden);
  return seq_term * c.bandwidth_bps * free / c.peak_flops;
}

// activation-memory shape factor at the plan's gamma: Q + 15*gamma*Q + 2*gamma
double gamma_denominator(const ModelSpec& m, double gamma) {
  const double q = m.bytes_per_value;
  return q + 15.0 * gamma * q + 2.0 * gamma;
}

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

}  // namespace

const char* to_string(BindingResource r) {
  switch (r) {
    case BindingResource::Bandwidth: return "bandwidth";
    case BindingResource::Memory: return "memory";
    default: return "compute";
  }
}

double max_token_capacity(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const double free = checked_free(m, c, p);
  const double per_token =
      static_cast<double>(m.layers) * m.hidden * m.bytes_per_value;  // gamma = 0 floor
  return std::min(free / per_token, c.gpu_mem_bytes / per_token);
}

double hfu_bound(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const double free = checked_free(m, c, p);
  const double lhq2 = static_cast<double>(m.layers) * m.hidden * m.bytes_per_value *
                      m.bytes_per_value;
  return clamp01(rate_prefactor(m, c, free) / lhq2);
}

double mfu_bound(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const double free = checked_free(m, c, p);
  const double lhq2 = static_cast<double>(m.layers) * m.hidden * m.bytes_per_value *
                      m.bytes_per_value;
  return clamp01(rate_prefactor(m, c, free) * 3.0 / (4.0 * lhq2));
}

double throughput_bound(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const double free = checked_free(m, c, p);
  const double q2 = static_cast<double>(m.bytes_per_value) * m.bytes_per_value;
  const double l2 = static_cast<double>(m.layers) * m.layers;
  const double h3 = static_cast<double>(m.hidden) * m.hidden * m.hidden;
  return free * c.bandwidth_bps / (24.0 * q2 * l2 * h3);
}

double hfu_bound_tight(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const double free = checked_free(m, c, p);
  const double lhq = static_cast<double>(m.layers) * m.hidden * m.bytes_per_value;
  return clamp01(rate_prefactor(m, c, free) / (gamma_denominator(m, p.gamma) * lhq));
}

double mfu_bound_tight(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const double free = checked_free(m, c, p);
  const double lhq = static_cast<double>(m.layers) * m.hidden * m.bytes_per_value;
  const double denom = gamma_denominator(m, p.gamma) * (4.0 - p.gamma) * lhq;
  return clamp01(rate_prefactor(m, c, free) * 3.0 / denom);
}

double throughput_bound_tight(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const double free = checked_free(m, c, p);
  const double lhq = static_cast<double>(m.layers) * m.hidden * m.bytes_per_value;
  const double phi = static_cast<double>(param_count(m));
  return free * c.bandwidth_bps / (gamma_denominator(m, p.gamma) * phi * 2.0 * lhq);
}

BoundReport bound_report(const ModelSpec& m, const ClusterSpec& c, const TrainPlan& p) {
  const double free = checked_free(m, c, p);
  BoundReport r;
  r.e_max = max_token_capacity(m, c, p);

  const double lhq2 =
      static_cast<double>(m.layers) * m.hidden * m.bytes_per_value * m.bytes_per_value;
  const double raw_hfu = rate_prefactor(m, c, free) / lhq2;
  const double raw_mfu = raw_hfu * 3.0 / 4.0;
  r.hfu_clamped = raw_hfu > 1.0;
  r.mfu_clamped = raw_mfu > 1.0;
  r.hfu_bound = clamp01(raw_hfu);
  r.mfu_bound = clamp01(raw_mfu);
  r.k_bound = throughput_bound(m, c, p);
  r.hfu_bound_tight = hfu_bound_tight(m, c, p);
  r.mfu_bound_tight = mfu_bound_tight(m, c, p);
  r.k_bound_tight = throughput_bound_tight(m, c, p);

  // saturation heuristic: bandwidth if the forward phase is transfer-limited
  // even at the memory ceiling and full assumed HFU; memory if the ceiling
  // cannot hold one sequence; compute otherwise
  const double t_transfer = transfer_time(m, c);
  const double t_fwd_at_emax = flops_per_token(m, p.gamma).fwd * r.e_max / c.peak_flops;
  if (t_transfer > t_fwd_at_emax)
    r.binding = BindingResource::Bandwidth;
  else if (r.e_max < static_cast<double>(m.seq_len))
    r.binding = BindingResource::Memory;
  else
    r.binding = BindingResource::Compute;
  return r;
}

}  // namespace fsdpplan
