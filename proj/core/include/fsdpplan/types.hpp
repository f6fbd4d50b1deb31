#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

// Canonical units everywhere in this library: bytes, seconds, bytes/second,
// FLOPs/second. Config files may use suffixed strings ("40GiB", "200Gbps");
// they are converted at parse time and never leak past units.cpp.

namespace fsdpplan {

inline constexpr double kGiB = 1073741824.0;
inline constexpr double kMiB = 1048576.0;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnknownPreset : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoFeasibleConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Stage12 shards optimizer state and gradients; Stage3 additionally shards
// the parameters themselves (full FSDP).
enum class ZeroStage { Stage12, Stage3 };

const char* to_string(ZeroStage stage);
ZeroStage zero_stage_from_string(const std::string& s);  // "12"|"1/2"|"3", throws ParseError

struct ModelSpec {
  std::string name;
  long long layers = 0;      // L
  long long hidden = 0;      // H (model width; the head count never enters a formula)
  long long heads = 0;       // informational only
  long long seq_len = 2048;  // tokens per sequence
  int bytes_per_value = 2;   // Q: 2 (BF16/FP16) or 4 (FP32)

  void validate() const;  // throws ValidationError naming the bad field
};

struct ClusterSpec {
  std::string name;
  long long num_gpus = 1;     // N
  double gpu_mem_bytes = 0;   // M_MAX per GPU
  double reserved_bytes = 0;  // framework/fragmentation reserve per GPU
  double peak_flops = 0;      // per GPU
  double bandwidth_bps = 0;   // effective per-GPU inter-node share, bytes/second
  double latency_s = 0;       // per layer-collective hop

  void validate() const;
};

struct TrainPlan {
  double gamma = 0.0;  // fraction of activations kept live (1 = no recompute, 0 = checkpoints only)
  ZeroStage stage = ZeroStage::Stage3;
  double assumed_hfu = 1.0;  // compute-phase HFU assumption driving phase times
  std::optional<long long> batch_tokens;  // per-GPU tokens/step; derived from memory when absent

  void validate() const;
};

struct MemoryBreakdown {
  long long params_bytes = 0;
  long long grad_bytes = 0;
  long long optimizer_bytes = 0;
  double free_bytes = 0;  // may be negative: infeasible, callers must check
  double act_per_token_bytes = 0;
  double act_total_bytes = 0;
};

struct PerfEstimate {
  double t_transfer = 0;  // seconds, all-gather traffic per step
  double t_fwd = 0, t_bwd = 0, t_step = 0;
  double r_fwd = 0, r_bwd = 0;  // transfer/compute per phase; > 1 = bandwidth-limited
  double throughput = 0;        // K, tokens per GPU per second
  double hfu = 0, mfu = 0;      // fractions of peak FLOPs
  long long tokens = 0;         // E, per GPU per step
  double flops_fwd = 0, flops_bwd = 0, flops_total = 0;  // per token
};

}  // namespace fsdpplan
