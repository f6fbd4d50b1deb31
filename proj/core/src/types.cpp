#include "fsdpplan/types.hpp"

namespace fsdpplan {

const char* to_string(ZeroStage stage) {
  return stage == ZeroStage::Stage3 ? "zero3" : "zero12";
}

ZeroStage zero_stage_from_string(const std::string& s) {
  if (s == "3" || s == "zero3" || s == "stage3") return ZeroStage::Stage3;
  if (s == "12" || s == "1/2" || s == "zero12" || s == "stage12") return ZeroStage::Stage12;
  throw ParseError("unknown ZeRO stage '" + s + "' (expected 3, 12, or 1/2)");
}

void ModelSpec::validate() const {
  if (layers < 1) throw ValidationError("model '" + name + "': layers must be >= 1");
  if (hidden < 1) throw ValidationError("model '" + name + "': hidden must be >= 1");
  if (heads < 1) throw ValidationError("model '" + name + "': heads must be >= 1");
  if (seq_len < 1) throw ValidationError("model '" + name + "': seq_len must be >= 1");
  if (bytes_per_value != 2 && bytes_per_value != 4)
    throw ValidationError("model '" + name + "': bytes_per_value must be 2 or 4");
}

void ClusterSpec::validate() const {
  if (num_gpus < 1) throw ValidationError("cluster '" + name + "': num_gpus must be >= 1");
  if (gpu_mem_bytes <= 0) throw ValidationError("cluster '" + name + "': gpu_mem must be positive");
  if (reserved_bytes < 0)
    throw ValidationError("cluster '" + name + "': reserved memory must be >= 0");
  if (reserved_bytes >= gpu_mem_bytes)
    throw ValidationError("cluster '" + name + "': reserved memory must be below gpu_mem");
  if (peak_flops <= 0) throw ValidationError("cluster '" + name + "': peak_flops must be positive");
  if (bandwidth_bps <= 0)
    throw ValidationError("cluster '" + name + "': bandwidth must be positive");
  if (latency_s < 0) throw ValidationError("cluster '" + name + "': latency must be >= 0");
}

void TrainPlan::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("plan: gamma must be in [0,1]");
  if (!(assumed_hfu > 0.0 && assumed_hfu <= 1.0))
    throw ValidationError("plan: assumed_hfu must be in (0,1]");
  if (batch_tokens && *batch_tokens < 1)
    throw ValidationError("plan: batch_tokens must be a positive integer");
}

}  // namespace fsdpplan
