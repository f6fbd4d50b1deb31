#include <doctest.h>

#include "fsdpplan/bounds.hpp"
#include "fsdpplan/presets.hpp"

using namespace fsdpplan;

namespace {

ModelSpec preset(const char* name) { return builtin_catalog().model_or_throw(name); }

ClusterSpec cluster(const char* name, long long n) {
  ClusterSpec c = builtin_catalog().cluster_or_throw(name);
  c.num_gpus = n;
  return c;
}

}  // namespace

TEST_SUITE("bounds") {

TEST_CASE("token ceiling at the checkpoint-only memory floor") {
  ModelSpec m = preset("13b");
  m.seq_len = 10240;
  TrainPlan p;
  CHECK(max_token_capacity(m, cluster("40GB-A100-200Gbps", 8), p) == 17'203.2);
  // the ceiling can never exceed what the whole GPU could hold
  const ClusterSpec c = cluster("40GB-A100-200Gbps", 8);
  CHECK(max_token_capacity(m, c, p) <= c.gpu_mem_bytes / 409'600.0);
  TrainPlan unsharded;
  unsharded.stage = ZeroStage::Stage12;
  CHECK_THROWS_AS(max_token_capacity(preset("310b"), c, unsharded), InfeasibleConfig);
}

TEST_CASE("loose utilization ceilings clamp to 1 when compute-limited") {
  ModelSpec m = preset("13b");
  m.seq_len = 10240;
  const ClusterSpec c = cluster("40GB-A100-200Gbps", 8);
  TrainPlan p;
  const BoundReport r = bound_report(m, c, p);
  CHECK(r.hfu_bound == 1.0);
  CHECK(r.hfu_clamped);
  CHECK(r.mfu_bound == 1.0);
  CHECK(r.mfu_clamped);
  CHECK(hfu_bound(m, c, p) == 1.0);
  CHECK(mfu_bound(m, c, p) == 1.0);
  CHECK(r.k_bound == 8'544.921875);
  CHECK(throughput_bound(m, c, p) == r.k_bound);
}

TEST_CASE("tight ceilings keep the plan's gamma in the denominator") {
  ModelSpec m = preset("13b");
  m.seq_len = 10240;
  const ClusterSpec c = cluster("40GB-A100-200Gbps", 8);
  TrainPlan p;
  p.gamma = 0.5;
  CHECK(hfu_bound_tight(m, c, p) == 0.20421652421652423);
  CHECK(throughput_bound_tight(m, c, p) == 949.4357638888889);
  // the tight MFU ceiling carries the executed/useful factor 3/(4 - gamma)
  CHECK(mfu_bound_tight(m, c, p) ==
        doctest::Approx(hfu_bound_tight(m, c, p) * 3.0 / 3.5).epsilon(1e-12));
}

TEST_CASE("tight equals loose at gamma zero, shrinks as gamma grows") {
  const ModelSpec m = preset("66b");
  const ClusterSpec c = cluster("40GB-A100-100Gbps", 512);
  TrainPlan p;  // gamma = 0
  CHECK(throughput_bound_tight(m, c, p) == throughput_bound(m, c, p));
  // loose HFU compares pre-clamp, so pick a point that is not clamped
  const BoundReport r0 = bound_report(m, c, p);
  if (!r0.hfu_clamped) CHECK(hfu_bound_tight(m, c, p) == hfu_bound(m, c, p));
  TrainPlan half = p;
  half.gamma = 0.5;
  CHECK(hfu_bound_tight(m, c, half) < hfu_bound_tight(m, c, p));
  CHECK(throughput_bound_tight(m, c, half) < throughput_bound_tight(m, c, p));
}

TEST_CASE("throughput ceiling scales linearly in bandwidth and free memory") {
  const ModelSpec m = preset("30b");
  TrainPlan p;
  ClusterSpec c = cluster("40GB-A100-100Gbps", 512);
  const double base = throughput_bound(m, c, p);
  c.bandwidth_bps *= 2.0;
  CHECK(throughput_bound(m, c, p) == 2.0 * base);
}

TEST_CASE("binding resource heuristic") {
  TrainPlan p;
  // 175b at 100 Gbps: transfer exceeds even the memory-ceiling forward time
  CHECK(bound_report(preset("175b"), cluster("40GB-A100-100Gbps", 512), p).binding ==
        BindingResource::Bandwidth);
  // 13b on a small cluster at 200 Gbps: plenty of room, compute saturates
  CHECK(bound_report(preset("13b"), cluster("40GB-A100-200Gbps", 8), p).binding ==
        BindingResource::Compute);
  // 13b on 16 GiB parts with a 32k context: one sequence no longer fits
  ModelSpec long_ctx = preset("13b");
  long_ctx.seq_len = 32768;
  const BoundReport r = bound_report(long_ctx, cluster("16GB-V100-200Gbps", 512), p);
  CHECK(r.e_max == 6'049'234'944.0 / 409'600.0);
  CHECK(r.e_max < 32768.0);
  CHECK(r.binding == BindingResource::Memory);
}

TEST_CASE("bound report surfaces infeasible states as exceptions") {
  TrainPlan unsharded;
  unsharded.stage = ZeroStage::Stage12;
  CHECK_THROWS_AS(bound_report(preset("310b"), cluster("40GB-A100-200Gbps", 512), unsharded),
                  InfeasibleConfig);
  CHECK_THROWS_AS(hfu_bound(preset("310b"), cluster("16GB-V100-200Gbps", 8), TrainPlan{}),
                  InfeasibleConfig);
}

}  // TEST_SUITE
