#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fsdpplan/config_io.hpp"

using namespace fsdpplan;

TEST_SUITE("config_io") {

TEST_CASE("model json round-trips and serialization is idempotent") {
  const std::string text = R"({
    "name": "13b", "layers": 40, "hidden": 5120, "heads": 40,
    "seq_len": 2048, "bytes_per_value": 2
  })";
  const ModelSpec m = parse_model_json(text);
  CHECK(m.name == "13b");
  CHECK(m.layers == 40);
  CHECK(m.hidden == 5120);
  const std::string once = serialize_model(m);
  CHECK(serialize_model(parse_model_json(once)) == once);
}

TEST_CASE("integer strings with separators mean the same number") {
  const ModelSpec plain = parse_model_json(
      R"({"name": "x", "layers": 40, "hidden": "5120", "heads": 40})");
  const ModelSpec grouped = parse_model_json(
      R"({"name": "x", "layers": 40, "hidden": "5_120", "heads": 40})");
  CHECK(plain.hidden == 5120);
  CHECK(grouped.hidden == 5120);
  CHECK(serialize_model(plain) == serialize_model(grouped));
}

TEST_CASE("model defaults and validation") {
  const ModelSpec m =
      parse_model_json(R"({"name": "x", "layers": 2, "hidden": 64, "heads": 2})");
  CHECK(m.seq_len == 2048);
  CHECK(m.bytes_per_value == 2);
  // only half- and single-precision states are modeled
  CHECK_THROWS_WITH_AS(
      parse_model_json(
          R"({"name": "x", "layers": 2, "hidden": 64, "heads": 2, "bytes_per_value": 3})"),
      doctest::Contains("bytes_per_value"), ValidationError);
}

TEST_CASE("cluster json accepts unit strings and plain numbers alike") {
  const ClusterSpec c = parse_cluster_json(R"({
    "name": "test", "num_gpus": 512,
    "gpu_mem": "40GiB", "reserved": "10GiB",
    "peak_flops": "312T", "bandwidth": "200Gbps", "latency": 0
  })");
  CHECK(c.gpu_mem_bytes == 40.0 * kGiB);
  CHECK(c.reserved_bytes == 10.0 * kGiB);
  CHECK(c.peak_flops == 312e12);
  CHECK(c.bandwidth_bps == 25e9);
  const ClusterSpec numeric = parse_cluster_json(R"({
    "name": "test", "num_gpus": 512,
    "gpu_mem": 42949672960, "reserved": 10737418240,
    "peak_flops": 312000000000000, "bandwidth": 25000000000
  })");
  CHECK(numeric.gpu_mem_bytes == c.gpu_mem_bytes);
  CHECK(numeric.bandwidth_bps == c.bandwidth_bps);
  CHECK(numeric.latency_s == 0.0);
  CHECK(serialize_cluster(parse_cluster_json(serialize_cluster(c))) == serialize_cluster(c));
}

TEST_CASE("errors carry the origin and the field") {
  CHECK_THROWS_WITH_AS(parse_model_json("not json", "broken.json"),
                       doctest::Contains("broken.json"), ParseError);
  CHECK_THROWS_WITH_AS(parse_model_json(R"({"name": "x", "hidden": 64, "heads": 2})"),
                       doctest::Contains("'layers'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_model_json(R"({"name": "x", "layers": 2, "hidden": 64, "heads": 2, "depth": 9})"),
      doctest::Contains("'depth'"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_cluster_json(
          R"({"name": "x", "gpu_mem": "40Q", "peak_flops": "1T", "bandwidth": "1Gbps"})",
          "c.json"),
      doctest::Contains("'gpu_mem'"), ParseError);
  CHECK_THROWS_AS(parse_model_json("[1,2]"), ParseError);
}

TEST_CASE("file loading reports missing paths") {
  CHECK_THROWS_AS(load_model_config("/nonexistent/model.json"), ParseError);
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "fsdpplan_cfg_test.json";
  {
    std::ofstream f(path);
    f << R"({"name": "tmp", "layers": 4, "hidden": 128, "heads": 4})";
  }
  CHECK(load_model_config(path.string()).layers == 4);
  std::filesystem::remove(path);
}

}  // TEST_SUITE
