#include <doctest.h>

#include "fsdpplan/types.hpp"
#include "fsdpplan/units.hpp"

using namespace fsdpplan;

TEST_SUITE("units") {

TEST_CASE("byte sizes, binary units with decimal-looking aliases") {
  CHECK(parse_bytes("40GiB") == 40.0 * kGiB);
  CHECK(parse_bytes("40GB") == 40.0 * kGiB);  // the source tables use GB for GiB
  CHECK(parse_bytes("40G") == 40.0 * kGiB);
  CHECK(parse_bytes("512MiB") == 512.0 * kMiB);
  CHECK(parse_bytes("1.5K") == 1536.0);
  CHECK(parse_bytes("2TiB") == 2048.0 * kGiB);
  CHECK(parse_bytes("98304") == 98304.0);
  CHECK(parse_bytes("16_384") == 16384.0);
  CHECK(parse_bytes(" 10 GiB ") == 10.0 * kGiB);
}

TEST_CASE("bandwidth, decimal network units to bytes per second") {
  CHECK(parse_bandwidth("200Gbps") == 25e9);
  CHECK(parse_bandwidth("100Gbps") == 12.5e9);
  CHECK(parse_bandwidth("8bps") == 1.0);
  CHECK(parse_bandwidth("1GB/s") == 1e9);
  CHECK(parse_bandwidth("400Mbps") == 50e6);
  CHECK(parse_bandwidth("25000000000") == 25e9);
}

TEST_CASE("flop rates") {
  CHECK(parse_flops("312T") == 312e12);
  CHECK(parse_flops("989T") == 989e12);
  CHECK(parse_flops("125T") == 125e12);
  CHECK(parse_flops("1.5G") == 1.5e9);
  CHECK(parse_flops("2P") == 2e15);
  CHECK(parse_flops("312000000000000") == 312e12);
}

TEST_CASE("counts and fractions") {
  CHECK(parse_count("5_120") == 5120);
  CHECK(parse_count("5120") == 5120);
  CHECK(parse_count("1") == 1);
  CHECK(parse_fraction("0.5") == 0.5);
  CHECK(parse_fraction("1") == 1.0);
}

TEST_CASE("malformed inputs raise ParseError naming the value") {
  CHECK_THROWS_AS(parse_bytes("40Q"), ParseError);
  CHECK_THROWS_AS(parse_bytes(""), ParseError);
  CHECK_THROWS_AS(parse_bytes("GiB"), ParseError);
  CHECK_THROWS_AS(parse_bytes("-1G"), ParseError);
  CHECK_THROWS_AS(parse_bandwidth("200Gb"), ParseError);
  CHECK_THROWS_AS(parse_bandwidth("-5Gbps"), ParseError);
  CHECK_THROWS_AS(parse_flops("312X"), ParseError);
  CHECK_THROWS_AS(parse_count("12.5"), ParseError);
  CHECK_THROWS_AS(parse_count("abc"), ParseError);
  CHECK_THROWS_AS(parse_fraction("0.5x"), ParseError);
  CHECK_THROWS_WITH_AS(parse_bytes("40Q"), doctest::Contains("40Q"), ParseError);
}

TEST_CASE("format_bytes picks the largest fitting unit") {
  CHECK(format_bytes(25.5 * kGiB) == "25.500 GiB");
  CHECK(format_bytes(0.5 * kMiB) == "512.000 KiB");
  CHECK(format_bytes(100.0) == "100.000 B");
  CHECK(format_bytes(1.0 * kGiB, 1) == "1.0 GiB");
}

}  // TEST_SUITE
