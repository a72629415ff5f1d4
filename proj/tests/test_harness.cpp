#include <doctest.h>

#include <bit>

#include "bsdsynth/harness.hpp"

using namespace bsdsynth;

TEST_SUITE("harness") {

TEST_CASE("a constant target is exact at layer 0") {
  const auto curve = layer_accuracy(TruthTable(64, true), 6, 1);
  REQUIRE(curve.size() == 1);
  CHECK(curve[0] == doctest::Approx(1.0));
}

TEST_CASE("parity sits at one half until the last layer") {
  TruthTable parity(64);
  for (std::size_t x = 0; x < 64; ++x) parity[x] = std::popcount(x) % 2 == 1;
  const auto curve = layer_accuracy(parity, 6, 1);
  REQUIRE(curve.size() == 7);
  for (std::size_t k = 0; k < 6; ++k) CHECK(curve[k] == doctest::Approx(0.5));
  CHECK(curve[6] == doctest::Approx(1.0));
}

TEST_CASE("majority of three is never made worse by expansion") {
  TruthTable maj(8);
  for (std::size_t x = 0; x < 8; ++x) maj[x] = std::popcount(x) >= 2;
  const auto curve = layer_accuracy(maj, 3, 1, false);
  CHECK(curve.front() == doctest::Approx(0.5));
  CHECK(curve.back() == doctest::Approx(1.0));
  for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k] >= curve[k - 1]);
}

TEST_CASE("random targets show no accuracy drops") {
  const auto r = theorem1_harness(20, 6, 5);
  CHECK(r.trials == 20);
  CHECK(r.violations == 0);
  CHECK(r.layers_checked > 0);
  for (const auto& c : r.curves) CHECK(c.back() == doctest::Approx(1.0));
}

TEST_CASE("simulated merges stay under the bound") {
  const auto r = theorem2_harness(20, 1000, 0.05, 2000, 1);
  CHECK(r.bound == doctest::Approx(0.4));
  CHECK(r.frequency <= r.bound + r.margin);
  CHECK(r.passed);
  const auto tight = theorem2_harness(20, 10000, 0.05, 2000, 1);
  CHECK(tight.bound == doctest::Approx(0.04));
  CHECK(tight.passed);
}

TEST_CASE("equal pairs never cause erroneous merges") {
  const auto r = theorem2_harness(20, 100, 0.05, 500, 1, true);
  CHECK(r.erroneous_merges == 0);
  CHECK(r.frequency == 0.0);
}

}
