#include <doctest.h>

#include <set>

#include "bsdsynth/error.hpp"
#include "bsdsynth/sampling.hpp"

using namespace bsdsynth;

TEST_SUITE("sampling") {

TEST_CASE("streams depend only on seed and key") {
  auto a = RngStream::derive(7, "spec", 42);
  auto b = RngStream::derive(7, "spec", 42);
  auto c = RngStream::derive(7, "spec", 43);
  auto d = RngStream::derive(8, "spec", 42);
  const auto x = a.next();
  CHECK(x == b.next());
  CHECK(x != c.next());
  CHECK(x != d.next());
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.below(5) < 5);
    const double u = a.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("path digest ignores binding order") {
  PathAssignment p, q;
  p.bind(3, true);
  p.bind(1, false);
  q.bind(1, false);
  q.bind(3, true);
  CHECK(p.digest() == q.digest());
  CHECK(p.digest() != PathAssignment{}.extended(1, true).extended(3, true).digest());
  CHECK_THROWS_AS(p.bind(3, false), Error);
  CHECK(p.value_of(3) == std::optional<bool>(true));
  CHECK_FALSE(p.value_of(0).has_value());
}

TEST_CASE("conditioned draws keep the path bits") {
  PathAssignment path = PathAssignment{}.extended(0, true).extended(5, false);
  auto stream = RngStream::derive(1, "t");
  const auto drawn = conditioned_inputs(20, path, 500, stream);
  CHECK_FALSE(drawn.exhaustive);
  REQUIRE(drawn.inputs.size() == 500);
  std::size_t ones = 0;
  for (const auto& x : drawn.inputs) {
    CHECK(path.matches(x));
    ones += x.get(7);
  }
  // free bits are roughly fair
  CHECK(ones > 180);
  CHECK(ones < 320);
}

TEST_CASE("small free spaces are listed exhaustively") {
  PathAssignment path = PathAssignment{}.extended(1, true);
  auto stream = RngStream::derive(1, "t");
  const auto drawn = conditioned_inputs(4, path, 100, stream);
  CHECK(drawn.exhaustive);
  REQUIRE(drawn.inputs.size() == 8);
  std::set<std::uint64_t> seen;
  for (const auto& x : drawn.inputs) {
    CHECK(x.get(1));
    seen.insert(x.to_uint());
  }
  CHECK(seen.size() == 8);
  CHECK_THROWS_AS(conditioned_inputs(4, path, 0, stream), Error);
}

TEST_CASE("draw_conditioned charges one probe per row") {
  OracleHandle h(make_builtin("parity:6"));
  auto stream = RngStream::derive(3, "t");
  const SampleSet s = draw_conditioned(h, PathAssignment{}, 10, stream);
  CHECK(s.size() == 10);
  CHECK(h.probes() == 10);
  for (const auto& row : s) CHECK(row.output.get(0) == (row.input.popcount() % 2 == 1));
}

TEST_CASE("accuracy of a half-wrong candidate") {
  OracleHandle h(make_builtin("adder:2"));
  // right on the low sum bit, constant 0 elsewhere
  const Evaluator half = [](const BitVec& x) {
    BitVec out(3);
    out.set(0, x.get(0) != x.get(2));
    return out;
  };
  auto stream = RngStream::derive(1, "t");
  const auto est = estimate_accuracy(half, h, 100, stream);
  CHECK(est.exhaustive);
  CHECK(est.inputs_checked == 16);
  CHECK(est.per_bit[0] == doctest::Approx(1.0));
  // bit1 of a+b is 1 for 8 of 16 inputs, carry for 6 of 16
  CHECK(est.per_bit[1] == doctest::Approx(0.5));
  CHECK(est.per_bit[2] == doctest::Approx(10.0 / 16.0));
  CHECK(est.aggregate == doctest::Approx((1.0 + 0.5 + 10.0 / 16.0) / 3.0));

  const auto sampled = estimate_accuracy(half, h, 10, stream, 8);
  CHECK_FALSE(sampled.exhaustive);
  CHECK(sampled.inputs_checked == 10);
  CHECK(sampled.aggregate_half_width > 0.0);
}

}
