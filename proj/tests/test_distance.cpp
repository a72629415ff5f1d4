#include <doctest.h>

#include <set>

#include "bsdsynth/distance.hpp"
#include "bsdsynth/error.hpp"

using namespace bsdsynth;

namespace {

// Independent node count of a shared reduced ordered diagram: at level i,
// one node per distinct subfunction (after fixing order[0..i)) that still
// depends on order[i].
std::size_t robdd_decisions(const std::function<std::uint64_t(std::uint64_t)>& f, std::size_t n,
                            const std::vector<std::size_t>& bits, const std::vector<std::size_t>& order) {
  const std::uint64_t space = std::uint64_t{1} << n;
  std::vector<std::vector<char>> tables;
  for (std::size_t b : bits) {
    std::vector<char> t(space);
    for (std::uint64_t idx = 0; idx < space; ++idx) {
      std::uint64_t x = 0;
      for (std::size_t k = 0; k < n; ++k)
        if ((idx >> (n - 1 - k)) & 1u) x |= std::uint64_t{1} << order[k];
      t[idx] = static_cast<char>((f(x) >> b) & 1u);
    }
    tables.push_back(std::move(t));
  }
  std::size_t total = 0;
  for (std::size_t level = 0; level < n; ++level) {
    const std::uint64_t width = space >> level;
    std::set<std::vector<char>> nodes;
    for (const auto& t : tables)
      for (std::uint64_t p = 0; p < (std::uint64_t{1} << level); ++p) {
        std::vector<char> sub(t.begin() + p * width, t.begin() + (p + 1) * width);
        if (!std::equal(sub.begin(), sub.begin() + width / 2, sub.begin() + width / 2)) nodes.insert(sub);
      }
    total += nodes.size();
  }
  return total;
}

ComplexityEstimate adder_estimate(const OracleHandle& h, std::vector<std::size_t> bits) {
  ComplexityOptions opts;
  auto stream = RngStream::derive(1, "c");
  return estimate_complexity(h, bits, opts, stream);
}

}  // namespace

TEST_SUITE("distance") {

TEST_CASE("constants and single variables") {
  std::vector<IoSample> rows;
  for (std::uint64_t x = 0; x < 16; ++x)
    rows.push_back({BitVec::from_uint(x, 4), BitVec::from_uint(((x >> 3) & 1) | 2, 2), Provenance::Random});
  const std::vector<std::size_t> order{0, 1, 2, 3};
  const auto one = complexity_from_samples(rows, std::vector<std::size_t>{1}, order);
  CHECK(one.value == 1);
  CHECK(one.decision_nodes() == 0);
  const auto x3 = complexity_from_samples(rows, std::vector<std::size_t>{0}, order);
  CHECK(x3.value == 3);
  CHECK(x3.decision_nodes() == 1);
  CHECK_THROWS_AS(complexity_from_samples(rows, std::vector<std::size_t>{0}, order, 17), Error);
}

TEST_CASE("distance arithmetic") {
  CHECK(boolean_distance(23, 43, 46) == doctest::Approx(20));
  CHECK(boolean_distance(23, 25, 37) == doctest::Approx(11));
  CHECK(boolean_distance(3, 3, 10) == doctest::Approx(0));
}

TEST_CASE("disjoint supports are at distance zero") {
  // y0 = x0 & x1, y1 = x2 ^ x3
  OracleHandle h(std::make_shared<FunctionOracle>("split", 4, 2, [](std::uint64_t x) {
    return ((x & 1) & ((x >> 1) & 1)) | ((((x >> 2) ^ (x >> 3)) & 1) << 1);
  }));
  auto stream = RngStream::derive(1, "d");
  const auto m = distance_matrix(h, ComplexityOptions{}, stream);
  CHECK(m(0, 1) == doctest::Approx(0));
  CHECK(m.singles[0].decision_nodes() == 2);
  CHECK(m.singles[1].decision_nodes() == 3);
  const auto c = cluster_outputs(m, 1);
  CHECK(c.groups.size() == 2);
}

TEST_CASE("adder:8 complexities match an independent count") {
  auto oracle = make_builtin("adder:8");
  OracleHandle h(oracle);
  const auto order = oracle->canonical_order();
  const auto& fn = dynamic_cast<const FunctionOracle&>(*oracle);
  auto f = [&](std::uint64_t x) { return fn.evaluate_packed(x); };
  struct Case {
    std::vector<std::size_t> bits;
    std::size_t expected;
  };
  for (const Case& c : {Case{{8}, 23}, Case{{7}, 43}, Case{{8, 7}, 46}, Case{{4}, 25}, Case{{8, 4}, 37}}) {
    const auto est = adder_estimate(h, c.bits);
    CHECK(est.exhaustive);
    CHECK(est.decision_nodes() == c.expected);
    CHECK(est.decision_nodes() == robdd_decisions(f, 16, c.bits, order));
  }
}

TEST_CASE("adder:8 distances and clusters") {
  OracleHandle h(make_builtin("adder:8"));
  auto stream = RngStream::derive(1, "d");
  const auto m = distance_matrix(h, ComplexityOptions{}, stream);
  CHECK(m(8, 7) == doctest::Approx(20));
  CHECK(m(8, 4) == doctest::Approx(11));
  CHECK(m(7, 8) == m(8, 7));
  // c7 is the partner farthest from c8
  for (std::size_t j = 0; j < 8; ++j)
    if (j != 7) CHECK(m(8, j) < m(8, 7));

  const auto five = cluster_outputs(m, 5);
  CHECK(five.groups.size() == 5);
  CHECK(five.cluster_of(8) == five.cluster_of(7));
  CHECK(five.groups[five.cluster_of(8)] == std::vector<std::size_t>{4, 5, 6, 7, 8});
  const auto eight = cluster_outputs(m, 8);
  CHECK(eight.groups.size() == 8);
  CHECK(eight.groups[eight.cluster_of(6)] == std::vector<std::size_t>{6, 7});
  CHECK(cluster_outputs(m, 10).groups.size() == 9);
  CHECK(singleton_clusters(3).groups == std::vector<std::vector<std::size_t>>{{0}, {1}, {2}});
}

}
