#include <doctest.h>

#include "bsdsynth/bsd.hpp"
#include "bsdsynth/error.hpp"

using namespace bsdsynth;

namespace {

// x0 OR x1 as a reduced diagram: 2 decisions, 2 terminals.
Bsd or_diagram() {
  Bsd d(2, 1);
  const NodeId zero = d.constant(false), one = d.constant(true);
  const NodeId x1 = d.add_decision(1, zero, one);
  d.set_root(0, d.add_decision(0, x1, one));
  return d;
}

BitVec bits(const char* s) { return BitVec::from_string(s); }

}  // namespace

TEST_SUITE("bsd") {

TEST_CASE("evaluation follows lo on 0 and hi on 1") {
  const Bsd d = or_diagram();
  CHECK_FALSE(d.evaluate_bit(0, bits("00")));
  CHECK(d.evaluate_bit(0, bits("10")));
  CHECK(d.evaluate_bit(0, bits("01")));
  CHECK(d.evaluate_bit(0, bits("11")));
  CHECK(evaluate(d, bits("01")) == bits("1"));
  CHECK_THROWS_AS(evaluate(d, bits("011")), Error);
}

TEST_CASE("decisions are hash-consed, leaves are not") {
  Bsd d(3, 1);
  const NodeId a = d.add_leaf(false, LeafStatus::Speculated);
  const NodeId b = d.add_leaf(false, LeafStatus::Speculated);
  CHECK(a != b);
  CHECK(d.add_decision(2, a, b) == d.add_decision(2, a, b));
  CHECK(d.constant(true) == d.constant(true));
  CHECK_THROWS_AS(d.add_decision(3, a, b), Error);
  CHECK_THROWS_AS(d.add_decision(0, a, NodeId{999}), Error);
}

TEST_CASE("node counts of the OR diagram") {
  const NodeCount c = node_count(or_diagram());
  CHECK(c.total == 4);
  CHECK(c.decisions == 2);
  CHECK(c.leaves == 2);
  REQUIRE(c.per_root.size() == 1);
  CHECK(c.per_root[0] == 4);
  // root; {x1, 1}; {0}
  CHECK(c.per_layer == std::vector<std::size_t>{1, 2, 1});
}

TEST_CASE("restrict gives cofactors") {
  Bsd d = or_diagram();
  const NodeId r0 = restrict(d, d.root(0), 0, false);
  const NodeId r1 = restrict(d, d.root(0), 0, true);
  CHECK(d.node(r1).is_leaf());
  CHECK(d.node(r1).leaf().value);
  CHECK_FALSE(d.node(r0).is_leaf());
  CHECK(d.node(r0).decision().var == 1);
  // Restricting an absent variable leaves the function alone.
  Bsd e = or_diagram();
  const NodeId x1 = e.node(e.root(0)).decision().lo;
  CHECK(restrict(e, x1, 0, true) == x1);
}

TEST_CASE("finalize drops redundant tests and shares equal leaves") {
  Bsd d(2, 2);
  const NodeId a = d.add_leaf(true, LeafStatus::Final);
  const NodeId b = d.add_leaf(true, LeafStatus::Final);
  const NodeId c = d.add_leaf(false, LeafStatus::Final);
  const NodeId redundant = d.add_decision(1, a, b);  // always 1
  d.set_root(0, d.add_decision(0, c, redundant));
  d.set_root(1, redundant);
  CHECK_FALSE(is_canonical(d));
  const Bsd f = finalize(d);
  CHECK(is_canonical(f));
  const NodeCount count = node_count(f);
  CHECK(count.total == 3);
  CHECK(f.node(f.root(1)).is_leaf());
  for (std::uint64_t x = 0; x < 4; ++x) CHECK(evaluate(f, BitVec::from_uint(x, 2)) == evaluate(d, BitVec::from_uint(x, 2)));
}

TEST_CASE("finalize refuses speculated leaves") {
  Bsd d(1, 1);
  d.set_root(0, d.add_leaf(true, LeafStatus::Speculated));
  CHECK(d.has_speculated_leaves());
  try {
    finalize(d);
    FAIL("expected NotConverged");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotConverged);
  }
}

TEST_CASE("path discipline detects a repeated variable") {
  CHECK(respects_path_discipline(or_diagram()));
  Bsd d(2, 1);
  const NodeId inner = d.add_decision(0, d.constant(false), d.constant(true));
  d.set_root(0, d.add_decision(0, inner, d.constant(true)));
  CHECK_FALSE(respects_path_discipline(d));
}

TEST_CASE("post-order lists children first and only reachable nodes") {
  Bsd d = or_diagram();
  d.add_leaf(true, LeafStatus::Speculated);  // unreachable
  const auto order = d.reachable_postorder();
  CHECK(order.size() == 4);
  CHECK(order.back() == d.root(0));
  CHECK_FALSE(d.has_speculated_leaves());
}

}
