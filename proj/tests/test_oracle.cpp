#include <doctest.h>

#include <bit>

#include "bsdsynth/error.hpp"
#include "bsdsynth/oracle.hpp"

using namespace bsdsynth;

namespace {

std::uint64_t packed(const Oracle& o, std::uint64_t x) {
  return o.evaluate(BitVec::from_uint(x, o.input_width())).to_uint();
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

const std::string kData = BSDSYNTH_TEST_DATA;

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("adder matches integer addition on every input") {
  auto adder = make_builtin("adder:4");
  CHECK(adder->input_width() == 8);
  CHECK(adder->output_width() == 5);
  for (std::uint64_t a = 0; a < 16; ++a)
    for (std::uint64_t b = 0; b < 16; ++b) CHECK(packed(*adder, a | (b << 4)) == a + b);
  // a3 b3 a2 b2 ...
  CHECK(adder->canonical_order() == std::vector<std::size_t>{3, 7, 2, 6, 1, 5, 0, 4});
}

TEST_CASE("subtractor, comparator, parity and mux") {
  auto sub = make_builtin("subtractor:3");
  auto cmp = make_builtin("comparator:3");
  for (std::uint64_t a = 0; a < 8; ++a)
    for (std::uint64_t b = 0; b < 8; ++b) {
      const std::uint64_t diff = (a + 8 - b) % 8;
      CHECK(packed(*sub, a | (b << 3)) == (diff | (a < b ? 8u : 0u)));
      const std::uint64_t c = packed(*cmp, a | (b << 3));
      CHECK(std::popcount(c) == 1);
      CHECK(((c & 1) != 0) == (a < b));
      CHECK(((c & 2) != 0) == (a == b));
    }
  auto par = make_builtin("parity:5");
  for (std::uint64_t x = 0; x < 32; ++x) CHECK(packed(*par, x) == static_cast<std::uint64_t>(std::popcount(x) % 2));
  auto mux = make_builtin("mux:2");
  CHECK(mux->input_width() == 6);
  // select = 2 picks data bit 2, which is input bit 4
  CHECK(packed(*mux, 0b010010) == 1);
  CHECK(packed(*mux, 0b000010) == 0);
}

TEST_CASE("miniALU opcodes") {
  auto alu = make_builtin("miniALU:4");
  CHECK(alu->input_width() == 12);
  CHECK(alu->output_width() == 5);
  auto run = [&](std::uint64_t a, std::uint64_t b, AluOp op, std::uint64_t cin) {
    return packed(*alu, a | (b << 4) | (static_cast<std::uint64_t>(op) << 8) | (cin << 11));
  };
  CHECK(run(9, 8, AluOp::Add, 1) == 18);         // 0b1_0010: carry out
  CHECK(run(3, 5, AluOp::Sub, 0) == (14 | 16));  // borrow
  CHECK(run(12, 10, AluOp::And, 0) == 8);
  CHECK(run(12, 3, AluOp::And, 0) == 16);        // zero flag
  CHECK(run(12, 10, AluOp::Xor, 0) == 6);
  CHECK(run(9, 0, AluOp::Shl, 1) == (3 | 16));
  CHECK(run(9, 0, AluOp::Shr, 0) == (4 | 16));
  CHECK(run(2, 7, AluOp::Slt, 0) == 1);
  CHECK(run(7, 7, AluOp::Slt, 0) == 16);
}

TEST_CASE("counter step") {
  auto counter = make_builtin("counter:3");
  CHECK(counter->input_width() == 4);
  CHECK(counter->output_width() == 6);
  // enable=1, state=7: output 7, next 0
  CHECK(packed(*counter, 1 | (7 << 1)) == 7);
  CHECK(packed(*counter, 1 | (5 << 1)) == (5 | (6 << 3)));
  CHECK(packed(*counter, 0 | (5 << 1)) == (5 | (5 << 3)));
}

TEST_CASE("bad builtin specs are configuration errors") {
  for (const char* spec : {"adder", "adder:0", "adder:x", "nope:3", "mux:9", "miniALU:1"})
    CHECK(kind_of([&] { make_builtin(spec); }) == ErrorKind::Config);
}

TEST_CASE("handle counts probes and enforces the budget") {
  OracleHandle h(make_builtin("parity:3"), 3);
  h.query(BitVec::from_uint(1, 3));
  std::vector<BitVec> two{BitVec(3), BitVec(3)};
  h.query(two);
  CHECK(h.probes() == 3);
  CHECK(kind_of([&] { h.query(BitVec(3)); }) == ErrorKind::Budget);
  CHECK(h.probes() == 3);
  CHECK(kind_of([&] { h.query(BitVec(4)); }) == ErrorKind::InputShape);
  const OracleHandle fresh = h.fork();
  CHECK(fresh.probes() == 0);
  CHECK_FALSE(fresh.budget().has_value());
}

TEST_CASE("table oracle answers listed rows only") {
  SampleSet rows(2, 1);
  rows.add(BitVec::from_string("00"), BitVec::from_string("0"), Provenance::Given);
  rows.add(BitVec::from_string("10"), BitVec::from_string("1"), Provenance::Given);
  TableOracle t(rows);
  CHECK(t.evaluate(BitVec::from_string("10")) == BitVec::from_string("1"));
  CHECK(kind_of([&] { t.evaluate(BitVec::from_string("11")); }) == ErrorKind::UnknownInput);
  rows.add(BitVec::from_string("00"), BitVec::from_string("0"), Provenance::Given);
  CHECK_NOTHROW(TableOracle{rows});
  rows.add(BitVec::from_string("00"), BitVec::from_string("1"), Provenance::Given);
  CHECK(kind_of([&] { TableOracle{rows}; }) == ErrorKind::Format);
}

TEST_CASE("external oracle over the line protocol") {
  auto ext = std::make_shared<ExternalOracle>(kData + "/or2_oracle.sh");
  CHECK(ext->input_width() == 2);
  CHECK(ext->output_width() == 1);
  OracleHandle h(ext);
  std::vector<BitVec> all;
  for (std::uint64_t x = 0; x < 4; ++x) all.push_back(BitVec::from_uint(x, 2));
  const auto out = h.query(all);
  for (std::uint64_t x = 0; x < 4; ++x) CHECK(out[x].get(0) == (x != 0));
}

TEST_CASE("external oracle with the wrong reply width is a protocol error") {
  ExternalOracle bad(kData + "/bad_oracle.sh");
  CHECK(kind_of([&] { bad.evaluate(BitVec(2)); }) == ErrorKind::Protocol);
  CHECK(kind_of([] { ExternalOracle none("echo hello"); }) == ErrorKind::Protocol);
}

}
