#include <doctest.h>

#include <sstream>

#include "bsdsynth/error.hpp"
#include "bsdsynth/ios.hpp"

using namespace bsdsynth;

namespace {

ErrorKind parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    read_ios(in);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;  // no error
}

}  // namespace

TEST_SUITE("ios") {

TEST_CASE("round trip keeps rows and order") {
  std::istringstream in("# comment first\ninputs=3 outputs=2\n101 10  # trailing\n\n000 01\n");
  const SampleSet s = read_ios(in, Provenance::Counterexample);
  REQUIRE(s.size() == 2);
  CHECK(s.inputs() == 3);
  CHECK(s[0].input.to_string() == "101");
  CHECK(s[0].output.to_string() == "10");
  CHECK(s[1].provenance == Provenance::Counterexample);
  std::ostringstream out;
  write_ios(out, s);
  CHECK(out.str() == "inputs=3 outputs=2\n101 10\n000 01\n");
  CHECK(ios_line(s[1].input, s[1].output) == "000 01");
}

TEST_CASE("malformed files are format errors") {
  CHECK(parse_error("inputs=2 outputs=1\n00 0\n") == ErrorKind::Io);
  CHECK(parse_error("00 0\n") == ErrorKind::Format);
  CHECK(parse_error("inputs=2  outputs=1\n") == ErrorKind::Format);
  CHECK(parse_error("inputs=2 outputs=1\n000 0\n") == ErrorKind::Format);
  CHECK(parse_error("inputs=2 outputs=1\n00  0\n") == ErrorKind::Format);
  CHECK(parse_error("inputs=2 outputs=1\n0a 0\n") == ErrorKind::Format);
  CHECK(parse_error("inputs=2 outputs=1\r\n00 0\r\n") == ErrorKind::Format);
  CHECK(parse_error("inputs=0 outputs=1\n") == ErrorKind::Format);
  CHECK(parse_error("") == ErrorKind::Format);
}

TEST_CASE("contradictory duplicates are rejected, consistent ones kept") {
  CHECK(parse_error("inputs=1 outputs=1\n0 1\n0 0\n") == ErrorKind::Format);
  std::istringstream in("inputs=1 outputs=1\n0 1\n0 1\n");
  CHECK(read_ios(in).size() == 2);
}

TEST_CASE("mandatory keeps given and counterexample rows") {
  SampleSet s(1, 1);
  s.add(BitVec::from_string("0"), BitVec::from_string("1"), Provenance::Given);
  s.add(BitVec::from_string("1"), BitVec::from_string("1"), Provenance::Random);
  s.add(BitVec::from_string("1"), BitVec::from_string("1"), Provenance::Counterexample);
  CHECK(s.mandatory().size() == 2);
  CHECK_THROWS_AS(s.add(BitVec::from_string("01"), BitVec::from_string("1"), Provenance::Given), Error);
}

}
