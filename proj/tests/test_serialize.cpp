#include <doctest.h>

#include <filesystem>

#include "bsdsynth/error.hpp"
#include "bsdsynth/serialize.hpp"

using namespace bsdsynth;

namespace {

ErrorKind load_kind(const std::string& text) {
  try {
    design_from_json(Json::parse(text));
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Io;
}

}  // namespace

TEST_SUITE("serialize") {

TEST_CASE("learned design round trips byte for byte") {
  OracleHandle h(make_builtin("comparator:3"));
  LearnConfig cfg;
  cfg.seed = 9;
  cfg.scorer = Scorer::Prediction;
  const auto r = learn(h, SampleSet(6, 3), cfg);
  const std::string text = dump(design_to_json(r.diagram, &cfg));
  const Design back = design_from_json(Json::parse(text));
  CHECK(dump(design_to_json(back.diagram, &*back.config)) == text);
  REQUIRE(back.config.has_value());
  CHECK(back.config->seed == 9);
  CHECK(back.config->scorer == Scorer::Prediction);
  CHECK(node_count(back.diagram).total == node_count(r.diagram).total);
  for (std::uint64_t x = 0; x < 64; ++x)
    CHECK(evaluate(back.diagram, BitVec::from_uint(x, 6)) == evaluate(r.diagram, BitVec::from_uint(x, 6)));
}

TEST_CASE("speculated leaves keep their statistics") {
  Bsd d(3, 1);
  SpeculationStats s;
  s.q0 = 0.25;
  s.q1 = 0.75;
  s.sample_count = 400;
  s.p0 = 0.4;
  s.p1 = 0.6;
  d.set_root(0, d.add_decision(2, d.constant(false), d.add_leaf(true, LeafStatus::Speculated, s)));
  const Design back = design_from_json(design_to_json(d));
  CHECK_FALSE(back.config.has_value());
  const Leaf& leaf = back.diagram.node(back.diagram.node(back.diagram.root(0)).decision().hi).leaf();
  CHECK(leaf.status == LeafStatus::Speculated);
  CHECK(leaf.stats.q1 == 0.75);
  CHECK(leaf.stats.sample_count == 400);
  CHECK(leaf.stats.p1 == 0.6);
}

TEST_CASE("config json omits the thread count") {
  LearnConfig cfg;
  cfg.threads = 8;
  cfg.max_probes = 1234;
  const Json j = config_to_json(cfg);
  CHECK_FALSE(j.contains("threads"));
  const LearnConfig back = config_from_json(j);
  CHECK(back.max_probes == std::optional<std::uint64_t>(1234));
  CHECK(back.threads == 1);
}

TEST_CASE("files round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "bsdsynth_serialize_test";
  std::filesystem::create_directories(dir);
  Bsd d(2, 1);
  d.set_root(0, d.add_decision(1, d.constant(false), d.constant(true)));
  const std::string path = (dir / "x.bsd.json").string();
  save_design(path, d);
  const Design back = load_design(path);
  CHECK(back.diagram.evaluate_bit(0, BitVec::from_string("01")));
  CHECK_THROWS_AS(load_design((dir / "missing.json").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed designs are format errors") {
  CHECK(load_kind(R"({"format":"bdd","version":1})") == ErrorKind::Format);
  CHECK(load_kind(R"({"format":"bsd","version":2})") == ErrorKind::Format);
  CHECK(load_kind(R"({"format":"bsd","version":1,"inputs":2,"outputs":1,
                      "nodes":[{"id":0,"kind":"decision","var":0,"lo":0,"hi":0}],"roots":[0]})") ==
        ErrorKind::Format);
  CHECK(load_kind(R"({"format":"bsd","version":1,"inputs":2,"outputs":1,
                      "nodes":[{"id":0,"kind":"leaf","value":2,"status":"final",
                                "stats":{"q0":0,"q1":1,"samples":0,"p0":0.5,"p1":0.5}}],"roots":[0]})") ==
        ErrorKind::Format);
  CHECK(load_kind(R"({"format":"bsd","version":1,"inputs":2,"outputs":2,"nodes":[],"roots":[]})") ==
        ErrorKind::Format);
}

}
