#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "bsdsynth/cli.hpp"
#include "bsdsynth/serialize.hpp"

using namespace bsdsynth;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "bsdsynth");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& f) const { return (path / f).string(); }
};

const std::string kData = BSDSYNTH_TEST_DATA;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("learn writes design, report and manifest") {
  TempDir dir("bsdsynth_cli_learn");
  const Run r = run({"learn", "--oracle", "adder:3", "--seed", "2", "--out", dir / "a"});
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "a.bsd.json"));
  CHECK(fs::exists(dir / "a.report.json"));
  CHECK(fs::exists(dir / "a.manifest.json"));
  const Json report = Json::parse(read_text_file(dir / "a.report.json"));
  CHECK(report.contains("final_nodes"));
  const Json manifest = Json::parse(read_text_file(dir / "a.manifest.json"));
  CHECK(manifest.dump().find("threads") == std::string::npos);

  const Run v = run({"validate", "--design", dir / "a.bsd.json", "--oracle", "adder:3", "--exact"});
  CHECK(v.code == 0);
  // every stdout line is an .ios comment
  std::istringstream lines(v.out);
  for (std::string line; std::getline(lines, line);) CHECK(line.rfind("# ", 0) == 0);

  const Run e = run({"emit", "--design", dir / "a.bsd.json", "--format", "netlist"});
  CHECK(e.code == 0);
  CHECK(e.out.find("module") == 0);
  const Run d = run({"emit", "--design", dir / "a.bsd.json", "--format", "dot", "--out", dir / "a.dot"});
  CHECK(d.code == 0);
  CHECK(read_text_file(dir / "a.dot").find("digraph") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  TempDir dir("bsdsynth_cli_usage");
  CHECK(run({"learn", "--out", dir / "x"}).code == 2);                             // no oracle
  CHECK(run({"learn", "--oracle", "adder:2", "--table", kData + "/or2.ios", "--out", dir / "x"}).code == 2);
  CHECK(run({"learn", "--oracle", "nope:2", "--out", dir / "x"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"learn", "--oracle", "adder:2", "--out", dir / "x", "--width-cap", "1"}).code == 2);

  run({"learn", "--oracle", "adder:2", "--out", dir / "x"});
  CHECK(run({"emit", "--design", dir / "x.bsd.json", "--format", "verilog"}).code == 2);
  write_text_file(dir / "broken.bsd.json", "{\"format\": 3");
  CHECK(run({"emit", "--design", dir / "broken.bsd.json"}).code == 2);
}

TEST_CASE("speculated designs cannot be emitted as netlists") {
  TempDir dir("bsdsynth_cli_spec");
  Bsd d(2, 1);
  d.set_root(0, d.add_leaf(true, LeafStatus::Speculated));
  save_design(dir / "s.bsd.json", d);
  CHECK(run({"emit", "--design", dir / "s.bsd.json", "--format", "netlist"}).code == 4);
  CHECK(run({"emit", "--design", dir / "s.bsd.json", "--format", "dot"}).code == 0);
}

TEST_CASE("a mutated design fails validation with exit 1") {
  TempDir dir("bsdsynth_cli_mut");
  REQUIRE(run({"learn", "--oracle", "adder:3", "--out", dir / "a"}).code == 0);
  Design design = load_design(dir / "a.bsd.json");
  Bsd& bsd = design.diagram;
  // carry out forced to 0
  bsd.set_root(3, bsd.constant(false));
  save_design(dir / "m.bsd.json", bsd);
  const Run v = run({"validate", "--design", dir / "m.bsd.json", "--oracle", "adder:3", "--exact", "--worst", "3",
                     "--cex-out", dir / "cex.ios"});
  CHECK(v.code == 1);
  CHECK(fs::exists(dir / "cex.ios"));

  const Run refined = run({"refine", "--design", dir / "m.bsd.json", "--cex", dir / "cex.ios", "--oracle",
                           "adder:3", "--out", dir / "r"});
  CHECK(refined.code == 0);
  CHECK(run({"validate", "--design", dir / "r.bsd.json", "--oracle", "adder:3", "--exact"}).code == 0);
}

TEST_CASE("exhaustive validation beyond the cap is a mode error") {
  TempDir dir("bsdsynth_cli_mode");
  Bsd d(24, 13);
  save_design(dir / "z.bsd.json", d);
  CHECK(run({"validate", "--design", dir / "z.bsd.json", "--oracle", "adder:12", "--exact"}).code == 3);
  CHECK(run({"validate", "--design", dir / "z.bsd.json", "--oracle", "adder:12", "--samples", "100"}).code == 1);
}

TEST_CASE("a budget too small for anything exits 3") {
  TempDir dir("bsdsynth_cli_budget");
  CHECK(run({"learn", "--oracle", "adder:4", "--max-probes", "5", "--out", dir / "b"}).code == 3);
}

TEST_CASE("OR from a table and from an external process") {
  TempDir dir("bsdsynth_cli_or");
  REQUIRE(run({"learn", "--table", kData + "/or2.ios", "--out", dir / "t"}).code == 0);
  CHECK(node_count(load_design(dir / "t.bsd.json").diagram).total == 4);
  REQUIRE(run({"learn", "--exec", kData + "/or2_oracle.sh", "--out", dir / "e"}).code == 0);
  CHECK(node_count(load_design(dir / "e.bsd.json").diagram).total == 4);
  CHECK(run({"learn", "--exec", kData + "/bad_oracle.sh", "--out", dir / "b"}).code == 3);
}

TEST_CASE("distance prints the matrix") {
  const Run r = run({"distance", "--oracle", "adder:4", "--max-clusters", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("clusters (cap 3): {y0} {y1} {y2,y3,y4}") != std::string::npos);
}

}
