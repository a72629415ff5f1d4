#include "bsdsynth/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bsdsynth/distance.hpp"
#include "bsdsynth/emit.hpp"
#include "bsdsynth/error.hpp"
#include "bsdsynth/harness.hpp"
#include "bsdsynth/pipeline.hpp"
#include "bsdsynth/serialize.hpp"

namespace bsdsynth {

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotConverged: return kExitState;
    case ErrorKind::Mode:
    case ErrorKind::Protocol:
    case ErrorKind::Budget:
    case ErrorKind::PartialResult:
    case ErrorKind::UnknownInput: return kExitCapability;
    default: return kExitUsage;
  }
}

struct Sources {
  std::string oracle, table, exec, train;
};

void add_sources(CLI::App* cmd, Sources& s, bool train) {
  cmd->add_option("--oracle", s.oracle, "Builtin reference circuit, e.g. adder:8");
  cmd->add_option("--table", s.table, "Truth table (.ios) used as the oracle");
  cmd->add_option("--exec", s.exec, "External oracle command speaking the line protocol");
  if (train) cmd->add_option("--train", s.train, "Given input/output examples (.ios)");
}

std::shared_ptr<const Oracle> open_oracle(const Sources& s) {
  const int given = !s.oracle.empty() + !s.table.empty() + !s.exec.empty();
  if (given != 1) throw Error(ErrorKind::Config, "exactly one of --oracle, --table, --exec is required");
  if (!s.oracle.empty()) return make_builtin(s.oracle);
  if (!s.table.empty()) return std::make_shared<TableOracle>(read_ios_file(s.table), "table:" + s.table);
  return std::make_shared<ExternalOracle>(s.exec);
}

Json sources_json(const Sources& s) {
  Json j;
  j["oracle"] = s.oracle.empty() ? Json(nullptr) : Json(s.oracle);
  j["table"] = s.table.empty() ? Json(nullptr) : Json(s.table);
  j["exec"] = s.exec.empty() ? Json(nullptr) : Json(s.exec);
  j["train"] = s.train.empty() ? Json(nullptr) : Json(s.train);
  return j;
}

SampleSet read_samples(const std::string& path, Provenance provenance) {
  if (path == "-") return read_ios(std::cin, provenance);
  return read_ios_file(path, provenance);
}

/// Learning flags; values applied on top of a base configuration only when given.
struct ConfigFlags {
  LearnConfig values;
  std::uint64_t max_probes = 0;
  std::string scorer = "influence";
  bool no_merge = false;
  bool random_order = false;
  bool no_partition = false;
  bool given_only = false;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App* cmd) {
    options = {
        {"seed", cmd->add_option("--seed", values.seed, "Random seed")},
        {"max_clusters", cmd->add_option("--max-clusters", values.max_clusters, "Output clusters (default 10)")},
        {"width_cap", cmd->add_option("--width-cap", values.width_cap, "Leaves per cluster layer (default 10000)")},
        {"spec_samples", cmd->add_option("--spec-samples", values.spec_samples, "Samples per leaf (default 10000)")},
        {"ordering_samples",
         cmd->add_option("--order-samples", values.ordering_samples, "Probes for variable scoring (default 400)")},
        {"merge_samples",
         cmd->add_option("--merge-samples", values.merge_samples, "Probes per merge signature (default 10000)")},
        {"max_probes", cmd->add_option("--max-probes", max_probes, "Oracle probe budget")},
        {"epsilon", cmd->add_option("--epsilon", values.epsilon, "Target residual error (default 1e-4)")},
        {"delta", cmd->add_option("--delta", values.delta, "Per-merge error in the merge-risk bound")},
        {"scorer", cmd->add_option("--scorer", scorer, "influence | prediction | error | random")
                       ->check(CLI::IsMember({"influence", "prediction", "error", "random"}))},
        {"complexity_samples",
         cmd->add_option("--complexity-samples", values.complexity_samples, "Samples for the distance matrix")},
        {"min_overlap", cmd->add_option("--min-overlap", values.min_overlap, "Shared rows before a row-only merge")},
        {"merge", cmd->add_flag("--no-merge", no_merge, "Disable leaf merging")},
        {"random_order", cmd->add_flag("--random-order", random_order, "Pick expansion variables at random")},
        {"partition", cmd->add_flag("--no-partition", no_partition, "Keep every output in its own cluster")},
        {"given_only", cmd->add_flag("--given-only", given_only, "Learn from the --train rows alone")},
    };
  }

  LearnConfig apply(LearnConfig base) const {
    auto given = [&](const std::string& key) {
      for (const auto& [name, opt] : options)
        if (name == key) return opt->count() > 0;
      return false;
    };
    if (given("seed")) base.seed = values.seed;
    if (given("max_clusters")) base.max_clusters = values.max_clusters;
    if (given("width_cap")) base.width_cap = values.width_cap;
    if (given("spec_samples")) base.spec_samples = values.spec_samples;
    if (given("ordering_samples")) base.ordering_samples = values.ordering_samples;
    if (given("merge_samples")) base.merge_samples = values.merge_samples;
    if (given("max_probes")) base.max_probes = max_probes;
    if (given("epsilon")) base.epsilon = values.epsilon;
    if (given("delta")) base.delta = values.delta;
    if (given("scorer")) base.scorer = parse_scorer(scorer);
    if (given("complexity_samples")) base.complexity_samples = values.complexity_samples;
    if (given("min_overlap")) base.min_overlap = values.min_overlap;
    if (no_merge) base.merge = false;
    if (random_order) base.scorer = Scorer::Random;
    if (no_partition) base.partition = false;
    if (given_only) base.given_only = true;
    return base;
  }
};

std::size_t default_threads() {
  if (const char* env = std::getenv("BSDSYNTH_THREADS")) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (...) {
      throw Error(ErrorKind::Config, std::string("BSDSYNTH_THREADS is not a number: ") + env);
    }
  }
  return 0;
}

class Manifest {
 public:
  explicit Manifest(std::string subcommand) : start_(std::chrono::steady_clock::now()) {
    j_["tool"] = "bsdsynth";
    j_["subcommand"] = std::move(subcommand);
  }
  Json& operator[](const char* key) { return j_[key]; }
  void write(const std::string& path, int status) {
    j_["exit_status"] = status;
    j_["wall_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    write_text_file(path, dump(j_));
  }

 private:
  Json j_;
  std::chrono::steady_clock::time_point start_;
};

std::string percent(double p) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << p;
  return s.str();
}

void print_accuracy(std::ostream& out, const AccuracyEstimate& acc, const char* prefix) {
  for (std::size_t j = 0; j < acc.per_bit.size(); ++j) {
    out << prefix << "bit " << j << ": " << percent(acc.per_bit[j]);
    if (!acc.exhaustive) out << " +- " << percent(acc.per_bit_half_width[j]);
    out << "\n";
  }
  out << prefix << "aggregate: " << percent(acc.aggregate);
  if (!acc.exhaustive) out << " +- " << percent(acc.aggregate_half_width);
  out << " over " << acc.inputs_checked << (acc.exhaustive ? " inputs (exhaustive)" : " sampled inputs") << "\n";
}

void print_summary(std::ostream& out, const LearnReport& r) {
  out << "oracle " << r.oracle << " (" << r.inputs << " inputs, " << r.outputs << " outputs)\n";
  out << "clusters " << r.clusters.size() << ", layers " << r.layers.size() << ", merges " << r.merges << "\n";
  out << "nodes " << r.final_nodes << " (" << r.final_decisions << " decisions), raw " << r.raw_nodes << "\n";
  out << "probes " << r.probes << "\n";
  out << "accuracy " << percent(r.accuracy.aggregate);
  if (r.accuracy.exhaustive)
    out << " (exhaustive)";
  else if (r.accuracy_on_training)
    out << " (training rows)";
  else
    out << " +- " << percent(r.accuracy.aggregate_half_width);
  out << "\n";
  for (const auto& s : r.shortfall) out << "warning: " << s << "\n";
}

int cmd_learn_like(bool refine_mode, const Sources& src, const ConfigFlags& flags, const std::string& design_path,
                   const std::string& cex_path, const std::string& out_prefix, std::size_t threads, std::ostream& out) {
  Manifest manifest(refine_mode ? "refine" : "learn");
  auto oracle = open_oracle(src);
  LearnConfig base;
  std::optional<Design> design;
  if (refine_mode) {
    design = load_design(design_path);
    if (design->config) base = *design->config;
  }
  LearnConfig config = flags.apply(base);
  config.threads = threads;
  OracleHandle handle(oracle, config.max_probes);
  SampleSet given = src.train.empty() ? SampleSet(oracle->input_width(), oracle->output_width())
                                      : read_samples(src.train, Provenance::Given);

  const std::string design_out = out_prefix + ".bsd.json";
  const std::string report_out = out_prefix + ".report.json";
  const std::string manifest_out = out_prefix + ".manifest.json";
  manifest["config"] = config_to_json(config);
  manifest["sources"] = sources_json(src);
  if (refine_mode) {
    manifest["design"] = design_path;
    manifest["counterexamples"] = cex_path;
  }
  manifest["outputs"] = {design_out, report_out};
  manifest["seed"] = config.seed;

  try {
    LearnResult result = [&] {
      if (!refine_mode) return learn(handle, given, config);
      const SampleSet cex = read_samples(cex_path, Provenance::Counterexample);
      return refine(design->diagram, cex, handle, given, config);
    }();
    save_design(design_out, result.diagram, &config);
    write_text_file(report_out, dump(report_to_json(result.report)));
    print_summary(out, result.report);
    for (const auto& d : result.report.decisions)
      if (d.find("ignored") != std::string::npos || d.find("unchanged") != std::string::npos)
        out << "note: " << d << "\n";
    out << "wrote " << design_out << ", " << report_out << ", " << manifest_out << "\n";
    manifest.write(manifest_out, kExitOk);
    return kExitOk;
  } catch (const PartialResult& e) {
    write_text_file(report_out, dump(report_to_json(e.report())));
    manifest.write(manifest_out, kExitCapability);
    throw;
  }
}

void print_matrix(std::ostream& out, const DistanceMatrix& matrix) {
  const std::size_t m = matrix.size();
  out << std::setw(6) << "";
  for (std::size_t j = 0; j < m; ++j) out << std::setw(7) << ("y" + std::to_string(j));
  out << "\n";
  for (std::size_t i = 0; i < m; ++i) {
    out << std::setw(6) << ("y" + std::to_string(i));
    for (std::size_t j = 0; j < m; ++j) {
      std::ostringstream cell;
      cell << matrix(i, j);
      out << std::setw(7) << cell.str();
    }
    out << "\n";
  }
}

struct BenchRow {
  std::string check;
  std::string value;
  std::string target;
  bool pass = false;
};

int cmd_bench(std::uint64_t seed, std::size_t threads, std::ostream& out) {
  std::vector<BenchRow> rows;
  auto fmt = [](double v) {
    std::ostringstream s;
    s << v;
    return s.str();
  };

  rows.push_back({"distance 23+43-46", fmt(boolean_distance(23, 43, 46)), "20", boolean_distance(23, 43, 46) == 20});
  rows.push_back({"distance 23+25-37", fmt(boolean_distance(23, 25, 37)), "11", boolean_distance(23, 25, 37) == 11});

  auto adder = make_builtin("adder:8");
  LearnConfig config;
  config.seed = seed;
  config.threads = threads;
  OracleHandle full_handle(adder);
  const auto full = learn(full_handle, SampleSet(16, 9), config);
  auto stream = RngStream::derive(seed, "bench-check");
  const auto verdict = check_equivalence(full.diagram, OracleHandle(adder), CheckMode::Exhaustive, 0, stream,
                                         kDefaultExhaustiveCap, threads);
  rows.push_back({"adder:8 exhaustive equivalence", verdict.equivalent ? "equivalent" : "mismatch", "equivalent",
                  verdict.equivalent});
  rows.push_back({"adder:8 final nodes", std::to_string(full.report.final_nodes), "<= 500",
                  full.report.final_nodes <= 500});

  LearnConfig ablation = config;
  ablation.merge = false;
  ablation.scorer = Scorer::Random;
  OracleHandle ablation_handle(adder);
  const auto raw = learn(ablation_handle, SampleSet(16, 9), ablation);
  const double ratio = static_cast<double>(raw.report.final_nodes) / static_cast<double>(full.report.final_nodes);
  rows.push_back({"ablation nodes (no merge, random order)", std::to_string(raw.report.final_nodes), "", true});
  rows.push_back({"reduction ratio", fmt(ratio), ">= 50", ratio >= 50.0});

  const auto t1 = theorem1_harness(100, 8, seed);
  rows.push_back({"theorem 1 violations (100 x 8 inputs)", std::to_string(t1.violations), "0", t1.violations == 0});
  for (std::size_t k : {1000u, 10000u}) {
    const auto t2 = theorem2_harness(20, k, 0.05, 10000, seed);
    rows.push_back({"theorem 2 frequency, K=" + std::to_string(k), fmt(t2.frequency),
                    "<= " + fmt(t2.bound) + " + " + fmt(t2.margin), t2.passed});
  }
  const auto t2eq = theorem2_harness(20, 1000, 0.05, 10000, seed, true);
  rows.push_back({"theorem 2 equal pairs, erroneous merges", std::to_string(t2eq.erroneous_merges), "0",
                  t2eq.erroneous_merges == 0});

  std::size_t width = 0;
  for (const auto& r : rows) width = std::max(width, r.check.size());
  bool all = true;
  for (const auto& r : rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << r.check << std::setw(14) << r.value
        << std::setw(24) << r.target << (r.pass ? "pass" : "FAIL") << "\n";
    all = all && r.pass;
  }
  out << std::right;
  return all ? kExitOk : kExitMismatch;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn Boolean circuits from input/output behaviour with binary speculation diagrams", "bsdsynth"};
  app.require_subcommand(1);
  std::size_t threads = 0;

  // learn
  auto* learn_cmd = app.add_subcommand("learn", "Learn a diagram from an oracle");
  Sources learn_src;
  ConfigFlags learn_flags;
  std::string learn_out;
  add_sources(learn_cmd, learn_src, true);
  learn_flags.add(learn_cmd);
  learn_cmd->add_option("--out", learn_out, "Output prefix")->required();
  learn_cmd->add_option("--threads", threads, "Worker threads (0 = all cores); never changes results");

  // refine
  auto* refine_cmd = app.add_subcommand("refine", "Relearn with counterexamples added to the training rows");
  Sources refine_src;
  ConfigFlags refine_flags;
  std::string refine_design, refine_cex, refine_out;
  add_sources(refine_cmd, refine_src, true);
  refine_flags.add(refine_cmd);
  refine_cmd->add_option("--design", refine_design, "Current design (.bsd.json)")->required();
  refine_cmd->add_option("--cex", refine_cex, "Counterexamples (.ios, '-' for stdin)")->required();
  refine_cmd->add_option("--out", refine_out, "Output prefix")->required();
  refine_cmd->add_option("--threads", threads, "Worker threads");

  // validate
  auto* validate_cmd = app.add_subcommand("validate", "Compare a design with an oracle");
  Sources validate_src;
  std::string validate_design, validate_out, cex_out;
  bool exact = false;
  std::size_t samples = 0, worst = 1;
  std::uint64_t validate_seed = 1;
  add_sources(validate_cmd, validate_src, false);
  validate_cmd->add_option("--design", validate_design, "Design (.bsd.json)")->required();
  auto* exact_opt = validate_cmd->add_flag("--exact", exact, "Enumerate every input");
  auto* samples_opt = validate_cmd->add_option("--samples", samples, "Check this many random inputs");
  exact_opt->excludes(samples_opt);
  validate_cmd->add_option("--worst", worst, "With --exact, list this many counterexamples, most wrong bits first");
  validate_cmd->add_option("--cex-out", cex_out, "Also write the counterexamples to this .ios file");
  validate_cmd->add_option("--seed", validate_seed, "Seed for --samples");
  validate_cmd->add_option("--out", validate_out, "Write <out>.verdict.json and a manifest");
  validate_cmd->add_option("--threads", threads, "Worker threads");

  // emit
  auto* emit_cmd = app.add_subcommand("emit", "Write a design as DOT, netlist or JSON");
  std::string emit_design, emit_format, emit_out, emit_style = "gates";
  emit_cmd->add_option("--design", emit_design, "Design (.bsd.json)")->required();
  emit_cmd->add_option("--format", emit_format, "dot | netlist | json")
      ->required()
      ->check(CLI::IsMember({"dot", "netlist", "json"}));
  emit_cmd->add_option("--style", emit_style, "Netlist style: gates | mux")->check(CLI::IsMember({"gates", "mux"}));
  emit_cmd->add_option("--out", emit_out, "Output file (stdout when absent)");

  // distance
  auto* distance_cmd = app.add_subcommand("distance", "Boolean distance matrix and output clusters");
  Sources distance_src;
  std::string distance_out;
  std::uint64_t distance_seed = 1;
  std::size_t distance_clusters = 10, distance_samples = 4096;
  add_sources(distance_cmd, distance_src, false);
  distance_cmd->add_option("--seed", distance_seed, "Random seed");
  distance_cmd->add_option("--max-clusters", distance_clusters, "Cluster cap");
  distance_cmd->add_option("--complexity-samples", distance_samples, "Samples when enumeration is too large");
  distance_cmd->add_option("--out", distance_out, "Write <out>.distance.json and a manifest");
  distance_cmd->add_option("--threads", threads, "Worker threads");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Adder reproduction, ablation and theorem harnesses");
  std::uint64_t bench_seed = 1;
  bench_cmd->add_option("--seed", bench_seed, "Random seed");
  bench_cmd->add_option("--threads", threads, "Worker threads");

  try {
    threads = default_threads();
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "bsdsynth: " << e.what() << "\n";
    err << "usage: bsdsynth {learn|refine|validate|emit|distance|bench} [options]; see --help\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "bsdsynth: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  }

  try {
    if (*learn_cmd) return cmd_learn_like(false, learn_src, learn_flags, "", "", learn_out, threads, out);
    if (*refine_cmd)
      return cmd_learn_like(true, refine_src, refine_flags, refine_design, refine_cex, refine_out, threads, out);

    if (*validate_cmd) {
      if (!exact && samples == 0) throw Error(ErrorKind::Config, "validate needs --exact or --samples <K>");
      Manifest manifest("validate");
      auto oracle = open_oracle(validate_src);
      const Design design = load_design(validate_design);
      OracleHandle handle(oracle);
      auto stream = RngStream::derive(validate_seed, "validate");
      const auto verdict = check_equivalence(design.diagram, handle, exact ? CheckMode::Exhaustive : CheckMode::Sampled,
                                             samples, stream, kDefaultExhaustiveCap, threads);
      // Everything but the counterexample block is an .ios comment, so stdout pipes into refine.
      print_accuracy(out, verdict.accuracy, "# ");
      SampleSet cex(oracle->input_width(), oracle->output_width());
      if (verdict.equivalent) {
        out << "# equivalent over " << verdict.inputs_checked << " inputs\n";
      } else {
        if (exact && worst > 1)
          cex = worst_counterexamples(design.diagram, handle, worst, kDefaultExhaustiveCap, threads);
        else
          cex.add(*verdict.counterexample, verdict.expected, Provenance::Counterexample);
        out << "# mismatch: design gives " << verdict.got.to_string() << " at the first counterexample\n";
        write_ios(out, cex);
      }
      if (!cex_out.empty()) write_ios_file(cex_out, cex);
      const int status = verdict.equivalent ? kExitOk : kExitMismatch;
      if (!validate_out.empty()) {
        write_text_file(validate_out + ".verdict.json", dump(verdict_to_json(verdict)));
        manifest["design"] = validate_design;
        manifest["sources"] = sources_json(validate_src);
        manifest["mode"] = exact ? "exhaustive" : "sampled";
        manifest["samples"] = samples;
        manifest["seed"] = validate_seed;
        manifest["outputs"] = {validate_out + ".verdict.json"};
        manifest.write(validate_out + ".manifest.json", status);
      }
      return status;
    }

    if (*emit_cmd) {
      const Design design = load_design(emit_design);
      std::string text;
      if (emit_format == "dot")
        text = to_dot(design.diagram);
      else if (emit_format == "netlist")
        text = netlist_text(to_netlist(design.diagram, emit_style == "mux" ? NetlistStyle::Mux : NetlistStyle::Gates));
      else
        text = dump(design_to_json(design.diagram, design.config ? &*design.config : nullptr));
      if (emit_out.empty()) {
        out << text;
      } else {
        write_text_file(emit_out, text);
        Manifest manifest("emit");
        manifest["design"] = emit_design;
        manifest["format"] = emit_format;
        manifest["style"] = emit_style;
        manifest["outputs"] = {emit_out};
        manifest.write(emit_out + ".manifest.json", kExitOk);
      }
      return kExitOk;
    }

    if (*distance_cmd) {
      Manifest manifest("distance");
      auto oracle = open_oracle(distance_src);
      OracleHandle handle(oracle);
      ComplexityOptions opts;
      opts.sample_count = distance_samples;
      opts.threads = threads;
      opts.exhaustive_cap = std::uint64_t{1} << 16;
      auto stream = RngStream::derive(distance_seed, "partition");
      const DistanceMatrix matrix =
          oracle->table() ? distance_matrix_from_samples(oracle->table()->samples(), oracle->output_width(),
                                                         oracle->canonical_order(), threads)
                          : distance_matrix(handle, opts, stream);
      const Clustering clusters = cluster_outputs(matrix, distance_clusters);
      out << "decision nodes per output (diagonal), Boolean distance between outputs (off-diagonal)\n";
      print_matrix(out, matrix);
      out << "clusters (cap " << distance_clusters << "):";
      for (const auto& g : clusters.groups) {
        out << " {";
        for (std::size_t i = 0; i < g.size(); ++i) out << (i ? "," : "") << "y" << g[i];
        out << "}";
      }
      out << "\n";
      if (!distance_out.empty()) {
        Json j;
        j["oracle"] = oracle->name();
        j["exhaustive"] = matrix.singles.front().exhaustive;
        Json comp = Json::array(), dist = Json::array();
        for (std::size_t i = 0; i < matrix.size(); ++i) {
          comp.push_back({{"total", matrix.singles[i].value}, {"decisions", matrix.singles[i].decision_nodes()}});
          Json row = Json::array();
          for (std::size_t k = 0; k < matrix.size(); ++k) row.push_back(matrix(i, k));
          dist.push_back(std::move(row));
        }
        j["complexity"] = std::move(comp);
        j["distance"] = std::move(dist);
        j["max_clusters"] = distance_clusters;
        j["clusters"] = clusters.groups;
        write_text_file(distance_out + ".distance.json", dump(j));
        manifest["sources"] = sources_json(distance_src);
        manifest["seed"] = distance_seed;
        manifest["complexity_samples"] = distance_samples;
        manifest["outputs"] = {distance_out + ".distance.json"};
        manifest.write(distance_out + ".manifest.json", kExitOk);
      }
      return kExitOk;
    }

    if (*bench_cmd) return cmd_bench(bench_seed, threads, out);
  } catch (const Error& e) {
    err << "bsdsynth: " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "bsdsynth: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bsdsynth
