#include "bsdsynth/serialize.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include "bsdsynth/error.hpp"

namespace bsdsynth {

Json config_to_json(const LearnConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["max_clusters"] = c.max_clusters;
  j["width_cap"] = c.width_cap;
  j["spec_samples"] = c.spec_samples;
  j["spec_samples_cap"] = c.spec_samples_cap;
  j["ordering_samples"] = c.ordering_samples;
  j["merge_samples"] = c.merge_samples;
  j["max_probes"] = c.max_probes ? Json(*c.max_probes) : Json(nullptr);
  j["exhaustive_cap"] = c.exhaustive_cap;
  j["epsilon"] = c.epsilon;
  j["delta"] = c.delta;
  j["scorer"] = to_string(c.scorer);
  j["complexity_samples"] = c.complexity_samples;
  j["complexity_exhaustive_cap"] = c.complexity_exhaustive_cap;
  j["validation_samples"] = c.validation_samples;
  j["partition"] = c.partition;
  j["merge"] = c.merge;
  j["given_only"] = c.given_only;
  j["min_overlap"] = c.min_overlap;
  j["pool_final_rows"] = c.pool_final_rows;
  return j;
}

LearnConfig config_from_json(const Json& j) {
  LearnConfig c;
  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::remove_reference_t<decltype(field)>>();
    };
    get("seed", c.seed);
    get("max_clusters", c.max_clusters);
    get("width_cap", c.width_cap);
    get("spec_samples", c.spec_samples);
    get("spec_samples_cap", c.spec_samples_cap);
    get("ordering_samples", c.ordering_samples);
    get("merge_samples", c.merge_samples);
    if (j.contains("max_probes") && !j.at("max_probes").is_null()) c.max_probes = j.at("max_probes").get<std::uint64_t>();
    get("exhaustive_cap", c.exhaustive_cap);
    get("epsilon", c.epsilon);
    get("delta", c.delta);
    if (j.contains("scorer")) c.scorer = parse_scorer(j.at("scorer").get<std::string>());
    get("complexity_samples", c.complexity_samples);
    get("complexity_exhaustive_cap", c.complexity_exhaustive_cap);
    get("validation_samples", c.validation_samples);
    get("partition", c.partition);
    get("merge", c.merge);
    get("given_only", c.given_only);
    get("min_overlap", c.min_overlap);
    get("pool_final_rows", c.pool_final_rows);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("bad config: ") + e.what());
  }
  return c;
}

Json design_to_json(const Bsd& diagram, const LearnConfig* config) {
  const auto order = diagram.reachable_postorder();
  std::unordered_map<std::uint32_t, std::size_t> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i].value] = i;

  Json j;
  j["format"] = "bsd";
  j["version"] = kDesignVersion;
  j["inputs"] = diagram.inputs();
  j["outputs"] = diagram.outputs();
  j["layer"] = diagram.layer();
  if (config) {
    j["seed"] = config->seed;
    j["config"] = config_to_json(*config);
  } else {
    j["seed"] = nullptr;
    j["config"] = nullptr;
  }
  Json nodes = Json::array();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const BsdNode& node = diagram.node(order[i]);
    Json e;
    e["id"] = i;
    if (node.is_leaf()) {
      const Leaf& leaf = node.leaf();
      e["kind"] = "leaf";
      e["value"] = leaf.value ? 1 : 0;
      e["status"] = leaf.status == LeafStatus::Final ? "final" : "speculated";
      e["stats"] = {{"q0", leaf.stats.q0},
                    {"q1", leaf.stats.q1},
                    {"samples", leaf.stats.sample_count},
                    {"p0", leaf.stats.p0},
                    {"p1", leaf.stats.p1}};
    } else {
      const Decision& d = node.decision();
      e["kind"] = "decision";
      e["var"] = d.var;
      e["lo"] = index.at(d.lo.value);
      e["hi"] = index.at(d.hi.value);
    }
    nodes.push_back(std::move(e));
  }
  j["nodes"] = std::move(nodes);
  Json roots = Json::array(), clusters = Json::array();
  for (std::size_t k = 0; k < diagram.outputs(); ++k) {
    roots.push_back(index.at(diagram.root(k).value));
    clusters.push_back(diagram.root_cluster(k));
  }
  j["roots"] = std::move(roots);
  j["clusters"] = std::move(clusters);
  return j;
}

Design design_from_json(const Json& j) {
  try {
    if (j.at("format").get<std::string>() != "bsd") throw Error(ErrorKind::Format, "not a .bsd.json document");
    if (j.at("version").get<int>() != kDesignVersion)
      throw Error(ErrorKind::Format, "unsupported design version " + std::to_string(j.at("version").get<int>()));
    const auto n = j.at("inputs").get<std::size_t>();
    const auto m = j.at("outputs").get<std::size_t>();
    if (n == 0 || m == 0) throw Error(ErrorKind::Format, "design widths must be positive");
    Bsd diagram(n, m);
    diagram.set_layer(j.value("layer", std::size_t{0}));
    std::vector<NodeId> ids;
    for (const auto& e : j.at("nodes")) {
      if (e.at("id").get<std::size_t>() != ids.size()) throw Error(ErrorKind::Format, "node ids must be 0, 1, 2, ...");
      const auto kind = e.at("kind").get<std::string>();
      if (kind == "leaf") {
        SpeculationStats s;
        const auto& st = e.at("stats");
        s.q0 = st.at("q0").get<double>();
        s.q1 = st.at("q1").get<double>();
        s.sample_count = st.at("samples").get<std::uint64_t>();
        s.p0 = st.at("p0").get<double>();
        s.p1 = st.at("p1").get<double>();
        const auto status = e.at("status").get<std::string>();
        if (status != "final" && status != "speculated") throw Error(ErrorKind::Format, "bad leaf status " + status);
        const int v = e.at("value").get<int>();
        if (v != 0 && v != 1) throw Error(ErrorKind::Format, "leaf value must be 0 or 1");
        ids.push_back(diagram.add_leaf(v == 1, status == "final" ? LeafStatus::Final : LeafStatus::Speculated, s));
      } else if (kind == "decision") {
        const auto var = e.at("var").get<std::size_t>();
        const auto lo = e.at("lo").get<std::size_t>();
        const auto hi = e.at("hi").get<std::size_t>();
        if (var >= n) throw Error(ErrorKind::Format, "decision variable out of range");
        if (lo >= ids.size() || hi >= ids.size())
          throw Error(ErrorKind::Format, "children must precede their parent");
        ids.push_back(diagram.add_decision(var, ids[lo], ids[hi]));
      } else {
        throw Error(ErrorKind::Format, "unknown node kind " + kind);
      }
    }
    const auto& roots = j.at("roots");
    if (roots.size() != m) throw Error(ErrorKind::Format, "one root per output expected");
    for (std::size_t k = 0; k < m; ++k) {
      const auto r = roots[k].get<std::size_t>();
      if (r >= ids.size()) throw Error(ErrorKind::Format, "root out of range");
      diagram.set_root(k, ids[r]);
    }
    if (j.contains("clusters") && j.at("clusters").is_array()) {
      const auto& cl = j.at("clusters");
      if (cl.size() != m) throw Error(ErrorKind::Format, "one cluster id per output expected");
      for (std::size_t k = 0; k < m; ++k) diagram.set_root_cluster(k, cl[k].get<std::size_t>());
    }
    Design d{std::move(diagram), std::nullopt};
    if (j.contains("config") && !j.at("config").is_null()) d.config = config_from_json(j.at("config"));
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, std::string("malformed design: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void save_design(const std::string& path, const Bsd& diagram, const LearnConfig* config) {
  write_text_file(path, dump(design_to_json(diagram, config)));
}

Design load_design(const std::string& path) {
  const std::string text = read_text_file(path);
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Format, path + ": " + e.what());
  }
  return design_from_json(j);
}

Json accuracy_to_json(const AccuracyEstimate& acc) {
  Json j;
  j["aggregate"] = acc.aggregate;
  j["aggregate_half_width"] = acc.aggregate_half_width;
  j["per_bit"] = acc.per_bit;
  j["per_bit_half_width"] = acc.per_bit_half_width;
  j["inputs_checked"] = acc.inputs_checked;
  j["exhaustive"] = acc.exhaustive;
  return j;
}

Json report_to_json(const LearnReport& r) {
  Json j;
  j["oracle"] = r.oracle;
  j["inputs"] = r.inputs;
  j["outputs"] = r.outputs;
  j["config"] = config_to_json(r.config);
  j["pool_mode"] = r.pool_mode;
  j["clusters"] = r.clusters;
  j["complexity"] = r.complexity;
  j["distance"] = r.distance;
  Json layers = Json::array();
  for (const auto& l : r.layers) {
    layers.push_back({{"cluster", l.cluster},
                      {"layer", l.layer},
                      {"var", l.var},
                      {"score", l.score},
                      {"expanded", l.expanded},
                      {"frozen", l.frozen},
                      {"final_leaves", l.final_leaves},
                      {"leaves_before_merge", l.leaves_before_merge},
                      {"leaves_after_merge", l.leaves_after_merge},
                      {"merges", l.merges},
                      {"signature_length", l.signature_length},
                      {"probes", l.probes}});
  }
  j["layers"] = std::move(layers);
  j["merges"] = r.merges;
  j["signature_length"] = r.signature_length;
  j["delta"] = r.config.delta;
  j["merge_risk_bound"] = r.merge_risk;
  j["probes"] = r.probes;
  j["max_probes"] = r.config.max_probes ? Json(*r.config.max_probes) : Json(nullptr);
  j["raw_nodes"] = r.raw_nodes;
  j["final_nodes"] = r.final_nodes;
  j["final_decisions"] = r.final_decisions;
  j["forced_leaves"] = r.forced_leaves;
  j["frozen_leaves"] = r.frozen_leaves;
  j["accuracy"] = accuracy_to_json(r.accuracy);
  j["accuracy_on_training_rows"] = r.accuracy_on_training;
  j["training_rows"] = r.training_rows;
  j["training_mismatches"] = r.training_mismatches;
  j["converged"] = r.converged;
  j["shortfall"] = r.shortfall;
  j["decisions"] = r.decisions;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

Json verdict_to_json(const EquivalenceVerdict& v) {
  Json j;
  j["equivalent"] = v.equivalent;
  j["mode"] = v.mode == CheckMode::Exhaustive ? "exhaustive" : "sampled";
  j["inputs_checked"] = v.inputs_checked;
  if (v.counterexample) {
    j["counterexample"] = {{"input", v.counterexample->to_string()},
                           {"expected", v.expected.to_string()},
                           {"got", v.got.to_string()}};
  } else {
    j["counterexample"] = nullptr;
  }
  j["accuracy"] = accuracy_to_json(v.accuracy);
  return j;
}

}  // namespace bsdsynth
