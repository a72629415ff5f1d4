#include "bsdsynth/pipeline.hpp"

#include <chrono>
#include <cmath>

namespace bsdsynth {

void LearnConfig::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw Error(ErrorKind::Config, std::string(name) + " must be positive");
  };
  positive(max_clusters, "max_clusters");
  positive(spec_samples, "spec_samples");
  positive(ordering_samples, "ordering_samples");
  positive(merge_samples, "merge_samples");
  positive(complexity_samples, "complexity_samples");
  positive(validation_samples, "validation_samples");
  positive(pool_final_rows, "pool_final_rows");
  if (width_cap < 2) throw Error(ErrorKind::Config, "width_cap must be at least 2");
  if (spec_samples > spec_samples_cap)
    throw Error(ErrorKind::Config, "spec_samples exceeds the per-node cap of " + std::to_string(spec_samples_cap));
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw Error(ErrorKind::Config, "epsilon must lie in [0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorKind::Config, "delta must lie in (0, 1)");
  if (max_probes && *max_probes == 0) throw Error(ErrorKind::Config, "max_probes must be positive");
}

namespace {

bool table_is_complete(const Oracle& oracle) {
  const SampleSet* rows = oracle.table();
  if (!rows) return true;
  const auto space = input_space_size(oracle.input_width());
  if (!space) return false;
  const auto* t = dynamic_cast<const TableOracle*>(&oracle);
  if (!t || rows->size() < *space) return false;
  for (std::uint64_t x = 0; x < *space; ++x)
    if (!t->covers(BitVec::from_uint(x, oracle.input_width()))) return false;
  return true;
}

std::uint64_t remaining(const OracleHandle& oracle) {
  const auto b = oracle.budget();
  if (!b) return UINT64_MAX;
  return *b > oracle.probes() ? *b - oracle.probes() : 0;
}

}  // namespace

LearnResult learn(const OracleHandle& oracle, const SampleSet& given, const LearnConfig& config,
                  const LayerObserver& observer) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const std::size_t n = oracle.inputs();
  const std::size_t m = oracle.outputs();
  if (given.inputs() != n || given.outputs() != m)
    throw Error(ErrorKind::InputShape, "given samples are " + std::to_string(given.inputs()) + "x" +
                                           std::to_string(given.outputs()) + " but the oracle is " +
                                           std::to_string(n) + "x" + std::to_string(m));

  LearnReport report;
  report.oracle = oracle.oracle().name();
  report.inputs = n;
  report.outputs = m;
  report.config = config;

  // Mandatory rows: given and counterexample samples, plus the table itself
  // when the oracle is a finite table.
  SampleSet mandatory = given.mandatory();
  const bool complete = table_is_complete(oracle.oracle());
  report.pool_mode = config.given_only || !complete;
  if (const SampleSet* table = oracle.oracle().table(); table && !complete) {
    for (const auto& s : *table) mandatory.add(s.input, s.output, Provenance::Given);
    report.decisions.push_back("table oracle does not cover every input; learning from its rows only");
  }
  if (report.pool_mode && mandatory.empty())
    throw Error(ErrorKind::Config, "learning from given rows alone needs at least one row");

  if (!mandatory.empty() && complete) {
    std::vector<BitVec> inputs;
    for (const auto& s : mandatory) inputs.push_back(s.input);
    const auto truth = oracle.query(inputs);
    for (std::size_t i = 0; i < truth.size(); ++i)
      if (truth[i] != mandatory[i].output)
        throw Error(ErrorKind::Domain, "given sample " + ios_line(mandatory[i].input, mandatory[i].output) +
                                           " contradicts the oracle (" + truth[i].to_string() + ")");
  } else if (const auto* table = dynamic_cast<const TableOracle*>(&oracle.oracle())) {
    for (const auto& s : mandatory)
      if (table->covers(s.input) && table->evaluate(s.input) != s.output)
        throw Error(ErrorKind::Domain, "given sample " + ios_line(s.input, s.output) + " contradicts the table");
  }
  report.training_rows = mandatory.size();

  // Partition output bits once, up front.
  Clustering clustering = singleton_clusters(m);
  if (config.partition && m > 1) {
    ComplexityOptions opts;
    opts.sample_count = config.complexity_samples;
    opts.exhaustive_cap = config.complexity_exhaustive_cap;
    opts.threads = config.threads;
    opts.floor = std::min<std::size_t>(16, config.complexity_samples);
    auto stream = RngStream::derive(config.seed, "partition");
    std::optional<DistanceMatrix> matrix;
    if (report.pool_mode) {
      matrix = distance_matrix_from_samples(mandatory.samples(), m, oracle.oracle().canonical_order(), config.threads);
    } else if (remaining(oracle) >= std::min<std::uint64_t>(input_space_size(n).value_or(UINT64_MAX),
                                                             config.complexity_exhaustive_cap)) {
      matrix = distance_matrix(oracle, opts, stream);
    } else {
      report.decisions.push_back("probe budget too small for the distance matrix; outputs kept as singletons");
    }
    if (matrix) {
      clustering = cluster_outputs(*matrix, config.max_clusters);
      report.distance.assign(m, std::vector<double>(m, 0.0));
      for (std::size_t i = 0; i < m; ++i) {
        report.complexity.push_back(matrix->singles[i].decision_nodes());
        for (std::size_t j = 0; j < m; ++j) report.distance[i][j] = (*matrix)(i, j);
      }
    }
  }
  report.clusters = clustering.groups;
  report.decisions.push_back("outputs partitioned once before expansion into " +
                             std::to_string(clustering.groups.size()) + " cluster(s)");
  report.decisions.push_back(std::string("variable scorer: ") + to_string(config.scorer));
  if (!config.merge) report.decisions.push_back("leaf merging disabled; the raw expansion tree is kept");
  if (report.pool_mode)
    report.decisions.push_back("speculation, ordering and merging use the mandatory rows only; leaves without rows "
                               "take their parent's value");
  report.decisions.push_back("merged leaves keep the evidence of every member; the first member answers for the "
                             "group in later speculation");

  EngineConfig ec;
  ec.seed = config.seed;
  ec.width_cap = config.width_cap;
  ec.spec_samples = config.spec_samples;
  ec.ordering_samples = config.ordering_samples;
  ec.merge_samples = config.merge_samples;
  ec.scorer = config.scorer;
  ec.merge = config.merge;
  ec.pool = report.pool_mode;
  ec.min_overlap = config.min_overlap;
  ec.pool_final_rows = config.pool_final_rows;
  ec.threads = config.threads;

  Bsd raw(n, m);
  bool budget_hit = false;
  for (std::size_t c = 0; c < clustering.groups.size(); ++c) {
    ClusterEngine engine(oracle, mandatory, clustering.groups[c], c, ec);
    try {
      engine.initialize();
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Budget) throw;
      report.probes = oracle.probes();
      report.shortfall.push_back(e.what());
      if (c == 0)
        throw PartialResult("probe budget exhausted before any output had a speculation", std::move(report));
      // Earlier clusters stand; these outputs keep the constant-0 placeholder.
      budget_hit = true;
      report.shortfall.push_back("cluster " + std::to_string(c) + ": no probes left, outputs left at constant 0");
      for (std::size_t j : clustering.groups[c]) raw.set_root_cluster(j, c);
      continue;
    }
    if (observer) observer(engine);
    while (engine.active() && !budget_hit) {
      try {
        report.layers.push_back(engine.step());
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Budget) throw;
        budget_hit = true;
        report.shortfall.push_back(std::string("cluster ") + std::to_string(c) + ": " + e.what());
        break;
      }
      if (observer) observer(engine);
    }
    const std::size_t forced = engine.finish();
    report.forced_leaves += forced;
    report.frozen_leaves += engine.frozen_count();
    if (forced)
      report.shortfall.push_back("cluster " + std::to_string(c) + ": " + std::to_string(forced) +
                                 " leaf(s) fixed at their majority value without unanimous evidence");
    for (const auto& note : engine.notes()) report.decisions.push_back("cluster " + std::to_string(c) + ": " + note);
    report.merges += engine.merges();
    if (engine.min_signature_length())
      report.signature_length = report.signature_length ? std::min(report.signature_length, engine.min_signature_length())
                                                        : engine.min_signature_length();
    engine.materialize(raw);
  }
  raw.set_layer(n);
  report.raw_nodes = node_count(raw).total;

  Bsd diagram = config.merge ? finalize(raw) : raw;
  const NodeCount count = node_count(diagram);
  report.final_nodes = count.total;
  report.final_decisions = count.decisions;
  if (report.merges && report.signature_length)
    report.merge_risk = merge_risk(report.merges, report.signature_length, config.delta);

  for (const auto& s : mandatory)
    if (evaluate(diagram, s.input) != s.output) ++report.training_mismatches;
  if (report.training_mismatches)
    report.shortfall.push_back(std::to_string(report.training_mismatches) + " mandatory row(s) not reproduced");

  // Accuracy: oracle probes when the oracle answers arbitrary inputs and the
  // budget allows, otherwise the mandatory rows.
  const auto space = input_space_size(n);
  const std::uint64_t needed = (space && *space <= config.exhaustive_cap) ? *space : config.validation_samples;
  if (complete && remaining(oracle) >= needed) {
    auto stream = RngStream::derive(config.seed, "validate");
    report.accuracy = estimate_accuracy(diagram, oracle, config.validation_samples, stream, config.exhaustive_cap,
                                        config.threads);
  } else {
    report.accuracy_on_training = true;
    AccuracyEstimate est;
    est.per_bit.assign(m, 0.0);
    est.per_bit_half_width.assign(m, 0.0);
    for (const auto& s : mandatory) {
      const BitVec got = evaluate(diagram, s.input);
      for (std::size_t j = 0; j < m; ++j) est.per_bit[j] += got.get(j) == s.output.get(j);
    }
    const double total = std::max<double>(1.0, static_cast<double>(mandatory.size()));
    double sum = 0.0;
    for (auto& p : est.per_bit) sum += (p /= total);
    est.aggregate = sum / static_cast<double>(m);
    est.inputs_checked = mandatory.size();
    report.accuracy = est;
    report.decisions.push_back("accuracy measured on the mandatory rows; the oracle was not probed for validation");
  }
  if (report.accuracy.aggregate < 1.0 - config.epsilon)
    report.shortfall.push_back("estimated accuracy below 1 - epsilon");
  report.probes = oracle.probes();
  report.converged = report.shortfall.empty();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return LearnResult{std::move(diagram), std::move(report)};
}

LearnResult refine(const Bsd& diagram, const SampleSet& counterexamples, const OracleHandle& oracle,
                   const SampleSet& given, const LearnConfig& config) {
  if (diagram.inputs() != oracle.inputs() || diagram.outputs() != oracle.outputs())
    throw Error(ErrorKind::InputShape, "design and oracle widths differ");
  if (counterexamples.inputs() != oracle.inputs() || counterexamples.outputs() != oracle.outputs())
    throw Error(ErrorKind::InputShape, "counterexample widths differ from the oracle");

  LearnReport unchanged;
  unchanged.oracle = oracle.oracle().name();
  unchanged.inputs = oracle.inputs();
  unchanged.outputs = oracle.outputs();
  unchanged.config = config;
  unchanged.final_nodes = node_count(diagram).total;
  unchanged.final_decisions = node_count(diagram).decisions;
  if (counterexamples.empty()) {
    unchanged.decisions.push_back("no counterexamples; design unchanged");
    unchanged.converged = true;
    return LearnResult{diagram, std::move(unchanged)};
  }

  std::vector<BitVec> inputs;
  for (const auto& s : counterexamples) inputs.push_back(s.input);
  const auto truth = oracle.query(inputs);
  SampleSet augmented = given;
  std::vector<std::string> warnings;
  std::size_t kept = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto& s = counterexamples[i];
    if (truth[i] != s.output)
      throw Error(ErrorKind::Domain, "counterexample " + ios_line(s.input, s.output) +
                                         " does not match the oracle (" + truth[i].to_string() + ")");
    if (evaluate(diagram, s.input) == s.output) {
      warnings.push_back("counterexample " + s.input.to_string() + " already satisfied by the design; ignored");
      continue;
    }
    augmented.add(s.input, s.output, Provenance::Counterexample);
    ++kept;
  }
  if (kept == 0) {
    unchanged.decisions = warnings;
    unchanged.decisions.push_back("no effective counterexamples; design unchanged");
    unchanged.converged = true;
    return LearnResult{diagram, std::move(unchanged)};
  }
  auto result = learn(oracle, augmented, config);
  result.report.decisions.insert(result.report.decisions.begin(), warnings.begin(), warnings.end());
  result.report.decisions.push_back("relearned from scratch with " + std::to_string(kept) +
                                    " counterexample(s) added to the mandatory rows");
  return result;
}

}  // namespace bsdsynth
