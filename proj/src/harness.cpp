#include "bsdsynth/harness.hpp"

#include <cmath>
#include <memory>

#include "bsdsynth/bsd.hpp"
#include "bsdsynth/engine.hpp"
#include "bsdsynth/error.hpp"

namespace bsdsynth {

std::vector<double> layer_accuracy(const TruthTable& target, std::size_t n, std::uint64_t seed, bool merge) {
  if (n == 0 || n > 12) throw Error(ErrorKind::Domain, "exact-regime harness needs 1 <= n <= 12");
  if (target.size() != (std::size_t{1} << n)) throw Error(ErrorKind::InputShape, "truth table must have 2^n rows");
  auto table = std::make_shared<TruthTable>(target);
  auto oracle = std::make_shared<FunctionOracle>("target", n, 1,
                                                 [table](std::uint64_t x) -> std::uint64_t { return (*table)[x]; });
  OracleHandle handle(oracle);
  SampleSet none(n, 1);
  EngineConfig config;
  config.seed = seed;
  config.spec_samples = std::size_t{1} << n;  // exhaustive cofactors at every depth
  config.merge_samples = std::size_t{1} << n;
  config.ordering_samples = std::size_t{1} << n;
  config.merge = merge;
  ClusterEngine engine(handle, none, {0}, 0, config);

  std::vector<double> curve;
  auto record = [&] {
    Bsd snapshot(n, 1);
    engine.materialize(snapshot);
    std::uint64_t correct = 0;
    for (std::uint64_t x = 0; x < target.size(); ++x)
      correct += snapshot.evaluate_bit(0, BitVec::from_uint(x, n)) == target[x];
    curve.push_back(static_cast<double>(correct) / static_cast<double>(target.size()));
  };
  engine.initialize();
  record();
  while (engine.active()) {
    engine.step();
    record();
  }
  return curve;
}

Theorem1Result theorem1_harness(std::size_t trials, std::size_t n, std::uint64_t seed) {
  Theorem1Result result;
  result.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    auto stream = RngStream::derive(seed, "theorem1-target", t);
    TruthTable target(std::size_t{1} << n);
    for (std::size_t x = 0; x < target.size(); ++x) target[x] = stream.next() & 1;
    auto curve = layer_accuracy(target, n, hash_combine(seed, t));
    for (std::size_t k = 1; k < curve.size(); ++k) {
      ++result.layers_checked;
      if (curve[k] < curve[k - 1]) ++result.violations;
    }
    result.curves.push_back(std::move(curve));
  }
  return result;
}

Theorem2Result theorem2_harness(std::uint64_t merges, std::size_t probes, double delta, std::size_t trials,
                                std::uint64_t seed, bool equal_pairs) {
  if (probes == 0 || trials == 0) throw Error(ErrorKind::Domain, "theorem 2 harness needs K >= 1 and trials >= 1");
  if (!(delta > 0.0)) throw Error(ErrorKind::Domain, "theorem 2 harness needs delta > 0");
  Theorem2Result r;
  r.trials = trials;
  r.merges_per_trial = merges;
  r.probes = probes;
  r.delta = delta;
  r.bound = merge_risk(merges, probes, delta);
  const double k = static_cast<double>(probes);
  const double lo = std::log(1.0 / (10.0 * k)), hi = std::log(0.5);
  std::size_t events = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    auto stream = RngStream::derive(seed, "theorem2", t);
    double error = 0.0;
    for (std::uint64_t i = 0; i < merges; ++i) {
      const double rate = equal_pairs ? 0.0 : std::exp(lo + (hi - lo) * stream.uniform());
      // All K probes agree with probability (1 - r)^K.
      const bool survives = stream.uniform() < std::pow(1.0 - rate, k);
      if (survives && rate > 0.0) {
        error += rate;
        ++r.erroneous_merges;
      }
    }
    if (error >= delta) ++events;
  }
  r.frequency = static_cast<double>(events) / static_cast<double>(trials);
  const double b = std::min(1.0, r.bound);
  r.margin = 3.0 * std::sqrt(b * (1.0 - b) / static_cast<double>(trials));
  r.passed = r.frequency <= r.bound + r.margin;
  return r;
}

}  // namespace bsdsynth
