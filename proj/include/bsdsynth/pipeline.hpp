#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bsdsynth/bsd.hpp"
#include "bsdsynth/distance.hpp"
#include "bsdsynth/engine.hpp"
#include "bsdsynth/error.hpp"
#include "bsdsynth/ios.hpp"
#include "bsdsynth/oracle.hpp"
#include "bsdsynth/sampling.hpp"

namespace bsdsynth {

struct LearnConfig {
  std::uint64_t seed = 1;
  std::size_t max_clusters = 10;
  std::size_t width_cap = 10000;
  std::size_t spec_samples = 10000;
  std::size_t spec_samples_cap = 1000000;
  std::size_t ordering_samples = 400;
  std::size_t merge_samples = 10000;
  std::optional<std::uint64_t> max_probes;  // N; unlimited when empty
  std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
  double epsilon = 1e-4;
  double delta = 0.01;  // tolerated per-merge error in the merge-risk bound
  Scorer scorer = Scorer::Influence;
  std::size_t complexity_samples = 4096;
  std::uint64_t complexity_exhaustive_cap = std::uint64_t{1} << 16;
  std::size_t validation_samples = 10000;
  bool partition = true;
  bool merge = true;
  bool given_only = false;  // learn from the mandatory rows alone
  std::size_t min_overlap = 2;
  std::size_t pool_final_rows = 1;
  std::size_t threads = 1;  // never affects results

  /// Throws Config on out-of-range values.
  void validate() const;
};

struct LearnReport {
  std::string oracle;
  std::size_t inputs = 0;
  std::size_t outputs = 0;
  LearnConfig config;
  bool pool_mode = false;

  std::vector<std::vector<std::size_t>> clusters;
  std::vector<std::vector<double>> distance;  // empty when partitioning was skipped
  std::vector<std::size_t> complexity;         // decision nodes per output bit

  std::vector<LayerRecord> layers;
  std::uint64_t merges = 0;
  std::size_t signature_length = 0;
  double merge_risk = 0.0;

  std::uint64_t probes = 0;
  std::size_t raw_nodes = 0;
  std::size_t final_nodes = 0;
  std::size_t final_decisions = 0;
  std::size_t forced_leaves = 0;
  std::size_t frozen_leaves = 0;

  AccuracyEstimate accuracy;
  bool accuracy_on_training = false;  // no oracle probes available for validation
  std::size_t training_rows = 0;
  std::size_t training_mismatches = 0;

  bool converged = false;
  std::vector<std::string> shortfall;
  std::vector<std::string> decisions;
  double wall_seconds = 0.0;
};

struct LearnResult {
  Bsd diagram;
  LearnReport report;
};

/// Raised when the probe budget runs out before a diagram exists.
class PartialResult : public Error {
 public:
  PartialResult(const std::string& what, LearnReport report)
      : Error(ErrorKind::PartialResult, what), report_(std::move(report)) {}
  const LearnReport& report() const noexcept { return report_; }

 private:
  LearnReport report_;
};

/// Called after the roots of a cluster are speculated and after every layer.
using LayerObserver = std::function<void(const ClusterEngine&)>;

LearnResult learn(const OracleHandle& oracle, const SampleSet& given, const LearnConfig& config,
                  const LayerObserver& observer = {});

/// Relearns with the counterexamples added to the mandatory rows. An empty
/// set returns the diagram unchanged; counterexamples the diagram already
/// satisfies are dropped with a warning.
LearnResult refine(const Bsd& diagram, const SampleSet& counterexamples, const OracleHandle& oracle,
                   const SampleSet& given, const LearnConfig& config);

}  // namespace bsdsynth
