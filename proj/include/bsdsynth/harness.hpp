#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "bsdsynth/sampling.hpp"

namespace bsdsynth {

/// Layer-by-layer accuracy of expansion under exact cofactor proportions.
struct Theorem1Result {
  std::size_t trials = 0;
  std::size_t violations = 0;  // strict accuracy decreases between consecutive layers
  std::size_t layers_checked = 0;
  std::vector<std::vector<double>> curves;  // per trial: exhaustive accuracy at layer 0, 1, ...
};

/// Target of one trial: packed n-bit input -> output bit.
using TruthTable = std::vector<bool>;

/// Runs expansion on one target with exhaustive speculation and returns the
/// exhaustive accuracy after every layer (layer 0 first).
std::vector<double> layer_accuracy(const TruthTable& target, std::size_t n, std::uint64_t seed,
                                   bool merge = true);

/// `trials` uniformly random n-input, 1-output targets (n <= 12).
Theorem1Result theorem1_harness(std::size_t trials, std::size_t n, std::uint64_t seed);

struct Theorem2Result {
  std::size_t trials = 0;
  std::uint64_t merges_per_trial = 0;  // T
  std::size_t probes = 0;              // K
  double delta = 0.0;
  double frequency = 0.0;  // trials whose surviving merges add up to error >= delta
  double bound = 0.0;      // T / (K delta)
  double margin = 0.0;     // 3 sigma of a Bernoulli(min(bound, 1)) mean over the trials
  std::uint64_t erroneous_merges = 0;  // surviving merges with a nonzero disagreement rate
  bool passed = false;
};

/// Simulated signature merges. Each trial attempts T merges of leaf pairs
/// whose disagreement rate r is log-uniform on [1/(10K), 1/2] (or 0 when
/// `equal_pairs`); a pair merges when all K probes agree, adding r to the
/// diagram's error.
Theorem2Result theorem2_harness(std::uint64_t merges, std::size_t probes, double delta, std::size_t trials,
                                std::uint64_t seed, bool equal_pairs = false);

}  // namespace bsdsynth
