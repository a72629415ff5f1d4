#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "bsdsynth/ios.hpp"
#include "bsdsynth/oracle.hpp"
#include "bsdsynth/sampling.hpp"

namespace bsdsynth {

class Bsd;

/// Circuit-size proxy: node count of the reduced ordered diagram built from
/// truth assignments under a fixed variable order. Several bits are built in
/// one store so shared logic is counted once.
struct ComplexityEstimate {
  std::size_t value = 1;           // all reachable nodes, terminals included
  std::size_t terminal_nodes = 1;  // distinct constant leaves reached
  std::uint64_t sample_count = 0;
  bool exhaustive = false;
  std::vector<std::size_t> order;

  std::size_t decision_nodes() const noexcept { return value - terminal_nodes; }
};

struct ComplexityOptions {
  std::size_t sample_count = 4096;
  std::uint64_t exhaustive_cap = kDefaultExhaustiveCap;
  std::size_t floor = 16;  // fewer samples than this is an Estimate error
  std::size_t threads = 1;
};

/// Subsets of samples with one output value become leaves; unsampled regions
/// become constant 0.
ComplexityEstimate complexity_from_samples(std::span<const IoSample> samples, std::span<const std::size_t> bits,
                                           std::span<const std::size_t> order, std::size_t floor = 1);

ComplexityEstimate estimate_complexity(const OracleHandle& oracle, std::span<const std::size_t> bits,
                                       const ComplexityOptions& options, RngStream& stream);

/// Same estimator applied to the function computed by a diagram.
ComplexityEstimate estimate_complexity(const Bsd& diagram, std::span<const std::size_t> bits,
                                       std::span<const std::size_t> order, const ComplexityOptions& options,
                                       RngStream& stream);

/// C(f) + C(g) - C(tau), clamped below at zero.
double boolean_distance(double cf, double cg, double ctau) noexcept;

/// Distance on decision-node counts: terminals are shared by every pair of
/// functions, so leaving them out keeps disjoint-support pairs at zero.
double boolean_distance(const ComplexityEstimate& f, const ComplexityEstimate& g,
                        const ComplexityEstimate& tau) noexcept;

class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t size) : size_(size), values_(size * size, 0.0) {}

  std::size_t size() const noexcept { return size_; }
  double operator()(std::size_t i, std::size_t j) const { return values_.at(i * size_ + j); }
  void set(std::size_t i, std::size_t j, double value) {
    values_.at(i * size_ + j) = value;
    values_.at(j * size_ + i) = value;
  }

  std::vector<ComplexityEstimate> singles;  // per output bit

 private:
  std::size_t size_;
  std::vector<double> values_;
};

DistanceMatrix distance_matrix_from_samples(std::span<const IoSample> samples, std::size_t outputs,
                                            std::span<const std::size_t> order, std::size_t threads = 1);

DistanceMatrix distance_matrix(const OracleHandle& oracle, const ComplexityOptions& options, RngStream& stream);

struct Clustering {
  std::vector<std::vector<std::size_t>> groups;  // sorted by lowest member

  std::size_t cluster_of(std::size_t bit) const;
};

/// Greedy agglomeration: repeatedly join the two clusters with the largest
/// max-pairwise distance until at most max_clusters remain or no positive
/// distance is left. Ties go to the pair with the lowest bit indices.
Clustering cluster_outputs(const DistanceMatrix& matrix, std::size_t max_clusters);

/// Every output in its own cluster.
Clustering singleton_clusters(std::size_t outputs);

}  // namespace bsdsynth
