#include "bsdsynth/distance.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "bsdsynth/bsd.hpp"
#include "bsdsynth/error.hpp"
#include "bsdsynth/parallel.hpp"

namespace bsdsynth {

namespace {

void check_order(std::span<const std::size_t> order, std::size_t width) {
  std::vector<char> seen(width, 0);
  if (order.size() != width) throw Error(ErrorKind::Config, "variable order must list every input once");
  for (auto v : order) {
    if (v >= width || seen[v]) throw Error(ErrorKind::Config, "variable order is not a permutation");
    seen[v] = 1;
  }
}

NodeId build_bit(Bsd& store, std::span<const IoSample> samples, std::vector<std::uint32_t>& rows,
                 std::size_t depth, std::size_t bit, std::span<const std::size_t> order) {
  if (rows.empty()) return store.constant(false);
  const bool first = samples[rows.front()].output.get(bit);
  const bool uniform = std::all_of(rows.begin(), rows.end(),
                                   [&](std::uint32_t r) { return samples[r].output.get(bit) == first; });
  if (uniform || depth == order.size()) return store.constant(first);
  const std::size_t var = order[depth];
  std::vector<std::uint32_t> lo_rows, hi_rows;
  for (auto r : rows) (samples[r].input.get(var) ? hi_rows : lo_rows).push_back(r);
  rows.clear();
  rows.shrink_to_fit();
  NodeId lo = build_bit(store, samples, lo_rows, depth + 1, bit, order);
  NodeId hi = build_bit(store, samples, hi_rows, depth + 1, bit, order);
  return lo == hi ? lo : store.add_decision(var, lo, hi);
}

std::vector<IoSample> sample_oracle(const OracleHandle& oracle, const ComplexityOptions& options,
                                    RngStream& stream, bool& exhaustive) {
  const std::size_t n = oracle.inputs();
  const auto space = input_space_size(n);
  std::vector<BitVec> inputs;
  exhaustive = space && *space <= options.exhaustive_cap;
  if (exhaustive) {
    inputs.reserve(*space);
    for (std::uint64_t x = 0; x < *space; ++x) inputs.push_back(BitVec::from_uint(x, n));
  } else {
    if (options.sample_count < options.floor)
      throw Error(ErrorKind::Estimate, "complexity estimate needs at least " + std::to_string(options.floor) +
                                           " samples, configured " + std::to_string(options.sample_count));
    inputs = conditioned_inputs(n, PathAssignment{}, options.sample_count, stream).inputs;
  }
  auto outputs = oracle.query(inputs);
  std::vector<IoSample> samples;
  samples.reserve(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i)
    samples.push_back(IoSample{std::move(inputs[i]), std::move(outputs[i]), Provenance::Random});
  return samples;
}

}  // namespace

ComplexityEstimate complexity_from_samples(std::span<const IoSample> samples, std::span<const std::size_t> bits,
                                           std::span<const std::size_t> order, std::size_t floor) {
  if (bits.empty()) throw Error(ErrorKind::Config, "complexity estimate needs at least one output bit");
  if (samples.size() < floor)
    throw Error(ErrorKind::Estimate, "complexity estimate needs at least " + std::to_string(floor) +
                                         " samples, got " + std::to_string(samples.size()));
  if (samples.empty()) throw Error(ErrorKind::Estimate, "complexity estimate needs samples");
  const std::size_t n = samples.front().input.width();
  check_order(order, n);
  for (auto b : bits)
    if (b >= samples.front().output.width()) throw Error(ErrorKind::Domain, "output bit out of range");

  Bsd store(n, bits.size());
  for (std::size_t k = 0; k < bits.size(); ++k) {
    std::vector<std::uint32_t> rows(samples.size());
    std::iota(rows.begin(), rows.end(), 0u);
    store.set_root(k, build_bit(store, samples, rows, 0, bits[k], order));
  }
  const NodeCount count = node_count(store);
  ComplexityEstimate est;
  est.value = count.total;
  est.terminal_nodes = count.leaves;
  est.sample_count = samples.size();
  est.order.assign(order.begin(), order.end());
  return est;
}

ComplexityEstimate estimate_complexity(const OracleHandle& oracle, std::span<const std::size_t> bits,
                                       const ComplexityOptions& options, RngStream& stream) {
  bool exhaustive = false;
  const auto samples = sample_oracle(oracle, options, stream, exhaustive);
  const auto order = oracle.oracle().canonical_order();
  auto est = complexity_from_samples(samples, bits, order, options.floor);
  est.exhaustive = exhaustive;
  return est;
}

ComplexityEstimate estimate_complexity(const Bsd& diagram, std::span<const std::size_t> bits,
                                       std::span<const std::size_t> order, const ComplexityOptions& options,
                                       RngStream& stream) {
  const std::size_t n = diagram.inputs();
  const auto space = input_space_size(n);
  const bool exhaustive = space && *space <= options.exhaustive_cap;
  std::vector<BitVec> inputs;
  if (exhaustive) {
    for (std::uint64_t x = 0; x < *space; ++x) inputs.push_back(BitVec::from_uint(x, n));
  } else {
    if (options.sample_count < options.floor)
      throw Error(ErrorKind::Estimate, "complexity estimate needs at least " + std::to_string(options.floor) +
                                           " samples");
    inputs = conditioned_inputs(n, PathAssignment{}, options.sample_count, stream).inputs;
  }
  std::vector<IoSample> samples;
  samples.reserve(inputs.size());
  for (auto& x : inputs) {
    BitVec y = evaluate(diagram, x);
    samples.push_back(IoSample{std::move(x), std::move(y), Provenance::Random});
  }
  auto est = complexity_from_samples(samples, bits, order, options.floor);
  est.exhaustive = exhaustive;
  return est;
}

double boolean_distance(double cf, double cg, double ctau) noexcept { return std::max(0.0, cf + cg - ctau); }

double boolean_distance(const ComplexityEstimate& f, const ComplexityEstimate& g,
                        const ComplexityEstimate& tau) noexcept {
  return boolean_distance(static_cast<double>(f.decision_nodes()), static_cast<double>(g.decision_nodes()),
                          static_cast<double>(tau.decision_nodes()));
}

DistanceMatrix distance_matrix_from_samples(std::span<const IoSample> samples, std::size_t outputs,
                                            std::span<const std::size_t> order, std::size_t threads) {
  if (outputs == 0) throw Error(ErrorKind::Config, "distance matrix needs at least one output");
  DistanceMatrix matrix(outputs);
  matrix.singles.resize(outputs);
  parallel_for(outputs, threads, [&](std::size_t j) {
    const std::size_t bit[1] = {j};
    matrix.singles[j] = complexity_from_samples(samples, bit, order);
  });
  for (std::size_t j = 0; j < outputs; ++j)
    matrix.set(j, j, static_cast<double>(matrix.singles[j].decision_nodes()));

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < outputs; ++i)
    for (std::size_t j = i + 1; j < outputs; ++j) pairs.emplace_back(i, j);
  std::vector<double> dist(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t p) {
    const std::size_t bits[2] = {pairs[p].first, pairs[p].second};
    const auto joint = complexity_from_samples(samples, bits, order);
    dist[p] = boolean_distance(matrix.singles[bits[0]], matrix.singles[bits[1]], joint);
  });
  for (std::size_t p = 0; p < pairs.size(); ++p) matrix.set(pairs[p].first, pairs[p].second, dist[p]);
  return matrix;
}

DistanceMatrix distance_matrix(const OracleHandle& oracle, const ComplexityOptions& options, RngStream& stream) {
  bool exhaustive = false;
  const auto samples = sample_oracle(oracle, options, stream, exhaustive);
  const auto order = oracle.oracle().canonical_order();
  auto matrix = distance_matrix_from_samples(samples, oracle.outputs(), order, options.threads);
  for (auto& s : matrix.singles) s.exhaustive = exhaustive;
  return matrix;
}

std::size_t Clustering::cluster_of(std::size_t bit) const {
  for (std::size_t c = 0; c < groups.size(); ++c)
    if (std::find(groups[c].begin(), groups[c].end(), bit) != groups[c].end()) return c;
  throw Error(ErrorKind::Domain, "bit " + std::to_string(bit) + " is not in any cluster");
}

Clustering cluster_outputs(const DistanceMatrix& matrix, std::size_t max_clusters) {
  if (max_clusters == 0) throw Error(ErrorKind::Config, "max_clusters must be at least 1");
  Clustering c = singleton_clusters(matrix.size());
  auto linkage = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    double best = -1.0;
    for (auto i : a)
      for (auto j : b) best = std::max(best, matrix(i, j));
    return best;
  };
  while (c.groups.size() > max_clusters) {
    std::size_t best_a = 0, best_b = 0;
    double best = 0.0;
    bool found = false;
    // Groups stay sorted by lowest member, so scanning in order breaks ties toward low bit indices.
    for (std::size_t a = 0; a < c.groups.size(); ++a)
      for (std::size_t b = a + 1; b < c.groups.size(); ++b) {
        const double d = linkage(c.groups[a], c.groups[b]);
        if (d > 0.0 && (!found || d > best)) {
          best = d;
          best_a = a;
          best_b = b;
          found = true;
        }
      }
    if (!found) break;
    auto& into = c.groups[best_a];
    into.insert(into.end(), c.groups[best_b].begin(), c.groups[best_b].end());
    std::sort(into.begin(), into.end());
    c.groups.erase(c.groups.begin() + static_cast<std::ptrdiff_t>(best_b));
  }
  std::sort(c.groups.begin(), c.groups.end());
  return c;
}

Clustering singleton_clusters(std::size_t outputs) {
  Clustering c;
  for (std::size_t j = 0; j < outputs; ++j) c.groups.push_back({j});
  return c;
}

}  // namespace bsdsynth
