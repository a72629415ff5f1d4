#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <variant>
#include <vector>

#include "bsdsynth/bitvec.hpp"

namespace bsdsynth {

/// Index of a node inside one diagram store.
struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(NodeId, NodeId) = default;
};

enum class LeafStatus { Speculated, Final };

/// Monte Carlo evidence behind a leaf.
struct SpeculationStats {
  double q0 = 1.0;  // fraction of sampled outputs equal to 0
  double q1 = 0.0;
  std::uint64_t sample_count = 0;
  double p0 = 0.5;  // share of the parent's samples routed to the 0 side when this leaf was created
  double p1 = 0.5;
};

struct Decision {
  std::size_t var = 0;
  NodeId lo;  // var = 0
  NodeId hi;  // var = 1
};

struct Leaf {
  bool value = false;
  LeafStatus status = LeafStatus::Final;
  SpeculationStats stats;
};

struct BsdNode {
  std::variant<Decision, Leaf> body;

  bool is_leaf() const noexcept { return std::holds_alternative<Leaf>(body); }
  const Decision& decision() const { return std::get<Decision>(body); }
  const Leaf& leaf() const { return std::get<Leaf>(body); }
};

struct NodeCount {
  std::size_t total = 0;
  std::size_t decisions = 0;
  std::size_t leaves = 0;
  std::vector<std::size_t> per_root;   // nodes reachable from each output root
  std::vector<std::size_t> per_layer;  // nodes by shortest distance from any root
};

/// Multi-rooted decision diagram over n input bits with one root per output bit.
///
/// The store is append-only. Decision nodes are hash-consed on (var, lo, hi);
/// leaves are kept distinct so each one can carry its own speculation evidence,
/// except for the two shared constants returned by constant().
class Bsd {
 public:
  Bsd(std::size_t inputs, std::size_t outputs);

  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t outputs() const noexcept { return outputs_; }
  std::size_t layer() const noexcept { return layer_; }
  void set_layer(std::size_t layer) noexcept { layer_ = layer; }

  NodeId add_leaf(bool value, LeafStatus status, const SpeculationStats& stats = {});
  /// Shared final leaf for a constant value.
  NodeId constant(bool value);
  /// Returns the existing node when (var, lo, hi) is already stored.
  NodeId add_decision(std::size_t var, NodeId lo, NodeId hi);

  const BsdNode& node(NodeId id) const;
  bool contains(NodeId id) const noexcept { return id.value < nodes_.size(); }
  std::size_t store_size() const noexcept { return nodes_.size(); }

  NodeId root(std::size_t output) const;
  const std::vector<NodeId>& roots() const noexcept { return roots_; }
  void set_root(std::size_t output, NodeId id);

  /// Cluster id of each output, used for reporting and DOT labels only.
  std::size_t root_cluster(std::size_t output) const { return clusters_.at(output); }
  void set_root_cluster(std::size_t output, std::size_t cluster);

  bool evaluate_bit(std::size_t output, const BitVec& input) const;
  bool evaluate_node(NodeId from, const BitVec& input) const;

  /// Reachable nodes in post-order (children before parents), deterministic.
  std::vector<NodeId> reachable_postorder() const;
  bool has_speculated_leaves() const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::tuple<std::size_t, std::uint32_t, std::uint32_t>& k) const noexcept;
  };

  std::size_t inputs_;
  std::size_t outputs_;
  std::size_t layer_ = 0;
  std::vector<BsdNode> nodes_;
  std::vector<NodeId> roots_;
  std::vector<std::size_t> clusters_;
  std::unordered_map<std::tuple<std::size_t, std::uint32_t, std::uint32_t>, NodeId, KeyHash> unique_;
  NodeId constants_[2];
  bool has_constant_[2] = {false, false};
};

BitVec evaluate(const Bsd& diagram, const BitVec& input);

/// Cofactor of the function rooted at `root` with `var` fixed to `value`.
NodeId restrict(Bsd& diagram, NodeId root, std::size_t var, bool value);

NodeCount node_count(const Bsd& diagram);

/// Reduce to the canonical form: drop tests with lo == hi and share
/// structurally identical nodes. Throws NotConverged on speculated leaves.
Bsd finalize(const Bsd& diagram);

/// True when no reachable node has lo == hi and no two reachable decision
/// nodes or final leaves are structurally identical.
bool is_canonical(const Bsd& diagram);

/// True when no variable repeats on any root-to-leaf path.
bool respects_path_discipline(const Bsd& diagram);

}  // namespace bsdsynth
