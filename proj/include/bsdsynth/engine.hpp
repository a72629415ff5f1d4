#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bsdsynth/bsd.hpp"
#include "bsdsynth/ios.hpp"
#include "bsdsynth/oracle.hpp"
#include "bsdsynth/sampling.hpp"

namespace bsdsynth {

/// How the next expansion variable is scored.
///   Influence:  Hamming distance between the cofactors f|v=0 and f|v=1 on
///               the shared probe set, per leaf, summed over the cluster.
///   Prediction: Hamming distance between the current constant predictions
///               and the predictions after a provisional expansion on v.
///   Error:      reduction in disagreement with the oracle from that expansion.
///   Random:     uniform choice among the candidates (ablation only).
enum class Scorer { Influence, Prediction, Error, Random };

const char* to_string(Scorer scorer) noexcept;
Scorer parse_scorer(const std::string& text);

struct EngineConfig {
  std::uint64_t seed = 0;
  std::size_t width_cap = 10000;
  std::size_t spec_samples = 10000;
  std::size_t ordering_samples = 400;
  std::size_t merge_samples = 10000;
  Scorer scorer = Scorer::Influence;
  bool merge = true;
  /// Learn only from the mandatory rows; the oracle is never probed.
  bool pool = false;
  /// Pool mode: shared row keys required before two leaves may merge.
  std::size_t min_overlap = 2;
  /// Pool mode: unanimous rows needed before a leaf is final.
  std::size_t pool_final_rows = 1;
  std::size_t threads = 1;
};

struct LayerRecord {
  std::size_t cluster = 0;
  std::size_t layer = 0;
  std::size_t var = 0;
  double score = 0.0;
  std::size_t expanded = 0;           // leaves turned into decisions
  std::size_t frozen = 0;             // leaves left behind by the width cap
  std::size_t leaves_before_merge = 0;
  std::size_t leaves_after_merge = 0; // undecided leaves carried to the next layer
  std::size_t final_leaves = 0;       // leaves that became final in this layer
  std::size_t merges = 0;
  std::size_t signature_length = 0;
  std::uint64_t probes = 0;           // oracle probes spent on this layer
};

struct MergeRiskBound {
  std::uint64_t merges = 0;     // T
  std::size_t probes = 0;       // K, shortest signature used for a merge
  double delta = 0.01;
  double bound() const;
};

/// T / (K * delta). Throws Domain when K = 0 or delta <= 0.
double merge_risk(std::uint64_t merges, std::size_t probes, double delta);

/// Outcome of speculating one leaf.
struct SpeculationVerdict {
  bool value = false;
  bool final = false;
  bool training_consistent = true;
  SpeculationStats stats;
};

/// Mandatory row routed to a leaf, for one output bit.
struct RoutedRow {
  std::uint32_t row = 0;
  std::uint32_t output = 0;
};

/// Speculates the function of `output` under `path` from conditioned draws,
/// checked against the routed mandatory rows.
SpeculationVerdict speculate_leaf(const OracleHandle& oracle, std::size_t output, const PathAssignment& path,
                                  std::size_t count, RngStream& stream, const SampleSet& mandatory,
                                  const std::vector<RoutedRow>& rows);

/// Expansion state of one cluster of output bits. Each layer: pick one
/// variable for the whole cluster, Shannon-expand every undecided leaf on
/// it, speculate the children, then merge leaves with equal signatures.
class ClusterEngine {
 public:
  ClusterEngine(const OracleHandle& oracle, const SampleSet& mandatory, std::vector<std::size_t> outputs,
                std::size_t cluster_id, EngineConfig config);

  /// Speculates the roots (layer 0).
  void initialize();
  /// False once no undecided, unfrozen leaf is left.
  bool active() const noexcept { return !frontier_.empty(); }
  std::size_t layer() const noexcept { return bound_.size(); }
  const std::vector<std::size_t>& outputs() const noexcept { return outputs_; }
  std::size_t cluster_id() const noexcept { return cluster_; }

  /// Best candidate and its score; nullopt when every variable is bound.
  std::optional<std::pair<std::size_t, double>> select_variable() const;
  /// Per-candidate scores in candidate order (lowest index first).
  std::vector<std::pair<std::size_t, double>> score_variables() const;
  /// Expands on `var` and speculates the children. Returns the number of
  /// leaves expanded; the rest of the frontier is frozen by the width cap.
  std::size_t expand(std::size_t var);
  /// Merges equal-signature undecided leaves; returns collapsed pairs.
  std::size_t merge();
  /// select + expand + merge.
  LayerRecord step();

  /// Turns every remaining undecided or frozen leaf into a final leaf with
  /// its majority value. Returns how many were forced.
  std::size_t finish();

  /// Writes the cluster's roots into `out`; speculated leaves keep their status.
  void materialize(Bsd& out) const;

  std::uint64_t merges() const noexcept { return merges_; }
  std::size_t min_signature_length() const noexcept { return min_signature_; }
  std::size_t frontier_size() const noexcept { return frontier_.size(); }
  std::size_t frozen_count() const noexcept { return frozen_total_; }
  std::size_t forced_count() const noexcept { return forced_; }
  const std::vector<std::size_t>& bound_variables() const noexcept { return bound_; }
  /// Human-readable notes (contradictions, fallbacks).
  const std::vector<std::string>& notes() const noexcept { return notes_; }
  /// Undecided leaves of the frontier: (output, path) of each representative.
  std::vector<std::pair<std::size_t, PathAssignment>> frontier_paths() const;

 private:
  struct Member {
    std::size_t output = 0;
    PathAssignment path;
  };
  struct Node {
    bool leaf = true;
    std::size_t var = 0;
    std::uint32_t lo = 0;
    std::uint32_t hi = 0;
    bool value = false;
    LeafStatus status = LeafStatus::Speculated;
    bool frozen = false;
    SpeculationStats stats;
    std::vector<Member> members;  // members.front() represents the leaf
    std::vector<RoutedRow> rows;
  };

  std::uint32_t resolve(std::uint32_t id) const;
  struct Seed {
    std::vector<Member> members;
    std::vector<RoutedRow> rows;
    bool prior = false;
    double p0 = 0.5;
    double p1 = 0.5;
  };

  std::vector<SpeculationVerdict> speculate(const std::vector<Seed>& seeds);
  std::uint32_t commit_leaf(Seed seed, const SpeculationVerdict& verdict);
  PathAssignment layer_template() const;
  std::vector<std::size_t> candidates() const;
  BitVec row_key(std::uint32_t row) const;
  std::size_t merge_oracle();
  std::size_t merge_pool();
  void collapse(const std::vector<std::vector<std::uint32_t>>& groups);
  std::vector<std::pair<std::size_t, double>> score_oracle(const std::vector<std::size_t>& cand) const;
  std::vector<std::pair<std::size_t, double>> score_pool(const std::vector<std::size_t>& cand) const;
  void charge_check(std::uint64_t needed) const;

  const OracleHandle& oracle_;
  const SampleSet& mandatory_;
  std::vector<std::size_t> outputs_;
  std::size_t cluster_;
  EngineConfig config_;
  std::size_t n_;

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> forward_;
  std::vector<std::uint32_t> roots_;
  std::vector<std::uint32_t> frontier_;  // undecided, unfrozen leaves
  std::vector<std::uint32_t> frozen_;
  std::vector<std::size_t> bound_;
  std::uint64_t merges_ = 0;
  std::size_t min_signature_ = 0;
  std::size_t frozen_total_ = 0;
  std::size_t forced_ = 0;
  std::uint64_t layer_probes_ = 0;
  std::size_t last_final_ = 0;
  std::size_t last_signature_ = 0;
  std::vector<std::string> notes_;
};

}  // namespace bsdsynth
