#include "bsdsynth/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "bsdsynth/error.hpp"
#include "bsdsynth/parallel.hpp"

namespace bsdsynth {

const char* to_string(Scorer scorer) noexcept {
  switch (scorer) {
    case Scorer::Influence: return "influence";
    case Scorer::Prediction: return "prediction";
    case Scorer::Error: return "error";
    case Scorer::Random: return "random";
  }
  return "?";
}

Scorer parse_scorer(const std::string& text) {
  if (text == "influence") return Scorer::Influence;
  if (text == "prediction") return Scorer::Prediction;
  if (text == "error") return Scorer::Error;
  if (text == "random") return Scorer::Random;
  throw Error(ErrorKind::Config, "unknown scorer '" + text + "' (influence, prediction, error, random)");
}

double merge_risk(std::uint64_t merges, std::size_t probes, double delta) {
  if (probes == 0) throw Error(ErrorKind::Domain, "merge risk needs K >= 1");
  if (!(delta > 0.0)) throw Error(ErrorKind::Domain, "merge risk needs delta > 0");
  return static_cast<double>(merges) / (static_cast<double>(probes) * delta);
}

double MergeRiskBound::bound() const {
  if (merges == 0) return 0.0;
  return merge_risk(merges, probes, delta);
}

namespace {

std::size_t conditioned_size(std::size_t free, std::size_t count) {
  if (free < 63 && (std::uint64_t{1} << free) <= count) return std::size_t{1} << free;
  return count;
}

SpeculationStats make_stats(std::uint64_t ones, std::uint64_t total) {
  SpeculationStats s;
  s.sample_count = total;
  if (total > 0) {
    s.q1 = static_cast<double>(ones) / static_cast<double>(total);
    s.q0 = 1.0 - s.q1;
  }
  return s;
}

// Majority with ties to 0.
bool majority(std::uint64_t ones, std::uint64_t total) { return 2 * ones > total; }

}  // namespace

SpeculationVerdict speculate_leaf(const OracleHandle& oracle, std::size_t output, const PathAssignment& path,
                                  std::size_t count, RngStream& stream, const SampleSet& mandatory,
                                  const std::vector<RoutedRow>& rows) {
  if (count == 0) throw Error(ErrorKind::Config, "spec_samples must be positive");
  const auto inputs = conditioned_inputs(oracle.inputs(), path, count, stream).inputs;
  const auto outs = oracle.query(inputs);
  std::uint64_t ones = 0;
  for (const auto& y : outs) ones += y.get(output);
  SpeculationVerdict v;
  v.stats = make_stats(ones, outs.size());
  v.value = majority(ones, outs.size());
  const bool unanimous = ones == 0 || ones == outs.size();
  for (const auto& r : rows)
    if (mandatory[r.row].output.get(r.output) != v.value) v.training_consistent = false;
  v.final = unanimous && v.training_consistent;
  return v;
}

ClusterEngine::ClusterEngine(const OracleHandle& oracle, const SampleSet& mandatory, std::vector<std::size_t> outputs,
                             std::size_t cluster_id, EngineConfig config)
    : oracle_(oracle),
      mandatory_(mandatory),
      outputs_(std::move(outputs)),
      cluster_(cluster_id),
      config_(config),
      n_(oracle.inputs()) {
  if (outputs_.empty()) throw Error(ErrorKind::Config, "cluster without outputs");
  if (config_.spec_samples == 0 || config_.ordering_samples == 0 || config_.merge_samples == 0 ||
      config_.width_cap < 2)
    throw Error(ErrorKind::Config, "engine sample counts must be positive and width_cap >= 2");
  if (mandatory_.inputs() != n_ || mandatory_.outputs() != oracle.outputs())
    throw Error(ErrorKind::InputShape, "mandatory samples do not match the oracle widths");
}

std::uint32_t ClusterEngine::resolve(std::uint32_t id) const {
  while (forward_[id] != id) id = forward_[id];
  return id;
}

void ClusterEngine::charge_check(std::uint64_t needed) const {
  const auto budget = oracle_.budget();
  if (budget && oracle_.probes() + needed > *budget)
    throw Error(ErrorKind::Budget, "probe budget of " + std::to_string(*budget) + " would be exceeded (" +
                                       std::to_string(oracle_.probes()) + " used, " + std::to_string(needed) +
                                       " more needed)");
}

std::vector<SpeculationVerdict> ClusterEngine::speculate(const std::vector<Seed>& seeds) {
  std::vector<SpeculationVerdict> out(seeds.size());
  if (config_.pool) {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const Seed& s = seeds[i];
      std::uint64_t ones = 0;
      for (const auto& r : s.rows) ones += mandatory_[r.row].output.get(r.output);
      const std::uint64_t total = s.rows.size();
      SpeculationVerdict& v = out[i];
      if (total == 0) {
        v.value = s.prior;
        v.final = true;
        v.stats = make_stats(s.prior ? 1 : 0, 1);
        v.stats.sample_count = 0;
      } else {
        v.value = majority(ones, total);
        v.stats = make_stats(ones, total);
        const bool unanimous = ones == 0 || ones == total;
        const bool pinned = s.members.front().path.depth() == n_;
        v.final = unanimous && (total >= config_.pool_final_rows || pinned);
      }
      v.stats.p0 = s.p0;
      v.stats.p1 = s.p1;
    }
    return out;
  }

  std::uint64_t needed = 0;
  for (const auto& s : seeds) needed += conditioned_size(n_ - s.members.front().path.depth(), config_.spec_samples);
  charge_check(needed);
  parallel_for(seeds.size(), config_.threads, [&](std::size_t i) {
    const Member& rep = seeds[i].members.front();
    auto stream = RngStream::derive(config_.seed, "spec", hash_combine(rep.output, rep.path.digest()));
    out[i] = speculate_leaf(oracle_, rep.output, rep.path, config_.spec_samples, stream, mandatory_, seeds[i].rows);
    out[i].stats.p0 = seeds[i].p0;
    out[i].stats.p1 = seeds[i].p1;
  });
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& v = out[i];
    const bool unanimous = v.stats.q0 == 1.0 || v.stats.q1 == 1.0;
    if (unanimous && !v.training_consistent) {
      const Member& rep = seeds[i].members.front();
      notes_.push_back("output " + std::to_string(rep.output) + " at depth " + std::to_string(rep.path.depth()) +
                       ": sampled outputs unanimous but a mandatory row disagrees; leaf kept undecided");
    }
  }
  return out;
}

std::uint32_t ClusterEngine::commit_leaf(Seed seed, const SpeculationVerdict& verdict) {
  Node node;
  node.leaf = true;
  node.value = verdict.value;
  node.status = verdict.final ? LeafStatus::Final : LeafStatus::Speculated;
  node.stats = verdict.stats;
  node.members = std::move(seed.members);
  node.rows = std::move(seed.rows);
  const auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(std::move(node));
  forward_.push_back(id);
  return id;
}

void ClusterEngine::initialize() {
  if (!nodes_.empty()) throw Error(ErrorKind::Config, "cluster already initialized");
  std::vector<Seed> seeds;
  for (auto out : outputs_) {
    Seed s;
    s.members.push_back(Member{out, PathAssignment{}});
    for (std::size_t r = 0; r < mandatory_.size(); ++r)
      s.rows.push_back(RoutedRow{static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(out)});
    seeds.push_back(std::move(s));
  }
  const auto verdicts = speculate(seeds);
  for (std::size_t k = 0; k < seeds.size(); ++k) {
    const auto id = commit_leaf(std::move(seeds[k]), verdicts[k]);
    roots_.push_back(id);
    if (nodes_[id].status == LeafStatus::Speculated) frontier_.push_back(id);
  }
}

PathAssignment ClusterEngine::layer_template() const {
  PathAssignment t;
  for (auto v : bound_) t.bind(v, false);
  return t;
}

std::vector<std::size_t> ClusterEngine::candidates() const {
  std::vector<char> used(n_, 0);
  for (auto v : bound_) used[v] = 1;
  std::vector<std::size_t> c;
  for (std::size_t v = 0; v < n_; ++v)
    if (!used[v]) c.push_back(v);
  return c;
}

BitVec ClusterEngine::row_key(std::uint32_t row) const {
  BitVec key = mandatory_[row].input;
  for (auto v : bound_) key.set(v, false);
  return key;
}

std::vector<std::pair<std::size_t, PathAssignment>> ClusterEngine::frontier_paths() const {
  std::vector<std::pair<std::size_t, PathAssignment>> out;
  for (auto id : frontier_) out.emplace_back(nodes_[id].members.front().output, nodes_[id].members.front().path);
  return out;
}

std::vector<std::pair<std::size_t, double>> ClusterEngine::score_oracle(const std::vector<std::size_t>& cand) const {
  auto stream = RngStream::derive(config_.seed, "order", hash_combine(cluster_, bound_.size()));
  const auto probes = conditioned_inputs(n_, layer_template(), config_.ordering_samples, stream).inputs;
  const std::size_t c = cand.size();
  const std::size_t p = probes.size();
  charge_check(static_cast<std::uint64_t>(frontier_.size()) * p * (1 + c));

  // counts[leaf][candidate]
  std::vector<std::vector<std::int64_t>> counts(frontier_.size(), std::vector<std::int64_t>(c, 0));
  parallel_for(frontier_.size(), config_.threads, [&](std::size_t i) {
    const Node& leaf = nodes_[frontier_[i]];
    const Member& rep = leaf.members.front();
    std::vector<BitVec> batch;
    batch.reserve(p * (1 + c));
    for (const auto& x : probes) {
      BitVec y = x;
      rep.path.apply(y);
      batch.push_back(y);
      for (auto v : cand) {
        BitVec z = y;
        z.flip(v);
        batch.push_back(std::move(z));
      }
    }
    const auto outs = oracle_.query(batch);
    auto f = [&](std::size_t probe, std::size_t slot) { return outs[probe * (1 + c) + slot].get(rep.output); };
    for (std::size_t k = 0; k < c; ++k) {
      const std::size_t v = cand[k];
      std::uint64_t ones0 = 0, ones1 = 0, diff = 0;
      for (std::size_t j = 0; j < p; ++j) {
        const bool here = f(j, 0), there = f(j, 1 + k);
        const bool xv = batch[j * (1 + c)].get(v);
        const bool f0 = xv ? there : here;
        const bool f1 = xv ? here : there;
        ones0 += f0;
        ones1 += f1;
        diff += f0 != f1;
      }
      const bool m0 = majority(ones0, p), m1 = majority(ones1, p);
      std::int64_t score = 0;
      switch (config_.scorer) {
        case Scorer::Influence:
          score = static_cast<std::int64_t>(diff);
          break;
        case Scorer::Prediction:
          for (std::size_t j = 0; j < p; ++j) score += (batch[j * (1 + c)].get(v) ? m1 : m0) != leaf.value;
          break;
        case Scorer::Error: {
          const auto cur = static_cast<std::int64_t>(leaf.value ? (2 * p - ones0 - ones1) : (ones0 + ones1));
          const auto e0 = static_cast<std::int64_t>(m0 ? p - ones0 : ones0);
          const auto e1 = static_cast<std::int64_t>(m1 ? p - ones1 : ones1);
          score = cur - e0 - e1;
          break;
        }
        case Scorer::Random:
          break;
      }
      counts[i][k] = score;
    }
  });
  std::vector<std::pair<std::size_t, double>> scores;
  for (std::size_t k = 0; k < c; ++k) {
    std::int64_t total = 0;
    for (const auto& leaf : counts) total += leaf[k];
    scores.emplace_back(cand[k], static_cast<double>(total) / static_cast<double>(p));
  }
  return scores;
}

std::vector<std::pair<std::size_t, double>> ClusterEngine::score_pool(const std::vector<std::size_t>& cand) const {
  std::vector<double> influence(cand.size(), 0.0), gain(cand.size(), 0.0);
  std::uint64_t pairs_seen = 0;
  for (auto id : frontier_) {
    const Node& leaf = nodes_[id];
    std::unordered_map<BitVec, bool, BitVecHash> values;
    for (const auto& r : leaf.rows) values.emplace(row_key(r.row), mandatory_[r.row].output.get(r.output));
    for (std::size_t k = 0; k < cand.size(); ++k) {
      const std::size_t v = cand[k];
      std::uint64_t pairs = 0, diff = 0;
      std::uint64_t n0 = 0, n1 = 0, ones0 = 0, ones1 = 0;
      for (const auto& [key, value] : values) {
        if (key.get(v)) {
          ++n1;
          ones1 += value;
          continue;
        }
        ++n0;
        ones0 += value;
        BitVec partner = key;
        partner.set(v, true);
        if (auto it = values.find(partner); it != values.end()) {
          ++pairs;
          diff += it->second != value;
        }
      }
      if (pairs) influence[k] += static_cast<double>(diff) / static_cast<double>(pairs);
      pairs_seen += pairs;
      const auto minority = [](std::uint64_t ones, std::uint64_t total) { return std::min(ones, total - ones); };
      gain[k] += static_cast<double>(minority(ones0 + ones1, n0 + n1)) -
                 static_cast<double>(minority(ones0, n0) + minority(ones1, n1));
    }
  }
  const bool use_influence = config_.scorer == Scorer::Influence && pairs_seen > 0;
  std::vector<std::pair<std::size_t, double>> scores;
  for (std::size_t k = 0; k < cand.size(); ++k) scores.emplace_back(cand[k], use_influence ? influence[k] : gain[k]);
  return scores;
}

std::vector<std::pair<std::size_t, double>> ClusterEngine::score_variables() const {
  const auto cand = candidates();
  if (cand.empty() || frontier_.empty()) return {};
  if (config_.scorer == Scorer::Random) {
    std::vector<std::pair<std::size_t, double>> scores;
    for (auto v : cand) scores.emplace_back(v, 0.0);
    return scores;
  }
  return config_.pool ? score_pool(cand) : score_oracle(cand);
}

std::optional<std::pair<std::size_t, double>> ClusterEngine::select_variable() const {
  const auto cand = candidates();
  if (cand.empty() || frontier_.empty()) return std::nullopt;
  if (config_.scorer == Scorer::Random) {
    auto stream = RngStream::derive(config_.seed, "random-order", hash_combine(cluster_, bound_.size()));
    return std::make_pair(cand[stream.below(cand.size())], 0.0);
  }
  const auto scores = score_variables();
  std::pair<std::size_t, double> best = scores.front();
  for (const auto& s : scores)
    if (s.second > best.second) best = s;
  return best;
}

std::size_t ClusterEngine::expand(std::size_t var) {
  if (var >= n_) throw Error(ErrorKind::Domain, "expansion variable out of range");
  if (std::find(bound_.begin(), bound_.end(), var) != bound_.end())
    throw Error(ErrorKind::Domain, "variable " + std::to_string(var) + " is already on the cluster's paths");
  if (frontier_.empty()) return 0;

  std::vector<std::uint32_t> expand_ids = frontier_;
  std::vector<std::uint32_t> freeze_ids;
  if (2 * expand_ids.size() > config_.width_cap) {
    // Keep depth for the least certain leaves; the most confident ones stay as they are.
    std::stable_sort(expand_ids.begin(), expand_ids.end(), [&](std::uint32_t a, std::uint32_t b) {
      return std::abs(nodes_[a].stats.q0 - nodes_[a].stats.q1) < std::abs(nodes_[b].stats.q0 - nodes_[b].stats.q1);
    });
    const std::size_t keep = std::max<std::size_t>(1, config_.width_cap / 2);
    freeze_ids.assign(expand_ids.begin() + static_cast<std::ptrdiff_t>(keep), expand_ids.end());
    expand_ids.resize(keep);
    std::sort(expand_ids.begin(), expand_ids.end());
  }

  std::vector<Seed> seeds;
  seeds.reserve(2 * expand_ids.size());
  for (auto id : expand_ids) {
    const Node& leaf = nodes_[id];
    Seed child[2];
    for (int b = 0; b < 2; ++b) {
      for (const auto& m : leaf.members) child[b].members.push_back(Member{m.output, m.path.extended(var, b == 1)});
      child[b].prior = leaf.value;
    }
    for (const auto& r : leaf.rows) child[mandatory_[r.row].input.get(var) ? 1 : 0].rows.push_back(r);
    if (config_.pool && !leaf.rows.empty()) {
      const double total = static_cast<double>(leaf.rows.size());
      for (int b = 0; b < 2; ++b) {
        child[b].p0 = static_cast<double>(child[0].rows.size()) / total;
        child[b].p1 = static_cast<double>(child[1].rows.size()) / total;
      }
    }
    seeds.push_back(std::move(child[0]));
    seeds.push_back(std::move(child[1]));
  }
  const auto verdicts = speculate(seeds);

  // Commit only after every probe succeeded, so a budget stop leaves a consistent state.
  for (auto id : freeze_ids) {
    nodes_[id].frozen = true;
    frozen_.push_back(id);
  }
  frozen_total_ += freeze_ids.size();
  bound_.push_back(var);
  frontier_.clear();
  last_final_ = 0;
  for (std::size_t i = 0; i < expand_ids.size(); ++i) {
    const auto lo = commit_leaf(std::move(seeds[2 * i]), verdicts[2 * i]);
    const auto hi = commit_leaf(std::move(seeds[2 * i + 1]), verdicts[2 * i + 1]);
    Node& parent = nodes_[expand_ids[i]];
    parent.leaf = false;
    parent.var = var;
    parent.lo = lo;
    parent.hi = hi;
    parent.members.clear();
    parent.members.shrink_to_fit();
    parent.rows.clear();
    parent.rows.shrink_to_fit();
    for (auto c : {lo, hi}) {
      if (nodes_[c].status == LeafStatus::Speculated)
        frontier_.push_back(c);
      else
        ++last_final_;
    }
  }
  return expand_ids.size();
}

void ClusterEngine::collapse(const std::vector<std::vector<std::uint32_t>>& groups) {
  std::vector<std::uint32_t> next;
  for (const auto& g : groups) {
    const auto rep = *std::min_element(g.begin(), g.end());
    next.push_back(rep);
    for (auto id : g) {
      if (id == rep) continue;
      Node& from = nodes_[id];
      Node& into = nodes_[rep];
      into.members.insert(into.members.end(), from.members.begin(), from.members.end());
      into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
      from.members.clear();
      from.rows.clear();
      forward_[id] = rep;
      ++merges_;
    }
  }
  std::sort(next.begin(), next.end());
  frontier_ = std::move(next);
}

std::size_t ClusterEngine::merge_oracle() {
  auto stream = RngStream::derive(config_.seed, "merge", hash_combine(cluster_, bound_.size()));
  const auto drawn = conditioned_inputs(n_, layer_template(), config_.merge_samples, stream);
  std::vector<BitVec> probes = drawn.inputs;
  if (!drawn.exhaustive) {
    std::vector<BitVec> extra;
    for (auto id : frontier_)
      for (const auto& r : nodes_[id].rows) extra.push_back(row_key(r.row));
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
    probes.insert(probes.end(), extra.begin(), extra.end());
  }
  charge_check(static_cast<std::uint64_t>(frontier_.size()) * probes.size());

  std::vector<std::vector<std::uint64_t>> sig(frontier_.size());
  parallel_for(frontier_.size(), config_.threads, [&](std::size_t i) {
    const Member& rep = nodes_[frontier_[i]].members.front();
    std::vector<BitVec> batch = probes;
    for (auto& x : batch) rep.path.apply(x);
    const auto outs = oracle_.query(batch);
    auto& s = sig[i];
    s.assign((outs.size() + 63) / 64, 0);
    for (std::size_t j = 0; j < outs.size(); ++j)
      if (outs[j].get(rep.output)) s[j >> 6] |= std::uint64_t{1} << (j & 63);
  });

  std::map<std::vector<std::uint64_t>, std::vector<std::uint32_t>> by_sig;
  for (std::size_t i = 0; i < frontier_.size(); ++i) by_sig[sig[i]].push_back(frontier_[i]);
  std::vector<std::vector<std::uint32_t>> groups;
  for (auto& [_, ids] : by_sig) groups.push_back(std::move(ids));
  const auto before = merges_;
  collapse(groups);
  const std::size_t merged = merges_ - before;
  if (merged) min_signature_ = min_signature_ ? std::min(min_signature_, probes.size()) : probes.size();
  last_signature_ = probes.size();
  return merged;
}

std::size_t ClusterEngine::merge_pool() {
  struct Group {
    std::unordered_map<BitVec, bool, BitVecHash> values;
    std::vector<std::uint32_t> ids;
  };
  std::vector<std::pair<std::uint32_t, std::unordered_map<BitVec, bool, BitVecHash>>> leaves;
  for (auto id : frontier_) {
    std::unordered_map<BitVec, bool, BitVecHash> values;
    for (const auto& r : nodes_[id].rows) values.emplace(row_key(r.row), mandatory_[r.row].output.get(r.output));
    leaves.emplace_back(id, std::move(values));
  }
  std::stable_sort(leaves.begin(), leaves.end(), [](const auto& a, const auto& b) {
    return a.second.size() != b.second.size() ? a.second.size() > b.second.size() : a.first < b.first;
  });
  std::vector<Group> groups;
  std::size_t shortest = 0;
  for (auto& [id, values] : leaves) {
    Group* target = nullptr;
    std::size_t overlap_used = 0;
    for (auto& g : groups) {
      std::size_t overlap = 0;
      bool clash = false;
      for (const auto& [key, value] : values) {
        auto it = g.values.find(key);
        if (it == g.values.end()) continue;
        if (it->second != value) {
          clash = true;
          break;
        }
        ++overlap;
      }
      if (!clash && overlap >= config_.min_overlap) {
        target = &g;
        overlap_used = overlap;
        break;
      }
    }
    if (!target) {
      groups.push_back(Group{});
      target = &groups.back();
    } else {
      shortest = shortest ? std::min(shortest, overlap_used) : overlap_used;
    }
    target->ids.push_back(id);
    target->values.insert(values.begin(), values.end());
  }
  std::vector<std::vector<std::uint32_t>> ids;
  for (auto& g : groups) ids.push_back(std::move(g.ids));
  const auto before = merges_;
  collapse(ids);
  const std::size_t merged = merges_ - before;
  if (merged) min_signature_ = min_signature_ ? std::min(min_signature_, shortest) : shortest;
  last_signature_ = shortest;
  return merged;
}

std::size_t ClusterEngine::merge() {
  last_signature_ = 0;
  if (!config_.merge || frontier_.size() < 2) return 0;
  return config_.pool ? merge_pool() : merge_oracle();
}

LayerRecord ClusterEngine::step() {
  LayerRecord rec;
  rec.cluster = cluster_;
  const auto probes_before = oracle_.probes();
  const auto choice = select_variable();
  if (!choice) {
    finish();
    rec.layer = layer();
    return rec;
  }
  rec.var = choice->first;
  rec.score = choice->second;
  const auto frozen_before = frozen_total_;
  rec.expanded = expand(choice->first);
  rec.layer = layer();
  rec.frozen = frozen_total_ - frozen_before;
  rec.final_leaves = last_final_;
  rec.leaves_before_merge = frontier_.size();
  rec.merges = merge();
  rec.leaves_after_merge = frontier_.size();
  rec.signature_length = last_signature_;
  rec.probes = oracle_.probes() - probes_before;
  return rec;
}

std::size_t ClusterEngine::finish() {
  std::size_t forced = 0;
  for (auto* list : {&frontier_, &frozen_}) {
    for (auto id : *list) {
      nodes_[id].status = LeafStatus::Final;
      ++forced;
    }
    list->clear();
  }
  forced_ += forced;
  return forced;
}

void ClusterEngine::materialize(Bsd& out) const {
  std::unordered_map<std::uint32_t, NodeId> memo;
  std::function<NodeId(std::uint32_t)> build = [&](std::uint32_t id) -> NodeId {
    id = resolve(id);
    if (auto it = memo.find(id); it != memo.end()) return it->second;
    const Node& node = nodes_[id];
    NodeId made;
    if (node.leaf) {
      made = out.add_leaf(node.value, node.status, node.stats);
    } else {
      const NodeId lo = build(node.lo);
      const NodeId hi = build(node.hi);
      made = out.add_decision(node.var, lo, hi);
    }
    memo.emplace(id, made);
    return made;
  };
  for (std::size_t k = 0; k < outputs_.size(); ++k) {
    if (roots_.empty()) throw Error(ErrorKind::Config, "cluster not initialized");
    out.set_root(outputs_[k], build(roots_[k]));
    out.set_root_cluster(outputs_[k], cluster_);
  }
}

}  // namespace bsdsynth
