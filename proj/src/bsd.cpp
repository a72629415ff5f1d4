#include "bsdsynth/bsd.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "bsdsynth/error.hpp"

namespace bsdsynth {

namespace {

std::uint64_t mix(std::uint64_t x) noexcept {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ull;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::size_t Bsd::KeyHash::operator()(
    const std::tuple<std::size_t, std::uint32_t, std::uint32_t>& k) const noexcept {
  const auto [var, lo, hi] = k;
  return static_cast<std::size_t>(
      mix(static_cast<std::uint64_t>(var) * 0x9e3779b97f4a7c15ull ^ mix(lo) ^ (mix(hi) << 1)));
}

Bsd::Bsd(std::size_t inputs, std::size_t outputs)
    : inputs_(inputs), outputs_(outputs), clusters_(outputs, 0) {
  if (inputs == 0 || outputs == 0)
    throw Error(ErrorKind::InputShape, "diagram needs at least one input and one output");
  // Every output starts as the constant-0 leaf until a root is installed.
  roots_.assign(outputs, constant(false));
}

NodeId Bsd::add_leaf(bool value, LeafStatus status, const SpeculationStats& stats) {
  NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(BsdNode{Leaf{value, status, stats}});
  return id;
}

NodeId Bsd::constant(bool value) {
  const int v = value ? 1 : 0;
  if (!has_constant_[v]) {
    SpeculationStats stats;
    stats.q0 = value ? 0.0 : 1.0;
    stats.q1 = value ? 1.0 : 0.0;
    constants_[v] = add_leaf(value, LeafStatus::Final, stats);
    has_constant_[v] = true;
  }
  return constants_[v];
}

NodeId Bsd::add_decision(std::size_t var, NodeId lo, NodeId hi) {
  if (var >= inputs_)
    throw Error(ErrorKind::Domain, "decision variable " + std::to_string(var) + " out of range");
  if (!contains(lo) || !contains(hi)) throw Error(ErrorKind::Domain, "decision child is not in the store");
  const auto key = std::make_tuple(var, lo.value, hi.value);
  if (auto it = unique_.find(key); it != unique_.end()) return it->second;
  NodeId id{static_cast<std::uint32_t>(nodes_.size())};
  nodes_.push_back(BsdNode{Decision{var, lo, hi}});
  unique_.emplace(key, id);
  return id;
}

const BsdNode& Bsd::node(NodeId id) const {
  if (!contains(id)) throw Error(ErrorKind::Domain, "unknown node " + std::to_string(id.value));
  return nodes_[id.value];
}

NodeId Bsd::root(std::size_t output) const {
  if (output >= outputs_) throw Error(ErrorKind::Domain, "output index out of range");
  return roots_[output];
}

void Bsd::set_root(std::size_t output, NodeId id) {
  if (output >= outputs_) throw Error(ErrorKind::Domain, "output index out of range");
  if (!contains(id)) throw Error(ErrorKind::Domain, "root is not in the store");
  roots_[output] = id;
}

void Bsd::set_root_cluster(std::size_t output, std::size_t cluster) {
  if (output >= outputs_) throw Error(ErrorKind::Domain, "output index out of range");
  clusters_[output] = cluster;
}

bool Bsd::evaluate_node(NodeId from, const BitVec& input) const {
  if (input.width() != inputs_)
    throw Error(ErrorKind::InputShape, "input has width " + std::to_string(input.width()) +
                                           ", diagram expects " + std::to_string(inputs_));
  const BsdNode* n = &node(from);
  while (!n->is_leaf()) {
    const Decision& d = n->decision();
    n = &nodes_[(input.get(d.var) ? d.hi : d.lo).value];
  }
  return n->leaf().value;
}

bool Bsd::evaluate_bit(std::size_t output, const BitVec& input) const {
  return evaluate_node(root(output), input);
}

std::vector<NodeId> Bsd::reachable_postorder() const {
  std::vector<NodeId> order;
  std::vector<char> state(nodes_.size(), 0);  // 0 new, 1 open, 2 done
  std::vector<NodeId> stack;
  for (NodeId r : roots_) {
    if (state[r.value] == 2) continue;
    stack.push_back(r);
    while (!stack.empty()) {
      NodeId id = stack.back();
      char& s = state[id.value];
      if (s == 2) {
        stack.pop_back();
        continue;
      }
      const BsdNode& n = nodes_[id.value];
      if (s == 0 && !n.is_leaf()) {
        s = 1;
        // Push hi first so lo is finished first.
        if (state[n.decision().hi.value] == 0) stack.push_back(n.decision().hi);
        if (state[n.decision().lo.value] == 0) stack.push_back(n.decision().lo);
        continue;
      }
      s = 2;
      order.push_back(id);
      stack.pop_back();
    }
  }
  return order;
}

bool Bsd::has_speculated_leaves() const {
  for (NodeId id : reachable_postorder()) {
    const BsdNode& n = nodes_[id.value];
    if (n.is_leaf() && n.leaf().status == LeafStatus::Speculated) return true;
  }
  return false;
}

BitVec evaluate(const Bsd& diagram, const BitVec& input) {
  BitVec out(diagram.outputs());
  for (std::size_t j = 0; j < diagram.outputs(); ++j) out.set(j, diagram.evaluate_bit(j, input));
  return out;
}

NodeId restrict(Bsd& diagram, NodeId root, std::size_t var, bool value) {
  if (!diagram.contains(root)) throw Error(ErrorKind::Domain, "restrict: unknown root");
  if (var >= diagram.inputs()) throw Error(ErrorKind::Domain, "restrict: variable out of range");
  std::unordered_map<std::uint32_t, NodeId> memo;
  std::function<NodeId(NodeId)> go = [&](NodeId id) -> NodeId {
    const BsdNode& n = diagram.node(id);
    if (n.is_leaf()) return id;
    if (auto it = memo.find(id.value); it != memo.end()) return it->second;
    const Decision d = n.decision();
    NodeId result;
    if (d.var == var) {
      result = value ? d.hi : d.lo;
    } else {
      NodeId lo = go(d.lo);
      NodeId hi = go(d.hi);
      result = (lo == d.lo && hi == d.hi) ? id : (lo == hi ? lo : diagram.add_decision(d.var, lo, hi));
    }
    memo.emplace(id.value, result);
    return result;
  };
  return go(root);
}

NodeCount node_count(const Bsd& diagram) {
  NodeCount count;
  const auto order = diagram.reachable_postorder();
  count.total = order.size();
  for (NodeId id : order) {
    if (diagram.node(id).is_leaf())
      ++count.leaves;
    else
      ++count.decisions;
  }

  std::vector<char> seen(diagram.store_size(), 0);
  for (NodeId r : diagram.roots()) {
    std::fill(seen.begin(), seen.end(), 0);
    std::vector<NodeId> stack{r};
    std::size_t reached = 0;
    while (!stack.empty()) {
      NodeId id = stack.back();
      stack.pop_back();
      if (seen[id.value]) continue;
      seen[id.value] = 1;
      ++reached;
      const BsdNode& n = diagram.node(id);
      if (!n.is_leaf()) {
        stack.push_back(n.decision().lo);
        stack.push_back(n.decision().hi);
      }
    }
    count.per_root.push_back(reached);
  }

  // Breadth-first layering from all roots at once.
  std::fill(seen.begin(), seen.end(), 0);
  std::vector<NodeId> frontier;
  for (NodeId r : diagram.roots()) {
    if (!seen[r.value]) {
      seen[r.value] = 1;
      frontier.push_back(r);
    }
  }
  while (!frontier.empty()) {
    count.per_layer.push_back(frontier.size());
    std::vector<NodeId> next;
    for (NodeId id : frontier) {
      const BsdNode& n = diagram.node(id);
      if (n.is_leaf()) continue;
      for (NodeId c : {n.decision().lo, n.decision().hi}) {
        if (!seen[c.value]) {
          seen[c.value] = 1;
          next.push_back(c);
        }
      }
    }
    frontier = std::move(next);
  }
  return count;
}

Bsd finalize(const Bsd& diagram) {
  Bsd out(diagram.inputs(), diagram.outputs());
  out.set_layer(diagram.layer());
  std::vector<NodeId> mapped(diagram.store_size());
  for (NodeId id : diagram.reachable_postorder()) {
    const BsdNode& n = diagram.node(id);
    if (n.is_leaf()) {
      if (n.leaf().status != LeafStatus::Final)
        throw Error(ErrorKind::NotConverged,
                    "cannot finalize: node " + std::to_string(id.value) + " is a speculated leaf");
      mapped[id.value] = out.constant(n.leaf().value);
    } else {
      const Decision& d = n.decision();
      NodeId lo = mapped[d.lo.value];
      NodeId hi = mapped[d.hi.value];
      mapped[id.value] = lo == hi ? lo : out.add_decision(d.var, lo, hi);
    }
  }
  for (std::size_t j = 0; j < diagram.outputs(); ++j) {
    out.set_root(j, mapped[diagram.root(j).value]);
    out.set_root_cluster(j, diagram.root_cluster(j));
  }
  return out;
}

bool is_canonical(const Bsd& diagram) {
  std::map<std::tuple<std::size_t, std::uint32_t, std::uint32_t>, std::uint32_t> decisions;
  bool seen_final[2] = {false, false};
  for (NodeId id : diagram.reachable_postorder()) {
    const BsdNode& n = diagram.node(id);
    if (n.is_leaf()) {
      if (n.leaf().status != LeafStatus::Final) continue;
      const int v = n.leaf().value ? 1 : 0;
      if (seen_final[v]) return false;
      seen_final[v] = true;
      continue;
    }
    const Decision& d = n.decision();
    if (d.lo == d.hi) return false;
    if (!decisions.emplace(std::make_tuple(d.var, d.lo.value, d.hi.value), id.value).second) return false;
  }
  return true;
}

bool respects_path_discipline(const Bsd& diagram) {
  const std::size_t words = (diagram.inputs() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> support(diagram.store_size());
  for (NodeId id : diagram.reachable_postorder()) {
    const BsdNode& n = diagram.node(id);
    auto& s = support[id.value];
    s.assign(words, 0);
    if (n.is_leaf()) continue;
    const Decision& d = n.decision();
    for (std::size_t w = 0; w < words; ++w) s[w] = support[d.lo.value][w] | support[d.hi.value][w];
    const std::uint64_t bit = std::uint64_t{1} << (d.var & 63);
    if (s[d.var >> 6] & bit) return false;
    s[d.var >> 6] |= bit;
  }
  return true;
}

}  // namespace bsdsynth
