#include "bsdsynth/emit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <iterator>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "bsdsynth/error.hpp"
#include "bsdsynth/parallel.hpp"

namespace bsdsynth {

namespace {

bool operand_value(const Operand& o, const BitVec& input, const std::vector<char>& wires) {
  bool v = false;
  switch (o.kind) {
    case Operand::Kind::Input: v = input.get(o.index); break;
    case Operand::Kind::Wire: v = wires[o.index] != 0; break;
    case Operand::Kind::Constant: v = o.index != 0; break;
  }
  return v != o.negated;
}

}  // namespace

std::size_t Netlist::gate_count() const noexcept {
  std::size_t count = 0;
  for (const auto& g : gates)
    if (g.op != Gate::Op::Buf || (g.a.negated && g.a.kind != Operand::Kind::Constant)) ++count;
  return count;
}

BitVec Netlist::evaluate(const BitVec& input) const {
  if (input.width() != inputs)
    throw Error(ErrorKind::InputShape, "netlist expects " + std::to_string(inputs) + " input bits");
  std::vector<char> values(wires.size(), 0);
  for (const auto& g : gates) {
    const bool a = operand_value(g.a, input, values);
    bool r = a;
    switch (g.op) {
      case Gate::Op::Buf: break;
      case Gate::Op::And: r = a && operand_value(g.b, input, values); break;
      case Gate::Op::Or: r = a || operand_value(g.b, input, values); break;
      case Gate::Op::Mux: r = a ? operand_value(g.c, input, values) : operand_value(g.b, input, values); break;
    }
    values[g.out] = r;
  }
  BitVec out(outputs.size());
  for (std::size_t j = 0; j < outputs.size(); ++j) out.set(j, operand_value(outputs[j], input, values));
  return out;
}

Netlist to_netlist(const Bsd& diagram, NetlistStyle style, const std::string& name) {
  if (diagram.has_speculated_leaves())
    throw Error(ErrorKind::NotConverged, "diagram has speculated leaves; finalize it before emitting a netlist");
  Netlist net;
  net.name = name;
  net.inputs = diagram.inputs();
  std::unordered_map<std::uint32_t, Operand> of;
  auto wire = [&](std::string w) {
    net.wires.push_back(std::move(w));
    return net.wires.size() - 1;
  };
  std::size_t k = 0;
  for (NodeId id : diagram.reachable_postorder()) {
    const BsdNode& node = diagram.node(id);
    if (node.is_leaf()) {
      of[id.value] = Operand{Operand::Kind::Constant, node.leaf().value ? 1u : 0u, false};
      continue;
    }
    const Decision& d = node.decision();
    const Operand lo = of.at(d.lo.value), hi = of.at(d.hi.value);
    const Operand var{Operand::Kind::Input, d.var, false};
    const std::string base = "n" + std::to_string(k++);
    if (style == NetlistStyle::Mux) {
      const auto w = wire(base);
      net.gates.push_back(Gate{Gate::Op::Mux, w, var, lo, hi});
      of[id.value] = Operand{Operand::Kind::Wire, w, false};
      continue;
    }
    const auto wa = wire(base + "_0");
    const auto wb = wire(base + "_1");
    const auto wo = wire(base);
    Operand nvar = var;
    nvar.negated = true;
    net.gates.push_back(Gate{Gate::Op::And, wa, nvar, lo, {}});
    net.gates.push_back(Gate{Gate::Op::And, wb, var, hi, {}});
    net.gates.push_back(Gate{Gate::Op::Or, wo, Operand{Operand::Kind::Wire, wa, false},
                             Operand{Operand::Kind::Wire, wb, false}, {}});
    of[id.value] = Operand{Operand::Kind::Wire, wo, false};
  }
  for (std::size_t j = 0; j < diagram.outputs(); ++j) net.outputs.push_back(of.at(diagram.root(j).value));
  return net;
}

namespace {

std::string operand_text(const Netlist& net, const Operand& o) {
  switch (o.kind) {
    case Operand::Kind::Constant: return (o.index != 0) != o.negated ? "1'b1" : "1'b0";
    case Operand::Kind::Input: return (o.negated ? "~x[" : "x[") + std::to_string(o.index) + "]";
    case Operand::Kind::Wire: return (o.negated ? "~" : "") + net.wires[o.index];
  }
  return "?";
}

}  // namespace

void write_netlist(std::ostream& out, const Netlist& net) {
  out << "module " << net.name << "(x, y);\n";
  out << "  input [" << net.inputs - 1 << ":0] x;\n";
  out << "  output [" << net.outputs.size() - 1 << ":0] y;\n";
  // Declare wires grouped by the gate group that drives them.
  std::string line;
  std::string group;
  auto flush = [&] {
    if (!line.empty()) out << "  wire " << line << ";\n";
    line.clear();
  };
  for (const auto& w : net.wires) {
    const std::string g = w.substr(0, w.find('_'));
    if (g != group) flush();
    group = g;
    line += (line.empty() ? "" : ", ") + w;
  }
  flush();
  for (const auto& g : net.gates) {
    out << "  assign " << net.wires[g.out] << " = " << operand_text(net, g.a);
    switch (g.op) {
      case Gate::Op::Buf: break;
      case Gate::Op::And: out << " & " << operand_text(net, g.b); break;
      case Gate::Op::Or: out << " | " << operand_text(net, g.b); break;
      case Gate::Op::Mux: out << " ? " << operand_text(net, g.c) << " : " << operand_text(net, g.b); break;
    }
    out << ";\n";
  }
  for (std::size_t j = 0; j < net.outputs.size(); ++j)
    out << "  assign y[" << j << "] = " << operand_text(net, net.outputs[j]) << ";\n";
  out << "endmodule\n";
}

std::string netlist_text(const Netlist& netlist) {
  std::ostringstream s;
  write_netlist(s, netlist);
  return s.str();
}

namespace {

class Lexer {
 public:
  explicit Lexer(std::string text) : text_(std::move(text)) { advance(); }

  const std::string& peek() const { return tok_; }
  std::size_t line() const { return tok_line_; }
  bool done() const { return tok_.empty(); }

  std::string take() {
    std::string t = tok_;
    advance();
    return t;
  }
  void expect(const std::string& t) {
    if (tok_ != t) fail("expected '" + t + "', found '" + (tok_.empty() ? "end of file" : tok_) + "'");
    advance();
  }
  std::size_t number() {
    if (tok_.empty() || !std::all_of(tok_.begin(), tok_.end(), [](unsigned char c) { return std::isdigit(c); }))
      fail("expected a number, found '" + tok_ + "'");
    const std::size_t v = std::stoull(tok_);
    advance();
    return v;
  }
  std::string ident() {
    if (tok_.empty() || !(std::isalpha(static_cast<unsigned char>(tok_[0])) || tok_[0] == '_'))
      fail("expected a name, found '" + tok_ + "'");
    return take();
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Format, "netlist line " + std::to_string(tok_line_) + ": " + what);
  }

 private:
  void advance() {
    for (;;) {
      while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
      }
      if (text_.compare(pos_, 2, "//") == 0) {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    tok_line_ = line_;
    tok_.clear();
    if (pos_ >= text_.size()) return;
    if (text_.compare(pos_, 4, "1'b0") == 0 || text_.compare(pos_, 4, "1'b1") == 0) {
      tok_ = text_.substr(pos_, 4);
      pos_ += 4;
      return;
    }
    const unsigned char c = text_[pos_];
    if (std::isalnum(c) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        ++pos_;
      tok_ = text_.substr(start, pos_ - start);
      return;
    }
    if (std::string("();,[]:=&|~?").find(static_cast<char>(c)) == std::string::npos)
      throw Error(ErrorKind::Format, "netlist line " + std::to_string(line_) + ": unexpected character '" +
                                         std::string(1, static_cast<char>(c)) + "'");
    tok_ = std::string(1, static_cast<char>(c));
    ++pos_;
  }

  std::string text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::string tok_;
  std::size_t tok_line_ = 1;
};

struct RawOperand {
  Operand op;
  std::string wire;  // unresolved wire name
  std::size_t line = 0;
};

struct RawAssign {
  bool output = false;
  std::string target;
  std::size_t bit = 0;
  Gate::Op op = Gate::Op::Buf;
  RawOperand a, b, c;
  std::size_t line = 0;
};

}  // namespace

Netlist parse_netlist(const std::string& text) {
  Lexer lx(text);
  Netlist net;
  std::size_t outputs = 0;
  bool have_in = false, have_out = false;
  lx.expect("module");
  net.name = lx.ident();
  lx.expect("(");
  lx.expect("x");
  lx.expect(",");
  lx.expect("y");
  lx.expect(")");
  lx.expect(";");

  std::unordered_map<std::string, std::size_t> wire_index;
  std::vector<RawAssign> assigns;
  auto operand = [&]() {
    RawOperand r;
    r.line = lx.line();
    if (lx.peek() == "~") {
      lx.take();
      r.op.negated = true;
    }
    if (lx.peek() == "1'b0" || lx.peek() == "1'b1") {
      r.op.kind = Operand::Kind::Constant;
      r.op.index = lx.take() == "1'b1" ? 1 : 0;
      if (r.op.negated) {
        r.op.index ^= 1;
        r.op.negated = false;
      }
    } else if (lx.peek() == "x") {
      lx.take();
      lx.expect("[");
      r.op.kind = Operand::Kind::Input;
      r.op.index = lx.number();
      lx.expect("]");
    } else {
      r.op.kind = Operand::Kind::Wire;
      r.wire = lx.ident();
      if (r.wire == "y") lx.fail("output port y cannot be read");
    }
    return r;
  };

  for (;;) {
    if (lx.done()) lx.fail("missing endmodule");
    const std::string kw = lx.take();
    if (kw == "endmodule") break;
    if (kw == "input" || kw == "output") {
      lx.expect("[");
      const std::size_t hi = lx.number();
      lx.expect(":");
      if (lx.number() != 0) lx.fail("port ranges must end at 0");
      lx.expect("]");
      lx.expect(kw == "input" ? "x" : "y");
      lx.expect(";");
      bool& seen = kw == "input" ? have_in : have_out;
      if (seen) lx.fail("port declared twice");
      seen = true;
      (kw == "input" ? net.inputs : outputs) = hi + 1;
    } else if (kw == "wire") {
      for (;;) {
        const std::string w = lx.ident();
        if (w == "x" || w == "y") lx.fail("wire name clashes with a port");
        if (!wire_index.emplace(w, net.wires.size()).second) lx.fail("wire '" + w + "' declared twice");
        net.wires.push_back(w);
        if (lx.peek() == ";") break;
        lx.expect(",");
      }
      lx.expect(";");
    } else if (kw == "assign") {
      RawAssign a;
      a.line = lx.line();
      if (lx.peek() == "y") {
        lx.take();
        lx.expect("[");
        a.output = true;
        a.bit = lx.number();
        lx.expect("]");
      } else {
        a.target = lx.ident();
      }
      lx.expect("=");
      a.a = operand();
      if (lx.peek() == "&" || lx.peek() == "|") {
        a.op = lx.take() == "&" ? Gate::Op::And : Gate::Op::Or;
        a.b = operand();
      } else if (lx.peek() == "?") {
        lx.take();
        a.op = Gate::Op::Mux;
        a.c = operand();
        lx.expect(":");
        a.b = operand();
      }
      lx.expect(";");
      if (a.output && a.op != Gate::Op::Buf) {
        // Outputs driven by an expression get a hidden wire.
        const std::string hidden = "y_" + std::to_string(a.bit) + "_";
        if (!wire_index.emplace(hidden, net.wires.size()).second) lx.fail("output assigned twice");
        net.wires.push_back(hidden);
        RawAssign copy = a;
        copy.output = false;
        copy.target = hidden;
        assigns.push_back(copy);
        a.op = Gate::Op::Buf;
        a.a = RawOperand{Operand{Operand::Kind::Wire, 0, false}, hidden, a.line};
        a.b = a.c = RawOperand{};
      }
      assigns.push_back(std::move(a));
    } else {
      lx.fail("unexpected '" + kw + "'");
    }
  }
  if (!lx.done()) lx.fail("text after endmodule");
  if (!have_in || !have_out) throw Error(ErrorKind::Format, "netlist must declare input x and output y");

  auto resolve = [&](RawOperand& r, bool used) {
    if (!used) return;
    if (r.op.kind == Operand::Kind::Wire) {
      auto it = wire_index.find(r.wire);
      if (it == wire_index.end())
        throw Error(ErrorKind::Format, "netlist line " + std::to_string(r.line) + ": undeclared wire '" + r.wire + "'");
      r.op.index = it->second;
    } else if (r.op.kind == Operand::Kind::Input && r.op.index >= net.inputs) {
      throw Error(ErrorKind::Format, "netlist line " + std::to_string(r.line) + ": input bit out of range");
    }
  };

  std::vector<std::optional<Gate>> driver(net.wires.size());
  std::vector<std::optional<Operand>> outs(outputs);
  for (auto& a : assigns) {
    resolve(a.a, true);
    resolve(a.b, a.op != Gate::Op::Buf);
    resolve(a.c, a.op == Gate::Op::Mux);
    if (a.output) {
      if (a.bit >= outputs)
        throw Error(ErrorKind::Format, "netlist line " + std::to_string(a.line) + ": output bit out of range");
      if (outs[a.bit])
        throw Error(ErrorKind::Format, "netlist line " + std::to_string(a.line) + ": output assigned twice");
      outs[a.bit] = a.a.op;
      continue;
    }
    auto it = wire_index.find(a.target);
    if (it == wire_index.end())
      throw Error(ErrorKind::Format, "netlist line " + std::to_string(a.line) + ": undeclared wire '" + a.target + "'");
    if (driver[it->second])
      throw Error(ErrorKind::Format, "netlist line " + std::to_string(a.line) + ": wire '" + a.target +
                                         "' driven twice");
    driver[it->second] = Gate{a.op, it->second, a.a.op, a.b.op, a.c.op};
  }
  for (std::size_t w = 0; w < driver.size(); ++w)
    if (!driver[w]) throw Error(ErrorKind::Format, "wire '" + net.wires[w] + "' is never driven");
  for (std::size_t j = 0; j < outs.size(); ++j)
    if (!outs[j]) throw Error(ErrorKind::Format, "output y[" + std::to_string(j) + "] is never driven");

  // Topological order by repeated passes, keeping text order among ready gates.
  std::vector<char> ready(driver.size(), 0);
  std::vector<char> placed(driver.size(), 0);
  auto is_ready = [&](const Operand& o) { return o.kind != Operand::Kind::Wire || ready[o.index]; };
  std::vector<std::size_t> order;
  for (const auto& a : assigns)
    if (!a.output) order.push_back(wire_index.at(a.target));
  bool progress = true;
  while (net.gates.size() < driver.size() && progress) {
    progress = false;
    for (auto w : order) {
      if (placed[w]) continue;
      const Gate& g = *driver[w];
      const bool ok = is_ready(g.a) && (g.op == Gate::Op::Buf || is_ready(g.b)) && (g.op != Gate::Op::Mux || is_ready(g.c));
      if (!ok) continue;
      net.gates.push_back(g);
      placed[w] = ready[w] = 1;
      progress = true;
    }
  }
  if (net.gates.size() < driver.size()) throw Error(ErrorKind::Format, "netlist has a combinational cycle");
  for (auto& o : outs) net.outputs.push_back(*o);
  return net;
}

Netlist read_netlist(std::istream& in) {
  return parse_netlist(std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()));
}

std::string to_dot(const Bsd& diagram) {
  const auto order = diagram.reachable_postorder();
  std::unordered_map<std::uint32_t, std::size_t> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i].value] = i;
  std::map<std::size_t, std::string> labels;
  for (std::size_t j = 0; j < diagram.outputs(); ++j) {
    auto& l = labels[index.at(diagram.root(j).value)];
    l += (l.empty() ? "" : " ") + ("y" + std::to_string(j) + "/c" + std::to_string(diagram.root_cluster(j)));
  }
  std::ostringstream out;
  out << "digraph bsd {\n  node [shape=circle];\n";
  for (std::size_t i = 0; i < order.size(); ++i) {
    const BsdNode& node = diagram.node(order[i]);
    out << "  n" << i << " [";
    if (node.is_leaf()) {
      const Leaf& leaf = node.leaf();
      out << "label=\"" << (leaf.value ? '1' : '0') << (leaf.status == LeafStatus::Final ? "" : "?")
          << "\", shape=box";
      if (leaf.status != LeafStatus::Final) out << ", style=dotted";
    } else {
      out << "label=\"x" << node.decision().var << "\"";
    }
    if (auto it = labels.find(i); it != labels.end()) out << ", xlabel=\"" << it->second << "\"";
    out << "];\n";
  }
  for (std::size_t i = 0; i < order.size(); ++i) {
    const BsdNode& node = diagram.node(order[i]);
    if (node.is_leaf()) continue;
    out << "  n" << i << " -> n" << index.at(node.decision().lo.value) << " [style=dashed];\n";
    out << "  n" << i << " -> n" << index.at(node.decision().hi.value) << ";\n";
  }
  out << "}\n";
  return out.str();
}

EquivalenceVerdict check_equivalence(const Evaluator& candidate, const OracleHandle& oracle, CheckMode mode,
                                     std::size_t samples, RngStream& stream, std::uint64_t exhaustive_cap,
                                     std::size_t threads) {
  const std::size_t n = oracle.inputs();
  const std::size_t m = oracle.outputs();
  EquivalenceVerdict verdict;
  verdict.mode = mode;
  std::uint64_t total = 0;
  std::vector<BitVec> sampled;
  if (mode == CheckMode::Exhaustive) {
    const auto space = input_space_size(n);
    if (!space || *space > exhaustive_cap)
      throw Error(ErrorKind::Mode, "exhaustive check over 2^" + std::to_string(n) + " inputs exceeds the cap of " +
                                       std::to_string(exhaustive_cap));
    total = *space;
  } else {
    if (samples == 0) throw Error(ErrorKind::Config, "sampled check needs at least one sample");
    sampled = conditioned_inputs(n, PathAssignment{}, samples, stream).inputs;
    total = sampled.size();
  }

  constexpr std::uint64_t kChunk = 4096;
  const std::size_t chunks = static_cast<std::size_t>((total + kChunk - 1) / kChunk);
  struct ChunkResult {
    std::vector<std::uint64_t> hits;
    std::optional<std::uint64_t> first;
    BitVec expected, got;
  };
  std::vector<ChunkResult> results(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t begin = c * kChunk, end = std::min(total, begin + kChunk);
    std::vector<BitVec> inputs;
    inputs.reserve(end - begin);
    for (std::uint64_t i = begin; i < end; ++i)
      inputs.push_back(mode == CheckMode::Exhaustive ? BitVec::from_uint(i, n) : sampled[i]);
    const auto expected = oracle.query(inputs);
    auto& r = results[c];
    r.hits.assign(m, 0);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const BitVec got = candidate(inputs[i]);
      if (got.width() != m) throw Error(ErrorKind::InputShape, "candidate output width differs from the oracle");
      for (std::size_t j = 0; j < m; ++j) r.hits[j] += got.get(j) == expected[i].get(j);
      if (!r.first && got != expected[i]) {
        r.first = begin + i;
        r.expected = expected[i];
        r.got = got;
      }
    }
  });

  verdict.inputs_checked = total;
  auto& acc = verdict.accuracy;
  acc.exhaustive = mode == CheckMode::Exhaustive;
  acc.inputs_checked = total;
  acc.per_bit.assign(m, 0.0);
  acc.per_bit_half_width.assign(m, 0.0);
  for (const auto& r : results) {
    for (std::size_t j = 0; j < m; ++j) acc.per_bit[j] += static_cast<double>(r.hits[j]);
    if (r.first && !verdict.counterexample) {
      verdict.equivalent = false;
      verdict.counterexample = mode == CheckMode::Exhaustive ? BitVec::from_uint(*r.first, n) : sampled[*r.first];
      verdict.expected = r.expected;
      verdict.got = r.got;
    }
  }
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double p = acc.per_bit[j] / static_cast<double>(total);
    acc.per_bit[j] = p;
    if (!acc.exhaustive) acc.per_bit_half_width[j] = 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(total));
    sum += p;
  }
  acc.aggregate = sum / static_cast<double>(m);
  if (!acc.exhaustive)
    acc.aggregate_half_width = 1.96 * std::sqrt(acc.aggregate * (1.0 - acc.aggregate) / static_cast<double>(total));
  return verdict;
}

EquivalenceVerdict check_equivalence(const Bsd& diagram, const OracleHandle& oracle, CheckMode mode,
                                     std::size_t samples, RngStream& stream, std::uint64_t exhaustive_cap,
                                     std::size_t threads) {
  if (diagram.inputs() != oracle.inputs() || diagram.outputs() != oracle.outputs())
    throw Error(ErrorKind::InputShape, "design and oracle widths differ");
  return check_equivalence([&](const BitVec& x) { return evaluate(diagram, x); }, oracle, mode, samples, stream,
                           exhaustive_cap, threads);
}

SampleSet worst_counterexamples(const Bsd& diagram, const OracleHandle& oracle, std::size_t limit,
                                std::uint64_t exhaustive_cap, std::size_t threads) {
  const std::size_t n = oracle.inputs();
  const auto space = input_space_size(n);
  if (!space || *space > exhaustive_cap)
    throw Error(ErrorKind::Mode, "ranking counterexamples needs an exhaustive sweep within the cap");
  constexpr std::uint64_t kChunk = 4096;
  const std::size_t chunks = static_cast<std::size_t>((*space + kChunk - 1) / kChunk);
  // (wrong bits, input, oracle output) per chunk
  std::vector<std::vector<std::tuple<std::size_t, std::uint64_t, BitVec>>> found(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::uint64_t begin = c * kChunk, end = std::min(*space, begin + kChunk);
    std::vector<BitVec> inputs;
    for (std::uint64_t i = begin; i < end; ++i) inputs.push_back(BitVec::from_uint(i, n));
    const auto expected = oracle.query(inputs);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
      const std::size_t wrong = evaluate(diagram, inputs[i]).hamming(expected[i]);
      if (wrong) found[c].emplace_back(wrong, begin + i, expected[i]);
    }
  });
  std::vector<std::tuple<std::size_t, std::uint64_t, BitVec>> all;
  for (auto& f : found) all.insert(all.end(), f.begin(), f.end());
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return std::get<0>(a) != std::get<0>(b) ? std::get<0>(a) > std::get<0>(b) : std::get<1>(a) < std::get<1>(b);
  });
  SampleSet out(n, oracle.outputs());
  for (std::size_t i = 0; i < all.size() && i < limit; ++i)
    out.add(BitVec::from_uint(std::get<1>(all[i]), n), std::get<2>(all[i]), Provenance::Counterexample);
  return out;
}

namespace {

class DiagramOracle final : public Oracle {
 public:
  DiagramOracle(Bsd diagram, std::string name) : diagram_(std::move(diagram)), name_(std::move(name)) {}
  std::size_t input_width() const override { return diagram_.inputs(); }
  std::size_t output_width() const override { return diagram_.outputs(); }
  OracleKind kind() const override { return OracleKind::Builtin; }
  std::string name() const override { return name_; }
  BitVec evaluate(const BitVec& input) const override { return bsdsynth::evaluate(diagram_, input); }

 private:
  Bsd diagram_;
  std::string name_;
};

}  // namespace

std::shared_ptr<const Oracle> diagram_oracle(Bsd diagram, std::string name) {
  return std::make_shared<DiagramOracle>(std::move(diagram), std::move(name));
}

}  // namespace bsdsynth
