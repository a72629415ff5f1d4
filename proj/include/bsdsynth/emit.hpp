#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bsdsynth/bsd.hpp"
#include "bsdsynth/oracle.hpp"
#include "bsdsynth/sampling.hpp"

namespace bsdsynth {

/// Gate operand: an input bit, an internal wire, or a constant, optionally inverted.
struct Operand {
  enum class Kind { Input, Wire, Constant };
  Kind kind = Kind::Constant;
  std::size_t index = 0;  // input bit or wire index; constant value for Kind::Constant
  bool negated = false;

  friend bool operator==(const Operand&, const Operand&) = default;
};

struct Gate {
  enum class Op { Buf, And, Or, Mux };  // Buf copies a (a NOT when a is inverted); Mux is a ? c : b
  Op op = Op::Buf;
  std::size_t out = 0;  // wire index
  Operand a, b, c;
};

/// Structural netlist over {NOT, AND, OR} plus a 2:1 mux macro.
class Netlist {
 public:
  std::string name = "bsd";
  std::size_t inputs = 0;
  std::vector<std::string> wires;
  std::vector<Gate> gates;       // topological order
  std::vector<Operand> outputs;  // y[j] is driven by outputs[j]

  /// AND, OR and mux gates plus inverting buffers.
  std::size_t gate_count() const noexcept;
  BitVec evaluate(const BitVec& input) const;
};

enum class NetlistStyle { Gates, Mux };

/// Each decision node on x becomes  a = ~x & lo;  b = x & hi;  out = a | b
/// (three gates; the inverted literal is an operand), or one mux in Mux style.
/// Throws NotConverged when the diagram still has speculated leaves.
Netlist to_netlist(const Bsd& diagram, NetlistStyle style = NetlistStyle::Gates, const std::string& name = "bsd");

std::string netlist_text(const Netlist& netlist);
void write_netlist(std::ostream& out, const Netlist& netlist);
/// Parses the dialect written by write_netlist. Gates may appear in any
/// order; they are sorted topologically. Throws Format on syntax errors,
/// undriven or multiply driven wires, and cycles.
Netlist read_netlist(std::istream& in);
Netlist parse_netlist(const std::string& text);

/// One graph node per reachable store node; hi edges solid, lo edges dashed;
/// roots carry an external label with output index and cluster id.
std::string to_dot(const Bsd& diagram);

enum class CheckMode { Exhaustive, Sampled };

struct EquivalenceVerdict {
  bool equivalent = true;
  CheckMode mode = CheckMode::Exhaustive;
  std::uint64_t inputs_checked = 0;
  std::optional<BitVec> counterexample;  // lowest mismatching input in exhaustive mode
  BitVec expected;
  BitVec got;
  AccuracyEstimate accuracy;
};

/// Exhaustive mode enumerates all 2^n inputs (Mode error beyond the cap);
/// sampled mode checks `samples` uniform inputs.
EquivalenceVerdict check_equivalence(const Evaluator& candidate, const OracleHandle& oracle, CheckMode mode,
                                     std::size_t samples, RngStream& stream,
                                     std::uint64_t exhaustive_cap = kDefaultExhaustiveCap, std::size_t threads = 1);
EquivalenceVerdict check_equivalence(const Bsd& diagram, const OracleHandle& oracle, CheckMode mode,
                                     std::size_t samples, RngStream& stream,
                                     std::uint64_t exhaustive_cap = kDefaultExhaustiveCap, std::size_t threads = 1);

/// Up to `limit` mismatching inputs, most wrong output bits first, ties to
/// the lower input; outputs are the oracle's. Exhaustive (Mode error beyond the cap).
SampleSet worst_counterexamples(const Bsd& diagram, const OracleHandle& oracle, std::size_t limit,
                                std::uint64_t exhaustive_cap = kDefaultExhaustiveCap, std::size_t threads = 1);

/// Oracle view of a diagram, e.g. to compare two designs.
std::shared_ptr<const Oracle> diagram_oracle(Bsd diagram, std::string name = "design");

}  // namespace bsdsynth
