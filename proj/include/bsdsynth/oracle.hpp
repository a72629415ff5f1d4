#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bsdsynth/bitvec.hpp"
#include "bsdsynth/ios.hpp"

namespace bsdsynth {

enum class OracleKind { Builtin, TruthTableFile, ExternalProcess };

const char* to_string(OracleKind kind) noexcept;

/// The black-box circuit: a deterministic map from n input bits to m output bits.
class Oracle {
 public:
  virtual ~Oracle() = default;

  virtual std::size_t input_width() const = 0;
  virtual std::size_t output_width() const = 0;
  virtual OracleKind kind() const = 0;
  virtual std::string name() const = 0;

  /// Width is checked by OracleHandle before this is called.
  virtual BitVec evaluate(const BitVec& input) const = 0;
  virtual std::vector<BitVec> evaluate_batch(std::span<const BitVec> inputs) const;

  /// Variable order used when a reduced diagram of this oracle is built for
  /// complexity estimates. Defaults to 0..n-1.
  virtual std::vector<std::size_t> canonical_order() const;

  /// Rows of a finite table; nullptr for oracles that answer every input.
  virtual const SampleSet* table() const { return nullptr; }
};

/// Oracle backed by a function on packed integers (n, m <= 64).
class FunctionOracle final : public Oracle {
 public:
  using Fn = std::function<std::uint64_t(std::uint64_t)>;

  FunctionOracle(std::string name, std::size_t inputs, std::size_t outputs, Fn fn,
                 std::vector<std::size_t> order = {});

  std::size_t input_width() const override { return inputs_; }
  std::size_t output_width() const override { return outputs_; }
  OracleKind kind() const override { return OracleKind::Builtin; }
  std::string name() const override { return name_; }
  BitVec evaluate(const BitVec& input) const override;
  std::vector<std::size_t> canonical_order() const override;

  std::uint64_t evaluate_packed(std::uint64_t x) const { return fn_(x); }

 private:
  std::string name_;
  std::size_t inputs_;
  std::size_t outputs_;
  Fn fn_;
  std::vector<std::size_t> order_;
};

/// Oracle answering only the inputs listed in a sample table.
class TableOracle final : public Oracle {
 public:
  explicit TableOracle(SampleSet rows, std::string name = "table");

  std::size_t input_width() const override { return rows_.inputs(); }
  std::size_t output_width() const override { return rows_.outputs(); }
  OracleKind kind() const override { return OracleKind::TruthTableFile; }
  std::string name() const override { return name_; }
  BitVec evaluate(const BitVec& input) const override;
  const SampleSet* table() const override { return &rows_; }

  bool covers(const BitVec& input) const { return index_.contains(input); }

 private:
  SampleSet rows_;
  std::string name_;
  std::unordered_map<BitVec, std::size_t, BitVecHash> index_;
};

/// Child process speaking the line protocol:
///   child -> `WIDTHS <n> <m>` once; parent -> one n-char 01 line per query;
///   child -> one m-char 01 line per query, in order; parent -> `EXIT`.
/// Exchanges are serialized; the oracle is safe to share between threads.
class ExternalOracle final : public Oracle {
 public:
  explicit ExternalOracle(const std::string& command);
  ~ExternalOracle() override;
  ExternalOracle(const ExternalOracle&) = delete;
  ExternalOracle& operator=(const ExternalOracle&) = delete;

  std::size_t input_width() const override { return inputs_; }
  std::size_t output_width() const override { return outputs_; }
  OracleKind kind() const override { return OracleKind::ExternalProcess; }
  std::string name() const override { return "exec:" + command_; }
  BitVec evaluate(const BitVec& input) const override;
  std::vector<BitVec> evaluate_batch(std::span<const BitVec> inputs) const override;

 private:
  struct Session;
  std::string command_;
  std::size_t inputs_ = 0;
  std::size_t outputs_ = 0;
  std::unique_ptr<Session> session_;
};

/// A circuit with registers: one step maps (input, state) to (output, next state).
class SequentialCircuit {
 public:
  virtual ~SequentialCircuit() = default;
  virtual std::size_t input_width() const = 0;
  virtual std::size_t output_width() const = 0;
  virtual std::size_t state_width() const = 0;
  virtual std::string name() const = 0;
  virtual std::pair<BitVec, BitVec> step(const BitVec& input, const BitVec& state) const = 0;
};

/// k-bit counter: input bit 0 is enable, output is the current state,
/// next state is state + enable modulo 2^k.
std::shared_ptr<const SequentialCircuit> make_counter(std::size_t bits);

/// Exposes one step of a sequential circuit as a combinational oracle.
/// Inputs: circuit inputs then state bits. Outputs: circuit outputs then next-state bits.
std::shared_ptr<const Oracle> wrap_sequential(std::shared_ptr<const SequentialCircuit> circuit);

/// Reference circuits, spec "name:k":
///   adder:k      n=2k (a then b, LSB first), m=k+1 (sum LSB first, carry last)
///   subtractor:k n=2k, m=k+1 (a-b mod 2^k, borrow last)
///   comparator:k n=2k, m=3 (a<b, a==b, a>b)
///   mux:k        n=k+2^k (select then data), m=1
///   parity:k     n=k, m=1
///   miniALU:k    n=2k+4 (a, b, 3-bit opcode, carry-in), m=k+1 (result, flag)
///                opcodes: 0 ADD 1 SUB 2 AND 3 OR 4 XOR 5 SHL 6 SHR 7 SLT
///   counter:k    sequential, wrapped: n=1+k, m=2k
std::shared_ptr<const Oracle> make_builtin(const std::string& spec);

enum class AluOp : unsigned { Add = 0, Sub, And, Or, Xor, Shl, Shr, Slt };

/// Budgeted, counting front end shared by everything that talks to an oracle.
class OracleHandle {
 public:
  explicit OracleHandle(std::shared_ptr<const Oracle> oracle,
                        std::optional<std::uint64_t> max_probes = std::nullopt);

  std::size_t inputs() const noexcept { return oracle_->input_width(); }
  std::size_t outputs() const noexcept { return oracle_->output_width(); }
  OracleKind kind() const noexcept { return oracle_->kind(); }
  const Oracle& oracle() const noexcept { return *oracle_; }
  std::shared_ptr<const Oracle> shared() const noexcept { return oracle_; }

  BitVec query(const BitVec& input) const;
  std::vector<BitVec> query(std::span<const BitVec> inputs) const;

  std::uint64_t probes() const noexcept { return probes_->load(); }
  std::optional<std::uint64_t> budget() const noexcept { return max_probes_; }

  /// Same oracle with an independent probe counter and budget.
  OracleHandle fork(std::optional<std::uint64_t> max_probes = std::nullopt) const;

 private:
  void charge(std::uint64_t count) const;

  std::shared_ptr<const Oracle> oracle_;
  std::shared_ptr<std::atomic<std::uint64_t>> probes_;
  std::optional<std::uint64_t> max_probes_;
};

}  // namespace bsdsynth
