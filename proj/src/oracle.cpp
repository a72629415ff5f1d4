#include "bsdsynth/oracle.hpp"

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <bit>
#include <cerrno>
#include <csignal>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <numeric>
#include <sstream>

#include "bsdsynth/error.hpp"

namespace bsdsynth {

const char* to_string(OracleKind kind) noexcept {
  switch (kind) {
    case OracleKind::Builtin: return "builtin";
    case OracleKind::TruthTableFile: return "table";
    case OracleKind::ExternalProcess: return "external";
  }
  return "unknown";
}

std::vector<BitVec> Oracle::evaluate_batch(std::span<const BitVec> inputs) const {
  std::vector<BitVec> out;
  out.reserve(inputs.size());
  for (const auto& x : inputs) out.push_back(evaluate(x));
  return out;
}

std::vector<std::size_t> Oracle::canonical_order() const {
  std::vector<std::size_t> order(input_width());
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

// ---------------------------------------------------------------------------

FunctionOracle::FunctionOracle(std::string name, std::size_t inputs, std::size_t outputs, Fn fn,
                               std::vector<std::size_t> order)
    : name_(std::move(name)), inputs_(inputs), outputs_(outputs), fn_(std::move(fn)), order_(std::move(order)) {
  if (inputs == 0 || outputs == 0 || inputs > 64 || outputs > 64)
    throw Error(ErrorKind::Config, "function oracle widths must be in [1, 64]");
  if (!order_.empty()) {
    std::vector<char> seen(inputs_, 0);
    if (order_.size() != inputs_) throw Error(ErrorKind::Config, "canonical order must list every input");
    for (auto v : order_) {
      if (v >= inputs_ || seen[v]) throw Error(ErrorKind::Config, "canonical order is not a permutation");
      seen[v] = 1;
    }
  }
}

BitVec FunctionOracle::evaluate(const BitVec& input) const {
  return BitVec::from_uint(fn_(input.to_uint()), outputs_);
}

std::vector<std::size_t> FunctionOracle::canonical_order() const {
  return order_.empty() ? Oracle::canonical_order() : order_;
}

// ---------------------------------------------------------------------------

TableOracle::TableOracle(SampleSet rows, std::string name) : rows_(std::move(rows)), name_(std::move(name)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    auto [it, inserted] = index_.emplace(rows_[i].input, i);
    if (!inserted && rows_[it->second].output != rows_[i].output)
      throw Error(ErrorKind::Format, "table has contradictory rows for input " + rows_[i].input.to_string());
  }
}

BitVec TableOracle::evaluate(const BitVec& input) const {
  auto it = index_.find(input);
  if (it == index_.end())
    throw Error(ErrorKind::UnknownInput, "table oracle has no row for input " + input.to_string());
  return rows_[it->second].output;
}

// ---------------------------------------------------------------------------

struct ExternalOracle::Session {
  pid_t pid = -1;
  FILE* to_child = nullptr;
  FILE* from_child = nullptr;
  std::mutex mutex;

  std::string read_line() {
    std::string line;
    int c;
    while ((c = std::fgetc(from_child)) != EOF && c != '\n') line.push_back(static_cast<char>(c));
    if (c == EOF && line.empty()) throw Error(ErrorKind::Protocol, "external oracle closed its output");
    return line;
  }
};

ExternalOracle::ExternalOracle(const std::string& command)
    : command_(command), session_(std::make_unique<Session>()) {
  int to_child[2];
  int from_child[2];
  if (pipe(to_child) != 0 || pipe(from_child) != 0)
    throw Error(ErrorKind::Io, std::string("pipe failed: ") + std::strerror(errno));
  std::signal(SIGPIPE, SIG_IGN);
  pid_t pid = fork();
  if (pid < 0) throw Error(ErrorKind::Io, std::string("fork failed: ") + std::strerror(errno));
  if (pid == 0) {
    dup2(to_child[0], STDIN_FILENO);
    dup2(from_child[1], STDOUT_FILENO);
    close(to_child[0]);
    close(to_child[1]);
    close(from_child[0]);
    close(from_child[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  close(to_child[0]);
  close(from_child[1]);
  session_->pid = pid;
  session_->to_child = fdopen(to_child[1], "w");
  session_->from_child = fdopen(from_child[0], "r");

  const std::string hello = session_->read_line();
  std::size_t n = 0, m = 0;
  if (std::sscanf(hello.c_str(), "WIDTHS %zu %zu", &n, &m) != 2 ||
      hello != "WIDTHS " + std::to_string(n) + " " + std::to_string(m) || n == 0 || m == 0)
    throw Error(ErrorKind::Protocol, "expected 'WIDTHS <n> <m>' from external oracle, got '" + hello + "'");
  inputs_ = n;
  outputs_ = m;
}

ExternalOracle::~ExternalOracle() {
  if (!session_ || session_->pid < 0) return;
  if (session_->to_child) {
    std::fputs("EXIT\n", session_->to_child);
    std::fclose(session_->to_child);
  }
  if (session_->from_child) std::fclose(session_->from_child);
  int status = 0;
  waitpid(session_->pid, &status, 0);
}

BitVec ExternalOracle::evaluate(const BitVec& input) const {
  return evaluate_batch(std::span<const BitVec>(&input, 1)).front();
}

std::vector<BitVec> ExternalOracle::evaluate_batch(std::span<const BitVec> inputs) const {
  std::lock_guard lock(session_->mutex);
  std::vector<BitVec> out;
  out.reserve(inputs.size());
  // Bounded chunks keep both pipes from filling up at the same time.
  constexpr std::size_t kChunk = 256;
  for (std::size_t start = 0; start < inputs.size(); start += kChunk) {
    const std::size_t stop = std::min(inputs.size(), start + kChunk);
    for (std::size_t i = start; i < stop; ++i) {
      const std::string line = inputs[i].to_string() + "\n";
      if (std::fputs(line.c_str(), session_->to_child) == EOF)
        throw Error(ErrorKind::Protocol, "external oracle stopped reading its input");
    }
    std::fflush(session_->to_child);
    for (std::size_t i = start; i < stop; ++i) {
      const std::string reply = session_->read_line();
      bool ok = reply.size() == outputs_;
      for (char c : reply) ok = ok && (c == '0' || c == '1');
      if (!ok)
        throw Error(ErrorKind::Protocol, "malformed reply from external oracle: '" + reply + "'");
      out.push_back(BitVec::from_string(reply));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class Counter final : public SequentialCircuit {
 public:
  explicit Counter(std::size_t bits) : bits_(bits) {}
  std::size_t input_width() const override { return 1; }
  std::size_t output_width() const override { return bits_; }
  std::size_t state_width() const override { return bits_; }
  std::string name() const override { return "counter:" + std::to_string(bits_); }
  std::pair<BitVec, BitVec> step(const BitVec& input, const BitVec& state) const override {
    const std::uint64_t s = state.slice(0, bits_);
    const std::uint64_t next = input.get(0) ? s + 1 : s;
    return {BitVec::from_uint(s, bits_), BitVec::from_uint(next, bits_)};
  }

 private:
  std::size_t bits_;
};

class WrappedSequential final : public Oracle {
 public:
  explicit WrappedSequential(std::shared_ptr<const SequentialCircuit> circuit) : circuit_(std::move(circuit)) {}

  std::size_t input_width() const override { return circuit_->input_width() + circuit_->state_width(); }
  std::size_t output_width() const override { return circuit_->output_width() + circuit_->state_width(); }
  OracleKind kind() const override { return OracleKind::Builtin; }
  std::string name() const override { return circuit_->name(); }

  BitVec evaluate(const BitVec& input) const override {
    const std::size_t ni = circuit_->input_width();
    const std::size_t ns = circuit_->state_width();
    const std::size_t no = circuit_->output_width();
    BitVec in(ni), state(ns);
    for (std::size_t i = 0; i < ni; ++i) in.set(i, input.get(i));
    for (std::size_t i = 0; i < ns; ++i) state.set(i, input.get(ni + i));
    auto [out, next] = circuit_->step(in, state);
    BitVec result(no + ns);
    for (std::size_t i = 0; i < no; ++i) result.set(i, out.get(i));
    for (std::size_t i = 0; i < ns; ++i) result.set(no + i, next.get(i));
    return result;
  }

 private:
  std::shared_ptr<const SequentialCircuit> circuit_;
};

std::uint64_t mask(std::size_t bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

/// a_{k-1}, b_{k-1}, ..., a_0, b_0 with operands at [0, k) and [k, 2k).
std::vector<std::size_t> interleaved_msb_first(std::size_t k) {
  std::vector<std::size_t> order;
  for (std::size_t i = k; i-- > 0;) {
    order.push_back(i);
    order.push_back(k + i);
  }
  return order;
}

[[noreturn]] void bad_builtin(const std::string& spec, const std::string& why) {
  throw Error(ErrorKind::Config, "builtin '" + spec + "': " + why);
}

}  // namespace

std::shared_ptr<const SequentialCircuit> make_counter(std::size_t bits) {
  if (bits == 0 || bits > 31) throw Error(ErrorKind::Config, "counter width must be in [1, 31]");
  return std::make_shared<Counter>(bits);
}

std::shared_ptr<const Oracle> wrap_sequential(std::shared_ptr<const SequentialCircuit> circuit) {
  return std::make_shared<WrappedSequential>(std::move(circuit));
}

std::shared_ptr<const Oracle> make_builtin(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) bad_builtin(spec, "expected name:width");
  const std::string name = spec.substr(0, colon);
  const std::string width_text = spec.substr(colon + 1);
  std::size_t k = 0;
  if (width_text.empty() || width_text.find_first_not_of("0123456789") != std::string::npos ||
      width_text.size() > 3)
    bad_builtin(spec, "width must be a positive integer");
  k = std::stoul(width_text);
  if (k == 0) bad_builtin(spec, "width must be positive");

  if (name == "adder") {
    if (k > 31) bad_builtin(spec, "width must be <= 31");
    return std::make_shared<FunctionOracle>(
        spec, 2 * k, k + 1,
        [k](std::uint64_t x) { return (x & mask(k)) + ((x >> k) & mask(k)); },
        interleaved_msb_first(k));
  }
  if (name == "subtractor") {
    if (k > 31) bad_builtin(spec, "width must be <= 31");
    return std::make_shared<FunctionOracle>(
        spec, 2 * k, k + 1,
        [k](std::uint64_t x) {
          const std::uint64_t a = x & mask(k), b = (x >> k) & mask(k);
          return ((a - b) & mask(k)) | (static_cast<std::uint64_t>(a < b) << k);
        },
        interleaved_msb_first(k));
  }
  if (name == "comparator") {
    if (k > 32) bad_builtin(spec, "width must be <= 32");
    return std::make_shared<FunctionOracle>(
        spec, 2 * k, 3,
        [k](std::uint64_t x) {
          const std::uint64_t a = x & mask(k), b = (x >> k) & mask(k);
          return static_cast<std::uint64_t>(a < b) | (static_cast<std::uint64_t>(a == b) << 1) |
                 (static_cast<std::uint64_t>(a > b) << 2);
        },
        interleaved_msb_first(k));
  }
  if (name == "mux") {
    if (k > 5) bad_builtin(spec, "select width must be <= 5");
    return std::make_shared<FunctionOracle>(spec, k + (std::size_t{1} << k), 1, [k](std::uint64_t x) {
      const std::uint64_t select = x & mask(k);
      return (x >> (k + select)) & 1u;
    });
  }
  if (name == "parity") {
    if (k > 64) bad_builtin(spec, "width must be <= 64");
    return std::make_shared<FunctionOracle>(spec, k, 1, [](std::uint64_t x) {
      return static_cast<std::uint64_t>(std::popcount(x) & 1);
    });
  }
  if (name == "miniALU") {
    if (k < 2 || k > 30) bad_builtin(spec, "width must be in [2, 30]");
    std::vector<std::size_t> order{2 * k, 2 * k + 1, 2 * k + 2};
    for (auto v : interleaved_msb_first(k)) order.push_back(v);
    order.push_back(2 * k + 3);
    return std::make_shared<FunctionOracle>(
        spec, 2 * k + 4, k + 1,
        [k](std::uint64_t x) {
          const std::uint64_t m = mask(k);
          const std::uint64_t a = x & m, b = (x >> k) & m;
          const auto op = static_cast<AluOp>((x >> (2 * k)) & 7u);
          const std::uint64_t cin = (x >> (2 * k + 3)) & 1u;
          std::uint64_t r = 0, flag = 0;
          switch (op) {
            case AluOp::Add: {
              const std::uint64_t s = a + b + cin;
              r = s & m;
              flag = s >> k;
              break;
            }
            case AluOp::Sub:
              r = (a - b - cin) & m;
              flag = a < b + cin;
              break;
            case AluOp::And: r = a & b; flag = r == 0; break;
            case AluOp::Or: r = a | b; flag = r == 0; break;
            case AluOp::Xor: r = a ^ b; flag = r == 0; break;
            case AluOp::Shl:
              r = ((a << 1) | cin) & m;
              flag = (a >> (k - 1)) & 1u;
              break;
            case AluOp::Shr:
              r = (a >> 1) | (cin << (k - 1));
              flag = a & 1u;
              break;
            case AluOp::Slt:
              r = a < b;
              flag = a == b;
              break;
          }
          return r | (flag << k);
        },
        std::move(order));
  }
  if (name == "counter") return wrap_sequential(make_counter(k));
  bad_builtin(spec, "unknown circuit name");
}

// ---------------------------------------------------------------------------

OracleHandle::OracleHandle(std::shared_ptr<const Oracle> oracle, std::optional<std::uint64_t> max_probes)
    : oracle_(std::move(oracle)),
      probes_(std::make_shared<std::atomic<std::uint64_t>>(0)),
      max_probes_(max_probes) {
  if (!oracle_) throw Error(ErrorKind::Config, "oracle handle needs an oracle");
}

void OracleHandle::charge(std::uint64_t count) const {
  std::uint64_t current = probes_->load();
  for (;;) {
    if (max_probes_ && current + count > *max_probes_)
      throw Error(ErrorKind::Budget, "oracle probe budget of " + std::to_string(*max_probes_) +
                                         " exhausted (" + std::to_string(current) + " used, " +
                                         std::to_string(count) + " requested)");
    if (probes_->compare_exchange_weak(current, current + count)) return;
  }
}

BitVec OracleHandle::query(const BitVec& input) const {
  if (input.width() != inputs())
    throw Error(ErrorKind::InputShape, "query has width " + std::to_string(input.width()) + ", oracle expects " +
                                           std::to_string(inputs()));
  charge(1);
  return oracle_->evaluate(input);
}

std::vector<BitVec> OracleHandle::query(std::span<const BitVec> inputs) const {
  for (const auto& x : inputs)
    if (x.width() != this->inputs())
      throw Error(ErrorKind::InputShape, "query has width " + std::to_string(x.width()) + ", oracle expects " +
                                             std::to_string(this->inputs()));
  charge(inputs.size());
  auto out = oracle_->evaluate_batch(inputs);
  if (out.size() != inputs.size()) throw Error(ErrorKind::Protocol, "oracle returned the wrong number of replies");
  return out;
}

OracleHandle OracleHandle::fork(std::optional<std::uint64_t> max_probes) const {
  return OracleHandle(oracle_, max_probes);
}

}  // namespace bsdsynth
