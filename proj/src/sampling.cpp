#include "bsdsynth/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "bsdsynth/bsd.hpp"
#include "bsdsynth/error.hpp"
#include "bsdsynth/parallel.hpp"

namespace bsdsynth {

namespace {

std::uint64_t splitmix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept { return splitmix(h ^ splitmix(v)); }

std::uint64_t hash_text(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t key)
    : seed_(seed), key_(key), engine_(splitmix(seed) ^ splitmix(key + 0x632be59bd9b4e019ull)) {}

RngStream RngStream::derive(std::uint64_t seed, std::string_view purpose, std::uint64_t digest) {
  return RngStream(seed, hash_combine(hash_text(purpose), digest));
}

std::uint64_t RngStream::below(std::uint64_t bound) {
  // Rejection sampling keeps the draw exactly uniform and platform independent.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double RngStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

// ---------------------------------------------------------------------------

void PathAssignment::bind(std::size_t var, bool value) {
  if (binds(var)) throw Error(ErrorKind::Domain, "variable " + std::to_string(var) + " is already on the path");
  bindings_.emplace_back(var, value);
}

PathAssignment PathAssignment::extended(std::size_t var, bool value) const {
  PathAssignment p = *this;
  p.bind(var, value);
  return p;
}

bool PathAssignment::binds(std::size_t var) const noexcept {
  return std::any_of(bindings_.begin(), bindings_.end(), [var](const auto& b) { return b.first == var; });
}

std::optional<bool> PathAssignment::value_of(std::size_t var) const noexcept {
  for (const auto& [v, value] : bindings_)
    if (v == var) return value;
  return std::nullopt;
}

void PathAssignment::apply(BitVec& input) const noexcept {
  for (const auto& [v, value] : bindings_) input.set(v, value);
}

bool PathAssignment::matches(const BitVec& input) const noexcept {
  return std::all_of(bindings_.begin(), bindings_.end(),
                     [&](const auto& b) { return input.get(b.first) == b.second; });
}

std::uint64_t PathAssignment::digest() const noexcept {
  auto sorted = bindings_;
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t h = 0x51ed2701a3f1c2b5ull;
  for (const auto& [v, value] : sorted) h = hash_combine(h, (static_cast<std::uint64_t>(v) << 1) | value);
  return h;
}

// ---------------------------------------------------------------------------

std::optional<std::uint64_t> input_space_size(std::size_t width) noexcept {
  if (width >= 64) return std::nullopt;
  return std::uint64_t{1} << width;
}

ConditionedInputs conditioned_inputs(std::size_t width, const PathAssignment& path, std::size_t count,
                                     RngStream& stream) {
  if (count == 0) throw Error(ErrorKind::Config, "sample count must be at least 1");
  for (const auto& [v, value] : path.bindings())
    if (v >= width) throw Error(ErrorKind::Domain, "path variable out of range");

  std::vector<std::size_t> free_vars;
  for (std::size_t v = 0; v < width; ++v)
    if (!path.binds(v)) free_vars.push_back(v);

  ConditionedInputs out;
  const auto space = input_space_size(free_vars.size());
  if (space && *space <= count) {
    out.exhaustive = true;
    out.inputs.reserve(*space);
    for (std::uint64_t t = 0; t < *space; ++t) {
      BitVec x(width);
      for (std::size_t i = 0; i < free_vars.size(); ++i) x.set(free_vars[i], (t >> i) & 1u);
      path.apply(x);
      out.inputs.push_back(std::move(x));
    }
    return out;
  }

  out.inputs.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    BitVec x(width);
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < free_vars.size(); ++i) {
      if ((i & 63) == 0) bits = stream.next();
      x.set(free_vars[i], (bits >> (i & 63)) & 1u);
    }
    path.apply(x);
    out.inputs.push_back(std::move(x));
  }
  return out;
}

SampleSet draw_conditioned(const OracleHandle& oracle, const PathAssignment& path, std::size_t count,
                           RngStream& stream) {
  auto drawn = conditioned_inputs(oracle.inputs(), path, count, stream);
  auto outputs = oracle.query(drawn.inputs);
  SampleSet set(oracle.inputs(), oracle.outputs());
  for (std::size_t i = 0; i < drawn.inputs.size(); ++i)
    set.add(std::move(drawn.inputs[i]), std::move(outputs[i]), Provenance::Random);
  return set;
}

// ---------------------------------------------------------------------------

AccuracyEstimate estimate_accuracy(const Evaluator& candidate, const OracleHandle& oracle, std::size_t count,
                                   RngStream& stream, std::uint64_t exhaustive_cap, std::size_t threads) {
  const std::size_t n = oracle.inputs();
  const std::size_t m = oracle.outputs();
  const auto space = input_space_size(n);
  AccuracyEstimate est;
  est.exhaustive = space && *space <= exhaustive_cap;

  std::vector<BitVec> inputs;
  if (est.exhaustive) {
    inputs.reserve(*space);
    for (std::uint64_t x = 0; x < *space; ++x) inputs.push_back(BitVec::from_uint(x, n));
  } else {
    auto drawn = conditioned_inputs(n, PathAssignment{}, count, stream);
    est.exhaustive = drawn.exhaustive;
    inputs = std::move(drawn.inputs);
  }
  const auto expected = oracle.query(inputs);

  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (inputs.size() + kChunk - 1) / kChunk;
  std::vector<std::vector<std::uint64_t>> matches(chunks, std::vector<std::uint64_t>(m, 0));
  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t stop = std::min(inputs.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < stop; ++i) {
      const BitVec got = candidate(inputs[i]);
      if (got.width() != m) throw Error(ErrorKind::InputShape, "candidate output width differs from the oracle");
      for (std::size_t j = 0; j < m; ++j) matches[c][j] += got.get(j) == expected[i].get(j);
    }
  });

  const double total = static_cast<double>(inputs.size());
  est.inputs_checked = inputs.size();
  est.per_bit.assign(m, 0.0);
  est.per_bit_half_width.assign(m, 0.0);
  double sum = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    std::uint64_t hit = 0;
    for (const auto& row : matches) hit += row[j];
    const double p = static_cast<double>(hit) / total;
    est.per_bit[j] = p;
    if (!est.exhaustive) est.per_bit_half_width[j] = 1.96 * std::sqrt(p * (1.0 - p) / total);
    sum += p;
  }
  est.aggregate = sum / static_cast<double>(m);
  if (!est.exhaustive)
    est.aggregate_half_width = 1.96 * std::sqrt(est.aggregate * (1.0 - est.aggregate) / total);
  return est;
}

AccuracyEstimate estimate_accuracy(const Bsd& diagram, const OracleHandle& oracle, std::size_t count,
                                   RngStream& stream, std::uint64_t exhaustive_cap, std::size_t threads) {
  if (diagram.inputs() != oracle.inputs() || diagram.outputs() != oracle.outputs())
    throw Error(ErrorKind::InputShape, "diagram and oracle widths differ");
  return estimate_accuracy([&](const BitVec& x) { return evaluate(diagram, x); }, oracle, count, stream,
                           exhaustive_cap, threads);
}

}  // namespace bsdsynth
