#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

#include "bsdsynth/bitvec.hpp"
#include "bsdsynth/ios.hpp"
#include "bsdsynth/oracle.hpp"

namespace bsdsynth {

class Bsd;

/// Seeded random stream. The sequence depends only on (seed, key), never on
/// which thread or in which order streams are created.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t key);

  /// key = hash(purpose) combined with a caller digest (e.g. a node path).
  static RngStream derive(std::uint64_t seed, std::string_view purpose, std::uint64_t digest = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t key() const noexcept { return key_; }

  std::uint64_t next() { return engine_(); }
  /// Uniform in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform in [0, 1).
  double uniform();

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::mt19937_64 engine_;
};

std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) noexcept;
std::uint64_t hash_text(std::string_view text) noexcept;

/// Fixed input bits along a root-to-node path.
class PathAssignment {
 public:
  PathAssignment() = default;

  /// Throws Domain when `var` is already bound.
  void bind(std::size_t var, bool value);
  PathAssignment extended(std::size_t var, bool value) const;

  bool binds(std::size_t var) const noexcept;
  std::optional<bool> value_of(std::size_t var) const noexcept;
  std::size_t depth() const noexcept { return bindings_.size(); }
  const std::vector<std::pair<std::size_t, bool>>& bindings() const noexcept { return bindings_; }

  void apply(BitVec& input) const noexcept;
  bool matches(const BitVec& input) const noexcept;
  /// Independent of binding order.
  std::uint64_t digest() const noexcept;

 private:
  std::vector<std::pair<std::size_t, bool>> bindings_;
};

/// Inputs with the path bits pinned and the other bits uniform. When
/// 2^free <= count every free assignment is listed exactly once instead.
struct ConditionedInputs {
  std::vector<BitVec> inputs;
  bool exhaustive = false;
};

ConditionedInputs conditioned_inputs(std::size_t width, const PathAssignment& path, std::size_t count,
                                     RngStream& stream);

SampleSet draw_conditioned(const OracleHandle& oracle, const PathAssignment& path, std::size_t count,
                           RngStream& stream);

/// Accuracy of a candidate against an oracle, per output bit and averaged.
struct AccuracyEstimate {
  std::vector<double> per_bit;
  std::vector<double> per_bit_half_width;  // normal-approximation 95% half-width; 0 when exhaustive
  double aggregate = 0.0;
  double aggregate_half_width = 0.0;
  std::uint64_t inputs_checked = 0;
  bool exhaustive = false;
};

using Evaluator = std::function<BitVec(const BitVec&)>;

inline constexpr std::uint64_t kDefaultExhaustiveCap = std::uint64_t{1} << 20;

/// Exhaustive when 2^n <= exhaustive_cap, otherwise `count` uniform inputs.
AccuracyEstimate estimate_accuracy(const Evaluator& candidate, const OracleHandle& oracle, std::size_t count,
                                   RngStream& stream, std::uint64_t exhaustive_cap = kDefaultExhaustiveCap,
                                   std::size_t threads = 1);
AccuracyEstimate estimate_accuracy(const Bsd& diagram, const OracleHandle& oracle, std::size_t count,
                                   RngStream& stream, std::uint64_t exhaustive_cap = kDefaultExhaustiveCap,
                                   std::size_t threads = 1);

/// 2^n when it fits in 64 bits.
std::optional<std::uint64_t> input_space_size(std::size_t width) noexcept;

}  // namespace bsdsynth
