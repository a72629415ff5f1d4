#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "bsdsynth/bitvec.hpp"

namespace bsdsynth {

enum class Provenance { Given, Random, Counterexample };

const char* to_string(Provenance p) noexcept;

struct IoSample {
  BitVec input;
  BitVec output;
  Provenance provenance = Provenance::Given;
};

/// Ordered collection of input/output examples sharing one shape.
class SampleSet {
 public:
  SampleSet(std::size_t inputs, std::size_t outputs) : inputs_(inputs), outputs_(outputs) {}

  std::size_t inputs() const noexcept { return inputs_; }
  std::size_t outputs() const noexcept { return outputs_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

  void add(IoSample sample);
  void add(BitVec input, BitVec output, Provenance provenance);
  void append(const SampleSet& other);

  const IoSample& operator[](std::size_t i) const { return samples_[i]; }
  auto begin() const noexcept { return samples_.begin(); }
  auto end() const noexcept { return samples_.end(); }
  const std::vector<IoSample>& samples() const noexcept { return samples_; }

  /// Given and Counterexample samples.
  SampleSet mandatory() const;

 private:
  std::size_t inputs_;
  std::size_t outputs_;
  std::vector<IoSample> samples_;
};

/// .ios text format:
///   line 1: `inputs=<n> outputs=<m>`
///   then one `<n-char 01-string> <m-char 01-string>` per line, single space,
///   character i being bit i; `#` starts a comment; blank lines are ignored.
/// Duplicate inputs with different outputs are rejected.
SampleSet read_ios(std::istream& in, Provenance provenance = Provenance::Given);
SampleSet read_ios_file(const std::string& path, Provenance provenance = Provenance::Given);

void write_ios(std::ostream& out, const SampleSet& samples);
void write_ios_file(const std::string& path, const SampleSet& samples);

/// One data line in .ios form, without newline.
std::string ios_line(const BitVec& input, const BitVec& output);

}  // namespace bsdsynth
