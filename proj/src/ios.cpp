#include "bsdsynth/ios.hpp"

#include <fstream>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "bsdsynth/error.hpp"

namespace bsdsynth {

const char* to_string(Provenance p) noexcept {
  switch (p) {
    case Provenance::Given: return "given";
    case Provenance::Random: return "random";
    case Provenance::Counterexample: return "counterexample";
  }
  return "unknown";
}

void SampleSet::add(IoSample sample) {
  if (sample.input.width() != inputs_ || sample.output.width() != outputs_)
    throw Error(ErrorKind::InputShape, "sample shape does not match the set (" +
                                           std::to_string(inputs_) + "/" + std::to_string(outputs_) + ")");
  samples_.push_back(std::move(sample));
}

void SampleSet::add(BitVec input, BitVec output, Provenance provenance) {
  add(IoSample{std::move(input), std::move(output), provenance});
}

void SampleSet::append(const SampleSet& other) {
  for (const auto& s : other) add(s);
}

SampleSet SampleSet::mandatory() const {
  SampleSet out(inputs_, outputs_);
  for (const auto& s : samples_)
    if (s.provenance != Provenance::Random) out.samples_.push_back(s);
  return out;
}

namespace {

[[noreturn]] void format_error(std::size_t line_no, const std::string& what, const std::string& line) {
  throw Error(ErrorKind::Format, "line " + std::to_string(line_no) + ": " + what + ": '" + line + "'");
}

bool all_bits(const std::string& s) {
  for (char c : s)
    if (c != '0' && c != '1') return false;
  return !s.empty();
}

}  // namespace

SampleSet read_ios(std::istream& in, Provenance provenance) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t n = 0, m = 0;
  bool have_header = false;
  std::optional<SampleSet> set;
  std::unordered_map<BitVec, std::pair<BitVec, std::size_t>, BitVecHash> seen;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') format_error(line_no, "CR line endings are not accepted", line);
    std::string body = line.substr(0, line.find('#'));
    while (!body.empty() && body.back() == ' ') body.pop_back();
    if (body.empty()) continue;

    if (!have_header) {
      if (std::sscanf(body.c_str(), "inputs=%zu outputs=%zu", &n, &m) != 2 ||
          body != "inputs=" + std::to_string(n) + " outputs=" + std::to_string(m))
        format_error(line_no, "expected header 'inputs=<n> outputs=<m>'", line);
      if (n == 0 || m == 0) format_error(line_no, "widths must be positive", line);
      have_header = true;
      set.emplace(n, m);
      continue;
    }

    const auto space = body.find(' ');
    if (space == std::string::npos || body.find(' ', space + 1) != std::string::npos)
      format_error(line_no, "expected exactly two fields separated by one space", line);
    const std::string in_bits = body.substr(0, space);
    const std::string out_bits = body.substr(space + 1);
    if (!all_bits(in_bits) || !all_bits(out_bits)) format_error(line_no, "fields must be 0/1 strings", line);
    if (in_bits.size() != n || out_bits.size() != m)
      format_error(line_no, "field widths do not match the header", line);

    BitVec x = BitVec::from_string(in_bits);
    BitVec y = BitVec::from_string(out_bits);
    if (auto it = seen.find(x); it != seen.end()) {
      if (it->second.first != y)
        format_error(line_no,
                     "contradicts line " + std::to_string(it->second.second) + " for the same input", line);
    } else {
      seen.emplace(x, std::make_pair(y, line_no));
    }
    set->add(std::move(x), std::move(y), provenance);
  }
  if (!have_header) throw Error(ErrorKind::Format, "missing 'inputs=<n> outputs=<m>' header");
  return std::move(*set);
}

SampleSet read_ios_file(const std::string& path, Provenance provenance) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_ios(in, provenance);
}

std::string ios_line(const BitVec& input, const BitVec& output) {
  return input.to_string() + " " + output.to_string();
}

void write_ios(std::ostream& out, const SampleSet& samples) {
  out << "inputs=" << samples.inputs() << " outputs=" << samples.outputs() << "\n";
  for (const auto& s : samples) out << ios_line(s.input, s.output) << "\n";
}

void write_ios_file(const std::string& path, const SampleSet& samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  write_ios(out, samples);
}

}  // namespace bsdsynth
