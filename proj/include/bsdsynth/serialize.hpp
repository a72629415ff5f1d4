#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "bsdsynth/bsd.hpp"
#include "bsdsynth/emit.hpp"
#include "bsdsynth/pipeline.hpp"

namespace bsdsynth {

using Json = nlohmann::ordered_json;

inline constexpr int kDesignVersion = 1;

/// Learn configuration without the thread count, which never affects results.
Json config_to_json(const LearnConfig& config);
LearnConfig config_from_json(const Json& j);

/// A diagram with the configuration that produced it.
struct Design {
  Bsd diagram;
  std::optional<LearnConfig> config;
};

/// .bsd.json: reachable nodes renumbered in post-order, children before
/// parents, so a reload reproduces evaluation and node counts exactly.
Json design_to_json(const Bsd& diagram, const LearnConfig* config = nullptr);
Design design_from_json(const Json& j);

std::string dump(const Json& j);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

void save_design(const std::string& path, const Bsd& diagram, const LearnConfig* config = nullptr);
Design load_design(const std::string& path);

Json accuracy_to_json(const AccuracyEstimate& acc);
Json report_to_json(const LearnReport& report);
Json verdict_to_json(const EquivalenceVerdict& verdict);

}  // namespace bsdsynth
