#pragma once

// Flat scenario text: one `key = value [unit]` per line, `#` starts a
// comment. Keys are ScenarioSpec field names; unknown or repeated keys are
// errors. Durations need a unit (s, ms, us), arrival rates pkts_s, bit_rate
// mbps; load_range is written lo:hi. Omitted keys keep their defaults.

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "cascade/mac/scenario.hpp"

namespace cascade::runner {

class ScenarioParseError : public std::runtime_error {
 public:
  ScenarioParseError(std::string source, std::size_t line, std::size_t column, const std::string& message);
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses and validates. Throws ScenarioParseError for syntax problems and
/// mac::InvalidScenario for range violations.
mac::ScenarioSpec parse_scenario_text(std::string_view text, std::string_view source = "<scenario>");
mac::ScenarioSpec parse_scenario(const std::filesystem::path& path);

/// Every key with its unit; parses back to an identical spec.
std::string format_scenario(const mac::ScenarioSpec& spec);

}  // namespace cascade::runner
