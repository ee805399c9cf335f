#pragma once

// Canned reproduction scenarios. Each writes plottable CSVs plus summary.txt
// listing every parameter (labelled reference-setup or project-default) and
// the outcome of the figure's qualitative check.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cascade::runner {

struct FigureOptions {
  std::uint64_t seed = 1;
  int replications = 5;
  unsigned threads = 0;
};

struct FigureCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct FigureOutcome {
  std::string id;
  std::vector<std::string> files;  // relative to the output directory, summary.txt included
  std::vector<FigureCheck> checks;

  [[nodiscard]] bool passed() const noexcept;
};

/// fig5a fig5b fig13 fig14 ring rtscts minstrel.
std::span<const std::string_view> figure_ids() noexcept;

/// Throws std::invalid_argument for an unknown id.
FigureOutcome reproduce_figure(std::string_view id, const std::filesystem::path& dir, const FigureOptions& options);

}  // namespace cascade::runner
