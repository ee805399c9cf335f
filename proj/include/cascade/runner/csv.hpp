#pragma once

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include "cascade/mac/simulator.hpp"

namespace cascade::runner {

/// Shortest text that parses back to the same double.
std::string format_number(double x);

/// Comma-separated writer; the header is written on construction and every
/// row must have as many cells.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  void row(std::initializer_list<double> values);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

inline constexpr std::string_view kNodesHeader =
    "node_index,generated,delivered,collided,dropped,busy_seconds,utilization,throughput_bps";
inline constexpr std::string_view kTimeseriesHeader = "time_s,node_index,utilization_window";
inline constexpr std::string_view kThroughputHeader = "time_s,node_index,throughput_bps";
inline constexpr std::string_view kBitRateHeader = "time_s,node_index,bit_rate_bps";

void write_nodes_csv(const std::filesystem::path& path, const mac::TrafficStats& stats);
/// time_s is the start of each sample window.
void write_timeseries_csv(const std::filesystem::path& path, const mac::TrafficStats& stats);
void write_throughput_csv(const std::filesystem::path& path, const mac::TrafficStats& stats);
void write_bit_rate_csv(const std::filesystem::path& path, const mac::TrafficStats& stats);

}  // namespace cascade::runner
