#include "cascade/runner/csv.hpp"

#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace cascade::runner {

namespace {

std::vector<std::string> split_header(std::string_view header)
{
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = header.find(',', pos);
    out.emplace_back(header.substr(pos, comma - pos));
    if (comma == std::string_view::npos)
      return out;
    pos = comma + 1;
  }
}

using Series = std::vector<std::vector<double>>;

void write_series(const std::filesystem::path& path, std::string_view header, const mac::TrafficStats& stats,
                  const Series& series)
{
  CsvWriter csv(path, split_header(header));
  const std::size_t windows = series.empty() ? 0 : series.front().size();
  for (std::size_t k = 0; k < windows; ++k) {
    const double t = static_cast<double>(k) * stats.series.window;
    for (std::size_t i = 0; i < series.size(); ++i)
      csv.row({format_number(t), std::to_string(i), format_number(series[i][k])});
  }
}

}  // namespace

std::string format_number(double x)
{
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc())
    throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary | std::ios::trunc), columns_(header.size())
{
  if (!out_)
    throw std::runtime_error("cannot write " + path.string());
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells)
{
  if (cells.size() != columns_)
    throw std::logic_error("csv row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0)
      out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::row(std::initializer_list<double> values)
{
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values)
    cells.push_back(format_number(v));
  row(cells);
}

void write_nodes_csv(const std::filesystem::path& path, const mac::TrafficStats& stats)
{
  CsvWriter csv(path, split_header(kNodesHeader));
  for (std::size_t i = 0; i < stats.nodes.size(); ++i) {
    const auto& n = stats.nodes[i];
    csv.row({std::to_string(i), std::to_string(n.generated), std::to_string(n.delivered), std::to_string(n.collided),
             std::to_string(n.dropped), format_number(n.busy_seconds), format_number(n.utilization),
             format_number(n.throughput_bps)});
  }
}

void write_timeseries_csv(const std::filesystem::path& path, const mac::TrafficStats& stats)
{
  write_series(path, kTimeseriesHeader, stats, stats.series.utilization);
}

void write_throughput_csv(const std::filesystem::path& path, const mac::TrafficStats& stats)
{
  write_series(path, kThroughputHeader, stats, stats.series.throughput_bps);
}

void write_bit_rate_csv(const std::filesystem::path& path, const mac::TrafficStats& stats)
{
  write_series(path, kBitRateHeader, stats, stats.series.bit_rate);
}

}  // namespace cascade::runner
