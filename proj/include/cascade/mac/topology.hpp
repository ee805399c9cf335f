#pragma once

#include <string_view>
#include <vector>

namespace cascade::mac {

enum class TopologyKind { Linear, Ring };

std::string_view to_string(TopologyKind k) noexcept;

/// Pairs (A_i -> B_i). Receiver B_{i+1} also hears A_i, which cannot be
/// sensed by A_{i+1}; in a ring A_{N-1} additionally interferes at B_0.
struct Topology {
  TopologyKind kind = TopologyKind::Linear;
  int n_pairs = 0;
  /// interferers[j]: transmitters whose signal destroys receptions at B_j.
  std::vector<std::vector<int>> interferers;
  /// victims[i]: receivers whose receptions A_i destroys.
  std::vector<std::vector<int>> victims;
  /// sensed[i]: transmitters A_i can carrier-sense (none in these chains).
  std::vector<std::vector<int>> sensed;

  [[nodiscard]] int edge_count() const;
  /// Transmitters that share a receiver with A_i; an ideal RTS/CTS exchange
  /// makes them defer to each other.
  [[nodiscard]] std::vector<int> conflicts(int transmitter) const;
};

/// Throws std::invalid_argument for n_pairs < 2.
Topology build_topology(TopologyKind kind, int n_pairs);

}  // namespace cascade::mac
