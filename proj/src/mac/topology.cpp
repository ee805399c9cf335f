#include "cascade/mac/topology.hpp"

#include <algorithm>
#include <stdexcept>

namespace cascade::mac {

std::string_view to_string(TopologyKind k) noexcept
{
  return k == TopologyKind::Ring ? "ring" : "linear";
}

int Topology::edge_count() const
{
  int edges = 0;
  for (const auto& in : interferers)
    edges += static_cast<int>(in.size());
  return edges;
}

std::vector<int> Topology::conflicts(int transmitter) const
{
  std::vector<int> out = interferers.at(transmitter);
  for (int receiver : victims.at(transmitter))
    out.push_back(receiver);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), transmitter), out.end());
  return out;
}

Topology build_topology(TopologyKind kind, int n_pairs)
{
  if (n_pairs < 2)
    throw std::invalid_argument("a topology needs at least two pairs");

  Topology t;
  t.kind = kind;
  t.n_pairs = n_pairs;
  t.interferers.resize(n_pairs);
  t.victims.resize(n_pairs);
  t.sensed.resize(n_pairs);
  for (int j = 1; j < n_pairs; ++j) {
    t.interferers[j].push_back(j - 1);
    t.victims[j - 1].push_back(j);
  }
  if (kind == TopologyKind::Ring) {
    t.interferers[0].push_back(n_pairs - 1);
    t.victims[n_pairs - 1].push_back(0);
  }
  return t;
}

}  // namespace cascade::mac
