#pragma once

#include <initializer_list>
#include <tuple>
#include <vector>

#include "vne/network.h"

namespace fixture {

using vne::NodeId;

// Nodes 0..n-1 with the given CPU, links as (u, v, bw).
inline vne::SubstrateNetwork substrate(
    std::initializer_list<double> cpu,
    std::initializer_list<std::tuple<NodeId, NodeId, double>> links) {
  vne::SubstrateNetwork net;
  NodeId id = 0;
  for (double c : cpu) net.add_node(id++, c);
  for (const auto& [u, v, bw] : links) net.add_link(u, v, bw);
  return net;
}

inline vne::VirtualNetworkRequest request(
    int id, std::initializer_list<double> cpu,
    std::initializer_list<std::tuple<NodeId, NodeId, double>> links,
    double arrival = 0.0, double lifetime = 10.0) {
  vne::VirtualNetworkRequest vnr;
  vnr.id = id;
  vnr.arrival_time = arrival;
  vnr.lifetime = lifetime;
  NodeId n = 0;
  for (double c : cpu) vnr.nodes.push_back({n++, c});
  for (const auto& [a, b, bw] : links) vnr.links.push_back({a, b, bw});
  return vnr;
}

// Chain 0-1-2 with uniform capacities.
inline vne::SubstrateNetwork chain3(double cpu = 100, double bw = 50) {
  return substrate({cpu, cpu, cpu}, {{0, 1, bw}, {1, 2, bw}});
}

}  // namespace fixture
