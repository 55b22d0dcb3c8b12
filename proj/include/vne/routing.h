#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vne/network.h"

namespace vne {

struct PathQuery {
  NodeId source = 0;
  NodeId target = 0;
  double bw_demand = 0.0;
};

// Residual bandwidth per link index, in SubstrateNetwork::links() order.
// Embedders route several virtual links against one provisional copy.
using LinkResiduals = std::vector<double>;

LinkResiduals residual_bandwidth(const SubstrateNetwork& net);

// Min-hop path over links with residual >= bw_demand; among min-hop paths
// the lexicographically smallest node-id sequence wins. Throws LookupError
// for unknown endpoints and std::invalid_argument when source == target.
std::optional<Path> shortest_feasible_path(const SubstrateNetwork& net,
                                           const PathQuery& q);
std::optional<Path> shortest_feasible_path(const SubstrateNetwork& net,
                                           std::span<const double> residual,
                                           const PathQuery& q);

// Same contract as shortest_feasible_path, computed by a forward
// breadth-first search with ascending-id expansion.
std::optional<Path> bfs_feasible_path(const SubstrateNetwork& net,
                                      const PathQuery& q);
std::optional<Path> bfs_feasible_path(const SubstrateNetwork& net,
                                      std::span<const double> residual,
                                      const PathQuery& q);

// Multipath routing of one demand. If a single feasible path exists it is
// returned alone. Otherwise the greedy rule repeatedly takes the min-hop path
// with positive residual at its bottleneck bandwidth until the demand is
// met; if that greedy pass strands demand that a max-flow could still carry,
// the demand is routed by an augmenting-path flow decomposition instead.
// Returns nullopt iff the demand exceeds the source-target max-flow.
std::optional<std::vector<PathFlow>> split_flow(const SubstrateNetwork& net,
                                                const PathQuery& q);
std::optional<std::vector<PathFlow>> split_flow(
    const SubstrateNetwork& net, std::span<const double> residual,
    const PathQuery& q);

// Subtracts every flow from `residual`.
void consume(const SubstrateNetwork& net, std::span<const PathFlow> flows,
             LinkResiduals& residual);

}  // namespace vne
