#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vne/embedder.h"
#include "vne/network.h"

namespace vne {

// H(n) = residual CPU(n) * sum of residual bandwidth on links adjacent to n,
// one entry per node in index order.
std::vector<double> baseline_scores(const SubstrateNetwork& net);

// Node ids by descending H, ties by ascending id.
std::vector<NodeId> baseline_rank(const SubstrateNetwork& net);

// Greedy: virtual nodes by descending demand onto the highest-H feasible,
// unused substrate node; links by the chosen strategy.
std::optional<Embedding> baseline_embed(
    const SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
    LinkStrategy link = LinkStrategy::kShortest);

struct RankOptions {
  double damping = 0.85;
  double tolerance = 1e-6;  // bound on the L1 distance to the fixed point
  int max_iterations = 1000;
};

// Stationary scores of the damped walk on `adjacency` whose transition from
// u goes to v in N(u) ∪ {u} with probability h(v) / sum of h over that set
// (uniform when the set carries no weight). Sums to 1. Throws
// ConvergenceError when the cap is reached.
std::vector<double> random_walk_rank(
    const std::vector<std::vector<std::size_t>>& adjacency,
    std::span<const double> h, const RankOptions& options = {});

std::vector<double> noderank_scores(const SubstrateNetwork& net,
                                    const RankOptions& options = {});

// Virtual-side scores: same walk on the request graph with demands as
// resources. Indexed like vnr.nodes.
std::vector<double> noderank_scores(const VirtualNetworkRequest& vnr,
                                    const RankOptions& options = {});

// Virtual nodes by descending virtual rank onto the highest-ranked feasible,
// unused substrate node; links on single shortest paths.
std::optional<Embedding> noderank_embed(
    const SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
    LinkStrategy link = LinkStrategy::kShortest);

}  // namespace vne
