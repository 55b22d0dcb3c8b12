#include "vne/heuristics.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vne/spectral.h"

namespace vne {

namespace {

std::vector<NodeId> rank_by(const SubstrateNetwork& net,
                            const std::vector<double>& score) {
  std::vector<std::size_t> idx(net.node_count());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return score[a] > score[b];
  });
  std::vector<NodeId> ids;
  ids.reserve(idx.size());
  for (std::size_t i : idx) ids.push_back(net.nodes()[i].id);
  return ids;
}

// Maps virtual nodes in `virtual_order` greedily onto the first feasible,
// unused node of `substrate_order`, then routes the links.
std::optional<Embedding> greedy_map(const SubstrateNetwork& net,
                                    const VirtualNetworkRequest& vnr,
                                    const std::vector<NodeId>& virtual_order,
                                    const std::vector<NodeId>& substrate_order,
                                    LinkStrategy link) {
  std::map<NodeId, NodeId> node_map;
  std::vector<bool> used(net.node_count(), false);
  for (NodeId vn : virtual_order) {
    const double demand = vnr.node(vn).cpu;
    bool placed = false;
    for (NodeId sn : substrate_order) {
      const std::size_t si = net.index_of(sn);
      if (!used[si] && node_feasible(net, sn, demand)) {
        used[si] = true;
        node_map[vn] = sn;
        placed = true;
        break;
      }
    }
    if (!placed) return std::nullopt;
  }
  return map_links(net, vnr, node_map, link);
}

}  // namespace

std::vector<double> baseline_scores(const SubstrateNetwork& net) {
  std::vector<double> h(net.node_count(), 0.0);
  const auto links = net.links();
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    double bw = 0.0;
    for (const auto& adj : net.adjacent(i)) bw += links[adj.link].bw_available;
    h[i] = net.nodes()[i].cpu_available * bw;
  }
  return h;
}

std::vector<NodeId> baseline_rank(const SubstrateNetwork& net) {
  return rank_by(net, baseline_scores(net));
}

std::optional<Embedding> baseline_embed(const SubstrateNetwork& net,
                                        const VirtualNetworkRequest& vnr,
                                        LinkStrategy link) {
  auto emb = greedy_map(net, vnr, demand_order(vnr), baseline_rank(net), link);
  if (emb) emb->vnr_id = vnr.id;
  return emb;
}

std::vector<double> random_walk_rank(
    const std::vector<std::vector<std::size_t>>& adjacency,
    std::span<const double> h, const RankOptions& options) {
  const std::size_t n = adjacency.size();
  if (n == 0) throw std::invalid_argument("random_walk_rank: empty graph");
  if (h.size() != n) throw std::invalid_argument("random_walk_rank: size");
  std::vector<double> score(n, 1.0 / static_cast<double>(n));
  const double teleport = (1.0 - options.damping) / static_cast<double>(n);
  // The damped map contracts by d in L1, so the distance to the fixed point
  // is at most change * d / (1 - d).
  const double bound_factor =
      options.damping < 1.0 ? options.damping / (1.0 - options.damping) : 1.0;
  double change = 0.0;
  for (int it = 0; it < options.max_iterations; ++it) {
    std::vector<double> next(n, teleport);
    for (std::size_t u = 0; u < n; ++u) {
      double total = h[u];
      for (std::size_t v : adjacency[u]) total += h[v];
      const double share = options.damping * score[u];
      const double count = static_cast<double>(adjacency[u].size() + 1);
      auto weight = [&](std::size_t v) {
        return total > 0.0 ? h[v] / total : 1.0 / count;
      };
      next[u] += share * weight(u);
      for (std::size_t v : adjacency[u]) next[v] += share * weight(v);
    }
    change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change += std::abs(next[i] - score[i]);
    score = std::move(next);
    if (change * bound_factor < options.tolerance) {
      // Renormalize away rounding drift.
      const double sum = std::accumulate(score.begin(), score.end(), 0.0);
      for (auto& s : score) s /= sum;
      return score;
    }
  }
  throw ConvergenceError("random_walk_rank: no convergence", change);
}

std::vector<double> noderank_scores(const SubstrateNetwork& net,
                                    const RankOptions& options) {
  std::vector<std::vector<std::size_t>> adjacency(net.node_count());
  for (std::size_t i = 0; i < net.node_count(); ++i) {
    for (const auto& adj : net.adjacent(i)) adjacency[i].push_back(adj.node);
  }
  return random_walk_rank(adjacency, baseline_scores(net), options);
}

std::vector<double> noderank_scores(const VirtualNetworkRequest& vnr,
                                    const RankOptions& options) {
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < vnr.nodes.size(); ++i) index[vnr.nodes[i].id] = i;
  std::vector<std::vector<std::size_t>> adjacency(vnr.nodes.size());
  std::vector<double> bw(vnr.nodes.size(), 0.0);
  for (const auto& l : vnr.links) {
    const std::size_t a = index.at(l.a), b = index.at(l.b);
    adjacency[a].push_back(b);
    adjacency[b].push_back(a);
    bw[a] += l.bw;
    bw[b] += l.bw;
  }
  std::vector<double> h(vnr.nodes.size());
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = vnr.nodes[i].cpu * bw[i];
  return random_walk_rank(adjacency, h, options);
}

std::optional<Embedding> noderank_embed(const SubstrateNetwork& net,
                                        const VirtualNetworkRequest& vnr,
                                        LinkStrategy link) {
  const auto substrate_scores = noderank_scores(net);
  const auto virtual_scores = noderank_scores(vnr);
  std::vector<std::size_t> idx(vnr.nodes.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (virtual_scores[a] != virtual_scores[b]) {
      return virtual_scores[a] > virtual_scores[b];
    }
    if (vnr.nodes[a].cpu != vnr.nodes[b].cpu) {
      return vnr.nodes[a].cpu > vnr.nodes[b].cpu;
    }
    return vnr.nodes[a].id < vnr.nodes[b].id;
  });
  std::vector<NodeId> virtual_order;
  for (std::size_t i : idx) virtual_order.push_back(vnr.nodes[i].id);
  auto emb = greedy_map(net, vnr, virtual_order,
                        rank_by(net, substrate_scores), link);
  if (emb) emb->vnr_id = vnr.id;
  return emb;
}

}  // namespace vne
