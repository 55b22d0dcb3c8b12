#include "vne/routing.h"

#include <algorithm>
#include <deque>
#include <limits>
#include <stdexcept>

namespace vne {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Demand below this fraction of the query is treated as fully routed.
constexpr double kFlowEpsilon = 1e-12;

void check_query(const SubstrateNetwork& net, const PathQuery& q) {
  net.index_of(q.source);
  net.index_of(q.target);
  if (q.source == q.target) {
    throw std::invalid_argument("path query with identical endpoints");
  }
}

// Hop distances to `target` over links accepted by `usable`.
template <typename Usable>
std::vector<std::size_t> distances_to(const SubstrateNetwork& net,
                                      std::size_t target, Usable usable) {
  std::vector<std::size_t> dist(net.node_count(), kNone);
  std::deque<std::size_t> queue{target};
  dist[target] = 0;
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& adj : net.adjacent(u)) {
      if (dist[adj.node] == kNone && usable(adj.link)) {
        dist[adj.node] = dist[u] + 1;
        queue.push_back(adj.node);
      }
    }
  }
  return dist;
}

// Lexicographically smallest min-hop path: walk from the source, always
// stepping to the smallest-id neighbor one hop closer to the target.
template <typename Usable>
std::optional<Path> min_hop_path(const SubstrateNetwork& net, std::size_t s,
                                 std::size_t t, Usable usable) {
  const auto dist = distances_to(net, t, usable);
  if (dist[s] == kNone) return std::nullopt;
  Path path{net.nodes()[s].id};
  std::size_t cur = s;
  while (cur != t) {
    std::size_t next = kNone;
    for (const auto& adj : net.adjacent(cur)) {
      if (usable(adj.link) && dist[adj.node] + 1 == dist[cur]) {
        next = adj.node;
        break;
      }
    }
    cur = next;
    path.push_back(net.nodes()[cur].id);
  }
  return path;
}

std::vector<std::size_t> path_links(const SubstrateNetwork& net,
                                    const Path& path) {
  std::vector<std::size_t> links;
  for (std::size_t h = 0; h + 1 < path.size(); ++h) {
    links.push_back(*net.link_index(path[h], path[h + 1]));
  }
  return links;
}

// Greedy bottleneck splitting. Returns nullopt if it strands demand.
std::optional<std::vector<PathFlow>> greedy_split(
    const SubstrateNetwork& net, std::span<const double> residual,
    std::size_t s, std::size_t t, double demand) {
  const double eps = kFlowEpsilon * std::max(1.0, demand);
  LinkResiduals left(residual.begin(), residual.end());
  std::vector<PathFlow> flows;
  double remaining = demand;
  while (remaining > eps) {
    auto path = min_hop_path(net, s, t,
                             [&](std::size_t li) { return left[li] > eps; });
    if (!path) return std::nullopt;
    const auto links = path_links(net, *path);
    double bottleneck = std::numeric_limits<double>::infinity();
    for (std::size_t li : links) bottleneck = std::min(bottleneck, left[li]);
    const double amount = std::min(bottleneck, remaining);
    for (std::size_t li : links) left[li] -= amount;
    remaining -= amount;
    flows.push_back(PathFlow{std::move(*path), amount});
  }
  return flows;
}

// Edmonds-Karp on the undirected residual graph, stopped at `demand`, then
// decomposed into simple source-target paths.
std::optional<std::vector<PathFlow>> max_flow_split(
    const SubstrateNetwork& net, std::span<const double> residual,
    std::size_t s, std::size_t t, double demand) {
  const double eps = kFlowEpsilon * std::max(1.0, demand);
  const auto links = net.links();
  // Signed flow per link, positive in the direction of the lower index.
  std::vector<double> flow(links.size(), 0.0);
  auto lower = [&](std::size_t li) { return net.index_of(links[li].u); };
  auto capacity_from = [&](std::size_t li, std::size_t from) {
    return from == lower(li) ? residual[li] - flow[li]
                             : residual[li] + flow[li];
  };

  double remaining = demand;
  while (remaining > eps) {
    std::vector<std::size_t> parent_link(net.node_count(), kNone);
    std::vector<std::size_t> parent(net.node_count(), kNone);
    std::deque<std::size_t> queue{s};
    parent[s] = s;
    while (!queue.empty() && parent[t] == kNone) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (const auto& adj : net.adjacent(u)) {
        if (parent[adj.node] == kNone && capacity_from(adj.link, u) > eps) {
          parent[adj.node] = u;
          parent_link[adj.node] = adj.link;
          queue.push_back(adj.node);
        }
      }
    }
    if (parent[t] == kNone) return std::nullopt;
    double bottleneck = remaining;
    for (std::size_t v = t; v != s; v = parent[v]) {
      bottleneck =
          std::min(bottleneck, capacity_from(parent_link[v], parent[v]));
    }
    for (std::size_t v = t; v != s; v = parent[v]) {
      const std::size_t li = parent_link[v];
      flow[li] += parent[v] == lower(li) ? bottleneck : -bottleneck;
    }
    remaining -= bottleneck;
  }

  std::vector<PathFlow> flows;
  double left = demand;
  while (left > eps) {
    std::vector<std::size_t> parent(net.node_count(), kNone);
    std::vector<std::size_t> parent_link(net.node_count(), kNone);
    std::deque<std::size_t> queue{s};
    parent[s] = s;
    auto forward = [&](std::size_t li, std::size_t from) {
      return from == lower(li) ? flow[li] : -flow[li];
    };
    while (!queue.empty() && parent[t] == kNone) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (const auto& adj : net.adjacent(u)) {
        if (parent[adj.node] == kNone && forward(adj.link, u) > eps) {
          parent[adj.node] = u;
          parent_link[adj.node] = adj.link;
          queue.push_back(adj.node);
        }
      }
    }
    if (parent[t] == kNone) break;
    double amount = left;
    Path reversed;
    for (std::size_t v = t; v != s; v = parent[v]) {
      amount = std::min(amount, forward(parent_link[v], parent[v]));
      reversed.push_back(net.nodes()[v].id);
    }
    reversed.push_back(net.nodes()[s].id);
    for (std::size_t v = t; v != s; v = parent[v]) {
      const std::size_t li = parent_link[v];
      flow[li] -= parent[v] == lower(li) ? amount : -amount;
    }
    left -= amount;
    flows.push_back(PathFlow{Path(reversed.rbegin(), reversed.rend()), amount});
  }
  if (left > eps) return std::nullopt;
  return flows;
}

}  // namespace

LinkResiduals residual_bandwidth(const SubstrateNetwork& net) {
  LinkResiduals residual;
  residual.reserve(net.link_count());
  for (const auto& l : net.links()) residual.push_back(l.bw_available);
  return residual;
}

std::optional<Path> shortest_feasible_path(const SubstrateNetwork& net,
                                           const PathQuery& q) {
  return shortest_feasible_path(net, residual_bandwidth(net), q);
}

std::optional<Path> shortest_feasible_path(const SubstrateNetwork& net,
                                           std::span<const double> residual,
                                           const PathQuery& q) {
  check_query(net, q);
  return min_hop_path(
      net, net.index_of(q.source), net.index_of(q.target),
      [&](std::size_t li) { return residual[li] >= q.bw_demand; });
}

std::optional<Path> bfs_feasible_path(const SubstrateNetwork& net,
                                      const PathQuery& q) {
  return bfs_feasible_path(net, residual_bandwidth(net), q);
}

std::optional<Path> bfs_feasible_path(const SubstrateNetwork& net,
                                      std::span<const double> residual,
                                      const PathQuery& q) {
  check_query(net, q);
  const std::size_t s = net.index_of(q.source);
  const std::size_t t = net.index_of(q.target);
  // FIFO order with ascending-id expansion keeps the queue sorted by the
  // lexicographic order of discovery paths, so first discovery wins ties.
  std::vector<std::size_t> parent(net.node_count(), kNone);
  std::deque<std::size_t> queue{s};
  parent[s] = s;
  while (!queue.empty() && parent[t] == kNone) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (const auto& adj : net.adjacent(u)) {
      if (parent[adj.node] == kNone && residual[adj.link] >= q.bw_demand) {
        parent[adj.node] = u;
        queue.push_back(adj.node);
      }
    }
  }
  if (parent[t] == kNone) return std::nullopt;
  Path path;
  for (std::size_t v = t; v != s; v = parent[v]) {
    path.push_back(net.nodes()[v].id);
  }
  path.push_back(q.source);
  std::reverse(path.begin(), path.end());
  return path;
}

std::optional<std::vector<PathFlow>> split_flow(const SubstrateNetwork& net,
                                                const PathQuery& q) {
  return split_flow(net, residual_bandwidth(net), q);
}

std::optional<std::vector<PathFlow>> split_flow(
    const SubstrateNetwork& net, std::span<const double> residual,
    const PathQuery& q) {
  if (auto single = shortest_feasible_path(net, residual, q)) {
    return std::vector<PathFlow>{PathFlow{std::move(*single), q.bw_demand}};
  }
  const std::size_t s = net.index_of(q.source);
  const std::size_t t = net.index_of(q.target);
  if (auto greedy = greedy_split(net, residual, s, t, q.bw_demand)) {
    return greedy;
  }
  return max_flow_split(net, residual, s, t, q.bw_demand);
}

void consume(const SubstrateNetwork& net, std::span<const PathFlow> flows,
             LinkResiduals& residual) {
  for (const auto& flow : flows) {
    for (std::size_t h = 0; h + 1 < flow.path.size(); ++h) {
      residual[*net.link_index(flow.path[h], flow.path[h + 1])] -= flow.bw;
    }
  }
}

}  // namespace vne
