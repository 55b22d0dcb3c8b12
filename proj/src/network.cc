#include "vne/network.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace vne {

namespace {

// Relative tolerance for "allocated bandwidth sums to the demand".
constexpr double kFlowSumTolerance = 1e-9;

std::string node_str(NodeId id) { return std::to_string(id); }

}  // namespace

const VirtualNode& VirtualNetworkRequest::node(NodeId node_id) const {
  for (const auto& n : nodes) {
    if (n.id == node_id) return n;
  }
  throw LookupError("request " + std::to_string(id) + " has no virtual node " +
                    node_str(node_id));
}

void VirtualNetworkRequest::validate() const {
  const std::string where = "request " + std::to_string(id) + ": ";
  if (nodes.empty()) throw std::invalid_argument(where + "no virtual nodes");
  if (!(lifetime > 0.0)) throw std::invalid_argument(where + "lifetime <= 0");
  if (!(arrival_time >= 0.0)) {
    throw std::invalid_argument(where + "negative arrival time");
  }
  std::map<NodeId, std::size_t> index;
  for (const auto& n : nodes) {
    if (!(n.cpu > 0.0)) {
      throw std::invalid_argument(where + "non-positive cpu demand on node " +
                                  node_str(n.id));
    }
    if (!index.emplace(n.id, index.size()).second) {
      throw std::invalid_argument(where + "duplicate node " + node_str(n.id));
    }
  }
  std::vector<std::vector<std::size_t>> adj(nodes.size());
  std::set<VirtualLinkKey> seen;
  for (const auto& l : links) {
    if (l.a == l.b) {
      throw std::invalid_argument(where + "self-loop on " + node_str(l.a));
    }
    if (!(l.bw > 0.0)) {
      throw std::invalid_argument(where + "non-positive bandwidth demand");
    }
    auto ia = index.find(l.a);
    auto ib = index.find(l.b);
    if (ia == index.end() || ib == index.end()) {
      throw std::invalid_argument(where + "link endpoint not a virtual node");
    }
    if (!seen.insert(make_link_key(l.a, l.b)).second) {
      throw std::invalid_argument(where + "parallel virtual links");
    }
    adj[ia->second].push_back(ib->second);
    adj[ib->second].push_back(ia->second);
  }
  std::vector<bool> reached(nodes.size(), false);
  std::vector<std::size_t> stack{0};
  reached[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (std::size_t v : adj[u]) {
      if (!reached[v]) {
        reached[v] = true;
        ++count;
        stack.push_back(v);
      }
    }
  }
  if (count != nodes.size()) {
    throw std::invalid_argument(where + "demand graph is disconnected");
  }
}

void SubstrateNetwork::add_node(NodeId id, double cpu,
                                std::optional<Position> position) {
  if (!links_.empty()) {
    throw std::logic_error("add_node after links were added");
  }
  if (has_node(id)) {
    throw std::invalid_argument("duplicate substrate node " + node_str(id));
  }
  if (!(cpu >= 0.0) || !std::isfinite(cpu)) {
    throw std::invalid_argument("invalid cpu capacity on node " + node_str(id));
  }
  SubstrateNode node{id, cpu, cpu, position};
  auto pos = std::lower_bound(
      nodes_.begin(), nodes_.end(), id,
      [](const SubstrateNode& n, NodeId value) { return n.id < value; });
  nodes_.insert(pos, node);
  index_.clear();
  for (std::size_t i = 0; i < nodes_.size(); ++i) index_[nodes_[i].id] = i;
  adjacency_.assign(nodes_.size(), {});
  node_usage_.assign(nodes_.size(), {});
}

void SubstrateNetwork::add_link(NodeId u, NodeId v, double bw) {
  if (u == v) throw std::invalid_argument("self-loop on node " + node_str(u));
  if (!(bw >= 0.0) || !std::isfinite(bw)) {
    throw std::invalid_argument("invalid bandwidth capacity");
  }
  if (u > v) std::swap(u, v);
  std::size_t iu = index_of(u);
  std::size_t iv = index_of(v);
  if (link_lookup_.count({iu, iv})) {
    throw std::invalid_argument("parallel link " + node_str(u) + "-" +
                                node_str(v));
  }
  std::size_t li = links_.size();
  links_.push_back(SubstrateLink{u, v, bw, bw});
  link_usage_.emplace_back();
  link_lookup_[{iu, iv}] = li;
  auto insert_sorted = [&](std::size_t at, std::size_t nbr) {
    auto& list = adjacency_[at];
    auto pos = std::lower_bound(
        list.begin(), list.end(), nbr,
        [](const Adjacent& a, std::size_t value) { return a.node < value; });
    list.insert(pos, Adjacent{nbr, li});
  };
  // Indices follow ascending id, so sorting by index sorts by id.
  insert_sorted(iu, iv);
  insert_sorted(iv, iu);
}

std::size_t SubstrateNetwork::index_of(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw LookupError("unknown substrate node " + node_str(id));
  }
  return it->second;
}

std::optional<std::size_t> SubstrateNetwork::link_index(NodeId u,
                                                        NodeId v) const {
  auto iu = index_.find(u);
  auto iv = index_.find(v);
  if (iu == index_.end() || iv == index_.end()) return std::nullopt;
  std::size_t a = std::min(iu->second, iv->second);
  std::size_t b = std::max(iu->second, iv->second);
  auto it = link_lookup_.find({a, b});
  if (it == link_lookup_.end()) return std::nullopt;
  return it->second;
}

void SubstrateNetwork::allocate(const VirtualNetworkRequest& vnr,
                                const Embedding& emb) {
  if (emb.vnr_id != vnr.id) {
    throw InvalidEmbedding("embedding is for request " +
                           std::to_string(emb.vnr_id) + ", not " +
                           std::to_string(vnr.id));
  }
  if (is_allocated(emb.vnr_id)) {
    throw AllocationError("request " + std::to_string(emb.vnr_id) +
                          " is already allocated");
  }
  validate_embedding(*this, vnr, emb);

  Allocation alloc = plan(vnr, emb);
  if (auto missing = shortfall(alloc)) {
    throw AllocationError(*missing + " for request " +
                          std::to_string(emb.vnr_id));
  }

  for (const auto& [ni, demand] : alloc.node_use) {
    node_usage_[ni][emb.vnr_id] = demand;
    recompute_node(ni);
  }
  for (const auto& [li, demand] : alloc.link_use) {
    link_usage_[li][emb.vnr_id] = demand;
    recompute_link(li);
  }
  live_.emplace(emb.vnr_id, std::move(alloc));
}

bool SubstrateNetwork::fits(const VirtualNetworkRequest& vnr,
                            const Embedding& emb) const {
  return !shortfall(plan(vnr, emb));
}

SubstrateNetwork::Allocation SubstrateNetwork::plan(
    const VirtualNetworkRequest& vnr, const Embedding& emb) const {
  Allocation alloc;
  alloc.embedding = emb;
  for (const auto& vn : vnr.nodes) {
    alloc.node_use.emplace_back(index_of(emb.node_map.at(vn.id)), vn.cpu);
  }
  std::map<std::size_t, double> link_total;
  for (const auto& [key, flows] : emb.link_map) {
    for (const auto& flow : flows) {
      for (std::size_t h = 0; h + 1 < flow.path.size(); ++h) {
        link_total[*link_index(flow.path[h], flow.path[h + 1])] += flow.bw;
      }
    }
  }
  alloc.link_use.assign(link_total.begin(), link_total.end());
  return alloc;
}

std::optional<std::string> SubstrateNetwork::shortfall(
    const Allocation& alloc) const {
  for (const auto& [ni, demand] : alloc.node_use) {
    if (nodes_[ni].cpu_available < demand) {
      return "node " + node_str(nodes_[ni].id) + " lacks cpu";
    }
  }
  for (const auto& [li, demand] : alloc.link_use) {
    if (links_[li].bw_available < demand) {
      return "link " + node_str(links_[li].u) + "-" + node_str(links_[li].v) +
             " lacks bandwidth";
    }
  }
  return std::nullopt;
}

void SubstrateNetwork::release(int vnr_id) {
  auto it = live_.find(vnr_id);
  if (it == live_.end()) {
    throw AllocationError("request " + std::to_string(vnr_id) +
                          " is not allocated");
  }
  for (const auto& [ni, demand] : it->second.node_use) {
    node_usage_[ni].erase(vnr_id);
    recompute_node(ni);
  }
  for (const auto& [li, demand] : it->second.link_use) {
    link_usage_[li].erase(vnr_id);
    recompute_link(li);
  }
  live_.erase(it);
}

std::vector<int> SubstrateNetwork::live_allocations() const {
  std::vector<int> ids;
  ids.reserve(live_.size());
  for (const auto& [id, alloc] : live_) ids.push_back(id);
  return ids;
}

const Embedding& SubstrateNetwork::allocation(int vnr_id) const {
  auto it = live_.find(vnr_id);
  if (it == live_.end()) {
    throw LookupError("request " + std::to_string(vnr_id) +
                      " is not allocated");
  }
  return it->second.embedding;
}

void SubstrateNetwork::reset() {
  live_.clear();
  for (auto& u : node_usage_) u.clear();
  for (auto& u : link_usage_) u.clear();
  for (auto& n : nodes_) n.cpu_available = n.cpu_capacity;
  for (auto& l : links_) l.bw_available = l.bw_capacity;
}

void SubstrateNetwork::recompute_node(std::size_t index) {
  double avail = nodes_[index].cpu_capacity;
  for (const auto& [id, amount] : node_usage_[index]) avail -= amount;
  nodes_[index].cpu_available = std::max(avail, 0.0);
}

void SubstrateNetwork::recompute_link(std::size_t index) {
  double avail = links_[index].bw_capacity;
  for (const auto& [id, amount] : link_usage_[index]) avail -= amount;
  links_[index].bw_available = std::max(avail, 0.0);
}

double SubstrateNetwork::audit() const {
  std::vector<double> node_flow(nodes_.size(), 0.0);
  std::vector<double> link_flow(links_.size(), 0.0);
  for (const auto& [id, alloc] : live_) {
    for (const auto& [ni, demand] : alloc.node_use) node_flow[ni] += demand;
    for (const auto& [key, flows] : alloc.embedding.link_map) {
      for (const auto& flow : flows) {
        for (std::size_t h = 0; h + 1 < flow.path.size(); ++h) {
          link_flow[*link_index(flow.path[h], flow.path[h + 1])] += flow.bw;
        }
      }
    }
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    worst = std::max(worst, std::abs((n.cpu_capacity - n.cpu_available) -
                                     node_flow[i]) /
                                std::max(1.0, n.cpu_capacity));
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const auto& l = links_[i];
    worst = std::max(worst, std::abs((l.bw_capacity - l.bw_available) -
                                     link_flow[i]) /
                                std::max(1.0, l.bw_capacity));
  }
  return worst;
}

std::uint64_t SubstrateNetwork::state_hash() const {
  // FNV-1a over the residual bit patterns.
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](double value) {
    auto bits = std::bit_cast<std::uint64_t>(value);
    for (int i = 0; i < 8; ++i) {
      h ^= (bits >> (8 * i)) & 0xffu;
      h *= 1099511628211ull;
    }
  };
  for (const auto& n : nodes_) mix(n.cpu_available);
  for (const auto& l : links_) mix(l.bw_available);
  return h;
}

bool node_feasible(const SubstrateNetwork& net, NodeId sn, double demand) {
  return net.node(sn).cpu_available >= demand;
}

bool path_feasible(const SubstrateNetwork& net, const Path& path, double bw) {
  if (path.size() < 2) {
    throw std::invalid_argument("path needs at least two nodes");
  }
  for (std::size_t h = 0; h + 1 < path.size(); ++h) {
    auto li = net.link_index(path[h], path[h + 1]);
    if (!li || net.links()[*li].bw_available < bw) return false;
  }
  return true;
}

void validate_embedding(const SubstrateNetwork& net,
                        const VirtualNetworkRequest& vnr,
                        const Embedding& emb) {
  const std::string where = "embedding of request " +
                            std::to_string(vnr.id) + ": ";
  if (emb.node_map.size() != vnr.nodes.size()) {
    throw InvalidEmbedding(where + "node map does not cover the request");
  }
  std::set<NodeId> used;
  for (const auto& vn : vnr.nodes) {
    auto it = emb.node_map.find(vn.id);
    if (it == emb.node_map.end()) {
      throw InvalidEmbedding(where + "virtual node " + node_str(vn.id) +
                             " unmapped");
    }
    if (!net.has_node(it->second)) {
      throw InvalidEmbedding(where + "unknown substrate node " +
                             node_str(it->second));
    }
    if (!used.insert(it->second).second) {
      throw InvalidEmbedding(where + "node map is not injective");
    }
  }
  if (emb.link_map.size() != vnr.links.size()) {
    throw InvalidEmbedding(where + "link map does not match request links");
  }
  for (const auto& vl : vnr.links) {
    const auto key = make_link_key(vl.a, vl.b);
    auto it = emb.link_map.find(key);
    if (it == emb.link_map.end() || it->second.empty()) {
      throw InvalidEmbedding(where + "virtual link " + node_str(key.first) +
                             "-" + node_str(key.second) + " unmapped");
    }
    const NodeId from = emb.node_map.at(key.first);
    const NodeId to = emb.node_map.at(key.second);
    double total = 0.0;
    for (const auto& flow : it->second) {
      if (flow.path.size() < 2 || flow.path.front() != from ||
          flow.path.back() != to) {
        throw InvalidEmbedding(where + "path endpoints do not match mapping");
      }
      if (!(flow.bw > 0.0)) {
        throw InvalidEmbedding(where + "non-positive path bandwidth");
      }
      std::set<NodeId> visited(flow.path.begin(), flow.path.end());
      if (visited.size() != flow.path.size()) {
        throw InvalidEmbedding(where + "path repeats a node");
      }
      for (std::size_t h = 0; h + 1 < flow.path.size(); ++h) {
        if (!net.link_index(flow.path[h], flow.path[h + 1])) {
          throw InvalidEmbedding(where + "path uses missing link " +
                                 node_str(flow.path[h]) + "-" +
                                 node_str(flow.path[h + 1]));
        }
      }
      total += flow.bw;
    }
    if (std::abs(total - vl.bw) > kFlowSumTolerance * std::max(1.0, vl.bw)) {
      throw InvalidEmbedding(where + "path bandwidths do not sum to demand");
    }
  }
}

}  // namespace vne
