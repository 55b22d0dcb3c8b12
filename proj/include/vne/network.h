#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace vne {

using NodeId = int;
using Path = std::vector<NodeId>;

class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Raised by SubstrateNetwork::allocate when an embedding does not fit the
// current residuals. The network is left untouched.
class AllocationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidEmbedding : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Position&) const = default;
};

struct SubstrateNode {
  NodeId id = 0;
  double cpu_capacity = 0.0;
  double cpu_available = 0.0;
  std::optional<Position> position;
  bool operator==(const SubstrateNode&) const = default;
};

// Endpoints are stored with u < v.
struct SubstrateLink {
  NodeId u = 0;
  NodeId v = 0;
  double bw_capacity = 0.0;
  double bw_available = 0.0;
  bool operator==(const SubstrateLink&) const = default;
};

struct VirtualNode {
  NodeId id = 0;
  double cpu = 0.0;
};

// Endpoints are stored with a < b.
struct VirtualLink {
  NodeId a = 0;
  NodeId b = 0;
  double bw = 0.0;
};

struct VirtualNetworkRequest {
  int id = 0;
  double arrival_time = 0.0;
  double lifetime = 1.0;
  std::vector<VirtualNode> nodes;
  std::vector<VirtualLink> links;

  double departure_time() const { return arrival_time + lifetime; }
  const VirtualNode& node(NodeId id) const;

  // Throws std::invalid_argument unless the demand graph is simple,
  // connected, and every demand is positive.
  void validate() const;
};

// Normalized (min, max) virtual endpoint pair.
using VirtualLinkKey = std::pair<NodeId, NodeId>;

inline VirtualLinkKey make_link_key(NodeId a, NodeId b) {
  return a < b ? VirtualLinkKey{a, b} : VirtualLinkKey{b, a};
}

struct PathFlow {
  Path path;
  double bw = 0.0;
  bool operator==(const PathFlow&) const = default;
};

// Node map plus per-virtual-link path assignments. A path stored under key
// (a, b) runs from node_map[a] to node_map[b].
struct Embedding {
  int vnr_id = 0;
  std::map<NodeId, NodeId> node_map;
  std::map<VirtualLinkKey, std::vector<PathFlow>> link_map;
  bool operator==(const Embedding&) const = default;
};

class SubstrateNetwork {
 public:
  struct Adjacent {
    std::size_t node;  // neighbor index
    std::size_t link;  // link index
  };

  // Nodes must all be added before the first link.
  void add_node(NodeId id, double cpu, std::optional<Position> position = {});
  void add_link(NodeId u, NodeId v, double bw);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t link_count() const { return links_.size(); }
  bool empty() const { return nodes_.empty(); }

  // Nodes are kept in ascending id order; indices follow that order.
  std::span<const SubstrateNode> nodes() const { return nodes_; }
  std::span<const SubstrateLink> links() const { return links_; }

  bool has_node(NodeId id) const { return index_.count(id) != 0; }
  std::size_t index_of(NodeId id) const;
  const SubstrateNode& node(NodeId id) const { return nodes_[index_of(id)]; }
  std::optional<std::size_t> link_index(NodeId u, NodeId v) const;

  // Neighbors of the node at `index`, sorted by ascending neighbor id.
  std::span<const Adjacent> adjacent(std::size_t index) const {
    return adjacency_[index];
  }

  // Transactional: either every node and link demand of `emb` fits the
  // current residuals and all are applied, or AllocationError is thrown and
  // nothing changes. Structural problems throw InvalidEmbedding.
  void allocate(const VirtualNetworkRequest& vnr, const Embedding& emb);

  // Whether allocate's resource checks would pass. `emb` must be
  // structurally valid; per-link totals are summed exactly as allocate does.
  bool fits(const VirtualNetworkRequest& vnr, const Embedding& emb) const;

  // Exact inverse of allocate. Throws AllocationError if `vnr_id` is not
  // currently allocated.
  void release(int vnr_id);
  void release(const Embedding& emb) { release(emb.vnr_id); }

  bool is_allocated(int vnr_id) const { return live_.count(vnr_id) != 0; }
  std::vector<int> live_allocations() const;
  const Embedding& allocation(int vnr_id) const;

  // Drops every live allocation and restores full capacity.
  void reset();

  // Largest deviation between (capacity - available) and the flow recomputed
  // from live embeddings, over all nodes and links, each divided by
  // max(1, capacity).
  double audit() const;

  // Hash of the residual state (bit patterns of every available field).
  std::uint64_t state_hash() const;

  // Field-for-field comparison of nodes and links.
  bool same_resources(const SubstrateNetwork& other) const {
    return nodes_ == other.nodes_ && links_ == other.links_;
  }

 private:
  struct Allocation {
    Embedding embedding;
    std::vector<std::pair<std::size_t, double>> node_use;
    std::vector<std::pair<std::size_t, double>> link_use;
  };

  Allocation plan(const VirtualNetworkRequest& vnr, const Embedding& emb) const;
  // Description of the first resource that cannot cover `alloc`.
  std::optional<std::string> shortfall(const Allocation& alloc) const;
  void recompute_node(std::size_t index);
  void recompute_link(std::size_t index);

  std::vector<SubstrateNode> nodes_;
  std::vector<SubstrateLink> links_;
  std::vector<std::vector<Adjacent>> adjacency_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> link_lookup_;

  std::map<int, Allocation> live_;
  // Per-resource usage keyed by request id. Residuals are always recomputed
  // as a fold over these in ascending id order, so the stored value depends
  // only on the set of live allocations.
  std::vector<std::map<int, double>> node_usage_;
  std::vector<std::map<int, double>> link_usage_;
};

// Residual CPU of `sn` covers `demand`.
bool node_feasible(const SubstrateNetwork& net, NodeId sn, double demand);

// Every hop has residual bandwidth >= bw. Throws std::invalid_argument for
// paths with fewer than two nodes; a missing link makes the path infeasible.
bool path_feasible(const SubstrateNetwork& net, const Path& path, double bw);

// Structural checks: complete, injective node map; simple paths over
// existing links between the mapped endpoints; per-link flows summing to the
// demand. Throws InvalidEmbedding describing the first violation.
void validate_embedding(const SubstrateNetwork& net,
                        const VirtualNetworkRequest& vnr,
                        const Embedding& emb);

inline int hop_count(const Path& path) {
  return path.empty() ? 0 : static_cast<int>(path.size()) - 1;
}

}  // namespace vne
