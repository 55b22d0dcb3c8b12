#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "vne/dense.h"
#include "vne/features.h"
#include "vne/network.h"
#include "vne/parameters.h"
#include "vne/routing.h"
#include "vne/scenario.h"

namespace vne {

enum class Algorithm { kBaseline, kNodeRank, kPolicy, kPointer };
enum class LinkStrategy { kShortest, kBfs, kSplit };
enum class DecodeMode { kSample, kGreedy };

// Accepts "baseline", "noderank", "rl" (or "policy") and "pointer".
Algorithm parse_algorithm(const std::string& text);
std::string to_string(Algorithm algorithm);
LinkStrategy parse_link_strategy(const std::string& text);
std::string to_string(LinkStrategy strategy);

struct EmbedderConfig {
  Algorithm algorithm = Algorithm::kBaseline;
  LinkStrategy link = LinkStrategy::kShortest;
  FeatureSource features = FeatureSource::kRaw;
  AgentConfig agent;
  std::uint64_t seed = 1;
};

// Default link strategy per algorithm: BFS for the policy agent, shortest
// path for the rest; agent_split switches the learning agents to splitting.
LinkStrategy default_link_strategy(Algorithm algorithm, const AgentConfig& agent);

using Rng = std::mt19937_64;

// One node-mapping decision.
struct Decision {
  NodeId virtual_node = 0;
  std::vector<bool> mask;  // indexed by substrate node index
  Vector probabilities;
  std::size_t chosen = 0;  // substrate node index
  Vector context;          // per-step network input besides node features
};

struct EpisodeTrace {
  std::vector<Decision> decisions;
  // Node-feature rows the agent saw, one per substrate node.
  Matrix inputs;
  std::optional<Embedding> embedding;
  std::string failure;  // empty on success
  int total_hops = 0;
  double reward = 0.0;

  std::vector<ActionRecord> action_records() const;
};

// Line-oriented debug dump.
void write_trace(std::ostream& out, const EpisodeTrace& trace);

// Virtual nodes in descending CPU demand, ties by ascending id.
std::vector<NodeId> demand_order(const VirtualNetworkRequest& vnr);

// Routes every virtual link of `vnr` for the given node map against a
// provisional copy of the residuals, in descending bandwidth order. Returns
// nullopt as soon as one link cannot be routed, or when the per-link totals
// would fail SubstrateNetwork::fits. `hops` receives the summed
// hop count over all paths.
std::optional<Embedding> map_links(const SubstrateNetwork& net,
                                   const VirtualNetworkRequest& vnr,
                                   const std::map<NodeId, NodeId>& node_map,
                                   LinkStrategy strategy, int* hops = nullptr);

// Picks an index from `probs`, never one with zero probability.
std::size_t sample_index(const Vector& probs, Rng& rng);
std::size_t argmax_index(const Vector& probs);

// Online embedding algorithm driven by the simulator.
class Embedder {
 public:
  virtual ~Embedder() = default;
  // Must not modify `net`; the caller allocates a returned embedding.
  virtual std::optional<Embedding> embed(const SubstrateNetwork& net,
                                         const VirtualNetworkRequest& vnr) = 0;
  // Feature pipeline of learning agents; null for heuristics.
  virtual const FeatureTracker* features() const { return nullptr; }
};

// Learning agents require `params`; heuristics ignore it.
std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config,
                                        std::optional<Parameters> params = {});

// Fresh, seeded parameters of the right layout for the agent.
Parameters initial_parameters(const EmbedderConfig& config);

}  // namespace vne
