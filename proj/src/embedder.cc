#include "vne/embedder.h"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "vne/heuristics.h"
#include "vne/network_io.h"
#include "vne/pointer_agent.h"
#include "vne/policy_agent.h"

namespace vne {

Algorithm parse_algorithm(const std::string& text) {
  if (text == "baseline") return Algorithm::kBaseline;
  if (text == "noderank") return Algorithm::kNodeRank;
  if (text == "rl" || text == "policy") return Algorithm::kPolicy;
  if (text == "pointer") return Algorithm::kPointer;
  throw std::invalid_argument("unknown algorithm '" + text + "'");
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kBaseline: return "baseline";
    case Algorithm::kNodeRank: return "noderank";
    case Algorithm::kPolicy: return "rl";
    case Algorithm::kPointer: return "pointer";
  }
  return "?";
}

LinkStrategy parse_link_strategy(const std::string& text) {
  if (text == "shortest") return LinkStrategy::kShortest;
  if (text == "bfs") return LinkStrategy::kBfs;
  if (text == "split") return LinkStrategy::kSplit;
  throw std::invalid_argument("unknown link strategy '" + text + "'");
}

std::string to_string(LinkStrategy strategy) {
  switch (strategy) {
    case LinkStrategy::kShortest: return "shortest";
    case LinkStrategy::kBfs: return "bfs";
    case LinkStrategy::kSplit: return "split";
  }
  return "?";
}

LinkStrategy default_link_strategy(Algorithm algorithm,
                                   const AgentConfig& agent) {
  const bool learning =
      algorithm == Algorithm::kPolicy || algorithm == Algorithm::kPointer;
  if (learning && agent.agent_split) return LinkStrategy::kSplit;
  return algorithm == Algorithm::kPolicy ? LinkStrategy::kBfs
                                         : LinkStrategy::kShortest;
}

std::vector<ActionRecord> EpisodeTrace::action_records() const {
  std::vector<ActionRecord> out;
  out.reserve(decisions.size());
  for (const auto& d : decisions) {
    out.push_back({d.mask, d.probabilities, d.chosen});
  }
  return out;
}

void write_trace(std::ostream& out, const EpisodeTrace& trace) {
  for (std::size_t t = 0; t < trace.decisions.size(); ++t) {
    const Decision& d = trace.decisions[t];
    out << "STEP " << t << " vnode " << d.virtual_node << " chosen "
        << d.chosen << "\n  probs";
    for (std::size_t i = 0; i < d.probabilities.size(); ++i) {
      out << ' ' << (d.mask[i] ? format_real(d.probabilities[i]) : "-");
    }
    out << '\n';
  }
  if (trace.embedding) {
    out << "EMBEDDED hops " << trace.total_hops;
    for (const auto& [vn, sn] : trace.embedding->node_map) {
      out << ' ' << vn << "->" << sn;
    }
    out << '\n';
  } else {
    out << "FAILED " << trace.failure << '\n';
  }
  out << "REWARD " << format_real(trace.reward) << '\n';
}

std::vector<NodeId> demand_order(const VirtualNetworkRequest& vnr) {
  std::vector<const VirtualNode*> nodes;
  for (const auto& n : vnr.nodes) nodes.push_back(&n);
  std::stable_sort(nodes.begin(), nodes.end(),
                   [](const VirtualNode* a, const VirtualNode* b) {
                     if (a->cpu != b->cpu) return a->cpu > b->cpu;
                     return a->id < b->id;
                   });
  std::vector<NodeId> order;
  for (const auto* n : nodes) order.push_back(n->id);
  return order;
}

std::optional<Embedding> map_links(const SubstrateNetwork& net,
                                   const VirtualNetworkRequest& vnr,
                                   const std::map<NodeId, NodeId>& node_map,
                                   LinkStrategy strategy, int* hops) {
  std::vector<const VirtualLink*> order;
  for (const auto& l : vnr.links) order.push_back(&l);
  std::stable_sort(order.begin(), order.end(),
                   [](const VirtualLink* a, const VirtualLink* b) {
                     return a->bw > b->bw;
                   });
  LinkResiduals residual = residual_bandwidth(net);
  Embedding emb;
  emb.vnr_id = vnr.id;
  emb.node_map = node_map;
  int total_hops = 0;
  for (const VirtualLink* l : order) {
    const PathQuery q{node_map.at(l->a), node_map.at(l->b), l->bw};
    std::vector<PathFlow> flows;
    if (strategy == LinkStrategy::kSplit) {
      auto split = split_flow(net, residual, q);
      if (!split) return std::nullopt;
      flows = std::move(*split);
    } else {
      auto path = strategy == LinkStrategy::kBfs
                      ? bfs_feasible_path(net, residual, q)
                      : shortest_feasible_path(net, residual, q);
      if (!path) return std::nullopt;
      flows.push_back({std::move(*path), l->bw});
    }
    consume(net, flows, residual);
    for (const auto& f : flows) total_hops += hop_count(f.path);
    emb.link_map[make_link_key(l->a, l->b)] = std::move(flows);
  }
  // Stepwise residuals can admit totals that exceed a link by rounding.
  if (!net.fits(vnr, emb)) return std::nullopt;
  if (hops) *hops = total_hops;
  return emb;
}

std::size_t sample_index(const Vector& probs, Rng& rng) {
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (!(total > 0.0)) throw NoFeasibleAction("sample_index: no mass");
  const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
  double acc = 0.0;
  std::size_t last = probs.size();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return i;
  }
  // Rounding left u past the final partial sum.
  return last;
}

std::size_t argmax_index(const Vector& probs) {
  if (probs.empty()) throw NoFeasibleAction("argmax_index: empty");
  return static_cast<std::size_t>(
      std::max_element(probs.begin(), probs.end()) - probs.begin());
}

namespace {

class BaselineEmbedder : public Embedder {
 public:
  explicit BaselineEmbedder(LinkStrategy link) : link_(link) {}
  std::optional<Embedding> embed(const SubstrateNetwork& net,
                                 const VirtualNetworkRequest& vnr) override {
    return baseline_embed(net, vnr, link_);
  }

 private:
  LinkStrategy link_;
};

class NodeRankEmbedder : public Embedder {
 public:
  explicit NodeRankEmbedder(LinkStrategy link) : link_(link) {}
  std::optional<Embedding> embed(const SubstrateNetwork& net,
                                 const VirtualNetworkRequest& vnr) override {
    return noderank_embed(net, vnr, link_);
  }

 private:
  LinkStrategy link_;
};

class PolicyEmbedder : public Embedder {
 public:
  PolicyEmbedder(const EmbedderConfig& config, Parameters params)
      : params_(std::move(params)),
        tracker_(config.features, config.agent.spectral_k),
        link_(config.link),
        rng_(config.seed) {}

  std::optional<Embedding> embed(const SubstrateNetwork& net,
                                 const VirtualNetworkRequest& vnr) override {
    const Matrix& features = tracker_.update(net);
    return policy_embed(net, vnr, params_, features, DecodeMode::kGreedy, rng_,
                        link_)
        .first;
  }
  const FeatureTracker* features() const override { return &tracker_; }

 private:
  Parameters params_;
  FeatureTracker tracker_;
  LinkStrategy link_;
  Rng rng_;
};

class PointerEmbedder : public Embedder {
 public:
  PointerEmbedder(const EmbedderConfig& config, Parameters params)
      : params_(std::move(params)),
        tracker_(config.features, config.agent.spectral_k),
        rng_(config.seed) {
    options_.pointer.link = config.link;
    options_.pointer.fail_penalty = config.agent.fail_penalty;
    options_.iterations = config.agent.active_search_iterations;
    options_.learning_rate = config.agent.learning_rate;
    options_.baseline_decay = config.agent.baseline_decay;
    options_.online = config.agent.online_search;
  }

  std::optional<Embedding> embed(const SubstrateNetwork& net,
                                 const VirtualNetworkRequest& vnr) override {
    const Matrix& features = tracker_.update(net);
    return active_search(net, vnr, params_, features, options_, rng_).best;
  }
  const FeatureTracker* features() const override { return &tracker_; }

 private:
  Parameters params_;
  FeatureTracker tracker_;
  ActiveSearchOptions options_;
  Rng rng_;
};

}  // namespace

std::unique_ptr<Embedder> make_embedder(const EmbedderConfig& config,
                                        std::optional<Parameters> params) {
  switch (config.algorithm) {
    case Algorithm::kBaseline:
      return std::make_unique<BaselineEmbedder>(config.link);
    case Algorithm::kNodeRank:
      return std::make_unique<NodeRankEmbedder>(config.link);
    case Algorithm::kPolicy:
    case Algorithm::kPointer: {
      if (!params) {
        throw std::invalid_argument(to_string(config.algorithm) +
                                    " requires trained parameters");
      }
      const Parameters expected = initial_parameters(config);
      if (!params->same_layout(expected)) {
        throw std::invalid_argument(
            "parameters do not match the " + to_string(config.algorithm) +
            " agent with " + to_string(config.features) + " features");
      }
      if (config.algorithm == Algorithm::kPolicy) {
        return std::make_unique<PolicyEmbedder>(config, std::move(*params));
      }
      return std::make_unique<PointerEmbedder>(config, std::move(*params));
    }
  }
  throw std::invalid_argument("unknown algorithm");
}

Parameters initial_parameters(const EmbedderConfig& config) {
  const FeatureTracker tracker(config.features, config.agent.spectral_k);
  const std::size_t width = tracker.width(0);
  Parameters params;
  switch (config.algorithm) {
    case Algorithm::kPolicy:
      PolicyNetwork(width, config.agent.hidden_size).declare(params);
      break;
    case Algorithm::kPointer:
      PointerNetwork(config.agent.cell, width, config.agent.hidden_size)
          .declare(params);
      break;
    default:
      throw std::invalid_argument(to_string(config.algorithm) +
                                  " has no parameters");
  }
  params.init_uniform(config.agent.init_scale, config.seed);
  return params;
}

}  // namespace vne
