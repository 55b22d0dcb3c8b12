#include "vne/policy_agent.h"

#include <algorithm>
#include <cmath>

#include "vne/metrics.h"

namespace vne {

namespace {

constexpr double kFailureReward = -1.0;

PolicyNetwork network_for(const Parameters& params) {
  const Matrix& w1 = params.at("policy.W1");
  return PolicyNetwork(w1.cols() - PolicyNetwork::kContextSize, w1.rows());
}

double max_cpu_capacity(const SubstrateNetwork& net) {
  double top = 0.0;
  for (const auto& n : net.nodes()) top = std::max(top, n.cpu_capacity);
  return top > 0.0 ? top : 1.0;
}

}  // namespace

PolicyNetwork::PolicyNetwork(std::size_t feature_width, std::size_t hidden)
    : feature_width_(feature_width), hidden_(hidden) {}

void PolicyNetwork::declare(Parameters& params) const {
  params.add("policy.W1", hidden_, feature_width_ + kContextSize);
  params.add("policy.b1", hidden_, 1);
  params.add("policy.w2", 1, hidden_);
}

Vector PolicyNetwork::logits(const Parameters& params, const Matrix& features,
                             std::span<const double> context,
                             const std::vector<bool>& mask) const {
  if (features.cols() != feature_width_) {
    throw ShapeError("policy: feature width mismatch");
  }
  const Matrix& w1 = params.at("policy.W1");
  const Matrix& b1 = params.at("policy.b1");
  const auto w2 = params.at("policy.w2").values();
  Vector out(features.rows(), 0.0);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    if (!mask[i]) continue;
    const Vector hidden = tanh(affine(concat(features.row(i), context), w1, b1));
    out[i] = dot(w2, hidden);
  }
  return out;
}

void PolicyNetwork::accumulate_log_prob_gradient(const Parameters& params,
                                                 const Matrix& features,
                                                 const Decision& decision,
                                                 Parameters& grads) const {
  const Matrix& w1 = params.at("policy.W1");
  const Matrix& b1 = params.at("policy.b1");
  const auto w2 = params.at("policy.w2").values();
  Matrix& g_w1 = grads.at("policy.W1");
  Matrix& g_b1 = grads.at("policy.b1");
  auto g_w2 = grads.at("policy.w2").values();
  for (std::size_t i = 0; i < features.rows(); ++i) {
    if (!decision.mask[i]) continue;
    // d log softmax / d logit_i = [i == chosen] - p_i
    const double d_logit =
        (i == decision.chosen ? 1.0 : 0.0) - decision.probabilities[i];
    if (d_logit == 0.0) continue;
    const Vector input = concat(features.row(i), decision.context);
    const Vector hidden = tanh(affine(input, w1, b1));
    for (std::size_t h = 0; h < hidden_; ++h) {
      g_w2[h] += d_logit * hidden[h];
      const double da = d_logit * w2[h] * (1.0 - hidden[h] * hidden[h]);
      auto row = g_w1.row(h);
      for (std::size_t c = 0; c < input.size(); ++c) row[c] += da * input[c];
      g_b1(h, 0) += da;
    }
  }
}

std::pair<std::optional<Embedding>, EpisodeTrace> policy_embed(
    const SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
    const Parameters& params, const Matrix& features, DecodeMode mode,
    Rng& rng, LinkStrategy link) {
  if (features.rows() != net.node_count()) {
    throw ShapeError("policy_embed: feature rows do not match substrate");
  }
  const PolicyNetwork network = network_for(params);
  EpisodeTrace trace;
  trace.inputs = features;
  const double cpu_scale = max_cpu_capacity(net);

  std::map<NodeId, NodeId> node_map;
  std::vector<bool> used(net.node_count(), false);
  for (NodeId vn : demand_order(vnr)) {
    const double demand = vnr.node(vn).cpu;
    Decision d;
    d.virtual_node = vn;
    d.mask.assign(net.node_count(), false);
    bool any = false;
    for (std::size_t i = 0; i < net.node_count(); ++i) {
      d.mask[i] = !used[i] && net.nodes()[i].cpu_available >= demand;
      any = any || d.mask[i];
    }
    if (!any) {
      trace.failure = "no feasible substrate node for virtual node " +
                      std::to_string(vn);
      trace.reward = kFailureReward;
      return {std::nullopt, std::move(trace)};
    }
    d.context = {demand / cpu_scale};
    d.probabilities =
        masked_softmax(network.logits(params, features, d.context, d.mask),
                       d.mask);
    d.chosen = mode == DecodeMode::kSample ? sample_index(d.probabilities, rng)
                                           : argmax_index(d.probabilities);
    used[d.chosen] = true;
    node_map[vn] = net.nodes()[d.chosen].id;
    trace.decisions.push_back(std::move(d));
  }

  int hops = 0;
  auto emb = map_links(net, vnr, node_map, link, &hops);
  if (!emb) {
    trace.failure = "link mapping failed";
    trace.reward = kFailureReward;
    return {std::nullopt, std::move(trace)};
  }
  emb->vnr_id = vnr.id;
  trace.total_hops = hops;
  trace.reward = revenue(vnr) / cost(vnr, *emb);
  trace.embedding = emb;
  return {std::move(emb), std::move(trace)};
}

Parameters policy_log_prob_gradient(const Parameters& params,
                                    const EpisodeTrace& trace) {
  const PolicyNetwork network = network_for(params);
  Parameters grads = params.zeros_like();
  for (const auto& d : trace.decisions) {
    network.accumulate_log_prob_gradient(params, trace.inputs, d, grads);
  }
  return grads;
}

}  // namespace vne
