#include "vne/pointer_agent.h"

#include <algorithm>
#include <cmath>

#include "vne/metrics.h"

namespace vne {

namespace {

PointerNetwork network_for(const Parameters& params) {
  const Matrix& wh = params.at("enc.Wh");
  const std::size_t hidden = wh.rows();
  const CellType cell =
      params.contains("enc.Wz") ? CellType::kGru : CellType::kElman;
  return PointerNetwork(cell, wh.cols() - hidden, hidden);
}

double fail_penalty(const PointerOptions& options,
                    const SubstrateNetwork& net) {
  return options.fail_penalty > 0.0
             ? options.fail_penalty
             : 2.0 * static_cast<double>(net.node_count());
}

}  // namespace

PointerNetwork::PointerNetwork(CellType cell, std::size_t feature_width,
                               std::size_t hidden)
    : encoder_(cell, "enc", feature_width, hidden),
      decoder_(cell, "dec", kDemandSize + feature_width, hidden),
      feature_width_(feature_width),
      hidden_(hidden) {}

void PointerNetwork::declare(Parameters& params) const {
  encoder_.declare(params);
  decoder_.declare(params);
  params.add("att.W1", hidden_, hidden_);
  params.add("att.W2", hidden_, hidden_);
  params.add("att.v", 1, hidden_);
}

PointerNetwork::Encoding PointerNetwork::encode(const Parameters& params,
                                                const Matrix& features) const {
  if (features.cols() != feature_width_) {
    throw ShapeError("pointer: feature width mismatch");
  }
  Encoding enc;
  enc.caches.resize(features.rows());
  Vector h(hidden_, 0.0);
  const Matrix& w1 = params.at("att.W1");
  for (std::size_t i = 0; i < features.rows(); ++i) {
    h = encoder_.forward(params, features.row(i), h, &enc.caches[i]);
    enc.states.push_back(h);
    enc.keys.push_back(matvec(w1, h));
  }
  return enc;
}

Vector PointerNetwork::step_input(const Matrix& features,
                                  std::span<const double> demand,
                                  std::optional<std::size_t> previous) const {
  Vector prev(feature_width_, 0.0);
  if (previous) {
    auto row = features.row(*previous);
    std::copy(row.begin(), row.end(), prev.begin());
  }
  return concat(demand, prev);
}

Vector PointerNetwork::decode_step(const Parameters& params,
                                   std::span<const double> input,
                                   std::span<const double> state,
                                   RecurrentCell::Cache* cache) const {
  return decoder_.forward(params, input, state, cache);
}

Vector PointerNetwork::logits(const Parameters& params, const Encoding& enc,
                              std::span<const double> decoder_state,
                              const std::vector<bool>& mask) const {
  const Vector query = matvec(params.at("att.W2"), decoder_state);
  const auto v = params.at("att.v").values();
  Vector out(enc.keys.size(), 0.0);
  for (std::size_t i = 0; i < enc.keys.size(); ++i) {
    if (!mask[i]) continue;
    double u = 0.0;
    for (std::size_t a = 0; a < hidden_; ++a) {
      u += v[a] * std::tanh(enc.keys[i][a] + query[a]);
    }
    out[i] = u;
  }
  return out;
}

Parameters PointerNetwork::log_prob_gradient(
    const Parameters& params, const Matrix& features,
    const std::vector<Decision>& decisions) const {
  Parameters grads = params.zeros_like();
  if (decisions.empty()) return grads;
  const Encoding enc = encode(params, features);
  const std::size_t n = features.rows();
  const Matrix& w1 = params.at("att.W1");
  const Matrix& w2 = params.at("att.W2");
  const auto v = params.at("att.v").values();
  Matrix& g_w1 = grads.at("att.W1");
  Matrix& g_w2 = grads.at("att.W2");
  auto g_v = grads.at("att.v").values();

  // Replay the decoder.
  std::vector<RecurrentCell::Cache> dec_caches(decisions.size());
  std::vector<Vector> dec_states;
  Vector d = enc.states.back();
  std::optional<std::size_t> previous;
  for (std::size_t t = 0; t < decisions.size(); ++t) {
    const Decision& dec = decisions[t];
    const Vector input = step_input(features, dec.context, previous);
    d = decode_step(params, input, d, &dec_caches[t]);
    dec_states.push_back(d);
    previous = dec.chosen;
  }

  std::vector<Vector> d_enc(n, Vector(hidden_, 0.0));
  std::vector<Vector> d_dec(decisions.size(), Vector(hidden_, 0.0));
  for (std::size_t t = 0; t < decisions.size(); ++t) {
    const Decision& dec = decisions[t];
    const Vector query = matvec(w2, dec_states[t]);
    Vector d_query(hidden_, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!dec.mask[i]) continue;
      const double du = (i == dec.chosen ? 1.0 : 0.0) - dec.probabilities[i];
      if (du == 0.0) continue;
      Vector d_key(hidden_);
      for (std::size_t a = 0; a < hidden_; ++a) {
        const double q = std::tanh(enc.keys[i][a] + query[a]);
        g_v[a] += du * q;
        const double da = du * v[a] * (1.0 - q * q);
        d_key[a] = da;
        d_query[a] += da;
      }
      // key = W1 e_i
      for (std::size_t a = 0; a < hidden_; ++a) {
        auto row = g_w1.row(a);
        for (std::size_t c = 0; c < hidden_; ++c) {
          row[c] += d_key[a] * enc.states[i][c];
        }
      }
      const Vector back = matvec_transposed(w1, d_key);
      for (std::size_t c = 0; c < hidden_; ++c) d_enc[i][c] += back[c];
    }
    // query = W2 d_t
    for (std::size_t a = 0; a < hidden_; ++a) {
      auto row = g_w2.row(a);
      for (std::size_t c = 0; c < hidden_; ++c) {
        row[c] += d_query[a] * dec_states[t][c];
      }
    }
    d_dec[t] = matvec_transposed(w2, d_query);
  }

  // Decoder recurrence, then into the final encoder state.
  Vector carry(hidden_, 0.0);
  Vector dx, dh_prev;
  for (std::size_t t = decisions.size(); t-- > 0;) {
    Vector g = d_dec[t];
    for (std::size_t c = 0; c < hidden_; ++c) g[c] += carry[c];
    decoder_.backward(params, dec_caches[t], g, grads, dx, dh_prev);
    carry = dh_prev;
  }
  for (std::size_t c = 0; c < hidden_; ++c) d_enc[n - 1][c] += carry[c];

  carry.assign(hidden_, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    Vector g = d_enc[i];
    for (std::size_t c = 0; c < hidden_; ++c) g[c] += carry[c];
    encoder_.backward(params, enc.caches[i], g, grads, dx, dh_prev);
    carry = dh_prev;
  }
  return grads;
}

Vector virtual_demand(const SubstrateNetwork& net,
                      const VirtualNetworkRequest& vnr, NodeId vn) {
  double max_cpu = 0.0, max_bw = 0.0;
  for (const auto& n : net.nodes()) max_cpu = std::max(max_cpu, n.cpu_capacity);
  for (const auto& l : net.links()) max_bw = std::max(max_bw, l.bw_capacity);
  double degree = 0.0, bw = 0.0;
  for (const auto& l : vnr.links) {
    if (l.a == vn || l.b == vn) {
      degree += 1.0;
      bw += l.bw;
    }
  }
  const double others = static_cast<double>(vnr.nodes.size()) - 1.0;
  return {max_cpu > 0.0 ? vnr.node(vn).cpu / max_cpu : 0.0,
          others > 0.0 ? degree / others : 0.0,
          max_bw > 0.0 ? bw / max_bw : 0.0};
}

std::pair<std::optional<Embedding>, EpisodeTrace> pointer_embed(
    const SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
    const Parameters& params, const Matrix& features, DecodeMode mode,
    Rng& rng, const PointerOptions& options) {
  if (features.rows() != net.node_count() || net.empty()) {
    throw ShapeError("pointer_embed: feature rows do not match substrate");
  }
  const PointerNetwork network = network_for(params);
  EpisodeTrace trace;
  trace.inputs = features;
  const double penalty = fail_penalty(options, net);
  const PointerNetwork::Encoding enc = network.encode(params, features);

  std::map<NodeId, NodeId> node_map;
  std::vector<bool> used(net.node_count(), false);
  Vector state = enc.states.back();
  std::optional<std::size_t> previous;
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
      trace.reward = -penalty;
      return {std::nullopt, std::move(trace)};
    }
    d.context = virtual_demand(net, vnr, vn);
    state = network.decode_step(
        params, network.step_input(features, d.context, previous), state);
    d.probabilities =
        masked_softmax(network.logits(params, enc, state, d.mask), d.mask);
    d.chosen = mode == DecodeMode::kSample ? sample_index(d.probabilities, rng)
                                           : argmax_index(d.probabilities);
    used[d.chosen] = true;
    previous = d.chosen;
    node_map[vn] = net.nodes()[d.chosen].id;
    trace.decisions.push_back(std::move(d));
  }

  int hops = 0;
  auto emb = map_links(net, vnr, node_map, options.link, &hops);
  if (!emb) {
    trace.failure = "link mapping failed";
    trace.reward = -penalty;
    return {std::nullopt, std::move(trace)};
  }
  emb->vnr_id = vnr.id;
  trace.total_hops = hops;
  trace.reward = -static_cast<double>(hops);
  trace.embedding = emb;
  return {std::move(emb), std::move(trace)};
}

Parameters pointer_log_prob_gradient(const Parameters& params,
                                     const EpisodeTrace& trace) {
  return network_for(params).log_prob_gradient(params, trace.inputs,
                                               trace.decisions);
}

ActiveSearchResult active_search(const SubstrateNetwork& net,
                                 const VirtualNetworkRequest& vnr,
                                 Parameters& params, const Matrix& features,
                                 const ActiveSearchOptions& options, Rng& rng) {
  if (options.iterations < 0) {
    throw std::invalid_argument("active_search: negative iteration count");
  }
  Parameters local;
  Parameters& working = options.online ? params : (local = params);

  ActiveSearchResult result;
  auto offer = [&result](std::optional<Embedding>& emb, double reward) {
    if (emb && (!result.best || reward > result.best_reward)) {
      result.best = std::move(emb);
      result.best_reward = reward;
    }
    result.best_so_far.push_back(result.best_reward);
  };
  auto [greedy, greedy_trace] = pointer_embed(
      net, vnr, working, features, DecodeMode::kGreedy, rng, options.pointer);
  offer(greedy, greedy_trace.reward);

  RewardBaseline baseline(options.baseline_decay);
  baseline.update(greedy_trace.reward);
  for (int it = 0; it < options.iterations; ++it) {
    auto [emb, trace] = pointer_embed(net, vnr, working, features,
                                      DecodeMode::kSample, rng,
                                      options.pointer);
    if (!trace.decisions.empty()) {
      const Parameters grad = pointer_log_prob_gradient(working, trace);
      const auto records = trace.action_records();
      reinforce_update(working, records, grad, trace.reward,
                       baseline.value_or(trace.reward), options.learning_rate);
    }
    baseline.update(trace.reward);
    offer(emb, trace.reward);
  }
  return result;
}

}  // namespace vne
