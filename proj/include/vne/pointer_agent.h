#pragma once

#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "vne/embedder.h"
#include "vne/recurrent.h"

namespace vne {

// Sequence-to-sequence pointer network. The encoder runs over the substrate
// feature rows in index order; the decoder starts from the last encoder
// state and, at step t, consumes the demand vector of the virtual node being
// placed followed by the feature row of the node chosen at step t-1 (zeros at
// t = 0). Attention logits:
//   u_i = v · tanh(W1 e_i + W2 d_t)
class PointerNetwork {
 public:
  static constexpr std::size_t kDemandSize = 3;

  PointerNetwork(CellType cell, std::size_t feature_width, std::size_t hidden);

  std::size_t feature_width() const { return feature_width_; }
  void declare(Parameters& params) const;

  struct Encoding {
    std::vector<Vector> states;  // one per substrate node
    std::vector<Vector> keys;    // W1 * states[i]
    std::vector<RecurrentCell::Cache> caches;
  };
  Encoding encode(const Parameters& params, const Matrix& features) const;

  // Decoder input for one step.
  Vector step_input(const Matrix& features, std::span<const double> demand,
                    std::optional<std::size_t> previous) const;

  Vector decode_step(const Parameters& params, std::span<const double> input,
                     std::span<const double> state,
                     RecurrentCell::Cache* cache = nullptr) const;

  // Attention logits over every row; masked rows get 0.
  Vector logits(const Parameters& params, const Encoding& enc,
                std::span<const double> decoder_state,
                const std::vector<bool>& mask) const;

  // Gradient of the summed log-probabilities of `decisions` by
  // backpropagation through both recurrences.
  Parameters log_prob_gradient(const Parameters& params,
                               const Matrix& features,
                               const std::vector<Decision>& decisions) const;

 private:
  RecurrentCell encoder_;
  RecurrentCell decoder_;
  std::size_t feature_width_;
  std::size_t hidden_;
};

// Demand vector of virtual node `vn`: CPU over the largest substrate CPU
// capacity, degree over (|V| - 1), adjacent bandwidth over the largest
// substrate link capacity.
Vector virtual_demand(const SubstrateNetwork& net,
                      const VirtualNetworkRequest& vnr, NodeId vn);

struct PointerOptions {
  LinkStrategy link = LinkStrategy::kShortest;
  // Penalty on failure; 0 selects twice the substrate node count.
  double fail_penalty = 0.0;
};

// Places virtual nodes in descending-demand order with the pointer policy.
// Reward is minus the total hop count on success and minus the failure
// penalty otherwise. Never modifies `net`.
std::pair<std::optional<Embedding>, EpisodeTrace> pointer_embed(
    const SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
    const Parameters& params, const Matrix& features, DecodeMode mode,
    Rng& rng, const PointerOptions& options = {});

Parameters pointer_log_prob_gradient(const Parameters& params,
                                     const EpisodeTrace& trace);

struct ActiveSearchOptions {
  PointerOptions pointer;
  int iterations = 16;
  double learning_rate = 0.005;
  double baseline_decay = 0.9;
  // When set, the search updates `params` in place so later requests start
  // from the refined weights; otherwise it works on a copy.
  bool online = false;
};

struct ActiveSearchResult {
  std::optional<Embedding> best;
  // Reward of `best`; -infinity while no feasible embedding was found.
  double best_reward = -std::numeric_limits<double>::infinity();
  // best_reward after the greedy episode and after each sampled episode.
  std::vector<double> best_so_far;
};

// Greedy decode, then `iterations` sampled episodes each followed by a
// REINFORCE step; keeps the highest-reward feasible embedding (earliest on
// ties).
ActiveSearchResult active_search(const SubstrateNetwork& net,
                                 const VirtualNetworkRequest& vnr,
                                 Parameters& params, const Matrix& features,
                                 const ActiveSearchOptions& options, Rng& rng);

}  // namespace vne
