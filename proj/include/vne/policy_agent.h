#pragma once

#include <optional>
#include <utility>

#include "vne/embedder.h"

namespace vne {

// Single-stage node scorer shared by every substrate node:
//   score_i = w2 · tanh(W1 [features_i ; context] + b1)
// with context = normalized CPU demand of the virtual node being placed.
class PolicyNetwork {
 public:
  static constexpr std::size_t kContextSize = 1;

  PolicyNetwork(std::size_t feature_width, std::size_t hidden);

  std::size_t feature_width() const { return feature_width_; }
  void declare(Parameters& params) const;

  // One logit per row of `features`; rows excluded by `mask` get 0.
  Vector logits(const Parameters& params, const Matrix& features,
                std::span<const double> context,
                const std::vector<bool>& mask) const;

  // Adds d(log pi(chosen)) / d(params) for one decision into `grads`.
  void accumulate_log_prob_gradient(const Parameters& params,
                                    const Matrix& features,
                                    const Decision& decision,
                                    Parameters& grads) const;

 private:
  std::size_t feature_width_;
  std::size_t hidden_;
};

// Places virtual nodes in descending-demand order by sampling (training) or
// taking the argmax (evaluation) of the masked policy over feasible, unused
// substrate nodes; routes links with `link` (BFS by default). Reward is
// revenue/cost on success and -1 on failure. Never modifies `net`.
std::pair<std::optional<Embedding>, EpisodeTrace> policy_embed(
    const SubstrateNetwork& net, const VirtualNetworkRequest& vnr,
    const Parameters& params, const Matrix& features, DecodeMode mode,
    Rng& rng, LinkStrategy link = LinkStrategy::kBfs);

// Gradient of the summed log-probabilities of the trace's decisions.
Parameters policy_log_prob_gradient(const Parameters& params,
                                    const EpisodeTrace& trace);

}  // namespace vne
