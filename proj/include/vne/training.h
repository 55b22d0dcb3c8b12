#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "vne/embedder.h"

namespace vne {

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TrainingResult {
  Parameters params;
  // Mean episode reward of each epoch.
  std::vector<double> epoch_rewards;
};

// Trains the policy or pointer agent of `config` for config.agent.epochs
// passes over `requests`. Each epoch replays the arrival/departure timeline
// on a reset copy of `substrate`; every arrival is one sampled episode
// followed by a REINFORCE step. Accepted requests are allocated so later
// episodes see realistic load. Throws TrainingDiverged when an epoch's mean
// reward is NaN.
TrainingResult train_agent(const SubstrateNetwork& substrate,
                           const std::vector<VirtualNetworkRequest>& requests,
                           const EmbedderConfig& config,
                           std::optional<Parameters> initial = {});

}  // namespace vne
