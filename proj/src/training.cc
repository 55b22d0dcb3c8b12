#include "vne/training.h"

#include <cmath>
#include <queue>
#include <sstream>

#include "vne/pointer_agent.h"
#include "vne/policy_agent.h"
#include "vne/simulation.h"

namespace vne {

TrainingResult train_agent(const SubstrateNetwork& substrate,
                           const std::vector<VirtualNetworkRequest>& requests,
                           const EmbedderConfig& config,
                           std::optional<Parameters> initial) {
  const bool pointer = config.algorithm == Algorithm::kPointer;
  if (!pointer && config.algorithm != Algorithm::kPolicy) {
    throw std::invalid_argument("train_agent: " + to_string(config.algorithm) +
                                " is not a learning agent");
  }
  TrainingResult result;
  result.params = initial ? std::move(*initial) : initial_parameters(config);
  Parameters& params = result.params;
  if (!params.same_layout(initial_parameters(config))) {
    throw std::invalid_argument("train_agent: parameter layout mismatch");
  }

  Rng rng(config.seed);
  RewardBaseline baseline(config.agent.baseline_decay);
  PointerOptions pointer_options;
  pointer_options.link = config.link;
  pointer_options.fail_penalty = config.agent.fail_penalty;

  for (int epoch = 0; epoch < config.agent.epochs; ++epoch) {
    SubstrateNetwork net = substrate;
    net.reset();
    FeatureTracker tracker(config.features, config.agent.spectral_k);
    DepartureQueue departures;
    double reward_sum = 0.0;
    for (const auto& vnr : requests) {
      departures.release_until(net, vnr.arrival_time);
      const Matrix& features = tracker.update(net);
      auto [emb, trace] =
          pointer ? pointer_embed(net, vnr, params, features,
                                  DecodeMode::kSample, rng, pointer_options)
                  : policy_embed(net, vnr, params, features,
                                 DecodeMode::kSample, rng, config.link);
      if (!trace.decisions.empty()) {
        const Parameters grad = pointer
                                    ? pointer_log_prob_gradient(params, trace)
                                    : policy_log_prob_gradient(params, trace);
        const auto records = trace.action_records();
        reinforce_update(params, records, grad, trace.reward,
                         baseline.value_or(trace.reward),
                         config.agent.learning_rate);
      }
      baseline.update(trace.reward);
      reward_sum += trace.reward;
      if (emb) {
        net.allocate(vnr, *emb);
        departures.push(vnr);
      }
    }
    const double mean =
        requests.empty() ? 0.0
                         : reward_sum / static_cast<double>(requests.size());
    if (std::isnan(mean) || !params.all_finite()) {
      std::ostringstream msg;
      msg << "training diverged in epoch " << epoch << ": mean reward "
          << mean << ", parameters "
          << (params.all_finite() ? "finite" : "non-finite")
          << "; lower learning_rate (now " << config.agent.learning_rate
          << ")";
      throw TrainingDiverged(msg.str());
    }
    result.epoch_rewards.push_back(mean);
  }
  return result;
}

}  // namespace vne
