#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vne/network.h"
#include "vne/recurrent.h"

namespace vne {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scenario generation parameters. Defaults follow the usual VNE evaluation
// setup: Waxman substrate, Poisson arrivals, exponential lifetimes.
struct ScenarioConfig {
  int substrate_nodes = 50;
  double waxman_alpha = 0.2;
  double waxman_beta = 0.5;
  int max_generation_retries = 100;
  double substrate_cpu_min = 50.0;
  double substrate_cpu_max = 100.0;
  double substrate_bw_min = 50.0;
  double substrate_bw_max = 100.0;

  int request_count = 500;
  // When positive, arrivals are generated up to this time and
  // request_count is ignored.
  double horizon = 0.0;
  double arrival_rate = 0.05;  // requests per time unit
  double mean_lifetime = 500.0;
  int vnr_nodes_min = 2;
  int vnr_nodes_max = 6;
  double vnr_link_prob = 0.5;
  double demand_cpu_min = 1.0;
  double demand_cpu_max = 25.0;
  double demand_bw_min = 1.0;
  double demand_bw_max = 25.0;

  std::uint64_t seed = 1;

  // Throws ConfigError on degenerate ranges or non-positive rates.
  void validate() const;
};

// Learning-agent hyperparameters.
struct AgentConfig {
  std::size_t hidden_size = 16;
  double learning_rate = 0.002;
  int epochs = 30;
  int active_search_iterations = 16;
  bool online_search = false;
  double init_scale = 0.1;
  CellType cell = CellType::kGru;
  // Pointer-agent failure penalty; <= 0 means twice the substrate size.
  double fail_penalty = 0.0;
  double baseline_decay = 0.9;
  std::size_t spectral_k = 4;
  // Lets the learning agents split virtual links over several paths.
  bool agent_split = false;
};

struct Config {
  ScenarioConfig scenario;
  AgentConfig agent;
};

// Flat "key = value" text with '#' comments. Unknown keys, malformed values
// and duplicate keys are ConfigErrors.
Config parse_config(std::istream& in);
Config load_config(const std::string& path);
void write_config(std::ostream& out, const Config& config);

// Waxman graph on uniform positions in the unit square, link probability
// beta * exp(-d / (alpha * L)) with L the largest pairwise distance,
// resampled until connected.
SubstrateNetwork generate_substrate(const ScenarioConfig& cfg);

// Time-ordered requests: exponential inter-arrivals and lifetimes, uniform
// node counts and demands, Erdos-Renyi topology resampled until connected.
std::vector<VirtualNetworkRequest> generate_requests(const ScenarioConfig& cfg);

bool is_connected(const SubstrateNetwork& net);

}  // namespace vne
