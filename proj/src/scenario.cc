#include "vne/scenario.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "vne/network_io.h"

namespace vne {

namespace {

// Separates the request stream from the substrate stream for one seed.
constexpr std::uint64_t kRequestStreamSalt = 0x9e3779b97f4a7c15ull;

constexpr int kMaxRequestRetries = 1000;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  std::istringstream in(text);
  T value{};
  std::string rest;
  if (!(in >> value) || (in >> rest)) {
    throw ConfigError("config key '" + key + "': bad value '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("config key '" + key + "': expected true/false");
}

using Setter = std::function<void(Config&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
#define VNE_SCENARIO_REAL(name)                                \
  t[#name] = [](Config& c, const std::string& v) {             \
    c.scenario.name = parse_number<double>(#name, v);          \
  };
#define VNE_SCENARIO_INT(name)                                 \
  t[#name] = [](Config& c, const std::string& v) {             \
    c.scenario.name = parse_number<int>(#name, v);             \
  };
#define VNE_AGENT(name, type)                                  \
  t[#name] = [](Config& c, const std::string& v) {             \
    c.agent.name = parse_number<type>(#name, v);               \
  };
    VNE_SCENARIO_INT(substrate_nodes)
    VNE_SCENARIO_REAL(waxman_alpha)
    VNE_SCENARIO_REAL(waxman_beta)
    VNE_SCENARIO_INT(max_generation_retries)
    VNE_SCENARIO_REAL(substrate_cpu_min)
    VNE_SCENARIO_REAL(substrate_cpu_max)
    VNE_SCENARIO_REAL(substrate_bw_min)
    VNE_SCENARIO_REAL(substrate_bw_max)
    VNE_SCENARIO_INT(request_count)
    VNE_SCENARIO_REAL(horizon)
    VNE_SCENARIO_REAL(arrival_rate)
    VNE_SCENARIO_REAL(mean_lifetime)
    VNE_SCENARIO_INT(vnr_nodes_min)
    VNE_SCENARIO_INT(vnr_nodes_max)
    VNE_SCENARIO_REAL(vnr_link_prob)
    VNE_SCENARIO_REAL(demand_cpu_min)
    VNE_SCENARIO_REAL(demand_cpu_max)
    VNE_SCENARIO_REAL(demand_bw_min)
    VNE_SCENARIO_REAL(demand_bw_max)
    t["seed"] = [](Config& c, const std::string& v) {
      c.scenario.seed = parse_number<std::uint64_t>("seed", v);
    };
    VNE_AGENT(hidden_size, std::size_t)
    VNE_AGENT(learning_rate, double)
    VNE_AGENT(epochs, int)
    VNE_AGENT(active_search_iterations, int)
    VNE_AGENT(init_scale, double)
    VNE_AGENT(fail_penalty, double)
    VNE_AGENT(baseline_decay, double)
    VNE_AGENT(spectral_k, std::size_t)
#undef VNE_SCENARIO_REAL
#undef VNE_SCENARIO_INT
#undef VNE_AGENT
    t["online_search"] = [](Config& c, const std::string& v) {
      c.agent.online_search = parse_bool("online_search", v);
    };
    t["agent_split"] = [](Config& c, const std::string& v) {
      c.agent.agent_split = parse_bool("agent_split", v);
    };
    t["cell"] = [](Config& c, const std::string& v) {
      try {
        c.agent.cell = parse_cell_type(v);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config key 'cell': ") + e.what());
      }
    };
    return t;
  }();
  return table;
}

double waxman_probability(double dist, double max_dist, double alpha,
                          double beta) {
  if (max_dist <= 0.0) return beta;
  return beta * std::exp(-dist / (alpha * max_dist));
}

}  // namespace

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("invalid scenario: ") + what);
  };
  require(substrate_nodes >= 2, "substrate_nodes < 2");
  require(waxman_alpha > 0.0, "waxman_alpha <= 0");
  require(waxman_beta > 0.0 && waxman_beta <= 1.0, "waxman_beta not in (0,1]");
  require(max_generation_retries >= 1, "max_generation_retries < 1");
  require(substrate_cpu_min >= 0.0 && substrate_cpu_min < substrate_cpu_max,
          "substrate cpu range");
  require(substrate_bw_min >= 0.0 && substrate_bw_min < substrate_bw_max,
          "substrate bw range");
  require(request_count >= 0, "request_count < 0");
  require(horizon >= 0.0, "horizon < 0");
  require(arrival_rate > 0.0, "arrival_rate <= 0");
  require(mean_lifetime > 0.0, "mean_lifetime <= 0");
  require(vnr_nodes_min >= 1 && vnr_nodes_min <= vnr_nodes_max,
          "vnr node range");
  require(vnr_link_prob > 0.0 && vnr_link_prob <= 1.0,
          "vnr_link_prob not in (0,1]");
  require(demand_cpu_min > 0.0 && demand_cpu_min < demand_cpu_max,
          "demand cpu range");
  require(demand_bw_min > 0.0 && demand_bw_min < demand_bw_max,
          "demand bw range");
}

Config parse_config(std::istream& in) {
  Config config;
  std::set<std::string> seen;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "config line " + std::to_string(number) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(where + "unknown key '" + key + "'");
    if (!seen.insert(key).second) {
      throw ConfigError(where + "duplicate key '" + key + "'");
    }
    try {
      it->second(config, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  config.scenario.validate();
  if (config.agent.hidden_size == 0 || config.agent.epochs < 0 ||
      config.agent.active_search_iterations < 0 ||
      config.agent.spectral_k == 0 || config.agent.learning_rate < 0.0 ||
      !(config.agent.baseline_decay >= 0.0 && config.agent.baseline_decay < 1.0)) {
    throw ConfigError("invalid agent hyperparameters");
  }
  return config;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return parse_config(in);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_config(std::ostream& out, const Config& c) {
  const auto& s = c.scenario;
  const auto& a = c.agent;
  auto kv = [&out](const char* key, const std::string& value) {
    out << key << " = " << value << '\n';
  };
  auto real = [](double v) { return format_real(v); };
  kv("substrate_nodes", std::to_string(s.substrate_nodes));
  kv("waxman_alpha", real(s.waxman_alpha));
  kv("waxman_beta", real(s.waxman_beta));
  kv("max_generation_retries", std::to_string(s.max_generation_retries));
  kv("substrate_cpu_min", real(s.substrate_cpu_min));
  kv("substrate_cpu_max", real(s.substrate_cpu_max));
  kv("substrate_bw_min", real(s.substrate_bw_min));
  kv("substrate_bw_max", real(s.substrate_bw_max));
  kv("request_count", std::to_string(s.request_count));
  kv("horizon", real(s.horizon));
  kv("arrival_rate", real(s.arrival_rate));
  kv("mean_lifetime", real(s.mean_lifetime));
  kv("vnr_nodes_min", std::to_string(s.vnr_nodes_min));
  kv("vnr_nodes_max", std::to_string(s.vnr_nodes_max));
  kv("vnr_link_prob", real(s.vnr_link_prob));
  kv("demand_cpu_min", real(s.demand_cpu_min));
  kv("demand_cpu_max", real(s.demand_cpu_max));
  kv("demand_bw_min", real(s.demand_bw_min));
  kv("demand_bw_max", real(s.demand_bw_max));
  kv("seed", std::to_string(s.seed));
  kv("hidden_size", std::to_string(a.hidden_size));
  kv("learning_rate", real(a.learning_rate));
  kv("epochs", std::to_string(a.epochs));
  kv("active_search_iterations", std::to_string(a.active_search_iterations));
  kv("online_search", a.online_search ? "true" : "false");
  kv("init_scale", real(a.init_scale));
  kv("cell", a.cell == CellType::kGru ? "gru" : "elman");
  kv("fail_penalty", real(a.fail_penalty));
  kv("baseline_decay", real(a.baseline_decay));
  kv("spectral_k", std::to_string(a.spectral_k));
  kv("agent_split", a.agent_split ? "true" : "false");
}

bool is_connected(const SubstrateNetwork& net) {
  if (net.node_count() <= 1) return true;
  std::vector<bool> seen(net.node_count(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (const auto& adj : net.adjacent(u)) {
      if (!seen[adj.node]) {
        seen[adj.node] = true;
        ++count;
        stack.push_back(adj.node);
      }
    }
  }
  return count == net.node_count();
}

SubstrateNetwork generate_substrate(const ScenarioConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = cfg.substrate_nodes;
  for (int attempt = 0; attempt < cfg.max_generation_retries; ++attempt) {
    std::vector<Position> pos(n);
    for (auto& p : pos) {
      p.x = unit(rng);
      p.y = unit(rng);
    }
    double max_dist = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        max_dist = std::max(max_dist, std::hypot(pos[i].x - pos[j].x,
                                                 pos[i].y - pos[j].y));
      }
    }
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double d = std::hypot(pos[i].x - pos[j].x, pos[i].y - pos[j].y);
        // Two nodes can only be connected by their one link.
        const bool forced = n == 2;
        if (unit(rng) < waxman_probability(d, max_dist, cfg.waxman_alpha,
                                           cfg.waxman_beta) ||
            forced) {
          edges.emplace_back(i, j);
        }
      }
    }
    SubstrateNetwork net;
    std::uniform_real_distribution<double> cpu(cfg.substrate_cpu_min,
                                               cfg.substrate_cpu_max);
    std::uniform_real_distribution<double> bw(cfg.substrate_bw_min,
                                              cfg.substrate_bw_max);
    for (int i = 0; i < n; ++i) net.add_node(i, cpu(rng), pos[i]);
    for (const auto& [u, v] : edges) net.add_link(u, v, bw(rng));
    if (is_connected(net)) return net;
  }
  throw GenerationError("no connected Waxman graph after " +
                        std::to_string(cfg.max_generation_retries) +
                        " attempts (n=" + std::to_string(n) + ")");
}

std::vector<VirtualNetworkRequest> generate_requests(const ScenarioConfig& cfg) {
  cfg.validate();
  std::mt19937_64 rng(cfg.seed ^ kRequestStreamSalt);
  std::exponential_distribution<double> gap(cfg.arrival_rate);
  std::exponential_distribution<double> life(1.0 / cfg.mean_lifetime);
  std::uniform_int_distribution<int> size(cfg.vnr_nodes_min, cfg.vnr_nodes_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> cpu(cfg.demand_cpu_min,
                                             cfg.demand_cpu_max);
  std::uniform_real_distribution<double> bw(cfg.demand_bw_min,
                                            cfg.demand_bw_max);

  std::vector<VirtualNetworkRequest> requests;
  double time = 0.0;
  for (int id = 0;; ++id) {
    if (cfg.horizon <= 0.0 && id >= cfg.request_count) break;
    time += gap(rng);
    if (cfg.horizon > 0.0 && time > cfg.horizon) break;
    VirtualNetworkRequest vnr;
    vnr.id = id;
    vnr.arrival_time = time;
    do {
      vnr.lifetime = life(rng);
    } while (!(vnr.lifetime > 0.0));
    const int nodes = size(rng);
    for (int i = 0; i < nodes; ++i) vnr.nodes.push_back({i, cpu(rng)});
    bool connected = nodes == 1;
    for (int attempt = 0; attempt < kMaxRequestRetries && !connected;
         ++attempt) {
      vnr.links.clear();
      for (int a = 0; a < nodes; ++a) {
        for (int b = a + 1; b < nodes; ++b) {
          if (unit(rng) < cfg.vnr_link_prob) vnr.links.push_back({a, b, 0.0});
        }
      }
      // Connectivity via union-find over the sampled links.
      std::vector<int> parent(nodes);
      for (int i = 0; i < nodes; ++i) parent[i] = i;
      std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
      };
      int components = nodes;
      for (const auto& l : vnr.links) {
        int ra = find(l.a), rb = find(l.b);
        if (ra != rb) {
          parent[ra] = rb;
          --components;
        }
      }
      connected = components == 1;
    }
    if (!connected) {
      throw GenerationError("request " + std::to_string(id) +
                            ": no connected topology");
    }
    for (auto& l : vnr.links) l.bw = bw(rng);
    requests.push_back(std::move(vnr));
  }
  return requests;
}

}  // namespace vne
