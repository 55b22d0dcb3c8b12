// Command-line front end: generate scenarios, train agents, run simulations
// and align result curves.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vne/embedder.h"
#include "vne/network_io.h"
#include "vne/report.h"
#include "vne/scenario.h"
#include "vne/simulation.h"
#include "vne/training.h"

namespace {

struct GenerateArgs {
  std::string config, out_substrate, out_requests;
};

struct TrainArgs {
  std::string algo, features = "raw", config, out_params;
  std::string substrate, requests;
  std::string link;
  std::optional<std::uint64_t> seed;
};

struct RunArgs {
  std::string substrate, requests, algo, params, features = "raw", link,
      config, out;
  std::uint64_t seed = 1;
};

struct ReportArgs {
  std::vector<std::string> in;
  std::string out;
  int points = 100;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  return out;
}

int generate(const GenerateArgs& a) {
  const vne::Config config = vne::load_config(a.config);
  vne::save_substrate(a.out_substrate,
                      vne::generate_substrate(config.scenario));
  vne::save_requests(a.out_requests, vne::generate_requests(config.scenario));
  return 0;
}

int train(const TrainArgs& a) {
  const vne::Config config = vne::load_config(a.config);
  vne::EmbedderConfig ec;
  ec.algorithm = vne::parse_algorithm(a.algo);
  ec.features = vne::parse_feature_source(a.features);
  ec.agent = config.agent;
  ec.link = a.link.empty() ? vne::default_link_strategy(ec.algorithm, ec.agent)
                           : vne::parse_link_strategy(a.link);
  ec.seed = a.seed.value_or(config.scenario.seed);
  const vne::SubstrateNetwork substrate =
      a.substrate.empty() ? vne::generate_substrate(config.scenario)
                          : vne::load_substrate(a.substrate);
  const auto requests = a.requests.empty()
                            ? vne::generate_requests(config.scenario)
                            : vne::load_requests(a.requests);
  const vne::TrainingResult result =
      vne::train_agent(substrate, requests, ec);
  result.params.save(a.out_params);
  for (std::size_t e = 0; e < result.epoch_rewards.size(); ++e) {
    std::cout << "epoch " << e << " mean_reward "
              << vne::format_real(result.epoch_rewards[e]) << '\n';
  }
  return 0;
}

int run(const RunArgs& a) {
  vne::EmbedderConfig ec;
  ec.algorithm = vne::parse_algorithm(a.algo);
  ec.features = vne::parse_feature_source(a.features);
  if (!a.config.empty()) ec.agent = vne::load_config(a.config).agent;
  ec.link = a.link.empty() ? vne::default_link_strategy(ec.algorithm, ec.agent)
                           : vne::parse_link_strategy(a.link);
  ec.seed = a.seed;
  std::optional<vne::Parameters> params;
  if (!a.params.empty()) params = vne::Parameters::load(a.params);
  auto embedder = vne::make_embedder(ec, std::move(params));
  const vne::SubstrateNetwork substrate = vne::load_substrate(a.substrate);
  const auto requests = vne::load_requests(a.requests);
  std::ofstream out = open_output(a.out);
  const vne::SimulationResult result =
      vne::run_simulation(substrate, requests, *embedder, &out);
  out.close();
  if (!out) throw std::runtime_error(a.out + ": write failed");
  const auto rc = vne::long_term_rc(result.totals);
  const auto ar = vne::acceptance_rate(result.totals);
  std::cout << "accepted " << result.totals.accepted << '/'
            << result.totals.arrived << " long_term_rc "
            << (rc ? vne::format_real(*rc) : "-") << " acceptance_rate "
            << (ar ? vne::format_real(*ar) : "-") << '\n';
  return 0;
}

int report(const ReportArgs& a) {
  std::vector<vne::Series> series;
  for (const auto& path : a.in) series.push_back(vne::load_series(path));
  std::ofstream out = open_output(a.out);
  vne::write_report(out, series, a.points);
  out.close();
  if (!out) throw std::runtime_error(a.out + ": write failed");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Virtual network embedding simulator"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Generate a substrate and requests");
  g->add_option("--config", gen.config)->required();
  g->add_option("--out-substrate", gen.out_substrate)->required();
  g->add_option("--out-requests", gen.out_requests)->required();

  TrainArgs tr;
  auto* t = app.add_subcommand("train", "Train a learning agent");
  t->add_option("--algo", tr.algo)
      ->required()
      ->check(CLI::IsMember({"rl", "policy", "pointer"}));
  t->add_option("--features", tr.features)
      ->check(CLI::IsMember({"raw", "fam", "mpt"}));
  t->add_option("--config", tr.config)->required();
  t->add_option("--out-params", tr.out_params)->required();
  t->add_option("--substrate", tr.substrate,
                "Train on this substrate instead of a generated one");
  t->add_option("--requests", tr.requests,
                "Train on these requests instead of generated ones");
  t->add_option("--link", tr.link)
      ->check(CLI::IsMember({"shortest", "bfs", "split"}));
  t->add_option("--seed", tr.seed, "Agent seed (default: scenario seed)");

  RunArgs ru;
  auto* r = app.add_subcommand("run", "Simulate one algorithm");
  r->add_option("--substrate", ru.substrate)->required();
  r->add_option("--requests", ru.requests)->required();
  r->add_option("--algo", ru.algo)
      ->required()
      ->check(CLI::IsMember({"baseline", "noderank", "rl", "policy",
                             "pointer"}));
  r->add_option("--params", ru.params);
  r->add_option("--features", ru.features)
      ->check(CLI::IsMember({"raw", "fam", "mpt"}));
  r->add_option("--link", ru.link)
      ->check(CLI::IsMember({"shortest", "bfs", "split"}));
  r->add_option("--config", ru.config, "Agent hyperparameters");
  r->add_option("--seed", ru.seed)->required();
  r->add_option("--out", ru.out)->required();

  ReportArgs re;
  auto* p = app.add_subcommand("report", "Align result curves");
  p->add_option("--in", re.in)->required()->expected(1, -1);
  p->add_option("--out", re.out)->required();
  p->add_option("--points", re.points)->check(CLI::Range(2, 1000000));

  CLI11_PARSE(app, argc, argv);
  try {
    if (g->parsed()) return generate(gen);
    if (t->parsed()) return train(tr);
    if (r->parsed()) return run(ru);
    if (p->parsed()) return report(re);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
