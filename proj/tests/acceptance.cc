// Acceptance runner: one PASS/FAIL line per criterion.
//   acceptance <1..10|all> [--artifacts <dir>]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles.h"
#include "vne/embedder.h"
#include "vne/features.h"
#include "vne/heuristics.h"
#include "vne/metrics.h"
#include "vne/network_io.h"
#include "vne/pointer_agent.h"
#include "vne/policy_agent.h"
#include "vne/recurrent.h"
#include "vne/routing.h"
#include "vne/scenario.h"
#include "vne/simulation.h"
#include "vne/spectral.h"
#include "vne/training.h"

namespace fs = std::filesystem;
using namespace vne;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}


double mean(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) /
         static_cast<double>(v.size());
}

bool all_single_hop(const Embedding& e) {
  for (const auto& [key, flows] : e.link_map) {
    for (const auto& f : flows) {
      if (f.path.size() != 2) return false;
    }
  }
  return true;
}

// Records every embedding the wrapped embedder returns.
class RecordingEmbedder : public Embedder {
 public:
  explicit RecordingEmbedder(std::unique_ptr<Embedder> inner)
      : inner_(std::move(inner)) {}
  std::optional<Embedding> embed(const SubstrateNetwork& net,
                                 const VirtualNetworkRequest& vnr) override {
    auto e = inner_->embed(net, vnr);
    if (e) accepted.emplace_back(vnr, *e);
    return e;
  }
  std::vector<std::pair<VirtualNetworkRequest, Embedding>> accepted;

 private:
  std::unique_ptr<Embedder> inner_;
};

// Calls `observe` with the substrate state seen at each arrival.
class ObservingEmbedder : public Embedder {
 public:
  ObservingEmbedder(std::unique_ptr<Embedder> inner,
                    std::function<void(const SubstrateNetwork&)> observe)
      : inner_(std::move(inner)), observe_(std::move(observe)) {}
  std::optional<Embedding> embed(const SubstrateNetwork& net,
                                 const VirtualNetworkRequest& vnr) override {
    observe_(net);
    return inner_->embed(net, vnr);
  }

 private:
  std::unique_ptr<Embedder> inner_;
  std::function<void(const SubstrateNetwork&)> observe_;
};

ScenarioConfig scenario(int nodes, int requests, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.substrate_nodes = nodes;
  cfg.request_count = requests;
  cfg.seed = seed;
  // Default alpha rarely yields a connected graph below ~40 nodes.
  if (nodes < 40) cfg.waxman_alpha = 0.5;
  return cfg;
}

EmbedderConfig agent_config(Algorithm algo, FeatureSource features,
                            std::uint64_t seed) {
  EmbedderConfig ec;
  ec.algorithm = algo;
  ec.features = features;
  ec.link = default_link_strategy(algo, ec.agent);
  ec.seed = seed;
  return ec;
}

// ---------------------------------------------------------------------------

Outcome criterion1(const fs::path&) {
  long runs = 0, accepted = 0, equalities = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto cfg = scenario(20, 200, seed);
    const auto net = generate_substrate(cfg);
    const auto reqs = generate_requests(cfg);
    const auto train_cfg = scenario(20, 100, seed + 500);
    const auto train_net = generate_substrate(train_cfg);
    const auto train_reqs = generate_requests(train_cfg);

    std::vector<std::pair<EmbedderConfig, std::optional<Parameters>>> setups;
    for (auto algo : {Algorithm::kBaseline, Algorithm::kNodeRank}) {
      setups.push_back({agent_config(algo, FeatureSource::kRaw, seed), {}});
    }
    for (auto [algo, feat] :
         {std::pair{Algorithm::kPolicy, FeatureSource::kFam},
          std::pair{Algorithm::kPointer, FeatureSource::kRaw}}) {
      EmbedderConfig ec = agent_config(algo, feat, seed);
      ec.agent.epochs = 3;
      setups.push_back({ec, train_agent(train_net, train_reqs, ec).params});
    }
    for (auto& [ec, params] : setups) {
      for (auto link : {LinkStrategy::kShortest, LinkStrategy::kBfs,
                        LinkStrategy::kSplit}) {
        EmbedderConfig run_cfg = ec;
        run_cfg.link = link;
        RecordingEmbedder rec(make_embedder(run_cfg, params));
        const auto result = run_simulation(net, reqs, rec);
        ++runs;
        const auto rc = long_term_rc(result.totals);
        if (!rc || !(*rc > 0.0) || !(*rc <= 1.0)) {
          return {false, "long-term R/C outside (0,1] for " +
                             to_string(run_cfg.algorithm)};
        }
        for (const auto& [vnr, emb] : rec.accepted) {
          ++accepted;
          const double r = revenue(vnr), c = cost(vnr, emb);
          if (r > c) return {false, "revenue > cost on request " + std::to_string(vnr.id)};
          if ((r == c) != all_single_hop(emb)) {
            return {false, "R = C does not match all-single-hop on request " +
                               std::to_string(vnr.id)};
          }
          if (r == c) ++equalities;
        }
      }
    }
  }
  return {true, std::to_string(runs) + " runs, " + std::to_string(accepted) +
                    " accepted requests, " + std::to_string(equalities) +
                    " single-hop equalities"};
}

Outcome criterion2(const fs::path&) {
  std::mt19937_64 rng(2024);
  const LinkStrategy links[] = {LinkStrategy::kShortest, LinkStrategy::kBfs,
                                LinkStrategy::kSplit};
  long allocations = 0;
  for (int seq = 0; seq < 10000; ++seq) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 20)(rng);
    auto net = oracle::random_substrate(n, 0.2, 20, 100, rng);
    const SubstrateNetwork initial = net;
    std::vector<int> live;
    for (int step = 0; step < 12; ++step) {
      if (!live.empty() && std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
        const std::size_t i =
            std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng);
        net.release(live[i]);
        live.erase(live.begin() + static_cast<long>(i));
      } else {
        ScenarioConfig rc;
        rc.request_count = 1;
        rc.vnr_nodes_max = static_cast<int>(std::min<std::size_t>(n, 4));
        rc.vnr_nodes_min = std::min(2, rc.vnr_nodes_max);
        if (rc.vnr_nodes_min == rc.vnr_nodes_max) rc.vnr_nodes_min = 1;
        rc.demand_cpu_max = 40;
        rc.demand_bw_max = 40;
        rc.seed = rng();
        auto vnr = generate_requests(rc).front();
        vnr.id = step;
        const auto e = baseline_embed(net, vnr, links[step % 3]);
        if (e) {
          net.allocate(vnr, *e);
          live.push_back(vnr.id);
          ++allocations;
        }
      }
      for (const auto& node : net.nodes()) {
        if (node.cpu_available < 0.0) return {false, "negative CPU residual"};
      }
      for (const auto& l : net.links()) {
        if (l.bw_available < 0.0) return {false, "negative bandwidth residual"};
      }
    }
    for (int id : live) net.release(id);
    if (!net.same_resources(initial)) {
      return {false, "sequence " + std::to_string(seq) + " not restored exactly"};
    }
  }
  return {true, "10000 sequences, " + std::to_string(allocations) +
                    " allocations, all restored exactly"};
}

Outcome criterion3(const fs::path&) {
  std::mt19937_64 rng(303);
  long path_checks = 0, split_checks = 0, split_ok = 0;
  for (int g = 0; g < 500; ++g) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
    const auto net = oracle::random_substrate(n, 0.35, 1, 30, rng);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < n; ++t) {
        if (s == t) continue;
        const NodeId sid = net.nodes()[s].id, tid = net.nodes()[t].id;
        const double bw = std::uniform_int_distribution<int>(1, 30)(rng);
        const auto truth = oracle::best_path_by_enumeration(net, sid, tid, bw);
        const auto a = shortest_feasible_path(net, PathQuery{sid, tid, bw});
        const auto b = bfs_feasible_path(net, PathQuery{sid, tid, bw});
        ++path_checks;
        if (a.has_value() != truth.has_value() ||
            b.has_value() != truth.has_value()) {
          return {false, "path existence mismatch on graph " + std::to_string(g)};
        }
        if (truth && (hop_count(*a) != hop_count(*truth) ||
                      hop_count(*b) != hop_count(*truth))) {
          return {false, "hop count mismatch on graph " + std::to_string(g)};
        }
        const double mf = oracle::max_flow(net, sid, tid);
        const double demand = std::uniform_int_distribution<int>(1, 70)(rng);
        const auto flows = split_flow(net, PathQuery{sid, tid, demand});
        ++split_checks;
        if (flows.has_value() != (demand <= mf)) {
          return {false, "split_flow disagrees with max-flow on graph " +
                             std::to_string(g)};
        }
        if (flows) {
          ++split_ok;
          LinkResiduals residual = residual_bandwidth(net);
          consume(net, *flows, residual);
          double total = 0.0;
          for (const auto& f : *flows) total += f.bw;
          if (std::abs(total - demand) > 1e-9 ||
              *std::min_element(residual.begin(), residual.end()) < -1e-9) {
            return {false, "split flows infeasible on graph " + std::to_string(g)};
          }
        }
      }
    }
  }
  return {true, std::to_string(path_checks) + " path queries, " +
                    std::to_string(split_checks) + " split queries (" +
                    std::to_string(split_ok) + " feasible) on 500 graphs"};
}

Outcome criterion4(const fs::path&) {
  const SubstrateNetwork tri = [] {
    SubstrateNetwork t;
    for (NodeId i = 0; i < 3; ++i) t.add_node(i, 10);
    t.add_link(0, 1, 5);
    t.add_link(1, 2, 5);
    t.add_link(0, 2, 5);
    return t;
  }();
  for (double s : noderank_scores(tri)) {
    if (std::abs(s - 1.0 / 3.0) > 1e-9) return {false, "triangle not uniform"};
  }
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 25)(rng);
    auto net = oracle::random_substrate(n, 0.25, 1, 100, rng);
    std::vector<std::vector<std::size_t>> adj(n);
    std::vector<double> bw(n, 0.0), h(n);
    for (const auto& l : net.links()) {
      const std::size_t u = net.index_of(l.u), v = net.index_of(l.v);
      adj[u].push_back(v);
      adj[v].push_back(u);
      bw[u] += l.bw_available;
      bw[v] += l.bw_available;
    }
    for (std::size_t k = 0; k < n; ++k) h[k] = net.nodes()[k].cpu_available * bw[k];
    const auto got = noderank_scores(net);
    const auto want = oracle::dense_rank(adj, h);
    double l1 = 0.0;
    for (std::size_t k = 0; k < n; ++k) l1 += std::abs(got[k] - want[k]);
    worst = std::max(worst, l1);
  }
  return {worst < 1e-6, "worst L1 distance " + num(worst) + " over 100 instances"};
}

Outcome criterion5(const fs::path&) {
  std::mt19937_64 rng(505);
  auto dim = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  auto vec = [&](std::size_t n) {
    std::uniform_real_distribution<double> d(-1, 1);
    Vector v(n);
    for (double& x : v) x = d(rng);
    return v;
  };
  auto mat = [&](std::size_t r, std::size_t c) {
    std::uniform_real_distribution<double> d(0, 1);
    Matrix m(r, c);
    for (double& x : m.values()) x = d(rng);
    return m;
  };
  double worst = 0.0;
  std::string worst_where;
  auto note = [&](double err, const std::string& where) {
    if (err > worst) {
      worst = err;
      worst_where = where;
    }
  };
  const double h = 1e-5;
  for (int shape = 0; shape < 50; ++shape) {
    const std::string tag = " (shape " + std::to_string(shape) + ")";
    // Recurrent cells: loss = c · h'.
    for (CellType type : {CellType::kGru, CellType::kElman}) {
      const std::size_t in = dim(1, 8), hid = dim(1, 8);
      RecurrentCell cell(type, "c", in, hid);
      Parameters p;
      cell.declare(p);
      p.init_uniform(0.8, rng());
      const Vector x = vec(in), h0 = vec(hid), c = vec(hid);
      RecurrentCell::Cache cache;
      cell.forward(p, x, h0, &cache);
      Parameters g = p.zeros_like();
      Vector dx, dh;
      cell.backward(p, cache, c, g, dx, dh);
      const std::string name = type == CellType::kGru ? "gru" : "elman";
      note(oracle::worst_relative_error(
               g, oracle::numeric_gradient(
                      p, [&](const Parameters& q) {
                        return dot(c, cell.forward(q, x, h0));
                      },
                      h)),
           name + " weights" + tag);
      // Inputs and state, packed as parameters for the same oracle.
      Parameters io;
      io.add("x", 1, in);
      io.add("h", 1, hid);
      std::copy(x.begin(), x.end(), io.at("x").values().begin());
      std::copy(h0.begin(), h0.end(), io.at("h").values().begin());
      Parameters gio = io.zeros_like();
      std::copy(dx.begin(), dx.end(), gio.at("x").values().begin());
      std::copy(dh.begin(), dh.end(), gio.at("h").values().begin());
      note(oracle::worst_relative_error(
               gio, oracle::numeric_gradient(
                        io, [&](const Parameters& q) {
                          return dot(c, cell.forward(p, q.at("x").values(),
                                                     q.at("h").values()));
                        },
                        h)),
           name + " inputs" + tag);
    }
    // Policy scorer.
    {
      const std::size_t n = dim(2, 8), width = dim(1, 8), hid = dim(1, 8);
      const Matrix f = mat(n, width);
      PolicyNetwork net(width, hid);
      Parameters p;
      net.declare(p);
      p.init_uniform(0.5, rng());
      std::vector<Decision> ds;
      std::vector<bool> mask(n, true);
      for (std::size_t t = 0; t < std::min<std::size_t>(n, 3); ++t) {
        Decision d;
        d.context = {std::uniform_real_distribution<double>(0, 1)(rng)};
        d.mask = mask;
        d.probabilities =
            masked_softmax(net.logits(p, f, d.context, d.mask), d.mask);
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask[i]) open.push_back(i);
        }
        d.chosen = open[dim(0, open.size() - 1)];
        mask[d.chosen] = false;
        ds.push_back(d);
      }
      Parameters g = p.zeros_like();
      for (const auto& d : ds) net.accumulate_log_prob_gradient(p, f, d, g);
      note(oracle::worst_relative_error(
               g, oracle::numeric_gradient(
                      p, [&](const Parameters& q) {
                        double s = 0.0;
                        for (const auto& d : ds) {
                          s += std::log(masked_softmax(
                              net.logits(q, f, d.context, d.mask),
                              d.mask)[d.chosen]);
                        }
                        return s;
                      },
                      h)),
           "policy" + tag);
    }
    // Pointer network, both cell types.
    for (CellType type : {CellType::kGru, CellType::kElman}) {
      const std::size_t n = dim(2, 8), width = dim(1, 8), hid = dim(1, 8);
      const Matrix f = mat(n, width);
      PointerNetwork net(type, width, hid);
      Parameters p;
      net.declare(p);
      p.init_uniform(0.6, rng());
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(std::min<std::size_t>(n, 3));
      std::vector<Vector> demands;
      for (std::size_t t = 0; t < order.size(); ++t) demands.push_back(vec(3));
      const auto replay = [&](const Parameters& q, std::vector<Decision>* out) {
        const auto enc = net.encode(q, f);
        Vector d = enc.states.back();
        std::optional<std::size_t> prev;
        std::vector<bool> mask(n, true);
        double s = 0.0;
        for (std::size_t t = 0; t < order.size(); ++t) {
          Decision dec;
          dec.context = demands[t];
          dec.mask = mask;
          d = net.decode_step(q, net.step_input(f, dec.context, prev), d);
          dec.probabilities = masked_softmax(net.logits(q, enc, d, mask), mask);
          dec.chosen = order[t];
          s += std::log(dec.probabilities[dec.chosen]);
          mask[dec.chosen] = false;
          prev = dec.chosen;
          if (out) out->push_back(dec);
        }
        return s;
      };
      std::vector<Decision> ds;
      replay(p, &ds);
      note(oracle::worst_relative_error(
               net.log_prob_gradient(p, f, ds),
               oracle::numeric_gradient(
                   p, [&](const Parameters& q) { return replay(q, nullptr); },
                   h)),
           std::string(type == CellType::kGru ? "pointer-gru" : "pointer-elman") +
               tag);
    }
  }
  return {worst < 1e-4, "worst relative error " + num(worst) +
                            (worst_where.empty() ? "" : " at " + worst_where) +
                            " over 50 shapes"};
}

Outcome criterion6(const fs::path&) {
  std::mt19937_64 rng(606);
  const std::size_t n = 10, k = 4;
  double worst_value = 0.0, worst_angle = 0.0;
  int missed_fallbacks = 0, spurious_fallbacks = 0;
  auto add_scaled = [&](const Matrix& s, double frob) {
    Matrix d = oracle::random_symmetric(n, rng);
    const double f = frobenius_norm(d);
    Matrix out = s;
    for (std::size_t i = 0; i < out.size(); ++i) {
      out.values()[i] += d.values()[i] * frob / f;
    }
    return out;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix s_old = oracle::random_symmetric(n, rng);
    const auto ref_old = oracle::jacobi(s_old);
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
      gap = std::min(gap, ref_old.values[i] - ref_old.values[i + 1]);
    }
    const auto emb = top_k_eigen(s_old, k);

    const Matrix s_new = add_scaled(s_old, 1e-3 * gap);
    const auto r = perturb_update(emb, s_old, s_new);
    if (r.fell_back) ++spurious_fallbacks;
    const auto ref = oracle::jacobi(s_new);
    Matrix top(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < k; ++j) top(i, j) = ref.vectors(i, j);
    }
    for (std::size_t j = 0; j < k; ++j) {
      worst_value = std::max(worst_value,
                             std::abs(r.embedding.eigenvalues[j] - ref.values[j]));
    }
    worst_angle = std::max(
        worst_angle, oracle::subspace_sin_angle(r.embedding.eigenvectors, top));

    // Beyond the threshold: 0.1 * gap times a factor in (1, 50].
    const double factor = 1.0 + std::uniform_real_distribution<double>(1e-3, 49)(rng);
    const auto far = perturb_update(emb, s_old, add_scaled(s_old, 0.1 * gap * factor));
    if (!far.fell_back) ++missed_fallbacks;
  }
  const bool pass = worst_value <= 1e-6 && worst_angle <= 1e-4 &&
                    missed_fallbacks == 0 && spurious_fallbacks == 0;
  return {pass, "eigenvalue error " + num(worst_value) + ", subspace angle " +
                    num(worst_angle) + ", missed fallbacks " +
                    std::to_string(missed_fallbacks) +
                    ", fallbacks below threshold " +
                    std::to_string(spurious_fallbacks)};
}

Outcome criterion7(const fs::path&) {
  const auto cfg = scenario(30, 200, 7);
  const auto net = generate_substrate(cfg);
  const auto reqs = generate_requests(cfg);
  FeatureTracker fam(FeatureSource::kFam), mpt(FeatureSource::kMpt);
  double worst = 0.0;
  auto observe = [&](const SubstrateNetwork& state) {
    const Matrix a = fam.update(state);
    const Matrix& b = mpt.update(state);
    worst = std::max(worst, max_abs_difference(a, b));
  };
  EmbedderConfig ec;
  ObservingEmbedder emb(make_embedder(ec), observe);
  run_simulation(net, reqs, emb);
  const long batch = fam.stats().full_eigensolves;
  const long incremental = mpt.stats().full_eigensolves;
  const bool pass = worst < 1e-4 && batch >= 3 * incremental;
  return {pass, "max per-entry deviation " + num(worst) + ", full eigensolves " +
                    std::to_string(incremental) + " incremental vs " +
                    std::to_string(batch) + " batch (needs <= " +
                    num(static_cast<double>(batch) / 3.0) + "), fallbacks " +
                    std::to_string(mpt.stats().fallbacks) + " of " +
                    std::to_string(mpt.stats().perturbation_updates) +
                    " perturbation attempts"};
}

Outcome criterion8(const fs::path&) {
  std::ostringstream detail;
  bool pass = true;
  for (auto [algo, feat] : {std::pair{Algorithm::kPolicy, FeatureSource::kFam},
                            std::pair{Algorithm::kPointer, FeatureSource::kRaw}}) {
    int improved = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto cfg = scenario(20, 200, seed);
      const auto net = generate_substrate(cfg);
      const auto reqs = generate_requests(cfg);
      const auto r = train_agent(net, reqs, agent_config(algo, feat, seed + 100));
      const auto& c = r.epoch_rewards;
      if (c.size() < 20) return {false, "fewer than 20 epochs configured"};
      const double first = mean({c.begin(), c.begin() + 10});
      const double last = mean({c.end() - 10, c.end()});
      if (last > first) ++improved;
    }
    if (detail.tellp() > 0) detail << "; ";
    detail << to_string(algo) << " improved on " << improved << "/5 seeds";
    pass = pass && improved >= 4;
  }
  return {pass, detail.str()};
}

Outcome criterion9(const fs::path& artifacts) {
  const fs::path dir = artifacts / "criterion9";
  fs::create_directories(dir);
  std::map<std::string, std::vector<double>> rc;
  auto evaluate = [&](const std::string& label, const SubstrateNetwork& net,
                      const std::vector<VirtualNetworkRequest>& reqs,
                      const EmbedderConfig& ec, std::optional<Parameters> params,
                      std::uint64_t seed) {
    auto emb = make_embedder(ec, std::move(params));
    std::ofstream csv(dir / (label + "_seed" + std::to_string(seed) + ".csv"));
    const auto r = run_simulation(net, reqs, *emb, &csv);
    rc[label].push_back(long_term_rc(r.totals).value_or(0.0));
  };
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto eval_cfg = scenario(50, 500, seed);
    const auto train_cfg = scenario(50, 500, seed + 1000);
    const auto net = generate_substrate(eval_cfg);
    const auto reqs = generate_requests(eval_cfg);
    const auto train_net = generate_substrate(train_cfg);
    const auto train_reqs = generate_requests(train_cfg);
    for (auto algo : {Algorithm::kBaseline, Algorithm::kNodeRank}) {
      evaluate(to_string(algo), net, reqs,
               agent_config(algo, FeatureSource::kRaw, seed), {}, seed);
    }
    const std::pair<std::string, EmbedderConfig> agents[] = {
        {"pointer", agent_config(Algorithm::kPointer, FeatureSource::kRaw, 0)},
        {"rl_raw", agent_config(Algorithm::kPolicy, FeatureSource::kRaw, 0)},
        {"rl_fam", agent_config(Algorithm::kPolicy, FeatureSource::kFam, 0)},
        {"rl_mpt", agent_config(Algorithm::kPolicy, FeatureSource::kMpt, 0)},
    };
    for (auto [label, ec] : agents) {
      ec.seed = train_cfg.seed;
      const auto trained = train_agent(train_net, train_reqs, ec);
      trained.params.save(
          (dir / (label + "_seed" + std::to_string(seed) + ".params")).string());
      ec.seed = seed;
      evaluate(label, net, reqs, ec, trained.params, seed);
    }
  }
  std::ofstream summary(dir / "summary.txt");
  for (const auto& [label, values] : rc) {
    summary << label;
    for (double v : values) summary << ' ' << format_real(v);
    summary << " mean " << format_real(mean(values)) << '\n';
  }
  const double pointer = mean(rc["pointer"]), base = mean(rc["baseline"]),
               noderank = mean(rc["noderank"]), raw = mean(rc["rl_raw"]),
               fam = mean(rc["rl_fam"]), mpt = mean(rc["rl_mpt"]);
  const bool a = pointer >= base && pointer >= noderank;
  const bool b = fam >= raw;
  const bool c = mpt >= raw;
  std::ostringstream detail;
  detail << "(a) pointer " << num(pointer) << " vs baseline " << num(base)
         << " / noderank " << num(noderank) << (a ? " ok" : " FAILED")
         << "; (b) fam " << num(fam) << " vs raw " << num(raw)
         << (b ? " ok" : " FAILED") << "; (c) mpt " << num(mpt) << " vs raw "
         << num(raw) << (c ? " ok" : " FAILED") << "; artifacts in "
         << dir.string();
  return {a && b && c, detail.str()};
}

Outcome criterion10(const fs::path& artifacts) {
  const fs::path dir = artifacts / "criterion10";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = VNE_CLI_PATH;
  const std::string d = dir.string() + "/";
  {
    std::ofstream cfg(dir / "scenario.cfg");
    cfg << "substrate_nodes = 20\nwaxman_alpha = 0.5\nrequest_count = 100\n"
           "epochs = 2\nseed = 10\n";
  }
  const auto sh = [&](const std::string& args) {
    return std::system((cli + " " + args + " > " + d + "log.txt 2>&1").c_str());
  };
  if (sh("generate --config " + d + "scenario.cfg --out-substrate " + d +
         "s.txt --out-requests " + d + "r.txt") != 0 ||
      sh("train --algo rl --features mpt --config " + d + "scenario.cfg " +
         "--out-params " + d + "rl.params") != 0 ||
      sh("train --algo pointer --config " + d + "scenario.cfg --out-params " +
         d + "pointer.params") != 0) {
    return {false, "setup commands failed; see " + d + "log.txt"};
  }
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"baseline", "--algo baseline"},
      {"noderank", "--algo noderank --link split"},
      {"rl", "--algo rl --features mpt --params " + d + "rl.params"},
      {"pointer", "--algo pointer --params " + d + "pointer.params --config " +
                      d + "scenario.cfg"},
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  for (const auto& [name, args] : runs) {
    for (int i = 0; i < 2; ++i) {
      if (sh("run --substrate " + d + "s.txt --requests " + d + "r.txt " + args +
             " --seed 3 --out " + d + name + std::to_string(i) + ".csv") != 0) {
        return {false, name + " run failed; see " + d + "log.txt"};
      }
    }
    const std::string a = slurp(dir / (name + "0.csv"));
    if (a.empty() || a != slurp(dir / (name + "1.csv"))) {
      return {false, name + " CSVs differ between identical runs"};
    }
  }
  return {true, "baseline, noderank, rl and pointer runs byte-identical"};
}

struct Criterion {
  Outcome (*run)(const fs::path&);
  double budget_seconds;
};

const std::map<int, Criterion> kCriteria = {
    {1, {criterion1, 600}},  {2, {criterion2, 30}},  {3, {criterion3, 60}},
    {4, {criterion4, 10}},   {5, {criterion5, 60}},  {6, {criterion6, 30}},
    {7, {criterion7, 300}},  {8, {criterion8, 600}}, {9, {criterion9, 1800}},
    {10, {criterion10, 600}},
};

bool run_one(int id, const fs::path& artifacts) {
  const auto& c = kCriteria.at(id);
  const auto start = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = c.run(artifacts);
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  const bool in_time = secs < c.budget_seconds;
  const bool pass = out.pass && in_time;
  std::cout << (pass ? "PASS" : "FAIL") << " criterion " << id << ": "
            << out.detail << " [" << num(secs) << " s, budget "
            << num(c.budget_seconds) << " s" << (in_time ? "" : ", EXCEEDED")
            << "]" << std::endl;
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("Acceptance criteria runner");
  std::string which = "all";
  std::string artifacts = "acceptance_artifacts";
  app.add_option("criterion", which, "1..10 or all");
  app.add_option("--artifacts", artifacts, "Directory for run artifacts");
  CLI11_PARSE(app, argc, argv);

  fs::create_directories(artifacts);
  bool ok = true;
  if (which == "all") {
    for (const auto& [id, c] : kCriteria) ok = run_one(id, artifacts) && ok;
  } else {
    int id = 0;
    try {
      id = std::stoi(which);
    } catch (const std::exception&) {
    }
    if (!kCriteria.count(id)) {
      std::cerr << "error: unknown criterion '" << which << "'\n";
      return 2;
    }
    ok = run_one(id, artifacts);
  }
  return ok ? 0 : 1;
}
