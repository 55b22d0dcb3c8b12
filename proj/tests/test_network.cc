#include <random>

#include "doctest.h"
#include "fixtures.h"
#include "oracles.h"
#include "vne/network.h"

using namespace vne;

TEST_CASE("node_feasible compares residual CPU with >=") {
  const auto net = fixture::substrate({50, 20, 10}, {{0, 1, 10}, {1, 2, 10}});
  CHECK(node_feasible(net, 0, 20));
  CHECK(node_feasible(net, 1, 20));
  CHECK_FALSE(node_feasible(net, 2, 20));
  CHECK_THROWS_AS(node_feasible(net, 7, 1), LookupError);
}

TEST_CASE("path_feasible checks every hop") {
  auto net = fixture::chain3(100, 30);
  CHECK(path_feasible(net, {0, 1, 2}, 25));
  auto narrow = fixture::substrate({100, 100, 100}, {{0, 1, 30}, {1, 2, 10}});
  CHECK_FALSE(path_feasible(narrow, {0, 1, 2}, 25));
  CHECK_FALSE(path_feasible(net, {0, 2}, 1));  // no such link
  CHECK_THROWS_AS(path_feasible(net, {0}, 1), std::invalid_argument);
}

TEST_CASE("substrate construction rejects malformed graphs") {
  SubstrateNetwork net;
  net.add_node(0, 10);
  net.add_node(1, 10);
  CHECK_THROWS(net.add_node(1, 5));
  CHECK_THROWS(net.add_link(0, 0, 5));
  CHECK_THROWS(net.add_link(0, 9, 5));
  net.add_link(1, 0, 5);
  CHECK(net.links()[0].u == 0);
  CHECK(net.links()[0].v == 1);
  CHECK_THROWS(net.add_link(0, 1, 5));
  CHECK_THROWS(net.add_node(2, 5));  // nodes must precede links
  CHECK_THROWS(SubstrateNetwork().add_node(3, -1));
}

TEST_CASE("request validation") {
  auto ok = fixture::request(0, {5, 5}, {{0, 1, 3}});
  CHECK_NOTHROW(ok.validate());
  auto disconnected = fixture::request(0, {5, 5, 5}, {{0, 1, 3}});
  CHECK_THROWS(disconnected.validate());
  auto loop = fixture::request(0, {5, 5}, {{0, 1, 3}, {1, 1, 2}});
  CHECK_THROWS(loop.validate());
  auto zero = fixture::request(0, {5, 0}, {{0, 1, 3}});
  CHECK_THROWS(zero.validate());
  auto parallel = fixture::request(0, {5, 5}, {{0, 1, 3}, {1, 0, 2}});
  CHECK_THROWS(parallel.validate());
  auto single = fixture::request(0, {5}, {});
  CHECK_NOTHROW(single.validate());
}

TEST_CASE("allocate subtracts node and link demands") {
  auto net = fixture::substrate({50, 50, 50}, {{0, 1, 40}, {1, 2, 40}});
  auto vnr = fixture::request(1, {20, 10}, {{0, 1, 25}});
  Embedding emb{1, {{0, 0}, {1, 1}}, {{{0, 1}, {{{0, 1}, 10}, {{0, 1}, 15}}}}};
  // Two flows of one virtual link on the same substrate link.
  net.allocate(vnr, emb);
  CHECK(net.node(0).cpu_available == 30);
  CHECK(net.node(1).cpu_available == 40);
  CHECK(net.links()[0].bw_available == 15);
  CHECK(net.links()[1].bw_available == 40);
}

TEST_CASE("allocate is transactional") {
  auto net = fixture::substrate({50, 50}, {{0, 1, 40}});
  const auto before = net.state_hash();
  auto vnr = fixture::request(1, {60, 10}, {{0, 1, 5}});
  Embedding emb{1, {{0, 0}, {1, 1}}, {{{0, 1}, {{{0, 1}, 5}}}}};
  CHECK_THROWS_AS(net.allocate(vnr, emb), AllocationError);
  CHECK(net.node(0).cpu_available == 50);
  CHECK(net.state_hash() == before);

  // Bandwidth violation on the second link only.
  auto wide = fixture::request(2, {1, 1}, {{0, 1, 45}});
  Embedding e2{2, {{0, 0}, {1, 1}}, {{{0, 1}, {{{0, 1}, 45}}}}};
  CHECK_THROWS_AS(net.allocate(wide, e2), AllocationError);
  CHECK(net.state_hash() == before);
  CHECK(net.live_allocations().empty());
}

TEST_CASE("structurally invalid embeddings are rejected") {
  auto net = fixture::chain3();
  auto vnr = fixture::request(1, {5, 5}, {{0, 1, 5}});
  SUBCASE("non-injective") {
    Embedding e{1, {{0, 0}, {1, 0}}, {{{0, 1}, {{{0, 1}, 5}}}}};
    CHECK_THROWS_AS(net.allocate(vnr, e), InvalidEmbedding);
  }
  SUBCASE("wrong endpoints") {
    Embedding e{1, {{0, 0}, {1, 2}}, {{{0, 1}, {{{0, 1}, 5}}}}};
    CHECK_THROWS_AS(net.allocate(vnr, e), InvalidEmbedding);
  }
  SUBCASE("missing link") {
    Embedding e{1, {{0, 0}, {1, 2}}, {{{0, 1}, {{{0, 2}, 5}}}}};
    CHECK_THROWS_AS(net.allocate(vnr, e), InvalidEmbedding);
  }
  SUBCASE("flows do not sum to demand") {
    Embedding e{1, {{0, 0}, {1, 1}}, {{{0, 1}, {{{0, 1}, 4}}}}};
    CHECK_THROWS_AS(net.allocate(vnr, e), InvalidEmbedding);
  }
  SUBCASE("repeated node") {
    Embedding e{1, {{0, 0}, {1, 2}}, {{{0, 1}, {{{0, 1, 0, 1, 2}, 5}}}}};
    CHECK_THROWS_AS(net.allocate(vnr, e), InvalidEmbedding);
  }
  SUBCASE("unmapped virtual link") {
    Embedding e{1, {{0, 0}, {1, 1}}, {}};
    CHECK_THROWS_AS(net.allocate(vnr, e), InvalidEmbedding);
  }
}

TEST_CASE("release is the exact inverse of allocate") {
  auto net = fixture::substrate({50, 50, 50}, {{0, 1, 40}, {1, 2, 40}});
  const SubstrateNetwork initial = net;
  auto a = fixture::request(1, {20.1, 10.3}, {{0, 1, 7.7}});
  auto b = fixture::request(2, {3.3, 4.4}, {{0, 1, 1.1}});
  Embedding ea{1, {{0, 0}, {1, 2}}, {{{0, 1}, {{{0, 1, 2}, 7.7}}}}};
  Embedding eb{2, {{0, 1}, {1, 2}}, {{{0, 1}, {{{1, 2}, 1.1}}}}};
  net.allocate(a, ea);
  const SubstrateNetwork only_a = net;
  net.allocate(b, eb);
  CHECK_THROWS_AS(net.allocate(b, eb), AllocationError);  // id already live
  net.release(2);
  CHECK(net.same_resources(only_a));
  net.release(1);
  CHECK(net.same_resources(initial));
  CHECK_THROWS_AS(net.release(1), AllocationError);
  CHECK_THROWS_AS(net.release(99), AllocationError);
}

TEST_CASE("releasing the first of two embeddings returns only its share") {
  auto net = fixture::substrate({50, 50, 50}, {{0, 1, 40}, {1, 2, 40}});
  auto a = fixture::request(1, {20, 10}, {{0, 1, 5}});
  auto b = fixture::request(2, {7, 9}, {{0, 1, 3}});
  Embedding ea{1, {{0, 0}, {1, 2}}, {{{0, 1}, {{{0, 1, 2}, 5}}}}};
  Embedding eb{2, {{0, 1}, {1, 2}}, {{{0, 1}, {{{1, 2}, 3}}}}};
  net.allocate(a, ea);
  net.allocate(b, eb);
  net.release(1);
  // Replay oracle: apply b alone to a fresh copy.
  auto replay = fixture::substrate({50, 50, 50}, {{0, 1, 40}, {1, 2, 40}});
  replay.allocate(b, eb);
  CHECK(net.same_resources(replay));
  CHECK(net.audit() == 0.0);
}

TEST_CASE("random allocate/release sequences conserve resources") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto net = oracle::random_substrate(8, 0.3, 20, 60, rng);
    const SubstrateNetwork initial = net;
    std::vector<int> live;
    for (int step = 0; step < 20; ++step) {
      const bool do_release =
          !live.empty() && std::uniform_int_distribution<int>(0, 2)(rng) == 0;
      if (do_release) {
        const std::size_t i =
            std::uniform_int_distribution<std::size_t>(0, live.size() - 1)(rng);
        net.release(live[i]);
        live.erase(live.begin() + static_cast<long>(i));
      } else {
        // One virtual link mapped onto a random substrate link.
        const auto& l = net.links()[std::uniform_int_distribution<std::size_t>(
            0, net.link_count() - 1)(rng)];
        const double cpu = std::uniform_real_distribution<double>(0.1, 9)(rng);
        const double bw = std::uniform_real_distribution<double>(0.1, 9)(rng);
        auto vnr = fixture::request(step + 100 * trial, {cpu, cpu}, {{0, 1, bw}});
        Embedding e{vnr.id, {{0, l.u}, {1, l.v}}, {{{0, 1}, {{{l.u, l.v}, bw}}}}};
        try {
          net.allocate(vnr, e);
          live.push_back(vnr.id);
        } catch (const AllocationError&) {
        }
      }
      for (const auto& n : net.nodes()) REQUIRE(n.cpu_available >= 0.0);
      for (const auto& l : net.links()) REQUIRE(l.bw_available >= 0.0);
      REQUIRE(net.audit() <= 1e-9);
    }
    for (int id : live) net.release(id);
    REQUIRE(net.same_resources(initial));
  }
}

TEST_CASE("hop_count") {
  CHECK(hop_count({1, 2, 3}) == 2);
  CHECK(hop_count({4, 5}) == 1);
}
