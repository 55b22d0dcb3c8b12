#include <sstream>

#include "doctest.h"
#include "fixtures.h"
#include "vne/network_io.h"

using namespace vne;

TEST_CASE("substrate text round trip") {
  SubstrateNetwork net;
  net.add_node(0, 50.25, Position{0.1, 0.9});
  net.add_node(3, 1.0 / 3.0);
  net.add_link(0, 3, 77.125);
  std::stringstream s;
  write_substrate(s, net);
  const SubstrateNetwork back = read_substrate(s);
  CHECK(back.same_resources(net));
  std::stringstream again;
  write_substrate(again, back);
  CHECK(again.str() == s.str());
}

TEST_CASE("substrate parser tolerates comments and rejects malformed input") {
  std::istringstream ok(
      "# demo\nSUBSTRATE 2 1\nNODE 0 10\n\nNODE 1 20 0.5 0.5  # tail\n"
      "LINK 0 1 5\n");
  const auto net = read_substrate(ok);
  CHECK(net.node_count() == 2);
  CHECK(net.node(1).position.has_value());

  const char* bad[] = {
      "SUBSTRATE 2 1\nNODE 0 10\nNODE 1 20\n",                  // missing link
      "SUBSTRATE 1 0\nNODE 0 abc\n",                            // bad number
      "NODE 0 1\n",                                             // no header
      "SUBSTRATE 2 1\nNODE 0 10\nNODE 1 20\nLINK 0 0 5\n",      // self-loop
      "SUBSTRATE 1 0\nNODE 0 -4\n",                             // negative
      "SUBSTRATE 1 0\nNODE 0 4 7\n",                            // half position
      "SUBSTRATE 1 0\nEDGE 0 4\n",                              // unknown tag
  };
  for (const char* text : bad) {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_substrate(in), FormatError);
  }
}

TEST_CASE("request trace round trip and ordering") {
  std::vector<VirtualNetworkRequest> reqs = {
      fixture::request(0, {5.5, 6}, {{0, 1, 2.25}}, 1.5, 100),
      fixture::request(1, {7}, {}, 3.0, 0.1)};
  std::stringstream s;
  write_requests(s, reqs);
  const auto back = read_requests(s);
  REQUIRE(back.size() == 2);
  CHECK(back[0].links[0].bw == 2.25);
  CHECK(back[1].arrival_time == 3.0);
  std::stringstream again;
  write_requests(again, back);
  CHECK(again.str() == s.str());

  std::istringstream unordered(
      "REQUESTS 2\nVNR 0 5 1 1 0\nVNODE 0 1\nVNR 1 4 1 1 0\nVNODE 0 1\n");
  CHECK_THROWS_AS(read_requests(unordered), FormatError);
  std::istringstream disconnected(
      "REQUESTS 1\nVNR 0 5 1 2 0\nVNODE 0 1\nVNODE 1 1\n");
  CHECK_THROWS_AS(read_requests(disconnected), FormatError);
}

TEST_CASE("load reports the path of a missing file") {
  try {
    load_substrate("/nonexistent/substrate.txt");
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("/nonexistent/substrate.txt") !=
          std::string::npos);
  }
}

TEST_CASE("format_real is shortest round-trip") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(2.0) == "2");
  const double third = 1.0 / 3.0;
  CHECK(std::stod(format_real(third)) == third);
}
