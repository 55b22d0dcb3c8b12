#include "vne/simulation.h"

#include <ostream>
#include <sstream>

#include "vne/network_io.h"

namespace vne {

namespace {

bool all_single_hop(const Embedding& emb) {
  for (const auto& [key, flows] : emb.link_map) {
    for (const auto& f : flows) {
      if (hop_count(f.path) != 1) return false;
    }
  }
  return true;
}

void check_revenue_bound(const VirtualNetworkRequest& vnr,
                         const Embedding& emb, double rev, double cst) {
  const bool single = all_single_hop(emb);
  if (rev > cst || (single && rev != cst) || (!single && rev == cst)) {
    std::ostringstream msg;
    msg << "request " << vnr.id << ": revenue " << rev << " vs cost " << cst
        << (single ? " with" : " without") << " all single-hop paths";
    throw InvariantViolation(msg.str());
  }
}

}  // namespace

void DepartureQueue::push(const VirtualNetworkRequest& vnr) {
  heap_.emplace(vnr.departure_time(), vnr.id);
}

int DepartureQueue::release_until(SubstrateNetwork& net, double time) {
  int released = 0;
  while (!heap_.empty() && heap_.top().first <= time) {
    net.release(heap_.top().second);
    heap_.pop();
    ++released;
  }
  return released;
}

int DepartureQueue::drain(SubstrateNetwork& net) {
  int released = 0;
  while (!heap_.empty()) {
    net.release(heap_.top().second);
    heap_.pop();
    ++released;
  }
  return released;
}

SimulationResult run_simulation(
    SubstrateNetwork substrate,
    const std::vector<VirtualNetworkRequest>& requests, Embedder& embedder,
    std::ostream* csv, const SimulationOptions& options) {
  if (!substrate.live_allocations().empty()) {
    throw std::invalid_argument("run_simulation: substrate is not fresh");
  }
  for (std::size_t i = 1; i < requests.size(); ++i) {
    if (requests[i].arrival_time < requests[i - 1].arrival_time) {
      throw std::invalid_argument("run_simulation: requests not time-ordered");
    }
  }
  SimulationResult result;
  DepartureQueue departures;
  long events = 0;
  long next_audit = options.audit_interval;
  auto advance = [&](int processed) {
    events += processed;
    while (options.audit_interval > 0 && events >= next_audit) {
      const double deviation = substrate.audit();
      if (deviation > options.audit_tolerance) {
        throw InvariantViolation("conservation audit failed after event " +
                                 std::to_string(events) + ": deviation " +
                                 format_real(deviation));
      }
      ++result.audits;
      next_audit += options.audit_interval;
    }
  };

  if (csv) write_results_header(*csv);
  for (const auto& vnr : requests) {
    advance(departures.release_until(substrate, vnr.arrival_time));
    std::optional<Embedding> emb = embedder.embed(substrate, vnr);
    double rev = 0.0, cst = 0.0;
    if (emb) {
      rev = revenue(vnr);
      cst = cost(vnr, *emb);
      check_revenue_bound(vnr, *emb, rev, cst);
      substrate.allocate(vnr, *emb);
      departures.push(vnr);
    }
    result.totals.record(vnr.arrival_time, emb.has_value(), rev, cst);
    ResultsRow row;
    row.time = vnr.arrival_time;
    row.vnr_id = vnr.id;
    row.accepted = emb.has_value();
    row.revenue = rev;
    row.cost = cst;
    row.cum_revenue = result.totals.revenue_sum;
    row.cum_cost = result.totals.cost_sum;
    row.long_term_rc = long_term_rc(result.totals);
    row.acceptance_rate = acceptance_rate(result.totals);
    row.link_utilization = link_utilization(substrate);
    if (csv) write_results_row(*csv, row);
    result.rows.push_back(row);
    advance(1);
  }
  if (options.drain) advance(departures.drain(substrate));
  if (csv && !*csv) throw std::runtime_error("run_simulation: write failed");
  result.final_substrate = std::move(substrate);
  return result;
}

}  // namespace vne
