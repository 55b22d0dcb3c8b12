#pragma once

#include <iosfwd>
#include <queue>
#include <vector>

#include "vne/embedder.h"
#include "vne/metrics.h"

namespace vne {

// Pending departures of accepted requests, ordered by time then id.
class DepartureQueue {
 public:
  void push(const VirtualNetworkRequest& vnr);
  // Releases every request departing at or before `time`; departures come
  // before a same-time arrival. Returns the number released.
  int release_until(SubstrateNetwork& net, double time);
  // Releases everything left.
  int drain(SubstrateNetwork& net);
  bool empty() const { return heap_.empty(); }

 private:
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap_;
};

struct SimulationOptions {
  // Conservation audit period in processed events.
  int audit_interval = 50;
  double audit_tolerance = 1e-9;
  // Process the departures left after the last arrival.
  bool drain = true;
};

struct SimulationResult {
  RunningTotals totals;
  std::vector<ResultsRow> rows;
  long audits = 0;
  SubstrateNetwork final_substrate;
};

// Thrown when a run breaks a bookkeeping invariant (conservation audit or
// the revenue <= cost bound).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Discrete-event loop over time-ordered `requests`. Each arrival is offered
// to `embedder`; an accepted embedding is allocated and its departure
// scheduled at arrival + lifetime. Writes the CSV header and one row per
// arrival to `csv` when given. `substrate` must have no live allocations.
SimulationResult run_simulation(SubstrateNetwork substrate,
                                const std::vector<VirtualNetworkRequest>& requests,
                                Embedder& embedder, std::ostream* csv = nullptr,
                                const SimulationOptions& options = {});

}  // namespace vne
