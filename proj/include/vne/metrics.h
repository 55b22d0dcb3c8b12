#pragma once

#include <iosfwd>
#include <optional>

#include "vne/network.h"

namespace vne {

// Sum of CPU and bandwidth demand of an accepted request.
double revenue(const VirtualNetworkRequest& vnr);

// CPU demand plus, for every virtual link, allocated bandwidth times hop
// count over each of its paths. Throws std::invalid_argument when `emb` does
// not map every virtual node and link of `vnr`.
double cost(const VirtualNetworkRequest& vnr, const Embedding& emb);

struct RunningTotals {
  double revenue_sum = 0.0;
  double cost_sum = 0.0;
  long arrived = 0;
  long accepted = 0;
  double horizon = 0.0;

  // Rejected arrivals count toward `arrived` only.
  void record(double time, bool was_accepted, double rev, double cst);
};

// Finite-horizon long-term revenue/cost; nullopt while nothing is accepted.
std::optional<double> long_term_rc(const RunningTotals& totals);
std::optional<double> acceptance_rate(const RunningTotals& totals);

// Allocated over total bandwidth across all substrate links.
double link_utilization(const SubstrateNetwork& net);

// One row of the per-arrival results CSV.
struct ResultsRow {
  double time = 0.0;
  int vnr_id = 0;
  bool accepted = false;
  double revenue = 0.0;
  double cost = 0.0;
  double cum_revenue = 0.0;
  double cum_cost = 0.0;
  std::optional<double> long_term_rc;
  std::optional<double> acceptance_rate;
  double link_utilization = 0.0;
};

inline constexpr const char* kResultsHeader =
    "time,vnr_id,accepted,revenue,cost,cum_revenue,cum_cost,long_term_rc,"
    "acceptance_rate,link_utilization";

void write_results_header(std::ostream& out);
void write_results_row(std::ostream& out, const ResultsRow& row);

}  // namespace vne
