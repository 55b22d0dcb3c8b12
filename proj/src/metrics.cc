#include "vne/metrics.h"

#include <ostream>
#include <stdexcept>

#include "vne/network_io.h"

namespace vne {

double revenue(const VirtualNetworkRequest& vnr) {
  double total = 0.0;
  for (const auto& n : vnr.nodes) total += n.cpu;
  for (const auto& l : vnr.links) total += l.bw;
  return total;
}

double cost(const VirtualNetworkRequest& vnr, const Embedding& emb) {
  double total = 0.0;
  for (const auto& n : vnr.nodes) {
    if (!emb.node_map.count(n.id)) {
      throw std::invalid_argument("incomplete embedding: virtual node " +
                                  std::to_string(n.id) + " unmapped");
    }
    total += n.cpu;
  }
  for (const auto& l : vnr.links) {
    auto it = emb.link_map.find(make_link_key(l.a, l.b));
    if (it == emb.link_map.end() || it->second.empty()) {
      throw std::invalid_argument("incomplete embedding: virtual link " +
                                  std::to_string(l.a) + "-" +
                                  std::to_string(l.b) + " unmapped");
    }
    for (const auto& flow : it->second) {
      total += flow.bw * hop_count(flow.path);
    }
  }
  return total;
}

void RunningTotals::record(double time, bool was_accepted, double rev,
                           double cst) {
  ++arrived;
  if (was_accepted) {
    ++accepted;
    revenue_sum += rev;
    cost_sum += cst;
  }
  if (time > horizon) horizon = time;
}

std::optional<double> long_term_rc(const RunningTotals& totals) {
  if (!(totals.cost_sum > 0.0)) return std::nullopt;
  return totals.revenue_sum / totals.cost_sum;
}

std::optional<double> acceptance_rate(const RunningTotals& totals) {
  if (totals.arrived == 0) return std::nullopt;
  return static_cast<double>(totals.accepted) /
         static_cast<double>(totals.arrived);
}

double link_utilization(const SubstrateNetwork& net) {
  double used = 0.0;
  double capacity = 0.0;
  for (const auto& l : net.links()) {
    used += l.bw_capacity - l.bw_available;
    capacity += l.bw_capacity;
  }
  return capacity > 0.0 ? used / capacity : 0.0;
}

void write_results_header(std::ostream& out) { out << kResultsHeader << '\n'; }

void write_results_row(std::ostream& out, const ResultsRow& row) {
  auto opt = [](const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
  };
  out << format_real(row.time) << ',' << row.vnr_id << ','
      << (row.accepted ? 1 : 0) << ',' << format_real(row.revenue) << ','
      << format_real(row.cost) << ',' << format_real(row.cum_revenue) << ','
      << format_real(row.cum_cost) << ',' << opt(row.long_term_rc) << ','
      << opt(row.acceptance_rate) << ',' << format_real(row.link_utilization)
      << '\n';
}

}  // namespace vne
