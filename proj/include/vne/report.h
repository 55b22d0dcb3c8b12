#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace vne {

// Per-arrival long-term R/C and acceptance rate read from a results CSV.
struct Series {
  std::string name;
  std::vector<double> time;
  std::vector<std::optional<double>> long_term_rc;
  std::vector<std::optional<double>> acceptance_rate;
};

// Throws FormatError on a malformed file. load_series names the series
// after the file stem.
Series read_series(std::istream& in, const std::string& name);
Series load_series(const std::string& path);

// Value of a step function sampled at `t`: the last entry at or before t.
std::optional<double> value_at(const std::vector<double>& time,
                               const std::vector<std::optional<double>>& values,
                               double t);

// Aligned table: column "time" followed by <name>_long_term_rc and
// <name>_acceptance_rate per series, sampled on `points` evenly spaced
// instants from 0 to the latest arrival across all series. Empty cells
// mean no value yet.
void write_report(std::ostream& out, const std::vector<Series>& series,
                  int points = 100);

}  // namespace vne
