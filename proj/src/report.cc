#include "vne/report.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "vne/metrics.h"
#include "vne/network_io.h"

namespace vne {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::optional<double> parse_cell(const std::string& cell,
                                 const std::string& where) {
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || end != cell.data() + cell.size()) {
    throw FormatError(where + ": bad number '" + cell + "'");
  }
  return value;
}

}  // namespace

Series read_series(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) {
    throw FormatError(name + ": missing results header");
  }
  const std::size_t columns = split_csv(kResultsHeader).size();
  Series s;
  s.name = name;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = name + ":" + std::to_string(line_no);
    const auto cells = split_csv(line);
    if (cells.size() != columns) {
      throw FormatError(where + ": expected " + std::to_string(columns) +
                        " columns");
    }
    const auto time = parse_cell(cells[0], where);
    if (!time) throw FormatError(where + ": empty time");
    if (!s.time.empty() && *time < s.time.back()) {
      throw FormatError(where + ": time goes backwards");
    }
    s.time.push_back(*time);
    s.long_term_rc.push_back(parse_cell(cells[7], where));
    s.acceptance_rate.push_back(parse_cell(cells[8], where));
  }
  return s;
}

Series load_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open");
  return read_series(in, std::filesystem::path(path).stem().string());
}

std::optional<double> value_at(const std::vector<double>& time,
                               const std::vector<std::optional<double>>& values,
                               double t) {
  const auto it = std::upper_bound(time.begin(), time.end(), t);
  if (it == time.begin()) return std::nullopt;
  return values[static_cast<std::size_t>(it - time.begin()) - 1];
}

void write_report(std::ostream& out, const std::vector<Series>& series,
                  int points) {
  if (points < 2) throw std::invalid_argument("report: need >= 2 points");
  double end = 0.0;
  for (const auto& s : series) {
    if (!s.time.empty()) end = std::max(end, s.time.back());
  }
  out << "time";
  for (const auto& s : series) {
    out << ',' << s.name << "_long_term_rc," << s.name << "_acceptance_rate";
  }
  out << '\n';
  auto cell = [](const std::optional<double>& v) {
    return v ? format_real(*v) : std::string();
  };
  for (int p = 0; p < points; ++p) {
    // The last sample lands exactly on `end`.
    const double t = p == points - 1 ? end : end * p / (points - 1);
    out << format_real(t);
    for (const auto& s : series) {
      out << ',' << cell(value_at(s.time, s.long_term_rc, t)) << ','
          << cell(value_at(s.time, s.acceptance_rate, t));
    }
    out << '\n';
  }
}

}  // namespace vne
