#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "vne/network.h"

namespace vne {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Substrate text format:
//   SUBSTRATE <num_nodes> <num_links>
//   NODE <id> <cpu> [<x> <y>]
//   LINK <u> <v> <bw>
// Blank lines and '#' comments are ignored. Capacities are read; residuals
// start full.
SubstrateNetwork read_substrate(std::istream& in);
SubstrateNetwork load_substrate(const std::string& path);
void write_substrate(std::ostream& out, const SubstrateNetwork& net);
void save_substrate(const std::string& path, const SubstrateNetwork& net);

// Request trace format:
//   REQUESTS <count>
//   VNR <id> <arrival> <lifetime> <num_nodes> <num_links>
//   VNODE <id> <cpu>
//   VLINK <a> <b> <bw>
std::vector<VirtualNetworkRequest> read_requests(std::istream& in);
std::vector<VirtualNetworkRequest> load_requests(const std::string& path);
void write_requests(std::ostream& out,
                    const std::vector<VirtualNetworkRequest>& requests);
void save_requests(const std::string& path,
                   const std::vector<VirtualNetworkRequest>& requests);

// Shortest decimal text that reads back to the same double.
std::string format_real(double value);

}  // namespace vne
