#include "vne/network_io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace vne {

namespace {

// Splits the stream into non-empty, comment-stripped lines, keeping line
// numbers for error messages.
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++number_;
      if (auto hash = line.find('#'); hash != std::string::npos) {
        line.erase(hash);
      }
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      fields.clear();
      fields.str(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw FormatError("line " + std::to_string(number_) + ": " + what);
  }

 private:
  std::istream& in_;
  int number_ = 0;
};

std::string keyword(std::istringstream& fields) {
  std::string word;
  fields >> word;
  return word;
}

bool at_end(std::istringstream& fields) {
  std::string rest;
  return !(fields >> rest);
}

}  // namespace

std::string format_real(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

SubstrateNetwork read_substrate(std::istream& in) {
  LineReader reader(in);
  std::istringstream fields;
  if (!reader.next(fields) || keyword(fields) != "SUBSTRATE") {
    reader.fail("expected SUBSTRATE header");
  }
  long num_nodes = -1, num_links = -1;
  if (!(fields >> num_nodes >> num_links) || num_nodes < 0 || num_links < 0 ||
      !at_end(fields)) {
    reader.fail("malformed SUBSTRATE header");
  }
  SubstrateNetwork net;
  for (long i = 0; i < num_nodes; ++i) {
    if (!reader.next(fields) || keyword(fields) != "NODE") {
      reader.fail("expected NODE line");
    }
    NodeId id;
    double cpu;
    if (!(fields >> id >> cpu)) reader.fail("malformed NODE line");
    std::optional<Position> pos;
    double x, y;
    if (fields >> x) {
      if (!(fields >> y)) reader.fail("NODE position needs x and y");
      pos = Position{x, y};
    }
    if (!at_end(fields)) reader.fail("trailing fields on NODE line");
    try {
      net.add_node(id, cpu, pos);
    } catch (const std::exception& e) {
      reader.fail(e.what());
    }
  }
  for (long i = 0; i < num_links; ++i) {
    if (!reader.next(fields) || keyword(fields) != "LINK") {
      reader.fail("expected LINK line");
    }
    NodeId u, v;
    double bw;
    if (!(fields >> u >> v >> bw) || !at_end(fields)) {
      reader.fail("malformed LINK line");
    }
    try {
      net.add_link(u, v, bw);
    } catch (const std::exception& e) {
      reader.fail(e.what());
    }
  }
  if (reader.next(fields)) reader.fail("unexpected content after links");
  return net;
}

void write_substrate(std::ostream& out, const SubstrateNetwork& net) {
  out << "SUBSTRATE " << net.node_count() << ' ' << net.link_count() << '\n';
  for (const auto& n : net.nodes()) {
    out << "NODE " << n.id << ' ' << format_real(n.cpu_capacity);
    if (n.position) {
      out << ' ' << format_real(n.position->x) << ' '
          << format_real(n.position->y);
    }
    out << '\n';
  }
  for (const auto& l : net.links()) {
    out << "LINK " << l.u << ' ' << l.v << ' ' << format_real(l.bw_capacity)
        << '\n';
  }
}

SubstrateNetwork load_substrate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open substrate file " + path);
  try {
    return read_substrate(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void save_substrate(const std::string& path, const SubstrateNetwork& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write substrate file " + path);
  write_substrate(out, net);
  if (!out) throw std::runtime_error("write failed for " + path);
}

std::vector<VirtualNetworkRequest> read_requests(std::istream& in) {
  LineReader reader(in);
  std::istringstream fields;
  if (!reader.next(fields) || keyword(fields) != "REQUESTS") {
    reader.fail("expected REQUESTS header");
  }
  long count = -1;
  if (!(fields >> count) || count < 0 || !at_end(fields)) {
    reader.fail("malformed REQUESTS header");
  }
  std::vector<VirtualNetworkRequest> requests;
  requests.reserve(static_cast<std::size_t>(count));
  for (long r = 0; r < count; ++r) {
    if (!reader.next(fields) || keyword(fields) != "VNR") {
      reader.fail("expected VNR line");
    }
    VirtualNetworkRequest vnr;
    long nodes = -1, links = -1;
    if (!(fields >> vnr.id >> vnr.arrival_time >> vnr.lifetime >> nodes >>
          links) ||
        nodes < 0 || links < 0 || !at_end(fields)) {
      reader.fail("malformed VNR line");
    }
    for (long i = 0; i < nodes; ++i) {
      VirtualNode vn;
      if (!reader.next(fields) || keyword(fields) != "VNODE" ||
          !(fields >> vn.id >> vn.cpu) || !at_end(fields)) {
        reader.fail("malformed VNODE line");
      }
      vnr.nodes.push_back(vn);
    }
    for (long i = 0; i < links; ++i) {
      VirtualLink vl;
      if (!reader.next(fields) || keyword(fields) != "VLINK" ||
          !(fields >> vl.a >> vl.b >> vl.bw) || !at_end(fields)) {
        reader.fail("malformed VLINK line");
      }
      if (vl.a > vl.b) std::swap(vl.a, vl.b);
      vnr.links.push_back(vl);
    }
    try {
      vnr.validate();
    } catch (const std::exception& e) {
      reader.fail(e.what());
    }
    if (!requests.empty() &&
        vnr.arrival_time < requests.back().arrival_time) {
      reader.fail("requests are not time-ordered");
    }
    requests.push_back(std::move(vnr));
  }
  if (reader.next(fields)) reader.fail("unexpected content after requests");
  return requests;
}

void write_requests(std::ostream& out,
                    const std::vector<VirtualNetworkRequest>& requests) {
  out << "REQUESTS " << requests.size() << '\n';
  for (const auto& vnr : requests) {
    out << "VNR " << vnr.id << ' ' << format_real(vnr.arrival_time) << ' '
        << format_real(vnr.lifetime) << ' ' << vnr.nodes.size() << ' '
        << vnr.links.size() << '\n';
    for (const auto& n : vnr.nodes) {
      out << "VNODE " << n.id << ' ' << format_real(n.cpu) << '\n';
    }
    for (const auto& l : vnr.links) {
      out << "VLINK " << l.a << ' ' << l.b << ' ' << format_real(l.bw) << '\n';
    }
  }
}

std::vector<VirtualNetworkRequest> load_requests(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open request file " + path);
  try {
    return read_requests(in);
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void save_requests(const std::string& path,
                   const std::vector<VirtualNetworkRequest>& requests) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write request file " + path);
  write_requests(out, requests);
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace vne
