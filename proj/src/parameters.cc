#include "vne/parameters.h"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>

#include "vne/network_io.h"

namespace vne {

Matrix& Parameters::add(const std::string& name, std::size_t rows,
                        std::size_t cols) {
  auto [it, inserted] = entries_.emplace(name, Matrix(rows, cols));
  if (!inserted) throw std::invalid_argument("duplicate parameter " + name);
  return it->second;
}

Matrix& Parameters::at(const std::string& name) {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("no parameter " + name);
  return it->second;
}

const Matrix& Parameters::at(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw std::out_of_range("no parameter " + name);
  return it->second;
}

std::size_t Parameters::scalar_count() const {
  std::size_t n = 0;
  for (const auto& [name, m] : entries_) n += m.size();
  return n;
}

void Parameters::init_uniform(double scale, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (auto& [name, m] : entries_) {
    for (double& v : m.values()) v = dist(rng);
  }
}

Parameters Parameters::zeros_like() const {
  Parameters out;
  for (const auto& [name, m] : entries_) out.add(name, m.rows(), m.cols());
  return out;
}

bool Parameters::same_layout(const Parameters& other) const {
  if (entries_.size() != other.entries_.size()) return false;
  auto a = entries_.begin();
  auto b = other.entries_.begin();
  for (; a != entries_.end(); ++a, ++b) {
    if (a->first != b->first || !a->second.same_shape(b->second)) return false;
  }
  return true;
}

void Parameters::axpy(double alpha, const Parameters& other) {
  if (!same_layout(other)) throw ShapeError("axpy: parameter layout mismatch");
  auto b = other.entries_.begin();
  for (auto& [name, m] : entries_) {
    auto dst = m.values();
    auto src = (b++)->second.values();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += alpha * src[i];
  }
}

bool Parameters::all_finite() const {
  for (const auto& [name, m] : entries_) {
    for (double v : m.values()) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

void Parameters::write(std::ostream& out) const {
  for (const auto& [name, m] : entries_) {
    out << "PARAM " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (c) out << ' ';
        out << format_real(m(r, c));
      }
      out << '\n';
    }
  }
}

Parameters Parameters::read(std::istream& in) {
  Parameters params;
  std::string word;
  while (in >> word) {
    if (word != "PARAM") {
      throw FormatError("checkpoint: expected PARAM, got '" + word + "'");
    }
    std::string name;
    std::size_t rows = 0, cols = 0;
    if (!(in >> name >> rows >> cols)) {
      throw FormatError("checkpoint: malformed PARAM header");
    }
    Matrix& m = params.add(name, rows, cols);
    for (double& v : m.values()) {
      if (!(in >> v)) {
        throw FormatError("checkpoint: too few entries for " + name);
      }
    }
  }
  return params;
}

void Parameters::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  write(out);
  if (!out) throw std::runtime_error("write failed for " + path);
}

Parameters Parameters::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  return read(in);
}

void RewardBaseline::update(double reward) {
  value_ = value_ ? decay_ * *value_ + (1.0 - decay_) * reward : reward;
}

void reinforce_update(Parameters& params, std::span<const ActionRecord> episode,
                      const Parameters& grad_log_prob, double reward,
                      double baseline, double learning_rate) {
  for (const auto& step : episode) {
    if (step.chosen >= step.probabilities.size() ||
        step.chosen >= step.mask.size() || !step.mask[step.chosen] ||
        !(step.probabilities[step.chosen] > 0.0)) {
      throw std::domain_error(
          "reinforce_update: chosen action had zero probability");
    }
  }
  const double advantage = reward - baseline;
  if (advantage == 0.0 || learning_rate == 0.0) return;
  params.axpy(learning_rate * advantage, grad_log_prob);
}

}  // namespace vne
