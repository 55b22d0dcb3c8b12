#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vne/dense.h"

namespace vne {

// Named trainable weights. Entries iterate in name order, which fixes the
// order of initialization and serialization.
class Parameters {
 public:
  // Adds a zero matrix; throws std::invalid_argument on a duplicate name.
  Matrix& add(const std::string& name, std::size_t rows, std::size_t cols);

  bool contains(const std::string& name) const {
    return entries_.count(name) != 0;
  }
  Matrix& at(const std::string& name);
  const Matrix& at(const std::string& name) const;

  const std::map<std::string, Matrix>& entries() const { return entries_; }
  std::size_t scalar_count() const;

  // Uniform in [-scale, scale], deterministic in (seed, names, shapes).
  void init_uniform(double scale, std::uint64_t seed);

  // Same names and shapes, all zeros.
  Parameters zeros_like() const;

  // this += alpha * other; shapes must match exactly.
  void axpy(double alpha, const Parameters& other);

  bool same_layout(const Parameters& other) const;
  bool all_finite() const;
  bool operator==(const Parameters& other) const = default;

  // Checkpoint text: "PARAM <name> <rows> <cols>" then the entries.
  void write(std::ostream& out) const;
  static Parameters read(std::istream& in);
  void save(const std::string& path) const;
  static Parameters load(const std::string& path);

 private:
  std::map<std::string, Matrix> entries_;
};

// One decision of an episode: the admissible set, the probabilities the
// policy assigned and the index it took.
struct ActionRecord {
  std::vector<bool> mask;
  Vector probabilities;
  std::size_t chosen = 0;
};

// Exponential moving average of rewards (decay 0.9 by default). The first
// observed reward seeds the average.
class RewardBaseline {
 public:
  explicit RewardBaseline(double decay = 0.9) : decay_(decay) {}

  // Value to compare `reward` against; the reward itself when empty.
  double value_or(double reward) const { return value_ ? *value_ : reward; }
  void update(double reward);
  std::optional<double> value() const { return value_; }

 private:
  double decay_;
  std::optional<double> value_;
};

// REINFORCE ascent step on expected reward:
//   params += learning_rate * (reward - baseline) * grad_log_prob
// where grad_log_prob is the gradient of the summed log-probabilities of the
// episode's chosen actions. Throws std::domain_error if any chosen action
// had zero probability or was masked.
void reinforce_update(Parameters& params, std::span<const ActionRecord> episode,
                      const Parameters& grad_log_prob, double reward,
                      double baseline, double learning_rate);

}  // namespace vne
