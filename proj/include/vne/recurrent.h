#pragma once

#include <span>
#include <string>

#include "vne/dense.h"
#include "vne/parameters.h"

namespace vne {

enum class CellType { kGru, kElman };

CellType parse_cell_type(const std::string& text);

// One recurrent cell whose weights live in a Parameters set under
// "<prefix>.*".
//
// GRU:   z  = sigmoid(Wz [x; h] + bz)
//        r  = sigmoid(Wr [x; h] + br)
//        h~ = tanh(Wh [x; r*h] + bh)
//        h' = (1 - z) * h + z * h~
// Elman: h' = tanh(Wh [x; h] + bh)
class RecurrentCell {
 public:
  RecurrentCell() = default;
  RecurrentCell(CellType type, std::string prefix, std::size_t input,
                std::size_t hidden);

  CellType type() const { return type_; }
  std::size_t input_size() const { return input_; }
  std::size_t hidden_size() const { return hidden_; }

  void declare(Parameters& params) const;

  // Intermediates of one forward step, consumed by backward().
  struct Cache {
    Vector x, h;
    Vector z, r, candidate;
    Vector xh, xrh;
  };

  Vector forward(const Parameters& params, std::span<const double> x,
                 std::span<const double> h, Cache* cache = nullptr) const;

  // Given dL/dh' for the step recorded in `cache`, accumulates weight
  // gradients into `grads` and writes dL/dx and dL/dh.
  void backward(const Parameters& params, const Cache& cache,
                std::span<const double> dh_next, Parameters& grads, Vector& dx,
                Vector& dh_prev) const;

 private:
  std::string name(const char* suffix) const { return prefix_ + suffix; }

  CellType type_ = CellType::kGru;
  std::string prefix_;
  std::size_t input_ = 0;
  std::size_t hidden_ = 0;
};

}  // namespace vne
