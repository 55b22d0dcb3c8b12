#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace vne {

using Vector = std::vector<double>;

// Row-major dense matrix. Shape is fixed at construction.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) {
    return data_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  Vector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> values);

  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }
  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when a masked softmax has no admissible entry.
class NoFeasibleAction : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

Vector matvec(const Matrix& m, std::span<const double> x);
// mᵀ x
Vector matvec_transposed(const Matrix& m, std::span<const double> x);

Matrix multiply(const Matrix& a, const Matrix& b);
// a bᵀ
Matrix multiply_transposed(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix subtract(const Matrix& a, const Matrix& b);
double frobenius_norm(const Matrix& a);
double max_abs_difference(const Matrix& a, const Matrix& b);
bool is_symmetric(const Matrix& a, double tolerance = 0.0);

// W x + b, with b a column (rows x 1) matrix or empty.
Vector affine(std::span<const double> x, const Matrix& w, const Matrix& b);

Vector tanh(std::span<const double> x);
Vector sigmoid(std::span<const double> x);
double sigmoid(double x);

// Max-subtracted softmax over entries where mask is true; masked entries
// get exactly zero. Throws NoFeasibleAction if every entry is masked.
Vector masked_softmax(std::span<const double> logits,
                      const std::vector<bool>& mask);

Vector concat(std::span<const double> a, std::span<const double> b);

// Solves a x = b by Gaussian elimination with partial pivoting. Throws
// std::domain_error for a numerically singular system.
Vector solve(Matrix a, Vector b);

}  // namespace vne
