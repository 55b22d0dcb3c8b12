#pragma once

#include <optional>
#include <stdexcept>

#include "vne/dense.h"
#include "vne/network.h"

namespace vne {

// Per-node attributes, one row per substrate node in ascending id order:
//   0: residual CPU
//   1: degree
//   2: sum of residual bandwidth on adjacent links
//   3: 1 / (1 + mean hop distance to the other reachable nodes), 0 if none
// Each column is min-max normalized to [0, 1]; constant columns become 0.
struct AttributeMatrix {
  static constexpr std::size_t kColumns = 4;
  Matrix values;
};

// Dense symmetric node-similarity matrix fusing attributes and adjacency.
struct FullAttributeMatrix {
  Matrix values;
};

// Top-k eigenpairs in descending eigenvalue order.
struct SpectralEmbedding {
  Vector eigenvalues;
  Matrix eigenvectors;  // n x k, orthonormal columns
  // Upper bound on the (k+1)-th eigenvalue, absent when k == n.
  std::optional<double> next_eigenvalue;
  // Set when two tracked eigenvalues (or the last tracked and the next one)
  // coincide, so the tracked vectors are not unique.
  bool degenerate = false;

  std::size_t k() const { return eigenvalues.size(); }
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

AttributeMatrix build_attribute_matrix(const SubstrateNetwork& net);

// S = H Hᵀ with H = D^-1/2 (A + I) D^-1/2 X, where X is the attribute
// matrix and D the degree matrix of A + I.
FullAttributeMatrix fuse(const AttributeMatrix& attr,
                         const SubstrateNetwork& net);

struct EigenOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  // Relative gap below which eigenvalues are reported as degenerate.
  double degenerate_gap = 1e-8;
};

// Power iteration with deflation on the symmetric matrix `s`, shifted so the
// largest algebraic eigenvalues are found first. Each eigenvector is
// sign-fixed so its largest-magnitude entry is positive. Throws
// ConvergenceError if an eigenvector fails to settle within the cap.
SpectralEmbedding top_k_eigen(const Matrix& s, std::size_t k,
                              const EigenOptions& options = {});

struct PerturbationResult {
  SpectralEmbedding embedding;
  bool fell_back = false;
  double delta_norm = 0.0;  // ||S_new - S_old||_F
  double min_gap = 0.0;     // gap the trigger compared against
};

// Fraction of the minimum spectral gap that ||dS||_F may reach before the
// update falls back to a full decomposition.
inline constexpr double kPerturbationGapFraction = 0.1;

// First-order update of `emb` (the decomposition of `s_old`) to `s_new`.
// Falls back to top_k_eigen when ||dS||_F exceeds the gap fraction or when
// the gap is below 1e-8.
PerturbationResult perturb_update(const SpectralEmbedding& emb,
                                  const Matrix& s_old, const Matrix& s_new,
                                  const EigenOptions& options = {});

// Flips each column so its largest-magnitude entry is positive.
void fix_signs(Matrix& vectors);

}  // namespace vne
