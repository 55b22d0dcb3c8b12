#include "vne/spectral.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <random>

namespace vne {

namespace {

constexpr double kMinGap = 1e-8;

// Budget for the unshifted first pass before switching to a shifted run.
constexpr int kUnshiftedIterations = 1000;

// Iteration budget for the (k+1)-th pair, which only feeds the gap estimate.
constexpr int kTrailingIterations = 500;

void orthogonalize(Vector& w, const std::vector<Vector>& basis) {
  // Two passes of modified Gram-Schmidt keep w orthogonal to the deflated
  // subspace to working precision.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) {
      const double c = dot(w, b);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
    }
  }
}

double rayleigh(const Matrix& s, const Vector& v) {
  return dot(v, matvec(s, v));
}

double residual_norm(const Matrix& s, const Vector& v, double lambda) {
  Vector sv = matvec(s, v);
  for (std::size_t i = 0; i < v.size(); ++i) sv[i] -= lambda * v[i];
  return norm(sv);
}

struct PowerResult {
  Vector vector;
  double value = 0.0;
  bool converged = false;
};

// Power iteration on (S + shift I) restricted to the complement of `found`.
PowerResult power_iterate(const Matrix& s, const std::vector<Vector>& found,
                          Vector start, double shift, int max_iterations,
                          double tolerance) {
  PowerResult result;
  Vector v = std::move(start);
  // Residual floor relative to the operator size. Inside a (near-)degenerate
  // eigenspace the vector never settles, but any member is a valid answer.
  const double residual_floor =
      tolerance * std::max(1.0, frobenius_norm(s) + std::abs(shift));
  for (int it = 0; it < max_iterations; ++it) {
    Vector w = matvec(s, v);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += shift * v[i];
    orthogonalize(w, found);
    const double rho = dot(v, w);
    double residual = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      residual += (w[i] - rho * v[i]) * (w[i] - rho * v[i]);
    }
    if (std::sqrt(residual) < residual_floor) {
      result.converged = true;
      break;
    }
    const double nw = norm(w);
    if (nw == 0.0) {
      // v spans a null direction of the shifted operator.
      result.converged = true;
      break;
    }
    double same = 0.0, flipped = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] /= nw;
      same += (w[i] - v[i]) * (w[i] - v[i]);
      flipped += (w[i] + v[i]) * (w[i] + v[i]);
    }
    v = std::move(w);
    if (std::sqrt(std::min(same, flipped)) < tolerance) {
      result.converged = true;
      break;
    }
  }
  result.value = rayleigh(s, v);
  result.vector = std::move(v);
  return result;
}

Vector start_vector(std::size_t n, std::size_t index,
                    const std::vector<Vector>& found) {
  std::mt19937_64 rng(0x5eed0000u + index);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (auto& x : v) x = dist(rng);
  orthogonalize(v, found);
  double nv = norm(v);
  for (std::size_t e = 0; nv < 1e-8 && e < n; ++e) {
    // Fall back to coordinate directions.
    std::fill(v.begin(), v.end(), 0.0);
    v[e] = 1.0;
    orthogonalize(v, found);
    nv = norm(v);
  }
  for (auto& x : v) x /= nv;
  return v;
}

// Largest algebraic eigenpair of `s` on the complement of `found`.
PowerResult next_eigenpair(const Matrix& s, const std::vector<Vector>& found,
                           std::size_t index, int max_iterations,
                           double tolerance) {
  const Vector start = start_vector(s.rows(), index, found);
  PowerResult plain =
      power_iterate(s, found, start, 0.0,
                    std::min(max_iterations, kUnshiftedIterations), tolerance);
  if (plain.converged && plain.value >= 0.0) return plain;
  // Either the dominant-magnitude eigenvalue is negative or the iteration is
  // oscillating between +/- pairs. Shifting by the magnitude estimate makes
  // the operator positive semidefinite on the complement.
  double magnitude = std::abs(plain.value);
  if (!plain.converged) {
    magnitude = norm(matvec(s, plain.vector));
  }
  return power_iterate(s, found, start, magnitude, max_iterations, tolerance);
}

}  // namespace

void fix_signs(Matrix& vectors) {
  for (std::size_t c = 0; c < vectors.cols(); ++c) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < vectors.rows(); ++r) {
      if (std::abs(vectors(r, c)) > std::abs(vectors(best, c))) best = r;
    }
    if (vectors(best, c) < 0.0) {
      for (std::size_t r = 0; r < vectors.rows(); ++r) vectors(r, c) *= -1.0;
    }
  }
}

AttributeMatrix build_attribute_matrix(const SubstrateNetwork& net) {
  if (net.empty()) throw std::invalid_argument("attribute matrix of empty net");
  const std::size_t n = net.node_count();
  const auto links = net.links();
  AttributeMatrix attr{Matrix(n, AttributeMatrix::kColumns)};
  auto& m = attr.values;
  for (std::size_t i = 0; i < n; ++i) {
    m(i, 0) = net.nodes()[i].cpu_available;
    double bw = 0.0;
    for (const auto& adj : net.adjacent(i)) bw += links[adj.link].bw_available;
    m(i, 1) = static_cast<double>(net.adjacent(i).size());
    m(i, 2) = bw;

    std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
    std::deque<std::size_t> queue{i};
    dist[i] = 0;
    double total = 0.0;
    std::size_t reached = 0;
    while (!queue.empty()) {
      std::size_t u = queue.front();
      queue.pop_front();
      for (const auto& adj : net.adjacent(u)) {
        if (dist[adj.node] == std::numeric_limits<std::size_t>::max()) {
          dist[adj.node] = dist[u] + 1;
          total += static_cast<double>(dist[adj.node]);
          ++reached;
          queue.push_back(adj.node);
        }
      }
    }
    m(i, 3) = reached ? 1.0 / (1.0 + total / static_cast<double>(reached))
                      : 0.0;
  }
  for (std::size_t c = 0; c < AttributeMatrix::kColumns; ++c) {
    double lo = m(0, c), hi = m(0, c);
    for (std::size_t i = 1; i < n; ++i) {
      lo = std::min(lo, m(i, c));
      hi = std::max(hi, m(i, c));
    }
    for (std::size_t i = 0; i < n; ++i) {
      m(i, c) = hi > lo ? (m(i, c) - lo) / (hi - lo) : 0.0;
    }
  }
  return attr;
}

FullAttributeMatrix fuse(const AttributeMatrix& attr,
                         const SubstrateNetwork& net) {
  const std::size_t n = net.node_count();
  if (attr.values.rows() != n) {
    throw ShapeError("fuse: attribute rows do not match node count");
  }
  std::vector<double> inv_sqrt_degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    inv_sqrt_degree[i] =
        1.0 / std::sqrt(static_cast<double>(net.adjacent(i).size()) + 1.0);
  }
  // H = Â X, using the sparsity of A + I.
  const Matrix& x = attr.values;
  Matrix h(n, x.cols());
  for (std::size_t i = 0; i < n; ++i) {
    auto add_row = [&](std::size_t j) {
      const double w = inv_sqrt_degree[i] * inv_sqrt_degree[j];
      for (std::size_t c = 0; c < x.cols(); ++c) h(i, c) += w * x(j, c);
    };
    add_row(i);
    for (const auto& adj : net.adjacent(i)) add_row(adj.node);
  }
  return FullAttributeMatrix{multiply_transposed(h, h)};
}

SpectralEmbedding top_k_eigen(const Matrix& s, std::size_t k,
                              const EigenOptions& options) {
  const std::size_t n = s.rows();
  if (s.cols() != n) throw ShapeError("top_k_eigen: matrix is not square");
  if (k < 1 || k > n) throw std::invalid_argument("top_k_eigen: need 1<=k<=n");

  std::vector<Vector> found;
  std::vector<double> values;
  for (std::size_t i = 0; i < k; ++i) {
    PowerResult pair = next_eigenpair(s, found, i, options.max_iterations,
                                      options.tolerance);
    if (!pair.converged) {
      const double res = residual_norm(s, pair.vector, pair.value);
      throw ConvergenceError("top_k_eigen: eigenpair " + std::to_string(i) +
                                 " did not converge (residual " +
                                 std::to_string(res) + ")",
                             res);
    }
    values.push_back(pair.value);
    found.push_back(std::move(pair.vector));
  }

  SpectralEmbedding emb;
  if (k < n) {
    PowerResult trailing =
        next_eigenpair(s, found, k, kTrailingIterations, options.tolerance);
    emb.next_eigenvalue = trailing.value;
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] > values[b];
  });
  emb.eigenvalues.resize(k);
  emb.eigenvectors = Matrix(n, k);
  for (std::size_t c = 0; c < k; ++c) {
    emb.eigenvalues[c] = values[order[c]];
    emb.eigenvectors.set_column(c, found[order[c]]);
  }
  fix_signs(emb.eigenvectors);

  const double scale = std::max(1.0, std::abs(emb.eigenvalues.front()));
  for (std::size_t c = 0; c + 1 < k; ++c) {
    if (emb.eigenvalues[c] - emb.eigenvalues[c + 1] <
        options.degenerate_gap * scale) {
      emb.degenerate = true;
    }
  }
  if (emb.next_eigenvalue &&
      std::abs(emb.eigenvalues.back() - *emb.next_eigenvalue) <
          options.degenerate_gap * scale) {
    emb.degenerate = true;
  }
  return emb;
}

PerturbationResult perturb_update(const SpectralEmbedding& emb,
                                  const Matrix& s_old, const Matrix& s_new,
                                  const EigenOptions& options) {
  const std::size_t n = s_old.rows();
  const std::size_t k = emb.k();
  if (!s_old.same_shape(s_new) || s_old.cols() != n ||
      emb.eigenvectors.rows() != n || emb.eigenvectors.cols() != k) {
    throw ShapeError("perturb_update: dimension mismatch");
  }
  const Matrix delta = subtract(s_new, s_old);

  PerturbationResult result;
  result.delta_norm = frobenius_norm(delta);
  result.min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < k; ++i) {
    result.min_gap = std::min(result.min_gap,
                              emb.eigenvalues[i] - emb.eigenvalues[i + 1]);
  }
  if (emb.next_eigenvalue) {
    result.min_gap =
        std::min(result.min_gap, emb.eigenvalues.back() - *emb.next_eigenvalue);
  }
  if (result.delta_norm == 0.0) {
    result.embedding = emb;
    return result;
  }
  if (result.min_gap < kMinGap ||
      result.delta_norm > kPerturbationGapFraction * result.min_gap) {
    result.embedding = top_k_eigen(s_new, k, options);
    result.fell_back = true;
    return result;
  }

  const Matrix& v = emb.eigenvectors;
  const auto& lambda = emb.eigenvalues;
  std::vector<Vector> basis(k);
  for (std::size_t j = 0; j < k; ++j) basis[j] = v.column(j);

  // Residual form of the first-order correction: r_i = S_new v_i - l_i v_i.
  // For an exact decomposition of S_old, r_i = dS v_i, and the coefficients
  // below reduce to v_jᵀ dS v_i. Any drift carried in by earlier updates is
  // corrected in the same step instead of accumulating.
  std::vector<Vector> updated(k);
  Vector new_lambda(k);
  for (std::size_t i = 0; i < k; ++i) {
    Vector r = matvec(s_new, basis[i]);
    for (std::size_t a = 0; a < n; ++a) r[a] -= lambda[i] * basis[i][a];
    Vector coeff(k);
    for (std::size_t j = 0; j < k; ++j) coeff[j] = dot(basis[j], r);
    new_lambda[i] = lambda[i] + coeff[i];

    Vector vi = basis[i];
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const double w = coeff[j] / (lambda[i] - lambda[j]);
      for (std::size_t a = 0; a < n; ++a) vi[a] += w * basis[j][a];
    }
    if (k < n) {
      // Contribution from the untracked eigenvectors:
      // (l_i - S_old)^-1 restricted to the complement of the tracked space.
      Vector outside = r;
      for (std::size_t j = 0; j < k; ++j) {
        for (std::size_t a = 0; a < n; ++a) outside[a] -= coeff[j] * basis[j][a];
      }
      Matrix m(n, n);
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) m(a, b) = -s_old(a, b);
        m(a, a) += lambda[i];
      }
      // Tracked directions get eigenvalue 1 so the system is regular.
      for (std::size_t j = 0; j < k; ++j) {
        const double lift = 1.0 - (lambda[i] - lambda[j]);
        for (std::size_t a = 0; a < n; ++a) {
          for (std::size_t b = 0; b < n; ++b) {
            m(a, b) += lift * basis[j][a] * basis[j][b];
          }
        }
      }
      Vector x = solve(std::move(m), std::move(outside));
      orthogonalize(x, basis);
      for (std::size_t a = 0; a < n; ++a) vi[a] += x[a];
    }
    updated[i] = std::move(vi);
  }

  // Re-orthonormalize in descending eigenvalue order.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return new_lambda[a] > new_lambda[b];
  });
  SpectralEmbedding out;
  out.eigenvalues.resize(k);
  out.eigenvectors = Matrix(n, k);
  std::vector<Vector> done;
  for (std::size_t c = 0; c < k; ++c) {
    Vector vi = updated[order[c]];
    orthogonalize(vi, done);
    const double nv = norm(vi);
    for (auto& x : vi) x /= nv;
    out.eigenvalues[c] = new_lambda[order[c]];
    out.eigenvectors.set_column(c, vi);
    done.push_back(std::move(vi));
  }
  fix_signs(out.eigenvectors);
  if (emb.next_eigenvalue) {
    // Weyl: the untracked eigenvalues move by at most ||dS||_2 <= ||dS||_F.
    out.next_eigenvalue = *emb.next_eigenvalue + result.delta_norm;
  }
  const double scale = std::max(1.0, std::abs(out.eigenvalues.front()));
  for (std::size_t c = 0; c + 1 < k; ++c) {
    if (out.eigenvalues[c] - out.eigenvalues[c + 1] <
        options.degenerate_gap * scale) {
      out.degenerate = true;
    }
  }
  result.embedding = std::move(out);
  return result;
}

}  // namespace vne
