#include "vne/features.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vne {

FeatureSource parse_feature_source(const std::string& text) {
  if (text == "raw") return FeatureSource::kRaw;
  if (text == "fam") return FeatureSource::kFam;
  if (text == "mpt") return FeatureSource::kMpt;
  throw std::invalid_argument("unknown feature source '" + text + "'");
}

std::string to_string(FeatureSource source) {
  switch (source) {
    case FeatureSource::kRaw: return "raw";
    case FeatureSource::kFam: return "fam";
    case FeatureSource::kMpt: return "mpt";
  }
  return "?";
}

Matrix spectral_node_features(const AttributeMatrix& attr,
                              const SpectralEmbedding& emb) {
  const Matrix& a = attr.values;
  const std::size_t n = a.rows();
  const std::size_t k = emb.k();
  Matrix out(n, a.cols() + k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < a.cols(); ++c) out(i, c) = a(i, c);
    for (std::size_t j = 0; j < k; ++j) {
      out(i, a.cols() + j) =
          emb.eigenvectors(i, j) * std::sqrt(std::max(emb.eigenvalues[j], 0.0));
    }
  }
  return out;
}

FeatureTracker::FeatureTracker(FeatureSource source, std::size_t k)
    : source_(source), k_(k) {
  if (k == 0) throw std::invalid_argument("spectral k must be positive");
}

std::size_t FeatureTracker::width(std::size_t /*nodes*/) const {
  if (source_ == FeatureSource::kRaw) return AttributeMatrix::kColumns;
  return AttributeMatrix::kColumns + k_;
}

void FeatureTracker::reset() {
  last_s_.reset();
  emb_.reset();
}

const Matrix& FeatureTracker::update(const SubstrateNetwork& net) {
  AttributeMatrix attr = build_attribute_matrix(net);
  if (source_ == FeatureSource::kRaw) {
    features_ = std::move(attr.values);
    return features_;
  }
  Matrix s = fuse(attr, net).values;
  const std::size_t k = std::min(k_, net.node_count());
  const bool incremental = source_ == FeatureSource::kMpt && last_s_ &&
                           emb_ && last_s_->same_shape(s);
  if (incremental) {
    PerturbationResult step = perturb_update(*emb_, *last_s_, s);
    ++stats_.perturbation_updates;
    if (step.fell_back) {
      ++stats_.fallbacks;
      ++stats_.full_eigensolves;
    }
    emb_ = std::move(step.embedding);
  } else {
    emb_ = top_k_eigen(s, k);
    ++stats_.full_eigensolves;
  }
  last_s_ = std::move(s);
  Matrix spectral = spectral_node_features(attr, *emb_);
  // Zero-pad when the substrate has fewer than k nodes so the width, and
  // hence the agent's parameter layout, does not depend on n.
  features_ = Matrix(spectral.rows(), width(net.node_count()));
  for (std::size_t i = 0; i < spectral.rows(); ++i) {
    std::copy(spectral.row(i).begin(), spectral.row(i).end(),
              features_.row(i).begin());
  }
  return features_;
}

}  // namespace vne
