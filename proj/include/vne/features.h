#pragma once

#include <optional>
#include <string>

#include "vne/dense.h"
#include "vne/network.h"
#include "vne/spectral.h"

namespace vne {

enum class FeatureSource { kRaw, kFam, kMpt };

FeatureSource parse_feature_source(const std::string& text);
std::string to_string(FeatureSource source);

struct FeatureStats {
  long full_eigensolves = 0;
  long perturbation_updates = 0;
  long fallbacks = 0;
};

// [attributes | V * sqrt(max(lambda, 0))]: the attribute row followed by the
// node's coordinates in the tracked eigenspace of the full attribute matrix.
Matrix spectral_node_features(const AttributeMatrix& attr,
                              const SpectralEmbedding& emb);

// Produces the agent's node-feature matrix for the current substrate state.
//   raw: the attribute matrix alone.
//   fam: attributes plus spectral coordinates, decomposed from scratch on
//        every call.
//   mpt: same features, but the decomposition is carried from call to call
//        with perturb_update (falling back to a full solve when needed).
class FeatureTracker {
 public:
  explicit FeatureTracker(FeatureSource source, std::size_t k = 4);

  FeatureSource source() const { return source_; }
  // Column count for a substrate of `nodes` nodes; 4 + k for spectral
  // sources regardless of n.
  std::size_t width(std::size_t nodes) const;

  const Matrix& update(const SubstrateNetwork& net);
  const Matrix& features() const { return features_; }

  // Forgets the carried decomposition; the next update solves from scratch.
  void reset();

  const FeatureStats& stats() const { return stats_; }
  const std::optional<SpectralEmbedding>& spectral() const { return emb_; }

 private:
  FeatureSource source_;
  std::size_t k_;
  std::optional<Matrix> last_s_;
  std::optional<SpectralEmbedding> emb_;
  Matrix features_;
  FeatureStats stats_;
};

}  // namespace vne
