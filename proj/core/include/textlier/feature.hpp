#pragma once

#include <string>
#include <vector>

namespace textlier {

/// Latent code of a document with its reconstruction error appended.
struct FeatureVector {
  std::string doc_id;
  std::vector<double> latent;
  double recon_error = 0.0;

  /// latent followed by recon_error.
  std::vector<double> values() const {
    std::vector<double> out = latent;
    out.push_back(recon_error);
    return out;
  }

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct LabeledFeature {
  FeatureVector feature;
  int label = 0;

  friend bool operator==(const LabeledFeature&, const LabeledFeature&) = default;
};

}  // namespace textlier
