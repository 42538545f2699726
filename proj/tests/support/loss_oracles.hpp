#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "aurora/losses.hpp"
#include "test_support.hpp"

namespace aurora::testing {

/// Scalar-loop oracles written without the tensor library.
inline double naive_pixel_ce(const std::vector<double>& logits, int classes, int pixels,
                             const std::vector<int>& labels) {
  double total = 0.0;
  for (int p = 0; p < pixels; ++p) {
    double mx = logits[p];
    for (int c = 1; c < classes; ++c) mx = std::max(mx, logits[c * pixels + p]);
    double z = 0.0;
    for (int c = 0; c < classes; ++c) z += std::exp(logits[c * pixels + p] - mx);
    total -= logits[labels[p] * pixels + p] - mx - std::log(z);
  }
  return total;
}

inline double naive_bce(double p, double t) { return -t * std::log(p) - (1 - t) * std::log(1 - p); }

inline double naive_sq(const std::vector<double>& a, const Residual& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

/// A random mini-batch of network outputs and targets for one video.
struct RandomVideoOutputs {
  int m = 0;
  int side = 0;
  std::vector<std::vector<double>> depth, material;  // logits per cue
  std::vector<CueTargets> targets;
  std::vector<double> scores, labels;
  std::vector<std::vector<double>> predictions;
  std::vector<Residual> residuals;

  RandomVideoOutputs(std::uint64_t seed, int cues, int side_) : m(cues), side(side_) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 2.0);
    std::uniform_real_distribution<double> u(0.02, 0.98);
    std::uniform_int_distribution<int> dep(0, kDepthBins - 1), mat(0, kMaterialClasses - 1);
    const int px = side * side;
    const double live = u(rng) < 0.5 ? 1.0 : 0.0;
    for (int i = 0; i < m; ++i) {
      std::vector<double> d(kDepthBins * px), ma(kMaterialClasses * px), pr(kResidualSize);
      for (double& v : d) v = n(rng);
      for (double& v : ma) v = n(rng);
      for (double& v : pr) v = n(rng);
      CueTargets t;
      for (int p = 0; p < px; ++p) {
        t.depth.push_back(dep(rng));
        t.material.push_back(mat(rng));
      }
      Residual r;
      for (double& v : r) v = n(rng);
      depth.push_back(d);
      material.push_back(ma);
      targets.push_back(t);
      scores.push_back(u(rng));
      labels.push_back(live);
      predictions.push_back(pr);
      residuals.push_back(r);
    }
  }

  std::vector<CueOutputs> outputs() const {
    std::vector<CueOutputs> out;
    for (int i = 0; i < m; ++i) {
      CueOutputs o;
      o.depth_logits = ad::Tensor::constant({kDepthBins, side, side}, depth[i]);
      o.material_logits = ad::Tensor::constant({kMaterialClasses, side, side}, material[i]);
      o.cls_score = ad::Tensor::constant({1}, {scores[i]});
      out.push_back(o);
    }
    return out;
  }
  std::vector<ad::Tensor> score_tensors() const {
    std::vector<ad::Tensor> out;
    for (double s : scores) out.push_back(ad::Tensor::constant({1}, {s}));
    return out;
  }
  std::vector<ad::Tensor> prediction_tensors() const {
    std::vector<ad::Tensor> out;
    for (const auto& p : predictions) out.push_back(ad::Tensor::constant({kResidualSize}, p));
    return out;
  }

  double rec_oracle(double ld, double lm) const {
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      total += ld * naive_pixel_ce(depth[i], kDepthBins, side * side, targets[i].depth) +
               lm * naive_pixel_ce(material[i], kMaterialClasses, side * side, targets[i].material);
    }
    return total / m;
  }
  double cls_oracle() const {
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += naive_bce(scores[i], labels[i]);
    return total / m;
  }
  double reg_oracle() const {
    double total = 0.0;
    for (int i = 0; i < m; ++i) total += naive_sq(predictions[i], residuals[i]);
    return total / m;
  }
};

}  // namespace aurora::testing
