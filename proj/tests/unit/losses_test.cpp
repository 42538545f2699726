#include <gtest/gtest.h>

#include <cmath>

#include "aurora/losses.hpp"
#include "loss_oracles.hpp"

namespace aurora {
namespace {

using testing::RandomVideoOutputs;

TEST(Losses, UniformLogitsGiveLogOfClassCount) {
  ad::Tape tape;
  CueOutputs o;
  o.depth_logits = ad::Tensor::constant({kDepthBins, 2, 2}, std::vector<double>(64, 0.3));
  o.material_logits = ad::Tensor::constant({kMaterialClasses, 2, 2}, std::vector<double>(16, -1.0));
  const CueTargets t{{0, 5, 15, 7}, {0, 1, 2, 3}};
  const std::vector<CueOutputs> outs{o};
  const std::vector<CueTargets> targets{t};
  EXPECT_NEAR(loss_reconstruction(tape, outs, targets, 1.0, 0.0).item(), 4 * std::log(16.0), 1e-12);
  EXPECT_NEAR(loss_reconstruction(tape, outs, targets, 0.0, 1.0).item(), 4 * std::log(4.0), 1e-12);
  EXPECT_NEAR(loss_reconstruction(tape, outs, targets, 0.5, 0.5).item(),
              2 * std::log(16.0) + 2 * std::log(4.0), 1e-12);
  EXPECT_EQ(loss_reconstruction(tape, outs, targets, 0.0, 0.0).item(), 0.0);
}

TEST(Losses, HalfProbabilityGivesLogTwo) {
  ad::Tape tape;
  const std::vector<ad::Tensor> s{ad::Tensor::constant({1}, {0.5}), ad::Tensor::constant({1}, {0.5})};
  const std::vector<double> labels{1.0, 0.0};
  EXPECT_NEAR(loss_classification(tape, s, labels).item(), std::log(2.0), 1e-12);
}

TEST(Losses, ExactRegressionIsZero) {
  ad::Tape tape;
  const Residual r{1, -1, 0, 0, 0.25};
  const std::vector<ad::Tensor> p{ad::Tensor::constant({5}, {1, -1, 0, 0, 0.25})};
  const std::vector<Residual> t{r};
  EXPECT_EQ(loss_regression(tape, p, t).item(), 0.0);
}

TEST(Losses, RegressionLengthMismatchThrows) {
  ad::Tape tape;
  const std::vector<ad::Tensor> p{ad::Tensor::constant({5}, std::vector<double>(5, 0.0))};
  const std::vector<Residual> t(2);
  EXPECT_THROW(loss_regression(tape, p, t), ValidationError);
}

TEST(Losses, NegativeWeightsRejected) {
  LossWeights w;
  w.lambda_cls = -1.0;
  EXPECT_THROW(w.validate(), ValidationError);
}

TEST(Losses, TotalIsHalfTheMeanOfWeightedSums) {
  ad::Tape tape;
  LossWeights w;
  w.lambda_cls = 2.0;
  w.lambda_reg = 0.25;
  std::vector<VideoLoss> v(2);
  v[0] = {ad::Tensor::constant({1}, {1.0}), ad::Tensor::constant({1}, {3.0}),
          ad::Tensor::constant({1}, {8.0})};
  v[1] = {ad::Tensor::constant({1}, {4.0}), {}, {}};
  EXPECT_NEAR(loss_total(tape, v, w).item(), (1.0 + 6.0 + 2.0 + 4.0) / 4.0, 1e-12);
}

TEST(Losses, MatchScalarOraclesOnRandomBatches) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int videos = 1 + seed % 3;
    LossWeights w;
    w.lambda_dep = 0.1 * (seed % 6);
    w.lambda_mat = 0.1 * ((seed + 3) % 6);
    w.lambda_cls = 0.5 + 0.25 * (seed % 3);
    w.lambda_reg = 1.5 - 0.5 * (seed % 2);
    ad::Tape tape;
    std::vector<VideoLoss> parts;
    double expected = 0.0;
    for (int v = 0; v < videos; ++v) {
      const RandomVideoOutputs r(seed * 10 + v, 1 + (seed + v) % 4, 2 + seed % 2);
      const auto outs = r.outputs();
      const auto scores = r.score_tensors();
      const auto preds = r.prediction_tensors();
      VideoLoss vl{loss_reconstruction(tape, outs, r.targets, w.lambda_dep, w.lambda_mat),
                   loss_classification(tape, scores, r.labels),
                   loss_regression(tape, preds, r.residuals)};
      EXPECT_NEAR(vl.rec.item(), r.rec_oracle(w.lambda_dep, w.lambda_mat), 1e-9);
      EXPECT_NEAR(vl.cls.item(), r.cls_oracle(), 1e-9);
      EXPECT_NEAR(vl.reg.item(), r.reg_oracle(), 1e-9);
      expected += r.rec_oracle(w.lambda_dep, w.lambda_mat) + w.lambda_cls * r.cls_oracle() +
                  w.lambda_reg * r.reg_oracle();
      parts.push_back(vl);
    }
    EXPECT_NEAR(loss_total(tape, parts, w).item(), expected / (2.0 * videos), 1e-9);
  }
}

}  // namespace
}  // namespace aurora
