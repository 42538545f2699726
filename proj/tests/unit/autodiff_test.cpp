#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "aurora/checkpoint.hpp"
#include "aurora/optim.hpp"
#include "test_support.hpp"

namespace aurora::ad {
namespace {

using aurora::testing::gradient_check;
using aurora::testing::random_values;

constexpr double kRelTol = 1e-3;

Tensor random_param(const Shape& shape, std::uint64_t seed) {
  std::vector<double> v = random_values(element_count(shape), seed);
  // Keep values away from the relu kink so finite differences stay smooth.
  for (double& x : v) x = x < 0 ? x - 0.05 : x + 0.05;
  return Tensor::parameter(shape, v);
}

// A random linear functional of the output, so every output element matters.
Tensor project(Tape& tape, const Tensor& y, std::uint64_t seed) {
  const Tensor w = Tensor::constant({static_cast<int>(y.size()), 1}, random_values(y.size(), seed));
  return sum(tape, matmul(tape, flatten(tape, y), w));
}

TEST(Ops, ConvIdentityKernelCopiesInput) {
  Tape tape;
  const Tensor x = Tensor::constant({1, 4, 5}, random_values(20, 3));
  const Tensor w = Tensor::constant({1, 1, 1, 1}, {1.0});
  const Tensor b = Tensor::constant({1}, {0.0});
  const Tensor y = conv2d(tape, x, w, b, 1, 0);
  ASSERT_EQ(y.shape(), x.shape());
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_EQ(y.values()[i], x.values()[i]);
}

TEST(Ops, ConvMatchesDirectSum) {
  Tape tape;
  const Tensor x = Tensor::constant({2, 5, 5}, random_values(50, 1));
  const Tensor w = Tensor::constant({3, 2, 3, 3}, random_values(54, 2));
  const Tensor b = Tensor::constant({3}, random_values(3, 3));
  const Tensor y = conv2d(tape, x, w, b, 2, 1);
  ASSERT_EQ(y.shape(), (Shape{3, 3, 3}));
  auto xv = [&](int c, int r, int q) {
    if (r < 0 || q < 0 || r >= 5 || q >= 5) return 0.0;
    return x.values()[(c * 5 + r) * 5 + q];
  };
  for (int o = 0; o < 3; ++o)
    for (int r = 0; r < 3; ++r)
      for (int q = 0; q < 3; ++q) {
        double acc = b.values()[o];
        for (int c = 0; c < 2; ++c)
          for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
              acc += w.values()[((o * 2 + c) * 3 + i) * 3 + j] * xv(c, 2 * r - 1 + i, 2 * q - 1 + j);
        EXPECT_NEAR(y.values()[(o * 3 + r) * 3 + q], acc, 1e-12);
      }
}

TEST(Ops, ReluBlocksGradientAtNegativeInput) {
  Tape tape;
  Tensor x = Tensor::parameter({4}, {-1.0, -0.5, 0.5, 2.0});
  tape.backward(sum(tape, relu(tape, x)));
  EXPECT_EQ(x.grad()[0], 0.0);
  EXPECT_EQ(x.grad()[1], 0.0);
  EXPECT_EQ(x.grad()[2], 1.0);
  EXPECT_EQ(x.grad()[3], 1.0);
}

TEST(Ops, ShapeMismatchThrows) {
  Tape tape;
  const Tensor a = Tensor::constant({2, 3}, std::vector<double>(6, 1.0));
  const Tensor b = Tensor::constant({2, 3}, std::vector<double>(6, 1.0));
  EXPECT_THROW(matmul(tape, a, b), ValidationError);
  EXPECT_THROW(add(tape, a, Tensor::constant({3}, {1, 2, 3})), ValidationError);
  EXPECT_THROW(Tensor::constant({2, 2}, {1.0}), ValidationError);
}

TEST(Ops, InferenceRecordsNothing) {
  Tape tape;
  const Tensor x = Tensor::constant({1, 4, 4}, random_values(16, 1));
  relu(tape, upsample2x(tape, x));
  EXPECT_EQ(tape.recorded(), 0u);
}

TEST(Ops, SoftmaxSumsToOnePerPixel) {
  Tape tape;
  const Tensor y = softmax_channels(tape, Tensor::constant({4, 2, 3}, random_values(24, 5, -5, 5)));
  for (int p = 0; p < 6; ++p) {
    double s = 0.0;
    for (int c = 0; c < 4; ++c) s += y.values()[c * 6 + p];
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

struct OpCase {
  const char* name;
  std::function<Tensor(Tape&, std::vector<Tensor>&)> build;
  std::vector<Shape> inputs;
};

class OpGradient : public ::testing::TestWithParam<int> {};

std::vector<OpCase> op_cases() {
  return {
      {"conv2d_stride1",
       [](Tape& t, auto& p) { return conv2d(t, p[0], p[1], p[2], 1, 1); },
       {{2, 5, 5}, {3, 2, 3, 3}, {3}}},
      {"conv2d_stride2",
       [](Tape& t, auto& p) { return conv2d(t, p[0], p[1], p[2], 2, 1); },
       {{2, 6, 6}, {2, 2, 3, 3}, {2}}},
      {"relu", [](Tape& t, auto& p) { return relu(t, p[0]); }, {{2, 3, 3}}},
      {"sigmoid", [](Tape& t, auto& p) { return sigmoid(t, p[0]); }, {{7}}},
      {"upsample2x", [](Tape& t, auto& p) { return upsample2x(t, p[0]); }, {{2, 3, 2}}},
      {"add", [](Tape& t, auto& p) { return add(t, p[0], p[1]); }, {{2, 2, 2}, {2, 2, 2}}},
      {"scale", [](Tape& t, auto& p) { return scale(t, p[0], -1.7); }, {{5}}},
      {"matmul", [](Tape& t, auto& p) { return matmul(t, p[0], p[1]); }, {{3, 4}, {4, 2}}},
      {"flatten", [](Tape& t, auto& p) { return flatten(t, p[0]); }, {{2, 2, 3}}},
      {"reshape", [](Tape& t, auto& p) { return reshape(t, p[0], {3, 4}); }, {{2, 6}}},
      {"softmax_channels", [](Tape& t, auto& p) { return softmax_channels(t, p[0]); }, {{4, 2, 2}}},
      {"mean", [](Tape& t, auto& p) { return mean(t, p[0]); }, {{3, 3}}},
      {"sum", [](Tape& t, auto& p) { return sum(t, p[0]); }, {{3, 3}}},
      {"channel_mean", [](Tape& t, auto& p) { return channel_mean(t, p[0]); }, {{3, 2, 2}}},
      {"slice_channels", [](Tape& t, auto& p) { return slice_channels(t, p[0], 1, 3); }, {{4, 2, 2}}},
      {"concat_channels",
       [](Tape& t, auto& p) { return concat_channels(t, {p[0], p[1]}); },
       {{1, 2, 2}, {2, 2, 2}}},
      {"linear", [](Tape& t, auto& p) { return linear(t, p[0], p[1], p[2]); }, {{4}, {3, 4}, {3}}},
      {"softmax_cross_entropy",
       [](Tape& t, auto& p) {
         static const std::vector<int> labels{0, 3, 2, 1, 1, 0};
         return softmax_cross_entropy(t, p[0], labels);
       },
       {{4, 2, 3}}},
      {"binary_cross_entropy",
       [](Tape& t, auto& p) {
         return add(t, binary_cross_entropy(t, sigmoid(t, slice_channels(t, p[0], 0, 1)), 1.0),
                    binary_cross_entropy(t, sigmoid(t, slice_channels(t, p[0], 1, 2)), 0.0));
       },
       {{2, 1, 1}}},
      {"squared_error",
       [](Tape& t, auto& p) {
         static const std::vector<double> target{0.3, -0.2, 0.9};
         return squared_error(t, p[0], target);
       },
       {{3}}},
  };
}

TEST_P(OpGradient, MatchesFiniteDifferences) {
  const OpCase c = op_cases()[GetParam()];
  std::vector<Tensor> params;
  for (std::size_t i = 0; i < c.inputs.size(); ++i) {
    params.push_back(random_param(c.inputs[i], 10 * GetParam() + i));
  }
  const double err = gradient_check(params, [&](Tape& tape) {
    return project(tape, c.build(tape, params), 77 + GetParam());
  });
  EXPECT_LT(err, kRelTol) << c.name;
}

INSTANTIATE_TEST_SUITE_P(AllOps, OpGradient,
                         ::testing::Range(0, static_cast<int>(op_cases().size())),
                         [](const auto& info) { return std::string(op_cases()[info.param].name); });

TEST(Optimizer, ZeroGradientLeavesParametersUnchanged) {
  std::vector<double> p{0.3, -1.2, 4.0};
  const std::vector<double> before = p;
  const std::vector<double> g(3, 0.0);
  std::vector<double> v(3, 0.0);
  OptimizerState s;
  for (int i = 0; i < 10; ++i) rmsprop_update(p, g, v, s);
  EXPECT_EQ(p, before);
}

TEST(Optimizer, SingleStepMatchesClosedForm) {
  std::vector<double> p{1.0};
  const std::vector<double> g{0.5};
  std::vector<double> v{0.0};
  OptimizerState s;
  rmsprop_update(p, g, v, s);
  const double v1 = 0.1 * 0.25;
  EXPECT_DOUBLE_EQ(v[0], v1);
  EXPECT_DOUBLE_EQ(p[0], 1.0 - 1e-3 * 0.5 / (std::sqrt(v1) + 1e-8));
}

TEST(Optimizer, ConstantGradientStepApproachesLearningRate) {
  std::vector<double> p{0.0};
  const double g = 2.5;
  std::vector<double> v{0.0};
  OptimizerState s;
  double step = 0.0;
  for (int i = 0; i < 300; ++i) {
    const double before = p[0];
    rmsprop_update(p, std::vector<double>{g}, v, s);
    step = before - p[0];
    EXPECT_GE(step, s.learning_rate * g / (g + s.epsilon) - 1e-15);
  }
  EXPECT_NEAR(step, s.learning_rate * g / (g + s.epsilon), 1e-12);
}

TEST(Optimizer, QuadraticBowlDecreasesMonotonically) {
  // loss = x0^2 + 3 x1^2 = |D x|^2
  std::vector<Tensor> params{Tensor::parameter({2}, {1.5, -2.0})};
  const Tensor d = Tensor::constant({2, 2}, {1.0, 0.0, 0.0, std::sqrt(3.0)});
  const Tensor zero = Tensor::constant({2}, {0.0, 0.0});
  const std::vector<double> origin{0.0, 0.0};
  OptimizerState s;
  s.learning_rate = 0.005;
  double prev = 1.5 * 1.5 + 3.0 * 2.0 * 2.0;
  for (int i = 0; i < 100; ++i) {
    Tape tape;
    params[0].zero_grad();
    const Tensor loss = squared_error(tape, linear(tape, params[0], d, zero), origin);
    EXPECT_NEAR(loss.item(), prev, 1e-12);
    tape.backward(loss);
    rmsprop_step(params, s);
    const double x0 = params[0].values()[0], x1 = params[0].values()[1];
    const double now = x0 * x0 + 3.0 * x1 * x1;
    EXPECT_LT(now, prev) << "step " << i;
    prev = now;
  }
}

TEST(Init, DeterministicPerSeed) {
  const Tensor a = initialize_weights({8, 4, 3, 3}, 5);
  const Tensor b = initialize_weights({8, 4, 3, 3}, 5);
  const Tensor c = initialize_weights({8, 4, 3, 3}, 6);
  EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  EXPECT_FALSE(std::equal(a.values().begin(), a.values().end(), c.values().begin()));
}

TEST(Init, HeNormalStatistics) {
  // 10,000 draws with fan_in = 25.
  const Tensor w = initialize_weights({400, 1, 5, 5}, 11);
  ASSERT_EQ(w.size(), 10000u);
  const double target = std::sqrt(2.0 / 25.0);
  const double n = static_cast<double>(w.size());
  const double m = std::accumulate(w.values().begin(), w.values().end(), 0.0) / n;
  double var = 0.0;
  for (double v : w.values()) var += (v - m) * (v - m);
  const double sd = std::sqrt(var / (n - 1));
  EXPECT_LT(std::abs(m), 4.0 * target / std::sqrt(n));
  EXPECT_LT(std::abs(sd - target) / target, 0.05);
}

std::vector<NamedTensor> sample_tensors() {
  return {{"a.w", {2, 3}, {1, 2, 3, 4, 5, 6}}, {"b", {1}, {-0.25f}}, {"c", {2, 1, 1, 2}, {0, 1e-20f, 3e8f, -7}}};
}

TEST(Checkpoint, RoundTripsExactly) {
  const auto tensors = sample_tensors();
  const std::string bytes = encode_checkpoint(tensors);
  EXPECT_EQ(bytes.substr(0, 4), "AGCK");
  EXPECT_EQ(decode_checkpoint(bytes), tensors);
}

TEST(Checkpoint, RejectsCorruption) {
  const std::string bytes = encode_checkpoint(sample_tensors());
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_checkpoint(bad_magic), IoError);
  std::string bad_version = bytes;
  bad_version[4] = 9;
  EXPECT_THROW(decode_checkpoint(bad_version), IoError);
  for (std::size_t cut : {std::size_t{3}, std::size_t{12}, bytes.size() - 1}) {
    EXPECT_THROW(decode_checkpoint(std::string_view(bytes).substr(0, cut)), IoError);
  }
  EXPECT_THROW(decode_checkpoint(bytes + "x"), IoError);
}

}  // namespace
}  // namespace aurora::ad
