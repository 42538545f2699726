#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "aurora/captcha_check.hpp"
#include "test_support.hpp"

namespace aurora {
namespace {

std::vector<Residual> random_residuals(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Residual> out(n);
  for (auto& r : out)
    for (double& v : r) v = g(rng);
  return out;
}

double energy(const std::vector<Residual>& rs) {
  double e = 0.0;
  for (const auto& r : rs)
    for (double v : r) e += v * v;
  return e;
}

TEST(Residual, EncodesTypeChangeAndIntensityStep) {
  const Residual r = encode_residual({0, 0.9}, {2, 0.6});
  EXPECT_EQ(r[0], -1.0);
  EXPECT_EQ(r[1], 0.0);
  EXPECT_EQ(r[2], 1.0);
  EXPECT_EQ(r[3], 0.0);
  EXPECT_NEAR(r[4], -0.3, 1e-15);
  EXPECT_EQ(encode_residuals(generate_captcha(6, 1)).size(), 5u);
}

TEST(Snr, ExactMatchHitsTheCap) {
  const auto g = random_residuals(4, 1);
  EXPECT_EQ(residual_snr_db(g, g), kSnrCapDb);
}

TEST(Snr, ZeroEstimateIsZeroDecibels) {
  const std::vector<Residual> g{{1, 0, 0, 0, 0}};
  EXPECT_NEAR(residual_snr_db(g, std::vector<Residual>(1)), 0.0, 1e-12);
  const auto h = random_residuals(3, 2);
  EXPECT_NEAR(residual_snr_db(h, std::vector<Residual>(3)), 0.0, 1e-12);
}

TEST(Snr, HundredToOneEnergyRatioIsTwentyDecibels) {
  const auto g = random_residuals(4, 3);
  auto noise = random_residuals(4, 4);
  const double k = std::sqrt(energy(g) / (100.0 * energy(noise)));
  std::vector<Residual> e = g;
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < kResidualSize; ++j) e[i][j] += k * noise[i][j];
  EXPECT_NEAR(residual_snr_db(g, e), 20.0, 1e-9);
}

TEST(Snr, ScaleConsistent) {
  const auto g = random_residuals(5, 5);
  const auto e = random_residuals(5, 6);
  for (double s : {-3.0, 0.01, 7.5}) {
    auto gs = g, es = e;
    for (auto& r : gs)
      for (double& v : r) v *= s;
    for (auto& r : es)
      for (double& v : r) v *= s;
    EXPECT_NEAR(residual_snr_db(gs, es), residual_snr_db(g, e), 1e-9);
  }
}

TEST(Snr, MoreNoiseStrictlyLowersIt) {
  const auto g = random_residuals(4, 7);
  const auto dir = random_residuals(4, 8);
  double prev = kSnrCapDb + 1;
  for (double k : {1e-4, 1e-3, 1e-2, 0.1, 1.0, 10.0}) {
    auto e = g;
    for (std::size_t i = 0; i < e.size(); ++i)
      for (std::size_t j = 0; j < kResidualSize; ++j) e[i][j] += k * dir[i][j];
    const double snr = residual_snr_db(g, e);
    EXPECT_LT(snr, prev);
    prev = snr;
  }
}

TEST(Snr, RejectsBadInput) {
  EXPECT_THROW(residual_snr_db(random_residuals(2, 1), random_residuals(3, 1)), ValidationError);
  EXPECT_THROW(residual_snr_db(std::vector<Residual>(2), random_residuals(2, 1)), ValidationError);
}

TEST(Snr, PassedIsStrictComparison) {
  const LightCaptcha c = generate_captcha(4, 3);
  EstimatedCaptcha e;
  e.residuals = encode_residuals(c);
  EXPECT_TRUE(calc_snr(c, e, 119.0).passed);
  EXPECT_FALSE(calc_snr(c, e, 120.0).passed);
}

// Every alpha sequence of length n with no repeats, via a counter in base 4.
std::vector<std::vector<int>> all_sequences(int n) {
  std::vector<std::vector<int>> out;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 4;
  for (int code = 0; code < total; ++code) {
    std::vector<int> s;
    int c = code;
    for (int i = 0; i < n; ++i, c /= 4) s.push_back(c % 4);
    bool ok = true;
    for (int i = 1; i < n; ++i) ok = ok && s[i] != s[i - 1];
    if (ok) out.push_back(s);
  }
  return out;
}

TEST(Decode, RecoversEveryLengthFourSequence) {
  const auto sequences = all_sequences(4);
  ASSERT_EQ(sequences.size(), 108u);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> beta(0.5, 1.0), noise(-0.2, 0.2);
  for (const auto& s : sequences) {
    LightCaptcha c;
    for (int a : s) c.sequence.push_back({a, beta(rng)});
    std::vector<Residual> raw = encode_residuals(c);
    const EstimatedCaptcha exact = decode_captcha(raw, c.sequence[0]);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(exact.sequence[i].alpha, s[i]);
    EXPECT_NEAR(calc_snr(c, exact).snr_db, kSnrCapDb, 1e-6);
    for (auto& r : raw)
      for (std::size_t k = 0; k < 4; ++k) r[k] += noise(rng);
    const EstimatedCaptcha noisy = decode_captcha(raw, c.sequence[0]);
    for (std::size_t i = 0; i < s.size(); ++i) EXPECT_EQ(noisy.sequence[i].alpha, s[i]);
  }
}

TEST(Decode, ViterbiMatchesExhaustiveSearch) {
  const auto sequences = all_sequences(5);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 0.8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto raw = random_residuals(4, 1000 + trial);
    const LightParams anchor{trial % 4, 0.75};
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_seq;
    for (const auto& s : sequences) {
      if (s[0] != anchor.alpha) continue;
      double cost = 0.0;
      for (int i = 0; i < 4; ++i)
        for (int k = 0; k < 4; ++k) {
          const double t = (k == s[i + 1]) - (k == s[i]);
          cost += (raw[i][k] - t) * (raw[i][k] - t);
        }
      if (cost < best) best = cost, best_seq = s;
    }
    const EstimatedCaptcha e = decode_captcha(raw, anchor);
    for (int i = 0; i < 5; ++i) EXPECT_EQ(e.sequence[i].alpha, best_seq[i]) << "trial " << trial;
  }
  (void)g;
}

TEST(Decode, IntensityStepsAreClampedAndAccumulated) {
  std::vector<Residual> raw(2);
  raw[0] = {-1, 1, 0, 0, 0.9};
  raw[1] = {0, -1, 1, 0, -0.2};
  const EstimatedCaptcha e = decode_captcha(raw, {0, 0.6});
  ASSERT_EQ(e.sequence.size(), 3u);
  EXPECT_NEAR(e.sequence[1].beta, 1.1, 1e-12);
  EXPECT_NEAR(e.sequence[2].beta, 0.9, 1e-12);
  EXPECT_NEAR(e.residuals[0][4], 0.5, 1e-12);
}

TEST(Decode, OneWrongTypeFailsTheCheck) {
  // Perfect regression of a recording whose captcha differs in one type.
  const LightCaptcha issued{{{0, 0.8}, {1, 0.6}, {2, 0.9}, {3, 0.7}}, 0};
  LightCaptcha replayed = issued;
  replayed.sequence[2].alpha = 0;
  const EstimatedCaptcha e = decode_captcha(encode_residuals(replayed), issued.sequence[0]);
  EXPECT_FALSE(calc_snr(issued, e, 20.0).passed);
  EXPECT_TRUE(calc_snr(replayed, e, 20.0).passed);
}

TEST(Decode, RandomFreshCaptchasRarelyMatchAFixedRecording) {
  const LightCaptcha recording = generate_captcha(8, 77);
  int passes = 0;
  const int trials = 500;
  for (int t = 0; t < trials; ++t) {
    const LightCaptcha fresh = generate_captcha(8, mix_seed(123, t));
    const auto raw = encode_residuals(recording);
    passes += calc_snr(fresh, decode_captcha(raw, fresh.sequence[0])).passed ? 1 : 0;
  }
  const double collision = 1.0 / (4.0 * std::pow(3.0, 7));
  EXPECT_LE(static_cast<double>(passes) / trials, collision + 0.01);
}

}  // namespace
}  // namespace aurora
