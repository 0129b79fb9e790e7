#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "textlier/classifier.hpp"
#include "textlier/error.hpp"
#include "textlier/random.hpp"
#include "textlier_test/finite_diff.hpp"

using namespace textlier;
using namespace textlier::classifier;

namespace {

LabeledFeature item(std::vector<double> v, int label, const std::string& id = "x") {
  const double last = v.back();
  v.pop_back();
  return {FeatureVector{id, std::move(v), last}, label};
}

// x = -1 -> 0 and x = +1 -> 1 in slot 0 of a 33-wide feature, 50 of each.
std::vector<LabeledFeature> separable_toy() {
  std::vector<LabeledFeature> out;
  for (int i = 0; i < 100; ++i) {
    std::vector<double> v(33, 0.0);
    v[0] = i < 50 ? -1.0 : 1.0;
    out.push_back(item(v, i < 50 ? 0 : 1, "t" + std::to_string(i)));
  }
  return out;
}

std::vector<LabeledFeature> overlapping(std::size_t n, std::size_t d, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<LabeledFeature> out;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = i % 3 == 0 ? 1 : 0;
    std::vector<double> v(d);
    for (std::size_t j = 0; j < d; ++j) v[j] = g(rng) * (1.0 + j) + (label ? 0.8 : 0.0) + 3.0 * j;
    out.push_back(item(v, label, "o" + std::to_string(i)));
  }
  return out;
}

}  // namespace

TEST(Logistic, SeparableToyIsLearned) {
  const auto data = separable_toy();
  const auto m = train_logreg(data, {});
  for (const auto& d : data) EXPECT_EQ(m.predict(d.feature), d.label);
  std::vector<double> origin(33, 0.0);
  const double p = m.predict_proba(origin);
  EXPECT_GE(p, 0.45);
  EXPECT_LE(p, 0.55);
  EXPECT_LT(m.final_loss, m.initial_loss);
}

TEST(Logistic, ObjectiveGradientMatchesFiniteDifferences) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    const std::size_t n = 12, d = 5;
    std::vector<std::vector<double>> rows(n, std::vector<double>(d));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (double& v : rows[i]) v = g(rng);
      labels[i] = static_cast<int>(i % 2);
    }
    std::vector<double> w(d);
    for (double& v : w) v = g(rng);
    double b = g(rng);
    const double lambda = 0.01 * static_cast<double>(seed + 1);
    const auto obj = logistic_objective(w, b, rows, labels, lambda);
    auto f = [&] { return logistic_objective(w, b, rows, labels, lambda).loss; };
    const auto num_w = test::numeric_gradient(f, w);
    EXPECT_LT(test::max_relative_error(obj.weight_grad, num_w), 1e-5) << "seed " << seed;
    const auto num_b = test::numeric_gradient(f, std::span<double>(&b, 1));
    EXPECT_LT(test::relative_error(obj.bias_grad, num_b[0]), 1e-5) << "seed " << seed;
  }
}

TEST(Logistic, HugeLambdaStaysStable) {
  LogRegConfig c;
  c.lambda = 1e6;
  const auto m = train_logreg(overlapping(90, 4, 1), c);
  for (double w : m.weights) {
    EXPECT_TRUE(std::isfinite(w));
    EXPECT_LT(std::abs(w), 1e-5);
  }
  EXPECT_TRUE(std::isfinite(m.bias));
}

TEST(Logistic, ScalingFeaturesLeavesDecisionsUnchanged) {
  const auto data = overlapping(120, 6, 2);
  const auto base = train_logreg(data, {});
  for (double scale : {4.0, 3.7, 1e-3}) {
    auto scaled = data;
    for (auto& d : scaled) {
      for (double& v : d.feature.latent) v *= scale;
      d.feature.recon_error *= scale;
    }
    const auto m = train_logreg(scaled, {});
    for (std::size_t i = 0; i < data.size(); ++i) {
      EXPECT_EQ(m.predict(scaled[i].feature), base.predict(data[i].feature)) << "scale " << scale;
      EXPECT_NEAR(m.predict_proba(scaled[i].feature), base.predict_proba(data[i].feature), 1e-9);
    }
  }
}

TEST(Logistic, DifferentSeedsReachTheSameOptimum) {
  const auto data = overlapping(150, 5, 3);
  LogRegConfig a, b;
  a.seed = 1;
  b.seed = 99;
  const auto ma = train_logreg(data, a), mb = train_logreg(data, b);
  for (std::size_t i = 0; i < ma.dim(); ++i) EXPECT_NEAR(ma.weights[i], mb.weights[i], 1e-3);
  EXPECT_NEAR(ma.bias, mb.bias, 1e-3);
}

TEST(Logistic, PredictMatchesThresholdedProbability) {
  const auto data = overlapping(100, 3, 4);
  for (double threshold : {0.2, 0.5, 0.8}) {
    LogRegConfig c;
    c.threshold = threshold;
    const auto m = train_logreg(data, c);
    for (const auto& d : data) {
      const double p = m.predict_proba(d.feature);
      EXPECT_GT(p, 0.0);
      EXPECT_LT(p, 1.0);
      EXPECT_EQ(m.predict(d.feature), p >= threshold ? 1 : 0);
    }
  }
}

TEST(Logistic, ProbabilityStaysInsideOpenInterval) {
  const auto m = train_logreg(separable_toy(), {});
  std::vector<double> far(33, 0.0);
  far[0] = 1e6;
  EXPECT_LT(m.predict_proba(far), 1.0);
  far[0] = -1e6;
  EXPECT_GT(m.predict_proba(far), 0.0);
  EXPECT_THROW(m.predict_proba(std::vector<double>(32, 0.0)), ShapeError);
}

TEST(Logistic, RejectsBadTrainingData) {
  auto data = overlapping(30, 3, 5);
  auto one_class = data;
  for (auto& d : one_class) d.label = 0;
  EXPECT_THROW(train_logreg(one_class, {}), ArgumentError);
  data[3].feature.latent.push_back(1.0);
  EXPECT_THROW(train_logreg(data, {}), ArgumentError);
  EXPECT_THROW(train_logreg({}, {}), ArgumentError);
}

TEST(Standardizer, CentresAndScales) {
  const auto data = overlapping(200, 4, 6);
  std::vector<std::vector<double>> rows;
  for (const auto& d : data) rows.push_back(d.feature.values());
  for (auto& r : rows) r.push_back(7.0);  // constant column
  const auto s = Standardizer::fit(rows);
  const std::size_t d = rows[0].size();
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0, sq = 0.0;
    for (const auto& r : rows) mean += s.transform(r)[j];
    mean /= static_cast<double>(rows.size());
    for (const auto& r : rows) sq += std::pow(s.transform(r)[j] - mean, 2);
    EXPECT_LT(std::abs(mean), 1e-9);
    if (j + 1 < d) {
      EXPECT_NEAR(std::sqrt(sq / static_cast<double>(rows.size())), 1.0, 1e-9);
    } else {
      EXPECT_EQ(s.stddev()[j], 1.0);
    }
  }
}

TEST(Logistic, CheckpointRoundTripIsBitExact) {
  const auto m = train_logreg(overlapping(80, 4, 7), {});
  Checkpoint ckpt;
  m.to_checkpoint(ckpt);
  std::stringstream buf;
  write_checkpoint(buf, ckpt);
  const auto back = LogisticModel::from_checkpoint(read_checkpoint(buf, "mem"));
  EXPECT_EQ(back.weights, m.weights);
  EXPECT_EQ(back.bias, m.bias);
  EXPECT_EQ(back.lambda, m.lambda);
  EXPECT_EQ(back.threshold, m.threshold);
  EXPECT_EQ(back.standardizer.mean(), m.standardizer.mean());
  EXPECT_EQ(back.standardizer.stddev(), m.standardizer.stddev());
  EXPECT_EQ(back.final_loss, m.final_loss);
}

TEST(Sigmoid, SymmetricAndSaturating) {
  for (double z : {-30.0, -2.0, 0.0, 0.5, 40.0}) EXPECT_NEAR(sigmoid(z) + sigmoid(-z), 1.0, 1e-15);
  EXPECT_TRUE(std::isfinite(sigmoid(-1000.0)));
  EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
}
