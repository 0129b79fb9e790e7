#include <algorithm>
#include <numeric>
#include <sstream>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "textlier/error.hpp"
#include "textlier/eval.hpp"
#include "textlier/random.hpp"

using namespace textlier;
using namespace textlier::eval;

TEST(Metrics, KnownConfusionMatrix) {
  const EvalReport r = metrics({2284, 82, 206, 918});
  EXPECT_NEAR(r.precision, 0.918, 1e-6);
  EXPECT_NEAR(r.recall, 0.816725979, 1e-6);
  EXPECT_NEAR(r.f1, 0.86440678, 1e-6);
  EXPECT_EQ(r.n_samples, 3490u);
  EXPECT_FALSE(r.precision_degenerate || r.recall_degenerate || r.f1_degenerate);
}

TEST(Metrics, RecomputableFromCounts) {
  Rng rng(1);
  std::uniform_int_distribution<std::size_t> count(0, 50);
  for (int t = 0; t < 500; ++t) {
    const ConfusionMatrix cm{count(rng), count(rng), count(rng), count(rng)};
    const EvalReport r = metrics(cm);
    EXPECT_EQ(r.n_samples, cm.total());
    const double p = cm.tp + cm.fp ? double(cm.tp) / double(cm.tp + cm.fp) : 0.0;
    const double rc = cm.tp + cm.fn ? double(cm.tp) / double(cm.tp + cm.fn) : 0.0;
    EXPECT_EQ(r.precision, p);
    EXPECT_EQ(r.recall, rc);
    EXPECT_EQ(r.precision_degenerate, cm.tp + cm.fp == 0);
    EXPECT_EQ(r.recall_degenerate, cm.tp + cm.fn == 0);
    if (p + rc > 0) {
      EXPECT_NEAR(r.f1, 2 * p * rc / (p + rc), 1e-15);
      EXPECT_LE(std::min(p, rc), r.f1 + 1e-15);
      EXPECT_GE(std::max(p, rc), r.f1 - 1e-15);
    } else {
      EXPECT_EQ(r.f1, 0.0);
    }
  }
}

TEST(Metrics, DegenerateDenominators) {
  const EvalReport none = metrics({10, 0, 0, 0});
  EXPECT_EQ(none.precision, 0.0);
  EXPECT_TRUE(none.precision_degenerate);
  EXPECT_TRUE(none.recall_degenerate);
  EXPECT_TRUE(none.f1_degenerate);
  const EvalReport miss = metrics({5, 3, 2, 0});
  EXPECT_EQ(miss.f1, 0.0);
  EXPECT_FALSE(miss.f1_degenerate);
}

TEST(Confusion, MatchesPairTally) {
  Rng rng(2);
  std::bernoulli_distribution coin(0.3);
  for (int t = 0; t < 50; ++t) {
    std::vector<int> labels(1 + t * 7), preds(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      labels[i] = coin(rng);
      preds[i] = coin(rng);
    }
    ConfusionMatrix want;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == 0 && preds[i] == 0) ++want.tn;
      if (labels[i] == 0 && preds[i] == 1) ++want.fp;
      if (labels[i] == 1 && preds[i] == 0) ++want.fn;
      if (labels[i] == 1 && preds[i] == 1) ++want.tp;
    }
    const ConfusionMatrix got = confusion(labels, preds);
    EXPECT_EQ(got, want);
    EXPECT_EQ(got.total(), labels.size());

    std::vector<std::size_t> perm(labels.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<int> pl, pp;
    for (std::size_t i : perm) {
      pl.push_back(labels[i]);
      pp.push_back(preds[i]);
    }
    EXPECT_EQ(confusion(pl, pp), got);
  }
}

TEST(Confusion, RejectsBadInput) {
  EXPECT_THROW(confusion(std::vector<int>{}, std::vector<int>{}), ArgumentError);
  EXPECT_THROW(confusion(std::vector<int>{0, 1}, std::vector<int>{0}), ArgumentError);
  EXPECT_THROW(confusion(std::vector<int>{2}, std::vector<int>{0}), ArgumentError);
}

TEST(Report, JsonAndTableLayout) {
  const EvalReport r = metrics({2284, 82, 206, 918});
  const auto j = to_json(r, "news+reviews");
  EXPECT_EQ(j.at("n_samples"), 3490);
  EXPECT_EQ(j.at("confusion_matrix"), nlohmann::ordered_json::parse("[[2284,82],[206,918]]"));
  const std::string table = to_table(r, "news+reviews");
  for (const char* col : {"Item", "Validation Sample", "F1", "Precision Score", "Recall Score",
                          "Confusion Matrix", "3490", "0.8644", "0.9180", "0.8167",
                          "[[2284, 82], [206, 918]]"})
    EXPECT_NE(table.find(col), std::string::npos) << col;
  // three lines of equal width
  std::istringstream lines(table);
  std::string a, b, c;
  std::getline(lines, a);
  std::getline(lines, b);
  std::getline(lines, c);
  EXPECT_EQ(a.size(), b.size());
  EXPECT_EQ(b.size(), c.size());
}

TEST(Pipeline, UntrainedBundleIsAStateError) {
  const ModelBundle empty;
  corpus::EmbeddedDocument d{"d", 0, 1, nn::Tensor({2, 2})};
  const std::vector<corpus::EmbeddedDocument> docs{d};
  EXPECT_THROW(evaluate_documents(empty, docs), StateError);
}

TEST(Pipeline, EmptyPartitionIsAnArgumentError) {
  ModelBundle bundle;
  ae::AEConfig c;
  c.max_sent = 2;
  c.embed_dim = 2;
  c.latent_dim = 2;
  c.channels = {2};
  bundle.autoencoder = ae::AutoencoderModel::build(c);
  std::vector<LabeledFeature> data;
  for (int i = 0; i < 4; ++i)
    data.push_back({FeatureVector{"f", std::vector<double>(2, double(i)), double(i)}, i % 2});
  bundle.classifier = classifier::train_logreg(data, {});
  EXPECT_THROW(evaluate_documents(bundle, {}), ArgumentError);
}
