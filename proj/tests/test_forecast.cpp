#include "prepos/forecast.hpp"

#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"

using namespace prepos;
using namespace prepos::forecast;

namespace {

Dataset four_point_dataset() {
    Dataset d;
    d.feature_names = {"x"};
    d.push_row({1.0}, 1.0);
    d.push_row({2.0}, 1.0);
    d.push_row({3.0}, 5.0);
    d.push_row({4.0}, 5.0);
    return d;
}

Dataset random_dataset(std::size_t n, std::size_t arity, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 10.0);
    Dataset d;
    for (std::size_t f = 0; f < arity; ++f) d.feature_names.push_back("f" + std::to_string(f));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(arity);
        for (double& v : x) v = unif(rng);
        double y = 0.0;
        for (double v : x) y += v;
        d.push_row(std::move(x), y + unif(rng));
    }
    return d;
}

/// Maps each training row to the leaf index it lands in within one tree.
std::vector<int> leaf_assignment(const RegressionTree& tree, const Dataset& data) {
    std::vector<int> assign(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        int idx = 0;
        while (!tree.nodes[static_cast<std::size_t>(idx)].is_leaf()) {
            const auto& node = tree.nodes[static_cast<std::size_t>(idx)];
            idx = data.features[i][static_cast<std::size_t>(node.feature)] < node.threshold
                      ? node.left
                      : node.right;
        }
        assign[i] = idx;
    }
    return assign;
}

}  // namespace

TEST(SplitDataset, EightyTwentyAndHalfSplits) {
    std::mt19937_64 rng(5);
    auto data10 = random_dataset(10, 2, rng);
    auto [train, test] = split_dataset(data10, 0.8, 99);
    EXPECT_EQ(train.size(), 8u);
    EXPECT_EQ(test.size(), 2u);

    auto data4 = random_dataset(4, 2, rng);
    auto [t4, e4] = split_dataset(data4, 0.5, 99);
    EXPECT_EQ(t4.size(), 2u);
    EXPECT_EQ(e4.size(), 2u);
}

TEST(SplitDataset, DeterministicAndPartitioning) {
    std::mt19937_64 rng(6);
    auto data = random_dataset(23, 3, rng);
    auto [a_train, a_test] = split_dataset(data, 0.7, 1234);
    auto [b_train, b_test] = split_dataset(data, 0.7, 1234);
    EXPECT_EQ(a_train.features, b_train.features);
    EXPECT_EQ(a_test.targets, b_test.targets);

    // disjoint and union = input (multiset of targets is a cheap fingerprint)
    std::vector<double> combined = a_train.targets;
    combined.insert(combined.end(), a_test.targets.begin(), a_test.targets.end());
    std::sort(combined.begin(), combined.end());
    std::vector<double> original = data.targets;
    std::sort(original.begin(), original.end());
    EXPECT_EQ(combined, original);
}

TEST(SplitDataset, RejectsDegenerateInput) {
    Dataset tiny;
    tiny.feature_names = {"x"};
    tiny.push_row({1.0}, 1.0);
    EXPECT_THROW(split_dataset(tiny, 0.8, 1), InstanceTooSmall);
    std::mt19937_64 rng(7);
    auto data = random_dataset(5, 1, rng);
    EXPECT_THROW(split_dataset(data, 0.0, 1), RangeError);
    EXPECT_THROW(split_dataset(data, 1.0, 1), RangeError);
}

TEST(FitBooster, ConstantTargetAbsorbedByASingleLeaf) {
    Dataset d;
    d.feature_names = {"x"};
    for (int i = 0; i < 6; ++i) d.push_row({static_cast<double>(i)}, 7.0);
    BoosterConfig cfg{.rounds = 1, .max_depth = 3, .eta = 1.0, .lambda = 0.0, .gamma = 0.0};
    auto [model, report] = fit_booster(d, cfg);
    ASSERT_EQ(model.trees.size(), 1u);
    EXPECT_EQ(model.trees[0].leaf_count(), 1u);
    for (int i = 0; i < 6; ++i)
        EXPECT_NEAR(model.predict(std::vector<double>{static_cast<double>(i)}), 7.0, 1e-12);
    EXPECT_NEAR(report.train_rmse.back(), 0.0, 1e-12);
}

TEST(FitBooster, ZeroRoundsPredictsTheTargetMean) {
    auto d = four_point_dataset();
    BoosterConfig cfg{.rounds = 0};
    auto [model, report] = fit_booster(d, cfg);
    EXPECT_EQ(model.trees.size(), 0u);
    EXPECT_NEAR(model.predict(std::vector<double>{2.0}), 3.0, 1e-12);
    EXPECT_TRUE(report.train_rmse.empty());
}

TEST(FitBooster, FourPointStumpMatchesExhaustiveSplitSearch) {
    // gradients at the mean base score: g = (2, 2, -2, -2); the exhaustive
    // scan over thresholds {1.5, 2.5, 3.5} gives gains {8/3, 8, 8/3}, so the
    // stump must split between x=2 and x=3 with leaf weights -2 and +2.
    auto d = four_point_dataset();
    BoosterConfig cfg{.rounds = 1, .max_depth = 1, .eta = 1.0, .lambda = 0.0, .gamma = 0.0};
    auto [model, report] = fit_booster(d, cfg);
    ASSERT_EQ(model.trees.size(), 1u);
    const auto& root = model.trees[0].nodes[0];
    ASSERT_FALSE(root.is_leaf());
    EXPECT_GT(root.threshold, 2.0);
    EXPECT_LT(root.threshold, 3.0);
    double left = model.trees[0].nodes[static_cast<std::size_t>(root.left)].leaf;
    double right = model.trees[0].nodes[static_cast<std::size_t>(root.right)].leaf;
    EXPECT_NEAR(left, 1.0 - 3.0, 1e-12);
    EXPECT_NEAR(right, 5.0 - 3.0, 1e-12);
    EXPECT_NEAR(report.train_rmse.back(), 0.0, 1e-12);

    // prediction at x = 3.5 follows the right leaf: base + eta * (5 - base)
    EXPECT_NEAR(model.predict(std::vector<double>{3.5}), 5.0, 1e-12);
}

TEST(FitBooster, ShrinkageScalesTheStepNotTheLeaf) {
    auto d = four_point_dataset();
    BoosterConfig cfg{.rounds = 1, .max_depth = 1, .eta = 0.5, .lambda = 0.0, .gamma = 0.0};
    auto [model, report] = fit_booster(d, cfg);
    EXPECT_NEAR(model.predict(std::vector<double>{3.5}), 3.0 + 0.5 * 2.0, 1e-12);
    // predictions (2, 2, 4, 4) against (1, 1, 5, 5)
    EXPECT_NEAR(report.train_rmse.back(), 1.0, 1e-12);
}

TEST(FitBooster, LeafWeightsMatchGridScanMinimizer) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        auto d = random_dataset(40, 3, rng);
        BoosterConfig cfg{.rounds = 1,
                          .max_depth = 1 + trial % 3,
                          .eta = 1.0,
                          .lambda = (trial % 4) * 0.7,
                          .gamma = 0.0};
        auto [model, report] = fit_booster(d, cfg);
        ASSERT_EQ(model.trees.size(), 1u);
        const auto& tree = model.trees[0];
        auto assign = leaf_assignment(tree, d);
        double base = model.base_score;
        for (std::size_t node_idx = 0; node_idx < tree.nodes.size(); ++node_idx) {
            if (!tree.nodes[node_idx].is_leaf()) continue;
            double g_sum = 0.0, h_sum = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
                if (assign[i] != static_cast<int>(node_idx)) continue;
                g_sum += base - d.targets[i];
                h_sum += 1.0;
            }
            if (h_sum == 0.0) continue;
            double oracle = oracles::grid_scan_leaf_weight(g_sum, h_sum, cfg.lambda);
            EXPECT_NEAR(tree.nodes[node_idx].leaf, oracle, 1e-8);
        }
    }
}

TEST(FitBooster, TrainRmseNonIncreasingWithoutGammaPenalty) {
    std::mt19937_64 rng(13);
    for (double eta : {1.0, 0.6, 0.2}) {
        auto d = random_dataset(60, 4, rng);
        BoosterConfig cfg{.rounds = 30, .max_depth = 3, .eta = eta, .lambda = 0.5, .gamma = 0.0};
        auto [model, report] = fit_booster(d, cfg);
        for (std::size_t r = 1; r < report.train_rmse.size(); ++r)
            EXPECT_LE(report.train_rmse[r], report.train_rmse[r - 1] + 1e-12);
    }
}

TEST(FitBooster, LargeGammaSuppressesAllSplits) {
    std::mt19937_64 rng(17);
    auto d = random_dataset(30, 2, rng);
    BoosterConfig cfg{.rounds = 3, .max_depth = 4, .eta = 1.0, .lambda = 0.0, .gamma = 1e9};
    auto [model, report] = fit_booster(d, cfg);
    for (const auto& tree : model.trees) EXPECT_EQ(tree.leaf_count(), 1u);
}

TEST(FitBooster, DeterministicGivenIdenticalInput) {
    std::mt19937_64 rng(19);
    auto d = random_dataset(50, 3, rng);
    BoosterConfig cfg{.rounds = 10, .max_depth = 3, .eta = 0.3, .lambda = 1.0, .gamma = 0.01};
    auto [m1, r1] = fit_booster(d, cfg);
    auto [m2, r2] = fit_booster(d, cfg);
    EXPECT_EQ(m1.to_json().dump(), m2.to_json().dump());
    EXPECT_EQ(r1.train_rmse, r2.train_rmse);
}

TEST(FitBooster, SyntheticLinearSignalBeatsTheMeanPredictor) {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(0.0, 10.0);
    std::normal_distribution<double> noise(0.0, 0.3);
    Dataset all;
    all.feature_names = {"x1", "x2"};
    for (int i = 0; i < 400; ++i) {
        double x1 = unif(rng), x2 = unif(rng);
        all.push_row({x1, x2}, std::max(0.0, 2.0 * x1 + 0.5 * x2 + noise(rng)));
    }
    auto [train, test] = split_dataset(all, 0.8, 7);
    BoosterConfig cfg{.rounds = 50, .max_depth = 3, .eta = 0.3, .lambda = 1.0, .gamma = 0.0};
    auto [model, report] = fit_booster(train, cfg);
    auto fit_metrics = evaluate(model, test);

    BoostedModel mean_only;
    mean_only.base_score = model.base_score;
    mean_only.n_features = 2;
    auto mean_metrics = evaluate(mean_only, test);
    EXPECT_LE(fit_metrics.rmse, 0.5 * mean_metrics.rmse);
}

TEST(Predict, EmptyEnsembleAndManualAdditivity) {
    BoostedModel model;
    model.base_score = 4.5;
    EXPECT_EQ(model.predict(std::vector<double>{1.0, 2.0}), 4.5);

    RegressionTree t1, t2;
    t1.nodes.push_back(TreeNode{.leaf = 1.25});
    t2.nodes.push_back(TreeNode{.leaf = -0.5});
    model.trees = {t1, t2};
    model.eta = 1.0;
    EXPECT_NEAR(model.predict_raw(std::vector<double>{0.0, 0.0}), 4.5 + 1.25 - 0.5, 1e-12);
}

TEST(Predict, ClampsNegativeDemandAndChecksArity) {
    BoostedModel model;
    model.base_score = -2.0;
    model.n_features = 2;
    EXPECT_EQ(model.predict(std::vector<double>{0.0, 0.0}), 0.0);
    EXPECT_EQ(model.predict_raw(std::vector<double>{0.0, 0.0}), -2.0);
    EXPECT_THROW(model.predict(std::vector<double>{0.0}), DimensionError);
}

TEST(Evaluate, PerfectAndConstantPredictors) {
    Dataset test;
    test.feature_names = {"x"};
    test.push_row({0.0}, 3.0);
    test.push_row({1.0}, 4.0);

    BoostedModel zero;
    zero.base_score = 0.0;
    auto m = evaluate(zero, test);
    EXPECT_NEAR(m.rmse, std::sqrt(12.5), 1e-12);
    EXPECT_NEAR(m.mae, 3.5, 1e-12);

    auto d = four_point_dataset();
    BoosterConfig cfg{.rounds = 1, .max_depth = 1, .eta = 1.0, .lambda = 0.0, .gamma = 0.0};
    auto [model, report] = fit_booster(d, cfg);
    auto self = evaluate(model, d);
    EXPECT_NEAR(self.rmse, 0.0, 1e-12);
    EXPECT_NEAR(self.mae, 0.0, 1e-12);

    Dataset empty;
    EXPECT_THROW(evaluate(model, empty), EmptyDataset);
}

TEST(ModelJson, RoundTripPreservesPredictions) {
    std::mt19937_64 rng(29);
    auto d = random_dataset(80, 3, rng);
    BoosterConfig cfg{.rounds = 8, .max_depth = 3, .eta = 0.3, .lambda = 1.0, .gamma = 0.0};
    auto [model, report] = fit_booster(d, cfg);
    auto reloaded = BoostedModel::from_json(model.to_json());
    std::uniform_real_distribution<double> unif(0.0, 10.0);
    for (int i = 0; i < 20; ++i) {
        std::vector<double> x{unif(rng), unif(rng), unif(rng)};
        EXPECT_EQ(model.predict_raw(x), reloaded.predict_raw(x));
    }
}
