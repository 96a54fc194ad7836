#pragma once

// Gradient-boosted regression trees for per-material demand forecasting.
// Squared-error loss, so the boosting gradients are g = yhat - y and the
// hessians are identically 1; each round grows one tree by exact greedy
// search over the second-order gain and sets leaf weights to the closed-form
// minimizer -sum(g) / (sum(h) + lambda).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "prepos/common.hpp"

namespace prepos::forecast {

struct Dataset {
    std::vector<std::vector<double>> features;  // row-major
    std::vector<double> targets;                // demand units, >= 0
    std::vector<std::string> feature_names;

    std::size_t size() const { return targets.size(); }
    std::size_t arity() const { return features.empty() ? feature_names.size() : features[0].size(); }

    void push_row(std::vector<double> x, double y) {
        features.push_back(std::move(x));
        targets.push_back(y);
    }

    /// Uniform arity, finite values, non-negative targets.
    void validate() const {
        if (features.size() != targets.size())
            throw DimensionError("feature rows and targets differ in count");
        const std::size_t k = arity();
        for (const auto& row : features) {
            if (row.size() != k)
                throw DimensionError("feature rows differ in arity");
            for (double v : row)
                if (!std::isfinite(v)) throw RangeError("non-finite feature value");
        }
        for (double y : targets) {
            if (!std::isfinite(y)) throw RangeError("non-finite target value");
            if (y < 0.0) throw RangeError("demand targets must be non-negative");
        }
    }
};

/// Deterministic shuffled split into (train, test). Train size is n*fraction
/// rounded to nearest; the remainder forms the test set.
inline std::pair<Dataset, Dataset> split_dataset(const Dataset& data, double train_fraction,
                                                 std::uint64_t seed) {
    if (data.size() < 2)
        throw InstanceTooSmall("need at least 2 rows to split");
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw RangeError("train fraction must be in (0, 1)");
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
    auto n_train = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(data.size())));
    Dataset train, test;
    train.feature_names = data.feature_names;
    test.feature_names = data.feature_names;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& dst = i < n_train ? train : test;
        dst.push_row(data.features[order[i]], data.targets[order[i]]);
    }
    return {std::move(train), std::move(test)};
}

struct TreeNode {
    int feature{-1};  // -1 marks a leaf
    double threshold{0};
    int left{-1};
    int right{-1};
    double leaf{0};
    bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    double predict(std::span<const double> x) const {
        int idx = 0;
        while (!nodes[idx].is_leaf())
            idx = x[static_cast<std::size_t>(nodes[idx].feature)] < nodes[idx].threshold
                      ? nodes[idx].left
                      : nodes[idx].right;
        return nodes[idx].leaf;
    }

    std::size_t leaf_count() const {
        std::size_t n = 0;
        for (const auto& node : nodes) n += node.is_leaf();
        return n;
    }
};

struct BoosterConfig {
    int rounds{50};
    int max_depth{3};
    double eta{0.3};
    double lambda{1.0};
    double gamma{0.0};

    void validate() const {
        if (rounds < 0) throw RangeError("rounds must be >= 0");
        if (max_depth < 1) throw RangeError("max_depth must be >= 1");
        if (!(eta > 0.0) || eta > 1.0) throw RangeError("eta must be in (0, 1]");
        if (lambda < 0.0) throw RangeError("lambda must be >= 0");
        if (gamma < 0.0) throw RangeError("gamma must be >= 0");
    }
};

struct BoostedModel {
    double base_score{0};
    std::vector<RegressionTree> trees;
    double eta{0.3};
    double lambda{1.0};
    double gamma{0.0};
    int max_depth{3};
    std::size_t n_features{0};  // arity seen at fit time

    /// base + eta * sum of tree outputs, unclamped.
    double predict_raw(std::span<const double> x) const {
        if (n_features != 0 && x.size() != n_features)
            throw DimensionError("feature arity does not match the fitted model");
        double acc = base_score;
        for (const auto& tree : trees) acc += eta * tree.predict(x);
        return acc;
    }

    /// Demand prediction, clamped at 0.
    double predict(std::span<const double> x) const { return std::max(0.0, predict_raw(x)); }

    nlohmann::json to_json() const;
    static BoostedModel from_json(const nlohmann::json& j);
};

struct FitReport {
    std::vector<double> train_rmse;  // after each round
    double final_objective{0};
};

namespace detail {

struct SplitChoice {
    int feature{-1};
    double threshold{0};
    double gain{-std::numeric_limits<double>::infinity()};
};

inline double leaf_objective_term(double g_sum, double h_sum, double lambda) {
    return g_sum * g_sum / (h_sum + lambda);
}

/// Exact greedy scan over midpoints of consecutive distinct feature values.
inline SplitChoice best_split(const Dataset& data, const std::vector<std::size_t>& rows,
                              const std::vector<double>& grad, double lambda) {
    SplitChoice best;
    const double g_total = std::accumulate(
        rows.begin(), rows.end(), 0.0, [&](double acc, std::size_t r) { return acc + grad[r]; });
    const double h_total = static_cast<double>(rows.size());
    const double parent = leaf_objective_term(g_total, h_total, lambda);

    std::vector<std::pair<double, std::size_t>> order(rows.size());
    for (std::size_t f = 0; f < data.arity(); ++f) {
        for (std::size_t i = 0; i < rows.size(); ++i)
            order[i] = {data.features[rows[i]][f], rows[i]};
        std::sort(order.begin(), order.end());
        double g_left = 0.0, h_left = 0.0;
        for (std::size_t i = 0; i + 1 < order.size(); ++i) {
            g_left += grad[order[i].second];
            h_left += 1.0;
            if (order[i].first == order[i + 1].first) continue;
            double g_right = g_total - g_left;
            double h_right = h_total - h_left;
            double gain = 0.5 * (leaf_objective_term(g_left, h_left, lambda) +
                                 leaf_objective_term(g_right, h_right, lambda) - parent);
            if (gain > best.gain) {
                best.feature = static_cast<int>(f);
                best.threshold = 0.5 * (order[i].first + order[i + 1].first);
                best.gain = gain;
            }
        }
    }
    return best;
}

inline int grow_node(RegressionTree& tree, const Dataset& data, std::vector<std::size_t> rows,
                     const std::vector<double>& grad, const BoosterConfig& cfg, int depth) {
    double g_sum = 0.0;
    for (std::size_t r : rows) g_sum += grad[r];
    double h_sum = static_cast<double>(rows.size());

    auto make_leaf = [&]() {
        TreeNode node;
        node.leaf = -g_sum / (h_sum + cfg.lambda);
        tree.nodes.push_back(node);
        return static_cast<int>(tree.nodes.size() - 1);
    };

    if (depth >= cfg.max_depth || rows.size() < 2) return make_leaf();
    auto split = best_split(data, rows, grad, cfg.lambda);
    if (split.feature < 0 || !(split.gain > cfg.gamma)) return make_leaf();

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows)
        (data.features[r][static_cast<std::size_t>(split.feature)] < split.threshold ? left_rows
                                                                                     : right_rows)
            .push_back(r);
    TreeNode node;
    node.feature = split.feature;
    node.threshold = split.threshold;
    tree.nodes.push_back(node);
    int idx = static_cast<int>(tree.nodes.size() - 1);
    tree.nodes[idx].left = grow_node(tree, data, std::move(left_rows), grad, cfg, depth + 1);
    tree.nodes[idx].right = grow_node(tree, data, std::move(right_rows), grad, cfg, depth + 1);
    return idx;
}

}  // namespace detail

/// Boosting loop: base score is the target mean, then `rounds` trees each fit
/// to the current gradients. Returned report tracks train RMSE per round and
/// the final regularized objective.
inline std::pair<BoostedModel, FitReport> fit_booster(const Dataset& train,
                                                      const BoosterConfig& cfg) {
    cfg.validate();
    train.validate();
    if (train.size() == 0)
        throw EmptyDataset("cannot fit on an empty training set");

    BoostedModel model;
    model.eta = cfg.eta;
    model.lambda = cfg.lambda;
    model.gamma = cfg.gamma;
    model.max_depth = cfg.max_depth;
    model.n_features = train.arity();
    model.base_score =
        std::accumulate(train.targets.begin(), train.targets.end(), 0.0) /
        static_cast<double>(train.size());

    FitReport report;
    std::vector<double> yhat(train.size(), model.base_score);
    std::vector<double> grad(train.size());
    std::vector<std::size_t> all_rows(train.size());
    std::iota(all_rows.begin(), all_rows.end(), 0);

    double complexity = 0.0;
    for (int round = 0; round < cfg.rounds; ++round) {
        for (std::size_t i = 0; i < train.size(); ++i) grad[i] = yhat[i] - train.targets[i];
        RegressionTree tree;
        detail::grow_node(tree, train, all_rows, grad, cfg, 0);
        // grow_node appends the root first
        for (std::size_t i = 0; i < train.size(); ++i)
            yhat[i] += cfg.eta * tree.predict(train.features[i]);
        double sq = 0.0;
        for (std::size_t i = 0; i < train.size(); ++i) {
            double d = yhat[i] - train.targets[i];
            sq += d * d;
        }
        report.train_rmse.push_back(std::sqrt(sq / static_cast<double>(train.size())));
        complexity += cfg.gamma * static_cast<double>(tree.leaf_count());
        for (const auto& node : tree.nodes)
            if (node.is_leaf()) complexity += 0.5 * cfg.lambda * node.leaf * node.leaf;
        model.trees.push_back(std::move(tree));
    }

    double loss = 0.0;
    for (std::size_t i = 0; i < train.size(); ++i) {
        double d = train.targets[i] - yhat[i];
        loss += 0.5 * d * d;
    }
    report.final_objective = loss + complexity;
    return {std::move(model), std::move(report)};
}

struct EvalMetrics {
    double rmse{0};
    double mae{0};
};

inline EvalMetrics evaluate(const BoostedModel& model, const Dataset& test) {
    if (test.size() == 0)
        throw EmptyDataset("cannot evaluate on an empty test set");
    double sq = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        double d = model.predict(test.features[i]) - test.targets[i];
        sq += d * d;
        abs_sum += std::abs(d);
    }
    double n = static_cast<double>(test.size());
    return {std::sqrt(sq / n), abs_sum / n};
}

// --- JSON persistence -------------------------------------------------------

namespace detail {

inline nlohmann::json node_to_json(const RegressionTree& tree, int idx) {
    const TreeNode& node = tree.nodes[static_cast<std::size_t>(idx)];
    if (node.is_leaf()) return nlohmann::json{{"leaf", node.leaf}};
    return nlohmann::json{{"feature", node.feature},
                          {"threshold", node.threshold},
                          {"left", node_to_json(tree, node.left)},
                          {"right", node_to_json(tree, node.right)}};
}

inline int node_from_json(RegressionTree& tree, const nlohmann::json& j) {
    TreeNode node;
    if (j.contains("leaf")) {
        node.leaf = j.at("leaf").get<double>();
        tree.nodes.push_back(node);
        return static_cast<int>(tree.nodes.size() - 1);
    }
    node.feature = j.at("feature").get<int>();
    node.threshold = j.at("threshold").get<double>();
    tree.nodes.push_back(node);
    int idx = static_cast<int>(tree.nodes.size() - 1);
    tree.nodes[idx].left = node_from_json(tree, j.at("left"));
    tree.nodes[idx].right = node_from_json(tree, j.at("right"));
    return idx;
}

}  // namespace detail

inline nlohmann::json BoostedModel::to_json() const {
    nlohmann::json trees_json = nlohmann::json::array();
    for (const auto& tree : trees) trees_json.push_back(detail::node_to_json(tree, 0));
    return nlohmann::json{{"base_score", base_score}, {"eta", eta},
                          {"lambda", lambda},         {"gamma", gamma},
                          {"max_depth", max_depth},   {"n_features", n_features},
                          {"trees", trees_json}};
}

inline BoostedModel BoostedModel::from_json(const nlohmann::json& j) {
    BoostedModel model;
    model.base_score = j.at("base_score").get<double>();
    model.eta = j.at("eta").get<double>();
    model.lambda = j.at("lambda").get<double>();
    model.gamma = j.at("gamma").get<double>();
    model.max_depth = j.at("max_depth").get<int>();
    model.n_features = j.value("n_features", std::size_t{0});
    for (const auto& tree_json : j.at("trees")) {
        RegressionTree tree;
        detail::node_from_json(tree, tree_json);
        model.trees.push_back(std::move(tree));
    }
    return model;
}

}  // namespace prepos::forecast
