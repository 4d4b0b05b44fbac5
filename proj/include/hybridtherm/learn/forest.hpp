#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace hybridtherm {

struct ForestConfig {
    int n_trees = 300;
    int min_samples_split = 2;
    int min_samples_leaf = 1;
    bool bootstrap = true;
    int max_features = 0;  // per split; 0 = ceil(d/3)
    std::uint64_t seed = 0;
};

/// Binary regression tree over multi-output targets; squared-error criterion.
struct CartTree {
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int leaf_offset = -1;  // index into leaf_values (times n_outputs)
    };
    std::vector<Node> nodes;
    std::vector<double> leaf_values;  // flattened, n_outputs per leaf
    std::vector<double> importance;   // per-feature accumulated SSE decrease

    void predict_row(const double* x, double* out, int n_outputs) const;
};

/// Bagged CART ensemble; prediction is the arithmetic mean over trees.
struct ForestModel {
    std::vector<CartTree> trees;
    ForestConfig config;
    int n_features = 0;
    int n_outputs = 0;

    Eigen::MatrixXd predict(const Eigen::MatrixXd& X) const;
    Eigen::MatrixXd predict_tree(std::size_t tree, const Eigen::MatrixXd& X) const;

    /// Mean decrease in impurity across trees, normalized to sum 1
    /// (all-zero when no split was ever made).
    std::vector<double> mean_decrease_impurity() const;
};

/// Grows config.n_trees trees on bootstrap samples with per-split random
/// feature subsets. Deterministic given seed (per-tree seeds are pre-assigned).
ForestModel rf_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                   const ForestConfig& config);

/// Warm start: keeps the fitted trees and adds `extra_trees` grown on the new
/// data. Prediction stays the mean over all trees.
ForestModel rf_warmstart_extend(const ForestModel& model, const Eigen::MatrixXd& X,
                                const Eigen::MatrixXd& Y, int extra_trees);

}  // namespace hybridtherm
