#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hybridtherm/explain/cluster.hpp"

namespace hybridtherm {

/// Pure batched prediction function: rows of features in, rows of outputs out.
using PredictionFn = std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>;

/// Per-sample, per-feature, per-target attribution in target units. The base
/// value is the mean prediction over the background set, and for the exact
/// estimator the values satisfy sum(phi) + base = prediction.
struct AttributionResult {
    std::vector<Eigen::MatrixXd> phi;  // one d x K matrix per explained sample
    Eigen::VectorXd base;              // K
    ClusterPartition partition;
    std::string estimator;  // "exact" | "sampled(n)" | "oracle" | "nested"
    std::vector<std::string> feature_names;
    std::vector<std::string> target_names;
    Eigen::MatrixXd samples;  // the explained rows, n x d
};

/// Exact hierarchical Shapley (Owen) values for every row of `samples`.
/// The value function is interventional: v(S) averages model evaluations where
/// features in S take the sample's values and the rest take each background
/// row's values. Exact mode enumerates the double sum over cluster subsets and
/// within-cluster subsets; it requires at most 25 features and clusters of at
/// most 15 features. Throws on an empty background or bound overflow.
AttributionResult owen_values(const PredictionFn& model, const Eigen::MatrixXd& samples,
                              const Eigen::MatrixXd& background,
                              const ClusterPartition& partition);

/// Unbiased two-stage permutation estimator of the same quantity (random
/// cluster order, then random order within each cluster; marginal
/// contributions along the chain). Deterministic given seed; per-sample seeds
/// are pre-assigned so parallel evaluation cannot change the result.
AttributionResult owen_values_sampled(const PredictionFn& model, const Eigen::MatrixXd& samples,
                                      const Eigen::MatrixXd& background,
                                      const ClusterPartition& partition, int n_permutations,
                                      std::uint64_t seed);

/// Exhaustive classical Shapley values (2^d coalitions, d <= 12); the test
/// oracle the hierarchical estimators reduce to for singleton or one-cluster
/// partitions.
AttributionResult shapley_oracle(const PredictionFn& model, const Eigen::MatrixXd& samples,
                                 const Eigen::MatrixXd& background);

/// Nested variant: the within-cluster sum of the flat formula is replaced by a
/// recursive descent of the cluster's own sub-dendrogram. Shares the exact
/// estimator's efficiency property.
AttributionResult owen_values_nested(const PredictionFn& model, const Eigen::MatrixXd& samples,
                                     const Eigen::MatrixXd& background,
                                     const Dendrogram& dendrogram, std::size_t n_clusters);

}  // namespace hybridtherm
