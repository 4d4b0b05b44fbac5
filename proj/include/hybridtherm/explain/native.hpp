#pragma once

#include <Eigen/Dense>
#include <vector>

#include "hybridtherm/learn/learner.hpp"

namespace hybridtherm {

/// Model-native importance, one nonnegative d x K matrix (per feature, per
/// target):
///   LR    — mean absolute linear effect |W_jk * x_j| over the samples;
///   FFNN  — mean absolute input-output Jacobian entry over the samples;
///   RF    — mean decrease in impurity, normalized to sum 1 and shared across
///           targets (the forest is fit once for all outputs).
Eigen::MatrixXd native_importance(const Learner& model, const Eigen::MatrixXd& X);

/// Size of the intersection of the top-k index sets of two importance vectors;
/// ties break toward the smaller feature index.
int rank_overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int top_k);

/// Indices of the k largest entries, descending, ties toward smaller index.
std::vector<int> top_k_indices(const Eigen::VectorXd& v, int k);

}  // namespace hybridtherm
