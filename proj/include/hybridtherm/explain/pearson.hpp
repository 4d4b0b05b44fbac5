#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace hybridtherm {

/// Pearson-distance matrix D = 1 - |corr|; symmetric, zero diagonal, entries
/// in [0, 1]. Constant columns get distance 1 to every other feature.
struct DistanceMatrix {
    Eigen::MatrixXd d;
    std::vector<std::string> feature_names;

    std::size_t size() const { return feature_names.size(); }
};

/// Throws if X has fewer than 2 rows.
DistanceMatrix pearson_distance(const Eigen::MatrixXd& X,
                                const std::vector<std::string>& feature_names);

}  // namespace hybridtherm
