#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "hybridtherm/explain/pearson.hpp"

namespace hybridtherm {

/// Agglomerative merge sequence. Leaves are 0..d-1; merge k creates node d+k.
struct Dendrogram {
    struct Merge {
        std::size_t a;
        std::size_t b;
        double height;
        std::size_t id;  // new node id
    };
    std::vector<Merge> merges;  // d-1 entries, heights non-decreasing
    std::vector<std::string> leaf_names;
};

/// Disjoint feature clusters covering all features.
struct ClusterPartition {
    std::vector<std::vector<std::size_t>> clusters;
    std::vector<std::string> feature_names;
    std::size_t cut_level = 1;  // number of clusters requested

    std::size_t cluster_of(std::size_t feature) const;
    std::size_t n_features() const { return feature_names.size(); }
};

/// Average-linkage clustering over a Pearson-distance matrix; ties break on
/// the smallest (i, j) pair, so the merge order is deterministic.
Dendrogram agglomerate(const DistanceMatrix& distance);

/// Undoes the last n_clusters-1 merges; the remaining components are the
/// clusters. Cluster order follows the smallest member index.
ClusterPartition cut_partition(const Dendrogram& dendrogram, std::size_t n_clusters);

/// Every feature alone; the classical-Shapley reduction case.
ClusterPartition singleton_partition(const std::vector<std::string>& feature_names);

/// All features in one cluster; the other reduction case.
ClusterPartition one_cluster_partition(const std::vector<std::string>& feature_names);

}  // namespace hybridtherm
