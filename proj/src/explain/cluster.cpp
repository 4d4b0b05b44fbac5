#include "hybridtherm/explain/cluster.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace hybridtherm {

std::size_t ClusterPartition::cluster_of(std::size_t feature) const {
    for (std::size_t k = 0; k < clusters.size(); ++k)
        for (const std::size_t f : clusters[k])
            if (f == feature) return k;
    throw std::out_of_range("ClusterPartition: feature not in any cluster");
}

Dendrogram agglomerate(const DistanceMatrix& distance) {
    const std::size_t d = distance.size();
    Dendrogram out;
    out.leaf_names = distance.feature_names;
    if (d == 0) throw std::invalid_argument("agglomerate: empty distance matrix");

    // Active cluster list with member counts; average linkage updated via the
    // Lance-Williams weighted mean.
    struct Active {
        std::size_t id;
        std::size_t count;
    };
    std::vector<Active> active;
    for (std::size_t i = 0; i < d; ++i) active.push_back({i, 1});
    Eigen::MatrixXd dist = distance.d;

    std::size_t next_id = d;
    while (active.size() > 1) {
        std::size_t bi = 0, bj = 1;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < active.size(); ++i)
            for (std::size_t j = i + 1; j < active.size(); ++j)
                if (dist(i, j) < best) {
                    best = dist(i, j);
                    bi = i;
                    bj = j;
                }
        out.merges.push_back({active[bi].id, active[bj].id, best, next_id});

        const double wa = static_cast<double>(active[bi].count);
        const double wb = static_cast<double>(active[bj].count);
        for (std::size_t k = 0; k < active.size(); ++k) {
            if (k == bi || k == bj) continue;
            const double merged = (wa * dist(bi, k) + wb * dist(bj, k)) / (wa + wb);
            dist(bi, k) = merged;
            dist(k, bi) = merged;
        }
        active[bi] = {next_id, active[bi].count + active[bj].count};
        ++next_id;

        // Drop row/column bj by swapping with the last active entry.
        const std::size_t last = active.size() - 1;
        if (bj != last) {
            active[bj] = active[last];
            for (std::size_t k = 0; k < active.size(); ++k) {
                dist(bj, k) = dist(last, k);
                dist(k, bj) = dist(k, last);
            }
            dist(bj, bj) = 0.0;
        }
        active.pop_back();
    }
    return out;
}

ClusterPartition cut_partition(const Dendrogram& dendrogram, std::size_t n_clusters) {
    const std::size_t d = dendrogram.leaf_names.size();
    if (n_clusters < 1 || n_clusters > d)
        throw std::invalid_argument("cut_partition: n_clusters out of range");

    // Union of all but the last n_clusters-1 merges.
    std::vector<std::size_t> parent(2 * d);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    const std::size_t kept = d - n_clusters;
    for (std::size_t m = 0; m < kept; ++m) {
        const auto& merge = dendrogram.merges[m];
        const std::size_t ra = find(merge.a), rb = find(merge.b);
        parent[ra] = merge.id;
        parent[rb] = merge.id;
    }

    std::vector<std::vector<std::size_t>> groups;
    std::vector<long> group_of(2 * d, -1);
    for (std::size_t f = 0; f < d; ++f) {
        const std::size_t root = find(f);
        if (group_of[root] < 0) {
            group_of[root] = static_cast<long>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(group_of[root])].push_back(f);
    }

    ClusterPartition out;
    out.feature_names = dendrogram.leaf_names;
    out.clusters = std::move(groups);  // ordered by smallest member (first appearance)
    out.cut_level = n_clusters;
    return out;
}

ClusterPartition singleton_partition(const std::vector<std::string>& feature_names) {
    ClusterPartition out;
    out.feature_names = feature_names;
    for (std::size_t f = 0; f < feature_names.size(); ++f) out.clusters.push_back({f});
    out.cut_level = feature_names.size();
    return out;
}

ClusterPartition one_cluster_partition(const std::vector<std::string>& feature_names) {
    ClusterPartition out;
    out.feature_names = feature_names;
    out.clusters.emplace_back();
    for (std::size_t f = 0; f < feature_names.size(); ++f) out.clusters.back().push_back(f);
    out.cut_level = 1;
    return out;
}

}  // namespace hybridtherm
