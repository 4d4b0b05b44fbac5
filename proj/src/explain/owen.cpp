#include "hybridtherm/explain/owen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "hybridtherm/core/rng.hpp"

namespace hybridtherm {

namespace {

constexpr std::size_t kMaxExactFeatures = 25;
constexpr std::size_t kMaxExactClusterSize = 15;

std::vector<std::vector<double>> binomial_table(std::size_t n) {
    std::vector<std::vector<double>> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        c[i].assign(i + 1, 1.0);
        for (std::size_t j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    return c;
}

/// Interventional value function for one explained sample, with caching over
/// coalition bitmasks and chunked batched model evaluation.
class ValueFunction {
public:
    ValueFunction(const PredictionFn& model, const Eigen::RowVectorXd& x,
                  const Eigen::MatrixXd& background)
        : model_(model), x_(x), background_(background) {}

    /// Ensures every mask in `masks` is cached (one batched model call per chunk).
    void prefetch(const std::vector<std::uint32_t>& masks) {
        std::vector<std::uint32_t> pending;
        for (const auto m : masks)
            if (!cache_.count(m)) {
                cache_.emplace(m, Eigen::VectorXd());
                pending.push_back(m);
            }
        const std::size_t chunk = std::max<std::size_t>(1, 16384 / background_.rows());
        for (std::size_t at = 0; at < pending.size(); at += chunk)
            evaluate_block(pending, at, std::min(pending.size(), at + chunk));
    }

    const Eigen::VectorXd& operator()(std::uint32_t mask) {
        auto it = cache_.find(mask);
        if (it == cache_.end() || it->second.size() == 0) {
            std::vector<std::uint32_t> one{mask};
            cache_.erase(mask);
            prefetch(one);
            it = cache_.find(mask);
        }
        return it->second;
    }

private:
    void evaluate_block(const std::vector<std::uint32_t>& masks, std::size_t begin,
                        std::size_t end) {
        const Eigen::Index nb = background_.rows();
        const Eigen::Index d = background_.cols();
        Eigen::MatrixXd block(static_cast<Eigen::Index>(end - begin) * nb, d);
        for (std::size_t m = begin; m < end; ++m) {
            const Eigen::Index off = static_cast<Eigen::Index>(m - begin) * nb;
            block.middleRows(off, nb) = background_;
            for (Eigen::Index j = 0; j < d; ++j)
                if (masks[m] & (1u << j)) block.middleRows(off, nb).col(j).setConstant(x_[j]);
        }
        const Eigen::MatrixXd out = model_(block);
        for (std::size_t m = begin; m < end; ++m) {
            const Eigen::Index off = static_cast<Eigen::Index>(m - begin) * nb;
            cache_[masks[m]] =
                out.middleRows(off, nb).colwise().mean().transpose();
        }
    }

    const PredictionFn& model_;
    Eigen::RowVectorXd x_;
    const Eigen::MatrixXd& background_;
    std::unordered_map<std::uint32_t, Eigen::VectorXd> cache_;
};

std::uint32_t cluster_mask(const std::vector<std::size_t>& members) {
    std::uint32_t m = 0;
    for (const auto f : members) m |= 1u << f;
    return m;
}

void check_inputs(const Eigen::MatrixXd& samples, const Eigen::MatrixXd& background) {
    if (background.rows() == 0) throw std::invalid_argument("owen: empty background");
    if (background.cols() != samples.cols())
        throw std::invalid_argument("owen: sample/background width mismatch");
}

}  // namespace

AttributionResult owen_values(const PredictionFn& model, const Eigen::MatrixXd& samples,
                              const Eigen::MatrixXd& background,
                              const ClusterPartition& partition) {
    check_inputs(samples, background);
    const std::size_t d = partition.n_features();
    if (static_cast<std::size_t>(samples.cols()) != d)
        throw std::invalid_argument("owen_values: partition does not cover the features");
    if (d > kMaxExactFeatures)
        throw std::invalid_argument("owen_values: too many features for exact mode");
    for (const auto& c : partition.clusters)
        if (c.size() > kMaxExactClusterSize)
            throw std::invalid_argument("owen_values: cluster too large for exact mode");

    const std::size_t m = partition.clusters.size();
    const auto binom = binomial_table(std::max<std::size_t>(d, m));

    AttributionResult result;
    result.partition = partition;
    result.estimator = "exact";
    result.feature_names = partition.feature_names;
    result.samples = samples;

    std::vector<std::uint32_t> cmask(m);
    for (std::size_t k = 0; k < m; ++k) cmask[k] = cluster_mask(partition.clusters[k]);

    for (Eigen::Index row = 0; row < samples.rows(); ++row) {
        ValueFunction v(model, samples.row(row), background);

        // Collect every coalition touched, then batch-evaluate.
        std::vector<std::uint32_t> needed{0u, static_cast<std::uint32_t>((1ull << d) - 1)};
        for (std::size_t k = 0; k < m; ++k) {
            const auto& members = partition.clusters[k];
            std::vector<std::uint32_t> others;
            for (std::size_t o = 0; o < m; ++o)
                if (o != k) others.push_back(cmask[o]);
            for (std::uint32_t r = 0; r < (1u << others.size()); ++r) {
                std::uint32_t q = 0;
                for (std::size_t o = 0; o < others.size(); ++o)
                    if (r & (1u << o)) q |= others[o];
                for (std::uint32_t s = 0; s < (1u << members.size()); ++s) {
                    std::uint32_t mask = q;
                    for (std::size_t j = 0; j < members.size(); ++j)
                        if (s & (1u << j)) mask |= 1u << members[j];
                    needed.push_back(mask);
                }
            }
        }
        std::sort(needed.begin(), needed.end());
        needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
        v.prefetch(needed);

        const Eigen::Index n_out = v(0).size();
        Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), n_out);

        for (std::size_t k = 0; k < m; ++k) {
            const auto& members = partition.clusters[k];
            const std::size_t b = members.size();
            std::vector<std::uint32_t> others;
            for (std::size_t o = 0; o < m; ++o)
                if (o != k) others.push_back(cmask[o]);

            // w_outer[|R|] * w_inner[|T|] reproduces
            // 1/(|M||B_k|) * C(|M|-1,|R|)^-1 * C(|B_k|-1,|T|)^-1.
            std::vector<double> w_outer(others.size() + 1), w_inner(b);
            for (std::size_t r = 0; r <= others.size(); ++r)
                w_outer[r] = 1.0 / (static_cast<double>(m) * binom[others.size()][r]);
            for (std::size_t t = 0; t < b; ++t)
                w_inner[t] = 1.0 / (static_cast<double>(b) * binom[b - 1][t]);

            for (std::uint32_t r = 0; r < (1u << others.size()); ++r) {
                std::uint32_t q = 0;
                std::size_t r_count = 0;
                for (std::size_t o = 0; o < others.size(); ++o)
                    if (r & (1u << o)) { q |= others[o]; ++r_count; }
                const double wr = w_outer[r_count];

                for (std::uint32_t s = 0; s < (1u << b); ++s) {
                    std::uint32_t mask = q;
                    std::size_t s_count = 0;
                    for (std::size_t j = 0; j < b; ++j)
                        if (s & (1u << j)) { mask |= 1u << members[j]; ++s_count; }
                    const Eigen::VectorXd& value = v(mask);
                    // i in S: phi_i += w(|S|-1) * v;  i not in S: phi_i -= w(|S|) * v.
                    for (std::size_t j = 0; j < b; ++j) {
                        const auto row_j = static_cast<Eigen::Index>(members[j]);
                        if (s & (1u << j))
                            phi.row(row_j) += wr * w_inner[s_count - 1] * value.transpose();
                        else
                            phi.row(row_j) -= wr * w_inner[s_count] * value.transpose();
                    }
                }
            }
        }
        if (row == 0) result.base = v(0);
        result.phi.push_back(std::move(phi));
    }
    return result;
}

AttributionResult owen_values_sampled(const PredictionFn& model, const Eigen::MatrixXd& samples,
                                      const Eigen::MatrixXd& background,
                                      const ClusterPartition& partition, int n_permutations,
                                      std::uint64_t seed) {
    check_inputs(samples, background);
    if (n_permutations < 1)
        throw std::invalid_argument("owen_values_sampled: need at least one permutation");
    const std::size_t d = partition.n_features();
    const std::size_t m = partition.clusters.size();

    AttributionResult result;
    result.partition = partition;
    result.estimator = "sampled(" + std::to_string(n_permutations) + ")";
    result.feature_names = partition.feature_names;
    result.samples = samples;

    const Eigen::Index nb = background.rows();
    for (Eigen::Index row = 0; row < samples.rows(); ++row) {
        const Eigen::RowVectorXd x = samples.row(row);
        std::mt19937_64 rng(CounterRng::mix(seed ^ CounterRng::mix(row + 1)));

        std::vector<std::size_t> cluster_order(m);
        std::iota(cluster_order.begin(), cluster_order.end(), 0);
        Eigen::MatrixXd phi;
        Eigen::VectorXd base;

        for (int p = 0; p < n_permutations; ++p) {
            std::shuffle(cluster_order.begin(), cluster_order.end(), rng);
            std::vector<std::size_t> order;
            order.reserve(d);
            for (const auto k : cluster_order) {
                auto within = partition.clusters[k];
                std::shuffle(within.begin(), within.end(), rng);
                order.insert(order.end(), within.begin(), within.end());
            }

            // One batched call evaluates the whole coalition chain.
            Eigen::MatrixXd block((static_cast<Eigen::Index>(d) + 1) * nb, samples.cols());
            Eigen::MatrixXd mixed = background;
            block.topRows(nb) = mixed;
            for (std::size_t step = 0; step < d; ++step) {
                mixed.col(static_cast<Eigen::Index>(order[step])).setConstant(x[order[step]]);
                block.middleRows((static_cast<Eigen::Index>(step) + 1) * nb, nb) = mixed;
            }
            const Eigen::MatrixXd out = model(block);
            const Eigen::Index n_out = out.cols();
            if (phi.size() == 0) {
                phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), n_out);
                base = Eigen::VectorXd::Zero(n_out);
            }
            Eigen::VectorXd prev = out.topRows(nb).colwise().mean().transpose();
            base += prev;
            for (std::size_t step = 0; step < d; ++step) {
                const Eigen::VectorXd cur =
                    out.middleRows((static_cast<Eigen::Index>(step) + 1) * nb, nb)
                        .colwise()
                        .mean()
                        .transpose();
                phi.row(static_cast<Eigen::Index>(order[step])) += (cur - prev).transpose();
                prev = cur;
            }
        }
        phi /= static_cast<double>(n_permutations);
        base /= static_cast<double>(n_permutations);
        if (row == 0) result.base = base;
        result.phi.push_back(std::move(phi));
    }
    return result;
}

AttributionResult shapley_oracle(const PredictionFn& model, const Eigen::MatrixXd& samples,
                                 const Eigen::MatrixXd& background) {
    check_inputs(samples, background);
    const std::size_t d = static_cast<std::size_t>(samples.cols());
    if (d > 12) throw std::invalid_argument("shapley_oracle: d must be <= 12");

    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) names.push_back("f" + std::to_string(j));

    AttributionResult result;
    result.partition = singleton_partition(names);
    result.estimator = "oracle";
    result.feature_names = names;
    result.samples = samples;

    // Classical weights w(s) = s! (d-1-s)! / d!.
    std::vector<double> w(d);
    for (std::size_t s = 0; s < d; ++s) {
        double lw = 0.0;
        for (std::size_t i = 2; i <= s; ++i) lw += std::log(static_cast<double>(i));
        for (std::size_t i = 2; i <= d - 1 - s; ++i) lw += std::log(static_cast<double>(i));
        for (std::size_t i = 2; i <= d; ++i) lw -= std::log(static_cast<double>(i));
        w[s] = std::exp(lw);
    }

    for (Eigen::Index row = 0; row < samples.rows(); ++row) {
        ValueFunction v(model, samples.row(row), background);
        std::vector<std::uint32_t> all(1u << d);
        std::iota(all.begin(), all.end(), 0u);
        v.prefetch(all);

        const Eigen::Index n_out = v(0).size();
        Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), n_out);
        for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
            const std::size_t size = static_cast<std::size_t>(__builtin_popcount(mask));
            const Eigen::VectorXd& value = v(mask);
            for (std::size_t j = 0; j < d; ++j) {
                if (mask & (1u << j))
                    phi.row(static_cast<Eigen::Index>(j)) += w[size - 1] * value.transpose();
                else
                    phi.row(static_cast<Eigen::Index>(j)) -= w[size] * value.transpose();
            }
        }
        if (row == 0) result.base = v(0);
        result.phi.push_back(std::move(phi));
    }
    return result;
}

namespace {

/// Members of a dendrogram subtree, in leaf order.
std::vector<std::size_t> subtree_members(const Dendrogram& dend, std::size_t node) {
    const std::size_t d = dend.leaf_names.size();
    if (node < d) return {node};
    const auto& merge = dend.merges.at(node - d);
    auto left = subtree_members(dend, merge.a);
    const auto right = subtree_members(dend, merge.b);
    left.insert(left.end(), right.begin(), right.end());
    return left;
}

/// Recursive Owen: partition `members` by the dendrogram node's children and
/// recurse; singleton base case takes the marginal contribution against `q`.
void nested_attribute(ValueFunction& v, const Dendrogram& dend, std::size_t node,
                      std::uint32_t q, double weight, Eigen::MatrixXd& phi) {
    const std::size_t d = dend.leaf_names.size();
    if (node < d) {
        const Eigen::VectorXd delta = v(q | (1u << node)) - v(q);
        phi.row(static_cast<Eigen::Index>(node)) += weight * delta.transpose();
        return;
    }
    const auto& merge = dend.merges.at(node - d);
    const std::uint32_t mask_a = cluster_mask(subtree_members(dend, merge.a));
    const std::uint32_t mask_b = cluster_mask(subtree_members(dend, merge.b));
    // Two sub-clusters: each sees the other absent or fully present, weight 1/2.
    nested_attribute(v, dend, merge.a, q, weight * 0.5, phi);
    nested_attribute(v, dend, merge.a, q | mask_b, weight * 0.5, phi);
    nested_attribute(v, dend, merge.b, q, weight * 0.5, phi);
    nested_attribute(v, dend, merge.b, q | mask_a, weight * 0.5, phi);
}

/// Dendrogram node that spans exactly the given cluster, if any; otherwise the
/// cluster is treated as flat.
long spanning_node(const Dendrogram& dend, const std::vector<std::size_t>& cluster) {
    const std::size_t d = dend.leaf_names.size();
    if (cluster.size() == 1) return static_cast<long>(cluster[0]);
    const std::uint32_t want = cluster_mask(cluster);
    for (std::size_t mi = 0; mi < dend.merges.size(); ++mi)
        if (cluster_mask(subtree_members(dend, dend.merges[mi].id)) == want)
            return static_cast<long>(d + mi);
    return -1;
}

}  // namespace

AttributionResult owen_values_nested(const PredictionFn& model, const Eigen::MatrixXd& samples,
                                     const Eigen::MatrixXd& background,
                                     const Dendrogram& dendrogram, std::size_t n_clusters) {
    check_inputs(samples, background);
    const ClusterPartition partition = cut_partition(dendrogram, n_clusters);
    const std::size_t d = partition.n_features();
    if (d > kMaxExactFeatures)
        throw std::invalid_argument("owen_values_nested: too many features for exact mode");
    const std::size_t m = partition.clusters.size();
    const auto binom = binomial_table(std::max<std::size_t>(d, m));

    AttributionResult result;
    result.partition = partition;
    result.estimator = "nested";
    result.feature_names = partition.feature_names;
    result.samples = samples;

    std::vector<std::uint32_t> cmask(m);
    std::vector<long> span(m);
    for (std::size_t k = 0; k < m; ++k) {
        cmask[k] = cluster_mask(partition.clusters[k]);
        span[k] = spanning_node(dendrogram, partition.clusters[k]);
        if (span[k] < 0)
            throw std::logic_error("owen_values_nested: cut cluster has no spanning node");
    }

    for (Eigen::Index row = 0; row < samples.rows(); ++row) {
        ValueFunction v(model, samples.row(row), background);
        Eigen::Index n_out = 0;
        Eigen::MatrixXd phi;
        for (std::size_t k = 0; k < m; ++k) {
            std::vector<std::uint32_t> others;
            for (std::size_t o = 0; o < m; ++o)
                if (o != k) others.push_back(cmask[o]);
            for (std::uint32_t r = 0; r < (1u << others.size()); ++r) {
                std::uint32_t q = 0;
                std::size_t r_count = 0;
                for (std::size_t o = 0; o < others.size(); ++o)
                    if (r & (1u << o)) { q |= others[o]; ++r_count; }
                const double wr = 1.0 / (static_cast<double>(m) * binom[others.size()][r_count]);
                if (phi.size() == 0) {
                    n_out = v(0).size();
                    phi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), n_out);
                }
                nested_attribute(v, dendrogram, static_cast<std::size_t>(span[k]), q, wr, phi);
            }
        }
        if (row == 0) result.base = v(0);
        result.phi.push_back(std::move(phi));
    }
    return result;
}

}  // namespace hybridtherm
