#include "hybridtherm/learn/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hybridtherm/core/rng.hpp"

namespace hybridtherm {

namespace {

struct BestSplit {
    double improvement = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

class TreeBuilder {
public:
    TreeBuilder(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, const ForestConfig& cfg,
                int max_features, std::uint64_t tree_seed)
        : x_(x), y_(y), cfg_(cfg), max_features_(max_features), rng_(tree_seed) {
        n_outputs_ = static_cast<int>(y.cols());
        ysq_.resize(x.rows());
        for (Eigen::Index i = 0; i < x.rows(); ++i) ysq_[i] = y.row(i).squaredNorm();
    }

    CartTree build() {
        CartTree tree;
        tree.importance.assign(static_cast<std::size_t>(x_.cols()), 0.0);

        const int n = static_cast<int>(x_.rows());
        std::vector<int> idx(static_cast<std::size_t>(n));
        if (cfg_.bootstrap) {
            std::uniform_int_distribution<int> pick(0, n - 1);
            for (auto& i : idx) i = pick(rng_);
        } else {
            std::iota(idx.begin(), idx.end(), 0);
        }

        feature_pool_.resize(static_cast<std::size_t>(x_.cols()));
        scratch_.reserve(idx.size());

        struct Frame { int start, end, node; };
        tree.nodes.push_back({});
        std::vector<Frame> stack{{0, n, 0}};
        while (!stack.empty()) {
            const Frame f = stack.back();
            stack.pop_back();
            const int count = f.end - f.start;

            Eigen::VectorXd sum = Eigen::VectorXd::Zero(n_outputs_);
            double sq = 0.0;
            for (int i = f.start; i < f.end; ++i) {
                sum += y_.row(idx[i]).transpose();
                sq += ysq_[idx[i]];
            }
            const double node_sse = sq - sum.squaredNorm() / count;

            BestSplit best;
            if (count >= cfg_.min_samples_split && node_sse > 1e-12)
                best = find_split(idx, f.start, f.end, sum, sq, node_sse);

            if (best.feature < 0) {
                tree.nodes[f.node].feature = -1;
                tree.nodes[f.node].leaf_offset = static_cast<int>(tree.leaf_values.size());
                for (int k = 0; k < n_outputs_; ++k)
                    tree.leaf_values.push_back(sum[k] / count);
                continue;
            }

            tree.importance[best.feature] += best.improvement;
            const auto mid_it = std::stable_partition(
                idx.begin() + f.start, idx.begin() + f.end,
                [&](int i) { return x_(i, best.feature) <= best.threshold; });
            const int mid = static_cast<int>(mid_it - idx.begin());

            const int left = static_cast<int>(tree.nodes.size());
            tree.nodes.push_back({});
            tree.nodes.push_back({});
            tree.nodes[f.node].feature = best.feature;
            tree.nodes[f.node].threshold = best.threshold;
            tree.nodes[f.node].left = left;
            tree.nodes[f.node].right = left + 1;
            // Depth-first, left child first, so the RNG consumption order is fixed.
            stack.push_back({mid, f.end, left + 1});
            stack.push_back({f.start, mid, left});
        }
        return tree;
    }

private:
    BestSplit find_split(const std::vector<int>& idx, int start, int end,
                         const Eigen::VectorXd& total_sum, double total_sq, double node_sse) {
        const int count = end - start;
        const int d = static_cast<int>(x_.cols());

        // Random feature order; constant-within-node features do not count
        // toward the max_features budget.
        std::iota(feature_pool_.begin(), feature_pool_.end(), 0);
        for (int i = 0; i < d - 1; ++i) {
            std::uniform_int_distribution<int> pick(i, d - 1);
            std::swap(feature_pool_[i], feature_pool_[pick(rng_)]);
        }

        BestSplit best;
        Eigen::VectorXd left_sum(n_outputs_);
        int tried = 0;
        for (int fi = 0; fi < d && tried < max_features_; ++fi) {
            const int feature = feature_pool_[fi];
            scratch_.assign(idx.begin() + start, idx.begin() + end);
            std::sort(scratch_.begin(), scratch_.end(), [&](int a, int b) {
                const double va = x_(a, feature), vb = x_(b, feature);
                return va < vb || (va == vb && a < b);
            });
            if (x_(scratch_.front(), feature) == x_(scratch_.back(), feature)) continue;
            ++tried;

            left_sum.setZero();
            double left_sq = 0.0;
            for (int p = 1; p < count; ++p) {
                const int i = scratch_[p - 1];
                left_sum += y_.row(i).transpose();
                left_sq += ysq_[i];
                if (p < cfg_.min_samples_leaf || count - p < cfg_.min_samples_leaf) continue;
                const double v_prev = x_(scratch_[p - 1], feature);
                const double v_next = x_(scratch_[p], feature);
                if (v_prev == v_next) continue;
                const double sse_left = left_sq - left_sum.squaredNorm() / p;
                const double sse_right = (total_sq - left_sq) -
                                         (total_sum - left_sum).squaredNorm() / (count - p);
                const double improvement = node_sse - sse_left - sse_right;
                if (improvement > best.improvement + 1e-12) {
                    best.improvement = improvement;
                    best.feature = feature;
                    best.threshold = v_prev + 0.5 * (v_next - v_prev);
                }
            }
        }
        return best;
    }

    const Eigen::MatrixXd& x_;
    const Eigen::MatrixXd& y_;
    const ForestConfig& cfg_;
    int max_features_;
    std::mt19937_64 rng_;
    int n_outputs_;
    std::vector<double> ysq_;
    std::vector<int> feature_pool_;
    std::vector<int> scratch_;
};

std::uint64_t tree_seed(std::uint64_t forest_seed, std::size_t tree_index) {
    return CounterRng::mix(forest_seed ^ (0xa24baed4963ee407ULL * (tree_index + 1)));
}

}  // namespace

void CartTree::predict_row(const double* x, double* out, int n_outputs) const {
    int node = 0;
    while (nodes[node].feature >= 0)
        node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left
                                                               : nodes[node].right;
    const double* leaf = &leaf_values[nodes[node].leaf_offset];
    for (int k = 0; k < n_outputs; ++k) out[k] = leaf[k];
}

Eigen::MatrixXd ForestModel::predict(const Eigen::MatrixXd& X) const {
    if (X.cols() != n_features)
        throw std::invalid_argument("ForestModel::predict: feature count mismatch");
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(X.rows(), n_outputs);
    std::vector<double> row(static_cast<std::size_t>(n_features));
    std::vector<double> leaf(static_cast<std::size_t>(n_outputs));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (int j = 0; j < n_features; ++j) row[j] = X(i, j);
        for (const auto& tree : trees) {
            tree.predict_row(row.data(), leaf.data(), n_outputs);
            for (int k = 0; k < n_outputs; ++k) out(i, k) += leaf[k];
        }
    }
    out /= static_cast<double>(trees.size());
    return out;
}

Eigen::MatrixXd ForestModel::predict_tree(std::size_t tree, const Eigen::MatrixXd& X) const {
    Eigen::MatrixXd out(X.rows(), n_outputs);
    std::vector<double> row(static_cast<std::size_t>(n_features));
    std::vector<double> leaf(static_cast<std::size_t>(n_outputs));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (int j = 0; j < n_features; ++j) row[j] = X(i, j);
        trees.at(tree).predict_row(row.data(), leaf.data(), n_outputs);
        for (int k = 0; k < n_outputs; ++k) out(i, k) = leaf[k];
    }
    return out;
}

std::vector<double> ForestModel::mean_decrease_impurity() const {
    std::vector<double> out(static_cast<std::size_t>(n_features), 0.0);
    for (const auto& tree : trees) {
        const double total = std::accumulate(tree.importance.begin(), tree.importance.end(), 0.0);
        if (total <= 0.0) continue;
        for (std::size_t j = 0; j < out.size(); ++j) out[j] += tree.importance[j] / total;
    }
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    if (total > 0.0)
        for (auto& v : out) v /= total;
    return out;
}

ForestModel rf_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                   const ForestConfig& config) {
    if (X.rows() != Y.rows()) throw std::invalid_argument("rf_fit: row count mismatch");
    if (X.rows() < 2) throw std::invalid_argument("rf_fit: needs at least 2 rows");
    if (!X.allFinite() || !Y.allFinite())
        throw std::invalid_argument("rf_fit: non-finite inputs");

    ForestModel model;
    model.config = config;
    model.n_features = static_cast<int>(X.cols());
    model.n_outputs = static_cast<int>(Y.cols());
    const int max_features =
        config.max_features > 0
            ? config.max_features
            : static_cast<int>(std::ceil(static_cast<double>(X.cols()) / 3.0));
    model.trees.reserve(static_cast<std::size_t>(config.n_trees));
    for (int t = 0; t < config.n_trees; ++t) {
        TreeBuilder builder(X, Y, config, max_features, tree_seed(config.seed, t));
        model.trees.push_back(builder.build());
    }
    return model;
}

ForestModel rf_warmstart_extend(const ForestModel& model, const Eigen::MatrixXd& X,
                                const Eigen::MatrixXd& Y, int extra_trees) {
    if (X.cols() != model.n_features)
        throw std::invalid_argument("rf_warmstart_extend: feature count mismatch");
    if (Y.cols() != model.n_outputs)
        throw std::invalid_argument("rf_warmstart_extend: output count mismatch");
    ForestModel out = model;
    const int max_features =
        model.config.max_features > 0
            ? model.config.max_features
            : static_cast<int>(std::ceil(static_cast<double>(X.cols()) / 3.0));
    const std::size_t base = model.trees.size();
    for (int t = 0; t < extra_trees; ++t) {
        TreeBuilder builder(X, Y, model.config, max_features,
                            tree_seed(model.config.seed, base + t));
        out.trees.push_back(builder.build());
    }
    return out;
}

}  // namespace hybridtherm
