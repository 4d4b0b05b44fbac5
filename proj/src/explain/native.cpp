#include "hybridtherm/explain/native.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hybridtherm {

Eigen::MatrixXd native_importance(const Learner& model, const Eigen::MatrixXd& X) {
    const Eigen::Index n = X.rows(), d = X.cols();
    if (n == 0) throw std::invalid_argument("native_importance: empty sample matrix");

    switch (model.kind()) {
        case LearnerKind::Linear: {
            const auto& lm = model.linear();
            if (lm.weights.rows() != d)
                throw std::invalid_argument("native_importance: feature count mismatch");
            Eigen::MatrixXd imp(d, lm.weights.cols());
            const Eigen::VectorXd mean_abs_x = X.cwiseAbs().colwise().mean().transpose();
            for (Eigen::Index j = 0; j < d; ++j)
                for (Eigen::Index k = 0; k < lm.weights.cols(); ++k)
                    imp(j, k) = std::abs(lm.weights(j, k)) * mean_abs_x[j];
            return imp;
        }
        case LearnerKind::Ffnn: {
            const auto& net = model.ffnn();
            if (static_cast<Eigen::Index>(net.n_inputs()) != d)
                throw std::invalid_argument("native_importance: feature count mismatch");
            Eigen::MatrixXd imp =
                Eigen::MatrixXd::Zero(d, static_cast<Eigen::Index>(net.n_outputs()));
            for (Eigen::Index i = 0; i < n; ++i) {
                const Eigen::MatrixXd jac = net.input_jacobian(X.row(i));  // K x d
                imp += jac.cwiseAbs().transpose();
            }
            return imp / static_cast<double>(n);
        }
        case LearnerKind::Forest: {
            const auto& forest = model.forest();
            if (forest.n_features != d)
                throw std::invalid_argument("native_importance: feature count mismatch");
            const std::vector<double> mdi = forest.mean_decrease_impurity();
            Eigen::MatrixXd imp(d, forest.n_outputs);
            for (Eigen::Index j = 0; j < d; ++j)
                imp.row(j).setConstant(mdi[static_cast<std::size_t>(j)]);
            return imp;
        }
    }
    throw std::logic_error("native_importance: unknown learner kind");
}

std::vector<int> top_k_indices(const Eigen::VectorXd& v, int k) {
    std::vector<int> idx(static_cast<std::size_t>(v.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] > v[b]; });
    idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(k)));
    return idx;
}

int rank_overlap(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int top_k) {
    if (a.size() != b.size()) throw std::invalid_argument("rank_overlap: length mismatch");
    if (top_k > a.size()) throw std::invalid_argument("rank_overlap: top_k exceeds length");
    const auto ia = top_k_indices(a, top_k);
    const auto ib = top_k_indices(b, top_k);
    int overlap = 0;
    for (const int i : ia)
        if (std::find(ib.begin(), ib.end(), i) != ib.end()) ++overlap;
    return overlap;
}

}  // namespace hybridtherm
