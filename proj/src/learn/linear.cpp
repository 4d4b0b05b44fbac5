#include "hybridtherm/learn/linear.hpp"

#include <iostream>
#include <stdexcept>

#include "hybridtherm/learn/ffnn.hpp"

namespace hybridtherm {

Eigen::MatrixXd LinearModel::predict(const Eigen::MatrixXd& X) const {
    if (X.cols() != weights.rows())
        throw std::invalid_argument("LinearModel::predict: feature count mismatch");
    return (X * weights).rowwise() + intercept.transpose();
}

LinearModel lr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    if (X.rows() != Y.rows()) throw std::invalid_argument("lr_fit: row count mismatch");
    if (X.rows() == 0 || X.cols() == 0 || Y.cols() == 0)
        throw std::invalid_argument("lr_fit: empty input");
    if (!X.allFinite() || !Y.allFinite())
        throw std::invalid_argument("lr_fit: non-finite inputs");

    const Eigen::Index n = X.rows(), d = X.cols();
    Eigen::MatrixXd augmented(n, d + 1);
    augmented.leftCols(d) = X;
    augmented.col(d).setOnes();

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(augmented);
    const Eigen::MatrixXd solution = cod.solve(Y);  // minimum-norm when rank-deficient

    LinearModel model;
    model.weights = solution.topRows(d);
    model.intercept = solution.row(d).transpose();
    model.rank_deficient = cod.rank() < d + 1;
    if (model.rank_deficient)
        std::cerr << "lr_fit: rank-deficient design matrix (rank " << cod.rank() << " of "
                  << d + 1 << "), using minimum-norm solution\n";
    return model;
}

LinearModel lr_finetune(const LinearModel& model, const Eigen::MatrixXd& X,
                        const Eigen::MatrixXd& Y, const FinetuneConfig& config) {
    if (X.cols() != model.weights.rows())
        throw std::invalid_argument("lr_finetune: feature count mismatch");

    // The affine map is a single identity-activation layer; reuse the network
    // optimizer on it.
    FfnnModel as_net;
    as_net.config.hidden_sizes = {};
    as_net.config.batch_size = config.batch_size;
    as_net.config.seed = config.seed;
    FfnnLayer layer;
    layer.weights = model.weights.transpose();
    layer.bias = model.intercept;
    layer.activation = Activation::Identity;
    as_net.layers.push_back(std::move(layer));

    const auto [tuned, report] = ffnn_finetune(as_net, X, Y, config);
    (void)report;
    LinearModel out;
    out.weights = tuned.layers[0].weights.transpose();
    out.intercept = tuned.layers[0].bias;
    out.rank_deficient = model.rank_deficient;
    return out;
}

}  // namespace hybridtherm
