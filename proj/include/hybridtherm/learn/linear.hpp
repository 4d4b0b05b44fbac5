#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace hybridtherm {

/// Multiple linear regression with intercept; per-target solutions decouple.
struct LinearModel {
    Eigen::MatrixXd weights;    // d x K
    Eigen::VectorXd intercept;  // K
    bool rank_deficient = false;

    Eigen::MatrixXd predict(const Eigen::MatrixXd& X) const;
};

/// Least-squares fit via a rank-revealing orthogonal decomposition (the
/// intercept column is appended internally). A rank-deficient X yields the
/// minimum-norm solution and sets the rank_deficient flag.
LinearModel lr_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);

struct FinetuneConfig {
    int max_epochs = 1000;
    int patience = 3;
    int batch_size = 32;
    double validation_fraction = 0.2;
    double learning_rate = 1e-2;
    double min_delta = 1e-5;
    std::uint64_t seed = 0;
};

/// Continues optimizing the affine map with Adam on the MSE loss.
LinearModel lr_finetune(const LinearModel& model, const Eigen::MatrixXd& X,
                        const Eigen::MatrixXd& Y, const FinetuneConfig& config);

}  // namespace hybridtherm
