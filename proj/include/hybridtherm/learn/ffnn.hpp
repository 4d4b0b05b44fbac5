#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>
#include <vector>

#include "hybridtherm/learn/fit_report.hpp"
#include "hybridtherm/learn/linear.hpp"  // FinetuneConfig

namespace hybridtherm {

enum class Activation { Sigmoid, Identity };

double apply_activation(Activation a, double z);

struct FfnnLayer {
    Eigen::MatrixXd weights;  // out x in
    Eigen::VectorXd bias;     // out
    Activation activation = Activation::Sigmoid;
};

struct FfnnConfig {
    std::vector<int> hidden_sizes = {128, 128};
    Activation hidden_activation = Activation::Sigmoid;
    int batch_size = 32;
    int max_epochs = 1000;
    int patience = 10;
    double validation_fraction = 0.2;
    double learning_rate = 1e-2;
    double min_delta = 1e-5;  // validation-loss improvement that resets patience
    std::uint64_t seed = 0;
};

/// Feedforward network with a linear output layer, trained with Adam on the
/// MSE loss (mean over samples of the squared-error sum across outputs).
struct FfnnModel {
    std::vector<FfnnLayer> layers;
    FfnnConfig config;

    Eigen::MatrixXd predict(const Eigen::MatrixXd& X) const;

    /// d(outputs)/d(inputs) at one sample; K x d.
    Eigen::MatrixXd input_jacobian(const Eigen::RowVectorXd& x) const;

    std::size_t n_inputs() const { return layers.front().weights.cols(); }
    std::size_t n_outputs() const { return layers.back().weights.rows(); }
};

/// Initializes (symmetric uniform fan-in scheme) and trains. Validation rows
/// are the chronologically last `validation_fraction` of the input; early
/// stopping restores the best-validation weights. Deterministic given seed.
/// Throws on non-finite inputs or too few rows for the validation split.
std::pair<FfnnModel, FitReport> ffnn_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                         const FfnnConfig& config);

/// Continues training from the given weights (fresh optimizer state).
std::pair<FfnnModel, FitReport> ffnn_finetune(const FfnnModel& model, const Eigen::MatrixXd& X,
                                              const Eigen::MatrixXd& Y,
                                              const FinetuneConfig& config);

/// Untrained network with freshly initialized weights.
FfnnModel ffnn_init(std::size_t n_inputs, std::size_t n_outputs, const FfnnConfig& config);

// --- test hooks: flat parameter vector and analytic loss gradient ---
std::vector<double> ffnn_flat_parameters(const FfnnModel& model);
void ffnn_set_flat_parameters(FfnnModel& model, const std::vector<double>& params);
double ffnn_mse_loss(const FfnnModel& model, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y);
std::vector<double> ffnn_loss_gradient(const FfnnModel& model, const Eigen::MatrixXd& X,
                                       const Eigen::MatrixXd& Y);

}  // namespace hybridtherm
