#include "hybridtherm/learn/ffnn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace hybridtherm {

double apply_activation(Activation a, double z) {
    return a == Activation::Sigmoid ? 1.0 / (1.0 + std::exp(-z)) : z;
}

namespace {

Eigen::MatrixXd activate(Activation a, Eigen::MatrixXd z) {
    if (a == Activation::Sigmoid)
        z = z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
    return z;
}

// Derivative in terms of the activated output.
Eigen::MatrixXd activation_grad(Activation a, const Eigen::MatrixXd& activated) {
    if (a == Activation::Sigmoid)
        return activated.array() * (1.0 - activated.array());
    return Eigen::MatrixXd::Ones(activated.rows(), activated.cols());
}

struct AdamState {
    std::vector<Eigen::MatrixXd> m_w, v_w;
    std::vector<Eigen::VectorXd> m_b, v_b;
    long t = 0;

    explicit AdamState(const FfnnModel& model) {
        for (const auto& layer : model.layers) {
            m_w.emplace_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
            v_w.emplace_back(Eigen::MatrixXd::Zero(layer.weights.rows(), layer.weights.cols()));
            m_b.emplace_back(Eigen::VectorXd::Zero(layer.bias.size()));
            v_b.emplace_back(Eigen::VectorXd::Zero(layer.bias.size()));
        }
    }
};

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;

void adam_update(Eigen::MatrixXd& param, const Eigen::MatrixXd& grad, Eigen::MatrixXd& m,
                 Eigen::MatrixXd& v, long t, double lr) {
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v.array().matrix() + (1.0 - kBeta2) * grad.array().square().matrix();
    const double mc = 1.0 - std::pow(kBeta1, static_cast<double>(t));
    const double vc = 1.0 - std::pow(kBeta2, static_cast<double>(t));
    param.array() -= lr * (m.array() / mc) / ((v.array() / vc).sqrt() + kEps);
}

void adam_update(Eigen::VectorXd& param, const Eigen::VectorXd& grad, Eigen::VectorXd& m,
                 Eigen::VectorXd& v, long t, double lr) {
    m = kBeta1 * m + (1.0 - kBeta1) * grad;
    v = kBeta2 * v.array().matrix() + (1.0 - kBeta2) * grad.array().square().matrix();
    const double mc = 1.0 - std::pow(kBeta1, static_cast<double>(t));
    const double vc = 1.0 - std::pow(kBeta2, static_cast<double>(t));
    param.array() -= lr * (m.array() / mc) / ((v.array() / vc).sqrt() + kEps);
}

// Forward pass keeping every layer output (index 0 = input).
std::vector<Eigen::MatrixXd> forward_trace(const FfnnModel& model, const Eigen::MatrixXd& X) {
    std::vector<Eigen::MatrixXd> outs;
    outs.reserve(model.layers.size() + 1);
    outs.push_back(X);
    for (const auto& layer : model.layers) {
        Eigen::MatrixXd z = (outs.back() * layer.weights.transpose()).rowwise() +
                            layer.bias.transpose();
        outs.push_back(activate(layer.activation, std::move(z)));
    }
    return outs;
}

// One gradient evaluation on a batch; returns the batch loss.
double backprop(const FfnnModel& model, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                std::vector<Eigen::MatrixXd>& grad_w, std::vector<Eigen::VectorXd>& grad_b) {
    const auto outs = forward_trace(model, X);
    const Eigen::MatrixXd& pred = outs.back();
    const double inv_n = 1.0 / static_cast<double>(X.rows());
    const Eigen::MatrixXd err = pred - Y;
    const double loss = err.array().square().sum() * inv_n;

    Eigen::MatrixXd delta = 2.0 * inv_n * err;  // dL/d(output activation)
    for (int l = static_cast<int>(model.layers.size()) - 1; l >= 0; --l) {
        const auto& layer = model.layers[l];
        delta = delta.cwiseProduct(activation_grad(layer.activation, outs[l + 1]));
        grad_w[l] = delta.transpose() * outs[l];
        grad_b[l] = delta.colwise().sum().transpose();
        if (l > 0) delta = (delta * layer.weights).eval();
    }
    return loss;
}

struct LoopParams {
    int batch_size;
    int max_epochs;
    int patience;
    double validation_fraction;
    double learning_rate;
    double min_delta;
    std::uint64_t seed;
};

FitReport train_network(FfnnModel& model, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                        const LoopParams& p) {
    if (X.rows() != Y.rows()) throw std::invalid_argument("ffnn: row count mismatch");
    if (X.cols() != static_cast<Eigen::Index>(model.n_inputs()) ||
        Y.cols() != static_cast<Eigen::Index>(model.n_outputs()))
        throw std::invalid_argument("ffnn: dimension mismatch");
    if (!X.allFinite() || !Y.allFinite())
        throw std::invalid_argument("ffnn: non-finite inputs");

    FitReport report;
    if (p.max_epochs <= 0) return report;

    const Eigen::Index n = X.rows();
    const bool use_validation = p.validation_fraction > 0.0 && p.patience > 0;
    Eigen::Index n_val = use_validation
                             ? static_cast<Eigen::Index>(std::floor(
                                   static_cast<double>(n) * p.validation_fraction))
                             : 0;
    const Eigen::Index n_train = n - n_val;
    if (n_train <= 0 || (use_validation && n_val <= 0))
        throw std::invalid_argument("ffnn: too few rows for the validation split");

    // Chronologically last rows validate; shuffling only permutes training rows.
    const Eigen::MatrixXd x_val = X.bottomRows(n_val);
    const Eigen::MatrixXd y_val = Y.bottomRows(n_val);

    std::mt19937_64 shuffle_rng(p.seed ^ 0x5851f42d4c957f2dULL);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n_train));
    std::iota(order.begin(), order.end(), 0);

    std::vector<Eigen::MatrixXd> grad_w(model.layers.size());
    std::vector<Eigen::VectorXd> grad_b(model.layers.size());
    AdamState adam(model);

    double best_val = std::numeric_limits<double>::infinity();
    std::vector<FfnnLayer> best_layers = model.layers;
    int wait = 0;

    for (int epoch = 0; epoch < p.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        double epoch_loss = 0.0;
        for (Eigen::Index start = 0; start < n_train; start += p.batch_size) {
            const Eigen::Index b = std::min<Eigen::Index>(p.batch_size, n_train - start);
            Eigen::MatrixXd xb(b, X.cols()), yb(b, Y.cols());
            for (Eigen::Index i = 0; i < b; ++i) {
                xb.row(i) = X.row(order[start + i]);
                yb.row(i) = Y.row(order[start + i]);
            }
            const double loss = backprop(model, xb, yb, grad_w, grad_b);
            epoch_loss += loss * static_cast<double>(b);
            ++adam.t;
            for (std::size_t l = 0; l < model.layers.size(); ++l) {
                adam_update(model.layers[l].weights, grad_w[l], adam.m_w[l], adam.v_w[l],
                            adam.t, p.learning_rate);
                adam_update(model.layers[l].bias, grad_b[l], adam.m_b[l], adam.v_b[l],
                            adam.t, p.learning_rate);
            }
        }
        report.train_loss.push_back(epoch_loss / static_cast<double>(n_train));
        report.epochs = epoch + 1;

        if (use_validation) {
            const Eigen::MatrixXd pred = model.predict(x_val);
            const double val = (pred - y_val).array().square().sum() /
                               static_cast<double>(n_val);
            report.val_loss.push_back(val);
            if (val < best_val - p.min_delta) {
                best_val = val;
                best_layers = model.layers;
                wait = 0;
            } else if (++wait >= p.patience) {
                report.early_stopped = true;
                break;
            }
        }
    }
    if (use_validation && best_val < std::numeric_limits<double>::infinity())
        model.layers = best_layers;
    return report;
}

}  // namespace

Eigen::MatrixXd FfnnModel::predict(const Eigen::MatrixXd& X) const {
    if (X.cols() != static_cast<Eigen::Index>(n_inputs()))
        throw std::invalid_argument("FfnnModel::predict: feature count mismatch");
    Eigen::MatrixXd z = X;
    for (const auto& layer : layers)
        z = activate(layer.activation,
                     ((z * layer.weights.transpose()).rowwise() + layer.bias.transpose()).eval());
    return z;
}

Eigen::MatrixXd FfnnModel::input_jacobian(const Eigen::RowVectorXd& x) const {
    Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(x.size(), x.size());
    Eigen::RowVectorXd z = x;
    for (const auto& layer : layers) {
        const Eigen::RowVectorXd a =
            activate(layer.activation, (z * layer.weights.transpose() + layer.bias.transpose()).eval());
        Eigen::MatrixXd dlayer = layer.weights;  // out x in
        if (layer.activation == Activation::Sigmoid) {
            const Eigen::RowVectorXd g = a.array() * (1.0 - a.array());
            dlayer = g.transpose().asDiagonal() * dlayer;
        }
        jac = (dlayer * jac).eval();
        z = a;
    }
    return jac;  // K x d
}

FfnnModel ffnn_init(std::size_t n_inputs, std::size_t n_outputs, const FfnnConfig& config) {
    FfnnModel model;
    model.config = config;
    std::mt19937_64 rng(config.seed);
    std::size_t fan_in = n_inputs;
    auto make_layer = [&](std::size_t out, Activation act) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
        std::uniform_real_distribution<double> dist(-bound, bound);
        FfnnLayer layer;
        layer.weights.resize(out, fan_in);
        for (Eigen::Index r = 0; r < layer.weights.rows(); ++r)
            for (Eigen::Index c = 0; c < layer.weights.cols(); ++c)
                layer.weights(r, c) = dist(rng);
        layer.bias.resize(out);
        for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias(r) = dist(rng);
        layer.activation = act;
        model.layers.push_back(std::move(layer));
        fan_in = out;
    };
    for (const int h : config.hidden_sizes)
        make_layer(static_cast<std::size_t>(h), config.hidden_activation);
    make_layer(n_outputs, Activation::Identity);
    return model;
}

std::pair<FfnnModel, FitReport> ffnn_fit(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y,
                                         const FfnnConfig& config) {
    if (X.rows() < 10) throw std::invalid_argument("ffnn_fit: needs at least 10 rows");
    FfnnModel model = ffnn_init(static_cast<std::size_t>(X.cols()),
                                static_cast<std::size_t>(Y.cols()), config);
    LoopParams p{config.batch_size, config.max_epochs,      config.patience,
                 config.validation_fraction, config.learning_rate, config.min_delta,
                 config.seed};
    FitReport report = train_network(model, X, Y, p);
    return {std::move(model), std::move(report)};
}

std::pair<FfnnModel, FitReport> ffnn_finetune(const FfnnModel& model, const Eigen::MatrixXd& X,
                                              const Eigen::MatrixXd& Y,
                                              const FinetuneConfig& config) {
    FfnnModel tuned = model;
    LoopParams p{config.batch_size, config.max_epochs,      config.patience,
                 config.validation_fraction, config.learning_rate, config.min_delta,
                 config.seed};
    FitReport report = train_network(tuned, X, Y, p);
    return {std::move(tuned), std::move(report)};
}

std::vector<double> ffnn_flat_parameters(const FfnnModel& model) {
    std::vector<double> out;
    for (const auto& layer : model.layers) {
        out.insert(out.end(), layer.weights.data(), layer.weights.data() + layer.weights.size());
        out.insert(out.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
    }
    return out;
}

void ffnn_set_flat_parameters(FfnnModel& model, const std::vector<double>& params) {
    std::size_t k = 0;
    for (auto& layer : model.layers) {
        for (Eigen::Index i = 0; i < layer.weights.size(); ++i)
            layer.weights.data()[i] = params.at(k++);
        for (Eigen::Index i = 0; i < layer.bias.size(); ++i) layer.bias.data()[i] = params.at(k++);
    }
    if (k != params.size())
        throw std::invalid_argument("ffnn_set_flat_parameters: size mismatch");
}

double ffnn_mse_loss(const FfnnModel& model, const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    const Eigen::MatrixXd pred = model.predict(X);
    return (pred - Y).array().square().sum() / static_cast<double>(X.rows());
}

std::vector<double> ffnn_loss_gradient(const FfnnModel& model, const Eigen::MatrixXd& X,
                                       const Eigen::MatrixXd& Y) {
    std::vector<Eigen::MatrixXd> grad_w(model.layers.size());
    std::vector<Eigen::VectorXd> grad_b(model.layers.size());
    backprop(model, X, Y, grad_w, grad_b);
    std::vector<double> out;
    for (std::size_t l = 0; l < model.layers.size(); ++l) {
        out.insert(out.end(), grad_w[l].data(), grad_w[l].data() + grad_w[l].size());
        out.insert(out.end(), grad_b[l].data(), grad_b[l].data() + grad_b[l].size());
    }
    return out;
}

}  // namespace hybridtherm
