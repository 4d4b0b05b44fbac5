#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "hybridtherm/learn/learner.hpp"

using namespace hybridtherm;

namespace {

// Independent least-squares oracle: normal equations solved by plain Gaussian
// elimination with partial pivoting. Deliberately a different algorithm from
// the production path.
Eigen::MatrixXd normal_equation_solve(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) {
    const Eigen::Index n = X.rows(), d = X.cols();
    Eigen::MatrixXd a(n, d + 1);
    a.leftCols(d) = X;
    a.col(d).setOnes();
    Eigen::MatrixXd lhs = a.transpose() * a;               // (d+1) x (d+1)
    Eigen::MatrixXd rhs = a.transpose() * Y;               // (d+1) x K
    const Eigen::Index m = lhs.rows();
    for (Eigen::Index col = 0; col < m; ++col) {
        Eigen::Index pivot = col;
        for (Eigen::Index r = col + 1; r < m; ++r)
            if (std::abs(lhs(r, col)) > std::abs(lhs(pivot, col))) pivot = r;
        lhs.row(col).swap(lhs.row(pivot));
        rhs.row(col).swap(rhs.row(pivot));
        for (Eigen::Index r = col + 1; r < m; ++r) {
            const double f = lhs(r, col) / lhs(col, col);
            lhs.row(r) -= f * lhs.row(col);
            rhs.row(r) -= f * rhs.row(col);
        }
    }
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(m, Y.cols());
    for (Eigen::Index r = m - 1; r >= 0; --r) {
        w.row(r) = rhs.row(r);
        for (Eigen::Index c = r + 1; c < m; ++c) w.row(r) -= lhs(r, c) * w.row(c);
        w.row(r) /= lhs(r, r);
    }
    return w;
}

}  // namespace

TEST_CASE("lr_fit: hand examples") {
    SUBCASE("y = 2x recovers slope 2, intercept 0") {
        Eigen::MatrixXd x(3, 1), y(3, 1);
        x << 1, 2, 3;
        y << 2, 4, 6;
        const LinearModel m = lr_fit(x, y);
        CHECK(m.weights(0, 0) == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(m.intercept(0) == doctest::Approx(0.0).scale(1).epsilon(1e-10));
        CHECK_FALSE(m.rank_deficient);
    }
    SUBCASE("all-zero targets give zero coefficients") {
        Eigen::MatrixXd x(4, 2), y = Eigen::MatrixXd::Zero(4, 1);
        x << 1, 0, 0, 1, 1, 1, 2, 1;
        const LinearModel m = lr_fit(x, y);
        CHECK(m.weights.cwiseAbs().maxCoeff() < 1e-12);
        CHECK(std::abs(m.intercept(0)) < 1e-12);
    }
    SUBCASE("decoupled targets: Y2 = 3*Y1 gives W2 = 3*W1") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> g;
        Eigen::MatrixXd x(20, 3), y(20, 2);
        for (Eigen::Index i = 0; i < 20; ++i) {
            for (int j = 0; j < 3; ++j) x(i, j) = g(rng);
            y(i, 0) = 2.0 * x(i, 0) - x(i, 2) + 0.5 + 0.01 * g(rng);
            y(i, 1) = 3.0 * y(i, 0);
        }
        const LinearModel m = lr_fit(x, y);
        for (int j = 0; j < 3; ++j)
            CHECK(m.weights(j, 1) == doctest::Approx(3.0 * m.weights(j, 0)).epsilon(1e-9));
        CHECK(m.intercept(1) == doctest::Approx(3.0 * m.intercept(0)).epsilon(1e-9));
    }
}

TEST_CASE("lr_fit: agreement with the normal-equation oracle on random problems") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXd x(50, 5), y(50, 2);
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = g(rng);
            for (Eigen::Index k = 0; k < y.cols(); ++k) y(i, k) = g(rng);
        }
        const LinearModel m = lr_fit(x, y);
        const Eigen::MatrixXd oracle = normal_equation_solve(x, y);
        CHECK((m.weights - oracle.topRows(5)).cwiseAbs().maxCoeff() < 1e-8);
        CHECK((m.intercept.transpose() - oracle.row(5)).cwiseAbs().maxCoeff() < 1e-8);

        // Residual orthogonality to the (augmented) column space.
        Eigen::MatrixXd aug(50, 6);
        aug.leftCols(5) = x;
        aug.col(5).setOnes();
        const Eigen::MatrixXd residual = y - m.predict(x);
        CHECK((aug.transpose() * residual).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("lr_fit: rank-deficient design uses the minimum-norm solution") {
    Eigen::MatrixXd x(6, 2), y(6, 1);
    for (int i = 0; i < 6; ++i) {
        x(i, 0) = i;
        x(i, 1) = 2.0 * i;  // exactly collinear
        y(i, 0) = 3.0 * i;
    }
    const LinearModel m = lr_fit(x, y);
    CHECK(m.rank_deficient);
    CHECK((m.predict(x) - y).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("predict: affine evaluation hand example") {
    LinearModel m;
    m.weights = Eigen::MatrixXd::Constant(1, 1, 2.0);
    m.intercept = Eigen::VectorXd::Constant(1, 1.0);
    Eigen::MatrixXd x(1, 1);
    x << 3.0;
    CHECK(m.predict(x)(0, 0) == doctest::Approx(7.0));
    Eigen::MatrixXd bad(1, 2);
    CHECK_THROWS_AS(m.predict(bad), std::invalid_argument);
}

TEST_CASE("ffnn: analytic gradient matches central finite differences") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    FfnnConfig config;
    config.hidden_sizes = {7, 4};
    config.seed = 21;
    Eigen::MatrixXd x(5, 3), y(5, 2);
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (int j = 0; j < 3; ++j) x(i, j) = g(rng);
        for (int k = 0; k < 2; ++k) y(i, k) = g(rng);
    }
    FfnnModel model = ffnn_init(3, 2, config);
    const auto analytic = ffnn_loss_gradient(model, x, y);
    auto params = ffnn_flat_parameters(model);
    const double eps = 1e-5;
    double max_rel = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        const double keep = params[p];
        params[p] = keep + eps;
        ffnn_set_flat_parameters(model, params);
        const double up = ffnn_mse_loss(model, x, y);
        params[p] = keep - eps;
        ffnn_set_flat_parameters(model, params);
        const double down = ffnn_mse_loss(model, x, y);
        params[p] = keep;
        const double numeric = (up - down) / (2.0 * eps);
        const double denom = std::max({std::abs(numeric), std::abs(analytic[p]), 1e-8});
        max_rel = std::max(max_rel, std::abs(numeric - analytic[p]) / denom);
    }
    ffnn_set_flat_parameters(model, params);
    CHECK(max_rel < 1e-5);
}

TEST_CASE("ffnn: zero max epochs returns the initialized model") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(20, 2);
    Eigen::MatrixXd y = Eigen::MatrixXd::Random(20, 1);
    FfnnConfig config;
    config.hidden_sizes = {4};
    config.max_epochs = 0;
    config.seed = 3;
    const auto [model, report] = ffnn_fit(x, y, config);
    CHECK(report.epochs == 0);
    CHECK(report.train_loss.empty());
    const FfnnModel fresh = ffnn_init(2, 1, config);
    CHECK(ffnn_flat_parameters(model) == ffnn_flat_parameters(fresh));
}

TEST_CASE("ffnn: learns a linear target with identity activations") {
    Eigen::MatrixXd x(64, 1), y(64, 1);
    for (int i = 0; i < 64; ++i) {
        x(i, 0) = -1.0 + 2.0 * i / 63.0;
        y(i, 0) = 2.0 * x(i, 0);
    }
    FfnnConfig config;
    config.hidden_sizes = {};
    config.hidden_activation = Activation::Identity;
    config.max_epochs = 400;
    config.patience = 0;  // no early stopping on this convex instance
    config.validation_fraction = 0.0;
    config.learning_rate = 0.05;
    config.batch_size = 16;
    config.seed = 9;
    const auto [model, report] = ffnn_fit(x, y, config);
    CHECK(model.layers[0].weights(0, 0) == doctest::Approx(2.0).epsilon(1e-2));
    CHECK(report.epochs == 400);
    // Loss decreases over the first epochs on a sane convex instance.
    CHECK(report.train_loss.back() < report.train_loss.front());
}

TEST_CASE("ffnn: all-zero weights output the final bias") {
    FfnnConfig config;
    config.hidden_sizes = {3};
    FfnnModel model = ffnn_init(2, 2, config);
    auto params = ffnn_flat_parameters(model);
    std::fill(params.begin(), params.end(), 0.0);
    ffnn_set_flat_parameters(model, params);
    model.layers.back().bias << 1.5, -2.5;
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(4, 2);
    const Eigen::MatrixXd out = model.predict(x);
    for (int i = 0; i < 4; ++i) {
        // Hidden sigmoids sit at 0.5 but the zero output weights erase them.
        CHECK(out(i, 0) == doctest::Approx(1.5));
        CHECK(out(i, 1) == doctest::Approx(-2.5));
    }
}

TEST_CASE("ffnn: deterministic refit and early stopping restores best weights") {
    std::mt19937_64 rng(13);
    std::normal_distribution<double> g;
    Eigen::MatrixXd x(80, 3), y(80, 1);
    for (int i = 0; i < 80; ++i) {
        for (int j = 0; j < 3; ++j) x(i, j) = g(rng);
        y(i, 0) = std::sin(x(i, 0)) + 0.1 * g(rng);
    }
    FfnnConfig config;
    config.hidden_sizes = {8};
    config.max_epochs = 60;
    config.patience = 5;
    config.learning_rate = 0.02;
    config.seed = 77;
    const auto [a, ra] = ffnn_fit(x, y, config);
    const auto [b, rb] = ffnn_fit(x, y, config);
    CHECK(ffnn_flat_parameters(a) == ffnn_flat_parameters(b));  // bit-identical
    CHECK(ra.epochs == rb.epochs);
    REQUIRE(!ra.val_loss.empty());
    if (ra.early_stopped) {
        // The restored model scores the best recorded validation loss.
        const double best = *std::min_element(ra.val_loss.begin(), ra.val_loss.end());
        const Eigen::MatrixXd x_val = x.bottomRows(16);
        const Eigen::MatrixXd y_val = y.bottomRows(16);
        const double loss = (a.predict(x_val) - y_val).array().square().sum() / 16.0;
        CHECK(loss == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("ffnn_finetune: identity at zero epochs, shift adaptation otherwise") {
    Eigen::MatrixXd x(60, 1), y(60, 1), y_shift(60, 1);
    for (int i = 0; i < 60; ++i) {
        x(i, 0) = -1.0 + 2.0 * i / 59.0;
        y(i, 0) = x(i, 0);
        y_shift(i, 0) = x(i, 0) + 1.0;
    }
    FfnnConfig config;
    config.hidden_sizes = {8};
    config.max_epochs = 200;
    config.patience = 10;
    config.learning_rate = 0.02;
    config.seed = 5;
    const auto [base, report0] = ffnn_fit(x, y, config);

    FinetuneConfig ft;
    ft.max_epochs = 0;
    const auto [same, r_same] = ffnn_finetune(base, x, y_shift, ft);
    CHECK(ffnn_flat_parameters(same) == ffnn_flat_parameters(base));
    CHECK(r_same.epochs == 0);

    ft.max_epochs = 150;
    ft.patience = 3;
    ft.learning_rate = 0.02;
    ft.seed = 6;
    const auto [tuned, r_tuned] = ffnn_finetune(base, x, y_shift, ft);
    const double frozen_mse = (base.predict(x) - y_shift).array().square().sum() / 60.0;
    const double tuned_mse = (tuned.predict(x) - y_shift).array().square().sum() / 60.0;
    CHECK(tuned_mse < frozen_mse);
    // Mean prediction moved toward the +1 shift.
    CHECK(tuned.predict(x).mean() > base.predict(x).mean() + 0.5);
}

TEST_CASE("lr_finetune: zero-gradient stability and convex convergence") {
    SUBCASE("already exact fit moves less than 1e-6") {
        Eigen::MatrixXd x(32, 1), y(32, 1);
        for (int i = 0; i < 32; ++i) {
            x(i, 0) = i * 0.1;
            y(i, 0) = 2.0 * x(i, 0) + 1.0;
        }
        const LinearModel m = lr_fit(x, y);
        FinetuneConfig ft;
        ft.max_epochs = 5;
        ft.patience = 0;
        ft.validation_fraction = 0.0;
        ft.learning_rate = 1e-9;
        const LinearModel tuned = lr_finetune(m, x, y, ft);
        CHECK(std::abs(tuned.weights(0, 0) - m.weights(0, 0)) < 1e-6);
        CHECK(std::abs(tuned.intercept(0) - m.intercept(0)) < 1e-6);
    }
    SUBCASE("from zero weights to y = 2x") {
        Eigen::MatrixXd x(64, 1), y(64, 1);
        for (int i = 0; i < 64; ++i) {
            x(i, 0) = -1.0 + 2.0 * i / 63.0;
            y(i, 0) = 2.0 * x(i, 0);
        }
        LinearModel zero;
        zero.weights = Eigen::MatrixXd::Zero(1, 1);
        zero.intercept = Eigen::VectorXd::Zero(1);
        FinetuneConfig ft;
        ft.max_epochs = 500;
        ft.patience = 0;
        ft.validation_fraction = 0.0;
        ft.learning_rate = 0.05;
        ft.batch_size = 16;
        const LinearModel tuned = lr_finetune(zero, x, y, ft);
        CHECK(tuned.weights(0, 0) == doctest::Approx(2.0).epsilon(1e-2));
    }
}

TEST_CASE("rf_fit: full-depth memorization on distinct rows") {
    Eigen::MatrixXd x(16, 2), y(16, 1);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 16; ++i) {
        x(i, 0) = i;  // distinct in every feature
        x(i, 1) = 100.0 - 3.0 * i;
        y(i, 0) = u(rng);
    }
    ForestConfig config;
    config.n_trees = 1;
    config.bootstrap = false;
    config.seed = 4;
    const ForestModel m = rf_fit(x, y, config);
    CHECK((m.predict(x) - y).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("rf_fit: constant targets give constant leaves") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(30, 3);
    Eigen::MatrixXd y = Eigen::MatrixXd::Constant(30, 2, 4.25);
    ForestConfig config;
    config.n_trees = 5;
    config.seed = 8;
    const ForestModel m = rf_fit(x, y, config);
    CHECK((m.predict(x).array() - 4.25).abs().maxCoeff() < 1e-12);
    for (const auto& tree : m.trees) CHECK(tree.nodes.size() == 1);
}

TEST_CASE("rf_fit: XOR pattern learned by a bagged forest") {
    Eigen::MatrixXd x(4, 2), y(4, 1);
    x << 0, 0, 0, 1, 1, 0, 1, 1;
    y << 0, 1, 1, 0;
    ForestConfig config;
    config.n_trees = 100;
    config.max_features = 2;
    config.seed = 12;
    // Replicate the four points so bootstrap samples almost surely contain all.
    Eigen::MatrixXd xr(40, 2), yr(40, 1);
    for (int i = 0; i < 40; ++i) {
        xr.row(i) = x.row(i % 4);
        yr.row(i) = y.row(i % 4);
    }
    const ForestModel m = rf_fit(xr, yr, config);
    CHECK((m.predict(x) - y).array().square().mean() < 0.05);
}

TEST_CASE("rf predictions: mean of trees, bounded by target range") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> g;
    Eigen::MatrixXd x(50, 3), y(50, 2);
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 3; ++j) x(i, j) = g(rng);
        y(i, 0) = g(rng);
        y(i, 1) = 5.0 + g(rng);
    }
    ForestConfig config;
    config.n_trees = 20;
    config.seed = 19;
    const ForestModel m = rf_fit(x, y, config);

    Eigen::MatrixXd probe = Eigen::MatrixXd::Random(10, 3) * 3.0;
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(10, 2);
    for (std::size_t t = 0; t < m.trees.size(); ++t) mean += m.predict_tree(t, probe);
    mean /= static_cast<double>(m.trees.size());
    CHECK((m.predict(probe) - mean).cwiseAbs().maxCoeff() < 1e-12);

    for (int k = 0; k < 2; ++k) {
        CHECK(m.predict(probe).col(k).minCoeff() >= y.col(k).minCoeff() - 1e-12);
        CHECK(m.predict(probe).col(k).maxCoeff() <= y.col(k).maxCoeff() + 1e-12);
    }

    // Tree-order permutation invariance of the mean.
    ForestModel shuffled = m;
    std::reverse(shuffled.trees.begin(), shuffled.trees.end());
    CHECK((shuffled.predict(probe) - m.predict(probe)).cwiseAbs().maxCoeff() < 1e-12);

    // Determinism: refit reproduces identical predictions.
    const ForestModel again = rf_fit(x, y, config);
    CHECK((again.predict(probe) - m.predict(probe)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rf_warmstart_extend: identity, counts, old trees unchanged") {
    Eigen::MatrixXd x = Eigen::MatrixXd::Random(40, 3);
    Eigen::MatrixXd y = Eigen::MatrixXd::Random(40, 1);
    ForestConfig config;
    config.n_trees = 30;
    config.seed = 23;
    const ForestModel m = rf_fit(x, y, config);

    const ForestModel same = rf_warmstart_extend(m, x, y, 0);
    CHECK(same.trees.size() == 30);
    CHECK((same.predict(x) - m.predict(x)).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXd x2 = Eigen::MatrixXd::Random(40, 3);
    Eigen::MatrixXd y2 = Eigen::MatrixXd::Random(40, 1).array() + 2.0;
    const ForestModel extended = rf_warmstart_extend(m, x2, y2, 100);
    CHECK(extended.trees.size() == 130);
    Eigen::MatrixXd probe = Eigen::MatrixXd::Random(8, 3);
    for (std::size_t t = 0; t < 30; ++t)
        CHECK((extended.predict_tree(t, probe) - m.predict_tree(t, probe))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);

    Eigen::MatrixXd wrong = Eigen::MatrixXd::Random(10, 4);
    CHECK_THROWS_AS(rf_warmstart_extend(m, wrong, y2, 5), std::invalid_argument);
}

TEST_CASE("forest predict hand example: two constant trees average") {
    Eigen::MatrixXd xa = Eigen::MatrixXd::Random(5, 2);
    ForestModel m;
    m.n_features = 2;
    m.n_outputs = 1;
    for (const double value : {4.0, 6.0}) {
        CartTree t;
        t.nodes.push_back({});
        t.nodes[0].feature = -1;
        t.nodes[0].leaf_offset = 0;
        t.leaf_values = {value};
        t.importance = {0.0, 0.0};
        m.trees.push_back(std::move(t));
    }
    CHECK(m.predict(xa)(0, 0) == doctest::Approx(5.0));
}

TEST_CASE("learner facade: fit, finetune, serialize round trip") {
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g;
    Eigen::MatrixXd x(40, 3), y(40, 2);
    for (int i = 0; i < 40; ++i) {
        for (int j = 0; j < 3; ++j) x(i, j) = g(rng);
        y(i, 0) = x(i, 0) - x(i, 2);
        y(i, 1) = 0.5 * x(i, 1);
    }
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "ht_learner_test";
    fs::create_directories(dir);

    for (const LearnerKind kind : {LearnerKind::Linear, LearnerKind::Ffnn, LearnerKind::Forest}) {
        LearnerConfig config;
        config.kind = kind;
        config.seed = 41;
        config.ffnn.hidden_sizes = {6};
        config.ffnn.max_epochs = 30;
        config.forest.n_trees = 10;
        const Learner learner = Learner::fit(config, x, y);
        const Eigen::MatrixXd pred = learner.predict(x);
        CHECK(pred.rows() == 40);
        CHECK(pred.allFinite());

        const std::string prefix = (dir / ("model_" + to_string(kind))).string();
        learner.save(prefix);
        const Learner loaded = Learner::load(prefix);
        CHECK((loaded.predict(x) - pred).cwiseAbs().maxCoeff() < 1e-12);
    }
}
