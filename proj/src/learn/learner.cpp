#include "hybridtherm/learn/learner.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hybridtherm {

using nlohmann::json;

std::string to_string(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::Linear: return "lr";
        case LearnerKind::Ffnn: return "ffnn";
        case LearnerKind::Forest: return "rf";
    }
    return "?";
}

LearnerKind learner_kind_from_string(const std::string& s) {
    if (s == "lr") return LearnerKind::Linear;
    if (s == "ffnn") return LearnerKind::Ffnn;
    if (s == "rf") return LearnerKind::Forest;
    throw std::invalid_argument("unknown learner: '" + s + "' (expected lr|ffnn|rf)");
}

Learner Learner::fit(const LearnerConfig& config, const Eigen::MatrixXd& X,
                     const Eigen::MatrixXd& Y) {
    Learner out;
    out.config_ = config;
    switch (config.kind) {
        case LearnerKind::Linear:
            out.model_ = lr_fit(X, Y);
            break;
        case LearnerKind::Ffnn: {
            FfnnConfig c = config.ffnn;
            if (config.seed != 0) c.seed = config.seed;
            auto [model, report] = ffnn_fit(X, Y, c);
            out.model_ = std::move(model);
            out.report_ = std::move(report);
            break;
        }
        case LearnerKind::Forest: {
            ForestConfig c = config.forest;
            if (config.seed != 0) c.seed = config.seed;
            out.model_ = rf_fit(X, Y, c);
            break;
        }
    }
    return out;
}

Learner Learner::finetuned(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Y) const {
    Learner out;
    out.config_ = config_;
    FinetuneConfig ft = config_.finetune;
    if (config_.seed != 0) ft.seed = config_.seed + 1;
    switch (config_.kind) {
        case LearnerKind::Linear:
            out.model_ = lr_finetune(linear(), X, Y, ft);
            break;
        case LearnerKind::Ffnn: {
            auto [model, report] = ffnn_finetune(ffnn(), X, Y, ft);
            out.model_ = std::move(model);
            out.report_ = std::move(report);
            break;
        }
        case LearnerKind::Forest:
            out.model_ = rf_warmstart_extend(forest(), X, Y, config_.rf_extension_trees);
            break;
    }
    return out;
}

Eigen::MatrixXd Learner::predict(const Eigen::MatrixXd& X) const {
    return std::visit([&X](const auto& m) { return m.predict(X); }, model_);
}

const LinearModel& Learner::linear() const {
    if (!std::holds_alternative<LinearModel>(model_))
        throw std::logic_error("Learner: not a linear model");
    return std::get<LinearModel>(model_);
}

const FfnnModel& Learner::ffnn() const {
    if (!std::holds_alternative<FfnnModel>(model_))
        throw std::logic_error("Learner: not an FFNN model");
    return std::get<FfnnModel>(model_);
}

const ForestModel& Learner::forest() const {
    if (!std::holds_alternative<ForestModel>(model_))
        throw std::logic_error("Learner: not a forest model");
    return std::get<ForestModel>(model_);
}

Learner Learner::wrap(LinearModel model, LearnerConfig config) {
    Learner out;
    config.kind = LearnerKind::Linear;
    out.config_ = config;
    out.model_ = std::move(model);
    return out;
}

Learner Learner::wrap(FfnnModel model, LearnerConfig config) {
    Learner out;
    config.kind = LearnerKind::Ffnn;
    out.config_ = config;
    out.model_ = std::move(model);
    return out;
}

Learner Learner::wrap(ForestModel model, LearnerConfig config) {
    Learner out;
    config.kind = LearnerKind::Forest;
    out.config_ = config;
    out.model_ = std::move(model);
    return out;
}

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    const std::size_t rows = j.size();
    const std::size_t cols = rows ? j[0].size() : 0;
    Eigen::MatrixXd m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    return m;
}

}  // namespace

void Learner::save(const std::string& path_prefix) const {
    json j;
    j["format_version"] = 1;
    j["kind"] = to_string(config_.kind);
    if (config_.kind == LearnerKind::Linear) {
        const auto& m = linear();
        j["weights"] = matrix_to_json(m.weights);
        json ic = json::array();
        for (Eigen::Index i = 0; i < m.intercept.size(); ++i) ic.push_back(m.intercept[i]);
        j["intercept"] = std::move(ic);
    } else if (config_.kind == LearnerKind::Forest) {
        const auto& m = forest();
        j["n_features"] = m.n_features;
        j["n_outputs"] = m.n_outputs;
        json trees = json::array();
        for (const auto& t : m.trees) {
            json nodes = json::array();
            for (const auto& n : t.nodes)
                nodes.push_back(json::array({n.feature, n.threshold, n.left, n.right,
                                             n.leaf_offset}));
            trees.push_back(json{{"nodes", std::move(nodes)},
                                 {"leaf_values", t.leaf_values},
                                 {"importance", t.importance}});
        }
        j["trees"] = std::move(trees);
    } else {
        const auto& m = ffnn();
        json layers = json::array();
        std::vector<double> blob;
        for (const auto& layer : m.layers) {
            layers.push_back(json{{"out", layer.weights.rows()},
                                  {"in", layer.weights.cols()},
                                  {"activation",
                                   layer.activation == Activation::Sigmoid ? "sigmoid" : "identity"}});
            blob.insert(blob.end(), layer.weights.data(),
                        layer.weights.data() + layer.weights.size());
            blob.insert(blob.end(), layer.bias.data(), layer.bias.data() + layer.bias.size());
        }
        j["layers"] = std::move(layers);
        j["blob"] = path_prefix.substr(path_prefix.find_last_of('/') + 1) + ".bin";
        j["blob_doubles"] = blob.size();
        std::ofstream bin(path_prefix + ".bin", std::ios::binary);
        if (!bin) throw std::runtime_error("cannot write " + path_prefix + ".bin");
        bin.write(reinterpret_cast<const char*>(blob.data()),
                  static_cast<std::streamsize>(blob.size() * sizeof(double)));
    }
    std::ofstream out(path_prefix + ".json");
    if (!out) throw std::runtime_error("cannot write " + path_prefix + ".json");
    out << j.dump(config_.kind == LearnerKind::Forest ? -1 : 2) << "\n";
}

Learner Learner::load(const std::string& path_prefix) {
    std::ifstream in(path_prefix + ".json");
    if (!in) throw std::runtime_error("cannot open " + path_prefix + ".json");
    json j;
    in >> j;
    const LearnerKind kind = learner_kind_from_string(j.at("kind").get<std::string>());
    LearnerConfig config;
    config.kind = kind;
    if (kind == LearnerKind::Linear) {
        LinearModel m;
        m.weights = matrix_from_json(j.at("weights"));
        const auto& ic = j.at("intercept");
        m.intercept.resize(ic.size());
        for (std::size_t i = 0; i < ic.size(); ++i) m.intercept[i] = ic[i].get<double>();
        return wrap(std::move(m), config);
    }
    if (kind == LearnerKind::Forest) {
        ForestModel m;
        m.n_features = j.at("n_features").get<int>();
        m.n_outputs = j.at("n_outputs").get<int>();
        for (const auto& tj : j.at("trees")) {
            CartTree t;
            for (const auto& nj : tj.at("nodes")) {
                CartTree::Node n;
                n.feature = nj[0].get<int>();
                n.threshold = nj[1].get<double>();
                n.left = nj[2].get<int>();
                n.right = nj[3].get<int>();
                n.leaf_offset = nj[4].get<int>();
                t.nodes.push_back(n);
            }
            t.leaf_values = tj.at("leaf_values").get<std::vector<double>>();
            t.importance = tj.at("importance").get<std::vector<double>>();
            m.trees.push_back(std::move(t));
        }
        return wrap(std::move(m), config);
    }
    FfnnModel m;
    std::vector<double> blob(j.at("blob_doubles").get<std::size_t>());
    const std::string dir = path_prefix.find('/') == std::string::npos
                                ? ""
                                : path_prefix.substr(0, path_prefix.find_last_of('/') + 1);
    std::ifstream bin(dir + j.at("blob").get<std::string>(), std::ios::binary);
    if (!bin) throw std::runtime_error("cannot open weight blob for " + path_prefix);
    bin.read(reinterpret_cast<char*>(blob.data()),
             static_cast<std::streamsize>(blob.size() * sizeof(double)));
    std::size_t offset = 0;
    for (const auto& lj : j.at("layers")) {
        FfnnLayer layer;
        const auto rows = lj.at("out").get<Eigen::Index>();
        const auto cols = lj.at("in").get<Eigen::Index>();
        layer.weights.resize(rows, cols);
        for (Eigen::Index i = 0; i < layer.weights.size(); ++i)
            layer.weights.data()[i] = blob.at(offset++);
        layer.bias.resize(rows);
        for (Eigen::Index i = 0; i < rows; ++i) layer.bias[i] = blob.at(offset++);
        layer.activation = lj.at("activation").get<std::string>() == "sigmoid"
                               ? Activation::Sigmoid
                               : Activation::Identity;
        m.layers.push_back(std::move(layer));
    }
    return wrap(std::move(m), config);
}

}  // namespace hybridtherm
