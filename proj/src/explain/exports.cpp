#include "hybridtherm/explain/exports.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "hybridtherm/explain/native.hpp"

namespace hybridtherm {

PlotKind plot_kind_from_string(const std::string& s) {
    if (s == "beeswarm") return PlotKind::Beeswarm;
    if (s == "dependence") return PlotKind::Dependence;
    if (s == "dendrogram") return PlotKind::Dendrogram;
    if (s == "groupbar") return PlotKind::GroupBar;
    throw std::invalid_argument("unknown plot kind: '" + s + "'");
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

Eigen::VectorXd mean_abs_phi(const AttributionResult& r, std::size_t target) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(r.feature_names.size()));
    for (const auto& phi : r.phi) out += phi.col(static_cast<Eigen::Index>(target)).cwiseAbs();
    return out / static_cast<double>(r.phi.size());
}

std::string target_label(const AttributionResult& r, std::size_t k) {
    return k < r.target_names.size() ? r.target_names[k] : "y" + std::to_string(k);
}

std::size_t feature_index(const AttributionResult& r, const std::string& name) {
    for (std::size_t j = 0; j < r.feature_names.size(); ++j)
        if (r.feature_names[j] == name) return j;
    throw std::invalid_argument("export_plotdata: unknown feature '" + name + "'");
}

}  // namespace

std::string export_plotdata(const AttributionResult& result, PlotKind kind,
                            const ExportOptions& options) {
    if (result.phi.empty()) throw std::invalid_argument("export_plotdata: empty result set");
    const std::size_t n_targets = static_cast<std::size_t>(result.phi.front().cols());

    switch (kind) {
        case PlotKind::Beeswarm: {
            const Eigen::VectorXd importance = mean_abs_phi(result, options.target);
            const auto top = top_k_indices(importance, 10);
            std::string out = "sample,feature,feature_value,phi\n";
            for (std::size_t i = 0; i < result.phi.size(); ++i) {
                for (const int j : top) {
                    out += std::to_string(i) + ',' + result.feature_names[j] + ',' +
                           fmt(result.samples(static_cast<Eigen::Index>(i), j)) + ',' +
                           fmt(result.phi[i](j, static_cast<Eigen::Index>(options.target))) +
                           '\n';
                }
            }
            return out;
        }
        case PlotKind::Dependence: {
            const std::size_t j = feature_index(result, options.feature);
            const std::size_t c = options.coloring_feature.empty()
                                      ? j
                                      : feature_index(result, options.coloring_feature);
            std::string out = "feature_value,phi,coloring_value\n";
            for (std::size_t i = 0; i < result.phi.size(); ++i) {
                const auto row = static_cast<Eigen::Index>(i);
                out += fmt(result.samples(row, static_cast<Eigen::Index>(j))) + ',' +
                       fmt(result.phi[i](static_cast<Eigen::Index>(j),
                                         static_cast<Eigen::Index>(options.target))) +
                       ',' + fmt(result.samples(row, static_cast<Eigen::Index>(c))) + '\n';
            }
            return out;
        }
        case PlotKind::GroupBar: {
            std::string out = "target,cluster,mean_abs_phi\n";
            for (std::size_t k = 0; k < n_targets; ++k) {
                const Eigen::VectorXd importance = mean_abs_phi(result, k);
                for (std::size_t g = 0; g < result.partition.clusters.size(); ++g) {
                    double sum = 0.0;
                    for (const auto f : result.partition.clusters[g])
                        sum += importance[static_cast<Eigen::Index>(f)];
                    out += target_label(result, k) + ",cluster" + std::to_string(g + 1) + ',' +
                           fmt(sum) + '\n';
                }
            }
            return out;
        }
        case PlotKind::Dendrogram: {
            if (!options.dendrogram)
                throw std::invalid_argument("export_plotdata: dendrogram export needs the tree");
            nlohmann::json j;
            j["leaves"] = options.dendrogram->leaf_names;
            j["merges"] = nlohmann::json::array();
            for (const auto& m : options.dendrogram->merges)
                j["merges"].push_back({m.a, m.b, m.height, m.id});
            j["cut_level"] = result.partition.cut_level;
            return j.dump(2);
        }
    }
    throw std::invalid_argument("export_plotdata: unknown kind");
}

}  // namespace hybridtherm
