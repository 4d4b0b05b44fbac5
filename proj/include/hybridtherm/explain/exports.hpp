#pragma once

#include <string>

#include "hybridtherm/explain/owen.hpp"

namespace hybridtherm {

enum class PlotKind { Beeswarm, Dependence, Dendrogram, GroupBar };

PlotKind plot_kind_from_string(const std::string& s);

struct ExportOptions {
    std::size_t target = 0;        // output/room index for beeswarm and dependence
    std::string feature;           // dependence: main feature
    std::string coloring_feature;  // dependence: coloring feature
    const Dendrogram* dendrogram = nullptr;  // required for PlotKind::Dendrogram
};

/// Plain-text plot data.
///   beeswarm   CSV sample,feature,feature_value,phi — the 10 features with the
///              highest mean |phi| for the selected target;
///   dependence CSV feature_value,phi,coloring_value;
///   groupbar   CSV target,cluster,mean_abs_phi — per-feature mean |phi| summed
///              within each partition cluster, per target;
///   dendrogram JSON {leaves, merges:[[a,b,height,id]...]}.
std::string export_plotdata(const AttributionResult& result, PlotKind kind,
                            const ExportOptions& options = {});

}  // namespace hybridtherm
