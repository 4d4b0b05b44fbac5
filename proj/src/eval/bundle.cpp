#include "hybridtherm/eval/bundle.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace hybridtherm {

using nlohmann::json;

void save_bundle(const HybridModel& model, const std::string& directory) {
    std::filesystem::create_directories(directory);
    save_network(model.physics.network, directory + "/physics.json");
    model.learner.save(directory + "/learner");

    json manifest;
    manifest["format_version"] = 1;
    manifest["strategy"] = to_string(model.strategy);
    manifest["scenario"] = to_string(model.scenario);
    manifest["learner"] = to_string(model.learner.kind());
    manifest["tier"] = to_string(model.physics.kind);
    manifest["rooms"] = model.physics.rooms;
    manifest["feature_columns"] = model.feature_columns;
    manifest["target_columns"] = model.target_columns;
    manifest["standardizer"] = json{{"columns", model.standardizer.columns()},
                                    {"means", model.standardizer.means()},
                                    {"stddevs", model.standardizer.stddevs()}};
    std::ofstream out(directory + "/manifest.json");
    if (!out) throw std::runtime_error("cannot write bundle manifest in " + directory);
    out << manifest.dump(2) << "\n";
}

namespace {

// Standardizer has no mutating setters; rebuild it through a scratch frame.
Standardizer standardizer_from(const std::vector<std::string>& columns,
                               const std::vector<double>& means,
                               const std::vector<double>& stddevs) {
    std::vector<std::int64_t> ts{0, 60};
    TimeSeriesFrame scratch(ts, 1);
    for (std::size_t k = 0; k < columns.size(); ++k) {
        const double lo = means[k] - stddevs[k];
        const double hi = means[k] + stddevs[k];
        scratch.add_column({columns[k], FeatureGroup::Weather, "", {lo, hi}});
    }
    return Standardizer::fit(scratch, columns);
}

}  // namespace

HybridModel load_bundle(const std::string& directory) {
    std::ifstream in(directory + "/manifest.json");
    if (!in) throw std::runtime_error("cannot open bundle manifest in " + directory);
    json manifest;
    in >> manifest;

    HybridModel model;
    model.strategy = strategy_from_string(manifest.at("strategy").get<std::string>());
    model.scenario = scenario_from_string(manifest.at("scenario").get<std::string>()).id;
    model.feature_columns = manifest.at("feature_columns").get<std::vector<std::string>>();
    model.target_columns = manifest.at("target_columns").get<std::vector<std::string>>();

    const std::string tier = manifest.at("tier").get<std::string>();
    model.physics.kind = tier == "Archetype" ? PhysicsTierKind::Archetype
                         : tier == "UncalibratedDetailed" ? PhysicsTierKind::UncalibratedDetailed
                                                          : PhysicsTierKind::CalibratedDetailed;
    model.physics.rooms = manifest.at("rooms").get<std::vector<std::string>>();
    model.physics.network = load_network(directory + "/physics.json");
    model.learner = Learner::load(directory + "/learner");

    const auto& s = manifest.at("standardizer");
    model.standardizer = standardizer_from(s.at("columns").get<std::vector<std::string>>(),
                                           s.at("means").get<std::vector<double>>(),
                                           s.at("stddevs").get<std::vector<double>>());
    return model;
}

}  // namespace hybridtherm
