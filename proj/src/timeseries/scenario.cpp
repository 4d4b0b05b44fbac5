#include "hybridtherm/timeseries/scenario.hpp"

#include <stdexcept>

namespace hybridtherm {

ScenarioSpec scenario(ScenarioId id) {
    switch (id) {
        case ScenarioId::W:
            return {id, {FeatureGroup::Datetime, FeatureGroup::Weather},
                    PhysicsTierKind::Archetype};
        case ScenarioId::WB:
            return {id, {FeatureGroup::Datetime, FeatureGroup::Weather, FeatureGroup::Building},
                    PhysicsTierKind::UncalibratedDetailed};
        case ScenarioId::WBR:
            return {id,
                    {FeatureGroup::Datetime, FeatureGroup::Weather, FeatureGroup::Building,
                     FeatureGroup::Room},
                    PhysicsTierKind::CalibratedDetailed};
    }
    throw std::invalid_argument("unknown scenario id");
}

ScenarioSpec scenario_from_string(const std::string& s) {
    if (s == "w" || s == "W") return scenario(ScenarioId::W);
    if (s == "wb" || s == "WB") return scenario(ScenarioId::WB);
    if (s == "wbr" || s == "WBR") return scenario(ScenarioId::WBR);
    throw std::invalid_argument("unknown scenario: '" + s + "' (expected w|wb|wbr)");
}

std::string to_string(ScenarioId id) {
    switch (id) {
        case ScenarioId::W: return "W";
        case ScenarioId::WB: return "WB";
        case ScenarioId::WBR: return "WBR";
    }
    return "?";
}

std::string to_string(PhysicsTierKind tier) {
    switch (tier) {
        case PhysicsTierKind::Archetype: return "Archetype";
        case PhysicsTierKind::UncalibratedDetailed: return "UncalibratedDetailed";
        case PhysicsTierKind::CalibratedDetailed: return "CalibratedDetailed";
    }
    return "?";
}

std::vector<std::string> scenario_feature_columns(const ScenarioSpec& scenario,
                                                  const TimeSeriesFrame& frame) {
    std::vector<std::string> out;
    for (const auto& c : frame.columns()) {
        if (c.group == FeatureGroup::Simulated || c.group == FeatureGroup::Target) continue;
        if (scenario.allowed_groups.count(c.group)) out.push_back(c.name);
    }
    return out;
}

}  // namespace hybridtherm
