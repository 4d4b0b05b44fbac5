#include "hybridtherm/physics/network.hpp"

#include <bit>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hybridtherm {

using nlohmann::json;

std::size_t RcNetwork::zone_index(const std::string& name) const {
    for (std::size_t i = 0; i < zones.size(); ++i)
        if (zones[i].name == name) return i;
    throw std::out_of_range("unknown zone: '" + name + "'");
}

void RcNetwork::validate() const {
    if (zones.empty()) throw std::invalid_argument("network has no zones");
    for (const auto& z : zones) {
        if (z.capacitance_j_per_k <= 0.0)
            throw std::invalid_argument("zone '" + z.name + "': capacitance must be > 0");
        if (z.envelope_resistance_k_per_w <= 0.0)
            throw std::invalid_argument("zone '" + z.name + "': envelope resistance must be > 0");
        if (z.solar_aperture_m2 < 0.0 || z.occupant_gain_w < 0.0 ||
            z.window_conductance_w_per_k < 0.0)
            throw std::invalid_argument("zone '" + z.name + "': gains must be >= 0");
    }
    for (const auto& c : couplings) {
        if (c.a >= zones.size() || c.b >= zones.size() || c.a == c.b)
            throw std::invalid_argument("bad coupling indices");
        if (c.resistance_k_per_w <= 0.0)
            throw std::invalid_argument("inter-zone resistance must be > 0");
    }
}

namespace {

json flow_to_json(const FlowBinding& f) {
    return json{{"flow_column", f.flow_column},
                {"mode_column", f.mode_column},
                {"heating_w_per_flow", f.heating_w_per_flow},
                {"cooling_w_per_flow", f.cooling_w_per_flow},
                {"share", f.share}};
}

FlowBinding flow_from_json(const json& j) {
    FlowBinding f;
    f.flow_column = j.value("flow_column", "");
    f.mode_column = j.value("mode_column", "");
    f.heating_w_per_flow = j.value("heating_w_per_flow", 0.0);
    f.cooling_w_per_flow = j.value("cooling_w_per_flow", 0.0);
    f.share = j.value("share", 1.0);
    return f;
}

}  // namespace

std::string to_json(const RcNetwork& network) {
    json j;
    j["outdoor_temp_column"] = network.outdoor_temp_column;
    j["solar_columns"] = network.solar_columns;
    j["blinds_transmission"] = network.blinds_transmission;
    j["zones"] = json::array();
    for (const auto& z : network.zones) {
        json zj{{"name", z.name},
                {"capacitance_j_per_k", z.capacitance_j_per_k},
                {"envelope_resistance_k_per_w", z.envelope_resistance_k_per_w},
                {"solar_aperture_m2", z.solar_aperture_m2},
                {"occupant_gain_w", z.occupant_gain_w},
                {"window_conductance_w_per_k", z.window_conductance_w_per_k},
                {"initial_temp_c", z.initial_temp_c}};
        zj["drivers"] = json{{"occupancy", z.drivers.occupancy},
                             {"window", z.drivers.window},
                             {"blinds", z.drivers.blinds}};
        zj["drivers"]["flows"] = json::array();
        for (const auto& f : z.drivers.flows) zj["drivers"]["flows"].push_back(flow_to_json(f));
        if (z.thermostat.enabled) {
            zj["thermostat"] = json{{"heat_setpoint_c", z.thermostat.heat_setpoint_c},
                                    {"cool_setpoint_c", z.thermostat.cool_setpoint_c},
                                    {"gain_w_per_k", z.thermostat.gain_w_per_k},
                                    {"max_heat_w", z.thermostat.max_heat_w},
                                    {"max_cool_w", z.thermostat.max_cool_w}};
        }
        j["zones"].push_back(std::move(zj));
    }
    j["couplings"] = json::array();
    for (const auto& c : network.couplings)
        j["couplings"].push_back(json{{"a", network.zones[c.a].name},
                                      {"b", network.zones[c.b].name},
                                      {"resistance_k_per_w", c.resistance_k_per_w}});
    return j.dump(2);
}

RcNetwork network_from_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    RcNetwork n;
    n.outdoor_temp_column = j.value("outdoor_temp_column", "drybulb");
    if (j.contains("solar_columns"))
        n.solar_columns = j["solar_columns"].get<std::vector<std::string>>();
    n.blinds_transmission = j.value("blinds_transmission", 0.2);
    for (const auto& zj : j.at("zones")) {
        Zone z;
        z.name = zj.at("name").get<std::string>();
        z.capacitance_j_per_k = zj.at("capacitance_j_per_k").get<double>();
        z.envelope_resistance_k_per_w = zj.at("envelope_resistance_k_per_w").get<double>();
        z.solar_aperture_m2 = zj.value("solar_aperture_m2", 0.0);
        z.occupant_gain_w = zj.value("occupant_gain_w", 0.0);
        z.window_conductance_w_per_k = zj.value("window_conductance_w_per_k", 0.0);
        z.initial_temp_c = zj.value("initial_temp_c", 20.0);
        if (zj.contains("drivers")) {
            const auto& dj = zj["drivers"];
            z.drivers.occupancy = dj.value("occupancy", "");
            z.drivers.window = dj.value("window", "");
            z.drivers.blinds = dj.value("blinds", "");
            if (dj.contains("flows"))
                for (const auto& fj : dj["flows"]) z.drivers.flows.push_back(flow_from_json(fj));
        }
        if (zj.contains("thermostat")) {
            const auto& tj = zj["thermostat"];
            z.thermostat.enabled = true;
            z.thermostat.heat_setpoint_c = tj.value("heat_setpoint_c", 21.0);
            z.thermostat.cool_setpoint_c = tj.value("cool_setpoint_c", 26.0);
            z.thermostat.gain_w_per_k = tj.value("gain_w_per_k", 400.0);
            z.thermostat.max_heat_w = tj.value("max_heat_w", 3000.0);
            z.thermostat.max_cool_w = tj.value("max_cool_w", 2000.0);
        }
        n.zones.push_back(std::move(z));
    }
    if (j.contains("couplings")) {
        for (const auto& cj : j["couplings"]) {
            InterZoneResistance c;
            c.a = n.zone_index(cj.at("a").get<std::string>());
            c.b = n.zone_index(cj.at("b").get<std::string>());
            c.resistance_k_per_w = cj.at("resistance_k_per_w").get<double>();
            n.couplings.push_back(c);
        }
    }
    n.validate();
    return n;
}

std::uint64_t RcNetwork::content_hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const std::string repr = to_json(*this);
    for (const char c : repr) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

void save_network(const RcNetwork& network, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write network file: " + path);
    out << to_json(network) << "\n";
}

RcNetwork load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open network file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return network_from_json(ss.str());
}

}  // namespace hybridtherm
