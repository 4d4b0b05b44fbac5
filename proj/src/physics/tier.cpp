#include "hybridtherm/physics/tier.hpp"

#include <stdexcept>

#include "hybridtherm/core/rng.hpp"
#include "hybridtherm/physics/simulate.hpp"

namespace hybridtherm {

namespace {

std::vector<std::string> rooms_from_schema(const FrameSchema& schema) {
    std::vector<std::string> rooms;
    for (const auto& s : schema)
        if (s.group == FeatureGroup::Target && s.name.rfind("temp_", 0) == 0)
            rooms.push_back(s.name.substr(5));
    if (rooms.empty())
        throw std::invalid_argument("make_tier: schema has no 'temp_<room>' target columns");
    return rooms;
}

bool schema_has(const FrameSchema& schema, const std::string& name) {
    for (const auto& s : schema)
        if (s.name == name) return true;
    return false;
}

bool schema_has_group(const FrameSchema& schema, FeatureGroup g) {
    for (const auto& s : schema)
        if (s.group == g) return true;
    return false;
}

}  // namespace

RoomDefaults documented_room_defaults(std::size_t room_index, std::size_t n_rooms) {
    // Five-room layout mirrors a small residential unit: two bedrooms, one
    // living room, two bathrooms. Other sizes cycle through the roles.
    static const char* kFiveRoomRoles[5] = {"bedroom", "living", "bedroom", "bathroom",
                                            "bathroom"};
    std::string role;
    if (n_rooms == 5) role = kFiveRoomRoles[room_index];
    else role = room_index == 0 ? "living" : (room_index % 2 == 1 ? "bedroom" : "bathroom");

    // Heating sized for the design load at -20 degC outdoors.
    if (role == "living")
        return {role, 9.0e6, 0.009, 3.2, 120.0, 80.0, 30.0, 20.0, 150.0};
    if (role == "bedroom")
        return {role, 6.0e6, 0.012, 1.8, 120.0, 60.0, 30.0, 20.0, 100.0};
    return {role, 3.0e6, 0.020, 0.0, 120.0, 40.0, 30.0, 20.0, 60.0};
}

double documented_coupling_resistance() { return 0.005; }

PhysicsTier make_tier(PhysicsTierKind kind, const FrameSchema& world_schema,
                      std::uint64_t seed) {
    const auto rooms = rooms_from_schema(world_schema);
    const std::size_t n = rooms.size();
    PhysicsTier tier;
    tier.kind = kind;
    tier.rooms = rooms;

    if (kind == PhysicsTierKind::Archetype) {
        // Generic lumped model from archetype documentation only: one zone,
        // documented heating as an ideal thermostat, no sensor bindings.
        Zone z;
        z.name = "building";
        z.capacitance_j_per_k = 6.0e6 * static_cast<double>(n);
        z.envelope_resistance_k_per_w = 0.012 / static_cast<double>(n);
        z.solar_aperture_m2 = 1.5 * static_cast<double>(n);
        z.thermostat.enabled = true;
        z.thermostat.heat_setpoint_c = 21.0;
        z.thermostat.cool_setpoint_c = 26.0;
        z.thermostat.gain_w_per_k = 300.0 * static_cast<double>(n);
        z.thermostat.max_heat_w = 1500.0 * static_cast<double>(n);
        z.thermostat.max_cool_w = 1000.0 * static_cast<double>(n);
        z.initial_temp_c = 21.0;
        tier.network.zones.push_back(std::move(z));
        tier.network.validate();
        return tier;
    }

    // Detailed topology from documentation, perturbed to model the gap between
    // drawings and the as-built building.
    const CounterRng rng(seed);
    const bool room_sensors = schema_has_group(world_schema, FeatureGroup::Room);
    const bool building_sensors = schema_has_group(world_schema, FeatureGroup::Building);
    for (std::size_t i = 0; i < n; ++i) {
        const RoomDefaults d = documented_room_defaults(i, n);
        auto perturb = [&](const std::string& param, double value) {
            const auto s = rng.stream("tier.perturb." + rooms[i] + "." + param);
            return value * s.uniform(0, 0.7, 1.3);
        };
        Zone z;
        z.name = rooms[i];
        z.capacitance_j_per_k = perturb("capacitance", d.capacitance_j_per_k);
        z.envelope_resistance_k_per_w = perturb("envelope_r", d.envelope_resistance_k_per_w);
        z.solar_aperture_m2 =
            d.solar_aperture_m2 > 0.0 ? perturb("aperture", d.solar_aperture_m2) : 0.0;
        z.occupant_gain_w = perturb("occupant_gain", d.occupant_gain_w);
        z.window_conductance_w_per_k = perturb("window_g", d.window_conductance_w_per_k);
        z.initial_temp_c = 21.0;
        if (room_sensors && schema_has(world_schema, "flow_" + rooms[i])) {
            FlowBinding f;
            f.flow_column = "flow_" + rooms[i];
            f.mode_column = schema_has(world_schema, "ac_mode") ? "ac_mode" : "";
            f.heating_w_per_flow = perturb("heat_coeff", d.heating_w_per_flow);
            f.cooling_w_per_flow = perturb("cool_coeff", d.cooling_w_per_flow);
            z.drivers.flows.push_back(std::move(f));
            z.drivers.occupancy = "occupancy_" + rooms[i];
            z.drivers.window = "window_" + rooms[i];
            z.drivers.blinds = "blinds_" + rooms[i];
        } else if (building_sensors) {
            // Building totals split evenly across rooms.
            const double share = 1.0 / static_cast<double>(n);
            z.drivers.flows.push_back(
                {"heat_flow_total", "", perturb("heat_coeff", d.heating_w_per_flow), 0.0, share});
            z.drivers.flows.push_back(
                {"cool_flow_total", "", 0.0, perturb("cool_coeff", d.cooling_w_per_flow), share});
        }
        tier.network.zones.push_back(std::move(z));
    }
    for (std::size_t i = 0; i + 1 < n; ++i)
        tier.network.couplings.push_back({i, i + 1, documented_coupling_resistance()});
    tier.network.validate();
    tier.needs_calibration = kind == PhysicsTierKind::CalibratedDetailed;
    return tier;
}

TimeSeriesFrame simulate_tier(const PhysicsTier& tier, const TimeSeriesFrame& drivers) {
    const TimeSeriesFrame sim = simulate(tier.network, drivers, drivers.step_minutes());
    if (tier.kind == PhysicsTierKind::Archetype) {
        TimeSeriesFrame out(drivers.timestamps(), drivers.step_minutes());
        const auto& lump = sim.column(0).values;
        for (const auto& room : tier.rooms)
            out.add_column({"sim_" + room, FeatureGroup::Simulated, "degC", lump});
        return out;
    }
    TimeSeriesFrame out(drivers.timestamps(), drivers.step_minutes());
    for (const auto& room : tier.rooms) out.add_column(sim.column("sim_" + room));
    return out;
}

}  // namespace hybridtherm
