#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hybridtherm {

/// Heat injection driven by a mass-flow column. With a mode column, a value
/// >= 0.5 selects the cooling coefficient (heat removal); without one, both
/// coefficients apply with their signs, so a dedicated heating column simply
/// leaves cooling_w_per_flow at zero.
struct FlowBinding {
    std::string flow_column;
    std::string mode_column;  // optional
    double heating_w_per_flow = 0.0;
    double cooling_w_per_flow = 0.0;
    double share = 1.0;  // fraction of the column's flow attributed to this zone
};

/// Ideal thermostatic loads for zones without measured flow inputs
/// (proportional controller against fixed setpoints, clamped to capacity).
struct IdealThermostat {
    bool enabled = false;
    double heat_setpoint_c = 21.0;
    double cool_setpoint_c = 26.0;
    double gain_w_per_k = 400.0;
    double max_heat_w = 3000.0;
    double max_cool_w = 2000.0;
};

/// Driver column names consumed by a zone; an empty name means the input is
/// treated as zero.
struct ZoneDrivers {
    std::vector<FlowBinding> flows;
    std::string occupancy;  // persons (0/1)
    std::string window;     // 1 = open
    std::string blinds;     // 1 = down
};

/// One thermal node: a room air node or any auxiliary node (e.g. a wall mass).
struct Zone {
    std::string name;
    double capacitance_j_per_k = 0.0;
    double envelope_resistance_k_per_w = 0.0;  // to outdoor air
    double solar_aperture_m2 = 0.0;            // effective, before blinds attenuation
    double occupant_gain_w = 0.0;              // per person
    double window_conductance_w_per_k = 0.0;   // extra envelope conductance when open
    ZoneDrivers drivers;
    IdealThermostat thermostat;
    double initial_temp_c = 20.0;
};

struct InterZoneResistance {
    std::size_t a = 0;
    std::size_t b = 0;
    double resistance_k_per_w = 0.0;
};

/// Multi-zone resistance-capacitance thermal network.
struct RcNetwork {
    std::vector<Zone> zones;
    std::vector<InterZoneResistance> couplings;  // sparse, stored once per pair
    std::string outdoor_temp_column = "drybulb";
    std::vector<std::string> solar_columns = {"solar_direct", "solar_diffuse"};
    double blinds_transmission = 0.2;  // solar factor with blinds down

    std::size_t zone_index(const std::string& name) const;

    /// Throws std::invalid_argument if capacitances/resistances are not
    /// positive or a coupling index is out of range.
    void validate() const;

    /// Structural + parametric hash; keys the simulation cache.
    std::uint64_t content_hash() const;
};

/// Human-readable JSON round trip.
std::string to_json(const RcNetwork& network);
RcNetwork network_from_json(const std::string& json_text);

void save_network(const RcNetwork& network, const std::string& path);
RcNetwork load_network(const std::string& path);

}  // namespace hybridtherm
