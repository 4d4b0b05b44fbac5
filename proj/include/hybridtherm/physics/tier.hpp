#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hybridtherm/physics/network.hpp"
#include "hybridtherm/timeseries/csv.hpp"
#include "hybridtherm/timeseries/scenario.hpp"

namespace hybridtherm {

/// A physics sub-model at one fidelity level, bound to the room list it predicts.
struct PhysicsTier {
    PhysicsTierKind kind = PhysicsTierKind::Archetype;
    RcNetwork network;
    std::vector<std::string> rooms;  // target order
    bool needs_calibration = false;  // true for CalibratedDetailed until calibrate ran
};

/// Builds the physics sub-model for a fidelity level from the dataset schema.
/// Room names are read from the Target columns ("temp_<room>").
///
///  - Archetype: one lumped zone with generic defaults and an ideal thermostat;
///    its simulated column is duplicated for every room.
///  - UncalibratedDetailed: per-room zones with documented topology, parameters
///    multiplied by seeded perturbations uniform in [0.7, 1.3]; drivers bound to
///    whatever the schema offers (per-room flows when Room columns exist,
///    building totals otherwise).
///  - CalibratedDetailed: the same perturbed network, flagged for calibration
///    against training targets (run physics calibrate to finish it).
PhysicsTier make_tier(PhysicsTierKind kind, const FrameSchema& world_schema,
                      std::uint64_t seed);

/// Simulates the tier over the drivers, returning one "sim_<room>" column per
/// room (Archetype duplicates its single zone).
TimeSeriesFrame simulate_tier(const PhysicsTier& tier, const TimeSeriesFrame& drivers);

/// Documented per-room parameter defaults shared by the detailed tiers and the
/// synthetic ground truth; role cycles bedroom/living/bathroom.
struct RoomDefaults {
    std::string role;
    double capacitance_j_per_k;
    double envelope_resistance_k_per_w;
    double solar_aperture_m2;
    double occupant_gain_w;
    double window_conductance_w_per_k;
    double heating_w_per_flow;
    double cooling_w_per_flow;
    double max_flow_kg_h;
};

RoomDefaults documented_room_defaults(std::size_t room_index, std::size_t n_rooms);

/// Inter-room coupling resistance used by the documented topology (adjacency chain).
double documented_coupling_resistance();

}  // namespace hybridtherm
