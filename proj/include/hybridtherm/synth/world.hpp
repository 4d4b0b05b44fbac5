#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hybridtherm/physics/network.hpp"
#include "hybridtherm/timeseries/frame.hpp"

namespace hybridtherm {

struct WeatherParams {
    double annual_mean_c = 10.0;
    double annual_amplitude_c = 9.0;
    double diurnal_amplitude_c = 4.0;
    double ar1_per_hour = 0.98;   // noise autocorrelation over one hour
    double noise_std_c = 2.5;     // stationary noise standard deviation
};

struct OccupantParams {
    double weekday_away_probability = 0.6;   // daytime absence coin, weekdays
    double spring_window_episodes_per_month = 1.0;  // extra random openings Mar-May
    double setpoint_day_c = 21.0;
    double setpoint_night_c = 19.0;
    double occupant_gain_w = 120.0;     // heat per present person (hidden model)
    double disturbance_gain_w = 120.0;  // unobserved appliance/ventilation noise scale
};

/// Seeded two-year synthetic building analog: weather and behaviour drivers
/// plus ground-truth room temperatures from a hidden high-fidelity RC network.
struct WorldConfig {
    std::uint64_t seed = 42;
    int n_rooms = 5;
    int years = 2;           // synthetic non-leap years (365 days)
    int step_minutes = 1;
    int start_year = 2021;   // chosen non-leap so year arithmetic stays exact
    WeatherParams weather;
    OccupantParams occupants;
    double sensor_noise_std_c = 0.05;
    double missing_fraction = 0.005;  // per-cell deletion probability, < 1%

    void validate() const;
    std::size_t total_rows() const;
    std::vector<std::string> room_names() const;  // "r1".."rn"
    std::int64_t start_epoch() const;
    std::int64_t train_test_boundary() const;  // start of the last year
};

/// Weather group columns; deterministic in (seed, column, row).
TimeSeriesFrame generate_weather(const WorldConfig& config);

/// Building + Room group columns (setpoints, occupancy, windows, blinds,
/// mass flows, network temperature, AC mode). Mass flows come from the hidden
/// model's thermostat, so this runs the ground-truth integration.
TimeSeriesFrame generate_occupant_behaviour(const WorldConfig& config);

/// The full analog table: weather + behaviour + per-room Target temperatures
/// with sensor noise and a sub-1% fraction of missing cells.
TimeSeriesFrame generate_dataset(const WorldConfig& config);

/// The hidden RC network (air + wall node per room, true parameters); exposed
/// for test oracles only, never for the modeled tiers.
RcNetwork ground_truth_network(const WorldConfig& config);

}  // namespace hybridtherm
