#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hybridtherm/core/civil.hpp"
#include "hybridtherm/synth/world.hpp"

using namespace hybridtherm;

namespace {

// Small world for fast tests: 2 rooms, 1 year, 30-minute steps.
WorldConfig small_world(std::uint64_t seed = 42) {
    WorldConfig cfg;
    cfg.seed = seed;
    cfg.n_rooms = 2;
    cfg.years = 1;
    cfg.step_minutes = 30;
    return cfg;
}

}  // namespace

TEST_CASE("config validation") {
    WorldConfig cfg = small_world();
    cfg.step_minutes = 7;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_world();
    cfg.weather.ar1_per_hour = 1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_world();
    cfg.weather.annual_amplitude_c = -1.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = small_world();
    cfg.missing_fraction = 0.02;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("row arithmetic: two synthetic years at one minute") {
    WorldConfig cfg;
    cfg.years = 2;
    cfg.step_minutes = 1;
    CHECK(cfg.total_rows() == 2u * 365u * 24u * 60u);
    const TimeSeriesFrame w = generate_weather(cfg);
    CHECK(w.rows() == 1051200);
    CHECK(w.timestamps().front() == to_epoch_seconds({2021, 1, 1, 0, 0, 0}));
    CHECK(cfg.train_test_boundary() == to_epoch_seconds({2022, 1, 1, 0, 0, 0}));
}

TEST_CASE("weather: determinism, clipping, night solar, physical ranges") {
    const WorldConfig cfg = small_world();
    const TimeSeriesFrame a = generate_weather(cfg);
    const TimeSeriesFrame b = generate_weather(cfg);
    CHECK(a.content_hash() == b.content_hash());  // byte-identical

    const TimeSeriesFrame c = generate_weather(small_world(43));
    CHECK(a.content_hash() != c.content_hash());

    const auto& dry = a.column("drybulb").values;
    const auto& dew = a.column("dewpoint").values;
    const auto& dir = a.column("solar_direct").values;
    const auto& dif = a.column("solar_diffuse").values;
    const auto& hum = a.column("rel_humidity").values;
    const auto& wd = a.column("wind_dir").values;
    const auto& ws = a.column("wind_speed").values;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        CHECK(dry[i] >= -20.0);
        CHECK(dry[i] <= 40.0);
        CHECK(dew[i] <= dry[i]);
        CHECK(dir[i] >= 0.0);
        CHECK(dif[i] >= 0.0);
        CHECK(hum[i] >= 0.0);
        CHECK(hum[i] <= 100.0);
        CHECK(wd[i] >= 0.0);
        CHECK(wd[i] < 360.0);
        CHECK(ws[i] >= 0.0);
        const std::int64_t t = a.timestamps()[i];
        const int hour = static_cast<int>((t % 86400) / 3600);
        if (hour == 0) {
            CHECK(dir[i] == 0.0);
            CHECK(dif[i] == 0.0);
        }
    }
    // Seasonality sanity: July warmer than January on average.
    double jan = 0.0, jul = 0.0;
    std::size_t nj = 0, nl = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const int month = from_epoch_seconds(a.timestamps()[i]).month;
        if (month == 1) { jan += dry[i]; ++nj; }
        if (month == 7) { jul += dry[i]; ++nl; }
    }
    CHECK(jul / nl > jan / nj + 5.0);
}

TEST_CASE("behaviour: domains, spring window episode, determinism") {
    const WorldConfig cfg = small_world();
    const TimeSeriesFrame b = generate_occupant_behaviour(cfg);
    CHECK(b.content_hash() == generate_occupant_behaviour(cfg).content_hash());

    for (const std::string col : {"occupancy_r1", "window_r1", "blinds_r1"})
        for (const double v : b.column(col).values)
            CHECK((v == 0.0 || v == 1.0));
    for (const double v : b.column("ac_mode").values) CHECK((v == 0.0 || v == 1.0));
    for (const double v : b.column("setpoint_r1").values)
        CHECK((v == cfg.occupants.setpoint_day_c || v == cfg.occupants.setpoint_night_c));
    for (const double v : b.column("flow_r1").values) CHECK(v >= 0.0);

    // At least one window-open episode of >= 48 h within March.
    const auto& windows = b.column("window_r1").values;
    const std::size_t rows_per_hour = 2;  // 30-minute steps
    std::size_t longest = 0, run = 0;
    for (std::size_t i = 0; i < b.rows(); ++i) {
        const CivilTime c = from_epoch_seconds(b.timestamps()[i]);
        if (c.month == 3 && windows[i] >= 0.5) {
            ++run;
            longest = std::max(longest, run);
        } else {
            run = 0;
        }
    }
    CHECK(longest >= 48 * rows_per_hour);
}

TEST_CASE("dataset: missing fraction below 1%, columns stable across ops") {
    const WorldConfig cfg = small_world();
    const TimeSeriesFrame d = generate_dataset(cfg);

    std::size_t missing = 0, cells = 0;
    for (const auto& col : d.columns()) {
        for (const double v : col.values) {
            cells += 1;
            missing += is_missing(v) ? 1 : 0;
        }
    }
    CHECK(static_cast<double>(missing) / static_cast<double>(cells) < 0.01);
    CHECK(missing > 0);

    // The same (seed, column, row) keying makes the weather subset identical.
    WorldConfig no_holes = cfg;
    no_holes.missing_fraction = 0.0;
    const TimeSeriesFrame full = generate_dataset(no_holes);
    const TimeSeriesFrame w = generate_weather(cfg);
    CHECK(full.column("drybulb").values == w.column("drybulb").values);
    CHECK(full.column("solar_direct").values == w.column("solar_direct").values);

    // Expected column complement: weather 7 + building 4 + 5 per room + target per room.
    CHECK(d.n_columns() == 7 + 4 + 5 * 2 + 2);
    CHECK(d.names_in_group(FeatureGroup::Target).size() == 2);
}

TEST_CASE("dataset: room temperatures stay within the sanity envelope") {
    WorldConfig cfg = small_world();
    cfg.missing_fraction = 0.0;
    const TimeSeriesFrame d = generate_dataset(cfg);
    for (const std::string col : {"temp_r1", "temp_r2"}) {
        for (const double v : d.column(col).values) {
            CHECK(v >= 5.0);
            CHECK(v <= 40.0);
        }
    }
}

TEST_CASE("dataset: thermostat holds the setpoint band without disturbances") {
    WorldConfig cfg = small_world();
    cfg.missing_fraction = 0.0;
    cfg.sensor_noise_std_c = 0.0;
    cfg.occupants.occupant_gain_w = 0.0;
    cfg.occupants.disturbance_gain_w = 0.0;
    const TimeSeriesFrame d = generate_dataset(cfg);

    // Away from windows-open episodes and after warm-up, heated-season rooms
    // track the setpoint band. Check mid-January days 10..20.
    const auto& temp = d.column("temp_r1").values;
    const auto& window = d.column("window_r1").values;
    const auto& ts = d.timestamps();
    std::size_t checked = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        const CivilTime c = from_epoch_seconds(ts[i]);
        if (c.month != 1 || c.day < 10 || c.day > 20) continue;
        if (window[i] >= 0.5) continue;
        CHECK(temp[i] >= cfg.occupants.setpoint_night_c - 1.5);
        CHECK(temp[i] <= cfg.occupants.setpoint_day_c + 1.5);
        ++checked;
    }
    CHECK(checked > 400);
}

TEST_CASE("ground truth network is strictly richer than the modeled tiers") {
    const WorldConfig cfg = small_world();
    const RcNetwork hidden = ground_truth_network(cfg);
    // One wall node per room on top of the room air nodes.
    CHECK(hidden.zones.size() == 2u * cfg.n_rooms);
    CHECK(hidden.zones[0].name == "r1");
    CHECK(hidden.zones[2].name == "r1_wall");
    // Couplings: air-wall per room plus the adjacency chain.
    CHECK(hidden.couplings.size() == cfg.n_rooms + (cfg.n_rooms - 1));
    CHECK(to_json(hidden) == to_json(ground_truth_network(cfg)));
}
