#include "hybridtherm/synth/world.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "hybridtherm/core/civil.hpp"
#include "hybridtherm/core/rng.hpp"
#include "hybridtherm/physics/tier.hpp"

namespace hybridtherm {

namespace {

constexpr double kPi = std::numbers::pi;

struct WeatherColumns {
    std::vector<double> drybulb, dewpoint, solar_direct, solar_diffuse, humidity, wind_dir,
        wind_speed;
};

double ar1_step_coefficient(double per_hour, int step_minutes) {
    return std::pow(per_hour, static_cast<double>(step_minutes) / 60.0);
}

WeatherColumns make_weather(const WorldConfig& cfg) {
    const std::size_t n = cfg.total_rows();
    const CounterRng rng(cfg.seed);
    const auto s_dry = rng.stream("weather.drybulb");
    const auto s_cloud = rng.stream("weather.cloud");
    const auto s_dew = rng.stream("weather.dewpoint");
    const auto s_wdir = rng.stream("weather.wind_dir");
    const auto s_wspd = rng.stream("weather.wind_speed");

    const double rho = ar1_step_coefficient(cfg.weather.ar1_per_hour, cfg.step_minutes);
    const double innov = cfg.weather.noise_std_c * std::sqrt(1.0 - rho * rho);
    const double rho_slow = ar1_step_coefficient(0.995, cfg.step_minutes);
    const double innov_slow = std::sqrt(1.0 - rho_slow * rho_slow);

    WeatherColumns w;
    w.drybulb.resize(n); w.dewpoint.resize(n); w.solar_direct.resize(n);
    w.solar_diffuse.resize(n); w.humidity.resize(n); w.wind_dir.resize(n);
    w.wind_speed.resize(n);

    const std::int64_t start = cfg.start_epoch();
    const std::int64_t step_s = cfg.step_minutes * 60;
    double noise = 0.0, cloud_ar = 0.0, dew_ar = 0.0, dir_ar = 0.0, spd_ar = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t t = start + static_cast<std::int64_t>(i) * step_s;
        const double doy = static_cast<double>(day_of_year(t));
        const double hod = static_cast<double>(t % 86400) / 3600.0;

        noise = rho * noise + innov * s_dry.normal(i);
        const double annual =
            cfg.weather.annual_mean_c - cfg.weather.annual_amplitude_c * std::cos(2.0 * kPi * (doy - 15.0) / 365.0);
        const double diurnal = -cfg.weather.diurnal_amplitude_c * std::cos(2.0 * kPi * (hod - 3.0) / 24.0);
        w.drybulb[i] = std::clamp(annual + diurnal + noise, -20.0, 40.0);

        cloud_ar = rho_slow * cloud_ar + innov_slow * s_cloud.normal(i);
        const double clearness = std::clamp(0.6 + 0.35 * cloud_ar, 0.0, 1.0);
        const double halfday = 6.0 + 2.0 * std::sin(2.0 * kPi * (doy - 81.0) / 365.0);
        const double sunrise = 12.0 - halfday, sunset = 12.0 + halfday;
        double clear_sky = 0.0;
        if (hod > sunrise && hod < sunset) {
            const double peak = 550.0 + 350.0 * std::sin(2.0 * kPi * (doy - 81.0) / 365.0);
            clear_sky = peak * std::sin(kPi * (hod - sunrise) / (2.0 * halfday));
        }
        w.solar_direct[i] = clear_sky * clearness;
        w.solar_diffuse[i] = clear_sky * (1.0 - clearness) * 0.45;

        dew_ar = rho_slow * dew_ar + innov_slow * s_dew.normal(i);
        const double depression = std::max(0.0, 4.0 + 2.5 * dew_ar + 2.0 * clearness);
        w.dewpoint[i] = w.drybulb[i] - depression;
        w.humidity[i] = std::clamp(100.0 - 5.0 * depression, 0.0, 100.0);

        dir_ar = rho_slow * dir_ar + innov_slow * s_wdir.normal(i);
        w.wind_dir[i] = std::fmod(200.0 + 140.0 * dir_ar + 720.0, 360.0);
        spd_ar = rho * spd_ar + innov / cfg.weather.noise_std_c * s_wspd.normal(i);
        w.wind_speed[i] = std::abs(3.0 + 2.0 * spd_ar);
    }
    return w;
}

struct RoomTruth {
    double c_air, c_wall, r_air_wall, r_wall_out, aperture, occupant_gain, window_g;
    double heat_coeff, cool_coeff, max_flow;
};

RoomTruth make_room_truth(const WorldConfig& cfg, std::size_t room) {
    const CounterRng rng(cfg.seed);
    const RoomDefaults d = documented_room_defaults(room, static_cast<std::size_t>(cfg.n_rooms));
    const std::string key = "truth.r" + std::to_string(room + 1) + ".";
    auto jitter = [&](const std::string& p) {
        return rng.stream(key + p).uniform(0, 0.9, 1.1);
    };
    RoomTruth t;
    t.c_air = d.capacitance_j_per_k * jitter("c_air");
    // The wall mass node is the structure no modeled tier carries; the series
    // envelope resistance lands ~15% off the documented single-resistance value.
    t.c_wall = 3.5 * d.capacitance_j_per_k * jitter("c_wall");
    t.r_air_wall = 0.40 * d.envelope_resistance_k_per_w * jitter("r_air_wall");
    t.r_wall_out = 0.75 * d.envelope_resistance_k_per_w * jitter("r_wall_out");
    t.aperture = d.solar_aperture_m2 * jitter("aperture");
    t.occupant_gain = cfg.occupants.occupant_gain_w * jitter("occupant_gain");
    t.window_g = d.window_conductance_w_per_k * jitter("window_g");
    t.heat_coeff = d.heating_w_per_flow * jitter("heat_coeff");
    t.cool_coeff = d.cooling_w_per_flow * jitter("cool_coeff");
    t.max_flow = d.max_flow_kg_h;
    return t;
}

struct BehaviourColumns {
    // Per room.
    std::vector<std::vector<double>> occupancy, window, blinds, setpoint, flow;
    // Building level.
    std::vector<double> heat_total, cool_total, network_temp, ac_mode;
    // Hidden: unobserved disturbance gains and the true temperatures.
    std::vector<std::vector<double>> temp_true;
};

/// Rasterized open/closed intervals in row units.
struct Episode { std::size_t begin, end; };

std::vector<Episode> window_episodes(const WorldConfig& cfg, std::size_t room,
                                     bool has_window) {
    std::vector<Episode> out;
    if (!has_window) return out;
    const CounterRng rng(cfg.seed);
    const auto s = rng.stream("behaviour.window_episodes.r" + std::to_string(room + 1));
    const double rows_per_hour = 60.0 / cfg.step_minutes;
    const double rows_per_day = 24.0 * rows_per_hour;
    for (int year = 0; year < cfg.years; ++year) {
        const double year0 = static_cast<double>(year) * 365.0 * rows_per_day;
        // One guaranteed multi-day spring opening per year (starts March 4..8).
        const std::size_t base = static_cast<std::size_t>(
            year0 + (62.0 + static_cast<double>(room % 5)) * rows_per_day);
        const double dur_h = 72.0 + 48.0 * s.uniform(1000 + year);
        out.push_back({base, base + static_cast<std::size_t>(dur_h * rows_per_hour)});
        // Random additional spring openings.
        const int extra = static_cast<int>(3.0 * cfg.occupants.spring_window_episodes_per_month *
                                           s.uniform(2000 + year) + 0.5);
        for (int e = 0; e < extra; ++e) {
            const double start_day = 59.0 + 92.0 * s.uniform(3000 + 10 * year + e);
            const double dur = 12.0 + 48.0 * s.uniform(4000 + 10 * year + e);
            const std::size_t b = static_cast<std::size_t>(year0 + start_day * rows_per_day);
            out.push_back({b, b + static_cast<std::size_t>(dur * rows_per_hour)});
        }
    }
    return out;
}

BehaviourColumns make_behaviour_and_truth(const WorldConfig& cfg, const WeatherColumns& w) {
    const std::size_t n = cfg.total_rows();
    const std::size_t nr = static_cast<std::size_t>(cfg.n_rooms);
    const CounterRng rng(cfg.seed);

    BehaviourColumns b;
    b.occupancy.assign(nr, std::vector<double>(n));
    b.window.assign(nr, std::vector<double>(n, 0.0));
    b.blinds.assign(nr, std::vector<double>(n));
    b.setpoint.assign(nr, std::vector<double>(n));
    b.flow.assign(nr, std::vector<double>(n));
    b.temp_true.assign(nr, std::vector<double>(n));
    b.heat_total.resize(n);
    b.cool_total.resize(n);
    b.network_temp.resize(n);
    b.ac_mode.resize(n);

    const std::int64_t start = cfg.start_epoch();
    const std::int64_t step_s = cfg.step_minutes * 60;
    const double rows_per_day = 1440.0 / cfg.step_minutes;

    std::vector<RoomTruth> truth;
    std::vector<std::string> roles;
    for (std::size_t r = 0; r < nr; ++r) {
        truth.push_back(make_room_truth(cfg, r));
        roles.push_back(documented_room_defaults(r, nr).role);
    }

    // Window episodes rasterized up front.
    for (std::size_t r = 0; r < nr; ++r) {
        for (const auto& ep : window_episodes(cfg, r, truth[r].aperture > 0.0))
            for (std::size_t i = ep.begin; i < std::min(ep.end, n); ++i) b.window[r][i] = 1.0;
    }

    // Daily home/away coins, shared by all rooms.
    const auto s_home = rng.stream("behaviour.home_day");
    const std::size_t n_days = static_cast<std::size_t>(std::ceil(n / rows_per_day));
    std::vector<char> home_day(n_days);
    {
        std::int64_t t = start;
        for (std::size_t d = 0; d < n_days; ++d, t += 86400) {
            const bool weekend = day_of_week(t) >= 5;
            home_day[d] = weekend || s_home.uniform(d) >= cfg.occupants.weekday_away_probability;
        }
    }

    // Occupancy schedules and setpoints (piecewise constant over hours).
    for (std::size_t r = 0; r < nr; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            const std::int64_t t = start + static_cast<std::int64_t>(i) * step_s;
            const double hod = static_cast<double>(t % 86400) / 3600.0;
            const std::size_t day = i / static_cast<std::size_t>(rows_per_day);
            const bool home = home_day[std::min(day, n_days - 1)] != 0;
            bool occ = false;
            if (roles[r] == "bedroom") occ = hod >= 22.0 || hod < 7.5;
            else if (roles[r] == "living")
                occ = (hod >= 17.0 && hod < 22.0) || (home && hod >= 9.0 && hod < 17.0);
            else occ = (hod >= 7.0 && hod < 7.75) || (hod >= 21.5 && hod < 22.0);
            b.occupancy[r][i] = occ ? 1.0 : 0.0;
            b.setpoint[r][i] = (hod >= 6.0 && hod < 22.0) ? cfg.occupants.setpoint_day_c
                                                          : cfg.occupants.setpoint_night_c;
            const double solar = w.solar_direct[i] + w.solar_diffuse[i];
            b.blinds[r][i] =
                truth[r].aperture <= 0.0 ? 0.0 : ((hod >= 21.0 || hod < 7.0) || solar > 520.0) ? 1.0 : 0.0;
        }
    }

    // Cooling season from a one-week trailing drybulb mean.
    {
        const std::size_t window_rows = static_cast<std::size_t>(7.0 * rows_per_day);
        double running = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            running += w.drybulb[i];
            if (i >= window_rows) running -= w.drybulb[i - window_rows];
            const double mean = running / static_cast<double>(std::min(i + 1, window_rows));
            b.ac_mode[i] = mean > 19.0 ? 1.0 : 0.0;
        }
    }

    // Hidden ground-truth integration: air + wall node per room, thermostatic
    // flows recorded as the sensor columns, unobserved disturbance gains.
    std::vector<double> t_air(nr, 21.0), t_wall(nr, 16.0);
    std::vector<double> disturbance(nr, 0.0);
    std::vector<CounterRng::Stream> s_dist;
    for (std::size_t r = 0; r < nr; ++r)
        s_dist.push_back(rng.stream("behaviour.disturbance.r" + std::to_string(r + 1)));
    const double rho_dist = ar1_step_coefficient(0.9, cfg.step_minutes);
    const double innov_dist = std::sqrt(1.0 - rho_dist * rho_dist);
    const double coupling_g = 1.0 / documented_coupling_resistance();
    const double h = static_cast<double>(step_s);
    const double total_max_flow = [&] {
        double s = 0.0;
        for (const auto& t : truth) s += t.max_flow;
        return s;
    }();

    std::vector<double> q_fixed(nr), g_win(nr), da(nr), dw(nr), ka1(nr), kw1(nr), ka2(nr),
        kw2(nr), ka3(nr), kw3(nr), ka4(nr), kw4(nr), air_tmp(nr), wall_tmp(nr);
    double network_temp_state = 30.0;

    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t t = start + static_cast<std::int64_t>(i) * step_s;
        const double hod = static_cast<double>(t % 86400) / 3600.0;
        const std::size_t day = i / static_cast<std::size_t>(rows_per_day);
        const bool home = home_day[std::min(day, n_days - 1)] != 0;
        const bool cooling = b.ac_mode[i] >= 0.5;
        const double t_out = w.drybulb[i];
        const double solar = w.solar_direct[i] + w.solar_diffuse[i];

        double heat_sum = 0.0, cool_sum = 0.0;
        for (std::size_t r = 0; r < nr; ++r) {
            // Thermostatic valve, sampled at the step start and held.
            const double kp = truth[r].max_flow / 1.5;
            double flow;
            if (!cooling)
                flow = std::clamp(kp * (b.setpoint[r][i] - t_air[r]), 0.0, truth[r].max_flow);
            else
                flow = std::clamp(kp * (t_air[r] - (b.setpoint[r][i] + 4.0)), 0.0,
                                  truth[r].max_flow);
            b.flow[r][i] = flow;
            (cooling ? cool_sum : heat_sum) += flow;

            disturbance[r] = rho_dist * disturbance[r] + innov_dist * s_dist[r].normal(i);
            double q = flow * (cooling ? -truth[r].cool_coeff : truth[r].heat_coeff);
            q += truth[r].occupant_gain * b.occupancy[r][i];
            q += cfg.occupants.disturbance_gain_w * disturbance[r];
            if (roles[r] == "living" && home && hod >= 18.0 && hod < 19.0)
                q += 2.5 * cfg.occupants.disturbance_gain_w;  // cooking, not in any column
            const double transmission = b.blinds[r][i] >= 0.5 ? 0.2 : 1.0;
            q += truth[r].aperture * solar * transmission;
            q_fixed[r] = q;
            g_win[r] = b.window[r][i] >= 0.5 ? truth[r].window_g : 0.0;
        }
        b.heat_total[i] = heat_sum;
        b.cool_total[i] = cool_sum;

        const double target_net = cooling ? 18.0 - 4.0 * cool_sum / total_max_flow
                                          : 28.0 + 14.0 * heat_sum / total_max_flow;
        network_temp_state += (target_net - network_temp_state) * std::min(1.0, h / 7200.0);
        b.network_temp[i] = network_temp_state;

        for (std::size_t r = 0; r < nr; ++r) b.temp_true[r][i] = t_air[r];

        auto rhs = [&](const std::vector<double>& air, const std::vector<double>& wall,
                       std::vector<double>& dair, std::vector<double>& dwall) {
            for (std::size_t r = 0; r < nr; ++r) {
                const double g_aw = 1.0 / truth[r].r_air_wall;
                const double g_wo = 1.0 / truth[r].r_wall_out;
                double qa = q_fixed[r] + (wall[r] - air[r]) * g_aw + (t_out - air[r]) * g_win[r];
                if (r > 0) qa += (air[r - 1] - air[r]) * coupling_g;
                if (r + 1 < nr) qa += (air[r + 1] - air[r]) * coupling_g;
                dair[r] = qa / truth[r].c_air;
                dwall[r] = ((air[r] - wall[r]) * g_aw + (t_out - wall[r]) * g_wo) / truth[r].c_wall;
            }
        };

        rhs(t_air, t_wall, ka1, kw1);
        for (std::size_t r = 0; r < nr; ++r) {
            air_tmp[r] = t_air[r] + 0.5 * h * ka1[r];
            wall_tmp[r] = t_wall[r] + 0.5 * h * kw1[r];
        }
        rhs(air_tmp, wall_tmp, ka2, kw2);
        for (std::size_t r = 0; r < nr; ++r) {
            air_tmp[r] = t_air[r] + 0.5 * h * ka2[r];
            wall_tmp[r] = t_wall[r] + 0.5 * h * kw2[r];
        }
        rhs(air_tmp, wall_tmp, ka3, kw3);
        for (std::size_t r = 0; r < nr; ++r) {
            air_tmp[r] = t_air[r] + h * ka3[r];
            wall_tmp[r] = t_wall[r] + h * kw3[r];
        }
        rhs(air_tmp, wall_tmp, ka4, kw4);
        for (std::size_t r = 0; r < nr; ++r) {
            t_air[r] += (h / 6.0) * (ka1[r] + 2.0 * (ka2[r] + ka3[r]) + ka4[r]);
            t_wall[r] += (h / 6.0) * (kw1[r] + 2.0 * (kw2[r] + kw3[r]) + kw4[r]);
        }
    }
    return b;
}

std::vector<std::int64_t> make_timestamps(const WorldConfig& cfg) {
    const std::size_t n = cfg.total_rows();
    std::vector<std::int64_t> ts(n);
    const std::int64_t start = cfg.start_epoch();
    const std::int64_t step_s = cfg.step_minutes * 60;
    for (std::size_t i = 0; i < n; ++i) ts[i] = start + static_cast<std::int64_t>(i) * step_s;
    return ts;
}

void add_weather_columns(TimeSeriesFrame& frame, WeatherColumns&& w) {
    frame.add_column({"drybulb", FeatureGroup::Weather, "degC", std::move(w.drybulb)});
    frame.add_column({"dewpoint", FeatureGroup::Weather, "degC", std::move(w.dewpoint)});
    frame.add_column({"solar_direct", FeatureGroup::Weather, "W/m2", std::move(w.solar_direct)});
    frame.add_column({"solar_diffuse", FeatureGroup::Weather, "W/m2", std::move(w.solar_diffuse)});
    frame.add_column({"rel_humidity", FeatureGroup::Weather, "pct", std::move(w.humidity)});
    frame.add_column({"wind_dir", FeatureGroup::Weather, "deg", std::move(w.wind_dir)});
    frame.add_column({"wind_speed", FeatureGroup::Weather, "m/s", std::move(w.wind_speed)});
}

void add_behaviour_columns(TimeSeriesFrame& frame, const WorldConfig& cfg, BehaviourColumns& b) {
    frame.add_column({"heat_flow_total", FeatureGroup::Building, "kg/h", std::move(b.heat_total)});
    frame.add_column({"cool_flow_total", FeatureGroup::Building, "kg/h", std::move(b.cool_total)});
    frame.add_column({"network_temp", FeatureGroup::Building, "degC", std::move(b.network_temp)});
    frame.add_column({"ac_mode", FeatureGroup::Building, "enum", std::move(b.ac_mode)});
    const auto rooms = cfg.room_names();
    for (std::size_t r = 0; r < rooms.size(); ++r) {
        frame.add_column({"flow_" + rooms[r], FeatureGroup::Room, "kg/h", std::move(b.flow[r])});
        frame.add_column({"setpoint_" + rooms[r], FeatureGroup::Room, "degC", std::move(b.setpoint[r])});
        frame.add_column({"occupancy_" + rooms[r], FeatureGroup::Room, "binary", std::move(b.occupancy[r])});
        frame.add_column({"window_" + rooms[r], FeatureGroup::Room, "binary", std::move(b.window[r])});
        frame.add_column({"blinds_" + rooms[r], FeatureGroup::Room, "binary", std::move(b.blinds[r])});
    }
}

}  // namespace

void WorldConfig::validate() const {
    if (step_minutes <= 0 || 60 % step_minutes != 0)
        throw std::invalid_argument("WorldConfig: step_minutes must divide 60");
    if (weather.ar1_per_hour < 0.0 || weather.ar1_per_hour >= 1.0)
        throw std::invalid_argument("WorldConfig: AR(1) coefficient must be in [0,1)");
    if (weather.annual_amplitude_c < 0.0 || weather.diurnal_amplitude_c < 0.0)
        throw std::invalid_argument("WorldConfig: amplitudes must be >= 0");
    if (n_rooms < 1 || years < 1)
        throw std::invalid_argument("WorldConfig: n_rooms and years must be >= 1");
    if (missing_fraction < 0.0 || missing_fraction >= 0.01)
        throw std::invalid_argument("WorldConfig: missing fraction must stay below 1%");
}

std::size_t WorldConfig::total_rows() const {
    return static_cast<std::size_t>(years) * 365u * 24u * 60u /
           static_cast<std::size_t>(step_minutes);
}

std::vector<std::string> WorldConfig::room_names() const {
    std::vector<std::string> out;
    for (int r = 0; r < n_rooms; ++r) out.push_back("r" + std::to_string(r + 1));
    return out;
}

std::int64_t WorldConfig::start_epoch() const {
    return to_epoch_seconds({start_year, 1, 1, 0, 0, 0});
}

std::int64_t WorldConfig::train_test_boundary() const {
    return start_epoch() + static_cast<std::int64_t>(years - 1) * 365 * 86400;
}

TimeSeriesFrame generate_weather(const WorldConfig& config) {
    config.validate();
    TimeSeriesFrame frame(make_timestamps(config), config.step_minutes);
    add_weather_columns(frame, make_weather(config));
    return frame;
}

TimeSeriesFrame generate_occupant_behaviour(const WorldConfig& config) {
    config.validate();
    const WeatherColumns w = make_weather(config);
    BehaviourColumns b = make_behaviour_and_truth(config, w);
    TimeSeriesFrame frame(make_timestamps(config), config.step_minutes);
    add_behaviour_columns(frame, config, b);
    return frame;
}

TimeSeriesFrame generate_dataset(const WorldConfig& config) {
    config.validate();
    const CounterRng rng(config.seed);
    WeatherColumns w = make_weather(config);
    BehaviourColumns b = make_behaviour_and_truth(config, w);

    TimeSeriesFrame frame(make_timestamps(config), config.step_minutes);
    add_weather_columns(frame, std::move(w));
    add_behaviour_columns(frame, config, b);

    const auto rooms = config.room_names();
    const std::size_t n = config.total_rows();
    for (std::size_t r = 0; r < rooms.size(); ++r) {
        const auto s_noise = rng.stream("sensor.temp_" + rooms[r]);
        std::vector<double> temp = std::move(b.temp_true[r]);
        if (config.sensor_noise_std_c > 0.0)
            for (std::size_t i = 0; i < n; ++i)
                temp[i] += config.sensor_noise_std_c * s_noise.normal(i);
        frame.add_column({"temp_" + rooms[r], FeatureGroup::Target, "degC", std::move(temp)});
    }

    if (config.missing_fraction <= 0.0) return frame;

    // Punch missing holes (never in the timestamps).
    TimeSeriesFrame holed(frame.timestamps(), frame.step_minutes());
    for (const auto& c : frame.columns()) {
        const auto s_miss = rng.stream("missing." + c.name);
        Column nc = c;
        for (std::size_t i = 0; i < nc.values.size(); ++i)
            if (s_miss.uniform(i) < config.missing_fraction) nc.values[i] = missing_value();
        holed.add_column(std::move(nc));
    }
    return holed;
}

RcNetwork ground_truth_network(const WorldConfig& config) {
    config.validate();
    const auto rooms = config.room_names();
    RcNetwork net;
    for (std::size_t r = 0; r < rooms.size(); ++r) {
        const RoomTruth t = make_room_truth(config, r);
        Zone air;
        air.name = rooms[r];
        air.capacitance_j_per_k = t.c_air;
        // The air node reaches outdoors only through the wall node; the direct
        // envelope entry is effectively disabled.
        air.envelope_resistance_k_per_w = 1.0e9;
        air.solar_aperture_m2 = t.aperture;
        air.occupant_gain_w = t.occupant_gain;
        air.window_conductance_w_per_k = t.window_g;
        air.drivers.flows.push_back(
            {"flow_" + rooms[r], "ac_mode", t.heat_coeff, t.cool_coeff, 1.0});
        air.drivers.occupancy = "occupancy_" + rooms[r];
        air.drivers.window = "window_" + rooms[r];
        air.drivers.blinds = "blinds_" + rooms[r];
        net.zones.push_back(std::move(air));
    }
    for (std::size_t r = 0; r < rooms.size(); ++r) {
        const RoomTruth t = make_room_truth(config, r);
        Zone wall;
        wall.name = rooms[r] + "_wall";
        wall.capacitance_j_per_k = t.c_wall;
        wall.envelope_resistance_k_per_w = t.r_wall_out;
        net.zones.push_back(std::move(wall));
        net.couplings.push_back({r, rooms.size() + r, t.r_air_wall});
    }
    for (std::size_t r = 0; r + 1 < rooms.size(); ++r)
        net.couplings.push_back({r, r + 1, documented_coupling_resistance()});
    net.validate();
    return net;
}

}  // namespace hybridtherm
