#include "hybridtherm/physics/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hybridtherm {

namespace {

const std::vector<double>* find_driver(const TimeSeriesFrame& drivers, const std::string& name) {
    if (name.empty() || !drivers.has_column(name)) return nullptr;
    return &drivers.column(name).values;
}

double at_or_zero(const std::vector<double>* col, std::size_t i) {
    return col ? (*col)[i] : 0.0;
}

double thermostat_power(const IdealThermostat& t, double temp) {
    if (!t.enabled) return 0.0;
    const double heat = std::clamp(t.gain_w_per_k * (t.heat_setpoint_c - temp), 0.0, t.max_heat_w);
    const double cool = std::clamp(t.gain_w_per_k * (temp - t.cool_setpoint_c), 0.0, t.max_cool_w);
    return heat - cool;
}

}  // namespace

TimeSeriesFrame simulate(const RcNetwork& network, const TimeSeriesFrame& drivers,
                         int step_minutes) {
    network.validate();
    if (drivers.rows() == 0) throw std::invalid_argument("simulate: empty driver frame");
    if (step_minutes <= 0 || drivers.step_minutes() % step_minutes != 0)
        throw std::invalid_argument("simulate: step must divide the driver step");

    const std::size_t n_zones = network.zones.size();
    const std::size_t n_rows = drivers.rows();

    const auto* t_out_col = find_driver(drivers, network.outdoor_temp_column);
    if (!t_out_col)
        throw std::invalid_argument("simulate: missing outdoor-temperature column '" +
                                    network.outdoor_temp_column + "'");

    std::vector<const std::vector<double>*> solar_cols;
    for (const auto& name : network.solar_columns)
        if (const auto* c = find_driver(drivers, name)) solar_cols.push_back(c);

    // Exogenous (state-independent) inputs per row and zone.
    std::vector<double> q_exog(n_rows * n_zones, 0.0);
    std::vector<double> g_window(n_rows * n_zones, 0.0);
    for (std::size_t z = 0; z < n_zones; ++z) {
        const Zone& zone = network.zones[z];
        const auto* occ = find_driver(drivers, zone.drivers.occupancy);
        const auto* win = find_driver(drivers, zone.drivers.window);
        const auto* bld = find_driver(drivers, zone.drivers.blinds);
        struct ResolvedFlow {
            const std::vector<double>* flow;
            const std::vector<double>* mode;
            double heat_w, cool_w, share;
        };
        std::vector<ResolvedFlow> flows;
        for (const auto& f : zone.drivers.flows)
            flows.push_back({find_driver(drivers, f.flow_column), find_driver(drivers, f.mode_column),
                             f.heating_w_per_flow, f.cooling_w_per_flow, f.share});
        for (std::size_t i = 0; i < n_rows; ++i) {
            double q = 0.0;
            for (const auto& f : flows) {
                const double flow = at_or_zero(f.flow, i);
                if (f.mode)
                    q += f.share * flow * ((*f.mode)[i] >= 0.5 ? -f.cool_w : f.heat_w);
                else
                    q += f.share * flow * (f.heat_w - f.cool_w);
            }
            if (zone.solar_aperture_m2 > 0.0 && !solar_cols.empty()) {
                double irradiance = 0.0;
                for (const auto* c : solar_cols) irradiance += (*c)[i];
                const double trans =
                    at_or_zero(bld, i) >= 0.5 ? network.blinds_transmission : 1.0;
                q += zone.solar_aperture_m2 * irradiance * trans;
            }
            q += zone.occupant_gain_w * at_or_zero(occ, i);
            q_exog[i * n_zones + z] = q;
            g_window[i * n_zones + z] =
                at_or_zero(win, i) >= 0.5 ? zone.window_conductance_w_per_k : 0.0;
            if (!std::isfinite(q) || !std::isfinite((*t_out_col)[i]))
                throw std::invalid_argument("simulate: non-finite driver values at row " +
                                            std::to_string(i));
        }
    }

    std::vector<double> g_env(n_zones), inv_c(n_zones);
    for (std::size_t z = 0; z < n_zones; ++z) {
        g_env[z] = 1.0 / network.zones[z].envelope_resistance_k_per_w;
        inv_c[z] = 1.0 / network.zones[z].capacitance_j_per_k;
    }
    struct Pair { std::size_t a, b; double g; };
    std::vector<Pair> pairs;
    for (const auto& c : network.couplings)
        pairs.push_back({c.a, c.b, 1.0 / c.resistance_k_per_w});

    std::vector<double> temp(n_zones), k1(n_zones), k2(n_zones), k3(n_zones), k4(n_zones),
        scratch(n_zones);
    for (std::size_t z = 0; z < n_zones; ++z) temp[z] = network.zones[z].initial_temp_c;

    auto rhs = [&](const std::vector<double>& state, std::size_t row, std::vector<double>& out) {
        const double t_out = (*t_out_col)[row];
        const double* q_row = &q_exog[row * n_zones];
        const double* gw_row = &g_window[row * n_zones];
        for (std::size_t z = 0; z < n_zones; ++z)
            out[z] = (t_out - state[z]) * (g_env[z] + gw_row[z]) + q_row[z] +
                     thermostat_power(network.zones[z].thermostat, state[z]);
        for (const auto& p : pairs) {
            const double q = (state[p.b] - state[p.a]) * p.g;
            out[p.a] += q;
            out[p.b] -= q;
        }
        for (std::size_t z = 0; z < n_zones; ++z) out[z] *= inv_c[z];
    };

    std::vector<std::vector<double>> trajectory(n_zones, std::vector<double>(n_rows));
    for (std::size_t z = 0; z < n_zones; ++z) trajectory[z][0] = temp[z];

    const int n_sub = drivers.step_minutes() / step_minutes;
    const double h = static_cast<double>(step_minutes) * 60.0;

    for (std::size_t i = 0; i + 1 < n_rows; ++i) {
        for (int s = 0; s < n_sub; ++s) {
            rhs(temp, i, k1);
            for (std::size_t z = 0; z < n_zones; ++z) scratch[z] = temp[z] + 0.5 * h * k1[z];
            rhs(scratch, i, k2);
            for (std::size_t z = 0; z < n_zones; ++z) scratch[z] = temp[z] + 0.5 * h * k2[z];
            rhs(scratch, i, k3);
            for (std::size_t z = 0; z < n_zones; ++z) scratch[z] = temp[z] + h * k3[z];
            rhs(scratch, i, k4);
            for (std::size_t z = 0; z < n_zones; ++z)
                temp[z] += (h / 6.0) * (k1[z] + 2.0 * (k2[z] + k3[z]) + k4[z]);
        }
        for (std::size_t z = 0; z < n_zones; ++z) trajectory[z][i + 1] = temp[z];
    }

    TimeSeriesFrame out(drivers.timestamps(), drivers.step_minutes());
    for (std::size_t z = 0; z < n_zones; ++z)
        out.add_column({"sim_" + network.zones[z].name, FeatureGroup::Simulated, "degC",
                        std::move(trajectory[z])});
    return out;
}

}  // namespace hybridtherm
