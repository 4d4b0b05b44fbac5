#include "hybridtherm/physics/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "hybridtherm/physics/simulate.hpp"

namespace hybridtherm {

namespace {

struct TargetBinding {
    std::size_t zone;
    const std::vector<double>* values;
};

// Handles to every searchable parameter of a network.
struct ParamRef {
    std::string label;
    std::function<double&(RcNetwork&)> get;
};

std::vector<ParamRef> collect_parameters(const RcNetwork& network) {
    std::vector<ParamRef> params;
    for (std::size_t z = 0; z < network.zones.size(); ++z) {
        const Zone& zone = network.zones[z];
        params.push_back({zone.name + ".capacitance",
                          [z](RcNetwork& n) -> double& { return n.zones[z].capacitance_j_per_k; }});
        params.push_back({zone.name + ".envelope_r", [z](RcNetwork& n) -> double& {
                              return n.zones[z].envelope_resistance_k_per_w;
                          }});
        if (zone.solar_aperture_m2 > 0.0)
            params.push_back({zone.name + ".aperture", [z](RcNetwork& n) -> double& {
                                  return n.zones[z].solar_aperture_m2;
                              }});
        if (zone.occupant_gain_w > 0.0)
            params.push_back({zone.name + ".occupant_gain", [z](RcNetwork& n) -> double& {
                                  return n.zones[z].occupant_gain_w;
                              }});
        if (zone.window_conductance_w_per_k > 0.0)
            params.push_back({zone.name + ".window_g", [z](RcNetwork& n) -> double& {
                                  return n.zones[z].window_conductance_w_per_k;
                              }});
        for (std::size_t f = 0; f < zone.drivers.flows.size(); ++f) {
            if (zone.drivers.flows[f].heating_w_per_flow > 0.0)
                params.push_back({zone.name + ".heat_coeff", [z, f](RcNetwork& n) -> double& {
                                      return n.zones[z].drivers.flows[f].heating_w_per_flow;
                                  }});
            if (zone.drivers.flows[f].cooling_w_per_flow > 0.0)
                params.push_back({zone.name + ".cool_coeff", [z, f](RcNetwork& n) -> double& {
                                      return n.zones[z].drivers.flows[f].cooling_w_per_flow;
                                  }});
        }
    }
    return params;
}

}  // namespace

CalibrationResult calibrate(const RcNetwork& network, const TimeSeriesFrame& drivers,
                            const TimeSeriesFrame& targets, const CalibrationOptions& options) {
    network.validate();

    // Align rows on the timestamp intersection.
    std::vector<std::size_t> driver_rows, target_rows;
    {
        const auto& dt = drivers.timestamps();
        const auto& tt = targets.timestamps();
        std::size_t i = 0, j = 0;
        while (i < dt.size() && j < tt.size()) {
            if (dt[i] == tt[j]) { driver_rows.push_back(i); target_rows.push_back(j); ++i; ++j; }
            else if (dt[i] < tt[j]) ++i;
            else ++j;
        }
        if (driver_rows.empty())
            throw std::invalid_argument("calibrate: empty overlap between drivers and targets");
    }

    std::vector<TargetBinding> bindings;
    for (std::size_t z = 0; z < network.zones.size(); ++z) {
        const std::string& name = network.zones[z].name;
        if (targets.has_column("temp_" + name))
            bindings.push_back({z, &targets.column("temp_" + name).values});
        else if (targets.has_column(name))
            bindings.push_back({z, &targets.column(name).values});
    }
    if (bindings.empty())
        throw std::invalid_argument("calibrate: no target column matches any zone");

    const int sim_step = options.step_minutes > 0 ? options.step_minutes : drivers.step_minutes();

    auto rmse_of = [&](const RcNetwork& candidate) {
        const TimeSeriesFrame sim = simulate(candidate, drivers, sim_step);
        double sq = 0.0;
        std::size_t count = 0;
        for (const auto& b : bindings) {
            const auto& simulated = sim.column(b.zone).values;
            for (std::size_t k = 0; k < driver_rows.size(); ++k) {
                const double e = simulated[driver_rows[k]] - (*b.values)[target_rows[k]];
                sq += e * e;
            }
            count += driver_rows.size();
        }
        return std::sqrt(sq / static_cast<double>(count));
    };

    RcNetwork current = network;
    const double initial_rmse = rmse_of(current);
    double best = initial_rmse;
    const auto params = collect_parameters(current);

    constexpr double kGolden = 0.6180339887498949;
    int cycles = 0;
    bool converged = false;
    for (; cycles < options.max_cycles; ++cycles) {
        const double cycle_start = best;
        for (const auto& p : params) {
            const double p0 = p.get(current);
            if (p0 <= 0.0) continue;
            double lo = std::log(p0 / options.span_factor);
            double hi = std::log(p0 * options.span_factor);
            auto eval = [&](double x) {
                RcNetwork candidate = current;
                p.get(candidate) = std::exp(x);
                return rmse_of(candidate);
            };
            double x1 = hi - kGolden * (hi - lo);
            double x2 = lo + kGolden * (hi - lo);
            double f1 = eval(x1), f2 = eval(x2);
            for (int it = 0; it < options.golden_iterations; ++it) {
                if (f1 <= f2) {
                    hi = x2; x2 = x1; f2 = f1;
                    x1 = hi - kGolden * (hi - lo);
                    f1 = eval(x1);
                } else {
                    lo = x1; x1 = x2; f1 = f2;
                    x2 = lo + kGolden * (hi - lo);
                    f2 = eval(x2);
                }
            }
            const double x_best = f1 <= f2 ? x1 : x2;
            const double f_best = std::min(f1, f2);
            if (f_best < best) {
                p.get(current) = std::exp(x_best);
                best = f_best;
            }
        }
        if (cycle_start - best < options.rel_improvement_tol * std::max(cycle_start, 1e-12)) {
            converged = true;
            ++cycles;
            break;
        }
    }

    CalibrationResult result;
    result.network = current;
    result.initial_rmse_c = initial_rmse;
    result.final_rmse_c = best;
    result.cycles = cycles;
    result.converged = converged || options.max_cycles == 0;

    const TimeSeriesFrame sim = simulate(current, drivers, sim_step);
    for (const auto& b : bindings) {
        const auto& simulated = sim.column(b.zone).values;
        double sq = 0.0;
        for (std::size_t k = 0; k < driver_rows.size(); ++k) {
            const double e = simulated[driver_rows[k]] - (*b.values)[target_rows[k]];
            sq += e * e;
        }
        result.room_rmse_c.push_back(std::sqrt(sq / static_cast<double>(driver_rows.size())));
    }
    return result;
}

}  // namespace hybridtherm
