// hybridtherm CLI: synthetic-world generation, RC simulation and calibration,
// hybrid model training, evaluation, explainability exports, and the
// data-quantity sweep. Exit codes: 0 success, 2 validation error, 3 runtime
// failure.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "hybridtherm/core/civil.hpp"
#include "hybridtherm/eval/bundle.hpp"
#include "hybridtherm/eval/experiments.hpp"
#include "hybridtherm/physics/calibrate.hpp"
#include "hybridtherm/physics/simulate.hpp"
#include "hybridtherm/synth/world.hpp"
#include "hybridtherm/timeseries/csv.hpp"
#include "hybridtherm/timeseries/ops.hpp"

using namespace hybridtherm;

namespace {

std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::map<std::string, std::string> out;
    if (path.empty()) return out;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? "" : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        if (!key.empty()) out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

double config_num(const std::map<std::string, std::string>& cfg, const std::string& key,
                  double fallback) {
    const auto it = cfg.find(key);
    return it == cfg.end() ? fallback : std::stod(it->second);
}

WorldConfig world_from_config(const std::map<std::string, std::string>& cfg,
                              std::uint64_t seed) {
    WorldConfig w;
    w.seed = seed;
    w.n_rooms = static_cast<int>(config_num(cfg, "world.n_rooms", w.n_rooms));
    w.years = static_cast<int>(config_num(cfg, "world.years", w.years));
    w.step_minutes = static_cast<int>(config_num(cfg, "world.step_minutes", w.step_minutes));
    w.sensor_noise_std_c = config_num(cfg, "world.sensor_noise_std_c", w.sensor_noise_std_c);
    w.missing_fraction = config_num(cfg, "world.missing_fraction", w.missing_fraction);
    w.weather.annual_mean_c = config_num(cfg, "weather.annual_mean_c", w.weather.annual_mean_c);
    w.weather.annual_amplitude_c =
        config_num(cfg, "weather.annual_amplitude_c", w.weather.annual_amplitude_c);
    w.weather.diurnal_amplitude_c =
        config_num(cfg, "weather.diurnal_amplitude_c", w.weather.diurnal_amplitude_c);
    w.weather.ar1_per_hour = config_num(cfg, "weather.ar1_per_hour", w.weather.ar1_per_hour);
    w.weather.noise_std_c = config_num(cfg, "weather.noise_std_c", w.weather.noise_std_c);
    w.occupants.setpoint_day_c =
        config_num(cfg, "occupants.setpoint_day_c", w.occupants.setpoint_day_c);
    w.occupants.setpoint_night_c =
        config_num(cfg, "occupants.setpoint_night_c", w.occupants.setpoint_night_c);
    return w;
}

ExperimentPlan plan_from_config(const std::map<std::string, std::string>& cfg,
                                const std::string& out_dir) {
    ExperimentPlan plan;
    plan.resample_minutes =
        static_cast<int>(config_num(cfg, "plan.resample_minutes", plan.resample_minutes));
    plan.calibration_step_minutes = static_cast<int>(
        config_num(cfg, "plan.calibration_step_minutes", plan.calibration_step_minutes));
    plan.ffnn.learning_rate = config_num(cfg, "ffnn.learning_rate", plan.ffnn.learning_rate);
    plan.ffnn.max_epochs =
        static_cast<int>(config_num(cfg, "ffnn.max_epochs", plan.ffnn.max_epochs));
    plan.forest.n_trees =
        static_cast<int>(config_num(cfg, "forest.n_trees", plan.forest.n_trees));
    plan.out_dir = out_dir;
    return plan;
}

TimeSeriesFrame load_data(const std::string& data_path) {
    return load_csv_with_sidecar(data_path, data_path + ".schema");
}

int run(int argc, char** argv) {
    CLI::App app{"Gray-box building thermal modeling toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out";
    std::uint64_t seed = 42;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--seed", seed, "global seed");
    app.add_option("--out-dir", out_dir, "output directory");

    // synth
    auto* synth = app.add_subcommand("synth", "generate the synthetic dataset");
    std::string synth_out = "synthetic.csv", hidden_out;
    int synth_years = 0, synth_step = 0;
    synth->add_option("--data-out", synth_out, "output CSV path");
    synth->add_option("--hidden-model-out", hidden_out, "hidden network JSON (test oracles)");
    synth->add_option("--years", synth_years, "override config years");
    synth->add_option("--step", synth_step, "override step minutes");

    // simulate
    auto* sim = app.add_subcommand("simulate", "forward-simulate an RC network");
    std::string sim_network, sim_drivers, sim_out = "simulation.csv";
    sim->add_option("--network", sim_network, "network JSON")->required();
    sim->add_option("--drivers", sim_drivers, "driver CSV (with .schema sidecar)")->required();
    sim->add_option("--out", sim_out, "output CSV");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "calibrate an RC network against targets");
    std::string cal_network, cal_drivers, cal_targets, cal_out = "calibrated.json";
    cal->add_option("--network", cal_network, "initial network JSON")->required();
    cal->add_option("--drivers", cal_drivers, "driver CSV")->required();
    cal->add_option("--targets", cal_targets, "target CSV (defaults to drivers)");
    cal->add_option("--out", cal_out, "calibrated network JSON");

    // train
    auto* train_cmd = app.add_subcommand("train", "fit one hybrid model and save a bundle");
    std::string train_data, train_strategy = "residual", train_learner = "ffnn",
                train_scenario = "wbr", bundle_dir = "bundle";
    train_cmd->add_option("--data", train_data, "dataset CSV")->required();
    train_cmd->add_option("--strategy", train_strategy, "assistant|residual|surrogate|augmentation");
    train_cmd->add_option("--learner", train_learner, "lr|ffnn|rf");
    train_cmd->add_option("--scenario", train_scenario, "w|wb|wbr");
    train_cmd->add_option("--bundle", bundle_dir, "output bundle directory");

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "run the scenario matrix");
    std::string eval_data;
    bool eval_quick = false;
    eval_cmd->add_option("--data", eval_data, "dataset CSV (generated when omitted)");
    eval_cmd->add_flag("--quick", eval_quick, "small grid for smoke runs");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep", "data-quantity sweep");
    std::string sweep_data;
    sweep_cmd->add_option("--data", sweep_data, "dataset CSV (generated when omitted)");

    // explain
    auto* explain_cmd = app.add_subcommand("explain", "attribution exports for a bundle");
    std::string explain_bundle, explain_data, explain_mode = "sampled";
    int explain_samples = 100, explain_perms = 32, explain_background = 100;
    std::size_t explain_clusters = 5;
    explain_cmd->add_option("--bundle", explain_bundle, "bundle directory")->required();
    explain_cmd->add_option("--data", explain_data, "dataset CSV")->required();
    explain_cmd->add_option("--mode", explain_mode, "exact|sampled");
    explain_cmd->add_option("--samples", explain_samples, "rows to explain");
    explain_cmd->add_option("--permutations", explain_perms, "sampled-mode permutations");
    explain_cmd->add_option("--background", explain_background, "background rows");
    explain_cmd->add_option("--clusters", explain_clusters, "partition size");

    CLI11_PARSE(app, argc, argv);
    const auto cfg = load_config_file(config_path);

    if (synth->parsed()) {
        WorldConfig w = world_from_config(cfg, seed);
        if (synth_years > 0) w.years = synth_years;
        if (synth_step > 0) w.step_minutes = synth_step;
        const TimeSeriesFrame data = generate_dataset(w);
        write_csv(data, synth_out);
        write_schema(schema_of(data), synth_out + ".schema");
        if (!hidden_out.empty()) save_network(ground_truth_network(w), hidden_out);
        std::printf("wrote %zu rows x %zu columns to %s\n", data.rows(), data.n_columns(),
                    synth_out.c_str());
        return 0;
    }
    if (sim->parsed()) {
        const RcNetwork network = load_network(sim_network);
        const TimeSeriesFrame drivers = load_data(sim_drivers);
        const TimeSeriesFrame out = simulate(network, drivers, drivers.step_minutes());
        write_csv(out, sim_out);
        write_schema(schema_of(out), sim_out + ".schema");
        std::printf("simulated %zu zones over %zu rows -> %s\n", network.zones.size(),
                    out.rows(), sim_out.c_str());
        return 0;
    }
    if (cal->parsed()) {
        const RcNetwork network = load_network(cal_network);
        const TimeSeriesFrame drivers = load_data(cal_drivers);
        const TimeSeriesFrame targets =
            cal_targets.empty() ? drivers : load_data(cal_targets);
        const CalibrationResult result = calibrate(network, drivers, targets);
        save_network(result.network, cal_out);
        std::printf("calibration: rmse %.4f -> %.4f degC in %d cycles (%s)\n",
                    result.initial_rmse_c, result.final_rmse_c, result.cycles,
                    result.converged ? "converged" : "cycle limit");
        return 0;
    }
    if (train_cmd->parsed()) {
        const ExperimentPlan plan = plan_from_config(cfg, out_dir);
        const TimeSeriesFrame raw = load_data(train_data);
        const PreparedData data = prepare_dataset(raw, plan.resample_minutes, 0);
        const ScenarioSpec spec = scenario_from_string(train_scenario);
        const PhysicsTier tier = prepare_tier(spec, data, seed, plan.calibration_step_minutes);
        LearnerConfig lc;
        lc.kind = learner_kind_from_string(train_learner);
        lc.ffnn = plan.ffnn;
        lc.forest = plan.forest;
        lc.finetune = plan.finetune;
        lc.seed = cell_seed(seed, "cli/train");
        const HybridModel model =
            hybrid_fit(strategy_from_string(train_strategy), lc, tier, data.train, spec);
        save_bundle(model, bundle_dir);
        const MetricReport report =
            evaluate_predictions(data.test, hybrid_predict(model, data.test));
        std::printf("%s-%s (%s): test MAPE %.2f%%  MAE %.3f degC  RMSE %.3f degC\n",
                    train_strategy.c_str(), train_learner.c_str(), train_scenario.c_str(),
                    100.0 * report.avg_mape_fraction, report.avg_mae_c, report.avg_rmse_c);
        return 0;
    }
    if (eval_cmd->parsed() || sweep_cmd->parsed()) {
        const std::string data_path = eval_cmd->parsed() ? eval_data : sweep_data;
        const TimeSeriesFrame data =
            data_path.empty() ? generate_dataset(world_from_config(cfg, seed))
                              : load_data(data_path);
        ExperimentPlan plan = plan_from_config(cfg, out_dir);
        if (eval_quick) {
            plan.scenarios = {ScenarioId::WBR};
            plan.strategies = {HybridStrategy::Residual};
            plan.learners = {LearnerKind::Linear};
            plan.seeds = {1, 2};
        }
        if (sweep_cmd->parsed()) {
            plan.scenarios = {ScenarioId::WBR};
            plan.strategies = {HybridStrategy::Residual};
            const auto reports = run_data_quantity_sweep(plan, data);
            std::printf("sweep: %zu cells -> %s/sweep.csv\n", reports.size(), out_dir.c_str());
        } else {
            const auto reports = run_scenario_matrix(plan, data);
            std::printf("matrix: %zu cells -> %s/metrics.csv\n", reports.size(),
                        out_dir.c_str());
        }
        return 0;
    }
    if (explain_cmd->parsed()) {
        const HybridModel model = load_bundle(explain_bundle);
        const TimeSeriesFrame raw = load_data(explain_data);
        const PreparedData data = prepare_dataset(raw, 15, 0);
        ExplainStudyOptions options;
        options.n_samples = explain_samples;
        options.n_permutations = explain_perms;
        options.background_size = explain_background;
        options.n_clusters = explain_clusters;
        options.seed = seed;
        options.out_dir = out_dir;
        const auto files = run_explain_study({model}, data, options);
        for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
