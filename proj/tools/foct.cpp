// foct: batch CLI for fractional-order fuzzy control experiments.
//
//   foct tune       GA-tune a controller and dump result, history and trace
//   foct simulate   run a closed loop and dump trace + performance report
//   foct reproduce  re-evaluate a bundled reference table of parameter sets
//   foct bode       frequency response of a fractional element, continuous
//                   and discretized

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "foct/fracops.hpp"
#include "foct/ga.hpp"
#include "foct/io.hpp"
#include "foct/simloop.hpp"

namespace fs = std::filesystem;
using namespace foct;

namespace {

struct CommonOpts {
    std::string out_dir = ".";
    double horizon = -1.0;      // <0: keep the document/default value
    double step = -1.0;
    std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out", opts.out_dir, "output directory");
    cmd->add_option("--horizon", opts.horizon, "simulation horizon override [s]");
    cmd->add_option("--step", opts.step, "sample time override [s]");
    cmd->add_option("--seed", opts.seed, "RNG seed override");
}

void apply_overrides(Scenario& sc, const CommonOpts& opts) {
    if (opts.horizon > 0.0) {
        sc.horizon = opts.horizon;
        if (sc.disturbance) sc.disturbance->start_time = sc.horizon / 2.0;
    }
    if (opts.step > 0.0) sc.sample_time = opts.step;
    sc.validate();
}

fs::path ensure_out_dir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

int run_tune(const std::string& spec_path, const CommonOpts& opts, int threads) {
    TuningSpec spec = parse_tuning_spec(read_json_file(spec_path));
    apply_overrides(spec.scenario, opts);
    spec.scenario.disturbance.reset();  // tuning always runs the bare setpoint step
    if (opts.seed >= 0) spec.ga.seed = static_cast<std::uint64_t>(opts.seed);
    if (threads >= 0) spec.ga.threads = threads;

    const auto objective = [&spec](std::span<const double> genes) {
        return evaluate_objective(genes, spec.controller, spec.plant, spec.objective,
                                  spec.scenario, spec.band);
    };
    const GaResult result = ga_minimize(objective, spec.ga);

    const fs::path out = ensure_out_dir(opts.out_dir);
    const ControllerParams best = decode_parameter_vector(spec.controller, result.best_genes);
    write_text_file((out / "best_params.json").string(),
                    controller_params_to_json(best, spec.scenario.sample_time).dump(2) + "\n");
    write_text_file((out / "ga_result.json").string(), ga_result_to_json(result).dump(2) + "\n");
    write_history_csv((out / "history.csv").string(), result);

    // evaluation run of the winner: same scenario plus the load disturbance
    Scenario eval = spec.scenario;
    eval.disturbance = StepSignal{1.0, eval.horizon / 2.0};
    ControllerBlock controller(best, eval.sample_time, spec.band);
    Plant plant(spec.plant, eval.sample_time, eval.blowup_threshold);
    const SimulationTrace tr = run_closed_loop(controller, plant, eval);
    write_trace_csv((out / "best_trace.csv").string(), tr);
    json report = tr.diverged
                      ? json{{"diverged", true}, {"divergence_time_s", tr.divergence_time}}
                      : report_to_json(compute_indices(tr));
    report["best_j"] = result.best_score;
    write_text_file((out / "best_report.json").string(), report.dump(2) + "\n");

    std::cout << "best J = " << result.best_score << " after " << result.generations
              << " generations ("
              << (result.reason == GaTermination::stall ? "stall" : "max generations")
              << ")\n";
    return 0;
}

int run_simulate(const std::string& scenario_path, const std::string& params_path,
                 const std::string& fuzzy_path, const CommonOpts& opts) {
    const json sj = read_json_file(scenario_path);
    const PlantModel plant = parse_plant(sj.at("plant"));
    Scenario sc = parse_scenario(sj, plant);
    apply_overrides(sc, opts);

    std::shared_ptr<const FuzzyEngine> engine;
    if (!fuzzy_path.empty())
        engine = std::make_shared<const FuzzyEngine>(parse_fuzzy_engine(read_json_file(fuzzy_path)));
    const ControllerParams params = parse_controller_params(read_json_file(params_path));
    ControllerBlock controller(params, sc.sample_time, FrequencyBand{}, engine);
    Plant sim(plant, sc.sample_time, sc.blowup_threshold);
    const SimulationTrace tr = run_closed_loop(controller, sim, sc);

    const fs::path out = ensure_out_dir(opts.out_dir);
    write_trace_csv((out / "trace.csv").string(), tr);
    json report;
    if (tr.diverged) {
        report = {{"diverged", true}, {"divergence_time_s", tr.divergence_time}};
        std::cout << "loop diverged at t = " << tr.divergence_time << " s\n";
    } else {
        report = report_to_json(compute_indices(tr));
        report["diverged"] = false;
        std::cout << "ITAE = " << report["ITAE"] << ", ISCO = " << report["ISCO"] << "\n";
    }
    write_text_file((out / "report.json").string(), report.dump(2) + "\n");
    return 0;
}

int run_reproduce(int table_id, const std::string& data_dir, const CommonOpts& opts) {
    const ReferenceTable table = load_reference_table(table_id, data_dir);
    Scenario sc = tuning_scenario_for(table.plant);
    apply_overrides(sc, opts);

    const fs::path out = ensure_out_dir(opts.out_dir);
    const fs::path csv_path = out / ("reproduce_table" + std::to_string(table_id) + ".csv");
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    csv << "controller,index,J_paper,J_ours,rel_diff\n";
    for (const auto& row : table.rows) {
        const ObjectiveSpec objective{.index = row.index};
        const double j = evaluate_objective(row.params, row.controller, table.plant,
                                            objective, sc);
        const double rel = (j - row.j_published) / row.j_published;
        csv << to_string(row.controller) << ',' << to_string(row.index) << ','
            << format_full(row.j_published) << ',' << format_full(j) << ','
            << format_full(rel) << '\n';
        std::cout << to_string(row.controller) << " " << to_string(row.index)
                  << ": J_paper = " << row.j_published << ", J_ours = " << j << " ("
                  << (rel >= 0 ? "+" : "") << rel * 100.0 << "%)\n";
    }
    std::cout << "wrote " << csv_path.string() << "\n";
    return 0;
}

int run_bode(double order, double band_low, double band_high, int sections, double step,
             int points, const CommonOpts& opts) {
    const OustaloupFilter filt = synthesize_oustaloup(order, band_low, band_high, sections);
    const DiscreteFilter disc = discretize(filt, step);

    const fs::path out = ensure_out_dir(opts.out_dir);
    const fs::path csv_path = out / "bode.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("cannot write " + csv_path.string());
    csv << "omega_rad_s,mag_db,phase_deg,disc_mag_db,disc_phase_deg\n";
    const double nyquist = std::numbers::pi / step;
    const double lo = std::log10(band_low / 10.0);
    const double hi = std::log10(std::min(band_high * 10.0, 0.99 * nyquist));
    for (int i = 0; i < points; ++i) {
        const double w = std::pow(10.0, lo + (hi - lo) * i / (points - 1));
        const auto gc = frequency_response(filt, w);
        const auto gd = disc.response(w);
        csv << format_full(w) << ',' << format_full(20.0 * std::log10(std::abs(gc))) << ','
            << format_full(std::arg(gc) * 180.0 / std::numbers::pi) << ','
            << format_full(20.0 * std::log10(std::abs(gd))) << ','
            << format_full(std::arg(gd) * 180.0 / std::numbers::pi) << '\n';
    }
    std::cout << "wrote " << csv_path.string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional-order fuzzy control toolkit"};
    app.require_subcommand(1);

    CommonOpts tune_opts, sim_opts, rep_opts, bode_opts;

    std::string tune_spec;
    int tune_threads = -1;
    auto* tune = app.add_subcommand("tune", "GA-tune a controller from a run specification");
    tune->add_option("--scenario", tune_spec, "tuning run specification (JSON)")->required();
    tune->add_option("--threads", tune_threads, "objective evaluation threads (0 = auto)");
    add_common(tune, tune_opts);

    std::string sim_scenario, sim_params, sim_fuzzy;
    auto* sim = app.add_subcommand("simulate", "run one closed loop and export the trace");
    sim->add_option("--scenario", sim_scenario, "scenario document (JSON)")->required();
    sim->add_option("--params", sim_params, "controller parameter document (JSON)")->required();
    sim->add_option("--fuzzy", sim_fuzzy, "custom fuzzy engine document (JSON)");
    add_common(sim, sim_opts);

    int table_id = 1;
    std::string data_dir = default_data_dir();
    auto* rep = app.add_subcommand("reproduce",
                                   "re-evaluate a bundled table of published parameter sets");
    rep->add_option("--table", table_id, "table id (1-4)")->required()->check(CLI::Range(1, 4));
    rep->add_option("--data", data_dir, "data directory with tables/");
    add_common(rep, rep_opts);

    double order = 0.5, band_low = 1e-2, band_high = 1e2, bode_step = 1e-3;
    int sections = 2, points = 200;
    auto* bode = app.add_subcommand("bode", "frequency response of s^order");
    bode->add_option("--order", order, "fractional order in (-1, 1)")->required();
    bode->add_option("--band-low", band_low, "lower band edge [rad/s]");
    bode->add_option("--band-high", band_high, "upper band edge [rad/s]");
    bode->add_option("--sections", sections, "half filter order N");
    bode->add_option("--points", points, "number of frequency points");
    bode->add_option("--step", bode_step, "sample time for the discretized response [s]");
    bode->add_option("--out", bode_opts.out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tune->parsed()) return run_tune(tune_spec, tune_opts, tune_threads);
        if (sim->parsed()) return run_simulate(sim_scenario, sim_params, sim_fuzzy, sim_opts);
        if (rep->parsed()) return run_reproduce(table_id, data_dir, rep_opts);
        if (bode->parsed())
            return run_bode(order, band_low, band_high, sections, bode_step, points, bode_opts);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
