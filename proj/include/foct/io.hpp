#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "foct/controllers.hpp"
#include "foct/fuzzy.hpp"
#include "foct/ga.hpp"
#include "foct/plants.hpp"
#include "foct/simloop.hpp"

namespace foct {

using json = nlohmann::json;

#ifndef FOCT_DATA_DIR
#define FOCT_DATA_DIR "data"
#endif

inline std::string default_data_dir() { return FOCT_DATA_DIR; }

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

// ---------------------------------------------------------------------------
// plants and scenarios

inline PlantModel parse_plant(const json& j) {
    const std::string variant = j.at("variant").get<std::string>();
    const json coeff = j.value("coefficients", json::object());
    if (variant == "nonlinear_p1") {
        NonlinearPlantConfig cfg;
        cfg.damping = coeff.value("damping", cfg.damping);
        cfg.nonlinear = coeff.value("nonlinear", cfg.nonlinear);
        cfg.delay = j.value("delay_s", cfg.delay);
        return cfg;
    }
    if (variant == "delayed_lti") {
        DelayedLtiConfig cfg;
        if (coeff.contains("num")) cfg.num = coeff.at("num").get<std::vector<double>>();
        if (coeff.contains("den")) cfg.den = coeff.at("den").get<std::vector<double>>();
        cfg.delay = j.value("delay_s", cfg.delay);
        return cfg;
    }
    throw std::invalid_argument("plant variant must be nonlinear_p1 or delayed_lti, got " +
                                variant);
}

inline json plant_to_json(const PlantModel& m) {
    json j;
    j["variant"] = std::string(variant_name(m));
    if (const auto* nl = std::get_if<NonlinearPlantConfig>(&m)) {
        j["coefficients"] = {{"damping", nl->damping}, {"nonlinear", nl->nonlinear}};
        j["delay_s"] = nl->delay;
    } else {
        const auto& lti = std::get<DelayedLtiConfig>(m);
        j["coefficients"] = {{"num", lti.num}, {"den", lti.den}};
        j["delay_s"] = lti.delay;
    }
    return j;
}

inline Scenario parse_scenario(const json& j, const PlantModel& plant) {
    Scenario sc = tuning_scenario_for(plant);
    sc.horizon = j.value("horizon_s", sc.horizon);
    sc.sample_time = j.value("sample_time_s", sc.sample_time);
    sc.blowup_threshold = j.value("blowup_threshold", sc.blowup_threshold);
    if (j.contains("setpoint")) {
        sc.setpoint.amplitude = j.at("setpoint").value("amplitude", 1.0);
        sc.setpoint.start_time = j.at("setpoint").value("start_s", 0.0);
    }
    if (j.contains("disturbance") && !j.at("disturbance").is_null()) {
        StepSignal d;
        d.amplitude = j.at("disturbance").value("amplitude", 1.0);
        d.start_time = j.at("disturbance").value("start_s", sc.horizon / 2.0);
        sc.disturbance = d;
    }
    sc.validate();
    return sc;
}

inline json scenario_to_json(const Scenario& sc) {
    json j;
    j["horizon_s"] = sc.horizon;
    j["sample_time_s"] = sc.sample_time;
    j["setpoint"] = {{"amplitude", sc.setpoint.amplitude}, {"start_s", sc.setpoint.start_time}};
    if (sc.disturbance)
        j["disturbance"] = {{"amplitude", sc.disturbance->amplitude},
                            {"start_s", sc.disturbance->start_time}};
    j["blowup_threshold"] = sc.blowup_threshold;
    return j;
}

// ---------------------------------------------------------------------------
// controller parameter documents: {kind, params:{...}, sample_time}

inline ControllerParams parse_controller_params(const json& j) {
    const ControllerKind kind = controller_kind_from_string(j.at("kind").get<std::string>());
    const json p = j.at("params");
    ControllerParams out;
    switch (kind) {
        case ControllerKind::pid:
            out = PidParams{p.at("kp"), p.at("ki"), p.at("kd")};
            break;
        case ControllerKind::fopid:
            out = FopidParams{p.at("kp"), p.at("ki"), p.at("kd"), p.at("lambda"), p.at("mu")};
            break;
        case ControllerKind::fuzzy_pid:
            out = FuzzyPidParams{p.at("ke"), p.at("kd"), p.at("alpha"), p.at("beta")};
            break;
        case ControllerKind::fuzzy_fopid:
            out = FuzzyFopidParams{p.at("ke"),    p.at("kd"),     p.at("alpha"),
                                   p.at("beta"),  p.at("lambda"), p.at("mu")};
            break;
    }
    validate(out);
    return out;
}

inline json controller_params_to_json(const ControllerParams& params, double sample_time) {
    json p;
    std::visit(
        [&p](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, PidParams>) {
                p = {{"kp", v.kp}, {"ki", v.ki}, {"kd", v.kd}};
            } else if constexpr (std::is_same_v<T, FopidParams>) {
                p = {{"kp", v.kp}, {"ki", v.ki}, {"kd", v.kd}, {"lambda", v.lambda}, {"mu", v.mu}};
            } else if constexpr (std::is_same_v<T, FuzzyPidParams>) {
                p = {{"ke", v.ke}, {"kd", v.kd}, {"alpha", v.alpha}, {"beta", v.beta}};
            } else {
                p = {{"ke", v.ke},     {"kd", v.kd},         {"alpha", v.alpha},
                     {"beta", v.beta}, {"lambda", v.lambda}, {"mu", v.mu}};
            }
        },
        params);
    return json{{"kind", to_string(kind_of(params))}, {"params", p}, {"sample_time", sample_time}};
}

// ---------------------------------------------------------------------------
// objectives, GA configuration, tuning runs

inline ObjectiveSpec parse_objective(const json& j) {
    ObjectiveSpec spec;
    if (j.contains("index")) spec.index = index_kind_from_string(j.at("index").get<std::string>());
    spec.w1 = j.value("w1", spec.w1);
    spec.w2 = j.value("w2", spec.w2);
    spec.penalty = j.value("penalty", spec.penalty);
    spec.validate();
    return spec;
}

inline json objective_to_json(const ObjectiveSpec& spec) {
    return {{"index", to_string(spec.index)},
            {"w1", spec.w1},
            {"w2", spec.w2},
            {"penalty", spec.penalty}};
}

// Search box per controller kind: classical gains and the fuzzy output
// gains in [0, 100]; the fuzzy input scaling factors are restricted to
// unity so the inference always runs inside the designed universe of
// discourse; lambda in [1e-3, 2], mu in [0, 2 - 1e-3].
inline GaBounds default_bounds(ControllerKind kind) {
    GaBounds b;
    const auto range = [&b](int n, double hi) {
        for (int i = 0; i < n; ++i) {
            b.lower.push_back(0.0);
            b.upper.push_back(hi);
        }
    };
    const auto orders = [&b]() {
        b.lower.push_back(1e-3);
        b.upper.push_back(2.0);
        b.lower.push_back(0.0);
        b.upper.push_back(2.0 - 1e-3);
    };
    switch (kind) {
        case ControllerKind::pid: range(3, 100.0); break;
        case ControllerKind::fopid: range(3, 100.0); orders(); break;
        case ControllerKind::fuzzy_pid:
            range(2, 1.0);
            range(2, 100.0);
            break;
        case ControllerKind::fuzzy_fopid:
            range(2, 1.0);
            range(2, 100.0);
            orders();
            break;
    }
    return b;
}

inline GaConfig parse_ga_config(const json& j) {
    GaConfig cfg;
    cfg.population_size = j.value("population", cfg.population_size);
    cfg.elite_count = j.value("elite", cfg.elite_count);
    cfg.crossover_fraction = j.value("crossover_fraction", cfg.crossover_fraction);
    cfg.max_generations = j.value("max_generations", cfg.max_generations);
    cfg.stall_tolerance = j.value("stall_tolerance", cfg.stall_tolerance);
    cfg.stall_window = j.value("stall_window", cfg.stall_window);
    cfg.mutation_scale = j.value("mutation_scale", cfg.mutation_scale);
    cfg.mutation_shrink = j.value("mutation_shrink", cfg.mutation_shrink);
    cfg.threads = j.value("threads", cfg.threads);
    return cfg;
}

struct TuningSpec {
    PlantModel plant;
    ControllerKind controller = ControllerKind::fuzzy_fopid;
    ObjectiveSpec objective;
    Scenario scenario;
    GaConfig ga;
    FrequencyBand band;
};

inline TuningSpec parse_tuning_spec(const json& j) {
    TuningSpec spec;
    spec.plant = parse_plant(j.at("plant"));
    spec.controller = controller_kind_from_string(j.at("controller").get<std::string>());
    if (j.contains("objective")) spec.objective = parse_objective(j.at("objective"));
    spec.scenario = parse_scenario(j.value("scenario", json::object()), spec.plant);
    spec.ga = parse_ga_config(j.value("ga", json::object()));
    spec.ga.seed = j.value("seed", std::uint64_t{0});
    spec.ga.bounds = default_bounds(spec.controller);
    if (j.contains("bounds")) {
        spec.ga.bounds.lower = j.at("bounds").at("lower").get<std::vector<double>>();
        spec.ga.bounds.upper = j.at("bounds").at("upper").get<std::vector<double>>();
    }
    if (spec.ga.bounds.dimension() != parameter_count(spec.controller))
        throw std::invalid_argument("bounds dimension does not match the controller kind");
    spec.ga.bounds.validate();
    return spec;
}

inline json ga_result_to_json(const GaResult& r) {
    return {{"best_genes", r.best_genes},
            {"best_j", r.best_score},
            {"generations", r.generations},
            {"termination", r.reason == GaTermination::stall ? "stall" : "max_generations"}};
}

inline json report_to_json(const PerformanceReport& rep) {
    return {{"ITAE", rep.itae},   {"ITSE", rep.itse},
            {"ISTES", rep.istes}, {"ISTSE", rep.istse},
            {"ISCO", rep.isco},   {"IAE", rep.iae},
            {"ISE", rep.ise},     {"overshoot_pct", rep.overshoot_pct},
            {"settling_time_s", rep.settling_time}};
}

// ---------------------------------------------------------------------------
// fuzzy engine configuration: labels, centers, 7x7 table of label names in
// the printed orientation (first row = rate PL, columns = error NL..PL)

inline FuzzyEngine parse_fuzzy_engine(const json& j) {
    std::array<std::string, 7> labels;
    if (j.contains("labels")) {
        const auto names = j.at("labels").get<std::vector<std::string>>();
        if (names.size() != 7) throw std::invalid_argument("fuzzy config needs 7 labels");
        for (std::size_t i = 0; i < 7; ++i) labels[i] = names[i];
    } else {
        for (std::size_t i = 0; i < 7; ++i) labels[i] = kLabelNames[i];
    }
    const auto label_index = [&labels](const std::string& name) {
        for (std::size_t i = 0; i < 7; ++i)
            if (labels[i] == name) return static_cast<Label>(i);
        throw std::invalid_argument("unknown fuzzy label: " + name);
    };

    LinguisticPartition part = standard_partition();
    if (j.contains("centers")) {
        const auto c = j.at("centers").get<std::vector<double>>();
        if (c.size() != 7) throw std::invalid_argument("fuzzy config needs 7 centers");
        std::array<double, 7> centers;
        std::copy(c.begin(), c.end(), centers.begin());
        part = partition_from_centers(centers);
    }

    RuleBase rules = standard_rule_base();
    if (j.contains("table")) {
        const auto grid = j.at("table").get<std::vector<std::vector<std::string>>>();
        if (grid.size() != 7) throw std::invalid_argument("fuzzy table must be 7x7");
        std::array<std::array<Label, 7>, 7> printed;
        for (std::size_t r = 0; r < 7; ++r) {
            if (grid[r].size() != 7) throw std::invalid_argument("fuzzy table must be 7x7");
            for (std::size_t c = 0; c < 7; ++c) printed[r][c] = label_index(grid[r][c]);
        }
        rules = RuleBase::from_printed_grid(printed);
    }

    const int grid_points = j.value("grid_points", 1001);
    return FuzzyEngine(part, part, part, rules, grid_points);
}

// ---------------------------------------------------------------------------
// bundled reference parameter sets (per benchmark table)

struct ReferenceRow {
    ControllerKind controller;
    IndexKind index;
    double j_published = 0.0;
    std::vector<double> params;
};

struct ReferenceTable {
    int id = 0;
    PlantModel plant;
    std::vector<ReferenceRow> rows;
};

inline ReferenceTable load_reference_table(const std::string& path) {
    const json j = read_json_file(path);
    ReferenceTable table;
    table.id = j.at("table").get<int>();
    table.plant = parse_plant(j.at("plant"));
    for (const auto& row : j.at("rows")) {
        ReferenceRow r;
        r.controller = controller_kind_from_string(row.at("controller").get<std::string>());
        r.index = index_kind_from_string(row.at("index").get<std::string>());
        r.j_published = row.at("j_published").get<double>();
        r.params = row.at("params").get<std::vector<double>>();
        if (r.params.size() != parameter_count(r.controller))
            throw std::invalid_argument("reference row has wrong parameter count in " + path);
        table.rows.push_back(std::move(r));
    }
    return table;
}

inline ReferenceTable load_reference_table(int id, const std::string& data_dir) {
    return load_reference_table(data_dir + "/tables/table" + std::to_string(id) + ".json");
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_trace_csv(const std::string& path, const SimulationTrace& tr) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,r,y,e,u\n";
    for (std::size_t k = 0; k < tr.size(); ++k)
        out << format_full(tr.t[k]) << ',' << format_full(tr.r[k]) << ','
            << format_full(tr.y[k]) << ',' << format_full(tr.e[k]) << ','
            << format_full(tr.u[k]) << '\n';
}

inline SimulationTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,r,y,e,u", 0) != 0)
        throw std::runtime_error("not a trace CSV: " + path);
    SimulationTrace tr;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string cell;
        std::array<double, 5> v{};
        for (auto& x : v) {
            if (!std::getline(ss, cell, ',')) throw std::runtime_error("short row in " + path);
            x = std::stod(cell);
        }
        tr.t.push_back(v[0]);
        tr.r.push_back(v[1]);
        tr.y.push_back(v[2]);
        tr.e.push_back(v[3]);
        tr.u.push_back(v[4]);
    }
    return tr;
}

inline void write_history_csv(const std::string& path, const GaResult& r) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "generation,best_j,mean_j\n";
    for (std::size_t g = 0; g < r.best_history.size(); ++g)
        out << g << ',' << format_full(r.best_history[g]) << ','
            << format_full(r.mean_history[g]) << '\n';
}

}  // namespace foct
