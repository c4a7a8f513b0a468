#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "foct/controllers.hpp"
#include "foct/plants.hpp"

namespace foct {

struct StepSignal {
    double amplitude = 1.0;
    double start_time = 0.0;

    double at(double t) const { return t >= start_time ? amplitude : 0.0; }
};

// Closed-loop experiment description. Tuning scenarios leave the
// disturbance disabled; evaluation scenarios enable it halfway through
// the horizon by default.
struct Scenario {
    double horizon = 40.0;
    double sample_time = 0.01;
    StepSignal setpoint{1.0, 0.0};
    std::optional<StepSignal> disturbance;
    double blowup_threshold = 1e6;

    void validate() const {
        if (!(sample_time > 0.0) || !(horizon > sample_time))
            throw std::invalid_argument("Scenario: need 0 < sample_time < horizon");
        if (disturbance && !(disturbance->start_time < horizon))
            throw std::invalid_argument("Scenario: disturbance must start inside the horizon");
    }
};

// Benchmark defaults: 40 s horizon for both plants, 10 ms step for the
// nonlinear process and 5 ms for the faster unstable one.
inline Scenario tuning_scenario_for(const PlantModel& model) {
    Scenario sc;
    sc.sample_time = std::holds_alternative<NonlinearPlantConfig>(model) ? 0.01 : 0.005;
    sc.horizon = 40.0;
    return sc;
}

inline Scenario evaluation_scenario_for(const PlantModel& model) {
    Scenario sc = tuning_scenario_for(model);
    sc.disturbance = StepSignal{1.0, sc.horizon / 2.0};
    return sc;
}

struct SimulationTrace {
    std::vector<double> t, r, y, e, u;
    bool diverged = false;
    double divergence_time = std::numeric_limits<double>::quiet_NaN();

    std::size_t size() const { return t.size(); }
};

enum class IndexKind { itae, itse, istes, istse };

inline const char* to_string(IndexKind k) {
    switch (k) {
        case IndexKind::itae: return "ITAE";
        case IndexKind::itse: return "ITSE";
        case IndexKind::istes: return "ISTES";
        case IndexKind::istse: return "ISTSE";
    }
    return "?";
}

inline IndexKind index_kind_from_string(std::string_view s) {
    if (s == "ITAE" || s == "itae") return IndexKind::itae;
    if (s == "ITSE" || s == "itse") return IndexKind::itse;
    if (s == "ISTES" || s == "istes") return IndexKind::istes;
    if (s == "ISTSE" || s == "istse") return IndexKind::istse;
    throw std::invalid_argument("unknown performance index: " + std::string(s));
}

// J = w1 * <error index> + w2 * ISCO, with the fixed penalty returned for
// any run that trips the stability monitor.
struct ObjectiveSpec {
    IndexKind index = IndexKind::itae;
    double w1 = 1.0;
    double w2 = 1.0;
    double penalty = 10000.0;

    void validate() const {
        if (w1 < 0.0 || w2 < 0.0 || (w1 == 0.0 && w2 == 0.0))
            throw std::invalid_argument("ObjectiveSpec: weights must be >= 0, not both zero");
        if (!(penalty > 0.0))
            throw std::invalid_argument("ObjectiveSpec: penalty must be positive");
    }
};

struct PerformanceReport {
    double itae = 0.0, itse = 0.0, istes = 0.0, istse = 0.0;
    double isco = 0.0, iae = 0.0, ise = 0.0;
    double overshoot_pct = 0.0;
    double settling_time = 0.0;  // 2% band, against the final setpoint
};

inline double index_value(const PerformanceReport& rep, IndexKind k) {
    switch (k) {
        case IndexKind::itae: return rep.itae;
        case IndexKind::itse: return rep.itse;
        case IndexKind::istes: return rep.istes;
        case IndexKind::istse: return rep.istse;
    }
    return 0.0;
}

// Sample the loop: read y_k, form e_k, apply the controller, then advance
// the plant with u_k plus the disturbance. Aborts as soon as either the
// controller output or the plant state leaves the blow-up threshold.
inline SimulationTrace run_closed_loop(ControllerBlock& controller, Plant& plant,
                                       const Scenario& sc) {
    sc.validate();
    const double h = sc.sample_time;
    const std::size_t n = static_cast<std::size_t>(std::llround(sc.horizon / h)) + 1;

    SimulationTrace tr;
    tr.t.reserve(n);
    tr.r.reserve(n);
    tr.y.reserve(n);
    tr.e.reserve(n);
    tr.u.reserve(n);

    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * h;
        const double r = sc.setpoint.at(t);
        const double y = plant.output();
        const double e = r - y;
        const double u = controller.step(e);

        tr.t.push_back(t);
        tr.r.push_back(r);
        tr.y.push_back(y);
        tr.e.push_back(e);
        tr.u.push_back(u);

        const bool blown = !std::isfinite(y) || !std::isfinite(u) ||
                           std::abs(y) > sc.blowup_threshold ||
                           std::abs(u) > sc.blowup_threshold || plant.diverged();
        if (blown) {
            tr.diverged = true;
            tr.divergence_time = t;
            break;
        }
        if (k + 1 < n) {
            const double d = sc.disturbance ? sc.disturbance->at(t) : 0.0;
            plant.step(u, d);
        }
    }
    if (!tr.diverged && plant.diverged()) {
        tr.diverged = true;
        tr.divergence_time = tr.t.back();
    }
    return tr;
}

// Trapezoidal quadrature of the index integrands over the trace grid.
inline PerformanceReport compute_indices(const SimulationTrace& tr) {
    if (tr.diverged)
        throw std::invalid_argument("compute_indices: trace diverged, report undefined");
    if (tr.size() < 2)
        throw std::invalid_argument("compute_indices: trace too short");

    PerformanceReport rep;
    auto accumulate = [&tr](auto&& integrand) {
        double acc = 0.0;
        double prev = integrand(0);
        for (std::size_t k = 1; k < tr.size(); ++k) {
            const double cur = integrand(k);
            acc += 0.5 * (tr.t[k] - tr.t[k - 1]) * (prev + cur);
            prev = cur;
        }
        return acc;
    };

    rep.itae = accumulate([&](std::size_t k) { return tr.t[k] * std::abs(tr.e[k]); });
    rep.itse = accumulate([&](std::size_t k) { return tr.t[k] * tr.e[k] * tr.e[k]; });
    rep.istes = accumulate([&](std::size_t k) {
        const double v = tr.t[k] * tr.t[k] * tr.e[k];
        return v * v;
    });
    rep.istse =
        accumulate([&](std::size_t k) { return tr.t[k] * tr.t[k] * tr.e[k] * tr.e[k]; });
    rep.isco = accumulate([&](std::size_t k) { return tr.u[k] * tr.u[k]; });
    rep.iae = accumulate([&](std::size_t k) { return std::abs(tr.e[k]); });
    rep.ise = accumulate([&](std::size_t k) { return tr.e[k] * tr.e[k]; });

    const double target = tr.r.back();
    if (target != 0.0) {
        double peak = -std::numeric_limits<double>::infinity();
        for (double y : tr.y) peak = std::max(peak, y);
        rep.overshoot_pct = std::max(0.0, (peak - target) / std::abs(target) * 100.0);
        const double band = 0.02 * std::abs(target);
        rep.settling_time = 0.0;
        for (std::size_t k = tr.size(); k-- > 0;) {
            if (std::abs(tr.y[k] - target) > band) {
                rep.settling_time = k + 1 < tr.size() ? tr.t[k + 1] : tr.t.back();
                break;
            }
        }
    }
    return rep;
}

// Fitness of one raw parameter vector: decode, simulate the tuning
// scenario, and weigh the indices. Divergent loops score exactly the
// penalty without finishing the horizon.
inline double evaluate_objective(std::span<const double> raw, ControllerKind kind,
                                 const PlantModel& plant, const ObjectiveSpec& objective,
                                 const Scenario& scenario,
                                 const FrequencyBand& band = {}) {
    objective.validate();
    ControllerBlock controller(decode_parameter_vector(kind, raw), scenario.sample_time,
                               band);
    Plant sim(plant, scenario.sample_time, scenario.blowup_threshold);
    const SimulationTrace tr = run_closed_loop(controller, sim, scenario);
    if (tr.diverged) return objective.penalty;
    const PerformanceReport rep = compute_indices(tr);
    return objective.w1 * index_value(rep, objective.index) + objective.w2 * rep.isco;
}

}  // namespace foct
