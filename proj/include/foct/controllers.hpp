#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "foct/fracops.hpp"
#include "foct/fuzzy.hpp"

namespace foct {

enum class ControllerKind { pid, fopid, fuzzy_pid, fuzzy_fopid };

inline const char* to_string(ControllerKind k) {
    switch (k) {
        case ControllerKind::pid: return "pid";
        case ControllerKind::fopid: return "fopid";
        case ControllerKind::fuzzy_pid: return "fuzzy_pid";
        case ControllerKind::fuzzy_fopid: return "fuzzy_fopid";
    }
    return "?";
}

inline ControllerKind controller_kind_from_string(std::string_view s) {
    if (s == "pid") return ControllerKind::pid;
    if (s == "fopid") return ControllerKind::fopid;
    if (s == "fuzzy_pid") return ControllerKind::fuzzy_pid;
    if (s == "fuzzy_fopid") return ControllerKind::fuzzy_fopid;
    throw std::invalid_argument("unknown controller kind: " + std::string(s));
}

struct PidParams {
    double kp = 0.0, ki = 0.0, kd = 0.0;
};

// C(s) = Kp + Ki / s^lambda + Kd s^mu
struct FopidParams {
    double kp = 0.0, ki = 0.0, kd = 0.0;
    double lambda = 1.0;
    double mu = 1.0;
};

struct FuzzyPidParams {
    double ke = 0.0;     // error scaling factor
    double kd = 0.0;     // error-rate scaling factor
    double alpha = 0.0;  // direct output gain
    double beta = 0.0;   // integrated output gain
};

struct FuzzyFopidParams {
    double ke = 0.0, kd = 0.0, alpha = 0.0, beta = 0.0;
    double lambda = 1.0;  // output integral order
    double mu = 1.0;      // input derivative order
};

using ControllerParams =
    std::variant<PidParams, FopidParams, FuzzyPidParams, FuzzyFopidParams>;

inline ControllerKind kind_of(const ControllerParams& p) {
    switch (p.index()) {
        case 0: return ControllerKind::pid;
        case 1: return ControllerKind::fopid;
        case 2: return ControllerKind::fuzzy_pid;
        default: return ControllerKind::fuzzy_fopid;
    }
}

inline std::size_t parameter_count(ControllerKind k) {
    switch (k) {
        case ControllerKind::pid: return 3;
        case ControllerKind::fopid: return 5;
        case ControllerKind::fuzzy_pid: return 4;
        case ControllerKind::fuzzy_fopid: return 6;
    }
    return 0;
}

namespace detail {

inline void check_gain(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
        throw std::invalid_argument(std::string(name) + " must be finite and non-negative");
}

inline void check_orders(double lambda, double mu) {
    if (!std::isfinite(lambda) || lambda <= 0.0 || lambda > 2.0)
        throw std::invalid_argument("lambda must lie in (0, 2]");
    if (!std::isfinite(mu) || mu < 0.0 || mu >= 2.0)
        throw std::invalid_argument("mu must lie in [0, 2)");
}

}  // namespace detail

inline void validate(const ControllerParams& params) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PidParams>) {
                detail::check_gain(p.kp, "kp");
                detail::check_gain(p.ki, "ki");
                detail::check_gain(p.kd, "kd");
            } else if constexpr (std::is_same_v<T, FopidParams>) {
                detail::check_gain(p.kp, "kp");
                detail::check_gain(p.ki, "ki");
                detail::check_gain(p.kd, "kd");
                detail::check_orders(p.lambda, p.mu);
            } else if constexpr (std::is_same_v<T, FuzzyPidParams>) {
                detail::check_gain(p.ke, "ke");
                detail::check_gain(p.kd, "kd");
                detail::check_gain(p.alpha, "alpha");
                detail::check_gain(p.beta, "beta");
            } else {
                detail::check_gain(p.ke, "ke");
                detail::check_gain(p.kd, "kd");
                detail::check_gain(p.alpha, "alpha");
                detail::check_gain(p.beta, "beta");
                detail::check_orders(p.lambda, p.mu);
            }
        },
        params);
}

// Gene layout follows the optimization-variable order: gains first, then
// {lambda, mu} for the fractional variants.
inline ControllerParams decode_parameter_vector(ControllerKind kind,
                                                std::span<const double> raw) {
    if (raw.size() != parameter_count(kind))
        throw std::invalid_argument("parameter vector has wrong dimension for " +
                                    std::string(to_string(kind)));
    ControllerParams out;
    switch (kind) {
        case ControllerKind::pid:
            out = PidParams{raw[0], raw[1], raw[2]};
            break;
        case ControllerKind::fopid:
            out = FopidParams{raw[0], raw[1], raw[2], raw[3], raw[4]};
            break;
        case ControllerKind::fuzzy_pid:
            out = FuzzyPidParams{raw[0], raw[1], raw[2], raw[3]};
            break;
        case ControllerKind::fuzzy_fopid:
            out = FuzzyFopidParams{raw[0], raw[1], raw[2], raw[3], raw[4], raw[5]};
            break;
    }
    validate(out);
    return out;
}

inline std::vector<double> encode_parameters(const ControllerParams& params) {
    return std::visit(
        [](const auto& p) -> std::vector<double> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, PidParams>)
                return {p.kp, p.ki, p.kd};
            else if constexpr (std::is_same_v<T, FopidParams>)
                return {p.kp, p.ki, p.kd, p.lambda, p.mu};
            else if constexpr (std::is_same_v<T, FuzzyPidParams>)
                return {p.ke, p.kd, p.alpha, p.beta};
            else
                return {p.ke, p.kd, p.alpha, p.beta, p.lambda, p.mu};
        },
        params);
}

// One immutable engine shared by every fuzzy controller instance.
inline std::shared_ptr<const FuzzyEngine> shared_standard_engine() {
    static const std::shared_ptr<const FuzzyEngine> engine =
        std::make_shared<const FuzzyEngine>(FuzzyEngine::standard());
    return engine;
}

// Discrete-time realization of the four controller structures. The fuzzy
// pipeline is: rate = D^mu[e]; x1 = clamp(Ke*e); x2 = clamp(Kd*rate);
// u_flc = engine(x1, x2); u = alpha*u_flc + beta*I^lambda[u_flc].
// Integer-order variants run the same exact integer blocks the order split
// produces at lambda = mu = 1, so the (1,1) reductions match bit for bit.
class ControllerBlock {
public:
    ControllerBlock(ControllerParams params, double sample_time,
                    FrequencyBand band = {},
                    std::shared_ptr<const FuzzyEngine> engine = nullptr)
        : params_(std::move(params)), h_(sample_time) {
        if (!(sample_time > 0.0))
            throw std::invalid_argument("ControllerBlock: sample_time must be positive");
        validate(params_);
        switch (kind_of(params_)) {
            case ControllerKind::pid:
            case ControllerKind::fuzzy_pid:
                int_i_.emplace(h_);
                int_d_.emplace(h_);
                break;
            case ControllerKind::fopid: {
                const auto& p = std::get<FopidParams>(params_);
                frac_i_.emplace(-p.lambda, h_, band);
                frac_d_.emplace(p.mu, h_, band);
                break;
            }
            case ControllerKind::fuzzy_fopid: {
                const auto& p = std::get<FuzzyFopidParams>(params_);
                frac_i_.emplace(-p.lambda, h_, band);
                frac_d_.emplace(p.mu, h_, band);
                break;
            }
        }
        if (kind() == ControllerKind::fuzzy_pid || kind() == ControllerKind::fuzzy_fopid)
            engine_ = engine ? std::move(engine) : shared_standard_engine();
    }

    ControllerKind kind() const { return kind_of(params_); }
    const ControllerParams& params() const { return params_; }
    double sample_time() const { return h_; }

    double step(double e) {
        switch (kind()) {
            case ControllerKind::pid: {
                const auto& p = std::get<PidParams>(params_);
                return p.kp * e + p.ki * int_i_->step(e) + p.kd * int_d_->step(e);
            }
            case ControllerKind::fopid: {
                const auto& p = std::get<FopidParams>(params_);
                return p.kp * e + p.ki * frac_i_->step(e) + p.kd * frac_d_->step(e);
            }
            case ControllerKind::fuzzy_pid: {
                const auto& p = std::get<FuzzyPidParams>(params_);
                const double rate = int_d_->step(e);
                const double uf = engine_->evaluate(std::clamp(p.ke * e, -1.0, 1.0),
                                                    std::clamp(p.kd * rate, -1.0, 1.0));
                return p.alpha * uf + p.beta * int_i_->step(uf);
            }
            case ControllerKind::fuzzy_fopid: {
                const auto& p = std::get<FuzzyFopidParams>(params_);
                const double rate = frac_d_->step(e);
                const double uf = engine_->evaluate(std::clamp(p.ke * e, -1.0, 1.0),
                                                    std::clamp(p.kd * rate, -1.0, 1.0));
                return p.alpha * uf + p.beta * frac_i_->step(uf);
            }
        }
        return 0.0;
    }

    void reset() {
        if (int_i_) int_i_->reset();
        if (int_d_) int_d_->reset();
        if (frac_i_) frac_i_->reset();
        if (frac_d_) frac_d_->reset();
    }

private:
    ControllerParams params_;
    double h_;
    std::shared_ptr<const FuzzyEngine> engine_;
    std::optional<TrapezoidIntegrator> int_i_;
    std::optional<BackwardDifference> int_d_;
    std::optional<DiscreteOperator> frac_i_, frac_d_;
};

}  // namespace foct
