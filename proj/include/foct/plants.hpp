#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

namespace foct {

// y'' + damping*y' + nonlinear*y^2 = u(t - delay)
struct NonlinearPlantConfig {
    double damping = 1.0;
    double nonlinear = 0.25;
    double delay = 0.5;
};

// num(s)/den(s) * e^{-delay*s}, coefficients in descending powers of s,
// deg(den) >= deg(num). Default is the delayed unstable benchmark
// e^{-0.2 s} / (s - 1).
struct DelayedLtiConfig {
    std::vector<double> num{1.0};
    std::vector<double> den{1.0, -1.0};
    double delay = 0.2;
};

using PlantModel = std::variant<NonlinearPlantConfig, DelayedLtiConfig>;

inline std::string_view variant_name(const PlantModel& m) {
    return m.index() == 0 ? "nonlinear_p1" : "delayed_lti";
}

inline double plant_delay(const PlantModel& m) {
    return std::visit([](const auto& c) { return c.delay; }, m);
}

// Fixed-length ring buffer realizing u(t - L); output at step k is the
// input pushed at step k - length, zero before that.
class DelayLine {
public:
    DelayLine(double delay, double sample_time) {
        if (delay < 0.0) throw std::invalid_argument("DelayLine: negative delay");
        if (!(sample_time > 0.0))
            throw std::invalid_argument("DelayLine: sample_time must be positive");
        length_ = static_cast<std::size_t>(std::llround(delay / sample_time));
        buffer_.assign(length_, 0.0);
    }

    double push(double u) {
        if (length_ == 0) return u;
        const double out = buffer_[head_];
        buffer_[head_] = u;
        head_ = (head_ + 1) % length_;
        return out;
    }

    std::size_t length() const { return length_; }

    void reset() {
        buffer_.assign(length_, 0.0);
        head_ = 0;
    }

private:
    std::size_t length_ = 0;
    std::size_t head_ = 0;
    std::vector<double> buffer_;
};

// Plant simulator: one classical RK4 step per sample with the delayed input
// held constant across the step. Divergence latches once any state leaves
// the blow-up threshold.
class Plant {
public:
    Plant(const PlantModel& model, double sample_time, double blowup_threshold = 1e6)
        : model_(model),
          h_(sample_time),
          threshold_(blowup_threshold),
          delay_(plant_delay(model), sample_time) {
        if (!(sample_time > 0.0))
            throw std::invalid_argument("Plant: sample_time must be positive");
        if (const auto* lti = std::get_if<DelayedLtiConfig>(&model_)) {
            build_lti(*lti);
            state_.assign(lti->den.size() - 1, 0.0);
        } else {
            state_.assign(2, 0.0);  // [y, dy/dt]
        }
        k1_.resize(state_.size());
        k2_.resize(state_.size());
        k3_.resize(state_.size());
        k4_.resize(state_.size());
        tmp_.resize(state_.size());
    }

    double output() const {
        if (std::holds_alternative<NonlinearPlantConfig>(model_)) return state_[0];
        double y = feedthrough_ * last_delayed_;
        for (std::size_t i = 0; i < state_.size(); ++i) y += c_[i] * state_[i];
        return y;
    }

    // Advance one sample: u is the controller output, d an additive load
    // disturbance entering at the plant input.
    void step(double u, double d = 0.0) {
        if (diverged_) return;
        const double ud = delay_.push(u + d);
        last_delayed_ = ud;
        rk4(ud);
        t_ += h_;
        for (double v : state_) {
            if (!std::isfinite(v) || std::abs(v) > threshold_) {
                diverged_ = true;
                return;
            }
        }
    }

    bool diverged() const { return diverged_; }
    double time() const { return t_; }
    double sample_time() const { return h_; }
    std::size_t delay_samples() const { return delay_.length(); }
    std::span<const double> state() const { return state_; }

    void set_state(std::span<const double> x) {
        if (x.size() != state_.size())
            throw std::invalid_argument("Plant: state dimension mismatch");
        for (std::size_t i = 0; i < x.size(); ++i) state_[i] = x[i];
    }

    void reset() {
        state_.assign(state_.size(), 0.0);
        delay_.reset();
        t_ = 0.0;
        last_delayed_ = 0.0;
        diverged_ = false;
    }

private:
    void build_lti(const DelayedLtiConfig& cfg) {
        if (cfg.den.empty() || cfg.den.front() == 0.0)
            throw std::invalid_argument("Plant: denominator needs a nonzero leading coefficient");
        if (cfg.num.size() > cfg.den.size())
            throw std::invalid_argument("Plant: numerator degree exceeds denominator degree");
        const std::size_t n = cfg.den.size() - 1;
        if (n == 0) throw std::invalid_argument("Plant: static transfer functions not supported");
        const double lead = cfg.den.front();
        a_.resize(n);
        for (std::size_t i = 0; i < n; ++i) a_[i] = cfg.den[i + 1] / lead;
        std::vector<double> b(n + 1, 0.0);  // padded to denominator length
        const std::size_t off = cfg.den.size() - cfg.num.size();
        for (std::size_t i = 0; i < cfg.num.size(); ++i) b[off + i] = cfg.num[i] / lead;
        feedthrough_ = b[0];
        c_.resize(n);
        for (std::size_t i = 0; i < n; ++i) c_[i] = b[i + 1] - a_[i] * feedthrough_;
    }

    // xdot for the controllable-canonical LTI form or the nonlinear model
    void derivative(std::span<const double> x, double ud, std::span<double> dx) const {
        if (const auto* nl = std::get_if<NonlinearPlantConfig>(&model_)) {
            dx[0] = x[1];
            dx[1] = -nl->damping * x[1] - nl->nonlinear * x[0] * x[0] + ud;
            return;
        }
        const std::size_t n = state_.size();
        double top = ud;
        for (std::size_t i = 0; i < n; ++i) top -= a_[i] * x[i];
        dx[0] = top;
        for (std::size_t i = 1; i < n; ++i) dx[i] = x[i - 1];
    }

    void rk4(double ud) {
        const std::size_t n = state_.size();
        derivative(state_, ud, k1_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = state_[i] + 0.5 * h_ * k1_[i];
        derivative(tmp_, ud, k2_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = state_[i] + 0.5 * h_ * k2_[i];
        derivative(tmp_, ud, k3_);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = state_[i] + h_ * k3_[i];
        derivative(tmp_, ud, k4_);
        for (std::size_t i = 0; i < n; ++i)
            state_[i] += h_ / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }

    PlantModel model_;
    double h_;
    double threshold_;
    DelayLine delay_;
    std::vector<double> state_;
    std::vector<double> k1_, k2_, k3_, k4_, tmp_;  // RK4 scratch
    std::vector<double> a_, c_;  // companion coefficients, output row
    double feedthrough_ = 0.0;
    double last_delayed_ = 0.0;
    double t_ = 0.0;
    bool diverged_ = false;
};

}  // namespace foct
