#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace foct {

// Frequency band over which fractional elements are rationalized.
// `sections` is the half order N; the resulting filter has order 2N+1.
struct FrequencyBand {
    double omega_b = 1e-2;
    double omega_h = 1e2;
    int sections = 2;
};

// Zero/pole/gain realization of s^gamma over [omega_b, omega_h].
struct OustaloupFilter {
    double gamma = 0.0;
    double omega_b = 0.0;
    double omega_h = 0.0;
    int sections = 0;                // N
    std::vector<double> zeros;       // omega'_k, ascending
    std::vector<double> poles;       // omega_k, ascending
    double gain = 1.0;               // omega_h^gamma

    std::size_t order() const { return zeros.size(); }  // 2N+1
};

// Recursive pole/zero placement:
//   omega_k  = omega_b * (omega_h/omega_b)^((k+N+(1+gamma)/2)/(2N+1))
//   omega'_k = omega_b * (omega_h/omega_b)^((k+N+(1-gamma)/2)/(2N+1))
//   K        = omega_h^gamma
inline OustaloupFilter synthesize_oustaloup(double gamma, double omega_b,
                                            double omega_h, int sections) {
    if (!(omega_b > 0.0) || !(omega_h > omega_b))
        throw std::domain_error("synthesize_oustaloup: need 0 < omega_b < omega_h");
    if (!(std::abs(gamma) < 1.0))
        throw std::domain_error("synthesize_oustaloup: |gamma| must be < 1");
    if (sections < 1)
        throw std::domain_error("synthesize_oustaloup: need at least one section");

    OustaloupFilter f;
    f.gamma = gamma;
    f.omega_b = omega_b;
    f.omega_h = omega_h;
    f.sections = sections;
    const int n = 2 * sections + 1;
    const double ratio = omega_h / omega_b;
    f.zeros.reserve(n);
    f.poles.reserve(n);
    for (int k = -sections; k <= sections; ++k) {
        const double ez = (k + sections + 0.5 * (1.0 - gamma)) / n;
        const double ep = (k + sections + 0.5 * (1.0 + gamma)) / n;
        f.zeros.push_back(omega_b * std::pow(ratio, ez));
        f.poles.push_back(omega_b * std::pow(ratio, ep));
    }
    f.gain = std::pow(omega_h, gamma);
    return f;
}

inline OustaloupFilter synthesize_oustaloup(double gamma,
                                            const FrequencyBand& band = {}) {
    return synthesize_oustaloup(gamma, band.omega_b, band.omega_h, band.sections);
}

// G(j*omega) = K * prod (j*omega + z_k) / (j*omega + p_k)
inline std::complex<double> frequency_response(const OustaloupFilter& f,
                                               double omega) {
    if (!(omega > 0.0))
        throw std::domain_error("frequency_response: omega must be positive");
    const std::complex<double> s(0.0, omega);
    std::complex<double> g(f.gain, 0.0);
    for (std::size_t i = 0; i < f.zeros.size(); ++i)
        g *= (s + f.zeros[i]) / (s + f.poles[i]);
    return g;
}

// Cascade of bilinear-mapped first-order sections, one state per section.
// The state-update map is triangular with diagonal entries -a1[i], so the
// realization is stable iff every |a1| < 1.
class DiscreteFilter {
public:
    DiscreteFilter() = default;

    DiscreteFilter(const OustaloupFilter& f, double sample_time)
        : gain_(f.gain), sample_time_(sample_time) {
        if (!(sample_time > 0.0))
            throw std::domain_error("discretize: sample_time must be positive");
        const double c = 2.0 / sample_time;
        sections_.reserve(f.order());
        for (std::size_t i = 0; i < f.order(); ++i) {
            const double z = f.zeros[i];
            const double p = f.poles[i];
            const double d = c + p;
            Section s;
            s.b0 = (c + z) / d;
            s.b1 = (z - c) / d;
            s.a1 = (p - c) / d;
            s.w = 0.0;
            if (!(std::abs(s.a1) < 1.0))
                throw std::runtime_error("discretize: unstable discrete section");
            sections_.push_back(s);
        }
    }

    double step(double x) {
        for (auto& s : sections_) {
            const double y = s.b0 * x + s.w;
            s.w = s.b1 * x - s.a1 * y;
            x = y;
        }
        return gain_ * x;
    }

    void reset() {
        for (auto& s : sections_) s.w = 0.0;
    }

    std::size_t order() const { return sections_.size(); }
    double sample_time() const { return sample_time_; }

    std::vector<double> pole_magnitudes() const {
        std::vector<double> m;
        m.reserve(sections_.size());
        for (const auto& s : sections_) m.push_back(std::abs(s.a1));
        return m;
    }

    // H(e^{j*omega*h}), the realized discrete-time response.
    std::complex<double> response(double omega) const {
        const std::complex<double> zinv =
            std::exp(std::complex<double>(0.0, -omega * sample_time_));
        std::complex<double> g(gain_, 0.0);
        for (const auto& s : sections_)
            g *= (s.b0 + s.b1 * zinv) / (1.0 + s.a1 * zinv);
        return g;
    }

    double dc_gain() const {
        double g = gain_;
        for (const auto& s : sections_) g *= (s.b0 + s.b1) / (1.0 + s.a1);
        return g;
    }

private:
    struct Section {
        double b0 = 1.0, b1 = 0.0, a1 = 0.0;
        double w = 0.0;  // DF2T state
    };
    std::vector<Section> sections_;
    double gain_ = 1.0;
    double sample_time_ = 0.0;
};

inline DiscreteFilter discretize(const OustaloupFilter& f, double sample_time) {
    return DiscreteFilter(f, sample_time);
}

// Split of a differ-integration order into an exactly realized integer part
// and a band-limited fractional remainder. Positive order differentiates,
// negative integrates. integer_part = floor(order) clamped to {-1, 0, 1},
// so every fractional integrator keeps a true pole at s = 0 through the
// integer accumulator (e.g. order -0.7 -> accumulate then differentiate 0.3).
struct FractionalOperator {
    double order = 0.0;
    int integer_part = 0;
    std::optional<OustaloupFilter> fractional_filter;
};

inline FractionalOperator split_order(double order,
                                      const FrequencyBand& band = {}) {
    if (!(std::abs(order) < 2.0))
        throw std::domain_error("split_order: order must lie in (-2, 2)");
    FractionalOperator op;
    op.order = order;
    int ip = static_cast<int>(std::floor(order));
    if (ip < -1) ip = -1;
    if (ip > 1) ip = 1;
    op.integer_part = ip;
    const double gamma = order - ip;
    if (gamma != 0.0)
        op.fractional_filter = synthesize_oustaloup(gamma, band);
    return op;
}

// Exact integer-order blocks. Both act on the window of samples observed
// since reset: the integrator accumulates trapezoids between consecutive
// samples and the backward difference emits zero until a second sample
// exists, so a step input produces no one-sample derivative impulse.
class TrapezoidIntegrator {
public:
    explicit TrapezoidIntegrator(double sample_time) : h_(sample_time) {}

    double step(double x) {
        if (primed_)
            acc_ += 0.5 * h_ * (x + prev_);
        prev_ = x;
        primed_ = true;
        return acc_;
    }

    void reset() {
        acc_ = prev_ = 0.0;
        primed_ = false;
    }

private:
    double h_;
    double acc_ = 0.0;
    double prev_ = 0.0;
    bool primed_ = false;
};

class BackwardDifference {
public:
    explicit BackwardDifference(double sample_time) : h_(sample_time) {}

    double step(double x) {
        const double v = primed_ ? (x - prev_) / h_ : 0.0;
        prev_ = x;
        primed_ = true;
        return v;
    }

    void reset() {
        prev_ = 0.0;
        primed_ = false;
    }

private:
    double h_;
    double prev_ = 0.0;
    bool primed_ = false;
};

// Stateful realization of s^order for order in [-2, 2]: the fractional
// remainder runs first through the discretized Oustaloup filter, then the
// exact integer blocks. |order| == 2 is realized as two integer blocks in
// cascade (no rational approximation involved).
class DiscreteOperator {
public:
    DiscreteOperator(double order, double sample_time,
                     const FrequencyBand& band = {})
        : order_(order) {
        if (!(sample_time > 0.0))
            throw std::domain_error("DiscreteOperator: sample_time must be positive");
        if (std::abs(order) > 2.0)
            throw std::domain_error("DiscreteOperator: order must lie in [-2, 2]");
        if (std::abs(std::abs(order) - 2.0) < 1e-12) {
            const int n = order > 0 ? 2 : -2;
            append_integer(n > 0 ? 1 : -1, sample_time);
            append_integer(n > 0 ? 1 : -1, sample_time);
            return;
        }
        const FractionalOperator split = split_order(order, band);
        if (split.fractional_filter)
            filter_ = DiscreteFilter(*split.fractional_filter, sample_time);
        if (split.integer_part != 0)
            append_integer(split.integer_part, sample_time);
    }

    double step(double x) {
        if (filter_) x = filter_->step(x);
        for (auto& d : diffs_) x = d.step(x);
        for (auto& i : ints_) x = i.step(x);
        return x;
    }

    void reset() {
        if (filter_) filter_->reset();
        for (auto& d : diffs_) d.reset();
        for (auto& i : ints_) i.reset();
    }

    double order() const { return order_; }

private:
    void append_integer(int sign, double h) {
        if (sign > 0)
            diffs_.emplace_back(h);
        else
            ints_.emplace_back(h);
    }

    double order_;
    std::optional<DiscreteFilter> filter_;
    std::vector<BackwardDifference> diffs_;
    std::vector<TrapezoidIntegrator> ints_;
};

}  // namespace foct
