#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "foct/fracops.hpp"
#include "foct/gl.hpp"

using namespace foct;
using Catch::Approx;

namespace {

std::vector<double> step_response(DiscreteOperator& op, int n) {
    std::vector<double> y(n);
    for (int k = 0; k < n; ++k) y[k] = op.step(1.0);
    return y;
}

}  // namespace

TEST_CASE("oustaloup synthesis matches the recursive formulas") {
    const auto f = synthesize_oustaloup(0.5, 0.01, 100.0, 2);

    SECTION("gain is omega_h^gamma") {
        CHECK(f.gain == Approx(10.0).epsilon(1e-12));
    }
    SECTION("pole at k=-2 evaluates to 0.01 * 10^0.6") {
        CHECK(f.poles.front() == Approx(0.0398107170553497).epsilon(1e-12));
    }
    SECTION("filter order is 2N+1") {
        CHECK(f.order() == 5);
        CHECK(f.zeros.size() == 5);
        CHECK(f.poles.size() == 5);
    }
    SECTION("poles and zeros positive and strictly increasing") {
        for (std::size_t i = 0; i < f.order(); ++i) {
            CHECK(f.zeros[i] > 0.0);
            CHECK(f.poles[i] > 0.0);
            if (i > 0) {
                CHECK(f.zeros[i] > f.zeros[i - 1]);
                CHECK(f.poles[i] > f.poles[i - 1]);
            }
        }
    }
}

TEST_CASE("oustaloup degenerate and error cases") {
    SECTION("gamma = 0 collapses to unity") {
        const auto f = synthesize_oustaloup(0.0, 0.01, 100.0, 2);
        CHECK(f.gain == Approx(1.0));
        for (std::size_t i = 0; i < f.order(); ++i)
            CHECK(f.zeros[i] == Approx(f.poles[i]).epsilon(1e-14));
        CHECK(std::abs(frequency_response(f, 0.37) - 1.0) < 1e-12);
        CHECK(std::abs(frequency_response(f, 42.0) - 1.0) < 1e-12);
    }
    SECTION("domain errors") {
        CHECK_THROWS_AS(synthesize_oustaloup(1.0, 0.01, 100.0, 2), std::domain_error);
        CHECK_THROWS_AS(synthesize_oustaloup(-1.2, 0.01, 100.0, 2), std::domain_error);
        CHECK_THROWS_AS(synthesize_oustaloup(0.5, -1.0, 100.0, 2), std::domain_error);
        CHECK_THROWS_AS(synthesize_oustaloup(0.5, 100.0, 0.01, 2), std::domain_error);
        CHECK_THROWS_AS(frequency_response(synthesize_oustaloup(0.5, 0.01, 100.0, 2), 0.0),
                        std::domain_error);
    }
}

TEST_CASE("negating gamma swaps poles with zeros and inverts the gain") {
    for (double g : {0.2, 0.5, 0.85}) {
        const auto plus = synthesize_oustaloup(g, 0.01, 100.0, 2);
        const auto minus = synthesize_oustaloup(-g, 0.01, 100.0, 2);
        for (std::size_t i = 0; i < plus.order(); ++i) {
            CHECK(plus.zeros[i] == Approx(minus.poles[i]).epsilon(1e-12));
            CHECK(plus.poles[i] == Approx(minus.zeros[i]).epsilon(1e-12));
        }
        CHECK(plus.gain * minus.gain == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("frequency response tracks s^gamma inside the band") {
    SECTION("gamma = +-0.5 at band center") {
        for (double g : {0.5, -0.5}) {
            const auto f = synthesize_oustaloup(g, 0.01, 100.0, 2);
            const auto r = frequency_response(f, 1.0);
            CHECK(std::abs(r) == Approx(1.0).margin(0.05));
            CHECK(std::arg(r) * 180.0 / std::numbers::pi ==
                  Approx(90.0 * g).margin(3.0));
        }
    }
    SECTION("inner-band fit within 2 dB / 5 deg for a gamma grid") {
        // N = 2 holds the 5 deg phase bound up to |gamma| ~ 0.85; beyond
        // that the ripple needs more sections.
        for (double g : {-0.85, -0.75, -0.6, -0.45, -0.3, -0.15,
                         0.15, 0.3, 0.45, 0.6, 0.75, 0.85}) {
            const auto f = synthesize_oustaloup(g, 0.01, 100.0, 2);
            for (double w = 0.1; w <= 10.0; w *= 1.25) {
                const auto r = frequency_response(f, w);
                const double mag_db = 20.0 * std::log10(std::abs(r));
                const double ideal_db = 20.0 * g * std::log10(w);
                const double phase = std::arg(r) * 180.0 / std::numbers::pi;
                CHECK(std::abs(mag_db - ideal_db) <= 2.0);
                CHECK(std::abs(phase - 90.0 * g) <= 5.0);
            }
        }
    }
}

TEST_CASE("bilinear discretization") {
    const double h = 1e-3;

    SECTION("gamma = 0 passes samples through unchanged") {
        auto filt = discretize(synthesize_oustaloup(0.0, 0.01, 100.0, 2), h);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (int k = 0; k < 200; ++k) {
            const double x = dist(rng);
            CHECK(filt.step(x) == Approx(x).margin(1e-12));
        }
    }
    SECTION("DC gain matches the continuous filter") {
        for (double g : {0.5, -0.5, 0.3, -0.7}) {
            const auto f = synthesize_oustaloup(g, 0.01, 100.0, 2);
            double cont = f.gain;
            for (std::size_t i = 0; i < f.order(); ++i) cont *= f.zeros[i] / f.poles[i];
            CHECK(discretize(f, h).dc_gain() == Approx(cont).epsilon(1e-3));
        }
    }
    SECTION("response at band center within 2% of continuous") {
        const auto f = synthesize_oustaloup(0.5, 0.01, 100.0, 2);
        const auto d = discretize(f, h);
        const double mc = std::abs(frequency_response(f, 1.0));
        const double md = std::abs(d.response(1.0));
        CHECK(md == Approx(mc).epsilon(0.02));
    }
    SECTION("integrator slope is -10 dB/decade inside [0.1, 10]") {
        const auto d = discretize(synthesize_oustaloup(-0.5, 0.01, 100.0, 2), h);
        for (double w = 0.1; w <= 10.0; w *= 2.0) {
            const double mag_db = 20.0 * std::log10(std::abs(d.response(w)));
            CHECK(std::abs(mag_db - (-10.0) * std::log10(w)) <= 1.0);
        }
    }
    SECTION("all update-map eigenvalues stay inside the unit circle") {
        for (double g : {0.9, -0.9, 0.5, -0.5}) {
            const auto d = discretize(synthesize_oustaloup(g, 0.01, 100.0, 2), 0.05);
            for (double m : d.pole_magnitudes()) CHECK(m < 1.0);
        }
    }
    SECTION("state dimension equals 2N+1") {
        CHECK(discretize(synthesize_oustaloup(0.4, 0.01, 100.0, 3), h).order() == 7);
    }
    SECTION("invalid sample time") {
        CHECK_THROWS_AS(discretize(synthesize_oustaloup(0.5, 0.01, 100.0, 2), 0.0),
                        std::domain_error);
    }
}

TEST_CASE("order splitting") {
    SECTION("exact integer orders carry no filter") {
        const auto op = split_order(1.0);
        CHECK(op.integer_part == 1);
        CHECK_FALSE(op.fractional_filter.has_value());
        const auto io = split_order(-1.0);
        CHECK(io.integer_part == -1);
        CHECK_FALSE(io.fractional_filter.has_value());
    }
    SECTION("pure fractional differentiation") {
        const auto op = split_order(0.5);
        CHECK(op.integer_part == 0);
        REQUIRE(op.fractional_filter.has_value());
        CHECK(op.fractional_filter->gamma == Approx(0.5));
    }
    SECTION("improper order 1.4 splits into 1 + 0.4") {
        const auto op = split_order(1.4);
        CHECK(op.integer_part == 1);
        REQUIRE(op.fractional_filter.has_value());
        CHECK(op.fractional_filter->gamma == Approx(0.4).epsilon(1e-12));
    }
    SECTION("fractional integration keeps a true pole via the integer part") {
        const auto op = split_order(-0.7);
        CHECK(op.integer_part == -1);
        REQUIRE(op.fractional_filter.has_value());
        CHECK(op.fractional_filter->gamma == Approx(0.3).epsilon(1e-12));
    }
    SECTION("orders below -1 clamp the integer part") {
        const auto op = split_order(-1.4);
        CHECK(op.integer_part == -1);
        REQUIRE(op.fractional_filter.has_value());
        CHECK(op.fractional_filter->gamma == Approx(-0.4).epsilon(1e-12));
    }
    SECTION("invariant: order == integer_part + gamma") {
        for (double o : {-1.99, -1.3, -0.9, -0.2, 0.0, 0.4, 1.0, 1.8}) {
            const auto op = split_order(o);
            const double g = op.fractional_filter ? op.fractional_filter->gamma : 0.0;
            CHECK(op.integer_part + g == Approx(o).margin(1e-12));
        }
    }
    SECTION("domain errors outside (-2, 2)") {
        CHECK_THROWS_AS(split_order(2.0), std::domain_error);
        CHECK_THROWS_AS(split_order(-2.0), std::domain_error);
        CHECK_THROWS_AS(split_order(2.5), std::domain_error);
    }
}

TEST_CASE("grunwald-letnikov oracle") {
    const double h = 1e-3;
    const int n = 1001;
    std::vector<double> ramp(n);
    for (int k = 0; k < n; ++k) ramp[k] = k * h;

    SECTION("order 0 is the identity") {
        const auto out = gl_differintegral(ramp, 0.0, h);
        for (int k = 0; k < n; ++k) CHECK(out[k] == Approx(ramp[k]).margin(1e-15));
    }
    SECTION("order 1 of f(t)=t is 1") {
        const auto out = gl_differintegral(ramp, 1.0, h);
        for (int k = 2; k < n; ++k) CHECK(out[k] == Approx(1.0).margin(1e-3));
    }
    SECTION("order 0.5 of f(t)=t at t=1 equals Gamma(2)/Gamma(1.5)") {
        const auto out = gl_differintegral(ramp, 0.5, h);
        // 1 / Gamma(1.5) = 2 / sqrt(pi)
        CHECK(out.back() == Approx(2.0 / std::sqrt(std::numbers::pi)).margin(1e-2));
    }
}

TEST_CASE("discrete operator stepping") {
    SECTION("zero input history produces zero output") {
        for (double o : {-1.5, -1.0, -0.5, 0.5, 1.0, 1.5}) {
            DiscreteOperator op(o, 0.01);
            for (int k = 0; k < 10; ++k) CHECK(op.step(0.0) == 0.0);
        }
    }
    SECTION("pure integrator accumulates trapezoids exactly") {
        DiscreteOperator op(-1.0, 0.01);
        double y = 0.0;
        for (int k = 0; k <= 100; ++k) y = op.step(1.0);
        CHECK(y == Approx(1.0).epsilon(1e-12));
    }
    SECTION("half integrator of a unit step approaches 2*sqrt(t/pi)") {
        DiscreteOperator op(-0.5, 1e-3);
        const auto y = step_response(op, 1001);
        const double analytic = 2.0 * std::sqrt(1.0 / std::numbers::pi);
        CHECK(y.back() == Approx(analytic).epsilon(0.05));
    }
    SECTION("agrees with the GL oracle at t=1 on unit steps") {
        const double h = 1e-3;
        const std::vector<double> ones(1001, 1.0);
        for (double o : {-0.5, -0.25, 0.25, 0.5}) {
            DiscreteOperator op(o, h);
            const auto y = step_response(op, 1001);
            const auto ref = gl_differintegral(ones, o, h);
            CHECK(std::abs(y.back() - ref.back()) / std::abs(ref.back()) < 0.05);
        }
    }
    SECTION("pure discretized filter also agrees with the GL oracle at t=1") {
        const double h = 1e-3;
        const std::vector<double> ones(1001, 1.0);
        for (double g : {-0.5, -0.25, 0.25, 0.5}) {
            auto filt = discretize(synthesize_oustaloup(g, 0.01, 100.0, 2), h);
            double y = 0.0;
            for (int k = 0; k < 1001; ++k) y = filt.step(1.0);
            const auto ref = gl_differintegral(ones, g, h);
            CHECK(std::abs(y - ref.back()) / std::abs(ref.back()) < 0.05);
        }
    }
    SECTION("double integration edge order -2") {
        DiscreteOperator op(-2.0, 0.01);
        double y = 0.0;
        for (int k = 0; k <= 100; ++k) y = op.step(1.0);
        // integral of t over [0,1] = 0.5, trapezoid of trapezoid
        CHECK(y == Approx(0.5).margin(1e-3));
    }
    SECTION("linearity to machine precision") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        std::vector<double> xs(400), ys(400);
        for (auto& v : xs) v = dist(rng);
        for (auto& v : ys) v = dist(rng);
        const double a = 1.7, b = -0.4;
        for (double o : {-1.3, -0.5, 0.5, 1.4}) {
            DiscreteOperator ox(o, 0.01), oy(o, 0.01), oc(o, 0.01);
            for (int k = 0; k < 400; ++k) {
                const double rx = ox.step(xs[k]);
                const double ry = oy.step(ys[k]);
                const double rc = oc.step(a * xs[k] + b * ys[k]);
                CHECK(rc == Approx(a * rx + b * ry).margin(1e-9));
            }
        }
    }
    SECTION("reset restores the initial response") {
        DiscreteOperator op(0.6, 0.01);
        std::vector<double> first;
        for (int k = 0; k < 50; ++k) first.push_back(op.step(std::sin(0.1 * k)));
        op.reset();
        for (int k = 0; k < 50; ++k)
            CHECK(op.step(std::sin(0.1 * k)) == first[static_cast<std::size_t>(k)]);
    }
}
