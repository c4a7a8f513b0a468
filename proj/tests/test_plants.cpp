#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "foct/plants.hpp"

using namespace foct;
using Catch::Approx;

TEST_CASE("delay line semantics") {
    SECTION("length is the rounded sample count") {
        CHECK(DelayLine(0.5, 0.01).length() == 50);
        CHECK(DelayLine(0.2, 0.005).length() == 40);
        CHECK(DelayLine(0.0, 0.01).length() == 0);
    }
    SECTION("zero delay passes through") {
        DelayLine dl(0.0, 0.01);
        CHECK(dl.push(3.5) == 3.5);
        CHECK(dl.push(-1.0) == -1.0);
    }
    SECTION("output lags the input by exactly the length") {
        DelayLine dl(0.03, 0.01);
        std::vector<double> in{1, 2, 3, 4, 5, 6}, out;
        for (double x : in) out.push_back(dl.push(x));
        CHECK(out == std::vector<double>{0, 0, 0, 1, 2, 3});
    }
    SECTION("negative delay rejected") {
        CHECK_THROWS_AS(DelayLine(-0.1, 0.01), std::invalid_argument);
    }
}

TEST_CASE("nonlinear benchmark plant") {
    SECTION("rest stays at rest") {
        Plant p(NonlinearPlantConfig{}, 0.01);
        for (int k = 0; k < 500; ++k) p.step(0.0);
        CHECK(p.output() == 0.0);
    }
    SECTION("constant input 0.25 balances at y = 1") {
        Plant p(NonlinearPlantConfig{}, 0.01);
        for (int k = 0; k < 6000; ++k) p.step(0.25);
        CHECK(p.output() == Approx(1.0).margin(1e-3));
    }
    SECTION("unit step stays zero until the dead time passes") {
        const double h = 0.01;
        Plant p(NonlinearPlantConfig{}, h);
        int k = 0;
        for (; k * h < 0.5 - 0.5 * h; ++k) {
            p.step(1.0);
            CHECK(p.output() == 0.0);
        }
        for (int j = 0; j < 10; ++j) p.step(1.0);
        CHECK(p.output() != 0.0);
    }
    SECTION("open-loop response converges at fourth order in h") {
        auto simulate = [](double h) {
            Plant p(NonlinearPlantConfig{}, h);
            const int n = static_cast<int>(std::llround(5.0 / h));
            for (int k = 0; k < n; ++k) p.step(1.0);
            return p.output();
        };
        CHECK(std::abs(simulate(0.01) - simulate(0.005)) < 1e-5);
    }
}

TEST_CASE("delayed LTI plant") {
    SECTION("unstable pole doubles as e^t") {
        Plant p(DelayedLtiConfig{}, 0.001);
        p.set_state(std::vector<double>{1e-3});
        const int n = 5000;
        for (int k = 0; k < n; ++k) {
            p.step(0.0);
            const double t = (k + 1) * 0.001;
            const double expected = 1e-3 * std::exp(t);
            CHECK(p.output() == Approx(expected).epsilon(1e-3));
        }
    }
    SECTION("step response matches the closed form through the delay") {
        const double h = 0.001;
        Plant p(DelayedLtiConfig{}, h);
        const int n = 2000;
        for (int k = 0; k < n; ++k) {
            p.step(1.0);
            const double t = (k + 1) * h;
            const double expected = t < 0.2 ? 0.0 : std::exp(t - 0.2) - 1.0;
            CHECK(p.output() == Approx(expected).margin(1e-4));
        }
    }
    SECTION("divergence latches once the threshold trips") {
        Plant p(DelayedLtiConfig{}, 0.005, 1e3);
        p.set_state(std::vector<double>{1.0});
        int k = 0;
        while (!p.diverged() && k < 10000) {
            p.step(0.0);
            ++k;
        }
        CHECK(p.diverged());
        // e^t reaches 1e3 around t = 6.9
        CHECK(p.time() == Approx(6.9).margin(0.3));
    }
    SECTION("second-order transfer function reproduces its DC gain") {
        // 2 / (s^2 + 3 s + 2) -> DC gain 1
        DelayedLtiConfig cfg{.num = {2.0}, .den = {1.0, 3.0, 2.0}, .delay = 0.0};
        Plant p(cfg, 0.01);
        for (int k = 0; k < 3000; ++k) p.step(1.0);
        CHECK(p.output() == Approx(1.0).margin(1e-6));
    }
    SECTION("configuration validation") {
        CHECK_THROWS_AS(Plant(DelayedLtiConfig{.num = {1, 1, 1}, .den = {1, 1}}, 0.01),
                        std::invalid_argument);
        CHECK_THROWS_AS(Plant(DelayedLtiConfig{.num = {1}, .den = {}}, 0.01),
                        std::invalid_argument);
        CHECK_THROWS_AS(Plant(DelayedLtiConfig{.num = {1}, .den = {0.0, 1.0}}, 0.01),
                        std::invalid_argument);
    }
}

TEST_CASE("disturbance enters at the plant input") {
    // u + d drives the plant identically to a single input of u + d
    Plant a(NonlinearPlantConfig{}, 0.01);
    Plant b(NonlinearPlantConfig{}, 0.01);
    for (int k = 0; k < 500; ++k) {
        a.step(0.2, 0.05);
        b.step(0.25, 0.0);
        CHECK(a.output() == b.output());
    }
}
