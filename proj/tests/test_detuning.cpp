#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rydpmp/detuning.hpp"
#include "rydpmp/errors.hpp"

using namespace rydpmp;

TEST_CASE("Case (i) potential: one full oscillation") {
    const QuarticPotential pot = potential_from_sym(1.26, -1.17);
    const DetuningCurve c = integrate_detuning(pot, 2, 1);
    CHECK(c.T == doctest::Approx(4.875).epsilon(0.01 / 4.875));
    CHECK(c.delta.front() == 0.0);
    CHECK(std::abs(c.delta.back()) <= 1e-9);
    CHECK(c.max_energy_residual(pot) <= 1e-6);
    CHECK(crossing_time(pot, 2, 1) == doctest::Approx(c.T).epsilon(1e-9));

    // The up and down branches mirror each other: delta(T - t) = -delta(t), and each branch is
    // symmetric about its own turning point.
    const std::size_t n = c.steps();
    REQUIRE(n % 2 == 0);
    double odd = 0.0;
    for (std::size_t i = 0; i <= n; ++i) odd = std::max(odd, std::abs(c.delta[i] + c.delta[n - i]));
    CHECK(odd <= 1e-6);
    const double quarter = c.T / 4;
    double even = 0.0;
    for (std::size_t i = 0; i <= n / 2; ++i) {
        const double t = c.time(i);
        const double mirror = 2 * quarter - t;
        const double x = mirror / c.dt;
        const auto j = static_cast<std::size_t>(x);
        const double w = x - static_cast<double>(j);
        const double interp = j + 1 <= n ? (1 - w) * c.delta[j] + w * c.delta[j + 1] : c.delta[j];
        even = std::max(even, std::abs(c.delta[i] - interp));
    }
    CHECK(even <= 1e-6);
}

TEST_CASE("Case (ii) potential: one and a half oscillations") {
    // Rounding the parameters to two digits moves T by about 0.03.
    const DetuningCurve r = integrate_detuning(potential_from_asym(0.67, -0.84, -0.39), 3, 1);
    CHECK(std::abs(r.T - 7.612) <= 0.05);
    const QuarticPotential pot = potential_from_asym(0.67112, -0.84110, -0.39456);
    const DetuningCurve c = integrate_detuning(pot, 3, 1);
    CHECK(std::abs(c.T - 7.612) <= 0.01);
    CHECK(c.max_energy_residual(pot) <= 1e-6);
    CHECK(c.ddelta.front() > 0.0);
}

TEST_CASE("turning points are roots of the potential") {
    const QuarticPotential pot = potential_from_asym(0.67, -0.84, -0.39);
    const DetuningCurve c = integrate_detuning(pot, 3, 1);
    const auto [lo, hi] = std::minmax_element(c.delta.begin(), c.delta.end());
    // The sampled extremum sits within O(dt^2) of the true turning point.
    CHECK(std::abs(*hi - 0.67) <= 1e-6);
    CHECK(std::abs(*lo + 0.84) <= 1e-6);
    // Second-order Taylor refinement of the sampled extremum from delta and ddelta alone.
    int found = 0;
    for (std::size_t i = 1; i < c.ddelta.size(); ++i) {
        if ((c.ddelta[i - 1] > 0.0) == (c.ddelta[i] > 0.0)) continue;
        const std::size_t j = std::abs(c.ddelta[i - 1]) < std::abs(c.ddelta[i]) ? i - 1 : i;
        const double ext = c.delta[j] + c.ddelta[j] * c.ddelta[j] / (2.0 * pot.derivative(c.delta[j]));
        const double root = ext > 0.0 ? 0.67 : -0.84;
        CHECK(std::abs(ext - root) <= 1e-8);
        ++found;
    }
    CHECK(found == 3);
}

TEST_CASE("energy conservation over a sweep of potentials") {
    for (double d0 : {0.5, 0.9, 1.3, 1.8}) {
        for (double v0 : {-2.0, -1.0, -0.3}) {
            const QuarticPotential pot = potential_from_sym(d0, v0);
            for (int cr = 1; cr <= 4; ++cr) {
                const DetuningCurve c = integrate_detuning(pot, cr, 1);
                CHECK(c.max_energy_residual(pot) <= 1e-6);
            }
        }
    }
}

TEST_CASE("sign selects the first branch") {
    const QuarticPotential pot = potential_from_asym(0.67, -0.84, -0.39);
    const DetuningCurve up = integrate_detuning(pot, 1, 1);
    const DetuningCurve down = integrate_detuning(pot, 1, -1);
    CHECK(*std::max_element(up.delta.begin(), up.delta.end()) > 0.6);
    CHECK(*std::min_element(down.delta.begin(), down.delta.end()) < -0.8);
    CHECK(up.T != doctest::Approx(down.T));
}

TEST_CASE("phase_from_detuning examples") {
    DetuningCurve zero;
    zero.dt = 0.01;
    zero.T = 1.0;
    zero.delta.assign(101, 0.0);
    zero.ddelta.assign(101, 0.0);
    const PhasePulse p0 = phase_from_detuning(zero, 0.4);
    CHECK(p0.size() == 100);
    for (double x : p0.phi()) CHECK(x == doctest::Approx(0.4));

    DetuningCurve cst = zero;
    cst.delta.assign(101, 0.7);
    const std::vector<double> nodes = node_phases(cst, 0.2);
    for (std::size_t i = 0; i < nodes.size(); ++i) CHECK(std::abs(nodes[i] - (0.2 + 0.7 * cst.time(i))) <= 1e-12);
    const PhasePulse p1 = phase_from_detuning(cst, 0.2);
    for (std::size_t j = 0; j < p1.size(); ++j) CHECK(std::abs(p1[j] - (0.2 + 0.7 * p1.step_time(j))) <= 1e-12);
}

TEST_CASE("Case (i) phase is even about T/2 and odd about T/4 up to a constant") {
    const DetuningCurve c = integrate_detuning(potential_from_sym(1.26, -1.17), 2, 1);
    const std::vector<double> phi = node_phases(c);
    const std::size_t n = c.steps();
    double even = 0.0;
    for (std::size_t i = 0; i <= n; ++i) even = std::max(even, std::abs(phi[i] - phi[n - i]));
    CHECK(even <= 1e-6);
    const std::size_t h = n / 2;
    double odd = 0.0;
    for (std::size_t i = 0; i <= h; ++i) odd = std::max(odd, std::abs(phi[i] + phi[h - i] - phi[h]));
    CHECK(odd <= 1e-3);
}

TEST_CASE("mirrored curve and pulse") {
    const DetuningCurve c = integrate_detuning(potential_from_asym(0.67, -0.84, -0.39), 3, 1);
    const DetuningCurve m = mirrored(c);
    CHECK(m.T == c.T);
    const std::size_t n = c.steps();
    CHECK(m.delta[0] == c.delta[n]);
    CHECK(m.ddelta[0] == doctest::Approx(-c.ddelta[n]));

    const PhasePulse p = phase_from_detuning(c);
    const PhasePulse q = mirrored(p);
    for (std::size_t j = 0; j < p.size(); ++j) CHECK(q[j] == doctest::Approx(2 * kPi - p[p.size() - 1 - j]));
}

TEST_CASE("integration errors") {
    const QuarticPotential pot = potential_from_sym(1.26, -1.17);
    ShootingOptions capped;
    capped.time_cap = 0.5;
    CHECK_THROWS_AS(integrate_detuning(pot, 2, 1, capped), NoCrossing);
    CHECK_THROWS_AS(crossing_time(pot, 2, 1, capped), NoCrossing);

    ShootingOptions coarse;
    coarse.dt = 0.2;
    coarse.energy_tol = 1e-14;
    CHECK_THROWS_AS(integrate_detuning(pot, 2, 1, coarse), EnergyDrift);

    CHECK_THROWS_AS(integrate_detuning(pot, 0, 1), std::invalid_argument);
    CHECK_THROWS_AS(integrate_detuning(pot, 1, 0), std::invalid_argument);
}

TEST_CASE("pinned step count") {
    ShootingOptions o;
    o.steps = 500;
    const DetuningCurve c = integrate_detuning(potential_from_sym(1.26, -1.17), 2, 1, o);
    CHECK(c.steps() == 500);
    CHECK(c.dt * 500 == doctest::Approx(c.T));
}
