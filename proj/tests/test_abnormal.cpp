#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "rydpmp/abnormal.hpp"

using namespace rydpmp;

TEST_CASE("l_max = 10: minimal candidate is (3, 4)") {
    const auto c = abnormal_case2_scan(10);
    REQUIRE_FALSE(c.empty());
    CHECK(c.front().l == 3);
    CHECK(c.front().l_prime == 4);
    CHECK(c.front().delta == doctest::Approx(std::sqrt(2.0 / 7.0)).epsilon(1e-12));
    CHECK(c.front().T == doctest::Approx(2 * kPi * std::sqrt(7.0)).epsilon(1e-12));
}

TEST_CASE("enumeration matches a brute-force oracle") {
    const int lmax = 30;
    std::set<std::pair<int, int>> expect;
    for (int l = 1; l <= lmax; ++l) {
        for (int lp = l + 1; lp <= lmax; ++lp) {
            if (2 * l * l >= lp * lp) expect.insert({l, lp});
        }
    }
    const auto c = abnormal_case2_scan(lmax);
    std::set<std::pair<int, int>> got;
    for (const auto& x : c) got.insert({x.l, x.l_prime});
    CHECK(got == expect);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i].T >= c[i - 1].T);
}

TEST_CASE("every candidate closes and respects the bounds") {
    const auto c = abnormal_case2_scan(50);
    CHECK(abnormal_time_bound() == doctest::Approx(10.883).epsilon(1e-4));
    for (const auto& x : c) {
        CHECK(x.T >= abnormal_time_bound());
        CHECK(x.T > 7.612);
        CHECK(x.closure_k1 >= 1 - 1e-9);
        CHECK(x.closure_k2 >= 1 - 1e-9);
        // Defining relations
        CHECK(std::sqrt(1 + x.delta * x.delta) * x.T == doctest::Approx(2 * kPi * x.l).epsilon(1e-12));
        CHECK(std::sqrt(2 + x.delta * x.delta) * x.T == doctest::Approx(2 * kPi * x.l_prime).epsilon(1e-12));
        CHECK(x.gate_phase_achieved == (x.gate_phase_error <= 1e-6));
    }
}

TEST_CASE("the (3, 4) candidate closes under piecewise propagation") {
    const auto c = abnormal_case2_scan(4).front();
    for (double d : {c.delta, -c.delta}) {
        const PhasePulse p = constant_detuning_pulse(d, 0.0, c.T, 1e-3);
        for (int k = 1; k <= 2; ++k) {
            // phi = delta t corresponds to the rotating frame with the same |<0|psi>|.
            CHECK(std::abs(propagate_final(p, TlsIndex(k), ket0())(0)) >= 1 - 1e-6);
        }
    }
}

TEST_CASE("constant_detuning_pulse examples") {
    const PhasePulse a = constant_detuning_pulse(0.0, 0.0, kPi);
    for (double x : a.phi()) CHECK(x == 0.0);
    CHECK(a.duration() == doctest::Approx(kPi));
    const PhasePulse b = constant_detuning_pulse(1.0, 0.0, 2 * kPi);
    CHECK(b[b.size() - 1] + 0.5 * b.dt() == doctest::Approx(2 * kPi));
    CHECK_THROWS_AS(constant_detuning_pulse(1.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("Case (i) exact infeasibility witness") {
    const InfeasibilityWitness w0 = case1_exact_infeasibility(0);
    CHECK(w0.min_residual == doctest::Approx(0.6506).epsilon(1e-3));
    CHECK(w0.all_positive);

    const InfeasibilityWitness w = case1_exact_infeasibility(1000000);
    CHECK(w.all_positive);
    CHECK(w.min_residual > 0.0);
    CHECK(w.min_residual < 1e-5);
    for (std::size_t i = 1; i < w.running_min.size(); ++i) {
        CHECK(w.running_min[i].second <= w.running_min[i - 1].second);
    }
}

TEST_CASE("rational control finds the exact solution") {
    const InfeasibilityWitness w = case1_rational_control(7, 5, 10);
    CHECK(w.min_residual == 0.0);
    CHECK(w.argmin == 2);
    CHECK_FALSE(w.all_positive);
}

TEST_CASE("candidate CSV") {
    std::ostringstream os;
    write_candidates_csv(os, abnormal_case2_scan(4));
    CHECK(os.str().rfind("l,l_prime,delta,T,gate_phase_achieved\n3,4,", 0) == 0);
}
