#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rydpmp/propagator.hpp"

namespace rydpmp {

/// Constant-detuning pulse that returns both TLSs to |0>: sqrt(1 + delta^2) T = 2 pi l and
/// sqrt(2 + delta^2) T = 2 pi l'.
struct AbnormalCandidate {
    int l = 0;
    int l_prime = 0;
    double delta = 0.0;          // the positive root; -delta closes as well
    double T = 0.0;
    double closure_k1 = 0.0;     // |<0|psi_1(T)>| from the closed-form propagator
    double closure_k2 = 0.0;
    bool gate_phase_achieved = false;   // the CZ relation gamma_2 = 2 gamma_1 + pi for either sign
    double gate_phase_error = 0.0;      // distance of gamma_2 - 2 gamma_1 - pi to 2 pi Z, best sign
};

/// All 1 <= l < l' <= l_max with 2 l^2 >= l'^2, sorted by T (ties by l).
std::vector<AbnormalCandidate> abnormal_case2_scan(int l_max);

/// Lower bound 2 sqrt(3) pi from the smallest gap between distinct squares.
double abnormal_time_bound();

void write_candidates_csv(std::ostream& os, const std::vector<AbnormalCandidate>& candidates);

/// Case (i) needs x and sqrt(2) x both in pi/2 + pi Z. For x_n = pi/2 + pi n, n = 0..n_max,
/// residual_n is the distance of sqrt(2) x_n to pi/2 + pi Z.
struct InfeasibilityWitness {
    double min_residual = 0.0;
    std::int64_t argmin = 0;
    /// Running minimum recorded at n = 10^0, 10^1, ... up to n_max.
    std::vector<std::pair<std::int64_t, double>> running_min;
    bool all_positive = true;
};

InfeasibilityWitness case1_exact_infeasibility(std::int64_t n_max);

/// Same scan with sqrt(2) replaced by p/q, in exact integer arithmetic. Residual 0 means the
/// checker found an exact simultaneous solution.
InfeasibilityWitness case1_rational_control(std::int64_t p, std::int64_t q, std::int64_t n_max);

/// phi(t) = a_over_b * t + c sampled at step midpoints on ceil(T / dt) steps.
PhasePulse constant_detuning_pulse(double a_over_b, double c, double T, double dt = 1e-3);

}  // namespace rydpmp
