#pragma once

#include <cstdint>
#include <vector>

#include "rydpmp/fidelity.hpp"
#include "rydpmp/propagator.hpp"

namespace rydpmp {

struct GrapeConfig {
    int segments = 128;
    double T = 1.0;
    int max_iters = 400;
    /// Extra attempts from seeded random pulses after the deterministic ramp start.
    int restarts = 12;
    double restart_amplitude = 0.5;
    /// Slope of the deterministic ramp added to the initial pulse, in rad per segment.
    double ramp = 1e-3;
    double target_fidelity = 0.999;
    double stall_gain = 1e-12;
    int stall_window = 50;
    std::uint64_t seed = 7;
    double grad_tol = 1e-9;
};

struct GrapeResult {
    PhasePulse pulse;
    double fidelity = 0.0;
    int iterations = 0;
    int attempts = 0;
};

/// Fidelity of the pulse applied to |0>_k for k = 1..N and its gradient over the segment phases,
/// from a forward sweep and a backward costate sweep seeded by the Wirtinger derivative at T.
/// An empty pulse yields an empty gradient.
double grape_value_and_gradient(const PhasePulse& pulse, const TargetManifold& target,
                                std::vector<double>& grad);

/// BFGS ascent over the M segment phases at fixed T. phi_init empty means zero plus the ramp.
/// Attempts that stall (gain below stall_gain over stall_window iterations) or converge below
/// target_fidelity are restarted; throws Stalled when no attempt reaches target_fidelity.
GrapeResult grape_optimize(const GrapeConfig& cfg, const TargetManifold& target,
                           const std::vector<double>& phi_init = {});

/// max_j |g_adj - g_fd| / max(|g_fd|_inf, 1e-3), central differences with step h.
double gradient_check(const GrapeConfig& cfg, const TargetManifold& target, const std::vector<double>& phi,
                      double h = 1e-6);

struct CompareOptions {
    /// Compare on t/T instead of requiring equal durations.
    bool normalize_time = false;
    double duration_tol = 1e-6;
};

struct PulseAlignment {
    double linf = 0.0;
    double l2 = 0.0;       // root mean square over the common grid
    double offset = 0.0;   // constant added to the second pulse
    bool reversed = false;
    bool conjugated = false;
    std::size_t samples = 0;
};

/// Distance between two pulses after removing the gauges that leave every fidelity unchanged:
/// a constant offset, phi -> -phi and time reversal t -> T - t. Both pulses are sampled on the
/// step midpoints of the coarser one (linear interpolation of the finer one), and differences
/// are taken mod 2 pi. Throws DurationMismatch when durations differ.
PulseAlignment compare_pulses(const PhasePulse& a, const PhasePulse& b, const CompareOptions& opts = {});

}  // namespace rydpmp
