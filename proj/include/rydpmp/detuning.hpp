#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "rydpmp/potential.hpp"
#include "rydpmp/propagator.hpp"

namespace rydpmp {

/// Detuning samples on the uniform grid t_i = i * dt, i = 0..n, with t_n = T.
struct DetuningCurve {
    double dt = 0.0;
    double T = 0.0;
    std::vector<double> delta;
    std::vector<double> ddelta;

    std::size_t steps() const { return delta.empty() ? 0 : delta.size() - 1; }
    double time(std::size_t i) const { return static_cast<double>(i) * dt; }
    double max_energy_residual(const QuarticPotential& pot) const;
};

struct ShootingOptions {
    double dt = 1e-3;
    double time_cap = 100.0;
    double energy_tol = 1e-6;
    /// Forces the number of grid steps on [0, T]. Keeps the sampled curve a smooth function of
    /// the potential parameters, which the finite-difference optimizer relies on.
    std::optional<std::size_t> steps;
};

/// Time of the `crossings`-th zero of delta(t) for t > 0, starting from delta(0) = 0 and
/// ddelta(0) = sign * sqrt(-2 V(0)). Throws NoCrossing past the time cap.
double crossing_time(const QuarticPotential& pot, int crossings, int sign,
                     const ShootingOptions& opts = {});

/// Solves ddot(delta) = -V'(delta) by fixed-step RK4 up to the `crossings`-th zero, then resamples
/// the solution on a uniform grid ending exactly at that zero.
DetuningCurve integrate_detuning(const QuarticPotential& pot, int crossings, int sign,
                                 const ShootingOptions& opts = {});

/// Cumulative trapezoid phi(t_i) = phi0 + int_0^{t_i} delta; one value per grid node.
std::vector<double> node_phases(const DetuningCurve& curve, double phi0 = 0.0);

/// Piecewise-constant pulse on the curve's grid. Each step holds the mean of its two node
/// phases, i.e. the phase at the step midpoint.
///
/// phi(0) is a gauge freedom: shifting phi by c conjugates every H_k by exp(i c sigma_z / 2).
/// Starting from |0>_k this leaves every <0|psi_k> unchanged and multiplies every <1|psi_k> by
/// exp(-i c), which none of the supported fidelities can see.
PhasePulse phase_from_detuning(const DetuningCurve& curve, double phi0 = 0.0);

/// Time-reversed family member matching phi'(t) = 2 pi - phi(T - t): delta'(t) = delta(T - t),
/// so the initial slope flips sign. Same potential, same fidelity.
DetuningCurve mirrored(const DetuningCurve& curve);
PhasePulse mirrored(const PhasePulse& pulse);

}  // namespace rydpmp
