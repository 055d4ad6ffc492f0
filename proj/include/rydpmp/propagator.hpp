#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "rydpmp/quantum.hpp"

namespace rydpmp {

/// Piecewise-constant phase control with Omega = Omega_max = 1.
/// phi[j] is held on (j*dt, (j+1)*dt].
class PhasePulse {
public:
    PhasePulse() = default;
    PhasePulse(double dt, std::vector<double> phi);

    double dt() const { return dt_; }
    std::size_t size() const { return phi_.size(); }
    double duration() const { return dt_ * static_cast<double>(phi_.size()); }
    std::span<const double> phi() const { return phi_; }
    double operator[](std::size_t j) const { return phi_[j]; }

    /// Midpoint time of step j.
    double step_time(std::size_t j) const { return (static_cast<double>(j) + 0.5) * dt_; }

    /// Adds a constant offset to every sample (z-rotation gauge).
    PhasePulse shifted(double offset) const;

private:
    double dt_ = 1e-3;
    std::vector<double> phi_;
};

/// States of one TLS sampled at the step boundaries 0, dt, ..., T.
struct Trajectory {
    std::vector<double> times;
    std::vector<Ket2> states;

    const Ket2& final_state() const { return states.back(); }
    double max_norm_error() const;
};

/// Exact 2x2 step exponentials applied sample by sample.
Trajectory propagate_piecewise(const PhasePulse& pulse, TlsIndex k, const Ket2& psi0);

/// Final state only; skips storing the trajectory.
Ket2 propagate_final(const PhasePulse& pulse, TlsIndex k, const Ket2& psi0);

/// Closed-form generalized Rabi propagator exp(-i hamiltonian_detuned(k, delta) T) psi0.
Ket2 propagate_constant_detuning(TlsIndex k, double delta, double T, const Ket2& psi0);

/// Propagation under a time-dependent detuning in the rotating frame, with each step held at
/// delta[j]. Used to cross-check the phase picture.
Trajectory propagate_detuned_piecewise(double dt, std::span<const double> delta, TlsIndex k,
                                       const Ket2& psi0);

/// CSV with columns t, re_a0, im_a0, re_a1, im_a1.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// CSV with columns t, x, y, z.
void write_bloch_csv(std::ostream& os, const Trajectory& traj);

}  // namespace rydpmp
