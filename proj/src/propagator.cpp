#include "rydpmp/propagator.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rydpmp/csv.hpp"

namespace rydpmp {

PhasePulse::PhasePulse(double dt, std::vector<double> phi) : dt_(dt), phi_(std::move(phi)) {
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
        throw std::invalid_argument("PhasePulse: dt must be positive and finite");
    }
    for (double p : phi_) {
        if (!std::isfinite(p)) {
            throw std::invalid_argument("PhasePulse: non-finite phase sample");
        }
    }
}

PhasePulse PhasePulse::shifted(double offset) const {
    std::vector<double> out(phi_);
    for (double& p : out) p += offset;
    return PhasePulse(dt_, std::move(out));
}

double Trajectory::max_norm_error() const {
    double worst = 0.0;
    for (const auto& s : states) worst = std::max(worst, std::abs(s.squaredNorm() - 1.0));
    return worst;
}

Trajectory propagate_piecewise(const PhasePulse& pulse, TlsIndex k, const Ket2& psi0) {
    Trajectory traj;
    traj.times.reserve(pulse.size() + 1);
    traj.states.reserve(pulse.size() + 1);
    traj.times.push_back(0.0);
    traj.states.push_back(psi0);
    Ket2 psi = psi0;
    for (std::size_t j = 0; j < pulse.size(); ++j) {
        psi = phase_step_unitary(k, pulse[j], pulse.dt()) * psi;
        traj.times.push_back(static_cast<double>(j + 1) * pulse.dt());
        traj.states.push_back(psi);
    }
    return traj;
}

Ket2 propagate_final(const PhasePulse& pulse, TlsIndex k, const Ket2& psi0) {
    Ket2 psi = psi0;
    for (std::size_t j = 0; j < pulse.size(); ++j) {
        psi = phase_step_unitary(k, pulse[j], pulse.dt()) * psi;
    }
    return psi;
}

Ket2 propagate_constant_detuning(TlsIndex k, double delta, double T, const Ket2& psi0) {
    // delta |1><1| = delta/2 (I - sigma_z), so the traceless part is (-delta sigma_z + sqrt(k) sigma_x)/2.
    const double omega = std::sqrt(static_cast<double>(k.value()) + delta * delta);
    const double c = std::cos(0.5 * omega * T);
    const double s = std::sin(0.5 * omega * T);
    const Mat2 axis = (-delta * pauli(PauliAxis::Z) + k.coupling() * pauli(PauliAxis::X)) / omega;
    const Mat2 u = std::polar(1.0, -0.5 * delta * T) * (c * identity2() - kI * s * axis);
    return u * psi0;
}

Trajectory propagate_detuned_piecewise(double dt, std::span<const double> delta, TlsIndex k,
                                       const Ket2& psi0) {
    Trajectory traj;
    traj.times.push_back(0.0);
    traj.states.push_back(psi0);
    Ket2 psi = psi0;
    for (std::size_t j = 0; j < delta.size(); ++j) {
        psi = propagate_constant_detuning(k, delta[j], dt, psi);
        traj.times.push_back(static_cast<double>(j + 1) * dt);
        traj.states.push_back(psi);
    }
    return traj;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,re_a0,im_a0,re_a1,im_a1\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const auto& s = traj.states[i];
        csv::row(os, {traj.times[i], s(0).real(), s(0).imag(), s(1).real(), s(1).imag()});
    }
}

void write_bloch_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,x,y,z\n";
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        const Vec3 b = bloch_vector(traj.states[i]);
        csv::row(os, {traj.times[i], b.x(), b.y(), b.z()});
    }
}

}  // namespace rydpmp
