#pragma once

#include <string>
#include <vector>

#include "rydpmp/detuning.hpp"
#include "rydpmp/potential.hpp"
#include "rydpmp/quantum.hpp"
#include "rydpmp/record.hpp"

namespace rydpmp {

/// v_k^(mu) = Im <chi_k|sigma_mu|psi_k> sampled on a time grid; vectors[k-1][i] is TLS k at times[i].
struct PMPVectors {
    std::vector<double> times;
    std::vector<std::vector<Vec3>> vectors;

    std::size_t tls_count() const { return vectors.size(); }
    std::size_t samples() const { return times.size(); }
};

/// (sum_k sqrt(k) v_k^x)^2 + (sum_k sqrt(k) v_k^y)^2, which equals 4 on normal extremals.
double transverse_constraint(const std::vector<Vec3>& v);

/// v_k from state and costate, for every k.
std::vector<Vec3> pmp_vectors_from_states(const std::vector<Ket2>& chi, const std::vector<Ket2>& psi);

/// Algebraic reconstruction of (v1, v2) along an N = 2 normal extremal:
/// z1 = 2C - 2 delta, z2 = 2 delta - C, transverse radii sqrt(r_k^2 - z_k^2), the relative angle
/// from the "= 4" constraint and the z1 equation of motion, and the overall angle from
/// cos(phi) = (v1x + sqrt(2) v2x)/2, sin(phi) = -(v1y + sqrt(2) v2y)/2.
PMPVectors reconstruct_vectors(const DetuningCurve& curve, const InvariantTriple& inv,
                               double phi0 = 0.0);

struct VerifyTolerances {
    double energy = 1e-6;
    double radius = 1e-6;
    double conserved_c = 1e-6;
    double constraint = 1e-5;
    double vector_ode = 1e-3;
    double detuning = 1e-6;
    double coefficients = 1e-9;
};

struct VerificationCheck {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed() const { return residual <= tolerance; }
};

struct VerificationReport {
    std::vector<VerificationCheck> checks;

    bool passed() const;
    const VerificationCheck* find(const std::string& name) const;
    std::vector<std::string> failures() const;
};

/// Checks every normal-extremal invariant on a record. Throws MissingPotential when the record
/// has no potential (abnormal, constant-detuning records are out of its domain).
VerificationReport verify_pmp(const ExtremalRecord& record, const VerifyTolerances& tol = {});

struct CostateRun {
    PMPVectors vectors;
    double max_constraint_violation = 0.0;  // |transverse_constraint - 4|
    double max_radius_drift = 0.0;
    double max_c_drift = 0.0;               // drift of sum_k v_k^z
};

/// Integrates v_k' = sqrt(k) (cos phi, -sin phi, 0) x v_k for k = 1..N driven by the pulse.
/// Each step is an exact rotation. The initial vectors must satisfy the "= 4" constraint and the
/// control consistency relations at phi0, else InconsistentInitialData.
CostateRun costate_ode_general(const PhasePulse& pulse, const std::vector<Vec3>& v_init, double phi0,
                               double consistency_tol = 1e-6);

/// Same system with the control eliminated, cos phi = S_x/|S|, sin phi = -S_y/|S|: the 3N quadratic
/// ODEs. Classical RK4 with step dt up to T.
CostateRun costate_ode_autonomous(const std::vector<Vec3>& v_init, double T, double dt);

}  // namespace rydpmp
