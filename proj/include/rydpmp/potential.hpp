#pragma once

namespace rydpmp {

/// V(delta) = c4 delta^4 + c3 delta^3 + c2 delta^2 + c1 delta + c0.
/// Potentials that come out of the normal-extremal reduction have c4 = 1/8 and c3 = 0.
struct QuarticPotential {
    double c0 = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.125;

    double operator()(double delta) const {
        return (((c4 * delta + c3) * delta + c2) * delta + c1) * delta + c0;
    }
    double derivative(double delta) const {
        return ((4.0 * c4 * delta + 3.0 * c3) * delta + 2.0 * c2) * delta + c1;
    }
    bool is_reduced_form(double tol = 0.0) const;
};

/// Conserved quantities of the costate vectors: C = v1z + v2z and radii r1, r2.
struct InvariantTriple {
    double C = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
};

/// Two real roots at +-delta0 and V(0) = v0:
/// V = (delta^2 - delta0^2)(delta^2/8 - v0/delta0^2).
QuarticPotential potential_from_sym(double delta0, double v0);

/// Roots delta_plus > 0 > delta_minus and V(0) = v0:
/// V = (d - d+)(d - d-)(d^2/8 + (d+ + d-) d/8 + v0/(d+ d-)).
QuarticPotential potential_from_asym(double delta_plus, double delta_minus, double v0);

/// Coefficient map from the conserved quantities.
QuarticPotential potential_coeffs(const InvariantTriple& inv);

/// Inverse of potential_coeffs. After substituting the c2 relation, the c0 relation is linear in
/// r2^2, so the branch is unique. Throws NoRealSolution when r1^2 or r2^2 comes out negative.
InvariantTriple recover_invariants(const QuarticPotential& pot, double tol = 1e-12);

}  // namespace rydpmp
