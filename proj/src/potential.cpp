#include "rydpmp/potential.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rydpmp/errors.hpp"

namespace rydpmp {

bool QuarticPotential::is_reduced_form(double tol) const {
    return std::abs(c4 - 0.125) <= tol && std::abs(c3) <= tol;
}

QuarticPotential potential_from_sym(double delta0, double v0) {
    if (!(delta0 > 0.0)) throw std::invalid_argument("potential_from_sym: delta0 must be > 0");
    if (!(v0 < 0.0)) {
        throw std::invalid_argument("potential_from_sym: v0 must be < 0 (no allowed region at 0)");
    }
    const double d2 = delta0 * delta0;
    QuarticPotential p;
    p.c4 = 0.125;
    p.c3 = 0.0;
    p.c2 = -v0 / d2 - d2 / 8.0;
    p.c1 = 0.0;
    p.c0 = v0;
    return p;
}

QuarticPotential potential_from_asym(double delta_plus, double delta_minus, double v0) {
    if (!(delta_plus > 0.0) || !(delta_minus < 0.0)) {
        throw std::invalid_argument("potential_from_asym: requires delta_plus > 0 > delta_minus");
    }
    if (!(v0 < 0.0)) throw std::invalid_argument("potential_from_asym: v0 must be < 0");
    // (d^2 - s d + p)(d^2/8 + s d/8 + q), the cubic terms cancel.
    const double s = delta_plus + delta_minus;
    const double p = delta_plus * delta_minus;
    const double q = v0 / p;
    QuarticPotential pot;
    pot.c4 = 0.125;
    pot.c3 = 0.0;
    pot.c2 = q - s * s / 8.0 + p / 8.0;
    pot.c1 = -s * q + p * s / 8.0;
    pot.c0 = p * q;
    return pot;
}

QuarticPotential potential_coeffs(const InvariantTriple& inv) {
    const double C2 = inv.C * inv.C;
    const double R1 = inv.r1 * inv.r1;
    const double R2 = inv.r2 * inv.r2;
    QuarticPotential p;
    p.c4 = 0.125;
    p.c3 = 0.0;
    p.c2 = (-2.0 * C2 + R1 - 2.0 * R2 + 12.0) / 16.0;
    p.c1 = -inv.C;
    const double a = 6.0 * C2 - R1 - 2.0 * R2 + 4.0;
    p.c0 = (a * a - 8.0 * (4.0 * C2 - R1) * (C2 - R2)) / 128.0;
    return p;
}

InvariantTriple recover_invariants(const QuarticPotential& pot, double tol) {
    if (!pot.is_reduced_form(1e-14)) {
        throw std::invalid_argument("recover_invariants: potential must have c4 = 1/8 and c3 = 0");
    }
    const double C = -pot.c1;
    const double C2 = C * C;
    // c2 relation: r1^2 = a + 2 r2^2.
    const double a = 16.0 * pot.c2 + 2.0 * C2 - 12.0;
    // c0 relation with r1^2 eliminated: 128 c0 = b^2 - 8 (4C^2 - a) C^2 - 32 r2^2.
    const double b = 6.0 * C2 + 4.0 - a;
    double R2 = (b * b - 8.0 * (4.0 * C2 - a) * C2 - 128.0 * pot.c0) / 32.0;
    double R1 = a + 2.0 * R2;
    const double scale = std::max({1.0, std::abs(R1), std::abs(R2)});
    if (R1 < -tol * scale || R2 < -tol * scale) {
        std::ostringstream msg;
        msg << "no real costate radii for potential (r1^2 = " << R1 << ", r2^2 = " << R2 << ")";
        throw NoRealSolution(msg.str());
    }
    // Squared radii carry rounding noise of a few ulps of the coefficients; below that they are zero.
    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
    if (R1 <= floor) R1 = 0.0;
    if (R2 <= floor) R2 = 0.0;
    return InvariantTriple{C, std::sqrt(R1), std::sqrt(R2)};
}

}  // namespace rydpmp
