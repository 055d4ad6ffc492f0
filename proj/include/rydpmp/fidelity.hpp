#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "rydpmp/quantum.hpp"

namespace rydpmp {

/// Every TLS in |1>_k, each with a free phase.
struct ExcitationTorus {
    int tls_count = 2;
};

/// Phase-gate line (e^{i(m_k theta + o_k)} |0>_k)_k, theta free. m = (1, 2), o = (0, pi) is CZ.
struct PhaseLine {
    std::vector<int> multipliers;
    std::vector<double> offsets;

    static PhaseLine cz() { return PhaseLine{{1, 2}, {0.0, kPi}}; }
};

/// One target ket per TLS, each up to a free phase.
struct PerTlsTarget {
    std::vector<Ket2> kets;
};

using TargetManifold = std::variant<ExcitationTorus, PhaseLine, PerTlsTarget>;

int tls_count(const TargetManifold& target);
std::string describe(const TargetManifold& target);

/// ((sum_k |a_k|)^2 + sum_k |a_k|^2) / (N^2 + N) with a_k = <1|psi_k>: the torus fidelity with
/// its free phases chosen to maximize it, so a perfect transfer scores 1.
double fidelity_torus(std::span<const Ket2> finals);
double fidelity_torus(const Ket2& psi1, const Ket2& psi2);

/// Same structure with a_k = <target_k|psi_k>.
double fidelity_per_tls(std::span<const Ket2> finals, std::span<const Ket2> targets);

struct PhaseLineFit {
    double value = 0.0;
    double theta = 0.0;
};

/// Gate fidelity of the diagonal phase gate picked by the line, maximized over theta:
///   F(theta) = (|1 + sum_k w_k y_k|^2 + 1 + sum_k w_k |y_k|^2) / (D (D + 1)),
/// y_k = exp(-i (m_k theta + o_k)) <0|psi_k>, w_k = binom(N, k), D = 2^N.
/// The leading 1 is the untouched |0...0> component; it pins the phases relative to each other,
/// so F = 1 exactly on the line. theta comes from a 256-point scan refined by golden section.
PhaseLineFit fidelity_phaseline(std::span<const Ket2> finals, const PhaseLine& line);
double fidelity_phaseline(const Ket2& psi1, const Ket2& psi2, const PhaseLine& line);

double fidelity(const TargetManifold& target, std::span<const Ket2> finals);

/// Value plus the Wirtinger gradient g_k = dF/dRe(psi_k) + i dF/dIm(psi_k), so that
/// F(psi + eps d) = F(psi) + eps * sum_k Re<g_k|d_k> + O(eps^2).
struct FidelityGradient {
    double value = 0.0;
    std::vector<Ket2> grad;
};

FidelityGradient fidelity_with_gradient(const TargetManifold& target, std::span<const Ket2> finals);

}  // namespace rydpmp
