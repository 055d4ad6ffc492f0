#pragma once

#include <array>
#include <string_view>

#include <Eigen/Dense>

#include "rydpmp/propagator.hpp"

namespace rydpmp {

/// Two-atom basis with the laser on |1> <-> |r>. The order is part of the file format.
enum class Basis9 : int { S00 = 0, S01, S10, S11, S0r, Sr0, S1r, Sr1, Srr };

inline constexpr std::array<std::string_view, 9> kBasis9Labels = {
    "00", "01", "10", "11", "0r", "r0", "1r", "r1", "rr"};

using BlockadeState9 = Eigen::Matrix<cplx, 9, 1>;
using Mat9 = Eigen::Matrix<cplx, 9, 9>;

BlockadeState9 basis_state9(Basis9 b);

/// (|1r> + |r1>) / sqrt(2), the excited state of the k = 2 block.
BlockadeState9 w_state9();

/// Full Hamiltonian at phase phi: (1/2) sum_j (e^{i phi} |1><r|_j + h.c.) + B |rr><rr|.
Mat9 blockade_hamiltonian(double phi, double B);

/// Exact propagation through every pulse step.
BlockadeState9 propagate_full_blockade(const PhasePulse& pulse, double B, const BlockadeState9& psi0);

struct BlockadeReport {
    double B = 0.0;
    double infidelity_k1 = 0.0;   // block |01> <-> |0r>
    double infidelity_k2 = 0.0;   // block |11> <-> |W>
    double double_excitation = 0.0;  // max over time of |<rr|psi>|^2 starting from |11>

    double max_infidelity() const { return std::max(infidelity_k1, infidelity_k2); }
};

/// Compares the 9-level evolution of |01> and |11> against the effective k = 1, 2 TLSs.
BlockadeReport blockade_reduction_error(const PhasePulse& pulse, double B);

}  // namespace rydpmp
