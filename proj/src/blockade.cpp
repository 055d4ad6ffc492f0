#include "rydpmp/blockade.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace rydpmp {
namespace {

constexpr std::array<int, 9> kRydbergCount = {0, 0, 0, 0, 1, 1, 1, 1, 2};

int idx(Basis9 b) { return static_cast<int>(b); }

Mat9 laser_coupling() {
    Mat9 h = Mat9::Zero();
    auto couple = [&h](Basis9 lower, Basis9 upper) {
        h(idx(lower), idx(upper)) = 0.5;
        h(idx(upper), idx(lower)) = 0.5;
    };
    couple(Basis9::S01, Basis9::S0r);
    couple(Basis9::S10, Basis9::Sr0);
    couple(Basis9::S11, Basis9::Sr1);
    couple(Basis9::S11, Basis9::S1r);
    couple(Basis9::S1r, Basis9::Srr);
    couple(Basis9::Sr1, Basis9::Srr);
    return h;
}

// H(phi) = D(phi) H(0) D(phi)^dagger with D = diag(exp(-i n_r phi)), n_r the number of
// Rydberg excitations, so every step exponential shares the eigenbasis of H(0).
Eigen::Matrix<cplx, 9, 1> gauge_phases(double phi) {
    Eigen::Matrix<cplx, 9, 1> d;
    for (int i = 0; i < 9; ++i) d(i) = std::polar(1.0, -kRydbergCount[i] * phi);
    return d;
}

Mat9 step_unitary_unrotated(double B, double dt) {
    Eigen::SelfAdjointEigenSolver<Mat9> eig(blockade_hamiltonian(0.0, B));
    const auto& vecs = eig.eigenvectors();
    Eigen::Matrix<cplx, 9, 1> phases;
    for (int i = 0; i < 9; ++i) phases(i) = std::polar(1.0, -eig.eigenvalues()(i) * dt);
    return vecs * phases.asDiagonal() * vecs.adjoint();
}

BlockadeState9 step(const Mat9& u0, double phi, const BlockadeState9& psi) {
    const auto d = gauge_phases(phi);
    BlockadeState9 tmp = d.conjugate().cwiseProduct(psi);
    tmp = u0 * tmp;
    return d.cwiseProduct(tmp);
}

}  // namespace

BlockadeState9 basis_state9(Basis9 b) {
    BlockadeState9 s = BlockadeState9::Zero();
    s(idx(b)) = 1.0;
    return s;
}

BlockadeState9 w_state9() {
    return (basis_state9(Basis9::S1r) + basis_state9(Basis9::Sr1)) / std::sqrt(2.0);
}

Mat9 blockade_hamiltonian(double phi, double B) {
    Mat9 h = laser_coupling();
    const auto d = gauge_phases(phi);
    h = d.asDiagonal() * h * d.conjugate().asDiagonal();
    h(idx(Basis9::Srr), idx(Basis9::Srr)) = B;
    return h;
}

BlockadeState9 propagate_full_blockade(const PhasePulse& pulse, double B, const BlockadeState9& psi0) {
    if (!(B >= 0.0)) throw std::invalid_argument("blockade strength must be non-negative");
    BlockadeState9 psi = psi0;
    if (pulse.size() == 0) return psi;
    const Mat9 u0 = step_unitary_unrotated(B, pulse.dt());
    for (std::size_t j = 0; j < pulse.size(); ++j) psi = step(u0, pulse[j], psi);
    return psi;
}

BlockadeReport blockade_reduction_error(const PhasePulse& pulse, double B) {
    if (!(B >= 10.0)) throw std::invalid_argument("blockade_reduction_error requires B >= 10");
    BlockadeReport report;
    report.B = B;
    if (pulse.size() == 0) return report;

    const Mat9 u0 = step_unitary_unrotated(B, pulse.dt());
    BlockadeState9 full1 = basis_state9(Basis9::S01);
    BlockadeState9 full2 = basis_state9(Basis9::S11);
    Ket2 eff1 = ket0();
    Ket2 eff2 = ket0();
    const TlsIndex k1(1), k2(2);
    const int rr = idx(Basis9::Srr);
    for (std::size_t j = 0; j < pulse.size(); ++j) {
        full1 = step(u0, pulse[j], full1);
        full2 = step(u0, pulse[j], full2);
        eff1 = phase_step_unitary(k1, pulse[j], pulse.dt()) * eff1;
        eff2 = phase_step_unitary(k2, pulse[j], pulse.dt()) * eff2;
        report.double_excitation = std::max(report.double_excitation, std::norm(full2(rr)));
    }

    const BlockadeState9 embed1 =
        eff1(0) * basis_state9(Basis9::S01) + eff1(1) * basis_state9(Basis9::S0r);
    const BlockadeState9 embed2 = eff2(0) * basis_state9(Basis9::S11) + eff2(1) * w_state9();
    report.infidelity_k1 = std::max(0.0, 1.0 - std::norm(embed1.dot(full1)));
    report.infidelity_k2 = std::max(0.0, 1.0 - std::norm(embed2.dot(full2)));
    return report;
}

}  // namespace rydpmp
