#include "rydpmp/quantum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rydpmp {

TlsIndex::TlsIndex(int k) : k_(k), coupling_(std::sqrt(static_cast<double>(k))) {
    if (k < 1) {
        throw std::invalid_argument("TLS index must be >= 1, got " + std::to_string(k));
    }
}

const Mat2& pauli(PauliAxis mu) {
    static const Mat2 sx = (Mat2() << 0.0, 1.0, 1.0, 0.0).finished();
    static const Mat2 sy = (Mat2() << 0.0, -kI, kI, 0.0).finished();
    static const Mat2 sz = (Mat2() << 1.0, 0.0, 0.0, -1.0).finished();
    switch (mu) {
        case PauliAxis::X: return sx;
        case PauliAxis::Y: return sy;
        case PauliAxis::Z: return sz;
    }
    return sz;
}

const Mat2& identity2() {
    static const Mat2 id = Mat2::Identity();
    return id;
}

Ket2 ket0() { return Ket2(1.0, 0.0); }
Ket2 ket1() { return Ket2(0.0, 1.0); }

Hermitian2 hamiltonian_phase(TlsIndex k, double phi) {
    const double half = 0.5 * k.coupling();
    Hermitian2 h;
    h << 0.0, half * std::polar(1.0, phi),
         half * std::polar(1.0, -phi), 0.0;
    return h;
}

Hermitian2 hamiltonian_detuned(TlsIndex k, double delta) {
    const double half = 0.5 * k.coupling();
    Hermitian2 h;
    h << 0.0, half,
         half, delta;
    return h;
}

double imag_sandwich(const Ket2& chi, PauliAxis mu, const Ket2& psi) {
    return chi.dot(pauli(mu) * psi).imag();
}

bool is_hermitian(const Mat2& m, double tol) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Mat2 phase_step_unitary(TlsIndex k, double phi, double tau) {
    // (H / s)^2 = I with s = sqrt(k)/2, so the exponential is a plain rotation.
    const double angle = 0.5 * k.coupling() * tau;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat2 u;
    u << c, -kI * s * std::polar(1.0, phi),
         -kI * s * std::polar(1.0, -phi), c;
    return u;
}

Vec3 bloch_vector(const Ket2& psi) {
    const cplx coh = std::conj(psi(0)) * psi(1);
    return Vec3(2.0 * coh.real(), 2.0 * coh.imag(), std::norm(psi(0)) - std::norm(psi(1)));
}

}  // namespace rydpmp
