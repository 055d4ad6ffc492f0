#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace rydpmp {

using cplx = std::complex<double>;

/// State of one effective two-level system, components on (|0>_k, |1>_k).
using Ket2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;
/// 2x2 operator that is Hermitian by construction (Hamiltonian slices).
using Hermitian2 = Eigen::Matrix2cd;
using Vec3 = Eigen::Vector3d;

/// Index of an effective TLS; the laser coupling is enhanced by sqrt(k).
class TlsIndex {
public:
    explicit TlsIndex(int k);
    int value() const { return k_; }
    double coupling() const { return coupling_; }

private:
    int k_;
    double coupling_;
};

enum class PauliAxis { X, Y, Z };

inline constexpr double kPi = std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

const Mat2& pauli(PauliAxis mu);
const Mat2& identity2();

Ket2 ket0();
Ket2 ket1();

/// H_k = (sqrt(k)/2) (cos(phi) sigma_x - sin(phi) sigma_y), with Omega = Omega_max = 1.
Hermitian2 hamiltonian_phase(TlsIndex k, double phi);

/// Rotating-frame form H_k = delta |1><1| + (sqrt(k)/2) sigma_x.
Hermitian2 hamiltonian_detuned(TlsIndex k, double delta);

/// Im <chi| sigma_mu |psi>. Inputs are not required to be normalized.
double imag_sandwich(const Ket2& chi, PauliAxis mu, const Ket2& psi);

bool is_hermitian(const Mat2& m, double tol = 1e-14);

/// Exact step propagator exp(-i H_k(phi) tau) for the phase Hamiltonian.
Mat2 phase_step_unitary(TlsIndex k, double phi, double tau);

/// Bloch vector (x, y, z) with x = 2 Re(a0* a1), y = 2 Im(a0* a1), z = |a0|^2 - |a1|^2.
Vec3 bloch_vector(const Ket2& psi);

}  // namespace rydpmp
