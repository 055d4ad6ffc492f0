#include "rydpmp/abnormal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "rydpmp/csv.hpp"

namespace rydpmp {
namespace {

void track(InfeasibilityWitness& w, std::int64_t n, double residual, std::int64_t& next_mark) {
    if (residual < w.min_residual) {
        w.min_residual = residual;
        w.argmin = n;
    }
    if (!(residual > 0.0)) w.all_positive = false;
    if (n + 1 == next_mark) {
        w.running_min.emplace_back(n + 1, w.min_residual);
        next_mark *= 10;
    }
}

double gamma(const Ket2& psi) { return std::arg(psi(0)); }

}  // namespace

double abnormal_time_bound() { return 2.0 * std::sqrt(3.0) * kPi; }

std::vector<AbnormalCandidate> abnormal_case2_scan(int l_max) {
    if (l_max < 2) throw std::invalid_argument("l_max must be >= 2");
    std::vector<AbnormalCandidate> out;
    for (int l = 1; l <= l_max; ++l) {
        for (int lp = l + 1; lp <= l_max && lp * lp <= 2 * l * l; ++lp) {
            AbnormalCandidate c;
            c.l = l;
            c.l_prime = lp;
            const double gap = static_cast<double>(lp * lp - l * l);
            c.delta = std::sqrt(static_cast<double>(2 * l * l - lp * lp) / gap);
            c.T = 2.0 * kPi * std::sqrt(gap);
            c.gate_phase_error = std::numeric_limits<double>::infinity();
            c.closure_k1 = 1.0;
            c.closure_k2 = 1.0;
            for (double d : {c.delta, -c.delta}) {
                const Ket2 p1 = propagate_constant_detuning(TlsIndex(1), d, c.T, ket0());
                const Ket2 p2 = propagate_constant_detuning(TlsIndex(2), d, c.T, ket0());
                c.closure_k1 = std::min(c.closure_k1, std::abs(p1(0)));
                c.closure_k2 = std::min(c.closure_k2, std::abs(p2(0)));
                const double err = std::abs(std::remainder(gamma(p2) - 2.0 * gamma(p1) - kPi, 2.0 * kPi));
                c.gate_phase_error = std::min(c.gate_phase_error, err);
            }
            c.gate_phase_achieved = c.gate_phase_error < 1e-6;
            out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.T != b.T ? a.T < b.T : a.l < b.l;
    });
    return out;
}

void write_candidates_csv(std::ostream& os, const std::vector<AbnormalCandidate>& candidates) {
    os << "l,l_prime,delta,T,gate_phase_achieved\n";
    for (const auto& c : candidates) {
        os << c.l << ',' << c.l_prime << ',' << csv::format(c.delta) << ',' << csv::format(c.T) << ','
           << (c.gate_phase_achieved ? 1 : 0) << '\n';
    }
}

InfeasibilityWitness case1_exact_infeasibility(std::int64_t n_max) {
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    InfeasibilityWitness w;
    w.min_residual = std::numeric_limits<double>::infinity();
    const long double root2 = std::sqrt(2.0L);
    const long double pi = 3.141592653589793238462643383279502884L;
    std::int64_t mark = 1;
    for (std::int64_t n = 0; n <= n_max; ++n) {
        // sqrt(2) x_n - pi/2 = pi (sqrt(2) (n + 1/2) - 1/2); distance to pi Z.
        const long double u = root2 * (static_cast<long double>(n) + 0.5L) - 0.5L;
        const long double frac = u - std::floor(u);
        const double residual = static_cast<double>(pi * std::min(frac, 1.0L - frac));
        track(w, n, residual, mark);
    }
    if (w.running_min.empty() || w.running_min.back().first != n_max + 1) {
        w.running_min.emplace_back(n_max + 1, w.min_residual);
    }
    return w;
}

InfeasibilityWitness case1_rational_control(std::int64_t p, std::int64_t q, std::int64_t n_max) {
    if (q <= 0 || p <= 0) throw std::invalid_argument("p and q must be positive");
    if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
    InfeasibilityWitness w;
    w.min_residual = std::numeric_limits<double>::infinity();
    std::int64_t mark = 1;
    const std::int64_t den = 2 * q;
    for (std::int64_t n = 0; n <= n_max; ++n) {
        // (p/q)(n + 1/2) - 1/2 = (p (2n + 1) - q) / (2q)
        const std::int64_t num = ((p * (2 * n + 1) - q) % den + den) % den;
        const double residual = kPi * static_cast<double>(std::min(num, den - num)) / static_cast<double>(den);
        track(w, n, residual, mark);
    }
    if (w.running_min.empty() || w.running_min.back().first != n_max + 1) {
        w.running_min.emplace_back(n_max + 1, w.min_residual);
    }
    return w;
}

PhasePulse constant_detuning_pulse(double a_over_b, double c, double T, double dt) {
    if (!(T > 0.0)) throw std::invalid_argument("constant_detuning_pulse: T must be > 0");
    if (!(dt > 0.0)) throw std::invalid_argument("constant_detuning_pulse: dt must be > 0");
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(T / dt - 1e-9)));
    const double h = T / static_cast<double>(n);
    std::vector<double> phi(n);
    for (std::size_t j = 0; j < n; ++j) phi[j] = a_over_b * (static_cast<double>(j) + 0.5) * h + c;
    return PhasePulse(h, std::move(phi));
}

}  // namespace rydpmp
