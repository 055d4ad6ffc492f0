#include "rydpmp/grape.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rydpmp/bfgs.hpp"
#include "rydpmp/errors.hpp"

namespace rydpmp {
namespace {

struct StepCoeffs {
    std::vector<double> c;
    std::vector<double> s;
};

StepCoeffs step_coeffs(int tls, double dt) {
    StepCoeffs out;
    for (int k = 1; k <= tls; ++k) {
        const double angle = 0.5 * std::sqrt(static_cast<double>(k)) * dt;
        out.c.push_back(std::cos(angle));
        out.s.push_back(std::sin(angle));
    }
    return out;
}

// U = c I - i s [[0, e], [conj(e), 0]]
inline Ket2 apply(double c, double s, cplx e, const Ket2& psi) {
    Ket2 out;
    out(0) = c * psi(0) - kI * s * e * psi(1);
    out(1) = -kI * s * std::conj(e) * psi(0) + c * psi(1);
    return out;
}

// U^dagger = c I + i s [[0, e], [conj(e), 0]]
inline Ket2 apply_adjoint(double c, double s, cplx e, const Ket2& psi) {
    Ket2 out;
    out(0) = c * psi(0) + kI * s * e * psi(1);
    out(1) = kI * s * std::conj(e) * psi(0) + c * psi(1);
    return out;
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double sample_at(const PhasePulse& p, double u) {
    const double x = u * static_cast<double>(p.size()) - 0.5;
    if (x <= 0.0) return p[0];
    const auto i = static_cast<std::size_t>(std::floor(x));
    if (i + 1 >= p.size()) return p[p.size() - 1];
    const double w = x - static_cast<double>(i);
    return (1.0 - w) * p[i] + w * p[i + 1];
}

}  // namespace

double grape_value_and_gradient(const PhasePulse& pulse, const TargetManifold& target,
                                std::vector<double>& grad) {
    const int tls = tls_count(target);
    const std::size_t m = pulse.size();
    const StepCoeffs co = step_coeffs(tls, pulse.dt());
    std::vector<cplx> e(m);
    for (std::size_t j = 0; j < m; ++j) e[j] = std::polar(1.0, pulse[j]);

    // states[k][j] is the state before step j.
    std::vector<std::vector<Ket2>> states(tls, std::vector<Ket2>(m + 1));
    std::vector<Ket2> finals(tls);
    for (int k = 0; k < tls; ++k) {
        states[k][0] = ket0();
        for (std::size_t j = 0; j < m; ++j) states[k][j + 1] = apply(co.c[k], co.s[k], e[j], states[k][j]);
        finals[k] = states[k][m];
    }
    const FidelityGradient end = fidelity_with_gradient(target, finals);
    grad.assign(m, 0.0);
    for (int k = 0; k < tls; ++k) {
        Ket2 lambda = end.grad[k];
        for (std::size_t j = m; j-- > 0;) {
            const Ket2& psi = states[k][j];
            // dU/dphi = s [[0, e], [-conj(e), 0]]
            const cplx d0 = co.s[k] * e[j] * psi(1);
            const cplx d1 = -co.s[k] * std::conj(e[j]) * psi(0);
            grad[j] += (std::conj(lambda(0)) * d0 + std::conj(lambda(1)) * d1).real();
            lambda = apply_adjoint(co.c[k], co.s[k], e[j], lambda);
        }
    }
    return end.value;
}

GrapeResult grape_optimize(const GrapeConfig& cfg, const TargetManifold& target,
                           const std::vector<double>& phi_init) {
    if (cfg.segments < 2) throw std::invalid_argument("GRAPE needs at least 2 segments");
    if (!(cfg.T > 0.0)) throw std::invalid_argument("GRAPE needs T > 0");
    const auto m = static_cast<std::size_t>(cfg.segments);
    if (!phi_init.empty() && phi_init.size() != m) {
        throw std::invalid_argument("phi_init must have one value per segment");
    }
    const double dt = cfg.T / static_cast<double>(m);

    auto fg = [&](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
        const PhasePulse p(dt, std::vector<double>(x.data(), x.data() + x.size()));
        std::vector<double> grad;
        const double f = grape_value_and_gradient(p, target, grad);
        g = -Eigen::Map<const Eigen::VectorXd>(grad.data(), static_cast<Eigen::Index>(grad.size()));
        return -f;
    };

    BfgsOptions bopts;
    bopts.max_iters = cfg.max_iters;
    bopts.grad_tol = cfg.grad_tol;

    std::mt19937_64 rng(cfg.seed);
    GrapeResult best;
    best.fidelity = -1.0;
    for (int attempt = 0; attempt <= cfg.restarts; ++attempt) {
        Eigen::VectorXd x0(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double base = phi_init.empty() ? 0.0 : phi_init[j];
            const double ramp = cfg.ramp * static_cast<double>(j);
            const double noise = attempt == 0 ? 0.0 : cfg.restart_amplitude * (2.0 * uniform01(rng) - 1.0);
            x0[static_cast<Eigen::Index>(j)] = base + ramp + noise;
        }
        std::vector<double> history;
        auto cb = [&](int, const Eigen::VectorXd&, double value) {
            history.push_back(-value);
            const auto w = static_cast<std::size_t>(cfg.stall_window);
            if (history.size() > w && history.back() < cfg.target_fidelity &&
                history.back() - history[history.size() - 1 - w] < cfg.stall_gain) {
                return false;
            }
            return true;
        };
        const BfgsResult r = bfgs_minimize(ObjectiveWithGradient(fg), x0, bopts, cb);
        const double f = -r.value;
        if (f > best.fidelity) {
            best.pulse = PhasePulse(dt, std::vector<double>(r.x.data(), r.x.data() + r.x.size()));
            best.fidelity = f;
            best.iterations = r.iterations;
        }
        best.attempts = attempt + 1;
        if (best.fidelity >= cfg.target_fidelity) return best;
    }
    std::ostringstream msg;
    msg << "GRAPE stalled at fidelity " << best.fidelity << " after " << best.attempts << " attempts (T = "
        << cfg.T << ", M = " << cfg.segments << ")";
    throw Stalled(msg.str());
}

double gradient_check(const GrapeConfig& cfg, const TargetManifold& target, const std::vector<double>& phi,
                      double h) {
    if (phi.empty()) return 0.0;
    const double dt = cfg.T / static_cast<double>(phi.size());
    std::vector<double> grad;
    grape_value_and_gradient(PhasePulse(dt, phi), target, grad);
    std::vector<double> probe = phi;
    double worst = 0.0;
    double scale = 0.0;
    std::vector<double> fd(phi.size());
    auto value = [&](const std::vector<double>& p) {
        std::vector<double> unused;
        return grape_value_and_gradient(PhasePulse(dt, p), target, unused);
    };
    for (std::size_t j = 0; j < phi.size(); ++j) {
        probe[j] = phi[j] + h;
        const double fp = value(probe);
        probe[j] = phi[j] - h;
        const double fm = value(probe);
        probe[j] = phi[j];
        fd[j] = (fp - fm) / (2.0 * h);
        scale = std::max(scale, std::abs(fd[j]));
    }
    for (std::size_t j = 0; j < phi.size(); ++j) worst = std::max(worst, std::abs(grad[j] - fd[j]));
    return worst / std::max(scale, 1e-3);
}

PulseAlignment compare_pulses(const PhasePulse& a, const PhasePulse& b, const CompareOptions& opts) {
    const double ta = a.duration();
    const double tb = b.duration();
    if (!opts.normalize_time && std::abs(ta - tb) > opts.duration_tol * std::max({ta, tb, 1.0})) {
        std::ostringstream msg;
        msg << "pulse durations differ: " << ta << " vs " << tb;
        throw DurationMismatch(msg.str());
    }
    PulseAlignment best;
    const std::size_t n = std::min(a.size(), b.size());
    best.samples = n;
    if (n == 0) return best;
    std::vector<double> pa(n);
    std::vector<double> pb(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double u = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
        pa[j] = sample_at(a, u);
        pb[j] = sample_at(b, u);
    }
    best.linf = std::numeric_limits<double>::infinity();
    for (int rev = 0; rev < 2; ++rev) {
        for (int conj = 0; conj < 2; ++conj) {
            std::vector<double> d(n);
            cplx mean = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                double v = rev ? pb[n - 1 - j] : pb[j];
                if (conj) v = -v;
                d[j] = pa[j] - v;
                mean += std::polar(1.0, d[j]);
            }
            const double center = std::arg(mean);
            double lo = std::numeric_limits<double>::infinity();
            double hi = -lo;
            double sum = 0.0;
            for (double& x : d) {
                x = std::remainder(x - center, 2.0 * kPi);
                lo = std::min(lo, x);
                hi = std::max(hi, x);
                sum += x;
            }
            const double linf = 0.5 * (hi - lo);
            if (linf < best.linf) {
                const double avg = sum / static_cast<double>(n);
                double sq = 0.0;
                for (double x : d) sq += (x - avg) * (x - avg);
                best.linf = linf;
                best.l2 = std::sqrt(sq / static_cast<double>(n));
                best.offset = std::remainder(center + 0.5 * (hi + lo), 2.0 * kPi);
                best.reversed = rev != 0;
                best.conjugated = conj != 0;
            }
        }
    }
    return best;
}

}  // namespace rydpmp
