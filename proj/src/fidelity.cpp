#include "rydpmp/fidelity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace rydpmp {
namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double clamp01(double f) { return std::clamp(f, 0.0, 1.0); }

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Shared by the torus and per-TLS targets: amplitudes a_k = <t_k|psi_k>.
FidelityGradient overlap_fidelity(std::span<const Ket2> finals, std::span<const Ket2> targets) {
    const std::size_t n = finals.size();
    if (targets.size() != n) throw std::invalid_argument("one target ket per TLS required");
    const double norm = static_cast<double>(n * n + n);
    std::vector<cplx> amp(n);
    double sum_abs = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        amp[k] = targets[k].dot(finals[k]);
        sum_abs += std::abs(amp[k]);
        sum_sq += std::norm(amp[k]);
    }
    FidelityGradient out;
    out.value = (sum_abs * sum_abs + sum_sq) / norm;
    out.grad.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double mag = std::abs(amp[k]);
        // |a| is not differentiable at 0; use the zero subgradient there.
        const cplx unit = mag > 0.0 ? amp[k] / mag : cplx{};
        const double dF_dmag = (2.0 * sum_abs + 2.0 * mag) / norm;
        out.grad[k] = dF_dmag * unit * targets[k];
    }
    return out;
}

struct LineTerms {
    std::vector<cplx> x;       // <0|psi_k>
    std::vector<double> w;     // binomial weights
    double denom = 1.0;
};

LineTerms line_terms(std::span<const Ket2> finals, const PhaseLine& line) {
    const std::size_t n = finals.size();
    if (line.multipliers.size() != n || line.offsets.size() != n) {
        throw std::invalid_argument("PhaseLine needs one multiplier and one offset per TLS");
    }
    LineTerms t;
    t.x.resize(n);
    t.w.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        t.x[k] = finals[k](0);
        t.w[k] = binomial(static_cast<int>(n), static_cast<int>(k + 1));
    }
    const double dim = std::ldexp(1.0, static_cast<int>(n));
    t.denom = dim * (dim + 1.0);
    return t;
}

cplx line_sum(const LineTerms& t, const PhaseLine& line, double theta) {
    cplx s = 1.0;
    for (std::size_t k = 0; k < t.x.size(); ++k) {
        s += t.w[k] * std::polar(1.0, -(line.multipliers[k] * theta + line.offsets[k])) * t.x[k];
    }
    return s;
}

double best_theta(const LineTerms& t, const PhaseLine& line) {
    constexpr int kScan = 256;
    const double step = 2.0 * kPi / kScan;
    auto f = [&](double th) { return std::norm(line_sum(t, line, th)); };
    int best = 0;
    double best_val = -1.0;
    for (int i = 0; i < kScan; ++i) {
        const double v = f(i * step);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }
    // Golden-section refinement on the bracket around the best scan point.
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = (best - 1) * step;
    double b = (best + 1) * step;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-10) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    const double theta = 0.5 * (a + b);
    return f(theta) >= best_val ? theta : best * step;
}

FidelityGradient phaseline_fidelity(std::span<const Ket2> finals, const PhaseLine& line,
                                    double* theta_out) {
    const LineTerms t = line_terms(finals, line);
    const double theta = best_theta(t, line);
    if (theta_out) *theta_out = std::remainder(theta, 2.0 * kPi);
    const cplx s = line_sum(t, line, theta);
    double weighted = 1.0;
    for (std::size_t k = 0; k < t.x.size(); ++k) weighted += t.w[k] * std::norm(t.x[k]);

    FidelityGradient out;
    out.value = (std::norm(s) + weighted) / t.denom;
    out.grad.assign(finals.size(), Ket2::Zero());
    // theta sits at a maximum, so only the explicit dependence on psi contributes.
    for (std::size_t k = 0; k < t.x.size(); ++k) {
        const cplx coef = t.w[k] * std::polar(1.0, -(line.multipliers[k] * theta + line.offsets[k]));
        out.grad[k](0) = (2.0 * std::conj(coef) * s + 2.0 * t.w[k] * t.x[k]) / t.denom;
    }
    return out;
}

std::vector<Ket2> repeated(const Ket2& ket, int n) { return std::vector<Ket2>(n, ket); }

}  // namespace

int tls_count(const TargetManifold& target) {
    return std::visit(overloaded{
                          [](const ExcitationTorus& t) { return t.tls_count; },
                          [](const PhaseLine& l) { return static_cast<int>(l.multipliers.size()); },
                          [](const PerTlsTarget& p) { return static_cast<int>(p.kets.size()); },
                      },
                      target);
}

std::string describe(const TargetManifold& target) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const ExcitationTorus& t) { os << "excitation_torus(N=" << t.tls_count << ")"; },
                   [&](const PhaseLine& l) {
                       os << "phase_line(m=";
                       for (std::size_t k = 0; k < l.multipliers.size(); ++k) {
                           os << (k ? "," : "") << l.multipliers[k];
                       }
                       os << ")";
                   },
                   [&](const PerTlsTarget& p) { os << "per_tls(N=" << p.kets.size() << ")"; },
               },
               target);
    return os.str();
}

double fidelity_torus(std::span<const Ket2> finals) {
    const auto targets = repeated(ket1(), static_cast<int>(finals.size()));
    return clamp01(overlap_fidelity(finals, targets).value);
}

double fidelity_torus(const Ket2& psi1, const Ket2& psi2) {
    const Ket2 finals[] = {psi1, psi2};
    return fidelity_torus(finals);
}

double fidelity_per_tls(std::span<const Ket2> finals, std::span<const Ket2> targets) {
    return fidelity(PerTlsTarget{{targets.begin(), targets.end()}}, finals);
}

PhaseLineFit fidelity_phaseline(std::span<const Ket2> finals, const PhaseLine& line) {
    PhaseLineFit fit;
    fit.value = clamp01(phaseline_fidelity(finals, line, &fit.theta).value);
    return fit;
}

double fidelity_phaseline(const Ket2& psi1, const Ket2& psi2, const PhaseLine& line) {
    const Ket2 finals[] = {psi1, psi2};
    return fidelity_phaseline(finals, line).value;
}

double fidelity(const TargetManifold& target, std::span<const Ket2> finals) {
    return clamp01(fidelity_with_gradient(target, finals).value);
}

FidelityGradient fidelity_with_gradient(const TargetManifold& target, std::span<const Ket2> finals) {
    if (static_cast<int>(finals.size()) != tls_count(target)) {
        throw std::invalid_argument("number of final states does not match the target manifold");
    }
    return std::visit(overloaded{
                          [&](const ExcitationTorus& t) {
                              const auto targets = repeated(ket1(), t.tls_count);
                              return overlap_fidelity(finals, targets);
                          },
                          [&](const PhaseLine& l) { return phaseline_fidelity(finals, l, nullptr); },
                          [&](const PerTlsTarget& p) {
                              std::vector<Ket2> normalized;
                              for (const auto& k : p.kets) normalized.push_back(k.normalized());
                              return overlap_fidelity(finals, normalized);
                          },
                      },
                      target);
}

}  // namespace rydpmp
