#include "rydpmp/detuning.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "rydpmp/errors.hpp"

namespace rydpmp {
namespace {

struct Phase2 {
    double x;  // delta
    double v;  // d delta / dt
};

Phase2 rk4_step(const QuarticPotential& pot, Phase2 y, double h) {
    const double k1x = y.v;
    const double k1v = -pot.derivative(y.x);
    const double k2x = y.v + 0.5 * h * k1v;
    const double k2v = -pot.derivative(y.x + 0.5 * h * k1x);
    const double k3x = y.v + 0.5 * h * k2v;
    const double k3v = -pot.derivative(y.x + 0.5 * h * k2x);
    const double k4x = y.v + h * k3v;
    const double k4v = -pot.derivative(y.x + h * k3x);
    return {y.x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
            y.v + h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)};
}

int sign_of(double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); }

Phase2 initial_state(const QuarticPotential& pot, int sign) {
    const double v0 = pot(0.0);
    if (!(v0 < 0.0)) {
        std::ostringstream msg;
        msg << "detuning shooting needs V(0) < 0, got " << v0;
        throw std::invalid_argument(msg.str());
    }
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    return {0.0, sign * std::sqrt(-2.0 * v0)};
}

}  // namespace

double DetuningCurve::max_energy_residual(const QuarticPotential& pot) const {
    double worst = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) {
        worst = std::max(worst, std::abs(0.5 * ddelta[i] * ddelta[i] + pot(delta[i])));
    }
    return worst;
}

double crossing_time(const QuarticPotential& pot, int crossings, int sign,
                     const ShootingOptions& opts) {
    if (crossings < 1) throw std::invalid_argument("crossings must be >= 1");
    if (!(opts.dt > 0.0)) throw std::invalid_argument("dt must be positive");
    Phase2 y = initial_state(pot, sign);
    double t = 0.0;
    int side = sign;
    int count = 0;
    while (t < opts.time_cap) {
        const Phase2 next = rk4_step(pot, y, opts.dt);
        const int s = sign_of(next.x);
        if (s != side) {
            if (++count == crossings) {
                // The one-step RK4 map is continuous in the step length; bisect on it.
                double lo = 0.0;
                double hi = opts.dt;
                for (int it = 0; it < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * (t + hi); ++it) {
                    const double mid = 0.5 * (lo + hi);
                    if (sign_of(rk4_step(pot, y, mid).x) == side) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return t + 0.5 * (lo + hi);
            }
            side = -side;
        }
        y = next;
        t += opts.dt;
    }
    std::ostringstream msg;
    msg << "detuning has fewer than " << crossings << " zero crossings before t = " << opts.time_cap;
    throw NoCrossing(msg.str());
}

DetuningCurve integrate_detuning(const QuarticPotential& pot, int crossings, int sign,
                                 const ShootingOptions& opts) {
    const double T = crossing_time(pot, crossings, sign, opts);
    std::size_t n = opts.steps.value_or(0);
    if (n == 0) {
        n = static_cast<std::size_t>(std::ceil(T / opts.dt - 1e-9));
        n = std::max<std::size_t>(n, 1);
    }
    DetuningCurve curve;
    curve.T = T;
    curve.dt = T / static_cast<double>(n);
    curve.delta.resize(n + 1);
    curve.ddelta.resize(n + 1);
    Phase2 y = initial_state(pot, sign);
    curve.delta[0] = y.x;
    curve.ddelta[0] = y.v;
    for (std::size_t i = 1; i <= n; ++i) {
        y = rk4_step(pot, y, curve.dt);
        curve.delta[i] = y.x;
        curve.ddelta[i] = y.v;
    }
    const double drift = curve.max_energy_residual(pot);
    if (drift > opts.energy_tol) {
        std::ostringstream msg;
        msg << "energy residual " << drift << " exceeds " << opts.energy_tol << " (dt = " << curve.dt
            << " too large)";
        throw EnergyDrift(msg.str());
    }
    return curve;
}

std::vector<double> node_phases(const DetuningCurve& curve, double phi0) {
    std::vector<double> phi(curve.delta.size());
    if (phi.empty()) return phi;
    phi[0] = phi0;
    for (std::size_t i = 1; i < phi.size(); ++i) {
        phi[i] = phi[i - 1] + 0.5 * curve.dt * (curve.delta[i - 1] + curve.delta[i]);
    }
    return phi;
}

PhasePulse phase_from_detuning(const DetuningCurve& curve, double phi0) {
    const auto nodes = node_phases(curve, phi0);
    std::vector<double> steps(curve.steps());
    for (std::size_t j = 0; j < steps.size(); ++j) steps[j] = 0.5 * (nodes[j] + nodes[j + 1]);
    return PhasePulse(curve.dt, std::move(steps));
}

DetuningCurve mirrored(const DetuningCurve& curve) {
    DetuningCurve out = curve;
    const std::size_t n = curve.delta.size();
    for (std::size_t i = 0; i < n; ++i) {
        out.delta[i] = curve.delta[n - 1 - i];
        out.ddelta[i] = -curve.ddelta[n - 1 - i];
    }
    return out;
}

PhasePulse mirrored(const PhasePulse& pulse) {
    std::vector<double> out(pulse.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = 2.0 * kPi - pulse[pulse.size() - 1 - j];
    return PhasePulse(pulse.dt(), std::move(out));
}

}  // namespace rydpmp
