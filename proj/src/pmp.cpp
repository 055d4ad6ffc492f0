#include "rydpmp/pmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rydpmp/errors.hpp"

namespace rydpmp {
namespace {

Vec3 control_axis(double phi) { return Vec3(std::cos(phi), -std::sin(phi), 0.0); }

Vec3 rotate(const Vec3& v, const Vec3& n, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return v * c + n.cross(v) * s + n * (n.dot(v) * (1.0 - c));
}

Eigen::Vector2d transverse_sum(const std::vector<Vec3>& v) {
    Eigen::Vector2d s = Eigen::Vector2d::Zero();
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double w = std::sqrt(static_cast<double>(k + 1));
        s.x() += w * v[k].x();
        s.y() += w * v[k].y();
    }
    return s;
}

double z_sum(const std::vector<Vec3>& v) {
    double c = 0.0;
    for (const auto& x : v) c += x.z();
    return c;
}

void track_invariants(CostateRun& run, const std::vector<Vec3>& v, const std::vector<double>& r0,
                      double c0) {
    run.max_constraint_violation =
        std::max(run.max_constraint_violation, std::abs(transverse_constraint(v) - 4.0));
    for (std::size_t k = 0; k < v.size(); ++k) {
        run.max_radius_drift = std::max(run.max_radius_drift, std::abs(v[k].norm() - r0[k]));
    }
    run.max_c_drift = std::max(run.max_c_drift, std::abs(z_sum(v) - c0));
}

CostateRun start_run(const std::vector<Vec3>& v_init, std::vector<double>& r0, double& c0) {
    CostateRun run;
    run.vectors.vectors.assign(v_init.size(), {});
    r0.clear();
    for (const auto& v : v_init) r0.push_back(v.norm());
    c0 = z_sum(v_init);
    return run;
}

void record_sample(CostateRun& run, double t, const std::vector<Vec3>& v) {
    run.vectors.times.push_back(t);
    for (std::size_t k = 0; k < v.size(); ++k) run.vectors.vectors[k].push_back(v[k]);
}

}  // namespace

double transverse_constraint(const std::vector<Vec3>& v) { return transverse_sum(v).squaredNorm(); }

std::vector<Vec3> pmp_vectors_from_states(const std::vector<Ket2>& chi, const std::vector<Ket2>& psi) {
    if (chi.size() != psi.size()) throw std::invalid_argument("state and costate counts differ");
    std::vector<Vec3> v(chi.size());
    for (std::size_t k = 0; k < chi.size(); ++k) {
        v[k] = Vec3(imag_sandwich(chi[k], PauliAxis::X, psi[k]), imag_sandwich(chi[k], PauliAxis::Y, psi[k]),
                    imag_sandwich(chi[k], PauliAxis::Z, psi[k]));
    }
    return v;
}

PMPVectors reconstruct_vectors(const DetuningCurve& curve, const InvariantTriple& inv, double phi0) {
    const auto phases = node_phases(curve, phi0);
    const double r1sq = inv.r1 * inv.r1;
    const double r2sq = inv.r2 * inv.r2;
    PMPVectors out;
    out.vectors.assign(2, std::vector<Vec3>(curve.delta.size()));
    out.times.resize(curve.delta.size());
    for (std::size_t i = 0; i < curve.delta.size(); ++i) {
        out.times[i] = curve.time(i);
        const double d = curve.delta[i];
        const double z1 = 2.0 * inv.C - 2.0 * d;
        const double z2 = 2.0 * d - inv.C;
        const double rho1sq = r1sq - z1 * z1;
        const double rho2sq = r2sq - z2 * z2;
        if (rho1sq < -1e-9 || rho2sq < -1e-9) {
            std::ostringstream msg;
            msg << "|z_k| exceeds r_k at t = " << out.times[i];
            throw InconsistentInvariants(msg.str());
        }
        const double rho1 = std::sqrt(std::max(rho1sq, 0.0));
        const double rho2 = std::sqrt(std::max(rho2sq, 0.0));
        // |rho1 e^{i delta} + sqrt2 rho2| = 2 fixes cos of the relative angle; 4 zdot1 = -8 ddelta
        // fixes its sine. Both share the denominator sqrt(8) rho1 rho2.
        const double num_cos = 4.0 - rho1 * rho1 - 2.0 * rho2 * rho2;
        const double num_sin = -8.0 * curve.ddelta[i];
        const double den = std::sqrt(8.0) * rho1 * rho2;
        if (den > 1e-12 && std::abs(num_cos) > (1.0 + 1e-6) * den) {
            std::ostringstream msg;
            msg << "cos of the relative angle is " << num_cos / den << " at t = " << out.times[i];
            throw InconsistentInvariants(msg.str());
        }
        const double rel = std::atan2(num_sin, num_cos);
        const std::complex<double> w = rho1 * std::polar(1.0, rel) + std::sqrt(2.0) * rho2;
        const double xi2 = -phases[i] - std::arg(w);
        const double xi1 = xi2 + rel;
        out.vectors[0][i] = Vec3(rho1 * std::cos(xi1), rho1 * std::sin(xi1), z1);
        out.vectors[1][i] = Vec3(rho2 * std::cos(xi2), rho2 * std::sin(xi2), z2);
    }
    return out;
}

bool VerificationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed(); });
}

const VerificationCheck* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::vector<std::string> VerificationReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
        if (!c.passed()) out.push_back(c.name);
    }
    return out;
}

VerificationReport verify_pmp(const ExtremalRecord& record, const VerifyTolerances& tol) {
    if (!record.potential) throw MissingPotential("record has no quartic potential");
    const QuarticPotential& pot = *record.potential;
    const DetuningCurve& curve = record.curve;
    if (curve.delta.size() < 3 || curve.ddelta.size() != curve.delta.size()) {
        throw std::invalid_argument("verify_pmp: detuning curve needs at least two steps");
    }
    const InvariantTriple inv = record.invariants ? *record.invariants : recover_invariants(pot);
    VerificationReport report;
    auto add = [&](std::string name, double residual, double tolerance) {
        if (!std::isfinite(residual)) residual = std::numeric_limits<double>::infinity();
        report.checks.push_back({std::move(name), residual, tolerance});
    };

    add("energy", curve.max_energy_residual(pot), tol.energy);
    add("endpoints", std::max(std::abs(curve.delta.front()), std::abs(curve.delta.back())), 1e-8);

    const QuarticPotential expected = potential_coeffs(inv);
    const double coeff_err = std::max({std::abs(expected.c0 - pot.c0), std::abs(expected.c1 - pot.c1),
                                       std::abs(expected.c2 - pot.c2), std::abs(expected.c3 - pot.c3),
                                       std::abs(expected.c4 - pot.c4)});
    add("coefficients", coeff_err, tol.coefficients);

    PMPVectors vec;
    try {
        vec = reconstruct_vectors(curve, inv, record.phi0);
    } catch (const InconsistentInvariants&) {
        const double inf = std::numeric_limits<double>::infinity();
        for (const char* name : {"radius", "conserved_c", "constraint", "vector_ode", "detuning"}) {
            add(name, inf, 0.0);
        }
        return report;
    }

    const double r[2] = {inv.r1, inv.r2};
    double radius = 0.0;
    double cdrift = 0.0;
    double constraint = 0.0;
    double detuning = 0.0;
    const std::size_t n = vec.samples();
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<Vec3> v = {vec.vectors[0][i], vec.vectors[1][i]};
        for (int k = 0; k < 2; ++k) radius = std::max(radius, std::abs(v[k].norm() - r[k]));
        cdrift = std::max(cdrift, std::abs(z_sum(v) - inv.C));
        constraint = std::max(constraint, std::abs(transverse_constraint(v) - 4.0));
        detuning = std::max(detuning, std::abs(curve.delta[i] - 0.5 * (v[0].z() + 2.0 * v[1].z())));
    }
    add("radius", radius, tol.radius);
    add("conserved_c", cdrift, tol.conserved_c);
    add("constraint", constraint, tol.constraint);

    // Central differences of the sampled vectors against the cross-product right-hand side.
    const auto phases = node_phases(curve, record.phi0);
    double ode = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const Vec3 axis = control_axis(phases[i]);
        for (int k = 0; k < 2; ++k) {
            const Vec3 fd = (vec.vectors[k][i + 1] - vec.vectors[k][i - 1]) / (2.0 * curve.dt);
            const Vec3 rhs = std::sqrt(static_cast<double>(k + 1)) * axis.cross(vec.vectors[k][i]);
            ode = std::max(ode, (fd - rhs).lpNorm<Eigen::Infinity>());
        }
    }
    add("vector_ode", ode, tol.vector_ode);
    add("detuning", detuning, tol.detuning);
    return report;
}

CostateRun costate_ode_general(const PhasePulse& pulse, const std::vector<Vec3>& v_init, double phi0,
                               double consistency_tol) {
    if (v_init.empty()) throw std::invalid_argument("costate_ode_general: need at least one vector");
    const Eigen::Vector2d s = transverse_sum(v_init);
    const double violation = std::abs(s.squaredNorm() - 4.0);
    const double cos_err = std::abs(std::cos(phi0) - 0.5 * s.x());
    const double sin_err = std::abs(std::sin(phi0) + 0.5 * s.y());
    if (violation > consistency_tol || cos_err > consistency_tol || sin_err > consistency_tol) {
        std::ostringstream msg;
        msg << "initial vectors inconsistent with phi(0) = " << phi0 << " (constraint error " << violation
            << ", cos error " << cos_err << ", sin error " << sin_err << ")";
        throw InconsistentInitialData(msg.str());
    }
    std::vector<double> r0;
    double c0 = 0.0;
    CostateRun run = start_run(v_init, r0, c0);
    std::vector<Vec3> v = v_init;
    record_sample(run, 0.0, v);
    track_invariants(run, v, r0, c0);
    for (std::size_t j = 0; j < pulse.size(); ++j) {
        const Vec3 axis = control_axis(pulse[j]);
        for (std::size_t k = 0; k < v.size(); ++k) {
            v[k] = rotate(v[k], axis, std::sqrt(static_cast<double>(k + 1)) * pulse.dt());
        }
        record_sample(run, static_cast<double>(j + 1) * pulse.dt(), v);
        track_invariants(run, v, r0, c0);
    }
    return run;
}

CostateRun costate_ode_autonomous(const std::vector<Vec3>& v_init, double T, double dt) {
    if (v_init.empty()) throw std::invalid_argument("costate_ode_autonomous: need at least one vector");
    if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("costate_ode_autonomous: bad T or dt");
    using State = std::vector<Vec3>;
    auto rhs = [](const State& v) {
        const Eigen::Vector2d s = transverse_sum(v);
        const double norm = s.norm();
        // Degenerate |S| = 0 leaves the control undefined; hold the vectors still there.
        if (norm == 0.0) return State(v.size(), Vec3::Zero());
        const Vec3 axis(s.x() / norm, s.y() / norm, 0.0);
        State d(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) d[k] = std::sqrt(static_cast<double>(k + 1)) * axis.cross(v[k]);
        return d;
    };
    auto axpy = [](const State& v, const State& d, double h) {
        State out(v.size());
        for (std::size_t k = 0; k < v.size(); ++k) out[k] = v[k] + h * d[k];
        return out;
    };
    std::vector<double> r0;
    double c0 = 0.0;
    CostateRun run = start_run(v_init, r0, c0);
    State v = v_init;
    record_sample(run, 0.0, v);
    track_invariants(run, v, r0, c0);
    const auto steps = static_cast<std::size_t>(std::ceil(T / dt - 1e-9));
    const double h = steps ? T / static_cast<double>(steps) : 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
        const State k1 = rhs(v);
        const State k2 = rhs(axpy(v, k1, 0.5 * h));
        const State k3 = rhs(axpy(v, k2, 0.5 * h));
        const State k4 = rhs(axpy(v, k3, h));
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += h / 6.0 * (k1[k] + 2.0 * k2[k] + 2.0 * k3[k] + k4[k]);
        record_sample(run, static_cast<double>(j + 1) * h, v);
        track_invariants(run, v, r0, c0);
    }
    return run;
}

}  // namespace rydpmp
