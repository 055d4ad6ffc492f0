#include "rydpmp/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rydpmp/errors.hpp"
#include "rydpmp/parallel.hpp"

namespace rydpmp {

std::string to_string(ParamFamily f) { return f == ParamFamily::Symmetric ? "symmetric" : "asymmetric"; }

ParamFamily param_family_from_string(const std::string& s) {
    if (s == "symmetric" || s == "sym") return ParamFamily::Symmetric;
    if (s == "asymmetric" || s == "asym") return ParamFamily::Asymmetric;
    throw std::invalid_argument("unknown parameter family '" + s + "'");
}

QuarticPotential potential_from_params(ParamFamily family, const std::vector<double>& params) {
    if (family == ParamFamily::Symmetric) {
        if (params.size() != 2) throw std::invalid_argument("symmetric family takes (delta0, v0)");
        return potential_from_sym(params[0], params[1]);
    }
    if (params.size() != 3) throw std::invalid_argument("asymmetric family takes (delta_plus, delta_minus, v0)");
    return potential_from_asym(params[0], params[1], params[2]);
}

ExtremalRecord build_record(const TargetManifold& target, ParamFamily family,
                            const std::vector<double>& params, int crossings, int sign,
                            const ShootingOptions& shooting) {
    ExtremalRecord rec;
    rec.target = target;
    rec.family = family;
    rec.params = params;
    rec.crossings = crossings;
    rec.sign = sign;
    rec.potential = potential_from_params(family, params);
    try {
        rec.invariants = recover_invariants(*rec.potential);
    } catch (const NoRealSolution&) {
        rec.invariants.reset();
    }
    rec.curve = integrate_detuning(*rec.potential, crossings, sign, shooting);
    rec.phi0 = 0.0;
    rec.pulse = phase_from_detuning(rec.curve, rec.phi0);
    const int n = tls_count(target);
    std::vector<Ket2> finals;
    for (int k = 1; k <= n; ++k) {
        rec.trajectories.push_back(propagate_piecewise(rec.pulse, TlsIndex(k), ket0()));
        finals.push_back(rec.trajectories.back().final_state());
    }
    rec.fidelity = fidelity(target, finals);
    return rec;
}

std::vector<ParamPoint> grid_points(const std::vector<GridAxis>& axes) {
    std::vector<ParamPoint> out{ParamPoint{}};
    for (const auto& axis : axes) {
        if (axis.count < 1) throw std::invalid_argument("grid axis needs count >= 1");
        std::vector<ParamPoint> next;
        for (const auto& p : out) {
            for (int i = 0; i < axis.count; ++i) {
                const double v = axis.count == 1 ? axis.lo
                                                 : axis.lo + (axis.hi - axis.lo) * i / (axis.count - 1);
                ParamPoint q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<GridAxis> default_grid(ParamFamily family) {
    if (family == ParamFamily::Symmetric) return {{0.5, 2.0, 8}, {-2.0, -0.2, 8}};
    return {{0.3, 1.5, 5}, {-1.5, -0.3, 5}, {-1.5, -0.1, 5}};
}

CaseSpec case_spec(const std::string& id) {
    if (id == "i" || id == "1") return {"i", ExcitationTorus{2}, ParamFamily::Symmetric, 2, 1};
    if (id == "ii" || id == "2") return {"ii", PhaseLine::cz(), ParamFamily::Asymmetric, 3, 1};
    if (id == "c") return {"c", PerTlsTarget{{ket1(), ket0()}}, ParamFamily::Symmetric, 1, 1};
    throw ConfigError("unknown case '" + id + "' (expected i, ii or c)");
}

namespace {

struct Problem {
    const TargetManifold* target;
    ParamFamily family;
    int crossings;
    int sign;
    int tls;
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Same arithmetic as propagate_piecewise(phase_from_detuning(curve)) from |0>_k, without
// materializing the pulse: every step shares one exponential of the phase.
double curve_fidelity(const TargetManifold& target, int tls, const DetuningCurve& curve) {
    std::vector<double> c(tls);
    std::vector<double> s(tls);
    for (int k = 0; k < tls; ++k) {
        const double angle = 0.5 * std::sqrt(static_cast<double>(k + 1)) * curve.dt;
        c[k] = std::cos(angle);
        s[k] = std::sin(angle);
    }
    std::vector<Ket2> psi(tls, ket0());
    double phi = 0.0;
    for (std::size_t j = 0; j + 1 < curve.delta.size(); ++j) {
        const double next = phi + 0.5 * curve.dt * (curve.delta[j] + curve.delta[j + 1]);
        const cplx e = std::polar(1.0, 0.5 * (phi + next));
        phi = next;
        for (int k = 0; k < tls; ++k) {
            const cplx a0 = psi[k](0);
            const cplx a1 = psi[k](1);
            psi[k](0) = c[k] * a0 - kI * s[k] * e * a1;
            psi[k](1) = -kI * s[k] * std::conj(e) * a0 + c[k] * a1;
        }
    }
    return fidelity(target, psi);
}

double point_fidelity(const Problem& p, const ParamPoint& x, const ShootingOptions& sh) {
    try {
        const QuarticPotential pot = potential_from_params(p.family, x);
        const DetuningCurve curve = integrate_detuning(pot, p.crossings, p.sign, sh);
        return curve_fidelity(*p.target, p.tls, curve);
    } catch (const std::invalid_argument&) {
        return kNaN;
    } catch (const Error&) {
        return kNaN;
    }
}

double point_time(const Problem& p, const ParamPoint& x, const ShootingOptions& sh) {
    try {
        return crossing_time(potential_from_params(p.family, x), p.crossings, p.sign, sh);
    } catch (const std::invalid_argument&) {
        return kNaN;
    } catch (const Error&) {
        return kNaN;
    }
}

struct RunOutcome {
    ParamPoint x;
    double fidelity = kNaN;
    double T = kNaN;
    std::vector<TraceRow> trace;
    bool valid() const { return std::isfinite(fidelity) && std::isfinite(T); }
};

ParamPoint to_point(const Eigen::VectorXd& v) { return ParamPoint(v.data(), v.data() + v.size()); }

// BFGS with the step count pinned to the value at the start point, so the objective is a smooth
// function of the parameters. Re-pins and reruns when T moved by more than a step.
RunOutcome optimize_at(const Problem& p, const ParamPoint& x0, double dt, double energy_tol,
                       double time_cap, const BfgsOptions& bopts) {
    RunOutcome out;
    out.x = x0;
    ShootingOptions base;
    base.dt = dt;
    base.energy_tol = energy_tol;
    base.time_cap = time_cap;
    int iter_offset = 0;
    for (int round = 0; round < 3; ++round) {
        const double T0 = point_time(p, out.x, base);
        if (!std::isfinite(T0)) return out;
        ShootingOptions pinned = base;
        pinned.steps = static_cast<std::size_t>(std::max(1.0, std::ceil(T0 / dt - 1e-9)));
        auto f = [&](const Eigen::VectorXd& v) {
            const double fid = point_fidelity(p, to_point(v), pinned);
            return std::isfinite(fid) ? -fid : std::numeric_limits<double>::infinity();
        };
        auto cb = [&](int it, const Eigen::VectorXd& v, double value) {
            out.trace.push_back({iter_offset + it, to_point(v), -value, point_time(p, to_point(v), base)});
            return true;
        };
        const Eigen::VectorXd start = Eigen::Map<const Eigen::VectorXd>(out.x.data(), out.x.size());
        const BfgsResult r = bfgs_minimize(Objective(f), start, bopts, cb);
        iter_offset += r.iterations;
        out.x = to_point(r.x);
        const double T1 = point_time(p, out.x, base);
        if (!std::isfinite(T1)) return out;
        if (static_cast<std::size_t>(std::max(1.0, std::ceil(T1 / dt - 1e-9))) == *pinned.steps) break;
    }
    out.T = point_time(p, out.x, base);
    out.fidelity = point_fidelity(p, out.x, base);
    return out;
}

bool better(const RunOutcome& a, const RunOutcome& b, double pass) {
    if (!a.valid()) return false;
    if (!b.valid()) return true;
    const bool pa = a.fidelity >= pass;
    const bool pb = b.fidelity >= pass;
    if (pa != pb) return pa;
    if (pa) return a.T < b.T;
    return a.fidelity > b.fidelity;
}

Problem make_problem(const TargetManifold& target, ParamFamily family, int crossings, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
    if (crossings < 1) throw std::invalid_argument("crossings must be >= 1");
    return Problem{&target, family, crossings, sign, tls_count(target)};
}

SynthesisResult finish(const Problem& p, const RunOutcome& best, const SynthesisOptions& opts) {
    ShootingOptions sh;
    sh.dt = opts.dt;
    sh.time_cap = opts.time_cap;
    SynthesisResult res;
    res.record = build_record(*p.target, p.family, best.x, p.crossings, p.sign, sh);
    res.trace = best.trace;
    return res;
}

}  // namespace

double shooting_fidelity(const TargetManifold& target, ParamFamily family, const ParamPoint& params,
                         int crossings, int sign, const ShootingOptions& shooting) {
    const Problem p = make_problem(target, family, crossings, sign);
    return point_fidelity(p, params, shooting);
}

SynthesisResult synthesize_from(const TargetManifold& target, ParamFamily family, const ParamPoint& init,
                                int crossings, int sign, const SynthesisOptions& opts) {
    const Problem p = make_problem(target, family, crossings, sign);
    potential_from_params(family, init);  // rejects points outside the valid region
    const RunOutcome out = optimize_at(p, init, opts.dt, 1e-6, opts.time_cap, opts.bfgs);
    if (!out.valid() || out.fidelity < opts.fail_fidelity) {
        throw OptimizationFailed("BFGS from the given start reached fidelity " +
                                 std::to_string(out.valid() ? out.fidelity : 0.0));
    }
    return finish(p, out, opts);
}

SynthesisResult synthesize(const TargetManifold& target, ParamFamily family, int crossings, int sign,
                           const SynthesisOptions& opts) {
    const Problem p = make_problem(target, family, crossings, sign);
    const std::vector<ParamPoint> starts =
        opts.starts.empty() ? grid_points(default_grid(family)) : opts.starts;
    const bool explore = opts.explore_dt > opts.dt;

    std::vector<RunOutcome> first(starts.size());
    BfgsOptions explore_opts = opts.bfgs;
    if (explore) explore_opts.max_iters = opts.explore_iters;
    parallel_for(starts.size(), [&](std::size_t i) {
        first[i] = optimize_at(p, starts[i], explore ? opts.explore_dt : opts.dt, explore ? 1e-4 : 1e-6,
                               opts.time_cap, explore_opts);
    });

    std::vector<RunOutcome> finals;
    if (!explore) {
        finals = std::move(first);
    } else {
        // Coarse fidelities carry an O(dt^2) bias, so the pass threshold is relaxed here.
        const double coarse_pass = opts.pass_fidelity - 0.004;
        std::vector<std::size_t> order(first.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return better(first[a], first[b], coarse_pass);
        });
        std::vector<std::size_t> picked;
        auto distinct = [&](std::size_t i) {
            for (std::size_t j : picked) {
                double d = 0.0;
                for (std::size_t c = 0; c < first[i].x.size(); ++c) {
                    d = std::max(d, std::abs(first[i].x[c] - first[j].x[c]));
                }
                if (d < 1e-3) return false;
            }
            return true;
        };
        for (std::size_t i : order) {
            if (static_cast<int>(picked.size()) >= opts.polish_count || !first[i].valid()) break;
            if (distinct(i)) picked.push_back(i);
        }
        // Always polish the highest-fidelity start as well.
        std::size_t top = order.empty() ? 0 : order.front();
        for (std::size_t i : order) {
            if (first[i].valid() && first[i].fidelity > first[top].fidelity) top = i;
        }
        if (!order.empty() && first[top].valid() && distinct(top)) picked.push_back(top);

        finals.resize(picked.size());
        parallel_for(picked.size(), [&](std::size_t i) {
            finals[i] = optimize_at(p, first[picked[i]].x, opts.dt, 1e-6, opts.time_cap, opts.bfgs);
        });
    }

    const RunOutcome* best = nullptr;
    for (const auto& r : finals) {
        if (!best || better(r, *best, opts.pass_fidelity)) best = &r;
    }
    if (!best || !best->valid() || best->fidelity < opts.fail_fidelity) {
        throw OptimizationFailed("best fidelity " + std::to_string(best && best->valid() ? best->fidelity : 0.0) +
                                 " after " + std::to_string(starts.size()) + " starts (crossings " +
                                 std::to_string(crossings) + ", sign " + std::to_string(sign) + ")");
    }
    return finish(p, *best, opts);
}

ScanResult scan_crossings(const TargetManifold& target, ParamFamily family, int min_crossings,
                          int max_crossings, const std::vector<int>& signs, const SynthesisOptions& opts) {
    if (min_crossings < 1 || max_crossings < min_crossings) throw std::invalid_argument("bad crossings range");
    ScanResult out;
    for (int c = min_crossings; c <= max_crossings; ++c) {
        for (int s : signs) {
            ScanEntry e;
            e.crossings = c;
            e.sign = s;
            try {
                SynthesisResult r = synthesize(target, family, c, s, opts);
                e.best_fidelity = r.record.fidelity;
                if (r.record.fidelity >= opts.pass_fidelity) e.record = std::move(r.record);
            } catch (const OptimizationFailed&) {
                e.best_fidelity = 0.0;
            }
            if (e.record && (!out.best || e.record->T() < out.best->T())) out.best = e.record;
            out.entries.push_back(std::move(e));
        }
    }
    return out;
}

}  // namespace rydpmp
