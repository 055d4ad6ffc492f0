#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "rydpmp/abnormal.hpp"
#include "rydpmp/blockade.hpp"
#include "rydpmp/cli.hpp"
#include "rydpmp/errors.hpp"
#include "rydpmp/grape.hpp"
#include "rydpmp/pmp.hpp"
#include "rydpmp/record_io.hpp"
#include "rydpmp/synthesis.hpp"

using namespace rydpmp;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int n, const std::string& title, bool ok, const std::string& detail) {
    std::printf("criterion %d %s: %s (%s)\n", n, title.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string str(double v, int digits = 6) {
    std::ostringstream os;
    os.precision(digits);
    os << v;
    return os.str();
}

fs::path workdir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "rydpmp_acceptance" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int cli(const std::vector<std::string>& args) {
    std::vector<std::string> full = {"pmp_pulse"};
    full.insert(full.end(), args.begin(), args.end());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(full, out, err);
    if (code != 0) std::fprintf(stderr, "%s%s", out.str().c_str(), err.str().c_str());
    return code;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct CaseRun {
    bool ok = false;
    ExtremalRecord record;
    double seconds = 0.0;
};

CaseRun run_case(const std::string& id, const fs::path& dir) {
    CaseRun r;
    const auto t0 = std::chrono::steady_clock::now();
    const int code = cli({"synthesize", "--case", id, "--out", dir.string()});
    r.seconds = seconds_since(t0);
    if (code != 0) return r;
    r.record = load_record((dir / ("case_" + id + "_record.json")).string());
    r.ok = true;
    return r;
}

bool near(const std::vector<double>& got, const std::vector<double>& want, double tol) {
    if (got.size() != want.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i) {
        if (std::abs(got[i] - want[i]) > tol) return false;
    }
    return true;
}

std::string params(const std::vector<double>& p) {
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) s += (i ? ", " : "") + str(p[i], 5);
    return s + ")";
}

void reproduction(int n, const CaseRun& r, double T, const std::vector<double>& want, double limit) {
    const ExtremalRecord& rec = r.record;
    const bool ok = r.ok && rec.fidelity >= 0.999 && std::abs(rec.T() - T) <= 0.01 && near(rec.params, want, 0.05) &&
                    r.seconds <= limit;
    report(n, "case (" + std::string(n == 1 ? "i" : "ii") + ") reproduction", ok,
           r.ok ? "F=" + str(rec.fidelity, 10) + " T=" + str(rec.T(), 7) + " params=" + params(rec.params) +
                      " runtime=" + str(r.seconds, 3) + "s"
                : "synthesize failed");
}

void oscillation_structure() {
    std::string detail;
    bool ok = true;
    for (const auto& [id, expect] : {std::pair<std::string, int>{"i", 2}, {"ii", 3}}) {
        const CaseSpec c = case_spec(id);
        const ScanResult s = scan_crossings(c.target, c.family, 1, 6, {1});
        const int got = s.best ? s.best->crossings : 0;
        ok = ok && got == expect;
        detail += (detail.empty() ? "" : "; ") + id + ": crossings=" + std::to_string(got) +
                  (s.best ? " T=" + str(s.best->T(), 6) : "");
    }
    report(3, "oscillation structure", ok, detail);
}

void grape_agreement(const CaseRun& a, const CaseRun& b) {
    bool ok = a.ok && b.ok;
    std::string detail;
    for (const CaseRun* r : {&a, &b}) {
        if (!r->ok) continue;
        GrapeConfig cfg;
        cfg.segments = 256;
        cfg.T = r->record.T();
        try {
            const GrapeResult g = grape_optimize(cfg, r->record.target);
            const PulseAlignment al = compare_pulses(r->record.pulse, g.pulse);
            ok = ok && g.fidelity >= 0.999 && al.linf <= 0.05;
            detail += (detail.empty() ? "" : "; ") + r->record.case_id + ": F=" + str(g.fidelity, 10) +
                      " Linf=" + str(al.linf, 3);
        } catch (const Error& e) {
            ok = false;
            detail += std::string(" ") + e.what();
        }
    }
    report(4, "GRAPE agreement", ok, detail);
}

void abnormal_bound() {
    const auto c = abnormal_case2_scan(50);
    bool ok = !c.empty() && std::abs(c.front().T - 2 * kPi * std::sqrt(7.0)) <= 1e-9;
    double worst = 0.0;
    double tmin = c.empty() ? 0.0 : c.front().T;
    for (const auto& x : c) {
        ok = ok && x.T >= abnormal_time_bound() && x.T > 7.612;
        worst = std::max({worst, 1.0 - x.closure_k1, 1.0 - x.closure_k2});
        tmin = std::min(tmin, x.T);
    }
    ok = ok && worst <= 1e-9;
    report(5, "abnormal bound", ok,
           std::to_string(c.size()) + " candidates, min T=" + str(tmin, 8) + " (2 pi sqrt 7=" +
               str(2 * kPi * std::sqrt(7.0), 8) + "), bound " + str(abnormal_time_bound(), 6) +
               ", worst closure defect " + str(worst, 3));
}

void pmp_suite(const CaseRun& a, const CaseRun& b) {
    bool ok = a.ok && b.ok;
    std::string detail;
    for (const CaseRun* r : {&a, &b}) {
        if (!r->ok) continue;
        const VerificationReport rep = verify_pmp(r->record);
        ok = ok && rep.passed();
        detail += (detail.empty() ? "" : "; ") + r->record.case_id + ":";
        for (const auto& ch : rep.checks) detail += " " + ch.name + "=" + str(ch.residual, 2);
    }
    report(6, "PMP invariant suite", ok, detail);
}

void gradient_oracle() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-kPi, kPi);
    double worst = 0.0;
    for (const TargetManifold& target : {TargetManifold(ExcitationTorus{}), TargetManifold(PhaseLine::cz())}) {
        GrapeConfig cfg;
        cfg.segments = 16;
        cfg.T = std::holds_alternative<ExcitationTorus>(target) ? 4.875 : 7.612;
        for (int i = 0; i < 20; ++i) {
            std::vector<double> phi(16);
            for (auto& x : phi) x = u(rng);
            worst = std::max(worst, gradient_check(cfg, target, phi));
        }
    }
    report(7, "gradient oracle", worst <= 1e-5, "max relative discrepancy " + str(worst, 3) + " over 40 pulses");
}

void blockade(const CaseRun& a) {
    if (!a.ok) {
        report(8, "blockade reduction", false, "no case (i) pulse");
        return;
    }
    bool ok = true;
    double last = 1.0;
    std::string detail;
    for (double b : {50.0, 100.0, 500.0, 1000.0}) {
        const BlockadeReport r = blockade_reduction_error(a.record.pulse, b);
        ok = ok && r.max_infidelity() < last;
        last = r.max_infidelity();
        if (b == 500.0) ok = ok && r.max_infidelity() <= 1e-2 && r.double_excitation <= 1e-3;
        detail += (detail.empty() ? "" : "; ") + std::string("B=") + str(b) + " inf=" + str(r.max_infidelity(), 3) +
                  " rr=" + str(r.double_excitation, 3);
    }
    report(8, "blockade reduction", ok, detail);
}

void closure_properties(const fs::path& first) {
    double rt = 0.0;
    int tested = 0;
    for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) {
            for (int l = 0; l < 10; ++l) {
                const InvariantTriple inv{-2.0 + 4.0 * i / 9.0, 3.0 * j / 9.0, 3.0 * l / 9.0};
                try {
                    const InvariantTriple back = recover_invariants(potential_coeffs(inv));
                    rt = std::max({rt, std::abs(back.C - inv.C), std::abs(back.r1 - inv.r1), std::abs(back.r2 - inv.r2)});
                    ++tested;
                } catch (const NoRealSolution&) {
                }
            }
        }
    }

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto ket = [&] {
        Ket2 k(cplx(u(rng), u(rng)), cplx(u(rng), u(rng)));
        return Ket2(k / k.norm());
    };
    double gauge = 0.0;
    for (int i = 0; i < 200; ++i) {
        const std::vector<Ket2> f = {ket(), ket()};
        const std::vector<Ket2> g = {std::exp(cplx(0.0, 3 * u(rng))) * f[0], std::exp(cplx(0.0, 3 * u(rng))) * f[1]};
        gauge = std::max(gauge, std::abs(fidelity_torus(f) - fidelity_torus(g)));
        const std::vector<Ket2> targets = {ket(), ket()};
        gauge = std::max(gauge, std::abs(fidelity_per_tls(f, targets) - fidelity_per_tls(g, targets)));
        // Phase line: phases of the |1> components (phi offset gauge) and shifts along the line.
        std::vector<Ket2> h = f;
        h[0](1) *= std::exp(cplx(0.0, 3 * u(rng)));
        h[1](1) *= std::exp(cplx(0.0, 3 * u(rng)));
        const double a = 3 * u(rng);
        h[0] *= std::exp(cplx(0.0, a));
        h[1] *= std::exp(cplx(0.0, 2 * a));
        gauge = std::max(gauge, std::abs(fidelity_phaseline(f, PhaseLine::cz()).value -
                                         fidelity_phaseline(h, PhaseLine::cz()).value));
    }

    const fs::path second = workdir("rerun");
    bool identical = cli({"synthesize", "--case", "i", "--out", second.string()}) == 0;
    int files = 0;
    for (const auto& e : fs::directory_iterator(first)) {
        const fs::path other = second / e.path().filename();
        identical = identical && fs::exists(other) && slurp(e.path()) == slurp(other);
        ++files;
    }
    const bool ok = rt <= 1e-9 && tested > 0 && gauge <= 1e-12 && identical && files > 0;
    report(9, "round trip and closure", ok,
           "round trip " + str(rt, 3) + " on " + std::to_string(tested) + " points, gauge " + str(gauge, 3) + ", " +
               std::to_string(files) + " files " + (identical ? "identical" : "DIFFER"));
}

}  // namespace

int main() {
    const fs::path dir_i = workdir("case_i");
    const fs::path dir_ii = workdir("case_ii");
    const CaseRun a = run_case("i", dir_i);
    reproduction(1, a, 4.875, {1.26, -1.17}, 120.0);
    const CaseRun b = run_case("ii", dir_ii);
    reproduction(2, b, 7.612, {0.67, -0.84, -0.39}, 300.0);
    oscillation_structure();
    grape_agreement(a, b);
    abnormal_bound();
    pmp_suite(a, b);
    gradient_oracle();
    blockade(a);
    closure_properties(dir_i);
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
