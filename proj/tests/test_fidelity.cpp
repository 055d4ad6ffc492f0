#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rydpmp/fidelity.hpp"

using namespace rydpmp;

namespace {

// Torus fidelity by brute force over the free phases (first phase fixed by the global one).
double torus_brute(const Ket2& a, const Ket2& b) {
    const cplx a1 = a(1);
    const cplx b1 = b(1);
    double best = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double beta = 2 * kPi * i / n;
        const double s = std::norm(a1 + std::exp(cplx(0.0, beta)) * b1);
        best = std::max(best, (s + std::norm(a1) + std::norm(b1)) / 6.0);
    }
    return best;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double phaseline_at(const std::vector<Ket2>& finals, const PhaseLine& line, double theta) {
    const int n = static_cast<int>(finals.size());
    const double d = std::pow(2.0, n);
    cplx sum = 1.0;
    double mods = 1.0;
    for (int k = 1; k <= n; ++k) {
        const cplx y = std::exp(cplx(0.0, -(line.multipliers[k - 1] * theta + line.offsets[k - 1]))) * finals[k - 1](0);
        sum += binom(n, k) * y;
        mods += binom(n, k) * std::norm(y);
    }
    return (std::norm(sum) + mods) / (d * (d + 1));
}

double phaseline_brute(const std::vector<Ket2>& finals, const PhaseLine& line) {
    double best = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) best = std::max(best, phaseline_at(finals, line, 2 * kPi * i / n));
    return best;
}

cplx phase(double a) { return std::exp(cplx(0.0, a)); }

}  // namespace

TEST_CASE("fidelity_torus examples") {
    CHECK(fidelity_torus(phase(0.3) * ket1(), phase(-1.9) * ket1()) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fidelity_torus(ket1(), ket0()) == doctest::Approx(1.0 / 3.0));
    CHECK(fidelity_torus(ket0(), ket0()) == doctest::Approx(0.0));
}

TEST_CASE("fidelity_torus against brute-force phase maximization") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        const Ket2 a = oracle::random_ket(rng);
        const Ket2 b = oracle::random_ket(rng);
        CHECK(std::abs(fidelity_torus(a, b) - torus_brute(a, b)) <= 1e-7);
    }
}

TEST_CASE("fidelity_phaseline examples") {
    const PhaseLine cz = PhaseLine::cz();
    const double t0 = 0.83;
    CHECK(fidelity_phaseline(phase(t0) * ket0(), phase(2 * t0 + kPi) * ket0(), cz) ==
          doctest::Approx(1.0).epsilon(1e-12));

    const std::vector<Ket2> zeros = {ket0(), ket0()};
    CHECK(fidelity_phaseline(ket0(), ket0(), cz) == doctest::Approx(phaseline_brute(zeros, cz)).epsilon(1e-9));

    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 20; ++trial) {
        // y_2 = 0 leaves (|1 + 2 y_1|^2 + 1 + 2 |y_1|^2) / 20 <= 12 / 20.
        CHECK(fidelity_phaseline(oracle::random_ket(rng), phase(0.1 * trial) * ket1(), cz) <= 0.6 + 1e-12);
    }
}

TEST_CASE("fidelity_phaseline against a dense theta scan") {
    std::mt19937_64 rng(33);
    const PhaseLine cz = PhaseLine::cz();
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<Ket2> f = {oracle::random_ket(rng), oracle::random_ket(rng)};
        const PhaseLineFit fit = fidelity_phaseline(f, cz);
        const double brute = phaseline_brute(f, cz);
        CHECK(fit.value >= brute - 1e-12);
        CHECK(fit.value - brute <= 1e-8);
        CHECK(phaseline_at(f, cz, fit.theta) == doctest::Approx(fit.value).epsilon(1e-12));
    }
}

TEST_CASE("fidelity_per_tls") {
    const std::vector<Ket2> targets = {ket1(), ket0()};
    const std::vector<Ket2> hit = {phase(1.0) * ket1(), phase(-0.4) * ket0()};
    CHECK(fidelity_per_tls(hit, targets) == doctest::Approx(1.0));
    const std::vector<Ket2> miss = {ket0(), ket1()};
    CHECK(fidelity_per_tls(miss, targets) == doctest::Approx(0.0));
    // With |1> targets it is the torus fidelity.
    std::mt19937_64 rng(34);
    const std::vector<Ket2> f = {oracle::random_ket(rng), oracle::random_ket(rng)};
    const std::vector<Ket2> ones = {ket1(), ket1()};
    CHECK(fidelity_per_tls(f, ones) == doctest::Approx(fidelity_torus(f)).epsilon(1e-14));
}

TEST_CASE("phase-gauge invariance and bounds") {
    std::mt19937_64 rng(35);
    const PhaseLine cz = PhaseLine::cz();
    const std::vector<Ket2> per = {oracle::random_ket(rng), oracle::random_ket(rng)};
    for (int trial = 0; trial < 100; ++trial) {
        const std::vector<Ket2> f = {oracle::random_ket(rng), oracle::random_ket(rng)};
        const std::vector<Ket2> g = {phase(oracle::random_phase(rng)) * f[0], phase(oracle::random_phase(rng)) * f[1]};
        const double ft = fidelity_torus(f);
        const double fp = fidelity_phaseline(f, cz).value;
        const double fq = fidelity_per_tls(f, per);
        CHECK(std::abs(ft - fidelity_torus(g)) <= 1e-12);
        CHECK(std::abs(fq - fidelity_per_tls(g, per)) <= 1e-12);
        // The phase line pins <0|psi_k> relative to the untouched |0...0>; its gauges are the phases
        // of the |1> components (the phi offset) and motion along the line.
        std::vector<Ket2> h = f;
        h[0](1) *= phase(oracle::random_phase(rng));
        h[1](1) *= phase(oracle::random_phase(rng));
        CHECK(std::abs(fp - fidelity_phaseline(h, cz).value) <= 1e-12);
        const double alpha = oracle::random_phase(rng);
        const std::vector<Ket2> l = {phase(alpha) * f[0], phase(2 * alpha) * f[1]};
        CHECK(std::abs(fp - fidelity_phaseline(l, cz).value) <= 1e-12);
        for (double x : {ft, fp, fq}) {
            CHECK(x >= 0.0);
            CHECK(x <= 1.0 + 1e-15);
        }
    }
}

TEST_CASE("Wirtinger gradient matches directional finite differences") {
    std::mt19937_64 rng(36);
    const std::vector<TargetManifold> targets = {ExcitationTorus{}, PhaseLine::cz(),
                                                 PerTlsTarget{{ket1(), ket0()}}};
    for (const auto& target : targets) {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Ket2> f = {oracle::random_ket(rng), oracle::random_ket(rng)};
            std::vector<Ket2> d = {oracle::random_ket(rng), oracle::random_ket(rng)};
            const FidelityGradient g = fidelity_with_gradient(target, f);
            CHECK(g.value == doctest::Approx(fidelity(target, f)).epsilon(1e-12));
            const double h = 1e-6;
            std::vector<Ket2> fp = {f[0] + h * d[0], f[1] + h * d[1]};
            std::vector<Ket2> fm = {f[0] - h * d[0], f[1] - h * d[1]};
            const double fd = (fidelity(target, fp) - fidelity(target, fm)) / (2 * h);
            double an = 0.0;
            for (int k = 0; k < 2; ++k) an += g.grad[k].dot(d[k]).real();
            CHECK(std::abs(fd - an) <= 1e-7);
        }
    }
}

TEST_CASE("describe and tls_count") {
    CHECK(tls_count(ExcitationTorus{3}) == 3);
    CHECK(tls_count(PhaseLine::cz()) == 2);
    CHECK(tls_count(PerTlsTarget{{ket1()}}) == 1);
    CHECK_FALSE(describe(PhaseLine::cz()).empty());
}
