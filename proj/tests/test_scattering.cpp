#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/oracles.hpp"
#include "weylspec/checks.hpp"
#include "weylspec/scattering.hpp"

using namespace weylspec;

TEST_CASE("k_tail vanishes for the free potential and beyond the well") {
    Potential fr = free_potential();
    CHECK(k_tail(fr, 1.0, 4.0, 0.0) == 0.0);
    CHECK(k_tail(fr, 0.5, 0.5, 17.0) == 0.0);

    Potential cw = capped_well(1.0, 5.0, 0.1);
    CHECK(k_tail(cw, 1.0, 4.0, 10.0) == 0.0);
    CHECK(k_tail(cw, 1.0, 4.0, 5.1) == 0.0);
    CHECK(k_tail(cw, 1.0, 4.0, 2.0) > 0.0);
}

TEST_CASE("k_tail exponential bound is explicit and monotone") {
    Potential ed = exp_decay(1.0, 1.0);
    // M_K^2 over [1,4] is max(k^2 + 1/k^2) at k = 2.
    const double m2 = 4.0 + 0.25;
    double prev = std::numeric_limits<double>::infinity();
    for (double x : {1.0, 2.0, 4.0, 8.0}) {
        const double kt = k_tail(ed, 1.0, 4.0, x);
        CHECK(kt == Catch::Approx(m2 * std::exp(-x)).epsilon(1e-12));
        CHECK(kt < prev);
        prev = kt;
    }
}

TEST_CASE("k_tail rejects windows touching the threshold") {
    Potential ed = exp_decay(1.0, 1.0);
    CHECK_THROWS_AS(k_tail(ed, 0.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(k_tail(ed, -1.0, 1.0, 1.0), DomainError);
    CHECK_THROWS_AS(k_tail(ed, 2.0, 1.0, 1.0), DomainError);
}

TEST_CASE("s_infinity free case is exactly (0, 1)") {
    Potential fr = free_potential();
    SInfinity s = s_infinity(fr, 4.0, 1e-10);
    CHECK(s.a == Catch::Approx(0.0).margin(1e-12));
    CHECK(s.b == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(s.err == 0.0);
    CHECK(s.k_tail_at_x_max == 0.0);
}

TEST_CASE("s(x) is constant in x when Q vanishes") {
    Potential fr = free_potential();
    const cplx lambda(1.0);
    SLVectorSystem rhs{&fr, lambda};
    DenseSolution<Vec2c> sol = integrate_dense<Vec2c>(
        rhs, Vec2c{cplx(0.0), cplx(1.0)}, 0.0, 20.0, 1e-12);
    Vec2c s1 = free_propagator(lambda, -1.0) * sol.eval(1.0);
    Vec2c s5 = free_propagator(lambda, -5.0) * sol.eval(5.0);
    Vec2c s20 = free_propagator(lambda, -20.0) * sol.eval(20.0);
    CHECK((s1 - s5).norm() < 1e-10);
    CHECK((s5 - s20).norm() < 1e-10);
}

TEST_CASE("s_infinity for the capped well is nonvanishing and oracle-consistent") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    SInfinity s = s_infinity(cw, 1.0, 1e-10);
    CHECK(std::hypot(s.a, s.b) > 0.1);
    // independent fixed-step integration to x_max, then the same unwinding
    const Vec2c ref_u = oracles::rk4_solve(cw, cplx(1.0), {cplx(0.0), cplx(1.0)},
                                           0.0, s.x_max, 2'000'000);
    const Vec2c ref_s = free_propagator(cplx(1.0), -s.x_max) * ref_u;
    CHECK(s.a == Catch::Approx(ref_s.a.real()).margin(1e-8));
    CHECK(s.b == Catch::Approx(ref_s.b.real()).margin(1e-8));
}

TEST_CASE("s_infinity threshold policy") {
    Potential fr = free_potential();
    CHECK_THROWS_AS(s_infinity(fr, 1e-4, 1e-10), DomainError);
    CHECK_THROWS_AS(s_infinity(fr, -1.0, 1e-10), DomainError);
}

TEST_CASE("x_max cap aborts when the tail cannot be certified") {
    // Slow decay class: plain tail finite but large until x ~ 1/eps.
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    auto q = [](double x) { return 1.0 / sq(1.0 + x); };
    Potential slow("inverse_square_tail", one, zero, q, DecayClass::PowerIntegrable,
                   0.0, q, [](double x) { return 1.0 / (1.0 + x); });
    CHECK_THROWS_AS(s_infinity_at(slow, cplx(1.0), 1e-9, 100.0), NumericalError);
}

TEST_CASE("free c-function closed form") {
    Potential fr = free_potential();
    for (double lambda : {0.5, 1.0, 2.0, 4.0, 10.0}) {
        ScatteringPoint pt = c_function(fr, lambda, 1e-10);
        const cplx exact(0.0, -0.5 / std::sqrt(lambda));
        CHECK(std::abs(pt.c - exact) < 1e-10);
        CHECK(pt.c_abs_sq == Catch::Approx(0.25 / lambda).epsilon(1e-10));
    }
    CHECK(c_function(fr, 4.0, 1e-10).c_abs_sq == Catch::Approx(1.0 / 16.0).epsilon(1e-12));
}

TEST_CASE("free comparison wave reproduces F exactly") {
    // c e^{ikx} + conj(c) e^{-ikx} with c = -i/(2k) is sin(kx)/k = F itself.
    Potential fr = free_potential();
    SpectralNode node(fr, 1.0, 1e-10);
    const ScatteringPoint& pt = node.point();
    for (double x = 0.0; x <= 20.0; x += 0.37) {
        const cplx wave = pt.c * std::exp(cplx(0.0, x)) +
                          std::conj(pt.c) * std::exp(cplx(0.0, -x));
        CHECK(std::abs(node.value(x) - wave.real()) < 1e-10);
        CHECK(std::abs(wave.imag()) < 1e-15);
    }
}

TEST_CASE("capped-well comparison wave converges at the certified rate") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    const double lambda = 1.0;
    SpectralNode node(cw, lambda, 1e-10);
    const ScatteringPoint& pt = node.point();
    const double k = std::sqrt(lambda);
    double sup = 0.0;
    for (double x = 10.0; x <= 20.0; x += 0.1) {
        const double wave = pt.a * std::cos(k * x) + pt.b * std::sin(k * x) / k;
        sup = std::max(sup, std::abs(node.value(x) - wave));
    }
    // Beyond the cut the continuation is exact up to solver error.
    CHECK(sup <= std::max(pt.truncation_error_bound, 1e-9));
}

TEST_CASE("spectral density free closed form and positivity") {
    CheckResult r = check_free_density_closed_form(1e-10);
    INFO(r.measured);
    CHECK(r.pass);
    CHECK(spectral_density(free_potential(), 4.0, 1e-10) ==
          Catch::Approx(2.0 / pi).epsilon(1e-8));
    CHECK(spectral_density(free_potential(), 1.0, 1e-10) ==
          Catch::Approx(1.0 / pi).epsilon(1e-8));
}

TEST_CASE("density is positive and continuous for the capped well") {
    CheckResult r = check_density_positive_continuous(capped_well(1.0, 5.0, 0.1), 1e-10);
    INFO(r.measured << " vs " << r.threshold);
    CHECK(r.pass);
}

TEST_CASE("density works for p != 1 through a tabulated potential") {
    std::vector<double> xs, ps, qs;
    for (int i = 0; i <= 800; ++i) {
        const double x = 35.0 * i / 800.0;
        xs.push_back(x);
        ps.push_back(1.0 + std::exp(-x));
        qs.push_back(-0.5 * std::exp(-x));
    }
    Potential tab = tabulated_potential(xs, ps, qs);
    for (double lambda : {0.8, 2.0, 5.0}) {
        const double rho = spectral_density(tab, lambda, 1e-9);
        CHECK(rho > 0.0);
        CHECK(std::isfinite(rho));
    }
}

TEST_CASE("truncation certificate holds on randomized data") {
    CheckResult r = check_truncation_certificate(424242);
    INFO(r.detail);
    CHECK(r.pass);
}

TEST_CASE("asymptotic pairing bound decreases to zero") {
    CheckResult r = check_asymptotic_pairing(1e-10);
    INFO(r.detail);
    CHECK(r.pass);
}
