#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/oracles.hpp"
#include "weylspec/checks.hpp"
#include "weylspec/green.hpp"
#include "weylspec/spectral.hpp"

using namespace weylspec;

TEST_CASE("free Green kernel closed form, boundary, symmetry") {
    Potential fr = free_potential();
    GreenKernelSample k12 = green_kernel(fr, cplx(-1.0), 1.0, 2.0, 1e-10);
    CHECK(k12.value.real() ==
          Catch::Approx(std::sinh(1.0) * std::exp(-2.0)).epsilon(1e-9));
    CHECK(std::abs(k12.value.imag()) < 1e-12);
    CHECK(k12.wronskian_w.real() == Catch::Approx(1.0).epsilon(1e-9));

    GreenKernelSample k02 = green_kernel(fr, cplx(-1.0), 0.0, 2.0, 1e-10);
    CHECK(std::abs(k02.value) == 0.0);

    GreenKernelSample k21 = green_kernel(fr, cplx(-1.0), 2.0, 1.0, 1e-10);
    CHECK(k21.value == k12.value);
}

TEST_CASE("green kernel rejects spectrum-adjacent nu") {
    Potential fr = free_potential();
    CHECK_THROWS_AS(green_kernel(fr, cplx(1.0, 0.0), 1.0, 2.0, 1e-10), DomainError);
    CHECK_THROWS_AS(green_kernel(fr, cplx(-1.0), -1.0, 2.0, 1e-10), DomainError);
}

TEST_CASE("wronskian near an eigenvalue is flagged") {
    // capped well has an eigenvalue near lambda = -0.0468; w(nu) ~ 0 there.
    Potential cw = capped_well(1.0, 5.0, 0.1);
    BoundStateScan scan = find_bound_states(cw, 0.05, 0.95, 64, 1e-10);
    REQUIRE_FALSE(scan.states.empty());
    const double lam = scan.states.front().lambda;
    CHECK_THROWS_AS(green_kernel(cw, cplx(lam, 0.0), 1.0, 2.0, 1e-10),
                    NumericalError);
}

TEST_CASE("kernel symmetry and boundary vanishing over random samples") {
    for (const Potential& pot : {free_potential(), capped_well(1.0, 5.0, 0.1)}) {
        CheckResult r = check_green_symmetry_and_boundary(pot, 1e-9, 1377);
        INFO(r.name << " " << r.measured);
        CHECK(r.pass);
    }
}

TEST_CASE("wronskian independence of the evaluation point") {
    for (const Potential& pot : {capped_well(1.0, 5.0, 0.1), exp_decay(1.0, 1.0)}) {
        CheckResult r = check_wronskian_independence(pot, 1e-10);
        INFO(r.name << " " << r.measured);
        CHECK(r.pass);
    }
}

TEST_CASE("resolvent of the zero function is zero") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    UniformGrid grid(0.0, 0.01, 801);
    GridFn zero(grid);
    GridFnC g = apply_resolvent(cw, cplx(1.0, 0.5), zero, 1e-10);
    for (const cplx& v : g.v) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("resolvent defect identity (D - nu) R h = h") {
    for (const Potential& pot : {free_potential(), capped_well(1.0, 5.0, 0.1)}) {
        CheckResult r = check_resolvent_defect(pot, 1e-10);
        INFO(r.name << " " << r.measured);
        CHECK(r.pass);
    }
}

TEST_CASE("resolvent defect identity holds for p != 1") {
    std::vector<double> xs, ps, qs;
    for (int i = 0; i <= 800; ++i) {
        const double x = 30.0 * i / 800.0;
        xs.push_back(x);
        ps.push_back(1.0 + std::exp(-0.7 * x));
        qs.push_back(-0.4 * std::exp(-x));
    }
    Potential tab = tabulated_potential(xs, ps, qs);
    UniformGrid grid(0.0, 0.005, 2401);
    GridFn h = gaussian_bump(grid, 4.0, 0.8);
    const cplx nu(-0.8, 0.0);
    GridFnC g = apply_resolvent(tab, nu, h, 1e-10);
    GridFnC dg = apply_operator_fd(tab, g);
    double worst = 0.0;
    for (int i = 2; i + 2 < grid.n; ++i)
        worst = std::max(worst, std::abs(dg.v[i] - nu * g.v[i] - cplx(h.v[i])));
    // spline interpolation of the tabulated coefficients limits the floor
    CHECK(worst < 1e-5);
}

TEST_CASE("self-adjoint resolvent norm bound at nu = i") {
    CheckResult r = check_resolvent_bound(free_potential(), 1e-10);
    INFO(r.measured << " vs " << r.threshold);
    CHECK(r.pass);
}

TEST_CASE("kodaira pairing of zero data vanishes") {
    Potential fr = free_potential();
    UniformGrid grid(0.0, 0.01, 1101);
    GridFn g = gaussian_bump(grid, 3.0, 0.7);
    GridFn zero(grid);
    ProjectionReport rep = kodaira_pairing(fr, 1.0, 4.0, 1e-2, g, zero, 1e-8);
    CHECK(std::abs(rep.value) < 1e-14);
}

TEST_CASE("kodaira pairing converges to the free sine-transform oracle") {
    Potential fr = free_potential();
    UniformGrid grid(0.0, 0.01, 1101);
    GridFn g = gaussian_bump(grid, 3.0, 0.7);
    const double oracle = oracles::free_projection(g, g, 1.0, 4.0);

    double prev_err = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 1e-3}) {
        ProjectionReport rep = kodaira_pairing(fr, 1.0, 4.0, eps, g, g, 1e-8);
        const double err = std::abs(rep.value - oracle);
        CHECK(err < prev_err);
        // first-order in epsilon with an O(1) constant
        CHECK(err < 10.0 * eps * std::abs(oracle));
        prev_err = err;
    }
}

TEST_CASE("limit kernel closed forms") {
    Potential fr = free_potential();
    // (free, lambda=4, x=y=pi/4): (1/2) * (1/2) * rho(4) = 1/(2 pi).
    CHECK(limit_kernel(fr, 4.0, pi / 4.0, pi / 4.0, 1e-10) ==
          Catch::Approx(1.0 / (2.0 * pi)).epsilon(1e-8));
    // x = 0 annihilates the kernel.
    CHECK(limit_kernel(capped_well(1.0, 5.0, 0.1), 2.0, 0.0, 3.0, 1e-10) == 0.0);
    // (free, lambda=1, x=1, y=2) = sin(1) sin(2) / pi.
    CHECK(limit_kernel(fr, 1.0, 1.0, 2.0, 1e-10) ==
          Catch::Approx(std::sin(1.0) * std::sin(2.0) / pi).epsilon(1e-8));
}

TEST_CASE("pointwise kernel limit: Im k_{l+ie}(x,y)/pi approaches the projection density") {
    // The resolvent-difference integrand at one (x, y) converges to
    // F(x) F(y) / (4 pi sqrt(l) |c|^2) as epsilon drops.
    const double lambda = 2.0, x = 1.5, y = 3.0;
    for (const Potential& pot : {free_potential(), capped_well(1.0, 5.0, 0.1)}) {
        const double limit = limit_kernel(pot, lambda, x, y, 1e-10);
        double prev = std::numeric_limits<double>::infinity();
        for (double eps : {1e-2, 1e-3, 1e-4}) {
            GreenKernelSample k = green_kernel(pot, cplx(lambda, eps), x, y, 1e-10);
            const double err = std::abs(k.value.imag() / pi - limit);
            CHECK(err < prev);
            CHECK(err < 10.0 * eps * std::max(1.0, std::abs(limit)));
            prev = err;
        }
    }
}

TEST_CASE("epsilon-limit consistency connects kodaira to the weyl kernel") {
    Potential fr = free_potential();
    UniformGrid grid(0.0, 0.01, 1101);
    GridFn g = gaussian_bump(grid, 3.0, 0.7);
    ProjectionReport weyl = weyl_pairing(fr, 1.0, 4.0, g, g, 1e-9);
    std::vector<double> cs;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        ProjectionReport kod = kodaira_pairing(fr, 1.0, 4.0, eps, g, g, 1e-8);
        cs.push_back(std::abs(kod.value - weyl.value) / eps);
    }
    // fitted C = err/eps stable across two decades
    const double cmax = *std::max_element(cs.begin(), cs.end());
    const double cmin = *std::min_element(cs.begin(), cs.end());
    CHECK(cmax / cmin < 10.0);
}
