#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "weylspec/checks.hpp"
#include "weylspec/ode.hpp"

using namespace weylspec;

TEST_CASE("free propagator closed forms") {
    // exp(0 C) = I for any lambda.
    for (double l : {-3.0, 0.0, 2.0}) {
        Mat2c e = free_propagator(cplx(l), 0.0);
        CHECK((e - Mat2c::identity()).hs_norm() == Catch::Approx(0.0).margin(1e-15));
    }
    // (1, pi/2): cos(pi/2) I + sin(pi/2) C_1 = [[0,1],[-1,0]].
    Mat2c r = free_propagator(cplx(1.0), pi / 2.0);
    CHECK(r.m00.real() == Catch::Approx(0.0).margin(1e-15));
    CHECK(r.m01.real() == Catch::Approx(1.0));
    CHECK(r.m10.real() == Catch::Approx(-1.0));
    // (-1, 1): cosh(1) I + sinh(1) C_{-1}; entry (1,2) = sinh(1).
    Mat2c hb = free_propagator(cplx(-1.0), 1.0);
    CHECK(hb.m01.real() == Catch::Approx(std::sinh(1.0)).epsilon(1e-14));
    CHECK(hb.m00.real() == Catch::Approx(std::cosh(1.0)).epsilon(1e-14));
    // lambda = 0: shear [[1, x], [0, 1]].
    Mat2c sh = free_propagator(cplx(0.0), 2.5);
    CHECK(sh.m01.real() == Catch::Approx(2.5));
    CHECK(sh.m10.real() == 0.0);
}

TEST_CASE("free propagator series fallback agrees with the closed form") {
    // |lambda| x^2 just above and below the series threshold.
    for (double l : {1e-6, -1e-6}) {
        Mat2c a = free_propagator(cplx(l), 0.05);          // series branch
        Mat2c b = free_propagator(cplx(4.0 * l), 0.05);    // closed-form branch
        // compare the series value against the analytic expansion instead
        const double x = 0.05;
        CHECK(a.m00.real() == Catch::Approx(1.0 - l * x * x / 2.0).epsilon(1e-13));
        CHECK(a.m01.real() == Catch::Approx(x * (1.0 - l * x * x / 6.0)).epsilon(1e-13));
        (void)b;
    }
}

TEST_CASE("propagator inverse property over the random domain") {
    CheckResult r = check_propagator_inverse(12345);
    INFO(r.measured);
    CHECK(r.pass);
}

TEST_CASE("complex lambda propagator solves the system") {
    const cplx l(2.0, 1.5);
    const double x = 1.3, h = 1e-5;
    Mat2c em = free_propagator(l, x - h);
    Mat2c ep = free_propagator(l, x + h);
    Mat2c e = free_propagator(l, x);
    // d/dx exp(xC) = C exp(xC)
    Mat2c lhs = (1.0 / (2.0 * h)) * (ep - em);
    Mat2c c{cplx(0.0), cplx(1.0), -l, cplx(0.0)};
    Mat2c rhs = c * e;
    CHECK((lhs - rhs).hs_norm() < 1e-8);
}

TEST_CASE("solve_system free closed forms") {
    Potential fr = free_potential();
    // lambda = 4: F = sin(2x)/2 from [0, 1].
    Trajectory t1 = solve_system(fr, cplx(4.0), {cplx(0.0), cplx(1.0)}, 0.0, pi, 1e-10);
    CHECK(std::abs(t1.eval(pi).a) < 1e-9);
    CHECK(t1.eval(pi / 4.0).a.real() == Catch::Approx(0.5).epsilon(1e-9));
    // lambda = -1: F = sinh(x).
    Trajectory t2 = solve_system(fr, cplx(-1.0), {cplx(0.0), cplx(1.0)}, 0.0, 1.0, 1e-10);
    CHECK(t2.eval(1.0).a.real() == Catch::Approx(std::sinh(1.0)).epsilon(1e-9));
}

TEST_CASE("zero data gives the zero trajectory") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    Trajectory t = solve_system(cw, cplx(2.0), {cplx(0.0), cplx(0.0)}, 0.0, 8.0, 1e-10);
    for (const Vec2c& u : t.states) CHECK(u.norm() == 0.0);
}

TEST_CASE("trajectory grid starts at x0 and is monotone in the run direction") {
    Potential fr = free_potential();
    Trajectory fwd = solve_system(fr, cplx(1.0), {cplx(0.0), cplx(1.0)}, 0.0, 5.0, 1e-8);
    CHECK(fwd.grid.front() == 0.0);
    for (size_t i = 1; i < fwd.grid.size(); ++i) CHECK(fwd.grid[i] > fwd.grid[i - 1]);
    Trajectory bwd = solve_system(fr, cplx(1.0), {cplx(1.0), cplx(0.0)}, 5.0, 0.0, 1e-8);
    CHECK(bwd.grid.front() == 5.0);
    for (size_t i = 1; i < bwd.grid.size(); ++i) CHECK(bwd.grid[i] < bwd.grid[i - 1]);
}

TEST_CASE("dense output satisfies the ODE residual at step midpoints") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    const double tol = 1e-10;
    const cplx lambda(3.0);
    Trajectory tr = solve_system(cw, lambda, {cplx(0.0), cplx(1.0)}, 0.0, 10.0, tol);
    SLVectorSystem rhs{&cw, lambda};
    double worst = 0.0;
    for (const auto& step : tr.dense.steps) {
        const double xm = step.x0 + 0.5 * step.h;
        const Vec2c u = step.eval(xm);
        const Vec2c du = step.eval_derivative(xm);
        const Vec2c res = du - rhs(xm, u);
        worst = std::max(worst, res.norm() / (1.0 + u.norm()));
    }
    INFO("max residual " << worst);
    CHECK(worst <= 10.0 * tol);
}

TEST_CASE("solve_system matches the fixed-step RK4 oracle through the well") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    const cplx lambda(0.5);
    Trajectory tr = solve_system(cw, lambda, {cplx(0.0), cplx(1.0)}, 0.0, 1.0, 1e-10);
    const Vec2c ref = oracles::rk4_solve(cw, lambda, {cplx(0.0), cplx(1.0)}, 0.0, 1.0,
                                         1'000'000);
    CHECK(std::abs(tr.eval(1.0).a - ref.a) < 1e-8);
    CHECK(std::abs(tr.eval(1.0).b - ref.b) < 1e-8);
}

TEST_CASE("regular eigenfunction boundary data and samples") {
    Potential fr = free_potential();
    Eigenfunction ef = regular_eigenfunction(fr, cplx(4.0), {pi / 4.0}, 1e-10);
    CHECK(ef.f[0].real() == Catch::Approx(0.5).epsilon(1e-9));
    CHECK(ef.orientation == Orientation::regular_at_0);

    Eigenfunction at0 = regular_eigenfunction(fr, cplx(1.0), {0.0}, 1e-10);
    CHECK(at0.f[0] == cplx(0.0));
    CHECK(at0.f_prime_at_0 == cplx(1.0));
}

TEST_CASE("regular eigenfunction agrees with the high-resolution oracle") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    Eigenfunction ef = regular_eigenfunction(cw, cplx(0.5), {1.0}, 1e-10);
    const Vec2c ref =
        oracles::rk4_solve(cw, cplx(0.5), {cplx(0.0), cplx(1.0)}, 0.0, 1.0, 1'000'000);
    CHECK(std::abs(ef.f[0] - ref.a) < 1e-8);
}

TEST_CASE("decaying eigenfunction free closed forms") {
    Potential fr = free_potential();
    // nu = -1: G = e^{-x} (sqrt branch with positive imaginary part).
    Eigenfunction g1 = decaying_eigenfunction(fr, cplx(-1.0), {2.0}, 6.0, 1e-10);
    CHECK(g1.f[0].real() == Catch::Approx(std::exp(-2.0)).epsilon(1e-9));
    CHECK(std::abs(g1.f[0].imag()) < 1e-12);
    // nu = i: seed transported exactly since Q == 0.
    Eigenfunction g2 = decaying_eigenfunction(fr, cplx(0.0, 1.0), {0.0}, 5.0, 1e-10);
    CHECK(g2.f[0].real() == Catch::Approx(1.0).epsilon(1e-9));
    CHECK(g2.f[0].imag() == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("decaying eigenfunction has the exterior decay rate for the capped well") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    std::vector<double> grid;
    for (double x = 6.0; x <= 12.0; x += 0.5) grid.push_back(x);
    Eigenfunction g = decaying_eigenfunction(cw, cplx(-1.0), grid, 12.0, 1e-10);
    for (size_t i = 0; i < grid.size(); ++i) {
        const double scaled = std::abs(g.f[i]) * std::exp(grid[i]);
        CHECK(scaled == Catch::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("decaying eigenfunction rejects spectrum-side nu and small x_max") {
    Potential fr = free_potential();
    CHECK_THROWS_AS(decaying_eigenfunction(fr, cplx(2.0, 0.0), {1.0}, 10.0, 1e-10),
                    DomainError);
    Potential ed = exp_decay(1.0, 1.0);
    // majorant tail at x_max = 2 is e^{-2} >> tol.
    CHECK_THROWS_AS(decaying_eigenfunction(ed, cplx(-1.0), {1.0}, 2.0, 1e-10),
                    DomainError);
}

TEST_CASE("wronskian values and errors") {
    Potential fr = free_potential();
    const cplx nu(-1.0);
    std::vector<double> xs{0.0, 1.0, 3.0};
    Eigenfunction F = regular_eigenfunction(fr, nu, xs, 1e-10);
    Eigenfunction G = decaying_eigenfunction(fr, nu, xs, 8.0, 1e-10);
    // w = -p(F G' - F' G) = 1 for the free normalization.
    CHECK(wronskian(fr, F, G, 0.0).real() == Catch::Approx(1.0).epsilon(1e-10));
    // antisymmetry: w(f, f) = 0.
    CHECK(std::abs(wronskian(fr, F, F, 1.0)) < 1e-14);
    // mismatched spectral parameters.
    Eigenfunction H = regular_eigenfunction(fr, cplx(-2.0), xs, 1e-10);
    CHECK_THROWS_AS(wronskian(fr, F, H, 1.0), DomainError);
}

TEST_CASE("wronskian constancy across x for the capped well") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    CheckResult r = check_wronskian_constancy(cw, 1e-10);
    INFO(r.measured);
    CHECK(r.pass);
}

TEST_CASE("real spectral parameter keeps the trajectory real") {
    for (const Potential& pot : {free_potential(), capped_well(1.0, 5.0, 0.1)}) {
        CheckResult r = check_real_lambda_real_trajectory(pot, 1e-10, 777);
        INFO(r.name);
        CHECK(r.pass);
    }
}

TEST_CASE("free solve agrees with the propagator along the run") {
    CheckResult r = check_free_solve_vs_propagator(1e-10);
    INFO(r.measured);
    CHECK(r.pass);
}

TEST_CASE("integrator input validation") {
    Potential fr = free_potential();
    CHECK_THROWS_AS(solve_system(fr, cplx(1.0), {cplx(0.0), cplx(1.0)}, 1.0, 1.0, 1e-8),
                    DomainError);
    CHECK_THROWS_AS(solve_system(fr, cplx(1.0), {cplx(0.0), cplx(1.0)}, 0.0, 1.0, -1.0),
                    DomainError);
}

TEST_CASE("step underflow at a coefficient singularity is reported") {
    // q blows up at x = 1; the step controller collapses and must abort with
    // a located error instead of looping.
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    auto q = [](double x) { return 1.0 / sq(1.0 - x); };
    Potential sing("interior_pole", one, zero, q, DecayClass::PowerIntegrable, 0.0,
                   q, [](double) { return 1.0; });
    try {
        solve_system(sing, cplx(1.0), {cplx(0.0), cplx(1.0)}, 0.0, 2.0, 1e-10);
        FAIL("expected NumericalError");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("x = ") != std::string::npos);
    }
}
