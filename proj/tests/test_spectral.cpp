#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "support/oracles.hpp"
#include "weylspec/checks.hpp"
#include "weylspec/spectral.hpp"

using namespace weylspec;

static const ExecPolicy par{2};

TEST_CASE("weyl pairing matches the free sine-transform oracle") {
    Potential fr = free_potential();
    UniformGrid grid = UniformGrid::cover(0.0, 9.2, 0.01);
    GridFn g = gaussian_bump(grid, 3.0, 0.7);
    ProjectionReport rep = weyl_pairing(fr, 1.0, 4.0, g, g, 1e-9, 1e-3, par);
    const double oracle = oracles::free_projection(g, g, 1.0, 4.0);
    CHECK(rep.value == Catch::Approx(oracle).epsilon(1e-7));
    CHECK(rep.converged);
}

TEST_CASE("weyl pairing with distinct data and the zero function") {
    Potential fr = free_potential();
    UniformGrid grid = UniformGrid::cover(0.0, 9.2, 0.01);
    GridFn g = gaussian_bump(grid, 3.0, 0.7);
    GridFn h = gaussian_bump(grid, 4.5, 0.9);
    GridFn zero(grid);
    ProjectionReport gh = weyl_pairing(fr, 1.0, 4.0, g, h, 1e-9, 1e-3, par);
    CHECK(gh.value == Catch::Approx(oracles::free_projection(g, h, 1.0, 4.0)).epsilon(1e-6));
    ProjectionReport gz = weyl_pairing(fr, 1.0, 4.0, g, zero, 1e-9, 1e-3, par);
    CHECK(std::abs(gz.value) < 1e-14);
    // symmetry of the bilinear pairing (self-adjointness surrogate)
    ProjectionReport hg = weyl_pairing(fr, 1.0, 4.0, h, g, 1e-9, 1e-3, par);
    CHECK(gh.value == Catch::Approx(hg.value).epsilon(1e-10));
}

TEST_CASE("weyl pairing validates its window") {
    Potential fr = free_potential();
    UniformGrid grid(0.0, 0.01, 301);
    GridFn g = gaussian_bump(grid, 1.5, 0.3);
    CHECK_THROWS_AS(weyl_pairing(fr, 4.0, 1.0, g, g, 1e-8), DomainError);
    CHECK_THROWS_AS(weyl_pairing(fr, 1e-4, 1.0, g, g, 1e-8), DomainError);
}

TEST_CASE("projection kernel closed forms and symmetry") {
    Potential fr = free_potential();
    // (free, [1,4], x=y=pi/4) = (2/pi) int_1^2 sin^2(k pi/4) dk
    auto integrand = [](double k) { return sq(std::sin(k * pi / 4.0)); };
    double ref = 0.0;
    const int n = 4000;
    for (int i = 0; i < n; ++i) ref += integrand(1.0 + (i + 0.5) / n) / n;
    ref *= 2.0 / pi;
    CHECK(projection_kernel(fr, 1.0, 4.0, pi / 4.0, pi / 4.0, 1e-10) ==
          Catch::Approx(ref).epsilon(1e-6));
    CHECK(projection_kernel(fr, 1.0, 4.0, 0.0, 2.0, 1e-10) == 0.0);
    Potential cw = capped_well(1.0, 5.0, 0.1);
    CHECK(projection_kernel(cw, 1.0, 4.0, 1.3, 2.9, 1e-9) ==
          Catch::Approx(projection_kernel(cw, 1.0, 4.0, 2.9, 1.3, 1e-9)).epsilon(1e-12));
}

TEST_CASE("projection kernel integrates the pointwise limit kernel") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    const double x = 1.7, y = 3.1;
    QuadOptions opt;
    opt.rel_tol = 1e-9;
    auto f = [&](double lambda) { return limit_kernel(cw, lambda, x, y, 1e-9); };
    const double via_limits = adaptive_quadrature(f, 1.0, 4.0, opt).value;
    CHECK(projection_kernel(cw, 1.0, 4.0, x, y, 1e-9) ==
          Catch::Approx(via_limits).epsilon(1e-7));
}

TEST_CASE("transform of the free potential is the sine transform") {
    Potential fr = free_potential();
    UniformGrid grid = UniformGrid::cover(0.0, 9.2, 0.01);
    GridFn h = gaussian_bump(grid, 5.0, 0.7);
    std::vector<BoundState> none;
    std::vector<double> lg{0.25, 1.0, 2.25, 4.0, 9.0};
    TransformResult tr = transform(fr, h, lg, 1e-10, &none, par);
    for (size_t i = 0; i < lg.size(); ++i) {
        const double k = std::sqrt(lg[i]);
        CHECK(tr.coefficients[i] * k ==
              Catch::Approx(oracles::sine_transform(h, k)).margin(1e-8));
    }
    CHECK(tr.bound_coefficients.empty());
}

TEST_CASE("transform is linear and annihilates zero") {
    for (const Potential& pot : {free_potential(), capped_well(1.0, 5.0, 0.1)}) {
        CheckResult r = check_transform_linearity(pot, 1e-10);
        INFO(r.name);
        CHECK(r.pass);
    }
}

TEST_CASE("transform far-out data matches the comparison-wave coefficients") {
    // h supported in [8, 10], far beyond the well: <F_lambda, h> should agree
    // with the pairing against the asymptotic wave a cos + b sin/k within the
    // certified truncation error.
    Potential cw = capped_well(1.0, 5.0, 0.1);
    UniformGrid grid = UniformGrid::cover(0.0, 10.5, 0.01);
    GridFn h = gaussian_bump(grid, 9.0, 0.3);
    std::vector<BoundState> none;
    std::vector<double> lg{1.0, 2.5};
    TransformResult tr = transform(cw, h, lg, 1e-10, &none, par);
    for (size_t i = 0; i < lg.size(); ++i) {
        SpectralNode node(cw, lg[i], 1e-10);
        const double k = std::sqrt(lg[i]);
        std::vector<double> prod(grid.n);
        for (int j = 0; j < grid.n; ++j) {
            const double x = grid.x(j);
            prod[j] = (node.point().a * std::cos(k * x) +
                       node.point().b * std::sin(k * x) / k) *
                      h.v[j];
        }
        const double wave_pairing = simpson(prod, grid.dx);
        CHECK(std::abs(tr.coefficients[i] - wave_pairing) <=
              node.point().truncation_error_bound + 1e-9);
    }
}

TEST_CASE("free reconstruction matches the classical inverse sine transform") {
    Potential fr = free_potential();
    UniformGrid grid = UniformGrid::cover(0.0, 9.2, 0.01);
    GridFn h = gaussian_bump(grid, 5.0, 0.7);
    std::vector<BoundState> none;
    ReconstructReport rep = reconstruct(fr, h, 2000.0, 1e-3, 1e-3, &none, par);
    CHECK(rep.sup_deviation <= 1e-3);
    CHECK(rep.lambda_max_used == 60.0);
    // independent check at a few points against the direct inverse transform
    for (double x : {3.0, 5.0, 6.5}) {
        const double ref = oracles::free_reconstruction(h, x, std::sqrt(1e-3), std::sqrt(60.0));
        const int idx = static_cast<int>(std::round(x / grid.dx));
        CHECK(rep.reconstruction.v[idx] == Catch::Approx(ref).margin(2e-5));
    }
}

TEST_CASE("reconstruction of zero is zero") {
    Potential fr = free_potential();
    UniformGrid grid(0.0, 0.01, 901);
    GridFn zero(grid);
    std::vector<BoundState> none;
    ReconstructReport rep = reconstruct(fr, zero, 100.0, 1e-3, 1e-3, &none, par);
    CHECK(rep.sup_deviation < 1e-14);
}

TEST_CASE("capped-well reconstruction needs its bound states") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    UniformGrid grid = UniformGrid::cover(0.0, 9.2, 0.01);
    GridFn h = gaussian_bump(grid, 5.0, 0.7);
    std::vector<BoundState> bound =
        find_bound_states(cw, 0.05, 0.95, 128, 1e-10, 0.01, par).states;
    ReconstructReport with = reconstruct(cw, h, 2000.0, 1e-3, 1e-3, &bound, par);
    CHECK(with.sup_deviation <= 1e-3);
    CHECK(with.bound_share > 0.5);
    std::vector<BoundState> none;
    ReconstructReport without = reconstruct(cw, h, 2000.0, 1e-3, 1e-3, &none, par);
    CHECK(without.sup_deviation > 100.0 * with.sup_deviation);
}

TEST_CASE("parseval identity for the free potential") {
    Potential fr = free_potential();
    UniformGrid grid = UniformGrid::cover(0.0, 9.2, 0.01);
    GridFn h = gaussian_bump(grid, 5.0, 0.7);
    std::vector<BoundState> none;
    // with the threshold pushed to 1e-4 the defect reaches 1e-4 territory
    ParsevalReport rep = parseval_check(fr, h, 60.0, 1e-4, 1e-4, &none, par);
    CHECK(rep.defect_rel <= 1e-4);
    // sine-transform Plancherel oracle for the continuous energy
    const double oracle = oracles::free_projection(h, h, 1e-4, 60.0);
    CHECK(rep.continuous_integral == Catch::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("parseval of the zero function reports zeros") {
    Potential fr = free_potential();
    UniformGrid grid(0.0, 0.01, 901);
    GridFn zero(grid);
    std::vector<BoundState> none;
    ParsevalReport rep = parseval_check(fr, zero, 60.0, 1e-3, 1e-3, &none, par);
    CHECK(rep.norm_sq == 0.0);
    CHECK(rep.bound_sum == 0.0);
    CHECK(rep.continuous_integral == 0.0);
    CHECK(rep.defect_rel == 0.0);
}

TEST_CASE("parseval budget includes a strictly positive bound-state share") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    UniformGrid grid = UniformGrid::cover(0.0, 9.2, 0.01);
    GridFn h = gaussian_bump(grid, 2.0, 0.7);
    std::vector<BoundState> bound =
        find_bound_states(cw, 0.05, 0.95, 128, 1e-10, 0.01, par).states;
    ParsevalReport rep = parseval_check(cw, h, 60.0, 1e-3, 1e-3, &bound, par);
    CHECK(rep.defect_rel <= 1e-3);
    CHECK(rep.bound_sum > 0.0);
}

TEST_CASE("projection operator properties") {
    for (const Potential& pot : {free_potential(), capped_well(1.0, 5.0, 0.1)}) {
        CheckResult idem = check_projection_idempotent(pot, 1e-9, par);
        INFO(idem.name << ": " << idem.measured);
        CHECK(idem.pass);
        CheckResult loc = check_spectral_localization(pot, 1e-9, par);
        CHECK(loc.pass);
        CheckResult add = check_interval_additivity(pot, 1e-9, par);
        CHECK(add.pass);
        CheckResult agree = check_method_agreement(pot, 1e-9, par);
        INFO(agree.name << ": " << agree.measured);
        CHECK(agree.pass);
    }
}

TEST_CASE("time-average identity: phi below the spectrum gives zero") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    UniformGrid grid = UniformGrid::cover(0.0, 12.2, 0.01);
    GridFn g = gaussian_bump(grid, 8.0, 0.7);
    auto phi = bump_window(1e-6, 5e-4); // entirely below lambda_min
    TimeAverageReport rep =
        time_average_check(cw, phi, 1e-6, 5e-4, g, g, {10.0}, 1e-9, 1e-3, par);
    CHECK(rep.lhs == 0.0);
    CHECK(rep.rhs[0] == 0.0);
    CHECK(rep.defect[0] == 0.0);
}

TEST_CASE("time-average identity for the free potential holds at every T") {
    Potential fr = free_potential();
    UniformGrid grid = UniformGrid::cover(0.0, 12.2, 0.01);
    GridFn g = gaussian_bump(grid, 8.0, 0.7);
    auto phi = bump_window(1.0, 4.0);
    TimeAverageReport rep =
        time_average_check(fr, phi, 1.0, 4.0, g, g, {10.0, 30.0, 100.0}, 1e-9, 1e-3, par);
    for (double d : rep.defect) CHECK(d <= 1e-3);
}

TEST_CASE("time-average defect decreases for the capped well") {
    Potential cw = capped_well(1.0, 5.0, 0.1);
    UniformGrid grid = UniformGrid::cover(0.0, 12.2, 0.01);
    GridFn g = gaussian_bump(grid, 8.0, 0.7);
    auto phi = bump_window(1.0, 4.0);
    TimeAverageReport rep =
        time_average_check(cw, phi, 1.0, 4.0, g, g, {10.0, 30.0, 100.0}, 1e-9, 1e-3, par);
    CHECK(rep.non_increasing);
    CHECK(rep.defect.back() <= 1e-3);
}
