#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "weylspec/common.hpp"
#include "weylspec/grid.hpp"
#include "weylspec/ode.hpp"
#include "weylspec/potential.hpp"
#include "weylspec/quadrature.hpp"
#include "weylspec/scattering.hpp"

namespace weylspec {

// ---------------------------------------------------------------------------
// Resolvent kernel k_nu(x, y) = F_nu(min) G_nu(max) / w(nu)
// ---------------------------------------------------------------------------

struct GreenKernelSample {
    cplx nu;
    double x = 0.0, y = 0.0;
    cplx value{};
    cplx wronskian_w{};
};

namespace detail {

inline void check_resolvent_nu(const cplx& nu) {
    if (nu.imag() == 0.0 && nu.real() >= 0.0)
        throw DomainError("green: nu on the nonnegative real axis is in (or at) "
                          "the continuous spectrum");
}

/// F_nu, G_nu and the Wronskian w(nu) = -w_x(F, G) on a shared sorted grid.
struct GreenSolutions {
    cplx nu;
    cplx w{};
    Eigenfunction F;
    Eigenfunction G;
};

inline GreenSolutions green_solutions(const Potential& pot, const cplx& nu,
                                      std::vector<double> xs, double tol) {
    check_resolvent_nu(nu);
    std::sort(xs.begin(), xs.end());
    if (xs.front() < 0.0) throw DomainError("green: coordinates must be >= 0");
    if (xs.front() > 0.0) xs.insert(xs.begin(), 0.0); // anchor the Wronskian at 0

    double x_max = std::max(1.0, xs.back());
    while (!(pot.majorant_tail(x_max) < tol)) {
        x_max *= 2.0;
        if (x_max > 1e6)
            throw NumericalError("green: no x_max with small coefficient tail");
    }

    GreenSolutions gs;
    gs.nu = nu;
    gs.F = regular_eigenfunction(pot, nu, xs, tol);
    gs.G = decaying_eigenfunction(pot, nu, xs, x_max, tol);
    // With F(0) = 0, pF'(0) = p(0): w = p(0) G(0).
    gs.w = wronskian(pot, gs.F, gs.G, xs.front());
    if (std::abs(gs.w) < 1e-12)
        throw NumericalError("green: |w(nu)| < 1e-12; nu is numerically too close "
                             "to an eigenvalue / the spectrum");
    return gs;
}

} // namespace detail

inline GreenKernelSample green_kernel(const Potential& pot, const cplx& nu,
                                      double x, double y, double tol) {
    if (x < 0.0 || y < 0.0) throw DomainError("green_kernel: x, y must be >= 0");
    const double lo = std::min(x, y), hi = std::max(x, y);
    detail::GreenSolutions gs = detail::green_solutions(pot, nu, {lo, hi}, tol);
    GreenKernelSample s;
    s.nu = nu;
    s.x = x;
    s.y = y;
    s.wronskian_w = gs.w;
    s.value = gs.F.f[gs.F.index_of(lo)] * gs.G.f[gs.G.index_of(hi)] / gs.w;
    return s;
}

// ---------------------------------------------------------------------------
// Resolvent application
// ---------------------------------------------------------------------------

namespace detail {

/// Cumulative integral of uniformly sampled values with O(dx^4) cell rules
/// (4-point interpolatory weights; one-sided at the ends).
template <class T>
std::vector<T> cumulative_integral(const std::vector<T>& v, double dx) {
    const int n = static_cast<int>(v.size());
    std::vector<T> acc(n, T{});
    if (n < 2) return acc;
    if (n < 4) {
        for (int i = 1; i < n; ++i)
            acc[i] = acc[i - 1] + dx * 0.5 * (v[i - 1] + v[i]);
        return acc;
    }
    auto cell = [&](int i) -> T {
        // integral over [x_i, x_{i+1}]
        if (i == 0)
            return dx / 24.0 * (9.0 * v[0] + 19.0 * v[1] - 5.0 * v[2] + v[3]);
        if (i == n - 2)
            return dx / 24.0 *
                   (9.0 * v[n - 1] + 19.0 * v[n - 2] - 5.0 * v[n - 3] + v[n - 4]);
        return dx / 24.0 * (-v[i - 1] + 13.0 * v[i] + 13.0 * v[i + 1] - v[i + 2]);
    };
    for (int i = 1; i < n; ++i) acc[i] = acc[i - 1] + cell(i - 1);
    return acc;
}

} // namespace detail

/// g = (D - nu)^{-1} h by the kernel formula, with the y-integral split at the
/// diagonal (the kernel is continuous there but its derivative jumps):
/// g(x) = [G(x) * int_0^x F h + F(x) * int_x^X G h] / w.
inline GridFnC apply_resolvent(const Potential& pot, const cplx& nu,
                               const GridFn& h, double tol) {
    detail::check_resolvent_nu(nu);
    const UniformGrid& grid = h.grid;
    if (grid.x0 != 0.0)
        throw DomainError("apply_resolvent: sample grid must start at x = 0");
    detail::GreenSolutions gs = detail::green_solutions(pot, nu, grid.points(), tol);

    const int n = grid.n;
    std::vector<cplx> Fh(n), Gh(n);
    for (int i = 0; i < n; ++i) {
        Fh[i] = gs.F.f[i] * h.v[i];
        Gh[i] = gs.G.f[i] * h.v[i];
    }
    std::vector<cplx> A = detail::cumulative_integral(Fh, grid.dx); // int_0^x F h
    std::vector<cplx> B = detail::cumulative_integral(Gh, grid.dx);
    const cplx B_total = B.back();

    GridFnC g(grid);
    for (int i = 0; i < n; ++i)
        g.v[i] = (gs.G.f[i] * A[i] + gs.F.f[i] * (B_total - B[i])) / gs.w;
    return g;
}

// ---------------------------------------------------------------------------
// Spectral projections
// ---------------------------------------------------------------------------

enum class ProjectionMethod { weyl, kodaira };

inline const char* to_string(ProjectionMethod m) {
    return m == ProjectionMethod::weyl ? "weyl" : "kodaira";
}

/// Result of one projection pairing <g, P_{[alpha,beta]} h>.
struct ProjectionReport {
    double alpha = 0.0, beta = 0.0;
    ProjectionMethod method = ProjectionMethod::weyl;
    double epsilon = 0.0; ///< 0 for the Weyl route
    double value = 0.0;
    double quad_error = 0.0;
    int evaluations = 0;
    bool converged = true;
    /// (lambda, {integrand}) per quadrature node when recording was requested.
    std::vector<std::pair<double, std::vector<double>>> nodes;
};

/// Smoothed projection pairing by the resolvent-difference route:
/// (1/2 pi i) int_alpha^beta <g, [(D-l-ie)^{-1} - (D-l+ie)^{-1}] h> dl.
/// For real data the second resolvent is the conjugate of the first, so each
/// lambda node costs one resolvent application.
inline ProjectionReport kodaira_pairing(const Potential& pot, double alpha,
                                        double beta, double epsilon,
                                        const GridFn& g, const GridFn& h,
                                        double tol, const ExecPolicy& exec = {},
                                        bool record_nodes = false) {
    if (!(0.0 < alpha && alpha < beta))
        throw DomainError("kodaira_pairing: need 0 < alpha < beta");
    if (!(epsilon > 0.0)) throw DomainError("kodaira_pairing: need epsilon > 0");
    if (!(g.grid == h.grid)) throw DomainError("kodaira_pairing: grids differ");

    auto integrand = [&](double lambda) {
        const GridFnC rh = apply_resolvent(pot, cplx(lambda, epsilon), h, tol);
        std::vector<cplx> prod(rh.v.size());
        for (size_t i = 0; i < prod.size(); ++i) prod[i] = g.v[i] * rh.v[i];
        const cplx pairing = simpson(prod, g.grid.dx);
        return std::vector<double>{pairing.imag() / pi, pairing.real() / pi};
    };

    QuadOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-13;
    opt.exec = exec;
    opt.record_nodes = record_nodes;
    QuadResult qr = adaptive_quadrature_vec(integrand, alpha, beta, opt);

    ProjectionReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.method = ProjectionMethod::kodaira;
    rep.epsilon = epsilon;
    rep.value = qr.value[0];
    rep.quad_error = qr.error;
    rep.evaluations = qr.evaluations;
    rep.converged = qr.converged;
    rep.nodes = std::move(qr.nodes);
    return rep;
}

/// Pointwise epsilon -> 0 limit of the Kodaira integrand: the projection
/// kernel density F_l(x) F_l(y) / (4 pi sqrt(l) |c(l)|^2).
inline double limit_kernel(const Potential& pot, double lambda, double x, double y,
                           double tol, double lambda_min = default_lambda_min) {
    if (!(lambda > lambda_min))
        throw DomainError("limit_kernel: lambda below the threshold policy");
    if (x < 0.0 || y < 0.0) throw DomainError("limit_kernel: x, y must be >= 0");
    SpectralNode node(pot, lambda, tol);
    return node.value(x) * node.value(y) * node.density();
}

} // namespace weylspec
