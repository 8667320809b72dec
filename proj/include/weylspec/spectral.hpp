#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "weylspec/bound_states.hpp"
#include "weylspec/common.hpp"
#include "weylspec/green.hpp"
#include "weylspec/grid.hpp"
#include "weylspec/parallel.hpp"
#include "weylspec/potential.hpp"
#include "weylspec/quadrature.hpp"
#include "weylspec/scattering.hpp"

namespace weylspec {

namespace detail {

/// Simpson product integral of two samplings that share x0 = 0 and dx but may
/// differ in length; the shorter one is zero-extended (valid when at least one
/// factor is negligible beyond its grid).
inline double inner_padded(const GridFn& a, const GridFn& b) {
    if (a.grid.x0 != 0.0 || b.grid.x0 != 0.0)
        throw DomainError("inner_padded: grids must start at 0");
    if (std::abs(a.grid.dx - b.grid.dx) > 1e-12 * a.grid.dx)
        throw DomainError("inner_padded: grid spacings differ");
    const int n = std::min(a.grid.n, b.grid.n);
    std::vector<double> prod(n);
    for (int i = 0; i < n; ++i) prod[i] = a.v[i] * b.v[i];
    return simpson(prod, a.grid.dx);
}

inline std::vector<BoundState> default_bound_states(const Potential& pot,
                                                    double tol, double dx,
                                                    const ExecPolicy& exec) {
    auto [z_lo, z_hi] = default_z_window(pot);
    if (!(z_hi > z_lo)) return {};
    return find_bound_states(pot, z_lo, z_hi, 128, tol, dx, exec).states;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Weyl-route projections (Thm. kernel / pairing)
// ---------------------------------------------------------------------------

/// <g, P_{[alpha,beta]} h> = (1/4pi) int_alpha^beta <g,F_l><F_l,h> |c|^{-2} dl/sqrt(l),
/// integrated in k = sqrt(l) (dl/sqrt(l) = 2 dk removes the endpoint weight).
inline ProjectionReport weyl_pairing(const Potential& pot, double alpha, double beta,
                                     const GridFn& g, const GridFn& h, double tol,
                                     double lambda_min = default_lambda_min,
                                     const ExecPolicy& exec = {},
                                     bool record_nodes = false) {
    if (!(lambda_min < alpha && alpha < beta))
        throw DomainError("weyl_pairing: need lambda_min < alpha < beta");
    if (!(g.grid == h.grid)) throw DomainError("weyl_pairing: grids differ");
    const std::vector<double> xs = g.grid.points();
    const bool same = g.v == h.v;

    auto integrand = [&](double k) {
        SpectralNode node(pot, k * k, tol);
        const std::vector<double> F = node.values(xs);
        std::vector<double> pg(F.size()), ph(F.size());
        for (size_t i = 0; i < F.size(); ++i) {
            pg[i] = F[i] * g.v[i];
            ph[i] = F[i] * h.v[i];
        }
        const double cg = simpson(pg, g.grid.dx);
        const double ch = same ? cg : simpson(ph, g.grid.dx);
        return std::vector<double>{cg * ch / (2.0 * pi * node.point().c_abs_sq)};
    };

    QuadOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-14;
    opt.exec = exec;
    opt.record_nodes = record_nodes;
    QuadResult qr =
        adaptive_quadrature_vec(integrand, std::sqrt(alpha), std::sqrt(beta), opt);

    ProjectionReport rep;
    rep.alpha = alpha;
    rep.beta = beta;
    rep.method = ProjectionMethod::weyl;
    rep.value = qr.value[0];
    rep.quad_error = qr.error;
    rep.evaluations = qr.evaluations;
    rep.converged = qr.converged;
    rep.nodes = std::move(qr.nodes);
    return rep;
}

/// Kernel of the spectral projection, p_{[alpha,beta]}(x, y).
inline double projection_kernel(const Potential& pot, double alpha, double beta,
                                double x, double y, double tol,
                                double lambda_min = default_lambda_min,
                                const ExecPolicy& exec = {}) {
    if (!(lambda_min < alpha && alpha < beta))
        throw DomainError("projection_kernel: need lambda_min < alpha < beta");
    if (x < 0.0 || y < 0.0) throw DomainError("projection_kernel: x, y >= 0");
    auto integrand = [&](double k) {
        SpectralNode node(pot, k * k, tol);
        return std::vector<double>{node.value(x) * node.value(y) /
                                   (2.0 * pi * node.point().c_abs_sq)};
    };
    QuadOptions opt;
    opt.rel_tol = tol;
    opt.abs_tol = 1e-14;
    opt.exec = exec;
    QuadResult qr =
        adaptive_quadrature_vec(integrand, std::sqrt(alpha), std::sqrt(beta), opt);
    return qr.value[0];
}

// ---------------------------------------------------------------------------
// Eigenfunction transform
// ---------------------------------------------------------------------------

struct TransformResult {
    std::vector<double> lambda_grid;
    std::vector<double> coefficients;       ///< <F_lambda, h>
    std::vector<double> bound_lambdas;
    std::vector<double> bound_coefficients; ///< <f_n, h> (f_n normalized)
};

inline TransformResult transform(const Potential& pot, const GridFn& h,
                                 const std::vector<double>& lambda_grid, double tol,
                                 const std::vector<BoundState>* bound = nullptr,
                                 const ExecPolicy& exec = {}) {
    for (double l : lambda_grid)
        if (!(l > 0.0)) throw DomainError("transform: lambda grid must be positive");
    const std::vector<double> xs = h.grid.points();

    TransformResult tr;
    tr.lambda_grid = lambda_grid;
    tr.coefficients = parallel_map<double>(
        lambda_grid.size(), exec, [&](size_t i) {
            SpectralNode node(pot, lambda_grid[i], tol);
            const std::vector<double> F = node.values(xs);
            std::vector<double> prod(F.size());
            for (size_t j = 0; j < F.size(); ++j) prod[j] = F[j] * h.v[j];
            return simpson(prod, h.grid.dx);
        });

    std::vector<BoundState> own;
    if (!bound) {
        own = detail::default_bound_states(pot, tol, h.grid.dx, exec);
        bound = &own;
    }
    for (const BoundState& st : *bound) {
        tr.bound_lambdas.push_back(st.lambda);
        tr.bound_coefficients.push_back(detail::inner_padded(st.f, h));
    }
    return tr;
}

// ---------------------------------------------------------------------------
// Band reconstruction / full reconstruction / Parseval
// ---------------------------------------------------------------------------

struct BandReconstruction {
    GridFn values;          ///< int_band rho(l) <F_l,h> F_l(x) dl on h's grid
    double edge_magnitude = 0.0; ///< max integrand component at the upper edge
    int evaluations = 0;
    bool converged = true;
};

/// Continuum part of the expansion restricted to [lambda_lo, lambda_hi];
/// this is P_{[lo,hi]} h realized through the transform.
inline BandReconstruction band_reconstruct(const Potential& pot, const GridFn& h,
                                           double lambda_lo, double lambda_hi,
                                           double tol, const ExecPolicy& exec = {}) {
    if (!(0.0 < lambda_lo && lambda_lo < lambda_hi))
        throw DomainError("band_reconstruct: need 0 < lambda_lo < lambda_hi");
    const std::vector<double> xs = h.grid.points();
    const int n = h.grid.n;

    auto integrand = [&](double k) {
        SpectralNode node(pot, k * k, tol);
        const std::vector<double> F = node.values(xs);
        std::vector<double> prod(n);
        for (int j = 0; j < n; ++j) prod[j] = F[j] * h.v[j];
        const double ch = simpson(prod, h.grid.dx);
        const double w = node.density() * ch * 2.0 * k; // rho * <F,h> * dl/dk
        std::vector<double> out(n);
        for (int j = 0; j < n; ++j) out[j] = w * F[j];
        return out;
    };

    QuadOptions opt;
    opt.rel_tol = std::max(tol, 1e-10);
    opt.abs_tol = 1e-12;
    opt.exec = exec;
    QuadResult qr = adaptive_quadrature_vec(integrand, std::sqrt(lambda_lo),
                                            std::sqrt(lambda_hi), opt);

    BandReconstruction br;
    br.values = GridFn(h.grid, std::move(qr.value));
    br.evaluations = qr.evaluations;
    br.converged = qr.converged;
    std::vector<double> edge = integrand(std::sqrt(lambda_hi));
    for (double e : edge) br.edge_magnitude = std::max(br.edge_magnitude, std::abs(e));
    return br;
}

struct ReconstructReport {
    GridFn reconstruction;
    double sup_deviation = 0.0;   ///< sup |reconstruction - h| on the grid
    double tail_estimate = 0.0;   ///< coherent-tail scale at the spectral cutoff
    double bound_share = 0.0;     ///< sum <f_n,h>^2 / ||h||^2
    double lambda_max_used = 0.0; ///< cutoff the escalation settled on
    int evaluations = 0;
    bool converged = true;
};

/// Eigenfunction expansion: bound-state sum plus the continuum integral,
/// evaluated on h's grid and compared against h. The spectral cutoff starts
/// at min(60, lambda_cap) and doubles until the reported tail estimate falls
/// below tol; exceeding lambda_cap first is an error. The tail estimate is
/// the integrand sup at the cutoff times k = sqrt(lambda), a conservative
/// scale for the coherently summed remainder.
inline ReconstructReport reconstruct(const Potential& pot, const GridFn& h,
                                     double lambda_cap, double tol,
                                     double lambda_min = default_lambda_min,
                                     const std::vector<BoundState>* bound = nullptr,
                                     const ExecPolicy& exec = {}) {
    if (!(lambda_cap > lambda_min))
        throw DomainError("reconstruct: need lambda_cap > lambda_min");
    const double quad_tol = std::max(1e-11, 1e-3 * tol);
    std::vector<BoundState> own;
    if (!bound) {
        own = detail::default_bound_states(pot, quad_tol, h.grid.dx, exec);
        bound = &own;
    }

    ReconstructReport rep;
    double lambda_lo = lambda_min;
    double lambda_hi = std::min(lambda_cap, std::max(60.0, 4.0 * lambda_min));
    for (;;) {
        BandReconstruction band =
            band_reconstruct(pot, h, lambda_lo, lambda_hi, quad_tol, exec);
        if (rep.reconstruction.v.empty()) {
            rep.reconstruction = band.values;
        } else {
            for (int i = 0; i < h.grid.n; ++i)
                rep.reconstruction.v[i] += band.values.v[i];
        }
        rep.evaluations += band.evaluations;
        rep.converged = rep.converged && band.converged;
        rep.tail_estimate = band.edge_magnitude * std::sqrt(lambda_hi);
        rep.lambda_max_used = lambda_hi;
        if (rep.tail_estimate <= tol) break;
        if (lambda_hi >= lambda_cap)
            throw NumericalError("reconstruct: lambda cap " +
                                 std::to_string(lambda_cap) +
                                 " exceeded before the spectral tail fell below " +
                                 std::to_string(tol));
        lambda_lo = lambda_hi;
        lambda_hi = std::min(2.0 * lambda_hi, lambda_cap);
    }

    const double h_norm_sq = norm_sq(h);
    for (const BoundState& st : *bound) {
        const double coeff = detail::inner_padded(st.f, h);
        rep.bound_share += coeff * coeff;
        const int n = std::min(st.f.grid.n, h.grid.n);
        for (int i = 0; i < n; ++i) rep.reconstruction.v[i] += coeff * st.f.v[i];
    }
    rep.bound_share = h_norm_sq > 0.0 ? rep.bound_share / h_norm_sq : 0.0;
    for (int i = 0; i < h.grid.n; ++i)
        rep.sup_deviation =
            std::max(rep.sup_deviation, std::abs(rep.reconstruction.v[i] - h.v[i]));
    return rep;
}

struct ParsevalReport {
    double norm_sq = 0.0;
    double bound_sum = 0.0;           ///< sum |<f_n, h>|^2
    double continuous_integral = 0.0; ///< int rho |<F,h>|^2 dl
    double defect_rel = 0.0;
};

/// tol is the defect target; the spectral quadrature runs well below it.
inline ParsevalReport parseval_check(const Potential& pot, const GridFn& h,
                                     double lambda_max, double tol,
                                     double lambda_min = default_lambda_min,
                                     const std::vector<BoundState>* bound = nullptr,
                                     const ExecPolicy& exec = {}) {
    if (!(lambda_max > lambda_min))
        throw DomainError("parseval_check: need lambda_max > lambda_min");
    const double quad_tol = std::max(1e-12, 1e-3 * tol);
    std::vector<BoundState> own;
    if (!bound) {
        own = detail::default_bound_states(pot, quad_tol, h.grid.dx, exec);
        bound = &own;
    }
    const std::vector<double> xs = h.grid.points();

    auto integrand = [&](double k) {
        SpectralNode node(pot, k * k, quad_tol);
        const std::vector<double> F = node.values(xs);
        std::vector<double> prod(F.size());
        for (size_t j = 0; j < F.size(); ++j) prod[j] = F[j] * h.v[j];
        const double ch = simpson(prod, h.grid.dx);
        return std::vector<double>{node.density() * ch * ch * 2.0 * k};
    };
    QuadOptions opt;
    opt.rel_tol = quad_tol;
    opt.abs_tol = 1e-14;
    opt.exec = exec;
    QuadResult qr = adaptive_quadrature_vec(integrand, std::sqrt(lambda_min),
                                            std::sqrt(lambda_max), opt);

    ParsevalReport rep;
    rep.norm_sq = norm_sq(h);
    for (const BoundState& st : *bound) {
        const double c = detail::inner_padded(st.f, h);
        rep.bound_sum += c * c;
    }
    rep.continuous_integral = qr.value[0];
    rep.defect_rel =
        rep.norm_sq > 0.0
            ? std::abs(rep.norm_sq - rep.bound_sum - rep.continuous_integral) /
                  rep.norm_sq
            : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Time-average identity (comparison with the free decomposition)
// ---------------------------------------------------------------------------

struct TimeAverageReport {
    double lhs = 0.0;               ///< <g, phi(D0) h> from Fourier theory
    std::vector<double> T;          ///< averaging horizons
    std::vector<double> rhs;        ///< (1/T) int_0^T <W U_t g, phi(D) W U_t h> dt
    std::vector<double> defect;     ///< |lhs - rhs|
    bool non_increasing = true;     ///< defect non-increasing along T
};

/// Checks <g, phi(D0) h> = lim_T (1/T) int_0^T <W U_t g, phi(D) W U_t h> dt,
/// with U_t forward translation, W restriction to the half-line, and phi(D)
/// realized through the computed spectral data (rho, F_lambda). phi must be
/// smooth and supported in (phi_lo, phi_hi) within the positive spectrum;
/// g, h must be supported well inside (0, inf).
inline TimeAverageReport time_average_check(
    const Potential& pot, const std::function<double(double)>& phi, double phi_lo,
    double phi_hi, const GridFn& g, const GridFn& h, std::vector<double> T_grid,
    double tol, double lambda_min = default_lambda_min, const ExecPolicy& exec = {},
    int k_panels = 8, double dt = 0.05) {
    if (!(g.grid == h.grid)) throw DomainError("time_average_check: grids differ");
    if (T_grid.empty()) throw DomainError("time_average_check: empty T grid");
    std::sort(T_grid.begin(), T_grid.end());
    if (!(T_grid.front() > 0.0)) throw DomainError("time_average_check: T must be > 0");

    TimeAverageReport rep;
    rep.T = T_grid;

    const double band_lo = std::max(phi_lo, lambda_min);
    if (!(phi_hi > band_lo)) {
        // phi vanishes on the implemented spectrum: both sides are zero.
        rep.rhs.assign(T_grid.size(), 0.0);
        rep.defect.assign(T_grid.size(), 0.0);
        return rep;
    }
    const double k_lo = std::sqrt(band_lo), k_hi = std::sqrt(phi_hi);

    // LHS via the Fourier decomposition of D0 (exact reference).
    {
        const int n = g.grid.n;
        auto fourier = [&](const GridFn& f, double xi) {
            std::vector<cplx> prod(n);
            for (int i = 0; i < n; ++i) {
                const double x = f.grid.x(i);
                prod[i] = f.v[i] * std::exp(cplx(0.0, -xi * x));
            }
            return simpson(prod, f.grid.dx);
        };
        auto integrand = [&](double xi) {
            const cplx gf = fourier(g, xi);
            const cplx hf = g.v == h.v ? gf : fourier(h, xi);
            return (std::conj(gf) * hf).real() * phi(xi * xi) / pi;
        };
        QuadOptions opt;
        opt.rel_tol = 1e-10;
        opt.abs_tol = 1e-14;
        opt.exec = exec;
        rep.lhs = adaptive_quadrature(integrand, k_lo, k_hi, opt).value;
    }

    // Shared t-grid: one sample set per lambda node covers every horizon.
    std::vector<int> n_t(T_grid.size());
    for (size_t i = 0; i < T_grid.size(); ++i) {
        int m = static_cast<int>(std::ceil(T_grid[i] / dt));
        n_t[i] = m + (m % 2);
    }
    const int n_t_max = n_t.back();

    // Fixed composite Kronrod grid in k (the integrand is smooth and
    // compactly supported, so a fixed rule converges rapidly).
    struct KNode {
        double k, weight;
    };
    std::vector<KNode> knodes;
    for (int p = 0; p < k_panels; ++p) {
        const double a = k_lo + (k_hi - k_lo) * p / k_panels;
        const double b = k_lo + (k_hi - k_lo) * (p + 1) / k_panels;
        const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
        knodes.push_back({c, hw * gk::wk[0]});
        for (int i = 1; i < 8; ++i) {
            knodes.push_back({c + hw * gk::xk[i], hw * gk::wk[i]});
            knodes.push_back({c - hw * gk::xk[i], hw * gk::wk[i]});
        }
    }

    const bool same_data = g.v == h.v;
    const int n_x = g.grid.n;
    std::vector<std::vector<double>> node_avgs(knodes.size());
    std::vector<double> node_density(knodes.size());
    parallel_for(knodes.size(), exec, [&](size_t ni) {
        const double k = knodes[ni].k;
        SpectralNode node(pot, k * k, tol);
        node_density[ni] = node.density();
        // Correlations <F, f(. - t)> = int f(u) F(u + t) du on the shared t-grid.
        std::vector<double> Ag(n_t_max + 1), Ah;
        std::vector<double> prod(n_x);
        auto corr = [&](const GridFn& f, double t) {
            for (int i = 0; i < n_x; ++i)
                prod[i] = f.v[i] * node.value(f.grid.x(i) + t);
            return simpson(prod, f.grid.dx);
        };
        for (int it = 0; it <= n_t_max; ++it) Ag[it] = corr(g, it * dt);
        if (!same_data) {
            Ah.resize(n_t_max + 1);
            for (int it = 0; it <= n_t_max; ++it) Ah[it] = corr(h, it * dt);
        }
        const std::vector<double>& Ah_ref = same_data ? Ag : Ah;
        // Time averages for every horizon from the shared samples.
        std::vector<double> avgs(T_grid.size());
        std::vector<double> prod_t(n_t_max + 1);
        for (int it = 0; it <= n_t_max; ++it) prod_t[it] = Ag[it] * Ah_ref[it];
        for (size_t ti = 0; ti < T_grid.size(); ++ti) {
            std::vector<double> window(prod_t.begin(), prod_t.begin() + n_t[ti] + 1);
            avgs[ti] = simpson(window, dt) / (n_t[ti] * dt);
        }
        node_avgs[ni] = std::move(avgs);
    });

    rep.rhs.assign(T_grid.size(), 0.0);
    for (size_t ni = 0; ni < knodes.size(); ++ni) {
        const double k = knodes[ni].k;
        const double w = knodes[ni].weight * node_density[ni] * phi(k * k) * 2.0 * k;
        for (size_t ti = 0; ti < T_grid.size(); ++ti)
            rep.rhs[ti] += w * node_avgs[ni][ti];
    }

    for (size_t ti = 0; ti < T_grid.size(); ++ti)
        rep.defect.push_back(std::abs(rep.lhs - rep.rhs[ti]));
    for (size_t ti = 1; ti < rep.defect.size(); ++ti)
        if (rep.defect[ti] > rep.defect[ti - 1]) rep.non_increasing = false;
    return rep;
}

} // namespace weylspec
