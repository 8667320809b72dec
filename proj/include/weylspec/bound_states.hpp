#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "weylspec/common.hpp"
#include "weylspec/grid.hpp"
#include "weylspec/ode.hpp"
#include "weylspec/parallel.hpp"
#include "weylspec/potential.hpp"
#include "weylspec/scattering.hpp"

namespace weylspec {

// ---------------------------------------------------------------------------
// Growing-mode criterion m(z) = a z + b at lambda = -z^2
// ---------------------------------------------------------------------------

namespace detail {

inline void check_z_admissible(const Potential& pot, double z) {
    if (!(z > 0.0)) throw DomainError("bound states: z must be > 0");
    switch (pot.decay_class()) {
        case DecayClass::EventuallyConstant:
            return;
        case DecayClass::Exponential:
            if (2.0 * z >= pot.decay_param())
                throw DomainError(
                    "bound states: decay insufficient for z = " + std::to_string(z) +
                    " (exponential rate " + std::to_string(pot.decay_param()) +
                    " requires 2z < rate)");
            return;
        case DecayClass::PowerIntegrable:
            throw DomainError("bound states: power-integrable decay cannot control "
                              "the e^{2zx} growth of the propagator");
    }
}

} // namespace detail

/// m(z) = a z + b where (a, b) = s(infinity) at lambda = -z^2; m vanishes
/// exactly at the eigenvalues (it is 2z times the growing-mode coefficient).
///
/// Computed through the left eigenvector [z, 1] of C_lambda:
/// a z + b = [z, 1] exp(-xC) u(x) = e^{-zx} (z u1(x) + u2(x)),
/// which avoids the catastrophic e^{2zx} cancellation of forming (a, b)
/// separately when the certified x_max is large.
inline double jost_like(const Potential& pot, double z, double tol,
                        double x_max_cap = default_x_max_cap) {
    detail::check_z_admissible(pot, z);
    const cplx lambda(-z * z);
    const double x_max = detail::choose_x_max(pot, lambda, tol, x_max_cap);
    if (z * x_max > 600.0)
        throw NumericalError("jost_like: e^{z x_max} overflows; z too close to "
                             "the admissible decay limit");
    const Vec2c u0{cplx(0.0), cplx(pot.p(0.0))};
    SLVectorSystem rhs{&pot, lambda};
    DenseSolution<Vec2c> sol =
        integrate_dense<Vec2c>(rhs, u0, 0.0, x_max, std::min(tol, 1e-10));
    const Vec2c u = sol.eval(x_max);
    return std::exp(-z * x_max) * (z * u.a.real() + u.b.real());
}

// ---------------------------------------------------------------------------
// Bound states
// ---------------------------------------------------------------------------

/// A negative eigenvalue lambda = -z^2 with its L2-normalized eigenfunction.
struct BoundState {
    double z = 0.0;
    double lambda = 0.0;
    GridFn f;                      ///< normalized samples on [0, x_trunc]
    double residual_m = 0.0;       ///< |m(z)| at the accepted root
    double norm_check = 0.0;       ///< | ||f||_2 - 1 | after normalization
    double decay_rate_fit = 0.0;   ///< log-slope of the sampled tail
    double decaying_coefficient = 0.0; ///< c_- of the exterior c_- e^{-zx}
    double x_matched = 0.0;        ///< interior/exterior matching point
};

struct BoundStateScan {
    std::vector<BoundState> states;   ///< ordered by eigenvalue ascending
    std::vector<double> scan_z;       ///< scan abscissae
    std::vector<double> scan_m;       ///< m(z) on the scan
    std::vector<std::string> warnings;
};

namespace detail {

inline BoundState build_bound_state(const Potential& pot, double z_root,
                                    double residual_m, double tol, double dx,
                                    double x_max_cap) {
    const cplx lambda(-z_root * z_root);
    // Matching point for the exterior pure-decay continuation. Beyond
    // e^{2 z x} ~ 1e6 the residual growing mode of the shooting solution
    // starts to contaminate the decaying coefficient, so the certified x_max
    // is capped by that contamination limit.
    const double x_max =
        std::min(choose_x_max(pot, lambda, tol, x_max_cap),
                 std::max(2.0, 6.9 / z_root));
    const Vec2c u0{cplx(0.0), cplx(pot.p(0.0))};
    SLVectorSystem rhs{&pot, lambda};
    DenseSolution<Vec2c> sol =
        integrate_dense<Vec2c>(rhs, u0, 0.0, x_max, std::min(tol, 1e-10));
    // Exterior amplitude by value matching, F(x_max) = c- e^{-z x_max}: the
    // sampled function stays continuous at the matching point (the residual
    // growing mode only leaves a ~2 z m(z) e^{z x_max} derivative mismatch).
    const Vec2c u_end = sol.eval(x_max);
    const double c_minus = u_end.a.real() * std::exp(z_root * x_max);

    // Interior samples up to x_max, exterior pure decaying mode beyond,
    // truncated where the tail falls below 1e-14 of the peak.
    double peak = std::abs(c_minus) * std::exp(-z_root * x_max);
    {
        const int probe = 64;
        for (int i = 0; i <= probe; ++i) {
            double x = x_max * i / probe;
            peak = std::max(peak, std::abs(sol.eval(x).a.real()));
        }
    }
    double x_trunc =
        std::log(std::max(std::abs(c_minus), 1e-300) / (1e-14 * peak)) / z_root;
    x_trunc = std::max(x_trunc, x_max + 2.0 * dx);

    UniformGrid grid = UniformGrid::cover(0.0, x_trunc, dx);
    GridFn f(grid);
    for (int i = 0; i < grid.n; ++i) {
        const double x = grid.x(i);
        f.v[i] = x <= x_max ? sol.eval(x).a.real()
                            : c_minus * std::exp(-z_root * x);
    }
    // L2 norm: Simpson on the samples plus the analytic tail beyond x_trunc.
    std::vector<double> sqv(grid.n);
    for (int i = 0; i < grid.n; ++i) sqv[i] = f.v[i] * f.v[i];
    const double tail_sq = c_minus * c_minus *
                           std::exp(-2.0 * z_root * grid.back()) / (2.0 * z_root);
    const double norm = std::sqrt(simpson(sqv, grid.dx) + tail_sq);
    if (!(norm > 0.0)) throw NumericalError("bound state: zero norm");
    for (double& v : f.v) v /= norm;

    BoundState st;
    st.z = z_root;
    st.lambda = -z_root * z_root;
    st.f = std::move(f);
    st.residual_m = std::abs(residual_m);
    st.decaying_coefficient = c_minus / norm;
    st.x_matched = x_max;

    // Norm self-check on the normalized samples.
    for (int i = 0; i < grid.n; ++i) sqv[i] = st.f.v[i] * st.f.v[i];
    st.norm_check = std::abs(std::sqrt(simpson(sqv, grid.dx) + tail_sq / (norm * norm)) - 1.0);

    // Tail decay-rate fit: least-squares slope of log|f| on the sampled tail.
    {
        std::vector<double> xs, ys;
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.x(i);
            if (x >= st.x_matched && std::abs(st.f.v[i]) > 1e-280) {
                xs.push_back(x);
                ys.push_back(std::log(std::abs(st.f.v[i])));
            }
        }
        if (xs.size() >= 2) {
            double mx = 0, my = 0;
            for (size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
            mx /= xs.size();
            my /= ys.size();
            double num = 0, den = 0;
            for (size_t i = 0; i < xs.size(); ++i) {
                num += (xs[i] - mx) * (ys[i] - my);
                den += (xs[i] - mx) * (xs[i] - mx);
            }
            st.decay_rate_fit = den > 0 ? -num / den : z_root;
        } else {
            st.decay_rate_fit = z_root;
        }
    }
    return st;
}

} // namespace detail

/// Scan m(z) on [z_lo, z_hi], bracket sign changes, refine by bisection plus
/// one secant polish, and build the normalized eigenfunctions. The returned
/// list is ordered by eigenvalue ascending (deepest first).
inline BoundStateScan find_bound_states(const Potential& pot, double z_lo,
                                        double z_hi, int n_scan, double tol,
                                        double dx = 0.01,
                                        const ExecPolicy& exec = {},
                                        double x_max_cap = default_x_max_cap) {
    if (!(0.0 < z_lo && z_lo < z_hi))
        throw DomainError("find_bound_states: need 0 < z_lo < z_hi");
    if (n_scan < 16) throw DomainError("find_bound_states: need n_scan >= 16");
    detail::check_z_admissible(pot, z_hi);

    BoundStateScan out;
    out.scan_z.resize(n_scan);
    out.scan_m.resize(n_scan);
    const double dz = (z_hi - z_lo) / (n_scan - 1);
    for (int i = 0; i < n_scan; ++i) out.scan_z[i] = z_lo + i * dz;
    parallel_for(static_cast<size_t>(n_scan), exec, [&](size_t i) {
        out.scan_m[i] = jost_like(pot, out.scan_z[i], tol, x_max_cap);
    });

    std::vector<std::pair<double, double>> brackets;
    int last_bracket = -10;
    for (int i = 0; i + 1 < n_scan; ++i) {
        const double ma = out.scan_m[i], mb = out.scan_m[i + 1];
        if (ma == 0.0) {
            brackets.emplace_back(out.scan_z[i], out.scan_z[i]);
            last_bracket = i;
        } else if (ma * mb < 0.0) {
            if (i - last_bracket <= 1)
                out.warnings.push_back(
                    "possible double root near z = " + std::to_string(out.scan_z[i]) +
                    ": two brackets within the scan resolution; refine n_scan");
            brackets.emplace_back(out.scan_z[i], out.scan_z[i + 1]);
            last_bracket = i;
        }
    }

    for (auto [za, zb] : brackets) {
        double fa = jost_like(pot, za, tol, x_max_cap);
        double fb = zb == za ? fa : jost_like(pot, zb, tol, x_max_cap);
        double root, froot;
        if (fa == 0.0) {
            root = za;
            froot = 0.0;
        } else {
            while (zb - za > 1e-12) {
                const double zm = 0.5 * (za + zb);
                const double fm = jost_like(pot, zm, tol, x_max_cap);
                if (fm == 0.0) { za = zb = zm; fa = fb = fm; break; }
                if (fa * fm < 0.0) { zb = zm; fb = fm; } else { za = zm; fa = fm; }
            }
            // One secant polish on the final bracket.
            root = (fb - fa) != 0.0 ? za - fa * (zb - za) / (fb - fa)
                                    : 0.5 * (za + zb);
            root = std::clamp(root, za, zb);
            froot = jost_like(pot, root, tol, x_max_cap);
        }
        out.states.push_back(
            detail::build_bound_state(pot, root, froot, tol, dx, x_max_cap));
    }

    std::sort(out.states.begin(), out.states.end(),
              [](const BoundState& l, const BoundState& r) { return l.lambda < r.lambda; });
    return out;
}

/// Bound-state search window derived from the declared decay and the sampled
/// well depth: z^2 cannot exceed sup(-q), and exponential decay admits only
/// 2z < rate.
inline std::pair<double, double> default_z_window(const Potential& pot) {
    double q_min = 0.0;
    const double x_hi = pot.decay_class() == DecayClass::EventuallyConstant
                            ? std::max(10.0, pot.decay_param())
                            : 30.0;
    for (int i = 0; i <= 3000; ++i) q_min = std::min(q_min, pot.q(x_hi * i / 3000.0));
    double z_hi = std::sqrt(std::max(0.0, -q_min)) * 1.05 + 0.05;
    if (pot.decay_class() == DecayClass::Exponential)
        z_hi = std::min(z_hi, 0.45 * pot.decay_param());
    return {0.01, std::max(z_hi, 0.02)};
}

// ---------------------------------------------------------------------------
// Zero energy
// ---------------------------------------------------------------------------

/// Affine tail data of the regular solution at lambda = 0: F(x) ~ a x + b.
/// (a, b) != (0, 0) certifies that 0 is not an eigenvalue; a ~ 0 with b != 0
/// indicates a threshold resonance (bounded zero-energy solution).
struct ZeroEnergyReport {
    double slope = 0.0;     ///< a
    double intercept = 0.0; ///< b
    double fit_residual = 0.0;
    double x_fit_lo = 0.0;
    double x_max = 0.0;
    bool not_square_integrable = false;
    bool resonance_indicator = false;
};

inline ZeroEnergyReport zero_energy_report(const Potential& pot, double x_max,
                                           double tol) {
    if (pot.decay_class() == DecayClass::PowerIntegrable)
        throw DomainError("zero_energy_report: decay class too weak for the "
                          "x^2-weighted integrability hypothesis");
    double x_fit_lo = pot.decay_class() == DecayClass::EventuallyConstant
                          ? pot.decay_param() + 2.0
                          : 0.5 * x_max;
    if (!(x_max > x_fit_lo + 1.0))
        throw DomainError("zero_energy_report: x_max too small for the tail fit");

    const Vec2c u0{cplx(0.0), cplx(pot.p(0.0))};
    SLVectorSystem rhs{&pot, cplx(0.0)};
    DenseSolution<Vec2c> sol =
        integrate_dense<Vec2c>(rhs, u0, 0.0, x_max, std::min(tol, 1e-10));

    // Least-squares affine fit of F on [x_fit_lo, x_max].
    const int n = 201;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs(n), ys(n);
    for (int i = 0; i < n; ++i) {
        const double x = x_fit_lo + (x_max - x_fit_lo) * i / (n - 1);
        const double y = sol.eval(x).a.real();
        xs[i] = x;
        ys[i] = y;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double det = n * sxx - sx * sx;
    ZeroEnergyReport rep;
    rep.slope = (n * sxy - sx * sy) / det;
    rep.intercept = (sy * sxx - sx * sxy) / det;
    double rss = 0.0;
    for (int i = 0; i < n; ++i)
        rss = std::max(rss, std::abs(ys[i] - rep.slope * xs[i] - rep.intercept));
    rep.fit_residual = rss;
    rep.x_fit_lo = x_fit_lo;
    rep.x_max = x_max;
    const double scale = std::hypot(rep.slope, rep.intercept);
    rep.not_square_integrable = scale > 1e3 * tol;
    rep.resonance_indicator =
        std::abs(rep.slope) <= 1e-6 * std::max(1.0, std::abs(rep.intercept));
    return rep;
}

} // namespace weylspec
