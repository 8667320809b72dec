#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "weylspec/common.hpp"
#include "weylspec/matrix2.hpp"
#include "weylspec/ode.hpp"
#include "weylspec/potential.hpp"

namespace weylspec {

/// Density evaluation stays away from the spectral threshold; below this the
/// propagator bound degenerates like 1/lambda.
inline constexpr double default_lambda_min = 1e-3;
inline constexpr double default_x_max_cap = 1e4;

// ---------------------------------------------------------------------------
// Tail bounds for the conjugated perturbation integral
// ---------------------------------------------------------------------------

/// Upper bound for the tail integral of ||exp(-tC_lambda) Q(t) exp(tC_lambda)||_HS
/// over [x, inf) at a single spectral parameter. Uses the exact propagator sup
/// for lambda > 0, a quadratic envelope at lambda = 0, and an exponential
/// envelope e^{2 Im sqrt(lambda) t} otherwise.
inline double k_tail_point(const Potential& pot, const cplx& lambda, double x) {
    if (x < 0.0) throw DomainError("k_tail_point: x must be >= 0");
    if (lambda.imag() == 0.0 && lambda.real() > 0.0) {
        const double m = propagator_sup_norm(lambda.real());
        return m * m * pot.majorant_tail(x);
    }
    if (lambda == cplx(0.0))
        return 2.0 * pot.majorant_tail_quadratic(x);
    const cplx w = sqrt_upper(lambda);
    const double aw = std::abs(w);
    const double prefactor = 2.0 + aw * aw + 1.0 / (aw * aw);
    return prefactor * pot.majorant_tail_exp(x, 2.0 * w.imag());
}

/// Tail bound uniform over a positive spectral window [lambda_lo, lambda_hi]:
/// M_K^2 * tail integral of ||Q||_HS, with M_K the exact propagator sup over
/// the window (k^2 + k^{-2} is monotone on each side of k = 1, so the sup sits
/// at an endpoint or at lambda = 1).
inline double k_tail(const Potential& pot, double lambda_lo, double lambda_hi,
                     double x) {
    if (!(lambda_lo > 0.0))
        throw DomainError("k_tail: window must stay above lambda = 0 "
                          "(propagator bound blows up at the threshold)");
    if (!(lambda_hi >= lambda_lo)) throw DomainError("k_tail: empty window");
    double m = std::max(propagator_sup_norm(lambda_lo), propagator_sup_norm(lambda_hi));
    if (lambda_lo <= 1.0 && 1.0 <= lambda_hi)
        m = std::max(m, propagator_sup_norm(1.0));
    return m * m * pot.majorant_tail(x);
}

// ---------------------------------------------------------------------------
// s(infinity) via the fundamental-matrix run
// ---------------------------------------------------------------------------

/// Limit data of s(x) = exp(-x C_lambda) u(x) for the regular solution, with
/// a certified truncation bound err = C * k_tail(x_max) * ||s||; the constant
/// C is estimated from the fundamental matrix along the run.
struct AsymptoticLimit {
    cplx lambda;
    Vec2c s;                    ///< [a; b] = limit of exp(-xC) [F; pF']
    double x_max = 0.0;
    double k_tail_at_x_max = 0.0;
    double growth_constant = 0.0; ///< C in the certified bound
    double err = 0.0;
    double sup_s_matrix = 0.0;    ///< sup ||exp(-xC) U(x)|| over accepted steps
};

namespace detail {

/// Smallest convenient x with k_tail(x) <= tol: doubling to bracket, then
/// bisection. Landing just under the target keeps the certified bound well
/// above solver roundoff, which the truncation certificate relies on.
inline double choose_x_max(const Potential& pot, const cplx& lambda, double tol,
                           double x_max_cap) {
    double hi = 1.0;
    if (k_tail_point(pot, lambda, hi) <= tol) return hi;
    for (;;) {
        hi *= 2.0;
        if (hi > x_max_cap)
            throw NumericalError("s_infinity: x_max cap " + std::to_string(x_max_cap) +
                                 " exceeded before the tail bound fell below tol");
        if (k_tail_point(pot, lambda, hi) <= tol) break;
    }
    double lo = hi / 2.0;
    while (hi - lo > 0.01 * hi) {
        const double mid = 0.5 * (lo + hi);
        (k_tail_point(pot, lambda, mid) <= tol ? hi : lo) = mid;
    }
    return hi;
}

} // namespace detail

inline AsymptoticLimit s_infinity_at(const Potential& pot, const cplx& lambda,
                                     double tol,
                                     double x_max_cap = default_x_max_cap) {
    if (!(tol > 0.0)) throw DomainError("s_infinity: tol must be > 0");
    if (k_tail_point(pot, lambda, 0.0) == 0.0) {
        // Q vanishes identically: s(x) = u(0) exactly, no integration needed.
        AsymptoticLimit lim;
        lim.lambda = lambda;
        lim.s = Vec2c{cplx(0.0), cplx(pot.p(0.0))};
        lim.x_max = 0.0;
        lim.growth_constant = 4.0; // ||I|| ||I||^2 sup||I|| in the HS norm
        lim.err = 0.0;
        lim.sup_s_matrix = std::sqrt(2.0);
        return lim;
    }
    const double x_max = detail::choose_x_max(pot, lambda, tol, x_max_cap);
    const double ode_tol = std::min(tol, 1e-10);

    SLMatrixSystem rhs{&pot, lambda};
    DenseSolution<Mat2c> fun =
        integrate_dense<Mat2c>(rhs, Mat2c::identity(), 0.0, x_max, ode_tol);

    double sup_s = free_propagator(lambda, 0.0).hs_norm(); // ||I||
    for (const auto& step : fun.steps) {
        const double xe = step.x0 + step.h;
        const Mat2c s_mat = free_propagator(lambda, -xe) * step.eval(xe);
        sup_s = std::max(sup_s, s_mat.hs_norm());
    }

    const Mat2c u_end = fun.eval(x_max);
    const Mat2c s_end = free_propagator(lambda, -x_max) * u_end;
    const Mat2c t_end = s_end.inverse();
    const double c_growth =
        s_end.hs_norm() * t_end.hs_norm() * t_end.hs_norm() * sup_s;

    AsymptoticLimit lim;
    lim.lambda = lambda;
    const Vec2c u0{cplx(0.0), cplx(pot.p(0.0))};
    lim.s = s_end * u0;
    lim.x_max = x_max;
    lim.k_tail_at_x_max = k_tail_point(pot, lambda, x_max);
    lim.growth_constant = c_growth;
    lim.err = c_growth * lim.k_tail_at_x_max * lim.s.norm();
    lim.sup_s_matrix = sup_s;
    if (!is_finite(lim.s.a) || !is_finite(lim.s.b))
        throw NumericalError("s_infinity: non-finite limit");
    return lim;
}

/// s(infinity) components of the regular solution at real lambda above the
/// threshold; (a, b) are real for real data.
struct SInfinity {
    double a = 0.0;
    double b = 0.0;
    double err = 0.0;
    double x_max = 0.0;
    double growth_constant = 0.0;
    double k_tail_at_x_max = 0.0;
};

inline SInfinity s_infinity(const Potential& pot, double lambda, double tol,
                            double lambda_min = default_lambda_min,
                            double x_max_cap = default_x_max_cap) {
    if (!(lambda > lambda_min))
        throw DomainError("s_infinity: lambda must exceed the threshold policy "
                          "lambda_min = " + std::to_string(lambda_min));
    AsymptoticLimit lim = s_infinity_at(pot, cplx(lambda), tol, x_max_cap);
    SInfinity s;
    s.a = lim.s.a.real();
    s.b = lim.s.b.real();
    s.err = lim.err;
    s.x_max = lim.x_max;
    s.growth_constant = lim.growth_constant;
    s.k_tail_at_x_max = lim.k_tail_at_x_max;
    return s;
}

// ---------------------------------------------------------------------------
// c-function and spectral density
// ---------------------------------------------------------------------------

/// One point of the continuous-spectrum data: s(infinity) components, the
/// asymptotic amplitude c(lambda) of F_lambda ~ c e^{ikx} + conj(c) e^{-ikx},
/// and the density of the spectral measure against d lambda.
struct ScatteringPoint {
    double lambda = 0.0;
    double a = 0.0;       ///< F-slot of s(infinity)
    double b = 0.0;       ///< pF'-slot of s(infinity)
    cplx c{};             ///< a/2 - i b / (2 sqrt(lambda))
    double c_abs_sq = 0.0;
    double density = 0.0; ///< 1 / (4 pi sqrt(lambda) |c|^2)
    double truncation_error_bound = 0.0;
    double x_max = 0.0;
    double growth_constant = 0.0;
};

inline ScatteringPoint scattering_point_from_limit(double lambda, const SInfinity& s) {
    ScatteringPoint pt;
    pt.lambda = lambda;
    pt.a = s.a;
    pt.b = s.b;
    const double k = std::sqrt(lambda);
    pt.c = cplx(0.5 * s.a, -0.5 * s.b / k);
    pt.c_abs_sq = std::norm(pt.c);
    if (pt.c_abs_sq < 1e-14)
        throw NumericalError("c_function: |c|^2 = " + std::to_string(pt.c_abs_sq) +
                             " below 1e-14 at lambda = " + std::to_string(lambda) +
                             " (numerical breakdown; c cannot vanish)");
    pt.density = 1.0 / (4.0 * pi * k * pt.c_abs_sq);
    pt.truncation_error_bound = s.err;
    pt.x_max = s.x_max;
    pt.growth_constant = s.growth_constant;
    return pt;
}

inline ScatteringPoint c_function(const Potential& pot, double lambda, double tol,
                                  double lambda_min = default_lambda_min,
                                  double x_max_cap = default_x_max_cap) {
    return scattering_point_from_limit(
        lambda, s_infinity(pot, lambda, tol, lambda_min, x_max_cap));
}

inline double spectral_density(const Potential& pot, double lambda, double tol,
                               double lambda_min = default_lambda_min,
                               double x_max_cap = default_x_max_cap) {
    return c_function(pot, lambda, tol, lambda_min, x_max_cap).density;
}

// ---------------------------------------------------------------------------
// Per-lambda solution bundle shared by the projection / transform machinery
// ---------------------------------------------------------------------------

/// Regular solution F_lambda together with its scattering data. Inside
/// [0, x_max] values come from the dense fundamental solution; beyond, from
/// the exact constant-coefficient continuation a cos(kx) + b sin(kx)/k.
class SpectralNode {
public:
    SpectralNode(const Potential& pot, double lambda, double tol,
                 double x_max_cap = default_x_max_cap)
        : lambda_(lambda), p0_(pot.p(0.0)) {
        if (!(lambda > 0.0)) throw DomainError("SpectralNode: lambda must be > 0");
        if (k_tail_point(pot, cplx(lambda), 0.0) == 0.0) {
            // Q vanishes identically: F is the exact free wave everywhere.
            SInfinity s;
            s.a = 0.0;
            s.b = p0_;
            s.growth_constant = 4.0;
            point_ = scattering_point_from_limit(lambda, s);
            return;
        }
        const double x_max = detail::choose_x_max(pot, cplx(lambda), tol, x_max_cap);
        const double ode_tol = std::min(tol, 1e-10);
        SLMatrixSystem rhs{&pot, cplx(lambda)};
        fundamental_ =
            integrate_dense<Mat2c>(rhs, Mat2c::identity(), 0.0, x_max, ode_tol);

        double sup_s = free_propagator(lambda, 0.0).hs_norm();
        for (const auto& step : fundamental_.steps) {
            const double xe = step.x0 + step.h;
            sup_s = std::max(sup_s,
                             (free_propagator(lambda, -xe) * step.eval(xe)).hs_norm());
        }
        const Mat2c s_end = free_propagator(lambda, -x_max) * fundamental_.eval(x_max);
        const Mat2c t_end = s_end.inverse();
        SInfinity s;
        const Vec2c sv = s_end * Vec2c{cplx(0.0), cplx(p0_)};
        s.a = sv.a.real();
        s.b = sv.b.real();
        s.x_max = x_max;
        s.k_tail_at_x_max = k_tail_point(pot, cplx(lambda), x_max);
        s.growth_constant = s_end.hs_norm() * t_end.hs_norm() * t_end.hs_norm() * sup_s;
        s.err = s.growth_constant * s.k_tail_at_x_max * sv.norm();
        point_ = scattering_point_from_limit(lambda, s);
    }

    double lambda() const { return lambda_; }
    const ScatteringPoint& point() const { return point_; }
    double density() const { return point_.density; }

    /// F_lambda(x) (real).
    double value(double x) const {
        if (x < point_.x_max) {
            const Mat2c u = fundamental_.eval(x);
            // F column: U(x) * [0; p(0)]
            return (u.m01 * p0_).real();
        }
        const double k = std::sqrt(lambda_);
        return point_.a * std::cos(k * x) + point_.b * std::sin(k * x) / k;
    }

    /// Values on a whole grid (single pass).
    std::vector<double> values(const std::vector<double>& xs) const {
        std::vector<double> out(xs.size());
        for (size_t i = 0; i < xs.size(); ++i) out[i] = value(xs[i]);
        return out;
    }

private:
    double lambda_;
    double p0_;
    DenseSolution<Mat2c> fundamental_;
    ScatteringPoint point_;
};

} // namespace weylspec
