#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "weylspec/common.hpp"
#include "weylspec/interp.hpp"
#include "weylspec/matrix2.hpp"

namespace weylspec {

/// Declared tail behavior of the coefficient pair (p, q).
enum class DecayClass {
    /// p == 1 and q == 0 for all x >= x_cut.
    EventuallyConstant,
    /// Majorant obeys M(t) <= M(s) e^{-rate (t-s)} for t >= s >= 1.
    Exponential,
    /// Only the plain tail integral of the majorant is finite.
    PowerIntegrable,
};

inline const char* to_string(DecayClass d) {
    switch (d) {
        case DecayClass::EventuallyConstant: return "eventually_constant";
        case DecayClass::Exponential: return "exponential";
        case DecayClass::PowerIntegrable: return "power_integrable";
    }
    return "?";
}

/// Off-diagonal perturbation matrix Q(x) = [[0, p^{-1}-1], [q, 0]] of the
/// first-order system u' = (C_lambda + Q) u with u = [F; pF'].
struct PerturbationMatrix {
    double p_inv_minus_one = 0.0; ///< entry (0,1)
    double q = 0.0;               ///< entry (1,0)

    double hs_norm() const { return std::hypot(p_inv_minus_one, q); }

    Mat2d as_matrix() const { return {0.0, p_inv_minus_one, q, 0.0}; }
};

/// Coefficient pair (p, q) of D = -(d/dx) p(x) (d/dx) + q(x) on [0, inf),
/// with p > 0 and (p, q) -> (1, 0) at infinity. Immutable after construction;
/// evaluation is pure and safe to share across worker threads.
class Potential {
public:
    using Fn = std::function<double(double)>;

    Potential(std::string name, Fn p, Fn p_prime, Fn q, DecayClass decay,
              double decay_param, Fn majorant, Fn majorant_tail)
        : name_(std::move(name)),
          p_(std::move(p)),
          p_prime_(std::move(p_prime)),
          q_(std::move(q)),
          decay_(decay),
          decay_param_(decay_param),
          majorant_(std::move(majorant)),
          majorant_tail_(std::move(majorant_tail)) {}

    const std::string& name() const { return name_; }
    DecayClass decay_class() const { return decay_; }

    /// x_cut for EventuallyConstant, rate alpha for Exponential, 0 otherwise.
    double decay_param() const { return decay_param_; }

    double p(double x) const {
        double v = p_(x);
        if (!(v > 0.0))
            throw NumericalError("Potential '" + name_ + "': p(x) <= 0 at x = " +
                                 std::to_string(x));
        return v;
    }
    double p_prime(double x) const { return p_prime_(x); }
    double q(double x) const { return q_(x); }

    /// Majorant M(x) >= |1 - p(x)^{-1}| + |q(x)| for x >= 1.
    double majorant(double x) const { return majorant_(x); }

    /// Closed-form tail integral of the majorant over [x, inf).
    double majorant_tail(double x) const { return majorant_tail_(x); }

    /// Upper bound for the exponentially weighted tail integral
    /// of e^{gamma t} M(t) over [x, inf); gamma >= 0.
    double majorant_tail_exp(double x, double gamma) const;

    /// Upper bound for the quadratically weighted tail integral
    /// of (1 + t)^2 M(t) over [x, inf).
    double majorant_tail_quadratic(double x) const;

    PerturbationMatrix q_matrix(double x) const {
        if (x < 0.0) throw DomainError("q_matrix: x must be >= 0");
        return {1.0 / p(x) - 1.0, q(x)};
    }

private:
    double weighted_tail(double x, const std::function<double(double)>& weight,
                         const char* what) const;

    std::string name_;
    Fn p_, p_prime_, q_;
    DecayClass decay_;
    double decay_param_;
    Fn majorant_, majorant_tail_;
};

// ---------------------------------------------------------------------------
// Builtin potentials
// ---------------------------------------------------------------------------

/// p == 1, q == 0.
inline Potential free_potential() {
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    return Potential("free", one, zero, zero, DecayClass::EventuallyConstant, 0.0,
                     zero, zero);
}

namespace detail {

// Smoothstep ramp, 0 at t<=0 and 1 at t>=1. The 9th-order step is C^4 at the
// knots, which keeps fourth-order finite-difference defect checks clean near
// the well edge despite the 1/w^n growth of the ramp derivatives.
inline double ramp(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    const double t5 = t * t * t * t * t;
    return t5 * (126.0 + t * (-420.0 + t * (540.0 + t * (-315.0 + 70.0 * t))));
}

// Integral of (1 - ramp) from t to 1, for t in [0, 1].
inline double ramp_complement_integral(double t) {
    if (t <= 0.0) return 0.5;
    if (t >= 1.0) return 0.0;
    auto antider = [](double s) {
        const double s6 = s * s * s * s * s * s;
        return s - s6 * (21.0 + s * (-60.0 + s * (67.5 + s * (-35.0 + 7.0 * s))));
    };
    return antider(1.0) - antider(t);
}

} // namespace detail

/// Square well of depth depth on [0, width], closed by a C1 ramp of width
/// smoothing so q is continuously differentiable; p == 1.
inline Potential capped_well(double depth, double width, double smoothing) {
    if (!(depth > 0.0) || !(width > 0.0) || !(smoothing > 0.0))
        throw DomainError("capped_well: depth, width, smoothing must be > 0");
    const double x_cut = width + smoothing;
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    // The comparison against x_cut (not the ramp argument) keeps q exactly
    // zero from the cut onward despite rounding in width + smoothing.
    auto q = [=](double x) {
        if (x >= x_cut) return 0.0;
        return -depth * (1.0 - detail::ramp((x - width) / smoothing));
    };
    auto majorant = [=](double x) { return std::abs(q(x)); };
    auto tail = [=](double x) {
        if (x >= x_cut) return 0.0;
        if (x <= width)
            return depth * ((width - x) + smoothing * 0.5);
        return depth * smoothing *
               detail::ramp_complement_integral((x - width) / smoothing);
    };
    return Potential("capped_well", one, zero, q, DecayClass::EventuallyConstant,
                     x_cut, majorant, tail);
}

/// q(x) = -strength * e^{-rate x}, p == 1.
inline Potential exp_decay(double strength, double rate) {
    if (!(rate > 0.0)) throw DomainError("exp_decay: rate must be > 0");
    auto one = [](double) { return 1.0; };
    auto zero = [](double) { return 0.0; };
    auto q = [=](double x) { return -strength * std::exp(-rate * x); };
    auto majorant = [=](double x) { return std::abs(strength) * std::exp(-rate * x); };
    auto tail = [=](double x) {
        return std::abs(strength) * std::exp(-rate * x) / rate;
    };
    return Potential("exp_decay", one, zero, q, DecayClass::Exponential, rate,
                     majorant, tail);
}

/// Builtin factory; name is one of "free", "capped_well" (depth, width,
/// smoothing; smoothing defaults to 0.1), "exp_decay" (strength, rate).
inline Potential make_builtin_potential(const std::string& name,
                                        const std::vector<double>& params) {
    if (name == "free") {
        if (!params.empty()) throw DomainError("free potential takes no parameters");
        return free_potential();
    }
    if (name == "capped_well") {
        if (params.size() < 2 || params.size() > 3)
            throw DomainError("capped_well takes 2 or 3 parameters (depth, width[, smoothing])");
        double smoothing = params.size() == 3 ? params[2] : 0.1;
        return capped_well(params[0], params[1], smoothing);
    }
    if (name == "exp_decay") {
        if (params.size() != 2)
            throw DomainError("exp_decay takes 2 parameters (strength, rate)");
        return exp_decay(params[0], params[1]);
    }
    throw DomainError("unknown potential name '" + name + "'");
}

/// Potential from tables of (x, p, q) with cubic-spline interpolation.
/// Beyond the last knot the coefficients are clamped to (1, 0), i.e. the
/// table is treated as eventually constant at its right end.
inline Potential tabulated_potential(const std::vector<double>& x,
                                     const std::vector<double>& p,
                                     const std::vector<double>& q) {
    if (x.size() != p.size() || x.size() != q.size())
        throw DomainError("tabulated_potential: size mismatch");
    auto ps = std::make_shared<CubicSpline>(x, p);
    auto qs = std::make_shared<CubicSpline>(x, q);
    const double x_end = x.back();
    auto pf = [=](double t) { return t >= x_end ? 1.0 : (*ps)(t); };
    auto ppf = [=](double t) { return t >= x_end ? 0.0 : ps->derivative(t); };
    auto qf = [=](double t) { return t >= x_end ? 0.0 : (*qs)(t); };
    auto majorant = [=](double t) {
        if (t >= x_end) return 0.0;
        double pv = (*ps)(t);
        return std::abs(1.0 - 1.0 / pv) + std::abs((*qs)(t));
    };
    // Tail of the majorant by dense trapezoid accumulation over the table span.
    const int n_acc = 4096;
    auto acc = std::make_shared<std::vector<double>>(n_acc + 1, 0.0);
    const double x0 = x.front(), h = (x_end - x0) / n_acc;
    {
        std::vector<double> m(n_acc + 1);
        for (int i = 0; i <= n_acc; ++i) m[i] = majorant(x0 + i * h);
        for (int i = n_acc - 1; i >= 0; --i)
            (*acc)[i] = (*acc)[i + 1] + 0.5 * h * (m[i] + m[i + 1]);
    }
    auto tail = [=](double t) {
        if (t >= x_end) return 0.0;
        if (t <= x0) return (*acc)[0];
        double s = (t - x0) / h;
        int i = std::min(static_cast<int>(s), n_acc - 1);
        double frac = s - i;
        return (1.0 - frac) * (*acc)[i] + frac * (*acc)[i + 1];
    };
    return Potential("tabulated", pf, ppf, qf, DecayClass::EventuallyConstant,
                     x_end, majorant, tail);
}

// ---------------------------------------------------------------------------
// Weighted majorant tails
// ---------------------------------------------------------------------------

inline double Potential::weighted_tail(double x,
                                       const std::function<double(double)>& weight,
                                       const char* what) const {
    // Finite-support case: exact quadrature of weight * M over [x, x_cut]
    // with a fine Simpson rule (the integrand is smooth).
    const double x_cut = decay_param_;
    if (x >= x_cut) return 0.0;
    const int n = 2048;
    const double h = (x_cut - x) / n;
    double sum = weight(x) * majorant_(x) + weight(x_cut) * majorant_(x_cut);
    for (int i = 1; i < n; ++i) {
        double t = x + i * h;
        sum += (i % 2 == 1 ? 4.0 : 2.0) * weight(t) * majorant_(t);
    }
    (void)what;
    return sum * h / 3.0;
}

inline double Potential::majorant_tail_exp(double x, double gamma) const {
    if (gamma < 0.0) throw DomainError("majorant_tail_exp: gamma must be >= 0");
    if (gamma == 0.0) return majorant_tail(x);
    switch (decay_) {
        case DecayClass::EventuallyConstant:
            return weighted_tail(x, [gamma](double t) { return std::exp(gamma * t); },
                                 "exp");
        case DecayClass::Exponential: {
            const double alpha = decay_param_;
            if (gamma >= alpha)
                throw DomainError(
                    "majorant_tail_exp: weight rate " + std::to_string(gamma) +
                    " >= decay rate " + std::to_string(alpha) +
                    " (tail integral diverges)");
            // M(t) <= M(x) e^{-alpha (t-x)} by the Exponential decay contract.
            return majorant_(x) * std::exp(gamma * x) / (alpha - gamma);
        }
        case DecayClass::PowerIntegrable:
            throw DomainError("majorant_tail_exp: decay class too weak for "
                              "exponentially weighted tails");
    }
    throw DomainError("majorant_tail_exp: unreachable");
}

inline double Potential::majorant_tail_quadratic(double x) const {
    auto w = [](double t) { return sq(1.0 + t); };
    switch (decay_) {
        case DecayClass::EventuallyConstant:
            return weighted_tail(x, w, "quadratic");
        case DecayClass::Exponential: {
            const double alpha = decay_param_;
            // integral of (1+t)^2 e^{-alpha(t-x)} from x: closed form.
            const double u = 1.0 + x;
            return majorant_(x) * (u * u / alpha + 2.0 * u / (alpha * alpha) +
                                   2.0 / (alpha * alpha * alpha));
        }
        case DecayClass::PowerIntegrable:
            throw DomainError("majorant_tail_quadratic: decay class too weak for "
                              "x^2-weighted tails");
    }
    throw DomainError("majorant_tail_quadratic: unreachable");
}

// ---------------------------------------------------------------------------
// Hypothesis validation
// ---------------------------------------------------------------------------

/// Numerical check of the standing hypotheses: p > 0, (p, q, p') -> (1, 0, 0),
/// and integrability of |1 - p^{-1}| and |q| on [1, inf).
struct DecayReport {
    double p_limit = 0.0;
    double q_limit = 0.0;
    double p_prime_limit = 0.0;
    double integral_one_minus_p_inv = 0.0; ///< sampled part + majorant tail
    double integral_abs_q = 0.0;
    bool limits_ok = false;
    bool integrals_ok = false;
    bool majorant_ok = false;
    bool pass = false;
};

inline DecayReport validate_hypotheses(const Potential& pot,
                                       const std::vector<double>& x_probe) {
    if (x_probe.size() < 2)
        throw DomainError("validate_hypotheses: probe grid too small");
    for (size_t i = 1; i < x_probe.size(); ++i)
        if (!(x_probe[i] > x_probe[i - 1]))
            throw DomainError("validate_hypotheses: probe grid must be strictly increasing");
    const double X = x_probe.back();
    if (x_probe.front() > 0.0 || X < 10.0)
        throw DomainError("validate_hypotheses: probe grid must cover [0, X], X >= 10");

    DecayReport rep;
    // Tail limits from the last probe points.
    rep.p_limit = pot.p(X);
    rep.q_limit = pot.q(X);
    rep.p_prime_limit = pot.p_prime(X);

    // Trapezoid over the probes restricted to x >= 1, plus the majorant tail.
    double ip = 0.0, iq = 0.0;
    bool majorant_ok = true;
    for (size_t i = 0; i + 1 < x_probe.size(); ++i) {
        double a = x_probe[i], b = x_probe[i + 1];
        if (b <= 1.0) continue;
        a = std::max(a, 1.0);
        auto fp = [&](double t) { return std::abs(1.0 - 1.0 / pot.p(t)); };
        auto fq = [&](double t) { return std::abs(pot.q(t)); };
        ip += 0.5 * (b - a) * (fp(a) + fp(b));
        iq += 0.5 * (b - a) * (fq(a) + fq(b));
    }
    for (double t : x_probe) {
        if (t < 1.0) continue;
        const double deficit = std::abs(1.0 - 1.0 / pot.p(t)) + std::abs(pot.q(t));
        if (deficit > pot.majorant(t) + 1e-12 * (1.0 + deficit)) {
            majorant_ok = false;
            throw NumericalError("validate_hypotheses: tail majorant violated at x = " +
                                 std::to_string(t));
        }
    }
    const double tail = pot.majorant_tail(X);
    rep.integral_one_minus_p_inv = ip + tail;
    rep.integral_abs_q = iq + tail;
    rep.majorant_ok = majorant_ok;

    const double limit_tol = 1e-6 + 10.0 * pot.majorant(X);
    rep.limits_ok = std::abs(rep.p_limit - 1.0) <= limit_tol &&
                    std::abs(rep.q_limit) <= limit_tol &&
                    std::abs(rep.p_prime_limit) <= limit_tol;
    rep.integrals_ok = std::isfinite(rep.integral_one_minus_p_inv) &&
                       std::isfinite(rep.integral_abs_q);
    rep.pass = rep.limits_ok && rep.integrals_ok && rep.majorant_ok;
    return rep;
}

} // namespace weylspec
