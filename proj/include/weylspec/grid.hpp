#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <vector>

#include "weylspec/common.hpp"

namespace weylspec {

/// Uniform grid x_i = x0 + i*dx, i = 0..n-1.
struct UniformGrid {
    double x0 = 0.0;
    double dx = 0.0;
    int n = 0;

    UniformGrid() = default;
    UniformGrid(double x0_, double dx_, int n_) : x0(x0_), dx(dx_), n(n_) {
        if (n < 2 || dx <= 0.0)
            throw DomainError("UniformGrid: need n >= 2 and dx > 0");
    }

    double x(int i) const { return x0 + i * dx; }
    double back() const { return x(n - 1); }

    bool operator==(const UniformGrid& o) const {
        return x0 == o.x0 && dx == o.dx && n == o.n;
    }

    std::vector<double> points() const {
        std::vector<double> xs(n);
        for (int i = 0; i < n; ++i) xs[i] = x(i);
        return xs;
    }

    /// Grid from a with exactly the requested spacing, extending past b if
    /// needed; exact spacing keeps grids from different calls aligned.
    static UniformGrid cover(double a, double b, double dx) {
        if (!(b > a) || !(dx > 0.0))
            throw DomainError("UniformGrid::cover: need b > a and dx > 0");
        int n = static_cast<int>(std::ceil((b - a) / dx - 1e-9)) + 1;
        if (n < 2) n = 2;
        return UniformGrid(a, dx, n);
    }
};

/// Function sampled on a uniform grid.
template <class T>
struct Sampled {
    UniformGrid grid;
    std::vector<T> v;

    Sampled() = default;
    explicit Sampled(const UniformGrid& g) : grid(g), v(g.n, T{}) {}
    Sampled(const UniformGrid& g, std::vector<T> values) : grid(g), v(std::move(values)) {
        if (static_cast<int>(v.size()) != g.n)
            throw DomainError("Sampled: value count does not match grid");
    }

    static Sampled tabulate(const UniformGrid& g, const std::function<T(double)>& f) {
        Sampled s(g);
        for (int i = 0; i < g.n; ++i) s.v[i] = f(g.x(i));
        return s;
    }

    double max_abs() const {
        double m = 0.0;
        for (const T& x : v) m = std::max(m, std::abs(cplx(x)));
        return m;
    }
};

using GridFn = Sampled<double>;
using GridFnC = Sampled<cplx>;

/// Composite Simpson integral of uniformly sampled values; a 3/8 panel absorbs
/// an odd interval count so the order stays O(dx^4) for any n >= 2.
template <class T>
T simpson(const std::vector<T>& v, double dx) {
    const int n = static_cast<int>(v.size());
    if (n < 2) return T{};
    if (n == 2) return dx / 2.0 * (v[0] + v[1]);
    if (n == 3) return dx / 3.0 * (v[0] + 4.0 * v[1] + v[2]);

    T total{};
    int m = n;
    int start = 0;
    if (n % 2 == 0) {
        // 3/8 rule on the first three intervals, Simpson on the rest.
        total += dx * 3.0 / 8.0 * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3]);
        start = 3;
        m = n - 3;
    }
    T acc = v[start] + v[start + m - 1];
    for (int i = 1; i < m - 1; i += 2) acc += 4.0 * v[start + i];
    for (int i = 2; i < m - 1; i += 2) acc += 2.0 * v[start + i];
    total += dx / 3.0 * acc;
    return total;
}

template <class T>
T integrate(const Sampled<T>& f) {
    return simpson(f.v, f.grid.dx);
}

/// L2 inner product <f, g> = integral conj(f) g over the shared grid.
inline cplx inner(const GridFnC& f, const GridFnC& g) {
    if (!(f.grid == g.grid)) throw DomainError("inner: grids differ");
    std::vector<cplx> prod(f.v.size());
    for (size_t i = 0; i < prod.size(); ++i) prod[i] = std::conj(f.v[i]) * g.v[i];
    return simpson(prod, f.grid.dx);
}

inline double inner(const GridFn& f, const GridFn& g) {
    if (!(f.grid == g.grid)) throw DomainError("inner: grids differ");
    std::vector<double> prod(f.v.size());
    for (size_t i = 0; i < prod.size(); ++i) prod[i] = f.v[i] * g.v[i];
    return simpson(prod, f.grid.dx);
}

inline double norm_sq(const GridFn& f) { return inner(f, f); }

/// Gaussian bump exp(-(x-center)^2 / (2 sigma^2)).
inline GridFn gaussian_bump(const UniformGrid& g, double center, double sigma) {
    return GridFn::tabulate(g, [=](double x) {
        return std::exp(-sq(x - center) / (2.0 * sq(sigma)));
    });
}

/// Gaussian bump modulated by sin(k0 x); its sine transform concentrates near k0.
inline GridFn modulated_bump(const UniformGrid& g, double center, double sigma, double k0) {
    return GridFn::tabulate(g, [=](double x) {
        return std::exp(-sq(x - center) / (2.0 * sq(sigma))) * std::sin(k0 * x);
    });
}

/// C-infinity window supported exactly on (lo, hi), equal to 1 at the midpoint.
inline std::function<double(double)> bump_window(double lo, double hi) {
    if (!(hi > lo)) throw DomainError("bump_window: need hi > lo");
    return [lo, hi](double t) -> double {
        double s = 2.0 * (t - lo) / (hi - lo) - 1.0;
        if (s <= -1.0 || s >= 1.0) return 0.0;
        return std::exp(-s * s / (1.0 - s * s));
    };
}

} // namespace weylspec
