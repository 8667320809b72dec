#pragma once

#include <cmath>
#include <vector>

#include "weylspec/common.hpp"

namespace weylspec {

/// Natural cubic spline through (x_i, y_i) with strictly increasing knots.
class CubicSpline {
public:
    CubicSpline() = default;

    CubicSpline(std::vector<double> x, std::vector<double> y)
        : x_(std::move(x)), y_(std::move(y)) {
        const size_t n = x_.size();
        if (n < 2 || y_.size() != n)
            throw DomainError("CubicSpline: need >= 2 knots and matching sizes");
        for (size_t i = 1; i < n; ++i)
            if (!(x_[i] > x_[i - 1]))
                throw DomainError("CubicSpline: knots must be strictly increasing");

        // Second derivatives by the standard tridiagonal sweep, natural ends.
        m_.assign(n, 0.0);
        if (n > 2) {
            std::vector<double> c(n, 0.0), rhs(n, 0.0);
            for (size_t i = 1; i + 1 < n; ++i) {
                double hl = x_[i] - x_[i - 1];
                double hr = x_[i + 1] - x_[i];
                double diag = 2.0 * (hl + hr) - hl * c[i - 1];
                c[i] = hr / diag;
                double d = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
                rhs[i] = (d - hl * rhs[i - 1]) / diag;
            }
            for (size_t i = n - 2; i >= 1; --i) m_[i] = rhs[i] - c[i] * m_[i + 1];
        }
    }

    double min_x() const { return x_.front(); }
    double max_x() const { return x_.back(); }

    double operator()(double x) const {
        size_t i = segment(x);
        double h = x_[i + 1] - x_[i];
        double a = (x_[i + 1] - x) / h;
        double b = (x - x_[i]) / h;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

    double derivative(double x) const {
        size_t i = segment(x);
        double h = x_[i + 1] - x_[i];
        double a = (x_[i + 1] - x) / h;
        double b = (x - x_[i]) / h;
        return (y_[i + 1] - y_[i]) / h +
               ((3.0 * b * b - 1.0) * m_[i + 1] - (3.0 * a * a - 1.0) * m_[i]) * h / 6.0;
    }

private:
    size_t segment(double x) const {
        // Clamp to the table range; callers extend constant beyond the ends.
        if (x <= x_.front()) return 0;
        if (x >= x_.back()) return x_.size() - 2;
        size_t lo = 0, hi = x_.size() - 1;
        while (hi - lo > 1) {
            size_t mid = (lo + hi) / 2;
            (x_[mid] <= x ? lo : hi) = mid;
        }
        return lo;
    }

    std::vector<double> x_, y_, m_;
};

} // namespace weylspec
