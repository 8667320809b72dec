#pragma once

#include <array>
#include <cmath>

#include "weylspec/common.hpp"

namespace weylspec {

/// Column 2-vector over T (double or cplx).
template <class T>
struct Vec2 {
    T a{}; ///< first slot (F in the state-vector convention)
    T b{}; ///< second slot (p F' in the state-vector convention)

    Vec2() = default;
    Vec2(T a_, T b_) : a(a_), b(b_) {}

    Vec2& operator+=(const Vec2& o) { a += o.a; b += o.b; return *this; }
    Vec2& operator-=(const Vec2& o) { a -= o.a; b -= o.b; return *this; }
    Vec2& operator*=(T s) { a *= s; b *= s; return *this; }

    friend Vec2 operator+(Vec2 u, const Vec2& v) { return u += v; }
    friend Vec2 operator-(Vec2 u, const Vec2& v) { return u -= v; }
    friend Vec2 operator*(T s, Vec2 u) { return u *= s; }

    double norm() const {
        return std::sqrt(std::norm(cplx(a)) + std::norm(cplx(b)));
    }
};

using Vec2d = Vec2<double>;
using Vec2c = Vec2<cplx>;

/// 2x2 matrix over T, row-major: [[m00, m01], [m10, m11]].
template <class T>
struct Mat2 {
    T m00{}, m01{}, m10{}, m11{};

    static Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }

    Vec2<T> operator*(const Vec2<T>& v) const {
        return {m00 * v.a + m01 * v.b, m10 * v.a + m11 * v.b};
    }

    Mat2 operator*(const Mat2& o) const {
        return {m00 * o.m00 + m01 * o.m10, m00 * o.m01 + m01 * o.m11,
                m10 * o.m00 + m11 * o.m10, m10 * o.m01 + m11 * o.m11};
    }

    Mat2 operator-(const Mat2& o) const {
        return {m00 - o.m00, m01 - o.m01, m10 - o.m10, m11 - o.m11};
    }

    Mat2 operator+(const Mat2& o) const {
        return {m00 + o.m00, m01 + o.m01, m10 + o.m10, m11 + o.m11};
    }

    Mat2& operator+=(const Mat2& o) { return *this = *this + o; }

    friend Mat2 operator*(T s, const Mat2& m) {
        return {s * m.m00, s * m.m01, s * m.m10, s * m.m11};
    }

    double norm() const { return hs_norm(); }

    T det() const { return m00 * m11 - m01 * m10; }

    Mat2 inverse() const {
        T d = det();
        if (std::abs(cplx(d)) == 0.0)
            throw NumericalError("Mat2::inverse: singular matrix");
        T id = T(1) / d;
        return {m11 * id, -m01 * id, -m10 * id, m00 * id};
    }

    /// Hilbert-Schmidt (Frobenius) norm.
    double hs_norm() const {
        return std::sqrt(std::norm(cplx(m00)) + std::norm(cplx(m01)) +
                         std::norm(cplx(m10)) + std::norm(cplx(m11)));
    }
};

using Mat2d = Mat2<double>;
using Mat2c = Mat2<cplx>;

inline Mat2c to_complex(const Mat2d& m) {
    return {cplx(m.m00), cplx(m.m01), cplx(m.m10), cplx(m.m11)};
}

} // namespace weylspec
