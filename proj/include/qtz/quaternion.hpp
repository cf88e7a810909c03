#pragma once

#include <cmath>
#include <complex>
#include <iosfwd>

#include "qtz/errors.hpp"

namespace qtz {

using cxd = std::complex<double>;

/// Quaternion q = w + x*i + y*j + z*k over doubles. Plain immutable value;
/// multiplication follows the Hamilton rules i*j = k, j*k = i, k*i = j.
struct Quaternion {
    double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}
    /// Embeds a real scalar.
    constexpr explicit Quaternion(double real) : w(real) {}
    /// Embeds a complex scalar a+bi as w=a, x=b.
    explicit Quaternion(cxd c) : w(c.real()), x(c.imag()) {}

    friend constexpr Quaternion operator+(Quaternion a, Quaternion b) {
        return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z};
    }
    friend constexpr Quaternion operator-(Quaternion a, Quaternion b) {
        return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z};
    }
    friend constexpr Quaternion operator-(Quaternion a) { return {-a.w, -a.x, -a.y, -a.z}; }
    friend constexpr Quaternion operator*(Quaternion a, double s) {
        return {a.w * s, a.x * s, a.y * s, a.z * s};
    }
    friend constexpr Quaternion operator*(double s, Quaternion a) { return a * s; }
    friend constexpr bool operator==(Quaternion a, Quaternion b) {
        return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
    }
    Quaternion& operator+=(Quaternion b) { return *this = *this + b; }
    Quaternion& operator-=(Quaternion b) { return *this = *this - b; }
};

/// Complex-pair view of a quaternion: q = c1 + j*c2 with c1 = w + x*i and
/// c2 = y - z*i. Computed on demand; the four reals are the canonical store.
struct ComplexPair {
    cxd c1{0.0, 0.0};
    cxd c2{0.0, 0.0};
};

/// Hamilton product.
constexpr Quaternion qmul(Quaternion a, Quaternion b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion operator*(Quaternion a, Quaternion b) { return qmul(a, b); }

constexpr Quaternion qconj(Quaternion q) { return {q.w, -q.x, -q.y, -q.z}; }

constexpr double qnorm2(Quaternion q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }

inline double qnorm(Quaternion q) { return std::sqrt(qnorm2(q)); }

/// conj(q)/|q|^2. The default tolerance is a true-zero guard only; callers
/// needing a domain tolerance pass their own.
inline Quaternion qinv(Quaternion q, double tol = 1e-300) {
    const double n2 = qnorm2(q);
    if (!(std::sqrt(n2) > tol)) throw ZeroQuaternion{};
    return qconj(q) * (1.0 / n2);
}

inline ComplexPair to_pair(Quaternion q) { return {cxd{q.w, q.x}, cxd{q.y, -q.z}}; }

inline Quaternion from_pair(ComplexPair p) {
    return {p.c1.real(), p.c1.imag(), p.c2.real(), -p.c2.imag()};
}

std::ostream& operator<<(std::ostream& os, Quaternion q);

}  // namespace qtz
