#pragma once

#include <cmath>

namespace rotsym {

/// Truncated second-order Taylor jet: value and first two derivatives in r.
///
/// Arithmetic propagates all three channels exactly (no differencing). The
/// first-derivative channel of any composition depends only on the v0/v1
/// channels of its inputs, so a Jet2 seeded with v2 = 0 doubles as a dual
/// number for forward-mode first derivatives.
struct Jet2 {
    double v0 = 0.0;
    double v1 = 0.0;
    double v2 = 0.0;

    static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
    static constexpr Jet2 variable(double r) { return {r, 1.0, 0.0}; }

    bool finite() const { return std::isfinite(v0) && std::isfinite(v1) && std::isfinite(v2); }

    friend bool operator==(const Jet2&, const Jet2&) = default;
};

inline Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.v0 + b.v0, a.v1 + b.v1, a.v2 + b.v2}; }
inline Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.v0 - b.v0, a.v1 - b.v1, a.v2 - b.v2}; }
inline Jet2 operator-(const Jet2& a) { return {-a.v0, -a.v1, -a.v2}; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.v0 * b.v0, a.v1 * b.v0 + a.v0 * b.v1, a.v2 * b.v0 + 2.0 * a.v1 * b.v1 + a.v0 * b.v2};
}

inline Jet2 operator/(const Jet2& a, const Jet2& b) {
    const double q0 = a.v0 / b.v0;
    const double q1 = (a.v1 - q0 * b.v1) / b.v0;
    const double q2 = (a.v2 - 2.0 * q1 * b.v1 - q0 * b.v2) / b.v0;
    return {q0, q1, q2};
}

inline Jet2 operator+(const Jet2& a, double c) { return {a.v0 + c, a.v1, a.v2}; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { return {a.v0 - c, a.v1, a.v2}; }
inline Jet2 operator-(double c, const Jet2& a) { return {c - a.v0, -a.v1, -a.v2}; }
inline Jet2 operator*(const Jet2& a, double c) { return {a.v0 * c, a.v1 * c, a.v2 * c}; }
inline Jet2 operator*(double c, const Jet2& a) { return a * c; }
inline Jet2 operator/(const Jet2& a, double c) { return {a.v0 / c, a.v1 / c, a.v2 / c}; }
inline Jet2 operator/(double c, const Jet2& a) { return Jet2::constant(c) / a; }

/// Chain rule for an outer function with value d0, derivative d1 and second
/// derivative d2 at u.v0.
inline Jet2 compose(const Jet2& u, double d0, double d1, double d2) {
    return {d0, d1 * u.v1, d2 * u.v1 * u.v1 + d1 * u.v2};
}

// Elementary functions without domain checks; radial_expr adds the checks.
inline Jet2 sin(const Jet2& u) {
    const double s = std::sin(u.v0), c = std::cos(u.v0);
    return compose(u, s, c, -s);
}
inline Jet2 cos(const Jet2& u) {
    const double s = std::sin(u.v0), c = std::cos(u.v0);
    return compose(u, c, -s, -c);
}
inline Jet2 tan(const Jet2& u) {
    const double t = std::tan(u.v0);
    const double d = 1.0 + t * t;
    return compose(u, t, d, 2.0 * t * d);
}
inline Jet2 sinh(const Jet2& u) {
    const double s = std::sinh(u.v0), c = std::cosh(u.v0);
    return compose(u, s, c, s);
}
inline Jet2 cosh(const Jet2& u) {
    const double s = std::sinh(u.v0), c = std::cosh(u.v0);
    return compose(u, c, s, c);
}
inline Jet2 tanh(const Jet2& u) {
    const double t = std::tanh(u.v0);
    const double d = 1.0 - t * t;
    return compose(u, t, d, -2.0 * t * d);
}
inline Jet2 exp(const Jet2& u) {
    const double e = std::exp(u.v0);
    return compose(u, e, e, e);
}
inline Jet2 log(const Jet2& u) {
    const double inv = 1.0 / u.v0;
    return compose(u, std::log(u.v0), inv, -inv * inv);
}
inline Jet2 sqrt(const Jet2& u) {
    const double s = std::sqrt(u.v0);
    return compose(u, s, 0.5 / s, -0.25 / (s * u.v0));
}

}  // namespace rotsym
