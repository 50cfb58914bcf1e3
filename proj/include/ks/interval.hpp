#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace ks {

// Directed rounding from round-to-nearest results. The error-free
// transformations (TwoSum, fma residual) give the exact sign of the rounding
// error, so bounds only move by one ulp when the operation was inexact.
// Results near the underflow range are always widened.
namespace rounding {

inline constexpr double kTiny = 1e-290;

inline double below(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }
inline double above(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }

// Sign of the exact error (true value minus rounded value).
inline int add_error_sign(double a, double b, double s) {
    if (!std::isfinite(s)) return 0;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return (e > 0) - (e < 0);
}

inline double add_down(double a, double b) {
    const double s = a + b;
    return add_error_sign(a, b, s) < 0 ? below(s) : s;
}
inline double add_up(double a, double b) {
    const double s = a + b;
    return add_error_sign(a, b, s) > 0 ? above(s) : s;
}

inline double mul_down(double a, double b) {
    const double p = a * b;
    if (a == 0 || b == 0) return p == 0 ? 0.0 : p;
    if (std::fabs(p) < kTiny) return below(p);
    return std::fma(a, b, -p) < 0 ? below(p) : p;
}
inline double mul_up(double a, double b) {
    const double p = a * b;
    if (a == 0 || b == 0) return p == 0 ? 0.0 : p;
    if (std::fabs(p) < kTiny) return above(p);
    return std::fma(a, b, -p) > 0 ? above(p) : p;
}

// Divisor must be nonzero.
inline int div_error_sign(double a, double b, double q) {
    const double r = std::fma(-q, b, a);  // a - q*b, exact
    const int rs = (r > 0) - (r < 0);
    return b > 0 ? rs : -rs;
}
inline double div_down(double a, double b) {
    const double q = a / b;
    if (a == 0) return 0.0;
    if (std::fabs(q) < kTiny) return below(q);
    return div_error_sign(a, b, q) < 0 ? below(q) : q;
}
inline double div_up(double a, double b) {
    const double q = a / b;
    if (a == 0) return 0.0;
    if (std::fabs(q) < kTiny) return above(q);
    return div_error_sign(a, b, q) > 0 ? above(q) : q;
}

}  // namespace rounding

/// Closed interval [lo, hi] with outward-rounded arithmetic. lo > hi is empty.
struct Interval {
    double lo = 0;
    double hi = 0;

    Interval() = default;
    constexpr Interval(double x) : lo(x), hi(x) {}  // NOLINT: implicit point interval
    constexpr Interval(double l, double h) : lo(l), hi(h) {}

    static constexpr Interval empty_set() { return {1.0, -1.0}; }

    bool empty() const { return lo > hi; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool is_point() const { return lo == hi; }
    double width() const { return hi - lo; }
    double mid() const { return lo + 0.5 * (hi - lo); }
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
    double mig() const { return contains(0.0) ? 0.0 : std::min(std::fabs(lo), std::fabs(hi)); }
};

inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator+(Interval a, Interval b) {
    return {rounding::add_down(a.lo, b.lo), rounding::add_up(a.hi, b.hi)};
}

inline Interval operator-(Interval a, Interval b) { return a + (-b); }

inline Interval operator*(Interval a, Interval b) {
    using namespace rounding;
    const double lo = std::min({mul_down(a.lo, b.lo), mul_down(a.lo, b.hi), mul_down(a.hi, b.lo), mul_down(a.hi, b.hi)});
    const double hi = std::max({mul_up(a.lo, b.lo), mul_up(a.lo, b.hi), mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)});
    return {lo, hi};
}

/// Requires 0 outside b.
inline Interval operator/(Interval a, Interval b) {
    using namespace rounding;
    const double lo = std::min({div_down(a.lo, b.lo), div_down(a.lo, b.hi), div_down(a.hi, b.lo), div_down(a.hi, b.hi)});
    const double hi = std::max({div_up(a.lo, b.lo), div_up(a.lo, b.hi), div_up(a.hi, b.lo), div_up(a.hi, b.hi)});
    return {lo, hi};
}

inline Interval sqr(Interval a) {
    using namespace rounding;
    const double m = a.mig();
    const double M = a.mag();
    return {mul_down(m, m), mul_up(M, M)};
}

inline Interval intersect(Interval a, Interval b) { return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)}; }

}  // namespace ks
