#pragma once
#include <cmath>
#include <stdexcept>
#include <string>

namespace opcrit {

// Raised when a certified computation cannot vouch for its result (pivot or
// divisor not separated from zero, non-finite intermediate, ...).
struct CertificationError : std::runtime_error {
    explicit CertificationError(const std::string& what) : std::runtime_error(what) {}
};

// A double together with a rigorous bound on |true value - stored value|.
//
// Every operation adds the worst-case rounding error of the operation itself
// (unit roundoff u = 2^-53 relative, plus a tiny absolute term covering the
// subnormal range) to the propagated input bounds. The bound arithmetic runs
// in floating point too, so each raw bound is inflated by 1 + 2^-49 = 1 + 16u,
// which dominates the at most ~8 roundings spent computing the bound itself.
struct ErrBounded {
    double v = 0.0;
    double e = 0.0;
};

namespace detail {
inline constexpr double kU = 0x1.0p-53;
inline constexpr double kEta = 0x1.0p-1070;
inline constexpr double kInflate = 1.0 + 0x1.0p-49;

inline double seal(double raw) { return (raw + kEta) * kInflate; }
} // namespace detail

inline ErrBounded eb_exact(double x) { return {x, 0.0}; }

inline ErrBounded eb_add(const ErrBounded& a, const ErrBounded& b) {
    double v = a.v + b.v;
    return {v, detail::seal(detail::kU * std::fabs(v) + a.e + b.e)};
}

inline ErrBounded eb_sub(const ErrBounded& a, const ErrBounded& b) {
    double v = a.v - b.v;
    return {v, detail::seal(detail::kU * std::fabs(v) + a.e + b.e)};
}

inline ErrBounded eb_neg(const ErrBounded& a) { return {-a.v, a.e}; }

inline ErrBounded eb_mul(const ErrBounded& a, const ErrBounded& b) {
    double v = a.v * b.v;
    double prop = std::fabs(a.v) * b.e + std::fabs(b.v) * a.e + a.e * b.e;
    return {v, detail::seal(detail::kU * std::fabs(v) + prop)};
}

inline ErrBounded eb_div(const ErrBounded& a, const ErrBounded& b) {
    double bb = std::fabs(b.v);
    if (!(b.e < bb))
        throw CertificationError("divisor not certified away from zero");
    double v = a.v / b.v;
    double prop = (std::fabs(a.v) * b.e + bb * a.e) / (bb * (bb - b.e));
    return {v, detail::seal(detail::kU * std::fabs(v) + prop)};
}

// Parse a decimal literal; strtod rounds correctly, so the result is off by
// at most half an ulp, covered by u * |v|.
ErrBounded eb_from_decimal(const std::string& s);

// 1 - p. Exact (Sterbenz) when p lies in [0.5, 2]; one rounding otherwise.
inline ErrBounded eb_one_minus(const ErrBounded& p) {
    if (p.v >= 0.5 && p.v <= 2.0) return {1.0 - p.v, p.e};
    return eb_sub(eb_exact(1.0), p);
}

enum class CertifiedSign { Negative, Positive, Inconclusive };

inline CertifiedSign certified_sign(const ErrBounded& x) {
    if (std::isfinite(x.v) && std::isfinite(x.e) && x.e >= 0.0) {
        // fl(v + e) < 0 implies v + e < 0 (rounding a nonnegative real never
        // produces a negative double), and symmetrically for the other side.
        if (x.v + x.e < 0.0) return CertifiedSign::Negative;
        if (x.v - x.e > 0.0) return CertifiedSign::Positive;
    }
    return CertifiedSign::Inconclusive;
}

} // namespace opcrit
