#pragma once

// Gauss hypergeometric engine for complex parameters at double precision.
//
// Evaluation regions: the defining series for |z| < 1, the Pfaff map
// z -> z/(z-1) for the left part of the disk and as a degenerate-safe
// fallback on the negative real axis, and the two-term z -> 1/z connection
// formula for z <= -1 with generic (non-integer) a-b.  Terminating cases
// (a or b a non-positive integer) are evaluated as exact polynomials in
// every region.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include "chball/derivatives.hpp"

namespace chball {

using cxd = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------- utilities

// Nearest integer if z is within tol of one (in the complex plane), else no value.
inline bool near_integer(cxd z, long& k_out, double tol = 1e-12) {
    double k = std::round(z.real());
    if (std::abs(z.real() - k) <= tol && std::abs(z.imag()) <= tol &&
        std::abs(k) < 9.0e15) {
        k_out = static_cast<long>(k);
        return true;
    }
    return false;
}

inline bool is_nonpositive_integer(cxd z, double tol = 1e-12) {
    long k;
    return near_integer(z, k, tol) && k <= 0;
}

// Principal-branch log Gamma: upward recursion into the asymptotic regime,
// then the Stirling series.  Both steps preserve the principal branch on
// the cut plane, so no reflection / branch bookkeeping is needed.
inline cxd log_gamma(cxd z) {
    if (is_nonpositive_integer(z))
        throw std::domain_error("log_gamma: pole at non-positive integer");
    // B_{2k} / (2k (2k-1))
    static const double coef[10] = {
        1.0 / 12.0,           -1.0 / 360.0,          1.0 / 1260.0,
        -1.0 / 1680.0,        1.0 / 1188.0,          -691.0 / 360360.0,
        1.0 / 156.0,          -3617.0 / 122400.0,    43867.0 / 244188.0,
        -174611.0 / 125400.0};
    cxd shift = 0.0;
    while (z.real() < 12.0) {
        shift -= std::log(z);
        z += 1.0;
    }
    const cxd zi = 1.0 / z, zi2 = zi * zi;
    cxd s = 0.0, p = zi;
    for (double c : coef) {
        s += c * p;
        p *= zi2;
    }
    return shift + (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + s;
}

inline cxd gamma_fn(cxd z) { return std::exp(log_gamma(z)); }

// 1/Gamma, zero at the poles.
inline cxd rgamma(cxd z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-log_gamma(z));
}

// (a)_n by the defining recurrence (a)_{k+1} = (a)_k (a+k).
inline cxd pochhammer(cxd a, int n) {
    if (n < 0) throw std::invalid_argument("pochhammer: n >= 0");
    cxd p = 1.0;
    for (int k = 0; k < n; ++k) p *= a + double(k);
    return p;
}

// ---------------------------------------------------------------- evaluator

enum class HypBranch { series, pfaff, connection };

inline const char* to_string(HypBranch b) {
    switch (b) {
        case HypBranch::series: return "series";
        case HypBranch::pfaff: return "pfaff";
        case HypBranch::connection: return "connection";
    }
    return "?";
}

struct HypParams {
    cxd a, b, c;
    HypParams(cxd a_, cxd b_, cxd c_) : a(a_), b(b_), c(c_) {
        if (is_nonpositive_integer(c))
            throw std::invalid_argument(
                "HypParams: c must not be zero or a negative integer");
    }
};

struct EvalReport {
    cxd value{0.0, 0.0};
    double est_error = 0.0;  // relative estimate
    int terms_used = 0;
    HypBranch branch = HypBranch::series;
};

struct DegenerateConnectionError : std::domain_error {
    explicit DegenerateConnectionError(const std::string& msg)
        : std::domain_error(msg) {}
};

namespace detail {

inline constexpr int kSeriesCap = 10000;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

inline int terminating_order(cxd a, cxd b) {
    long ka, kb;
    int m = -1;
    if (near_integer(a, ka) && ka <= 0) m = int(-ka);
    if (near_integer(b, kb) && kb <= 0 && (m < 0 || -kb < m)) m = int(-kb);
    return m;  // -1 when non-terminating
}

// Defining series.  Requires |z| < 1 unless the series terminates.
// Stops when two consecutive terms fall below 1e-16 x |running sum|.
inline EvalReport series_2f1(cxd a, cxd b, cxd c, cxd z) {
    EvalReport r;
    r.branch = HypBranch::series;
    const int mterm = terminating_order(a, b);
    if (mterm < 0 && std::abs(z) >= 1.0)
        throw std::domain_error("gauss_2f1: series divergent at |z| >= 1");
    cxd term = 1.0, sum = 1.0;
    double abs_sum = 1.0;
    int small_streak = 0;
    int k = 0;
    for (; k < kSeriesCap; ++k) {
        if (mterm >= 0 && k >= mterm + 1) break;  // polynomial exhausted
        term *= (a + double(k)) * (b + double(k)) / ((c + double(k)) * double(k + 1)) * z;
        sum += term;
        abs_sum += std::abs(term);
        if (std::abs(term) <= 1e-16 * std::abs(sum)) {
            if (++small_streak >= 2) {
                ++k;
                break;
            }
        } else {
            small_streak = 0;
        }
    }
    r.terms_used = k + 1;
    r.value = sum;
    const double rho = std::min(std::abs(z), 0.999);
    const double tail = (mterm >= 0) ? 0.0 : std::abs(term) * rho / (1.0 - rho);
    const double rounding = kEps * std::sqrt(double(k) + 1.0) * abs_sum;
    r.est_error = (tail + rounding) / std::max(std::abs(sum), 1e-300);
    if (mterm < 0 && k >= kSeriesCap && std::abs(term) > 1e-13 * std::abs(sum))
        throw std::runtime_error("gauss_2f1: series cap reached without convergence");
    return r;
}

// Pfaff: F(a,b,c,z) = (1-z)^{-a} F(a, c-b, c, z/(z-1)).
inline EvalReport pfaff_2f1(cxd a, cxd b, cxd c, cxd z) {
    const cxd w = z / (z - 1.0);
    if (std::abs(w) > 0.9966)
        throw std::domain_error(
            "gauss_2f1: no applicable transformation (Pfaff argument too close to 1)");
    // prefer a terminating inner series if one of the mapped parameters allows it
    cxd a1 = a, b1 = c - b;
    if (!is_nonpositive_integer(c - b) && is_nonpositive_integer(c - a)) {
        a1 = b;
        b1 = c - a;
    }
    EvalReport inner = series_2f1(a1, b1, c, w);
    EvalReport r;
    r.branch = HypBranch::pfaff;
    r.value = std::pow(1.0 - z, -a1) * inner.value;
    r.terms_used = inner.terms_used;
    r.est_error = inner.est_error + 4.0 * kEps;
    return r;
}

// Series or Pfaff for |w| <= 1 or w on the negative axis; used for the inner
// evaluations of the connection formula.
inline EvalReport small_or_negative(cxd a, cxd b, cxd c, cxd w) {
    if (terminating_order(a, b) >= 0) return series_2f1(a, b, c, w);
    if (std::abs(w) <= 0.6) return series_2f1(a, b, c, w);
    if (std::abs(w.imag()) <= 1e-14 && w.real() < 0.0) return pfaff_2f1(a, b, c, w);
    if (std::abs(w) < 0.95) return series_2f1(a, b, c, w);
    throw std::domain_error("gauss_2f1: argument outside supported region");
}

}  // namespace detail

// Two-term connection formula relating arguments z and 1/z, for x < 0.
// Terminating parameter pairs short-circuit to the exact polynomial; a-b
// within 1e-8 of an integer is rejected (logarithmic case not implemented).
inline EvalReport gauss_2f1_neg_axis(const HypParams& p, double x) {
    if (!(x < 0.0))
        throw std::invalid_argument("gauss_2f1_neg_axis: requires x < 0");
    const cxd a = p.a, b = p.b, c = p.c;
    if (detail::terminating_order(a, b) >= 0) return detail::series_2f1(a, b, c, x);
    long k;
    if (near_integer(a - b, k, 1e-8))
        throw DegenerateConnectionError(
            "gauss_2f1_neg_axis: a-b within 1e-8 of an integer (degenerate-connection)");

    const cxd w = 1.0 / x;
    // one exp of the log-gamma sum: the individual factors can over/underflow
    // for large imaginary parameters while the ratio stays moderate
    const cxd lgc = log_gamma(c);
    auto coef = [&](cxd num, cxd den1, cxd den2) -> cxd {
        if (is_nonpositive_integer(den1) || is_nonpositive_integer(den2)) return 0.0;
        return std::exp(lgc + log_gamma(num) - log_gamma(den1) - log_gamma(den2));
    };
    const cxd coef1 = coef(b - a, b, c - a);
    const cxd coef2 = coef(a - b, a, c - b);
    const double mlx = std::log(-x);

    EvalReport f1 = detail::small_or_negative(a, a - c + 1.0, a - b + 1.0, w);
    EvalReport f2 = detail::small_or_negative(b, b - c + 1.0, b - a + 1.0, w);
    const cxd t1 = coef1 * std::exp(-a * mlx) * f1.value;
    const cxd t2 = coef2 * std::exp(-b * mlx) * f2.value;

    EvalReport r;
    r.branch = HypBranch::connection;
    r.value = t1 + t2;
    r.terms_used = f1.terms_used + f2.terms_used;
    const double scale = std::max(std::abs(r.value), 1e-300);
    r.est_error = (std::abs(t1) * (f1.est_error + 8.0 * detail::kEps) +
                   std::abs(t2) * (f2.est_error + 8.0 * detail::kEps)) /
                  scale;
    return r;
}

// Main dispatcher.  |z| < 1 by series/Pfaff; real z <= -1 by the connection
// formula (Pfaff fallback when a-b is near an integer); |z| >= 0.95 elsewhere
// is out of the supported domain.
inline EvalReport gauss_2f1(const HypParams& p, cxd z) {
    const cxd a = p.a, b = p.b, c = p.c;
    if (z == 0.0) {
        EvalReport r;
        r.value = 1.0;
        r.terms_used = 1;
        return r;
    }
    if (detail::terminating_order(a, b) >= 0) return detail::series_2f1(a, b, c, z);

    const bool real_axis = std::abs(z.imag()) <= 1e-14;
    if (real_axis && z.real() < 0.0) {
        const double x = z.real();
        if (x >= -1.0) {
            if (x >= -0.5) return detail::series_2f1(a, b, c, z);
            return detail::pfaff_2f1(a, b, c, z);
        }
        long k;
        if (near_integer(a - b, k, 1e-8)) return detail::pfaff_2f1(a, b, c, z);
        return gauss_2f1_neg_axis(p, x);
    }
    if (std::abs(z) <= 0.95) return detail::series_2f1(a, b, c, z);
    throw std::domain_error("gauss_2f1: |z| >= 0.95 off the negative axis is unsupported");
}

// | d^m/dy^m [ y^{c-1} F(a,b,c,y) ] - (c-m)_m y^{c-m-1} F(a,b,c-m,y) |
// with the left side by Richardson-extrapolated central differences.
inline double derivative_identity_residual(const HypParams& p, int m, double y) {
    if (!(y > 0.0 && y < 1.0))
        throw std::invalid_argument("derivative_identity_residual: y in (0,1)");
    if (m < 0) throw std::invalid_argument("derivative_identity_residual: m >= 0");
    if (is_nonpositive_integer(p.c - double(m)))
        throw std::invalid_argument(
            "derivative_identity_residual: c-m is a non-positive integer");

    const cxd a = p.a, b = p.b, c = p.c;
    auto g = [&](double u) -> cxd {
        return std::pow(cxd(u), c - 1.0) * gauss_2f1(HypParams(a, b, c), cxd(u)).value;
    };
    const cxd rhs = pochhammer(c - double(m), m) * std::pow(cxd(y), c - double(m) - 1.0) *
                    gauss_2f1(HypParams(a, b, c - double(m)), cxd(y)).value;
    if (m == 0) return std::abs(g(y) - rhs);

    double h0 = std::min(1e-2, 0.5 * std::min(y, 1.0 - y) / double(m));
    if (h0 < 1e-5)
        throw std::runtime_error("derivative_identity_residual: step-size underflow near y in {0,1}");
    const cxd lhs = richardson_derivative(g, y, m, h0, 3);
    return std::abs(lhs - rhs);
}

}  // namespace chball
