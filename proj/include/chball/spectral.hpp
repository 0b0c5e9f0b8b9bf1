#pragma once

// Jacobi functions, the kernel H_n(lambda,T) in closed and integral form,
// the discrete-spectrum truncation of the smoothed count, and the
// exponentially growing main term A(T,z,z').
//
// For lambda < 0 the square root is taken as i sqrt(|lambda|) throughout,
// which makes every parameter pair real; for lambda >= 0 the parameters are
// complex conjugates and the values are real up to rounding.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chball/ball_model.hpp"
#include "chball/bump.hpp"
#include "chball/hypergeometric.hpp"
#include "chball/quadrature.hpp"

namespace chball {

struct SpectralEntry {
    double lambda;                                  // in [-n^2, 0)
    std::function<double(const BallPoint&)> phi;    // orthonormal eigenfunction
};

struct SpectralData {
    std::vector<SpectralEntry> entries;             // sorted ascending in lambda
    std::optional<double> covolume;
};

inline void validate_spectral(const SpectralData& S, int n) {
    double prev = -std::numeric_limits<double>::infinity();
    for (const SpectralEntry& e : S.entries) {
        if (e.lambda < -double(n) * n - 1e-12 || e.lambda >= 0.0)
            throw std::invalid_argument("SpectralData: lambda must lie in [-n^2, 0)");
        if (e.lambda < prev)
            throw std::invalid_argument("SpectralData: lambdas must be sorted ascending");
        if (!e.phi) throw std::invalid_argument("SpectralData: missing phi evaluator");
        prev = e.lambda;
    }
}

namespace detail {

inline cxd sqrt_lambda(double lambda) {
    // sqrt(lambda) with the lambda < 0 branch fixed as i sqrt(|lambda|)
    return lambda >= 0.0 ? cxd(std::sqrt(lambda), 0.0) : cxd(0.0, std::sqrt(-lambda));
}

inline double real_checked(cxd v, const char* what) {
    if (std::abs(v.imag()) > 1e-10 * std::max(1.0, std::abs(v.real())))
        throw std::runtime_error(std::string(what) + ": imaginary residue above 1e-10");
    return v.real();
}

}  // namespace detail

// phi^{(alpha,beta)}_{sqrt(lambda)}(x)
//   = F((alpha+beta+1-i sqrt(lambda))/2, (alpha+beta+1+i sqrt(lambda))/2,
//       alpha+1, -sinh^2 x)
inline double jacobi_phi(double alpha, double beta, double lambda, double x) {
    if (!(alpha > -1.0)) throw std::invalid_argument("jacobi_phi: alpha > -1 required");
    const cxd s = detail::sqrt_lambda(lambda);
    const cxd rho(alpha + beta + 1.0, 0.0);
    const HypParams p(0.5 * (rho - cxd(0, 1) * s), 0.5 * (rho + cxd(0, 1) * s), alpha + 1.0);
    const double sh = std::sinh(x);
    return detail::real_checked(gauss_2f1(p, cxd(-sh * sh)).value, "jacobi_phi");
}

// H_n(lambda,T) = sinh^{2n} T F((n-i sqrt(lambda))/2, (n+i sqrt(lambda))/2,
//                               n+1, -sinh^2 T)
inline double H_n_closed(int n, double lambda, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("H_n_closed: T > 0 required");
    if (lambda < -double(n) * n - 1e-12)
        throw std::invalid_argument("H_n_closed: lambda >= -n^2 required");
    const cxd s = detail::sqrt_lambda(lambda);
    const HypParams p(0.5 * (double(n) - cxd(0, 1) * s), 0.5 * (double(n) + cxd(0, 1) * s),
                      double(n) + 1.0);
    const double sh = std::sinh(T);
    return std::pow(sh, 2 * n) *
           detail::real_checked(gauss_2f1(p, cxd(-sh * sh)).value, "H_n_closed");
}

// Integral representation (Mehler-Fock route):
//   H_n(lambda,T) = 2^{n+1/2} Gamma(n+1) / (sqrt(pi) Gamma(n+1/2))
//                   * cosh^{1/2} T
//                   * int_0^T (coshT - cosht)^{n-1/2}
//                       F(-1/2, 3/2, n+1/2, (coshT-cosht)/(2coshT)) cos(sqrt(lambda) t) dt,
// cos turning into cosh for lambda < 0.  The hypergeometric argument stays
// in [0, 1/2], so the series branch always applies.
inline double H_n_quadrature(int n, double lambda, double T, double tol = 1e-9) {
    if (!(T > 0.0)) throw std::invalid_argument("H_n_quadrature: T > 0 required");
    const double Cn = std::pow(2.0, double(n) + 0.5) * std::tgamma(double(n) + 1.0) /
                      (std::sqrt(kPi) * std::tgamma(double(n) + 0.5));
    const double Y = std::cosh(T);
    const HypParams p(-0.5, 1.5, double(n) + 0.5);
    const double s = std::sqrt(std::abs(lambda));
    auto f = [&](double t) {
        const double gap = Y - std::cosh(t);
        const double osc = lambda >= 0.0 ? std::cos(s * t) : std::cosh(s * t);
        return std::pow(std::max(gap, 0.0), double(n) - 0.5) *
               gauss_2f1(p, cxd(gap / (2.0 * Y))).value.real() * osc;
    };
    // (coshT - cosht)^{n-1/2} vanishes like (T-t)^{n-1/2}: the u^2 = T-t
    // substitution renders it polynomially smooth for every n
    const int budget = lambda > 1e4 ? 20000 : 6000;
    QuadResult q = integrate_1d(f, 0.0, T, tol, EndpointSingularity::inv_sqrt_right, budget);
    return Cn * std::sqrt(Y) * q.value;
}

// Admissibility of an eigenvalue in the asymptotic main term.
struct AdmissibleWindow {
    std::pair<double, double> primary;                  // [lo, hi)
    std::optional<std::pair<double, double>> secondary; // n > 2 alternative
    std::string note;
};

inline AdmissibleWindow admissible_window(int n) {
    if (n < 1) throw std::invalid_argument("admissible_window: n >= 1");
    AdmissibleWindow w;
    if (n == 1) {
        w.primary = {-1.0, 0.0};
        w.note = "printed admissibility window starts at n >= 2; n = 1 uses [-1, 0)";
        return w;
    }
    const double q = double(2 * n - 1) / double(2 * n + 1);
    w.primary = {-double(n) * n, -double(n - 1) * double(n - 1) * q * q};
    if (n > 2)
        w.secondary = {-double(n) * n, -double(n - 2) * double(n - 2) * q * q};
    return w;
}

struct MainTermResult {
    double value = 0.0;
    int used = 0;
    int excluded = 0;  // entries outside the admissibility window
};

// A(T,z,z') = (pi/2)^n sum_j 2^{-mu_j} Gamma(mu_j) e^{(n+mu_j)T}
//             / (Gamma((n+mu_j)/2) Gamma(1+(n+mu_j)/2)) phi_j(z) phi_j(z'),
// mu_j = sqrt(|lambda_j|), restricted to the primary admissibility window.
inline MainTermResult main_term_A(const SpectralData& S, int n, double T,
                                  const BallPoint& z, const BallPoint& zprime) {
    validate_spectral(S, n);
    const AdmissibleWindow w = admissible_window(n);
    MainTermResult out;
    const double pref = std::pow(kPi / 2.0, n);
    for (const SpectralEntry& e : S.entries) {
        if (!(e.lambda >= w.primary.first - 1e-12 && e.lambda < w.primary.second)) {
            ++out.excluded;
            continue;
        }
        const double mu = std::sqrt(-e.lambda);
        const double term = std::pow(2.0, -mu) * std::tgamma(mu) *
                            std::exp((double(n) + mu) * T) /
                            (std::tgamma(0.5 * (double(n) + mu)) *
                             std::tgamma(1.0 + 0.5 * (double(n) + mu)));
        out.value += pref * term * e.phi(z) * e.phi(zprime);
        ++out.used;
    }
    return out;
}

// Discrete part of the spectral representation of I(T,z,z',alpha):
//   (pi^n / n!) sum_j H_n(lambda_j, T) phi_j(z') int phi_j h dmu,
// the integral taken over the bump support.  Same admissibility filter as
// the main term.
inline double spectral_average_truncated(const SpectralData& S, const BumpProfile& B, int n,
                                         double T, const BallPoint& zprime,
                                         double tol = 1e-8) {
    validate_spectral(S, n);
    const AdmissibleWindow w = admissible_window(n);
    const double pref = std::pow(kPi, n) / std::tgamma(double(n) + 1.0);
    double acc = 0.0;
    for (const SpectralEntry& e : S.entries) {
        if (!(e.lambda >= w.primary.first - 1e-12 && e.lambda < w.primary.second)) continue;
        auto f = [&](const BallPoint& x) { return e.phi(x) * bump_value(B, x); };
        const QuadResult proj = integrate_ball(f, B.center, B.alpha, n, tol);
        acc += pref * H_n_closed(n, e.lambda, T) * e.phi(zprime) * proj.value;
    }
    return acc;
}

}  // namespace chball
