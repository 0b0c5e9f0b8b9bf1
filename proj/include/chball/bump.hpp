#pragma once

// The smoothed count I(T,z,z',alpha), direct route: radial bump profiles,
// the normalization constant c_n(alpha), geodesic-ball overlap masses, and
// the sum of overlaps over an enumerated orbit.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <utility>

#include "chball/ball_model.hpp"
#include "chball/lattice.hpp"
#include "chball/quadrature.hpp"

namespace chball {

// Fixed polynomial cap (1-t^2)^3 pre-normalized against the flat polar
// measure: vol(S^{2n-1}) int_0^1 h1 t^{2n-1} dt = 1, which is what makes
// alpha^{2n} c_n(alpha) -> 1.
inline std::function<double(double)> default_cap_profile(int n) {
    double kappa = std::tgamma(double(n) + 4.0) / (6.0 * std::pow(kPi, n));
    return [kappa](double t) {
        if (t >= 1.0) return 0.0;
        const double u = 1.0 - t * t;
        return kappa * u * u * u;
    };
}

// c_n(alpha) from int h dmu = 1 via the polar integral
// c * alpha * vol(S^{2n-1}) int_0^1 h1(t) sinh^{2n-1}(alpha t) cosh(alpha t) dt = 1.
inline double bump_normalization(int n, double alpha,
                                 const std::function<double(double)>& h1) {
    if (!(alpha > 0.0 && alpha <= 0.5))
        throw std::invalid_argument("bump_normalization: alpha in (0, 0.5] required");
    double I = 0.0;
    for (auto [t, w] : gauss_legendre_ab(64, 0.0, 1.0))
        I += w * h1(t) * std::pow(std::sinh(alpha * t), 2 * n - 1) * std::cosh(alpha * t);
    I *= alpha * sphere_volume(n);
    if (!(I > 0.0)) throw std::domain_error("bump_normalization: profile integrates to 0");
    return 1.0 / I;
}

struct BumpProfile {
    int n;
    BallPoint center;
    double alpha;
    double c_alpha;
    std::function<double(double)> h1;  // radial shape on [0,1], 0 at 1
};

inline BumpProfile make_bump(int n, BallPoint center, double alpha,
                             std::function<double(double)> profile = nullptr) {
    if (!profile) profile = default_cap_profile(n);
    const double c = bump_normalization(n, alpha, profile);
    return BumpProfile{n, std::move(center), alpha, c, std::move(profile)};
}

// h(x) = c_n(alpha) h1(d(x,center)/alpha), 0 outside the support.
inline double bump_value(const BumpProfile& B, const BallPoint& x) {
    const double d = distance(x, B.center);
    if (d >= B.alpha) return 0.0;
    return B.c_alpha * B.h1(d / B.alpha);
}

namespace detail {

// Spherical-cap geometry: for x on the geodesic sphere of radius r about a
// point c and a target p with D = d(c,p), the distance d(x,p) depends on the
// direction only through the first complex coordinate u e^{i psi} of the
// unit vector pointing at x (after moving c to 0 and rotating p onto e_1):
//   sinh^2 d = [t_r^2 + t_D^2 - 2 t_r t_D u cos(psi) - t_r^2 t_D^2 (1-u^2)]
//              / ((1-t_r^2)(1-t_D^2)).
struct CapGeometry {
    double tr, tD, denom;
    CapGeometry(double r, double D)
        : tr(std::tanh(r)), tD(std::tanh(D)),
          denom((1.0 - tr * tr) * (1.0 - tD * tD)) {}

    double dist(double u, double psi) const {
        const double num = tr * tr + tD * tD - 2.0 * tr * tD * u * std::cos(psi) -
                           tr * tr * tD * tD * (1.0 - u * u);
        return std::asinh(std::sqrt(std::max(0.0, num) / denom));
    }
    // psi* such that d(u, psi) < rho exactly for psi in (-psi*, psi*)
    double psi_star(double u, double rho) const {
        const double S = std::sinh(rho) * std::sinh(rho);
        const double num = tr * tr + tD * tD - tr * tr * tD * tD * (1.0 - u * u) - S * denom;
        const double den = 2.0 * tr * tD * u;
        if (den < 1e-300) return num < 0.0 ? kPi : 0.0;
        const double g = num / den;
        if (g <= -1.0) return kPi;
        if (g >= 1.0) return 0.0;
        return std::acos(g);
    }
};

// Fraction of the sphere S_r(c) lying within distance rho of p (D = d(c,p)).
inline double sphere_cap_fraction(int n, double r, double D, double rho) {
    CapGeometry cap(r, D);
    if (n == 1) return cap.psi_star(1.0, rho) / kPi;
    // marginal density of the first coordinate: (n-1)/pi (1-u^2)^{n-2} on the disc
    auto f = [&](double u) {
        return 2.0 * double(n - 1) / kPi * std::pow(1.0 - u * u, n - 2) * u *
               cap.psi_star(u, rho);
    };
    return integrate_1d(f, 0.0, 1.0, 1e-10).value;
}

// Mean over S_r(c) of a radial function value(d(x,p)) supported on d < rho.
// Fixed Gauss nodes: the psi window is resolved exactly, the u direction has
// mild kinks where caps open or close, well inside the consumers' tolerances.
inline double sphere_mean_radial(int n, double r, double D,
                                 const std::function<double(double)>& value, double rho) {
    if (D < 1e-14) return value(r);  // sphere is a level set of d(.,p)
    if (r + 1e-15 < D - rho || r - 1e-15 > D + rho) return 0.0;
    CapGeometry cap(r, D);
    if (n == 1) {
        const double psimax = cap.psi_star(1.0, rho);
        if (psimax <= 0.0) return 0.0;
        double acc = 0.0;
        for (auto [psi, w] : gauss_legendre_ab(48, 0.0, psimax))
            acc += w * value(cap.dist(1.0, psi));
        return acc / kPi;
    }
    double acc = 0.0;
    for (auto [u, wu] : gauss_legendre_ab(48, 0.0, 1.0)) {
        const double psimax = cap.psi_star(u, rho);
        if (psimax <= 0.0) continue;
        double inner = 0.0;
        for (auto [psi, w] : gauss_legendre_ab(24, 0.0, psimax))
            inner += w * value(cap.dist(u, psi));
        acc += wu * 2.0 * double(n - 1) / kPi * std::pow(1.0 - u * u, n - 2) * u * inner;
    }
    return acc;
}

}  // namespace detail

// int_{d(x,p) < T} h(x) dmu(x) for the bump centered at c, expressed through
// D = d(c, p): exactly 1 for D <= T - alpha, exactly 0 for D >= T + alpha,
// and a 1-d radial integral of the cap fraction in between.
inline std::pair<double, double> overlap_mass_at_distance(const BumpProfile& B, double D,
                                                          double T) {
    if (D <= T - B.alpha) return {1.0, 0.0};
    if (D >= T + B.alpha) return {0.0, 0.0};
    const double volS = sphere_volume(B.n);
    auto f = [&](double r) {
        const double frac = detail::sphere_cap_fraction(B.n, r, D, T);
        if (frac <= 0.0) return 0.0;
        return B.c_alpha * B.h1(r / B.alpha) * frac * volS *
               std::pow(std::sinh(r), 2 * B.n - 1) * std::cosh(r);
    };
    QuadResult q = integrate_1d(f, 0.0, B.alpha, 1e-9);
    return {std::min(1.0, std::max(0.0, q.value)), q.est_error};
}

inline double ball_overlap_mass(const BumpProfile& B, const Isometry& g,
                                const BallPoint& zprime, double T) {
    const double D = distance(B.center, apply_isometry(g.inverse(), zprime));
    return overlap_mass_at_distance(B, D, T).first;
}

struct AveragedCount {
    double value = 0.0;
    double est_error = 0.0;
    bool truncated = false;
};

// I(T,z,z',alpha) = sum over gamma of the overlap mass at d(z, gamma z'),
// z being the bump center.  Orbit elements with full or empty overlap
// contribute exactly 1 or 0 (no quadrature).
inline AveragedCount averaged_count_direct(const GroupSpec& spec, const BumpProfile& B,
                                           const BallPoint& zprime, double T) {
    AveragedCount out;
    OrbitResult orbit = enumerate_orbit(spec, zprime, B.center, T + B.alpha);
    out.truncated = orbit.truncated;
    for (const OrbitElement& e : orbit.elements) {
        if (e.dist >= T + B.alpha) continue;
        if (e.dist <= T - B.alpha) {
            out.value += 1.0;
            continue;
        }
        auto [mass, err] = overlap_mass_at_distance(B, e.dist, T);
        out.value += mass;
        out.est_error += err;
    }
    return out;
}

}  // namespace chball
