#pragma once

// Wave route for the smoothed count: the kernel K(T,t) in closed and
// defining (iterated-derivative) form, the explicit solution of the Cauchy
// problem u_tt = L_n u with u(0)=0, u_t(0)=f for radial-bump initial data,
// and the reconstruction of I(T,z,z',alpha) from u.
//
// In the variable y = cosh t the operator d/(sinh t dt) is exactly d/dy,
// so the iterated derivative is an (n-1)-th plain derivative; it is taken
// by Richardson-extrapolated central differences with a step proportional
// to the distance from the kernel singularity.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "chball/bump.hpp"
#include "chball/derivatives.hpp"
#include "chball/hypergeometric.hpp"
#include "chball/quadrature.hpp"

namespace chball {

struct WaveConfig {
    int t_quad_points = 4000;      // subdivision budget of the outer integral
    int radial_quad_points = 2000; // subdivision budget of each inner integral
    int richardson_levels = 3;
    double tol = 1e-6;
};

inline void validate(const WaveConfig& cfg) {
    if (cfg.t_quad_points <= 0 || cfg.radial_quad_points <= 0 || cfg.richardson_levels <= 0)
        throw std::invalid_argument("WaveConfig: all counts must be positive");
    if (!(cfg.tol > 1e-12 && cfg.tol < 1e-2))
        throw std::invalid_argument("WaveConfig: tol in (1e-12, 1e-2) required");
}

// K(T,t) = c1_n cosh^{-1/2} T cosh t (cosh^2 T - cosh^2 t)^{-1/2},
// c1_n = (-1)^{n-1} Gamma(n-1/2) sqrt(2/pi).
inline double kernel_K_closed(int n, double T, double t) {
    if (!(t > 0.0 && t < T)) throw std::invalid_argument("kernel_K_closed: 0 < t < T");
    if (t > T - 1e-8)
        throw std::invalid_argument("kernel_K_closed: t too close to the T singularity");
    const double c1 = ((n - 1) % 2 == 0 ? 1.0 : -1.0) * std::tgamma(n - 0.5) *
                      std::sqrt(2.0 / kPi);
    const double chT = std::cosh(T), cht = std::cosh(t);
    return c1 * cht / (std::sqrt(chT) * std::sqrt(chT * chT - cht * cht));
}

// Defining expression: (d/dy)^{n-1} applied to
// (cosh T - y)^{n-3/2} F(-1/2, 3/2, n-1/2, (cosh T - y)/(2 cosh T)) at y = cosh t.
inline double kernel_K_defining(int n, double T, double t) {
    if (n < 1 || n > 4) throw std::invalid_argument("kernel_K_defining: n in 1..4");
    if (!(t > 0.0 && t < T)) throw std::invalid_argument("kernel_K_defining: 0 < t < T");
    const double Y = std::cosh(T);
    const HypParams p(-0.5, 1.5, double(n) - 0.5);
    auto g = [&](double y) {
        const double gap = Y - y;
        return std::pow(gap, double(n) - 1.5) *
               gauss_2f1(p, cxd(gap / (2.0 * Y))).value.real();
    };
    const double y0 = std::cosh(t);
    if (n == 1) return g(y0);
    const int m = n - 1;
    const double h0 = 0.02 * (Y - y0);
    if (h0 < 1e-8)
        throw std::invalid_argument("kernel_K_defining: t too close to the T singularity");
    double est = 0.0;
    const double val = richardson_derivative(g, y0, m, h0, 3, &est);
    if (est > 1e-4 * (std::abs(val) + 1e-300))
        throw std::runtime_error("kernel_K_defining: extrapolation failed to converge");
    return val;
}

// ------------------------------------------------------------- wave solution

// Radial initial datum: value profile(d(x,center)/radius) on d < radius.
struct RadialSource {
    BallPoint center;
    double radius;
    std::function<double(double)> profile;
};

struct WaveInitialData {
    std::vector<RadialSource> sources;
};

inline RadialSource wave_source_from_bump(const BumpProfile& B, double amplitude = 1.0) {
    const double c = amplitude * B.c_alpha;
    auto h1 = B.h1;
    return RadialSource{B.center, B.alpha, [c, h1](double t) { return c * h1(t); }};
}

struct WaveValue {
    double value = 0.0;
    double est_error = 0.0;
};

namespace detail {

// source described only by its distance from the evaluation point
struct SourceGeom {
    double D;
    double radius;
    std::function<double(double)> value_of_dist;  // already includes amplitudes
};

// V(t) = int_{d(x,z')<t} f(x) dmu / sqrt(cosh^2 t - cosh^2 d(x,z'))
// after u^2 = cosh^2 t - cosh^2 r the integrand is
//   mean_f(r(u)) vol(S^{2n-1}) sinh^{2n-2} r(u),  regular in u.
inline WaveValue wave_inner_integral(int n, const std::vector<SourceGeom>& sources,
                                     double t, double tol, int budget) {
    WaveValue out;
    if (t <= 0.0) return out;
    const double cht = std::cosh(t);
    const double volS = sphere_volume(n);
    for (const SourceGeom& s : sources) {
        const double rlo = std::max(0.0, s.D - s.radius);
        const double rhi = std::min(t, s.D + s.radius);
        if (rhi <= rlo) continue;
        const double uhi = std::sqrt(std::max(0.0, (cht - std::cosh(rlo)) * (cht + std::cosh(rlo))));
        const double ulo = std::sqrt(std::max(0.0, (cht - std::cosh(rhi)) * (cht + std::cosh(rhi))));
        if (uhi <= ulo + 1e-300) continue;
        // sinh^{2n-2} r = (cosh^2 r - 1)^{n-1}
        auto integrand = [&](double u) {
            const double c2 = std::max(1.0, cht * cht - u * u);
            const double r = std::acosh(std::sqrt(c2));
            const double mean =
                sphere_mean_radial(n, r, s.D, s.value_of_dist, s.radius);
            if (mean == 0.0) return 0.0;
            return mean * volS * std::pow(c2 - 1.0, n - 1);
        };
        QuadResult q = integrate_1d(integrand, ulo, uhi, tol, EndpointSingularity::none,
                                    budget);
        out.value += q.value;
        out.est_error += q.est_error;
    }
    return out;
}

inline WaveValue wave_solution_geom(int n, const std::vector<SourceGeom>& sources, double t,
                                    const WaveConfig& cfg) {
    validate(cfg);
    if (!(t > 0.0)) throw std::invalid_argument("wave_solution: t > 0 required");
    const double inner_tol = cfg.tol * 1e-2;
    const double norm = std::pow(2.0 * kPi, -n);
    if (n == 1) {
        WaveValue v = wave_inner_integral(n, sources, t, inner_tol, cfg.radial_quad_points);
        return {norm * v.value, norm * v.est_error};
    }
    // u = (2 pi)^{-n} (d/dy)^{n-1} V, y = cosh t; V vanishes for y <= 1.
    auto Vy = [&](double y) {
        if (y <= 1.0) return 0.0;
        return wave_inner_integral(n, sources, std::acosh(y), inner_tol,
                                   cfg.radial_quad_points)
            .value;
    };
    double est = 0.0;
    const double y0 = std::cosh(t);
    const double val =
        richardson_derivative(Vy, y0, n - 1, 1e-2, cfg.richardson_levels, &est);
    return {norm * val, norm * (est + 2.0 * inner_tol)};
}

}  // namespace detail

// u(t,z') for explicit initial data; finite propagation speed gives exact 0
// when the ball of radius t about z' misses every source support.
inline WaveValue wave_solution(int n, const WaveInitialData& f, double t,
                               const BallPoint& zprime, const WaveConfig& cfg = {}) {
    std::vector<detail::SourceGeom> geoms;
    geoms.reserve(f.sources.size());
    for (const RadialSource& s : f.sources) {
        if (s.center.dim() != n || zprime.dim() != n)
            throw std::invalid_argument("wave_solution: dimension mismatch");
        auto value_of_dist = [profile = s.profile, rad = s.radius](double d) {
            return d < rad ? profile(d / rad) : 0.0;
        };
        geoms.push_back({distance(zprime, s.center), s.radius, std::move(value_of_dist)});
    }
    return detail::wave_solution_geom(n, geoms, t, cfg);
}

// I(T,z,z',alpha) via the wave representation
//   c_n cosh^{1/2} T int_0^T (cosh T - cosh t)^{n-3/2}
//       F(-1/2,3/2,n-1/2,(coshT-cosht)/(2coshT)) sinh t u(t,z') dt,
// c_n = pi^{n-1/2} 2^{n+1/2} / Gamma(n-1/2), with automorphic initial data
// f = sum over gamma of h(gamma^{-1} x) truncated to supports meeting the
// ball of radius T about z'.  The integral is taken in v = sqrt(coshT - y),
// which removes the n=1 endpoint singularity and the odd half-powers.
inline AveragedCount averaged_count_wave(const GroupSpec& spec, const BumpProfile& B,
                                         const BallPoint& zprime, double T,
                                         const WaveConfig& cfg = {}) {
    validate(cfg);
    AveragedCount out;
    const int n = B.n;
    OrbitResult orbit = enumerate_orbit(spec, B.center, zprime, T + B.alpha);
    out.truncated = orbit.truncated;

    std::vector<detail::SourceGeom> geoms;
    const double amp = B.c_alpha;
    auto h1 = B.h1;
    auto value_of_scaled = [amp, h1, a = B.alpha](double d) {
        return d < a ? amp * h1(d / a) : 0.0;
    };
    for (const OrbitElement& e : orbit.elements)
        if (e.dist < T + B.alpha)
            geoms.push_back({e.dist, B.alpha, value_of_scaled});
    if (geoms.empty()) return out;

    const double cn = std::pow(kPi, double(n) - 0.5) * std::pow(2.0, double(n) + 0.5) /
                      std::tgamma(double(n) - 0.5);
    const double Y = std::cosh(T);
    const HypParams p(-0.5, 1.5, double(n) - 0.5);
    double est_u = 0.0;
    auto outer = [&](double v) {
        const double y = Y - v * v;
        if (y <= 1.0) return 0.0;
        const double t = std::acosh(y);
        WaveValue u = detail::wave_solution_geom(n, geoms, t, cfg);
        est_u = std::max(est_u, u.est_error);
        return 2.0 * std::pow(v, 2 * n - 2) *
               gauss_2f1(p, cxd(v * v / (2.0 * Y))).value.real() * u.value;
    };
    QuadResult q = integrate_1d(outer, 0.0, std::sqrt(Y - 1.0), cfg.tol * 0.3,
                                EndpointSingularity::none, cfg.t_quad_points);
    out.value = cn * std::sqrt(Y) * q.value;
    out.est_error = cn * std::sqrt(Y) * (q.est_error + est_u * std::sqrt(Y - 1.0));
    return out;
}

}  // namespace chball
