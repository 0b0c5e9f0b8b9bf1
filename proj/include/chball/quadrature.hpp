#pragma once

// Shared numerical integration: adaptive Gauss-Kronrod 15(7) on an interval
// with declared inverse-square-root endpoint singularities removed by the
// u^2 substitution family, and product quadrature over geodesic balls
// (radial Gauss-Legendre against the exact sinh^{2n-1} r cosh r weight,
// spherical rules per dimension).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <queue>
#include <random>
#include <stdexcept>
#include <vector>

#include "chball/ball_model.hpp"

namespace chball {

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0;
    long evaluations = 0;
};

enum class EndpointSingularity { none, inv_sqrt_left, inv_sqrt_right, inv_sqrt_both };

namespace detail {

inline constexpr double kEpsQuad = 2.220446049250313e-16;

// Gauss-Kronrod 15(7) nodes and weights on [-1,1] (positive half).
inline constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b, value, err, resabs;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class Fn>
Panel gk15(Fn&& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    ++evals;
    double resk = kWgk[7] * fc, resg = kWg[3] * fc, resabs = kWgk[7] * std::abs(fc);
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double f1 = f(c - x), f2 = f(c + x);
        evals += 2;
        resk += kWgk[j] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * h;
    p.err = std::abs((resk - resg) * h);
    p.resabs = resabs * h;
    return p;
}

template <class Fn>
QuadResult adapt_gk(Fn&& f, double a, double b, double tol, int max_intervals) {
    QuadResult r;
    std::priority_queue<Panel> heap;
    Panel p0 = gk15(f, a, b, r.evaluations);
    double total = p0.value, toterr = p0.err, totabs = p0.resabs;
    heap.push(p0);
    int panels = 1;
    while (toterr > std::max(tol, 1e-15 * std::abs(total)) && panels < max_intervals) {
        Panel p = heap.top();
        heap.pop();
        const double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) {  // interval at rounding resolution
            heap.push(p);
            break;
        }
        Panel l = gk15(f, p.a, mid, r.evaluations);
        Panel rr = gk15(f, mid, p.b, r.evaluations);
        total += l.value + rr.value - p.value;
        toterr += l.err + rr.err - p.err;
        totabs += l.resabs + rr.resabs - p.resabs;
        heap.push(l);
        heap.push(rr);
        ++panels;
    }
    if (!std::isfinite(total) || !std::isfinite(toterr))
        throw std::runtime_error("integrate_1d: non-finite integrand");
    // exhausted budget with an estimate that is neither near tol nor small
    // against the value scale counts as failure to converge
    if (panels >= max_intervals &&
        toterr > std::max(1e3 * tol, 1e-3 * (std::abs(total) + 1e-300)))
        throw std::runtime_error("integrate_1d: subdivision limit exceeded");
    r.value = total;
    // rounding floor in the style of QUADPACK's resabs
    r.est_error = std::max(toterr, 50.0 * kEpsQuad * totabs);
    return r;
}

}  // namespace detail

// Adaptive integral of f over (a,b).  Declared endpoint singularities of
// inverse-square-root type are removed by substituting x = a + u^2 (resp.
// b - u^2) before subdivision; panel nodes never touch the endpoints.
inline QuadResult integrate_1d(const std::function<double(double)>& f, double a, double b,
                               double tol,
                               EndpointSingularity sing = EndpointSingularity::none,
                               int max_intervals = 4000) {
    if (!(a < b)) throw std::invalid_argument("integrate_1d: requires a < b");
    switch (sing) {
        case EndpointSingularity::none:
            return detail::adapt_gk(f, a, b, tol, max_intervals);
        case EndpointSingularity::inv_sqrt_left: {
            auto g = [&](double u) { return 2.0 * u * f(a + u * u); };
            return detail::adapt_gk(g, 0.0, std::sqrt(b - a), tol, max_intervals);
        }
        case EndpointSingularity::inv_sqrt_right: {
            auto g = [&](double u) { return 2.0 * u * f(b - u * u); };
            return detail::adapt_gk(g, 0.0, std::sqrt(b - a), tol, max_intervals);
        }
        case EndpointSingularity::inv_sqrt_both: {
            const double mid = 0.5 * (a + b);
            QuadResult left = integrate_1d(f, a, mid, 0.5 * tol,
                                           EndpointSingularity::inv_sqrt_left, max_intervals);
            QuadResult right = integrate_1d(f, mid, b, 0.5 * tol,
                                            EndpointSingularity::inv_sqrt_right, max_intervals);
            return {left.value + right.value, left.est_error + right.est_error,
                    left.evaluations + right.evaluations};
        }
    }
    throw std::logic_error("integrate_1d: unknown singularity mode");
}

// --------------------------------------------------------- Gauss-Legendre

// Nodes/weights on [-1,1], cached per order; Newton on the Legendre recurrence.
inline const std::vector<std::pair<double, double>>& gauss_legendre(int m) {
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(m);
    if (it != cache.end()) return it->second;
    std::vector<std::pair<double, double>> nw(static_cast<size_t>(m));
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (m + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        nw[size_t(i)] = {-x, w};
        nw[size_t(m - 1 - i)] = {x, w};
    }
    return cache.emplace(m, std::move(nw)).first->second;
}

// Nodes/weights for int_a^b f, mapped from [-1,1].
inline std::vector<std::pair<double, double>> gauss_legendre_ab(int m, double a, double b) {
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<size_t>(m));
    for (auto [x, w] : gauss_legendre(m))
        out.emplace_back(0.5 * (a + b) + 0.5 * (b - a) * x, 0.5 * (b - a) * w);
    return out;
}

// ------------------------------------------------------ spherical rules

// Quadrature on S^{2n-1} with total weight vol(S^{2n-1}).  n = 1 uses the
// exact circle rule; n = 2,3 flat product rules in the squared-modulus
// simplex coordinates (the measure is exactly (1/2^{n-1}) dv dphi there);
// n >= 4 falls back to seeded Monte Carlo.
struct SphereNode {
    std::vector<double> omega;  // 2n reals
    double weight;
};

inline std::vector<SphereNode> sphere_rule(int n, int level, std::uint64_t seed = 12345) {
    std::vector<SphereNode> nodes;
    if (n == 1) {
        const int M = 48 * (level + 1);
        nodes.reserve(static_cast<size_t>(M));
        for (int j = 0; j < M; ++j) {
            const double phi = 2.0 * kPi * j / M;
            nodes.push_back({{std::cos(phi), std::sin(phi)}, 2.0 * kPi / M});
        }
    } else if (n == 2) {
        const int mv = 8 * (level + 1), M = 12 * (level + 1);
        for (auto [v, wv] : gauss_legendre_ab(mv, 0.0, 1.0)) {
            const double r1 = std::sqrt(v), r2 = std::sqrt(1.0 - v);
            for (int j1 = 0; j1 < M; ++j1)
                for (int j2 = 0; j2 < M; ++j2) {
                    const double p1 = 2.0 * kPi * j1 / M, p2 = 2.0 * kPi * j2 / M;
                    nodes.push_back({{r1 * std::cos(p1), r1 * std::sin(p1),
                                      r2 * std::cos(p2), r2 * std::sin(p2)},
                                     0.5 * wv * (2.0 * kPi / M) * (2.0 * kPi / M)});
                }
        }
    } else if (n == 3) {
        const int mv = 5 * (level + 1), M = 8 * (level + 1);
        const auto gl = gauss_legendre_ab(mv, 0.0, 1.0);
        for (auto [xi, wxi] : gl)
            for (auto [eta, weta] : gl) {
                const double v1 = xi, v2 = (1.0 - xi) * eta, v3 = 1.0 - v1 - v2;
                const double jac = (1.0 - xi);
                const double r1 = std::sqrt(v1), r2 = std::sqrt(std::max(v2, 0.0)),
                             r3 = std::sqrt(std::max(v3, 0.0));
                const double wphi = 2.0 * kPi / M;
                for (int j1 = 0; j1 < M; ++j1)
                    for (int j2 = 0; j2 < M; ++j2)
                        for (int j3 = 0; j3 < M; ++j3) {
                            const double p1 = wphi * j1, p2 = wphi * j2, p3 = wphi * j3;
                            nodes.push_back(
                                {{r1 * std::cos(p1), r1 * std::sin(p1), r2 * std::cos(p2),
                                  r2 * std::sin(p2), r3 * std::cos(p3), r3 * std::sin(p3)},
                                 0.25 * wxi * weta * jac * wphi * wphi * wphi});
                        }
            }
    } else {
        const int N = 4000 * (level + 1) * (level + 1);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        const double w = sphere_volume(n) / N;
        for (int s = 0; s < N; ++s) {
            std::vector<double> v(static_cast<size_t>(2 * n));
            double nrm = 0.0;
            for (double& x : v) {
                x = gauss(rng);
                nrm += x * x;
            }
            nrm = std::sqrt(nrm);
            for (double& x : v) x /= nrm;
            nodes.push_back({std::move(v), w});
        }
    }
    return nodes;
}

// ------------------------------------------------------ ball integration

struct BallQuadOptions {
    int max_level = 3;
    int radial_base = 24;
    std::uint64_t mc_seed = 12345;
};

// int_{d(x,center)<T} f(x) dmu(x) by polar product quadrature about the
// center (moved there by a transvection), refined by level doubling until
// successive values agree to tol.
inline QuadResult integrate_ball(const std::function<double(const BallPoint&)>& f,
                                 const BallPoint& center, double T, int n, double tol,
                                 const BallQuadOptions& opt = {}) {
    if (!(T > 0.0)) throw std::invalid_argument("integrate_ball: T > 0 required");
    if (center.dim() != n) throw std::invalid_argument("integrate_ball: dimension mismatch");
    const bool centered = center.norm_sq() < 1e-300;
    const Isometry move = centered ? Isometry::identity(n) : transvection_to(center);

    QuadResult out;
    double prev = 0.0;
    bool have_prev = false;
    for (int level = 0; level <= opt.max_level; ++level) {
        const auto sphere = sphere_rule(n, level, opt.mc_seed);
        const auto radial = gauss_legendre_ab(opt.radial_base * (level + 1), 0.0, T);
        double acc = 0.0;
        for (auto [r, wr] : radial) {
            const double tr = std::tanh(r);
            const double wrad = wr * std::pow(std::sinh(r), 2 * n - 1) * std::cosh(r);
            double ring = 0.0;
            for (const auto& nd : sphere) {
                std::vector<cxd> zc(static_cast<size_t>(n));
                for (int j = 0; j < n; ++j)
                    zc[size_t(j)] =
                        cxd(tr * nd.omega[size_t(2 * j)], tr * nd.omega[size_t(2 * j + 1)]);
                BallPoint x(std::move(zc));
                ring += nd.weight * f(centered ? x : apply_isometry(move, x));
            }
            acc += wrad * ring;
            out.evaluations += long(sphere.size());
        }
        if (have_prev) {
            out.est_error = std::abs(acc - prev);
            out.value = acc;
            if (out.est_error <= std::max(tol, 1e-15 * std::abs(acc))) return out;
        }
        prev = acc;
        have_prev = true;
        out.value = acc;
    }
    return out;  // est_error carries the last refinement difference
}

}  // namespace chball
