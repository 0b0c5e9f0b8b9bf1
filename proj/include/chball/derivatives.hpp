#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace chball {

// m-th derivative by the order-2 central stencil with step h.
// Offsets are (m/2 - j) h, so odd m uses half-integer steps.
template <class Fn>
auto central_difference(Fn&& f, double x, int m, double h) -> decltype(f(x)) {
    using T = decltype(f(x));
    if (m == 0) return f(x);
    T acc = T(0);
    double sign = 1.0, binom = 1.0;
    for (int j = 0; j <= m; ++j) {
        acc += sign * binom * f(x + (0.5 * m - j) * h);
        sign = -sign;
        binom = binom * double(m - j) / double(j + 1);
    }
    double hm = 1.0;
    for (int i = 0; i < m; ++i) hm *= h;
    return acc / hm;
}

// Richardson extrapolation of the central stencil over steps h0, h0/2, ...
// The error expansion is in h^2, so column j cancels through h^{2j}.
// est_out (optional) receives the difference of the last two diagonal entries.
template <class Fn>
auto richardson_derivative(Fn&& f, double x, int m, double h0, int levels = 3,
                           double* est_out = nullptr) -> decltype(f(x)) {
    using T = decltype(f(x));
    if (levels < 1) throw std::invalid_argument("richardson_derivative: levels >= 1");
    if (!(h0 > 0.0)) throw std::invalid_argument("richardson_derivative: h0 > 0");
    std::vector<std::vector<T>> R(levels);
    double h = h0;
    for (int i = 0; i < levels; ++i, h *= 0.5) {
        R[i].resize(i + 1);
        R[i][0] = central_difference(f, x, m, h);
        double pow4 = 1.0;
        for (int j = 1; j <= i; ++j) {
            pow4 *= 4.0;
            R[i][j] = (pow4 * R[i][j - 1] - R[i - 1][j - 1]) / (pow4 - 1.0);
        }
    }
    if (est_out) {
        if (levels == 1)
            *est_out = std::abs(R[0][0]) * 1e-8;
        else
            *est_out = std::abs(R[levels - 1][levels - 1] - R[levels - 1][levels - 2]);
    }
    return R[levels - 1][levels - 1];
}

}  // namespace chball
