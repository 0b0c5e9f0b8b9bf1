#pragma once

// Identity battery behind the `verify` subcommand: each item evaluates both
// sides of one of the identities the library is built on over a fixed grid
// and reports the worst residual against its threshold.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "chball/bump.hpp"
#include "chball/hypergeometric.hpp"
#include "chball/quadrature.hpp"
#include "chball/spectral.hpp"
#include "chball/wave.hpp"

namespace chball {

struct VerifyItem {
    std::string name;
    double max_residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    // scales the closed-form kernel constant; != 1 is a deliberate fault
    // injection used by the tests to prove the battery can fail
    double kernel_constant_scale = 1.0;
    unsigned seed = 20240901;
};

inline std::vector<VerifyItem> run_verify_battery(const VerifyOptions& opt = {}) {
    std::vector<VerifyItem> items;

    {  // iterated-derivative kernel vs closed form
        VerifyItem it{"kernel-identity", 0.0, 1e-5, false, ""};
        for (int n = 1; n <= 4; ++n)
            for (double T : {1.0, 2.2, 3.4})
                for (double frac : {0.2, 0.5, 0.8}) {
                    const double t = 0.2 + frac * (T - 0.4);
                    const double closed =
                        opt.kernel_constant_scale * kernel_K_closed(n, T, t);
                    const double defining = kernel_K_defining(n, T, t);
                    it.max_residual = std::max(
                        it.max_residual, std::abs(defining - closed) / std::abs(closed));
                }
        it.pass = it.max_residual <= it.threshold;
        items.push_back(it);
    }

    {  // H_n closed form vs integral representation
        VerifyItem it{"hn-integral-representation", 0.0, 1e-6, false, ""};
        for (int n = 1; n <= 3; ++n)
            for (double lam : {0.0, 1.0, 4.0, 25.0})
                for (double T : {0.5, 1.0, 2.0}) {
                    const double closed = H_n_closed(n, lam, T);
                    const double quad = H_n_quadrature(n, lam, T);
                    it.max_residual =
                        std::max(it.max_residual, std::abs(closed - quad) /
                                                      std::max(std::abs(closed), 1e-30));
                }
        it.pass = it.max_residual <= it.threshold;
        items.push_back(it);
    }

    {  // alpha^{2n} c_n(alpha) -> 1, monotonically
        VerifyItem it{"bump-normalization-limit", 0.0, 1e-2, false, ""};
        bool monotone = true;
        for (int n = 1; n <= 2; ++n) {
            double prev = 1e9;
            for (double alpha : {0.2, 0.1, 0.05, 0.025}) {
                const double c = bump_normalization(n, alpha, default_cap_profile(n));
                const double dev = std::abs(std::pow(alpha, 2 * n) * c - 1.0);
                if (dev > prev) monotone = false;
                prev = dev;
            }
            it.max_residual = std::max(it.max_residual, prev);  // deviation at 0.025
        }
        it.pass = monotone && it.max_residual <= it.threshold;
        if (!monotone) it.detail = "deviation not monotone in alpha";
        items.push_back(it);
    }

    {  // closed-form ball volume vs polar product quadrature
        VerifyItem it{"volume-consistency", 0.0, 1e-6, false, ""};
        for (int n = 1; n <= 2; ++n)
            for (double T : {0.5, 1.0, 2.0}) {
                const double closed = volume_ball(n, T);
                const QuadResult q = integrate_ball(
                    [](const BallPoint&) { return 1.0; }, BallPoint::origin(n), T, n, 1e-10);
                it.max_residual = std::max(it.max_residual,
                                           std::abs(q.value - closed) / closed);
            }
        it.pass = it.max_residual <= it.threshold;
        items.push_back(it);
    }

    {  // connection formula against the direct series in the overlap region
        VerifyItem it{"connection-overlap", 0.0, 1e-8, false, ""};
        std::mt19937 rng(opt.seed);
        std::uniform_real_distribution<double> Uab(-3.0, 3.0), Uc(0.5, 5.0), Ux(-0.9, -0.1);
        int done = 0;
        while (done < 200) {
            const double a = Uab(rng), b = Uab(rng), c = Uc(rng), x = Ux(rng);
            if (std::abs(a - b - std::round(a - b)) < 0.05) continue;  // keep clear of the degenerate set
            if (is_nonpositive_integer(cxd(a)) || is_nonpositive_integer(cxd(b))) continue;
            const HypParams p{cxd(a), cxd(b), cxd(c)};
            const cxd direct = detail::series_2f1(a, b, c, x).value;
            const cxd conn = gauss_2f1_neg_axis(p, x).value;
            it.max_residual =
                std::max(it.max_residual,
                         std::abs(direct - conn) / std::max(std::abs(direct), 1e-30));
            ++done;
        }
        it.pass = it.max_residual <= it.threshold;
        items.push_back(it);
    }

    return items;
}

}  // namespace chball
