// Acceptance suite: each numbered criterion runs at its stated tolerance and
// reports one pass/fail line.  Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chball/chball.hpp"

using namespace chball;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

std::string fmt(double v, const char* f = "%.3g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

GroupSpec trivial_group() {
    GroupSpec spec;
    spec.n = 1;
    return spec;
}

GroupSpec cyclic_group(double ell = 0.5) {
    GroupSpec spec;
    spec.n = 1;
    spec.generators.push_back(make_loxodromic(1, ell));
    return spec;
}

GroupSpec pingpong_group() {
    GroupSpec spec;
    spec.n = 1;
    const Isometry a = make_loxodromic(1, 2.0);
    const Isometry t = transvection_to(BallPoint({cxd(0.0, 0.6)}));
    spec.generators.push_back(a);
    spec.generators.push_back(t * a * t.inverse());
    return spec;
}

GroupSpec modular_group() {
    GroupSpec spec;
    spec.n = 1;
    spec.generators.push_back(fuchsian_embed(0.0, -1.0, 1.0, 0.0));  // S
    spec.generators.push_back(fuchsian_embed(1.0, 1.0, 0.0, 1.0));   // T
    spec.max_word_length = 300;
    return spec;
}

// ---------------------------------------------------------------- criteria

// 1. kernel identity: defining (iterated derivative) vs closed form
Outcome criterion_kernel_identity() {
    double worst = 0.0;
    int worst_n = 0;
    for (int n = 1; n <= 4; ++n) {
        const double tol = n <= 2 ? 1e-6 : 1e-5;
        double max_rel = 0.0;
        for (double T : {1.0, 1.75, 2.5, 3.25, 4.0}) {
            for (double frac : {0.2, 0.4, 0.6, 0.8}) {
                const double t = 0.2 + frac * (T - 0.4);
                const double closed = kernel_K_closed(n, T, t);
                const double defined = kernel_K_defining(n, T, t);
                max_rel = std::max(max_rel, std::abs(defined - closed) / std::abs(closed));
            }
        }
        if (max_rel / tol > worst) {
            worst = max_rel / tol;
            worst_n = n;
        }
    }
    return {worst <= 1.0, "worst residual/tolerance " + fmt(worst) + " at n=" +
                              std::to_string(worst_n) + " (20 (T,t) pairs per n)"};
}

// 2. H_n closed form vs integral representation
Outcome criterion_hn_representation() {
    double max_rel = 0.0;
    for (int n : {1, 2, 3})
        for (double lam : {0.0, 1.0, 4.0, 25.0})
            for (double T : {0.5, 1.0, 2.0}) {
                const double closed = H_n_closed(n, lam, T);
                const double quad = H_n_quadrature(n, lam, T);
                max_rel = std::max(max_rel, std::abs(closed - quad) /
                                                std::max(std::abs(closed), 1e-30));
            }
    return {max_rel <= 1e-6, "max relative difference " + fmt(max_rel) + " (limit 1e-6)"};
}

// 3. bump normalization limit
Outcome criterion_normalization() {
    bool ok = true;
    double final_dev = 0.0;
    for (int n : {1, 2}) {
        double prev = 1e9;
        for (double alpha : {0.2, 0.1, 0.05, 0.025}) {
            const double dev =
                std::abs(std::pow(alpha, 2 * n) *
                             bump_normalization(n, alpha, default_cap_profile(n)) -
                         1.0);
            if (dev >= prev) ok = false;
            prev = dev;
        }
        final_dev = std::max(final_dev, prev);
        if (prev > 0.01) ok = false;
    }
    return {ok, "monotone in alpha; |alpha^{2n} c_n - 1| at 0.025 = " + fmt(final_dev) +
                    " (limit 0.01)"};
}

// 4. volume consistency
Outcome criterion_volume() {
    double max_rel = 0.0;
    for (int n : {1, 2})
        for (double T : {0.5, 1.0, 2.0}) {
            const QuadResult q = integrate_ball([](const BallPoint&) { return 1.0; },
                                                BallPoint::origin(n), T, n, 1e-10);
            max_rel = std::max(max_rel, std::abs(q.value - volume_ball(n, T)) /
                                            volume_ball(n, T));
        }
    return {max_rel <= 1e-6, "max relative difference " + fmt(max_rel) + " (limit 1e-6)"};
}

std::vector<double> t_grid20() {
    std::vector<double> grid;
    for (int i = 0; i < 20; ++i) grid.push_back(0.5 + 3.5 * i / 19.0);
    return grid;
}

// 5. sandwich N(T-a) <= I <= N(T+a), with I = N at shell-free radii
Outcome criterion_sandwich() {
    const double alpha = 0.05;
    const BallPoint o = BallPoint::origin(1);
    int equality_checks = 0;
    for (const GroupSpec& spec : {trivial_group(), cyclic_group(), pingpong_group()}) {
        const BumpProfile B = make_bump(1, o, alpha);
        std::set<double> shells;
        for (const OrbitElement& e : enumerate_orbit(spec, o, 4.3).elements)
            shells.insert(e.dist);
        for (double T : t_grid20()) {
            const AveragedCount I = averaged_count_direct(spec, B, o, T);
            const long Nm = count_lattice_points(spec, o, o, T - alpha).count;
            const long Np = count_lattice_points(spec, o, o, T + alpha).count;
            if (I.truncated) return {false, "orbit enumeration truncated"};
            if (!(double(Nm) <= I.value + 1e-9 && I.value <= double(Np) + 1e-9))
                return {false, "sandwich violated at T=" + fmt(T) + ": N-=" +
                                   std::to_string(Nm) + " I=" + fmt(I.value, "%.9g") +
                                   " N+=" + std::to_string(Np)};
            double min_gap = 1e9;
            for (double d : shells) min_gap = std::min(min_gap, std::abs(d - T));
            if (min_gap > alpha + 1e-9) {
                const long N = count_lattice_points(spec, o, o, T).count;
                ++equality_checks;
                if (std::abs(I.value - double(N)) > 1e-6)
                    return {false, "I != N at shell-free T=" + fmt(T) + " (|diff|=" +
                                       fmt(std::abs(I.value - double(N))) + ")"};
            }
        }
    }
    return {true, "3 groups x 20 radii; I = N verified at " +
                      std::to_string(equality_checks) + " shell-free radii"};
}

// 6. wave route equals direct route
Outcome criterion_route_equality() {
    const double alpha = 0.05;
    const BallPoint o = BallPoint::origin(1);
    WaveConfig cfg;
    cfg.tol = 1e-5;
    double worst1 = 0.0;
    for (const GroupSpec& spec : {trivial_group(), cyclic_group(), pingpong_group()}) {
        const BumpProfile B = make_bump(1, o, alpha);
        for (double T : t_grid20()) {
            const AveragedCount direct = averaged_count_direct(spec, B, o, T);
            const AveragedCount wave = averaged_count_wave(spec, B, o, T, cfg);
            worst1 = std::max(worst1, std::abs(wave.value - direct.value));
        }
    }
    if (worst1 > 1e-3)
        return {false, "n=1 worst |I_wave - I_direct| = " + fmt(worst1) + " (limit 1e-3)"};

    // one n=2 configuration, trivial group
    GroupSpec spec2;
    spec2.n = 2;
    const BumpProfile B2 = make_bump(2, BallPoint::origin(2), 0.2);
    const BallPoint zp2({cxd(0.15, 0.05), cxd(0.0, 0.1)});
    WaveConfig cfg2;
    cfg2.tol = 1e-5;
    const AveragedCount d2 = averaged_count_direct(spec2, B2, zp2, 1.2);
    const AveragedCount w2 = averaged_count_wave(spec2, B2, zp2, 1.2, cfg2);
    const double gap2 = std::abs(w2.value - d2.value);
    if (gap2 > 1e-2)
        return {false, "n=2 |I_wave - I_direct| = " + fmt(gap2) + " (limit 1e-2)"};
    return {true, "n=1 worst gap " + fmt(worst1) + " (limit 1e-3); n=2 gap " + fmt(gap2) +
                      " (limit 1e-2)"};
}

// 7. growth of N against the spectral main term for the modular group
Outcome criterion_growth() {
    const GroupSpec spec = modular_group();
    const BallPoint o = BallPoint::origin(1);  // Cayley image of i
    const double V = kPi / 12.0;               // classical area pi/3, lengths halved
    SpectralData S;
    S.covolume = V;
    const double phi0 = 1.0 / std::sqrt(V);
    S.entries.push_back({-1.0, [phi0](const BallPoint&) { return phi0; }});

    std::string detail = "ratios:";
    double first_gap = 0.0, last_gap = 0.0, last_ratio = 0.0;
    for (double T : {3.0, 3.5, 4.0, 4.5}) {
        const CountResult c = count_lattice_points(spec, o, o, T);
        if (c.truncated) return {false, "modular enumeration truncated"};
        const double A = main_term_A(S, 1, T, o, o).value;
        const double ratio = double(c.count) / A;
        detail += " " + fmt(ratio, "%.4f");
        if (T == 3.0) first_gap = std::abs(ratio - 1.0);
        last_gap = std::abs(ratio - 1.0);
        last_ratio = ratio;
    }
    const bool in_window = last_ratio >= 0.7 && last_ratio <= 1.3;
    const bool toward_one = last_gap < first_gap;
    return {in_window && toward_one,
            detail + (in_window ? "" : " [outside 0.7..1.3]") +
                (toward_one ? " (|ratio-1| shrinks along the grid)"
                            : " [no approach toward 1]")};
}

// 8. hypergeometric engine contracts
Outcome criterion_hypgeo() {
    std::mt19937 rng(314159);
    std::uniform_real_distribution<double> Uab(-3.0, 3.0), Uc(0.5, 5.0), Ux(-0.9, -0.1);
    double worst_conn = 0.0;
    int done = 0;
    while (done < 200) {
        const double a = Uab(rng), b = Uab(rng), cc = Uc(rng), x = Ux(rng);
        if (std::abs(a - b - std::round(a - b)) < 0.05) continue;
        if (is_nonpositive_integer(cxd(a)) || is_nonpositive_integer(cxd(b))) continue;
        const cxd direct = detail::series_2f1(a, b, cc, x).value;
        const cxd conn = gauss_2f1_neg_axis(HypParams(a, b, cc), x).value;
        worst_conn = std::max(worst_conn, std::abs(direct - conn) /
                                              std::max(std::abs(direct), 1e-30));
        ++done;
    }
    if (worst_conn > 1e-8)
        return {false, "connection overlap residual " + fmt(worst_conn) + " (limit 1e-8)"};

    std::uniform_real_distribution<double> Ua2(-2.0, 2.0), Ub2(0.3, 3.0), Uz2(-5.0, 0.9);
    double worst_closed = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const double a = Ua2(rng), b = Ub2(rng), z = Uz2(rng);
        if (is_nonpositive_integer(cxd(a))) continue;
        const cxd got = gauss_2f1(HypParams(a, b, b), cxd(z)).value;
        const cxd want = std::pow(cxd(1.0 - z), cxd(-a));
        worst_closed =
            std::max(worst_closed, std::abs(got - want) / std::max(std::abs(want), 1e-30));
    }
    if (worst_closed > 1e-12)
        return {false, "F(a,b,b,z) residual " + fmt(worst_closed) + " (limit 1e-12)"};

    // derivative identity on the kernel parameter family: the kernel
    // reduction applies the first-derivative identity repeatedly, the
    // c parameter stepping down from n+1/2 by one each time
    double worst_deriv = 0.0;
    for (int n = 1; n <= 4; ++n)
        for (double c2 = n + 0.5; c2 >= 1.4; c2 -= 1.0)
            for (double y : {0.2, 0.35})
                worst_deriv = std::max(
                    worst_deriv,
                    derivative_identity_residual(HypParams(-0.5, 1.5, c2), 1, y));
    worst_deriv = std::max(worst_deriv,
                           derivative_identity_residual(HypParams(0.5, 1.5, 2.5), 1, 0.3));
    worst_deriv = std::max(worst_deriv,
                           derivative_identity_residual(HypParams(1.1, 0.4, 3.2), 2, 0.5));
    if (worst_deriv > 1e-6)
        return {false, "derivative-identity residual " + fmt(worst_deriv) + " (limit 1e-6)"};
    return {true, "connection " + fmt(worst_conn) + "; F(a,b,b,z) " + fmt(worst_closed) +
                      "; derivative identity " + fmt(worst_deriv)};
}

// 9. large-lambda decay trend of H_n
Outcome criterion_decay_trend() {
    const int n = 2;
    const double T = 2.0;
    double first = 0.0, worst = 0.0;
    std::string detail = "|H| lambda^{5/4}:";
    for (double lam : {25.0, 100.0, 400.0, 1600.0}) {
        const double b = std::abs(H_n_closed(n, lam, T)) * std::pow(lam, 0.25 * (2 * n + 1));
        detail += " " + fmt(b, "%.3g");
        if (first == 0.0) first = b;
        worst = std::max(worst, b);
    }
    return {worst <= 1.1 * first, detail + (worst <= 1.1 * first ? " (bounded)" : " [grows]")};
}

// 10. byte-identical CLI output across worker counts
Outcome criterion_determinism() {
    const std::string cli = CHBALL_CLI_PATH;
    const std::string dir = CHBALL_DATA_DIR;
    auto slurp = [](const std::string& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    auto run = [&](const std::string& args) {
        const int rc = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
        return WEXITSTATUS(rc);
    };
    for (const char* w : {"1", "4"}) {
        if (run("count --group " + dir + "/pingpong_n1.json --T 1,2,3,4 --workers " +
                std::string(w) + " --output /tmp/chball_acc_count_" + w + ".csv") != 0)
            return {false, "count run failed"};
        if (run("average --group " + dir + "/cyclic_n1.json --alpha 0.05 --T 0.7,1.3 "
                "--wave-tol 1e-5 --workers " +
                std::string(w) + " --output /tmp/chball_acc_avg_" + w + ".csv") != 0)
            return {false, "average run failed"};
    }
    const bool count_same =
        slurp("/tmp/chball_acc_count_1.csv") == slurp("/tmp/chball_acc_count_4.csv");
    const bool avg_same =
        slurp("/tmp/chball_acc_avg_1.csv") == slurp("/tmp/chball_acc_avg_4.csv");
    if (!count_same || !avg_same)
        return {false, std::string(count_same ? "" : "count differs ") +
                           (avg_same ? "" : "average differs")};
    return {true, "count and average outputs byte-identical for workers 1 vs 4"};
}

}  // namespace

int main() {
    struct Entry {
        int id;
        const char* label;
        Outcome (*fn)();
        double limit_seconds;  // 0 = no stated bound
    };
    const Entry entries[] = {
        {1, "wave kernel identity (defining vs closed)", criterion_kernel_identity, 10.0},
        {2, "H_n integral representation", criterion_hn_representation, 30.0},
        {3, "bump normalization limit", criterion_normalization, 0.0},
        {4, "geodesic ball volume consistency", criterion_volume, 0.0},
        {5, "sandwich inequality (direct route)", criterion_sandwich, 0.0},
        {6, "wave route / direct route equality", criterion_route_equality, 0.0},
        {7, "modular-group growth vs main term", criterion_growth, 300.0},
        {8, "hypergeometric engine contracts", criterion_hypgeo, 0.0},
        {9, "H_n large-lambda decay trend", criterion_decay_trend, 0.0},
        {10, "determinism across worker counts", criterion_determinism, 0.0},
    };
    int failures = 0;
    for (const Entry& e : entries) {
        const double t0 = now_seconds();
        Outcome o{false, "exception"};
        try {
            o = e.fn();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        const double dt = now_seconds() - t0;
        const bool in_time = e.limit_seconds <= 0.0 || dt < e.limit_seconds;
        const bool pass = o.pass && in_time;
        if (!pass) ++failures;
        std::printf("[%s] criterion %2d: %-42s %s [%.1f s%s]\n", pass ? "PASS" : "FAIL",
                    e.id, e.label, o.detail.c_str(), dt,
                    in_time ? "" : ", over the stated runtime limit");
        std::fflush(stdout);
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures;
}
