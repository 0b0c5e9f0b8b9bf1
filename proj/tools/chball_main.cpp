// chball: lattice-point counts in complex hyperbolic space, their smoothed
// averages via the direct and wave routes, spectral main terms, and the
// identity battery.
//
// Exit codes: 0 success, 1 numerical-contract failure, 2 usage/input error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chball/chball.hpp"

namespace {

using namespace chball;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

struct Table {
    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void write(const std::string& path, const std::string& format) const {
        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!path.empty()) {
            file.open(path);
            if (!file) throw std::invalid_argument("cannot open output file: " + path);
            os = &file;
        }
        if (format == "json") {
            json j;
            j["command"] = command;
            j["columns"] = columns;
            j["rows"] = json::array();
            for (const auto& r : rows) {
                json row = json::object();
                for (size_t i = 0; i < columns.size(); ++i) row[columns[i]] = r[i];
                j["rows"].push_back(row);
            }
            *os << j.dump(2) << "\n";
        } else {
            *os << "# chball " << command << " v1\n";
            for (size_t i = 0; i < columns.size(); ++i)
                *os << columns[i] << (i + 1 < columns.size() ? "," : "\n");
            for (const auto& r : rows)
                for (size_t i = 0; i < r.size(); ++i)
                    *os << r[i] << (i + 1 < r.size() ? "," : "\n");
        }
    }
};

struct CommonOpts {
    std::string group_file;
    std::string z_str = "";
    std::string zp_str = "";
    std::vector<double> T_grid;
    std::string output;
    std::string format = "csv";
    int workers = 1;
    int max_word_length = 0;  // 0: keep file value
};

GroupSpec load_group(const CommonOpts& c) {
    GroupSpec spec = load_group_spec(c.group_file);
    spec.workers = c.workers;
    if (c.max_word_length > 0) spec.max_word_length = c.max_word_length;
    return spec;
}

BallPoint point_or_origin(const std::string& s, int n) {
    if (s.empty()) return BallPoint::origin(n);
    return parse_ball_point(s, n);
}

void check_grid(const std::vector<double>& T) {
    if (T.empty()) throw std::invalid_argument("at least one --T value is required");
    for (size_t i = 1; i < T.size(); ++i)
        if (!(T[i] > T[i - 1]))
            throw std::invalid_argument("--T grid must be strictly ascending");
}

int cmd_count(const CommonOpts& c) {
    check_grid(c.T_grid);
    const GroupSpec spec = load_group(c);
    const BallPoint z = point_or_origin(c.z_str, spec.n);
    const BallPoint zp = point_or_origin(c.zp_str, spec.n);
    Table t{"count", {"T", "N", "words_expanded", "truncated"}, {}};
    bool any_truncated = false;
    for (double T : c.T_grid) {
        const CountResult r = count_lattice_points(spec, z, zp, T);
        any_truncated |= r.truncated;
        t.rows.push_back({fmt(T), std::to_string(r.count), std::to_string(r.words_expanded),
                          r.truncated ? "true" : "false"});
    }
    t.write(c.output, c.format);
    return any_truncated ? 1 : 0;
}

int cmd_average(const CommonOpts& c, double alpha, const WaveConfig& wcfg) {
    check_grid(c.T_grid);
    const GroupSpec spec = load_group(c);
    const BallPoint z = point_or_origin(c.z_str, spec.n);
    const BallPoint zp = point_or_origin(c.zp_str, spec.n);
    const BumpProfile bump = make_bump(spec.n, z, alpha);
    Table t{"average",
            {"T", "I_direct", "I_wave", "N_minus", "N_plus", "sandwich_ok", "I_direct_err",
             "I_wave_err"},
            {}};
    bool ok = true;
    for (double T : c.T_grid) {
        const AveragedCount direct = averaged_count_direct(spec, bump, zp, T);
        const AveragedCount wave = averaged_count_wave(spec, bump, zp, T, wcfg);
        const long nm = T > alpha ? count_lattice_points(spec, z, zp, T - alpha).count : 0;
        const long np = count_lattice_points(spec, z, zp, T + alpha).count;
        const double slack = 1e-6 + direct.est_error;
        const bool sandwich =
            double(nm) - slack <= direct.value && direct.value <= double(np) + slack;
        ok = ok && sandwich && !direct.truncated;
        t.rows.push_back({fmt(T), fmt(direct.value), fmt(wave.value), std::to_string(nm),
                          std::to_string(np), sandwich ? "true" : "false",
                          fmt(direct.est_error), fmt(wave.est_error)});
    }
    t.write(c.output, c.format);
    return ok ? 0 : 1;
}

int cmd_mainterm(const CommonOpts& c, const std::string& spectral_file) {
    check_grid(c.T_grid);
    const GroupSpec spec = load_group(c);
    const BallPoint z = point_or_origin(c.z_str, spec.n);
    const BallPoint zp = point_or_origin(c.zp_str, spec.n);
    const SpectralData S = load_spectral_data(spectral_file, spec.n);
    Table t{"mainterm", {"T", "N", "A", "ratio"}, {}};
    for (double T : c.T_grid) {
        const CountResult r = count_lattice_points(spec, z, zp, T);
        const MainTermResult a = main_term_A(S, spec.n, T, z, zp);
        if (a.excluded > 0)
            std::cerr << "warning: " << a.excluded
                      << " eigenvalue(s) outside the admissibility window were excluded\n";
        if (a.used == 0) std::cerr << "warning: no admissible eigenvalues; A = 0\n";
        const double ratio = a.value != 0.0 ? double(r.count) / a.value : 0.0;
        t.rows.push_back({fmt(T), std::to_string(r.count), fmt(a.value), fmt(ratio)});
    }
    t.write(c.output, c.format);
    return 0;
}

int cmd_volume(const CommonOpts& c, int n) {
    check_grid(c.T_grid);
    Table t{"volume", {"n", "T", "closed", "quadrature", "rel_err"}, {}};
    for (double T : c.T_grid) {
        const double closed = volume_ball(n, T);
        const QuadResult q = integrate_ball([](const BallPoint&) { return 1.0; },
                                            BallPoint::origin(n), T, n, 1e-10);
        t.rows.push_back({std::to_string(n), fmt(T), fmt(closed), fmt(q.value),
                          fmt(std::abs(q.value - closed) / closed)});
    }
    t.write(c.output, c.format);
    return 0;
}

int cmd_verify(const std::string& output) {
    const auto items = run_verify_battery();
    bool all = true;
    json summary;
    summary["items"] = json::array();
    for (const VerifyItem& it : items) {
        all = all && it.pass;
        std::printf("[%s] %-28s max residual %.3e (threshold %.0e)%s%s\n",
                    it.pass ? "PASS" : "FAIL", it.name.c_str(), it.max_residual,
                    it.threshold, it.detail.empty() ? "" : " - ", it.detail.c_str());
        summary["items"].push_back({{"name", it.name},
                                    {"pass", it.pass},
                                    {"max_residual", it.max_residual},
                                    {"threshold", it.threshold}});
    }
    summary["pass"] = all;
    if (!output.empty()) {
        std::ofstream f(output);
        if (!f) throw std::invalid_argument("cannot open output file: " + output);
        f << summary.dump(2) << "\n";
    }
    std::printf("%s\n", all ? "verify: all identities hold" : "verify: FAILURES present");
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lattice point counts and smoothed averages in complex hyperbolic space"};
    app.require_subcommand(1);

    CommonOpts c;
    double alpha = 0.05;
    int vol_n = 1;
    std::string spectral_file, verify_output;
    WaveConfig wcfg;

    auto add_common = [&](CLI::App* sub, bool needs_group) {
        if (needs_group)
            sub->add_option("--group", c.group_file, "group spec JSON")->required();
        sub->add_option("--z", c.z_str, "ball point, re,im per coordinate (default origin)");
        sub->add_option("--zp", c.zp_str, "second ball point (default origin)");
        sub->add_option("--T", c.T_grid, "radii, ascending")->delimiter(',');
        sub->add_option("--output", c.output, "output path (default stdout)");
        sub->add_option("--format", c.format, "csv|json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--workers", c.workers, "BFS worker threads")
            ->check(CLI::PositiveNumber);
        sub->add_option("--max-word-length", c.max_word_length,
                        "override the group file's word-length cap");
    };

    CLI::App* count = app.add_subcommand("count", "N(T,z,z') over a T grid");
    add_common(count, true);

    CLI::App* average = app.add_subcommand("average", "smoothed count, both routes");
    add_common(average, true);
    average->add_option("--alpha", alpha, "bump radius")->check(CLI::PositiveNumber);
    average->add_option("--wave-tol", wcfg.tol, "wave-route quadrature tolerance");
    average->add_option("--richardson-levels", wcfg.richardson_levels,
                        "extrapolation depth of the time derivative");
    average->add_option("--t-quad-points", wcfg.t_quad_points, "outer subdivision budget");
    average->add_option("--radial-quad-points", wcfg.radial_quad_points,
                        "inner subdivision budget");

    CLI::App* mainterm = app.add_subcommand("mainterm", "N against the spectral main term");
    add_common(mainterm, true);
    mainterm->add_option("--spectral", spectral_file, "spectral data JSON")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the identity battery");
    verify->add_option("--output", verify_output, "machine-readable JSON summary path");

    CLI::App* volume = app.add_subcommand("volume", "geodesic-ball volume cross-check");
    add_common(volume, false);
    volume->add_option("--n", vol_n, "complex dimension")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (count->parsed()) return cmd_count(c);
        if (average->parsed()) return cmd_average(c, alpha, wcfg);
        if (mainterm->parsed()) return cmd_mainterm(c, spectral_file);
        if (verify->parsed()) return cmd_verify(verify_output);
        if (volume->parsed()) return cmd_volume(c, vol_n);
    } catch (const json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
