#pragma once

// JSON wire formats.
//
// Group spec:
//   {"n": 1, "generators": [[[re,im], ...], ...],      // row-major (n+1)^2 pairs
//    "include_inverses": true, "max_word_length": 64,
//    "dedup_tol": 1e-9, "prune_margin": -1}            // optional
//
// Spectral data:
//   {"covolume": 0.2618,
//    "entries": [{"lambda": -1.0, "phi": {"kind": "constant"}},
//                {"lambda": -0.5, "phi": {"kind": "table",
//                                         "points": [[[re,im], ...], ...],
//                                         "values": [..]}}]}
// "constant" means phi = 1/sqrt(covolume); "table" interpolates by inverse
// squared distance over the listed sample points.

#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "chball/ball_model.hpp"
#include "chball/lattice.hpp"
#include "chball/spectral.hpp"

namespace chball {

using nlohmann::json;

inline Eigen::MatrixXcd matrix_from_json(const json& rows, int n) {
    const int d = n + 1;
    if (!rows.is_array() || int(rows.size()) != d * d)
        throw std::invalid_argument("generator: expected " + std::to_string(d * d) +
                                    " [re,im] pairs (row-major)");
    Eigen::MatrixXcd g(d, d);
    for (int i = 0; i < d * d; ++i) {
        const json& p = rows[size_t(i)];
        if (!p.is_array() || p.size() != 2)
            throw std::invalid_argument("generator entry: expected [re, im]");
        g(i / d, i % d) = cxd(p[0].get<double>(), p[1].get<double>());
    }
    return g;
}

inline json matrix_to_json(const Eigen::MatrixXcd& g) {
    json rows = json::array();
    for (int i = 0; i < g.rows(); ++i)
        for (int j = 0; j < g.cols(); ++j)
            rows.push_back({g(i, j).real(), g(i, j).imag()});
    return rows;
}

inline GroupSpec group_spec_from_json(const json& j) {
    GroupSpec spec;
    spec.n = j.at("n").get<int>();
    if (spec.n < 1) throw std::invalid_argument("group spec: n >= 1 required");
    for (const json& g : j.at("generators"))
        spec.generators.emplace_back(matrix_from_json(g, spec.n));  // validates the form
    spec.include_inverses = j.value("include_inverses", true);
    spec.max_word_length = j.value("max_word_length", 64);
    spec.dedup_tol = j.value("dedup_tol", 1e-9);
    spec.prune_margin = j.value("prune_margin", -1.0);
    if (spec.max_word_length < 1)
        throw std::invalid_argument("group spec: max_word_length >= 1 required");
    if (!(spec.dedup_tol > 0.0))
        throw std::invalid_argument("group spec: dedup_tol > 0 required");
    return spec;
}

inline json group_spec_to_json(const GroupSpec& spec) {
    json j;
    j["n"] = spec.n;
    j["generators"] = json::array();
    for (const Isometry& g : spec.generators) j["generators"].push_back(matrix_to_json(g.matrix()));
    j["include_inverses"] = spec.include_inverses;
    j["max_word_length"] = spec.max_word_length;
    j["dedup_tol"] = spec.dedup_tol;
    j["prune_margin"] = spec.prune_margin;
    return j;
}

inline GroupSpec load_group_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open group file: " + path);
    json j;
    in >> j;
    return group_spec_from_json(j);
}

inline SpectralData spectral_data_from_json(const json& j, int n) {
    SpectralData S;
    if (j.contains("covolume")) S.covolume = j.at("covolume").get<double>();
    for (const json& e : j.at("entries")) {
        SpectralEntry entry;
        entry.lambda = e.at("lambda").get<double>();
        const json& phi = e.at("phi");
        const std::string kind = phi.at("kind").get<std::string>();
        if (kind == "constant") {
            if (!S.covolume)
                throw std::invalid_argument("spectral data: constant phi requires covolume");
            const double v = 1.0 / std::sqrt(*S.covolume);
            entry.phi = [v](const BallPoint&) { return v; };
        } else if (kind == "table") {
            auto pts = std::make_shared<std::vector<BallPoint>>();
            auto vals = std::make_shared<std::vector<double>>(
                phi.at("values").get<std::vector<double>>());
            for (const json& pt : phi.at("points")) {
                std::vector<cxd> coords;
                for (const json& c : pt) coords.emplace_back(c[0].get<double>(), c[1].get<double>());
                if (int(coords.size()) != n)
                    throw std::invalid_argument("spectral table point: wrong dimension");
                pts->emplace_back(std::move(coords));
            }
            if (pts->empty() || pts->size() != vals->size())
                throw std::invalid_argument("spectral table: points/values size mismatch");
            entry.phi = [pts, vals](const BallPoint& x) {
                double wsum = 0.0, acc = 0.0;
                for (size_t i = 0; i < pts->size(); ++i) {
                    const double d = distance(x, (*pts)[i]);
                    if (d < 1e-12) return (*vals)[i];
                    const double w = 1.0 / (d * d);
                    wsum += w;
                    acc += w * (*vals)[i];
                }
                return acc / wsum;
            };
        } else {
            throw std::invalid_argument("spectral phi kind must be constant|table");
        }
        S.entries.push_back(std::move(entry));
    }
    validate_spectral(S, n);
    return S;
}

inline SpectralData load_spectral_data(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spectral file: " + path);
    json j;
    in >> j;
    return spectral_data_from_json(j, n);
}

// "re,im,re,im,..." (2n reals) -> BallPoint
inline BallPoint parse_ball_point(const std::string& s, int n) {
    std::vector<double> vals;
    std::string tok;
    for (char ch : s + ",") {
        if (ch == ',') {
            if (!tok.empty()) vals.push_back(std::stod(tok));
            tok.clear();
        } else {
            tok += ch;
        }
    }
    if (int(vals.size()) != 2 * n)
        throw std::invalid_argument("point: expected " + std::to_string(2 * n) +
                                    " comma-separated reals (re,im per coordinate)");
    std::vector<cxd> coords(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) coords[size_t(i)] = cxd(vals[size_t(2 * i)], vals[size_t(2 * i + 1)]);
    return BallPoint(std::move(coords));
}

}  // namespace chball
