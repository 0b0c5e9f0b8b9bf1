#pragma once

// Discrete-group orbit enumeration and the raw counting function N(T,z,z').
//
// The breadth-first expansion runs over *group elements*: matrices are
// phase-canonicalized (the projective action is insensitive to a unit
// scalar) and deduplicated on a tolerance grid, so gamma and e^{i theta}
// gamma merge while distinct elements sharing an orbit point (a stabilizer
// coset) are both enumerated, exactly as the sum over gamma demands.
// Children are pruned once their orbit point leaves the requested ball
// plus a collar of twice the largest generator displacement.

#include <cmath>
#include <cstdint>
#include <functional>
#include <future>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "chball/ball_model.hpp"

namespace chball {

struct GroupSpec {
    int n = 1;
    std::vector<Isometry> generators;
    bool include_inverses = true;
    int max_word_length = 64;
    double dedup_tol = 1e-9;     // merge radius on canonical matrix entries
    double prune_margin = -1.0;  // < 0: auto (2 x max generator displacement)
    int workers = 1;
};

struct OrbitElement {
    std::vector<cxd> point;  // gamma . seed
    double dist = 0.0;       // d(center, gamma . seed)
    int word_length = 0;
};

struct OrbitResult {
    std::vector<OrbitElement> elements;
    long words_expanded = 0;
    long pruned = 0;
    bool truncated = false;
};

struct CountResult {
    long count = 0;
    long words_expanded = 0;
    long pruned = 0;
    bool truncated = false;
    long boundary_hits = 0;  // |d - T| <= 1e-12, counted as inside
};

namespace detail {

// distance from raw coordinates to a BallPoint, tolerant of points that sit
// outside the constructible ball (still strictly inside the unit ball)
inline double dist_coords(const std::vector<cxd>& z, double nz, const BallPoint& w) {
    cxd s = 0.0;
    double dzw = 0.0;
    for (int i = 0; i < w.dim(); ++i) {
        s += z[size_t(i)] * std::conj(w[i]);
        dzw += std::norm(z[size_t(i)] - w[i]);
    }
    const double num = std::max(0.0, dzw - (nz * w.norm_sq() - std::norm(s)));
    return std::asinh(std::sqrt(num / ((1.0 - nz) * (1.0 - w.norm_sq()))));
}

// phase canonicalization: divide by the phase of the largest-modulus entry
inline void canonical_flat(const Eigen::MatrixXcd& M, std::vector<double>& out) {
    int bi = 0, bj = 0;
    double best = -1.0;
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j)
            if (std::abs(M(i, j)) > best) {
                best = std::abs(M(i, j));
                bi = i;
                bj = j;
            }
    const cxd ph = M(bi, bj) / best;
    out.clear();
    out.reserve(size_t(2 * M.size()));
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) {
            const cxd v = M(i, j) / ph;
            out.push_back(v.real());
            out.push_back(v.imag());
        }
}

// tolerance-grid dedup set over flat real vectors
class FlatDedup {
  public:
    explicit FlatDedup(double tol) : tol_(tol) {}

    // inserts and returns true when no stored vector lies within tol (max norm)
    bool insert_if_new(const std::vector<double>& v) {
        std::vector<std::int64_t> key(v.size());
        std::vector<size_t> wobbly;  // dims whose rounding could straddle
        for (size_t d = 0; d < v.size(); ++d) {
            const double q = v[d] / tol_;
            key[d] = llround_safe(q);
            if (std::abs(q - std::floor(q) - 0.5) < 5e-3) wobbly.push_back(d);
        }
        // probe this key and the boundary-adjacent alternatives
        if (probe(key, v)) return false;
        const size_t combos = size_t(1) << std::min<size_t>(wobbly.size(), 12);
        for (size_t mask = 1; mask < combos; ++mask) {
            std::vector<std::int64_t> alt = key;
            for (size_t bit = 0; bit < wobbly.size() && bit < 12; ++bit)
                if (mask & (size_t(1) << bit)) {
                    const size_t d = wobbly[bit];
                    const double q = v[d] / tol_;
                    alt[d] = (q - std::floor(q) < 0.5) ? key[d] + 1 : key[d] - 1;
                }
            if (probe(alt, v)) return false;
        }
        store_.push_back(v);
        map_[hash_key(key)].push_back(int(store_.size()) - 1);
        return true;
    }

    size_t size() const { return store_.size(); }

  private:
    static std::int64_t llround_safe(double q) {
        return std::llround(std::max(-9.0e17, std::min(9.0e17, q)));
    }
    static std::uint64_t hash_key(const std::vector<std::int64_t>& key) {
        std::uint64_t h = 1469598103934665603ull;
        for (std::int64_t k : key) {
            h ^= std::uint64_t(k);
            h *= 1099511628211ull;
        }
        return h;
    }
    bool probe(const std::vector<std::int64_t>& key, const std::vector<double>& v) const {
        auto it = map_.find(hash_key(key));
        if (it == map_.end()) return false;
        for (int idx : it->second) {
            const std::vector<double>& w = store_[size_t(idx)];
            double m = 0.0;
            for (size_t d = 0; d < v.size(); ++d) m = std::max(m, std::abs(v[d] - w[d]));
            if (m <= tol_) return true;
        }
        return false;
    }

    double tol_;
    std::unordered_map<std::uint64_t, std::vector<int>> map_;
    std::vector<std::vector<double>> store_;
};

struct BfsNode {
    Eigen::MatrixXcd mat;
    std::vector<cxd> point;
    double dist;
    int last_gen;  // index into the expanded generator list, -1 for identity
};

struct Child {
    Eigen::MatrixXcd mat;
    std::vector<cxd> point;
    double dist;
    int last_gen;
    bool pruned;
};

}  // namespace detail

// Breadth-first enumeration of {gamma . seed} with pruning measured from
// `center`.  Deterministic for fixed spec regardless of worker count.
inline OrbitResult enumerate_orbit(const GroupSpec& spec, const BallPoint& seed,
                                   const BallPoint& center, double radius_bound) {
    if (!(radius_bound > 0.0))
        throw std::invalid_argument("enumerate_orbit: radius_bound > 0 required");
    if (spec.max_word_length < 1)
        throw std::invalid_argument("enumerate_orbit: max_word_length >= 1 required");
    const int n = spec.n;
    if (seed.dim() != n || center.dim() != n)
        throw std::invalid_argument("enumerate_orbit: dimension mismatch");

    std::vector<Eigen::MatrixXcd> gens;
    for (const Isometry& g : spec.generators) {
        if (g.dim() != n) throw std::invalid_argument("enumerate_orbit: generator dimension");
        gens.push_back(g.matrix());
    }
    const int ngen = int(gens.size());
    if (spec.include_inverses)
        for (int i = 0; i < ngen; ++i)
            gens.push_back(spec.generators[size_t(i)].inverse().matrix());
    auto inverse_index = [&](int i) {
        if (!spec.include_inverses || i < 0) return -1;
        return i < ngen ? i + ngen : i - ngen;
    };

    double margin = spec.prune_margin;
    if (margin < 0.0) {
        margin = 0.0;
        for (const Isometry& g : spec.generators)
            margin = std::max(margin, distance(seed, apply_isometry(g, seed)));
        margin *= 2.0;
    }
    const double bound = radius_bound + margin;

    OrbitResult out;
    detail::FlatDedup visited(spec.dedup_tol);
    std::vector<double> flat;

    detail::BfsNode root{Eigen::MatrixXcd::Identity(n + 1, n + 1),
                         seed.coords(), distance(center, seed), -1};
    detail::canonical_flat(root.mat, flat);
    visited.insert_if_new(flat);
    out.elements.push_back({root.point, root.dist, 0});

    std::vector<detail::BfsNode> frontier{root};
    const int workers = std::max(1, spec.workers);

    auto expand_range = [&](const std::vector<detail::BfsNode>& fr, size_t lo, size_t hi) {
        std::vector<detail::Child> kids;
        kids.reserve((hi - lo) * gens.size());
        for (size_t i = lo; i < hi; ++i) {
            const detail::BfsNode& nd = fr[i];
            const int skip = inverse_index(nd.last_gen);
            for (int gi = 0; gi < int(gens.size()); ++gi) {
                if (gi == skip) continue;
                detail::Child ch;
                ch.mat = nd.mat * gens[size_t(gi)];
                ch.last_gen = gi;
                // projective action on the seed
                Eigen::VectorXcd h(n + 1);
                for (int k = 0; k < n; ++k) h(k) = seed[k];
                h(n) = 1.0;
                Eigen::VectorXcd w = ch.mat * h;
                ch.point.resize(size_t(n));
                double nz = 0.0;
                for (int k = 0; k < n; ++k) {
                    ch.point[size_t(k)] = w(k) / w(n);
                    nz += std::norm(ch.point[size_t(k)]);
                }
                ch.pruned = false;
                if (nz > 1.0 - kPointTol) {
                    ch.pruned = true;  // beyond the representable ball, d > 14
                } else {
                    ch.dist = detail::dist_coords(ch.point, nz, center);
                    if (ch.dist > bound) ch.pruned = true;
                }
                kids.push_back(std::move(ch));
            }
        }
        return kids;
    };

    int level = 0;
    while (!frontier.empty() && level < spec.max_word_length) {
        ++level;
        out.words_expanded += long(frontier.size());
        std::vector<detail::Child> children;
        if (workers == 1 || frontier.size() < 64) {
            children = expand_range(frontier, 0, frontier.size());
        } else {
            std::vector<std::future<std::vector<detail::Child>>> futs;
            const size_t chunk = (frontier.size() + size_t(workers) - 1) / size_t(workers);
            for (size_t lo = 0; lo < frontier.size(); lo += chunk) {
                const size_t hi = std::min(frontier.size(), lo + chunk);
                futs.push_back(std::async(std::launch::async, expand_range,
                                          std::cref(frontier), lo, hi));
            }
            for (auto& f : futs) {
                auto part = f.get();
                children.insert(children.end(), std::make_move_iterator(part.begin()),
                                std::make_move_iterator(part.end()));
            }
        }
        std::vector<detail::BfsNode> next;
        for (detail::Child& ch : children) {
            if (ch.pruned) {
                ++out.pruned;
                continue;
            }
            detail::canonical_flat(ch.mat, flat);
            if (!visited.insert_if_new(flat)) continue;
            out.elements.push_back({ch.point, ch.dist, level});
            next.push_back({std::move(ch.mat), std::move(ch.point), ch.dist, ch.last_gen});
        }
        frontier = std::move(next);
    }
    out.truncated = !frontier.empty();
    return out;
}

inline OrbitResult enumerate_orbit(const GroupSpec& spec, const BallPoint& seed,
                                   double radius_bound) {
    return enumerate_orbit(spec, seed, seed, radius_bound);
}

// N(T,z,z') = #{gamma : d(z, gamma z') < T}, strict inequality; hits within
// 1e-12 of the boundary count as inside and are tallied separately.
inline CountResult count_lattice_points(const GroupSpec& spec, const BallPoint& z,
                                        const BallPoint& zprime, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("count_lattice_points: T > 0 required");
    OrbitResult orbit = enumerate_orbit(spec, zprime, z, T);
    CountResult r;
    r.words_expanded = orbit.words_expanded;
    r.pruned = orbit.pruned;
    r.truncated = orbit.truncated;
    for (const OrbitElement& e : orbit.elements) {
        if (e.dist < T - 1e-12) {
            ++r.count;
        } else if (e.dist <= T + 1e-12) {
            ++r.count;
            ++r.boundary_hits;
        }
    }
    return r;
}

// Upper-half-plane SL(2,R) action conjugated to the disk model by the
// Cayley map; for m = [[a,b],[c,d]], det 1, the image is
// [[A,B],[conj B, conj A]] with A = ((a+d) + (b-c)i)/2, B = ((a-d) - (b+c)i)/2.
inline Isometry fuchsian_embed(double a, double b, double c, double d) {
    if (std::abs(a * d - b * c - 1.0) > 1e-10)
        throw std::invalid_argument("fuchsian_embed: determinant must be 1");
    Eigen::MatrixXcd g(2, 2);
    const cxd A(0.5 * (a + d), 0.5 * (b - c));
    const cxd B(0.5 * (a - d), -0.5 * (b + c));
    g << A, B, std::conj(B), std::conj(A);
    return Isometry(std::move(g));  // validated
}

}  // namespace chball
