#pragma once

// Ball model of complex hyperbolic n-space: points of the open unit ball in
// C^n, the U(n,1) isometries acting projectively, geodesic polar coordinates
// about the origin, and geodesic-ball volume.
//
// The metric normalization is ds^2 = (1-|z|^2)^{-2} sum [(1-|z|^2) d_ij +
// z_i conj(z_j)] dconj(z_i) dz_j, for which d(0, t e_1) = atanh(t) and the
// volume element in polar coordinates is sinh^{2n-1} r cosh r dr domega.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "chball/hypergeometric.hpp"  // kPi, cxd

namespace chball {

inline constexpr double kPointTol = 1e-12;   // ball membership tolerance
inline constexpr double kFormTol = 1e-10;    // g* J g = J tolerance

class BallPoint {
  public:
    explicit BallPoint(std::vector<cxd> coords) : z_(std::move(coords)) {
        if (z_.empty()) throw std::invalid_argument("BallPoint: empty coordinates");
        if (norm_sq() > 1.0 - kPointTol)
            throw std::invalid_argument("BallPoint: |z|^2 must stay below 1");
    }
    static BallPoint origin(int n) { return BallPoint(std::vector<cxd>(n, 0.0)); }

    int dim() const { return int(z_.size()); }
    const std::vector<cxd>& coords() const { return z_; }
    cxd operator[](int i) const { return z_[size_t(i)]; }
    double norm_sq() const {
        double s = 0.0;
        for (cxd v : z_) s += std::norm(v);
        return s;
    }

  private:
    std::vector<cxd> z_;
};

inline cxd hermitian_inner(const BallPoint& z, const BallPoint& w) {
    if (z.dim() != w.dim()) throw std::invalid_argument("hermitian_inner: dimension mismatch");
    cxd s = 0.0;
    for (int i = 0; i < z.dim(); ++i) s += z[i] * std::conj(w[i]);
    return s;
}

// d(z,w) = arccosh sqrt( |1-<z,w>|^2 / ((1-|z|^2)(1-|w|^2)) ), computed in
// the cancellation-free sinh form: sinh^2 d = (|z-w|^2 - Gram(z,w)) / denom
// with Gram = |z|^2 |w|^2 - |<z,w>|^2 >= 0.
inline double distance(const BallPoint& z, const BallPoint& w) {
    const cxd s = hermitian_inner(z, w);
    const double nz = z.norm_sq(), nw = w.norm_sq();
    double dzw = 0.0;
    for (int i = 0; i < z.dim(); ++i) dzw += std::norm(z[i] - w[i]);
    const double gram = nz * nw - std::norm(s);
    double num = dzw - gram;
    const double denom = (1.0 - nz) * (1.0 - nw);
    if (num < 0.0) {
        if (num < -1e-10 * (1.0 + dzw))
            throw std::runtime_error("distance: arccosh argument below 1 beyond tolerance");
        num = 0.0;
    }
    return std::asinh(std::sqrt(num / denom));
}

// ------------------------------------------------------------------ isometry

inline Eigen::MatrixXcd signature_form(int n) {
    Eigen::MatrixXcd J = Eigen::MatrixXcd::Identity(n + 1, n + 1);
    J(n, n) = -1.0;
    return J;
}

// (n+1)x(n+1) complex matrix with g* J g = J (up to phase: |det g| = 1).
class Isometry {
  public:
    explicit Isometry(Eigen::MatrixXcd g) : g_(std::move(g)) {
        if (g_.rows() != g_.cols() || g_.rows() < 2)
            throw std::invalid_argument("Isometry: square matrix of size >= 2 required");
        const int n = dim();
        const Eigen::MatrixXcd J = signature_form(n);
        const double res = (g_.adjoint() * J * g_ - J).cwiseAbs().maxCoeff();
        if (res > kFormTol)
            throw std::invalid_argument("Isometry: g* J g != J (residual " +
                                        std::to_string(res) + ")");
        if (std::abs(std::abs(g_.determinant()) - 1.0) > kFormTol)
            throw std::invalid_argument("Isometry: |det g| != 1");
    }

    struct Unchecked {};
    Isometry(Eigen::MatrixXcd g, Unchecked) : g_(std::move(g)) {}

    static Isometry identity(int n) {
        return Isometry(Eigen::MatrixXcd::Identity(n + 1, n + 1), Unchecked{});
    }

    int dim() const { return int(g_.rows()) - 1; }
    const Eigen::MatrixXcd& matrix() const { return g_; }

    // For form-preserving g the inverse is J g* J; exact up to rounding.
    Isometry inverse() const {
        const Eigen::MatrixXcd J = signature_form(dim());
        return Isometry(J * g_.adjoint() * J, Unchecked{});
    }
    Isometry operator*(const Isometry& o) const {
        return Isometry(g_ * o.g_, Unchecked{});
    }

  private:
    Eigen::MatrixXcd g_;
};

// Raw projective action; returns homogeneous-normalized coordinates without
// ball validation (callers pruning far points check the norm themselves).
inline std::vector<cxd> apply_isometry_coords(const Isometry& g, const BallPoint& z) {
    const int n = g.dim();
    if (z.dim() != n) throw std::invalid_argument("apply_isometry: dimension mismatch");
    Eigen::VectorXcd h(n + 1);
    for (int i = 0; i < n; ++i) h(i) = z[i];
    h(n) = 1.0;
    Eigen::VectorXcd w = g.matrix() * h;
    const cxd s = w(n);
    if (std::abs(s) < 1e-300)
        throw std::runtime_error("apply_isometry: vanishing homogeneous coordinate");
    std::vector<cxd> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) out[size_t(i)] = w(i) / s;
    return out;
}

inline BallPoint apply_isometry(const Isometry& g, const BallPoint& z) {
    return BallPoint(apply_isometry_coords(g, z));
}

// Translation by ell along the geodesic through 0 in the first coordinate
// axis: the [[cosh,sinh],[sinh,cosh]] block on coordinates (1, n+1).
inline Isometry make_loxodromic(int n, double ell) {
    if (!(ell > 0.0)) throw std::invalid_argument("make_loxodromic: ell > 0 required");
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(n + 1, n + 1);
    g(0, 0) = std::cosh(ell);
    g(0, n) = std::sinh(ell);
    g(n, 0) = std::sinh(ell);
    g(n, n) = std::cosh(ell);
    return Isometry(std::move(g));  // validated
}

// Block-unitary isometry diag(U, 1) for U in U(n).
inline Isometry unitary_isometry(const Eigen::MatrixXcd& U) {
    const int n = int(U.rows());
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Identity(n + 1, n + 1);
    g.topLeftCorner(n, n) = U;
    return Isometry(std::move(g));
}

// Transvection mapping the origin to c (identity when c = 0): a loxodromic
// translation conjugated by a unitary taking e_1 to c/|c|.
inline Isometry transvection_to(const BallPoint& c) {
    const int n = c.dim();
    const double t = std::sqrt(c.norm_sq());
    if (t < 1e-15) return Isometry::identity(n);
    // Gram-Schmidt a unitary with first column c/|c|.
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) U(i, 0) = c[i] / t;
    int filled = 1;
    for (int e = 0; e < n && filled < n; ++e) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
        v(e) = 1.0;
        for (int j = 0; j < filled; ++j) v -= U.col(j).dot(v) * U.col(j);
        const double nv = v.norm();
        if (nv > 1e-8) U.col(filled++) = v / nv;
    }
    if (filled != n) throw std::runtime_error("transvection_to: unitary completion failed");
    const Isometry rot = unitary_isometry(U);
    return rot * make_loxodromic(n, std::atanh(t)) * rot.inverse();
}

// ---------------------------------------------------------------- volumes

inline double sphere_volume(int n) {  // vol(S^{2n-1}) = 2 pi^n / (n-1)!
    return 2.0 * std::pow(kPi, n) / std::tgamma(double(n));
}

// vol(B_T) = pi^n sinh^{2n} T / n!
inline double volume_ball(int n, double T) {
    if (!(T > 0.0)) throw std::invalid_argument("volume_ball: T > 0 required");
    return std::pow(kPi, n) * std::pow(std::sinh(T), 2 * n) / std::tgamma(double(n) + 1.0);
}

// ---------------------------------------------------------------- polar

struct PolarPoint {
    double r = 0.0;
    std::vector<double> omega;  // unit vector in R^{2n}

    PolarPoint(double r_, std::vector<double> omega_) : r(r_), omega(std::move(omega_)) {
        if (r < 0.0) throw std::invalid_argument("PolarPoint: r >= 0");
        if (omega.empty() || omega.size() % 2 != 0)
            throw std::invalid_argument("PolarPoint: omega must have even dimension 2n");
        double s = 0.0;
        for (double v : omega) s += v * v;
        if (std::abs(s - 1.0) > 1e-12)
            throw std::invalid_argument("PolarPoint: |omega| != 1");
    }
    int dim() const { return int(omega.size()) / 2; }
};

// x = tanh(r) omega, with omega read as n complex pairs.
inline BallPoint polar_to_ball(const PolarPoint& p) {
    if (p.r > 40.0)
        throw std::invalid_argument("polar_to_ball: r > 40 is indistinguishable from the boundary");
    const double t = std::tanh(p.r);
    std::vector<cxd> z(static_cast<size_t>(p.dim()));
    for (int j = 0; j < p.dim(); ++j)
        z[size_t(j)] = cxd(t * p.omega[size_t(2 * j)], t * p.omega[size_t(2 * j + 1)]);
    return BallPoint(std::move(z));
}

inline PolarPoint ball_to_polar(const BallPoint& z) {
    const double t = std::sqrt(z.norm_sq());
    std::vector<double> omega(static_cast<size_t>(2 * z.dim()), 0.0);
    if (t < 1e-300) {
        omega[0] = 1.0;  // canonical direction at the origin
        return PolarPoint(0.0, std::move(omega));
    }
    for (int j = 0; j < z.dim(); ++j) {
        omega[size_t(2 * j)] = z[j].real() / t;
        omega[size_t(2 * j + 1)] = z[j].imag() / t;
    }
    double s = 0.0;
    for (double v : omega) s += v * v;
    const double scale = 1.0 / std::sqrt(s);
    for (double& v : omega) v *= scale;
    return PolarPoint(std::atanh(t), std::move(omega));
}

}  // namespace chball
