#pragma once

// Test-side oracles, written independently of the library implementation:
//  - scalar/dyadic kernels via the coefficient closed form,
//  - finite-difference derivatives,
//  - straight-line transcriptions of the 12x12 / 6x6 blocks and sources,
//  - brute-force re-evaluations of the admissibility bounds.
// Nothing in here calls the library's assembly or kernel routines.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Vec3R = Eigen::Vector3d;
using Vec3C = Eigen::Vector3cd;
using Mat3C = Eigen::Matrix3cd;
using Mat12C = Eigen::Matrix<Complex, 12, 12>;
using Mat6C = Eigen::Matrix<Complex, 6, 6>;
using Vec12C = Eigen::Vector<Complex, 12>;
using Vec6C = Eigen::Vector<Complex, 6>;

inline constexpr Complex J{0.0, 1.0};

inline Complex phi(const Vec3R& x, const Vec3R& y, Complex k) {
    const double r = (x - y).norm();
    // e^{ikr} assembled from polar pieces rather than std::exp(complex)
    const double decay = std::exp(-k.imag() * r);
    const double ph = k.real() * r;
    return decay * Complex(std::cos(ph), std::sin(ph)) / (4.0 * std::numbers::pi * r);
}

inline Vec3C grad_phi(const Vec3R& x, const Vec3R& y, Complex k) {
    const double r = (x - y).norm();
    return (J * k - 1.0 / r) * phi(x, y, k) * ((x - y) / r).cast<Complex>();
}

/// Dyadic kernel in coefficient form:
/// Upsilon_k = phi * [ (1 + i/(kr) - 1/(kr)^2) I + (-1 - 3i/(kr) + 3/(kr)^2) rr^T ].
inline Mat3C upsilon(const Vec3R& x, const Vec3R& y, Complex k) {
    const double r = (x - y).norm();
    const Complex kr = k * r;
    const Complex ca = 1.0 + J / kr - 1.0 / (kr * kr);
    const Complex cb = -1.0 - 3.0 * J / kr + 3.0 / (kr * kr);
    const Vec3R rhat = (x - y) / r;
    return phi(x, y, k) *
           (ca * Mat3C::Identity() + cb * (rhat * rhat.transpose()).cast<Complex>());
}

inline Mat3C crossmat(const Vec3C& v) {
    Mat3C m;
    m << Complex(0), -v(2), v(1), v(2), Complex(0), -v(0), -v(1), v(0), Complex(0);
    return m;
}

// ---- finite differences -------------------------------------------------

template <typename F>
Vec3C fd_gradient(F&& f, const Vec3R& x, double step) {
    Vec3C g;
    for (int i = 0; i < 3; ++i) {
        Vec3R xp = x, xm = x;
        xp(i) += step;
        xm(i) -= step;
        g(i) = (f(xp) - f(xm)) / (2.0 * step);
    }
    return g;
}

template <typename F>
Mat3C fd_hessian(F&& f, const Vec3R& x, double step) {
    Mat3C h;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (i == j) {
                Vec3R xp = x, xm = x;
                xp(i) += step;
                xm(i) -= step;
                h(i, i) = (f(xp) - 2.0 * f(x) + f(xm)) / (step * step);
            } else {
                Vec3R xpp = x, xpm = x, xmp = x, xmm = x;
                xpp(i) += step; xpp(j) += step;
                xpm(i) += step; xpm(j) -= step;
                xmp(i) -= step; xmp(j) += step;
                xmm(i) -= step; xmm(j) -= step;
                h(i, j) = (f(xpp) - f(xpm) - f(xmp) + f(xmm)) / (4.0 * step * step);
            }
        }
    }
    return h;
}

// ---- straight-line block transcriptions ---------------------------------

struct Params {
    double a, h, t1, t2, alpha0, beta0, k, c0, d0;
    Complex eta0, eta2;
    double sc, sd; // sign branches as +-1
    Mat3C P011, P012, P021, P022;
};

inline Mat12C block_B(const Vec3R& z1, const Vec3R& z2, const Params& p) {
    const double k = p.k;
    const double a3h = std::pow(p.a, 3.0 - p.h);
    const Mat3C B13 = std::pow(k, 4.0) * p.eta0 / (p.sc * p.c0) * a3h * p.P011 * upsilon(z1, z2, k);
    const Mat3C B14 = k * k * p.eta0 / (p.sc * p.c0) * a3h * p.P011 * crossmat(grad_phi(z1, z2, k));
    const Mat3C B23 = k * k * std::pow(p.a, 3.0) * p.P012 * crossmat(grad_phi(z1, z2, k));
    const Mat3C B24 = k * k * std::pow(p.a, 3.0) * p.P012 * upsilon(z1, z2, k);
    const Mat3C B31 = std::pow(k, 4.0) * p.eta2 * std::pow(p.a, 5.0) * p.P021 * upsilon(z2, z1, k);
    const Mat3C B32 =
        std::pow(k, 4.0) * p.eta2 * std::pow(p.a, 5.0) * p.P021 * crossmat(grad_phi(z2, z1, k));
    const Mat3C B41 = k * k * p.eta2 / (p.sd * p.d0) * a3h * p.P022 * crossmat(grad_phi(z2, z1, k));
    const Mat3C B42 = k * k * p.eta2 / (p.sd * p.d0) * a3h * p.P022 * upsilon(z2, z1, k);

    Mat12C B = Mat12C::Identity();
    B.block<3, 3>(0, 6) = -B13;
    B.block<3, 3>(0, 9) = -B14;
    B.block<3, 3>(3, 6) = -B23;
    B.block<3, 3>(3, 9) = -B24;
    B.block<3, 3>(6, 0) = -B31;
    B.block<3, 3>(6, 3) = -B32;
    B.block<3, 3>(9, 0) = -B41;
    B.block<3, 3>(9, 3) = -B42;
    return B;
}

inline Mat12C block_Psi(const Vec3R& zm1, const Vec3R& zm2, const Vec3R& zj1, const Vec3R& zj2,
                        const Params& p) {
    const double k = p.k;
    const double k2 = k * k;
    const double k4 = k2 * k2;
    const double a3h = std::pow(p.a, 3.0 - p.h);
    const double a3 = std::pow(p.a, 3.0);
    const double a5 = std::pow(p.a, 5.0);

    Mat12C C;
    C.block<3, 3>(0, 0) = k4 * p.eta0 / (p.sc * p.c0) * a3h * p.P011 * upsilon(zm1, zj1, k);
    C.block<3, 3>(0, 3) = k2 * p.eta0 / (p.sc * p.c0) * a3h * p.P011 * crossmat(grad_phi(zm1, zj1, k));
    C.block<3, 3>(0, 6) = k4 * p.eta0 / (p.sc * p.c0) * a3h * p.P011 * upsilon(zm1, zj2, k);
    C.block<3, 3>(0, 9) = k2 * p.eta0 / (p.sc * p.c0) * a3h * p.P011 * crossmat(grad_phi(zm1, zj2, k));
    C.block<3, 3>(3, 0) = k2 * a3 * p.P012 * crossmat(grad_phi(zm1, zj1, k));
    C.block<3, 3>(3, 3) = k2 * a3 * p.P012 * upsilon(zm1, zj1, k);
    C.block<3, 3>(3, 6) = k2 * a3 * p.P012 * crossmat(grad_phi(zm1, zj2, k));
    C.block<3, 3>(3, 9) = k2 * a3 * p.P012 * upsilon(zm1, zj2, k);
    C.block<3, 3>(6, 0) = k4 * p.eta2 * a5 * p.P021 * upsilon(zm2, zj1, k);
    C.block<3, 3>(6, 3) = k2 * p.eta2 * a5 * p.P021 * crossmat(grad_phi(zm2, zj1, k));
    C.block<3, 3>(6, 6) = k4 * p.eta2 * a5 * p.P021 * upsilon(zm2, zj2, k);
    C.block<3, 3>(6, 9) = k2 * p.eta2 * a5 * p.P021 * crossmat(grad_phi(zm2, zj2, k));
    C.block<3, 3>(9, 0) = k2 * p.eta2 / (p.sd * p.d0) * a3h * p.P022 * crossmat(grad_phi(zm2, zj1, k));
    C.block<3, 3>(9, 3) = k2 * p.eta2 / (p.sd * p.d0) * a3h * p.P022 * upsilon(zm2, zj1, k);
    C.block<3, 3>(9, 6) = k2 * p.eta2 / (p.sd * p.d0) * a3h * p.P022 * crossmat(grad_phi(zm2, zj2, k));
    C.block<3, 3>(9, 9) = k2 * p.eta2 / (p.sd * p.d0) * a3h * p.P022 * upsilon(zm2, zj2, k);
    return C;
}

inline Vec12C source_S(const Vec3R& z1, const Vec3R& z2, const Vec3R& theta, const Vec3R& pol,
                       const Params& p) {
    const auto plane = [&](const Vec3R& x) {
        return std::exp(J * p.k * theta.dot(x));
    };
    const Vec3C e1 = plane(z1) * pol.cast<Complex>();
    const Vec3C h1 = plane(z1) * theta.cross(pol).cast<Complex>();
    const Vec3C e2 = plane(z2) * pol.cast<Complex>();
    const Vec3C h2 = plane(z2) * theta.cross(pol).cast<Complex>();

    const double a3h = std::pow(p.a, 3.0 - p.h);
    Vec12C s;
    s.segment<3>(0) = J * p.k * p.eta0 / (p.sc * p.c0) * a3h * (p.P011 * h1);
    s.segment<3>(3) = std::pow(p.a, 3.0) * (p.P012 * e1);
    s.segment<3>(6) = J * p.k * std::pow(p.a, 5.0) * (p.P021 * h2);
    s.segment<3>(9) = p.eta2 / (p.sd * p.d0) * a3h * (p.P022 * e2);
    return s;
}

inline Mat6C block_A(const Vec3R& z1, const Vec3R& z2, const Params& p) {
    const double ah3 = std::pow(p.a, p.h - 3.0);
    Mat6C A;
    A.block<3, 3>(0, 0) = ah3 * p.sc * p.c0 / (J * p.k * p.eta0) * p.P011.inverse();
    A.block<3, 3>(0, 3) = J * p.k * crossmat(grad_phi(z1, z2, p.k));
    A.block<3, 3>(3, 0) = -p.k * p.k * crossmat(grad_phi(z1, z2, p.k));
    A.block<3, 3>(3, 3) = ah3 * p.sd * p.d0 / p.eta2 * p.P022.inverse();
    return A;
}

inline Mat6C block_C(const Vec3R& zm1, const Vec3R& zm2, const Vec3R& zj1, const Vec3R& zj2,
                     const Params& p) {
    const double k = p.k;
    Mat6C C;
    C.block<3, 3>(0, 0) = -J * k * k * k * upsilon(zm1, zj1, k);
    C.block<3, 3>(0, 3) = -J * k * crossmat(grad_phi(zm1, zj2, k));
    C.block<3, 3>(3, 0) = k * k * crossmat(grad_phi(zm2, zj1, k));
    C.block<3, 3>(3, 3) = k * k * upsilon(zm2, zj2, k);
    return C;
}

inline Vec6C source_reduced(const Vec3R& z1, const Vec3R& z2, const Vec3R& theta,
                            const Vec3R& pol, const Params& p) {
    Vec6C s;
    s.segment<3>(0) = std::exp(J * p.k * theta.dot(z1)) * theta.cross(pol).cast<Complex>();
    s.segment<3>(3) = std::exp(J * p.k * theta.dot(z2)) * pol.cast<Complex>();
    return s;
}

// ---- brute-force admissibility bounds ------------------------------------

struct RegimeTruth {
    bool exponents_ok;
    bool h_ok;
    bool freq_ok;
    bool L1_ok;
    bool L2_ok;
    double L1;
    double L2;
};

inline double specnorm(const Mat3C& m) {
    return Eigen::JacobiSVD<Mat3C>(m).singularValues()(0);
}

inline RegimeTruth regime_truth(const Params& p) {
    RegimeTruth t{};
    t.exponents_ok = p.t2 > 0.0 && p.t2 <= p.t1 && p.t1 < 1.0;
    t.h_ok = p.h > 9.0 / 5.0 && p.h < std::min(2.0, 5.0 - 8.0 * p.t1);
    const double fp = 4.0 * std::numbers::pi;
    t.freq_ok = std::pow(p.k, 4.0) / (fp * fp * fp * fp * p.c0 * p.c0 * p.d0 * p.d0) < 1.0;

    const double d_in = p.alpha0 * std::pow(p.a, p.t1);
    const double d_out = p.beta0 * std::pow(p.a, p.t2);
    const double n11 = specnorm(p.P011);
    const double n22 = specnorm(p.P022);
    t.L1 = p.k * p.k / 2.0 *
           (p.k * p.k * std::abs(p.eta0) / p.c0 * n11 + std::abs(p.eta2) / p.d0 * n22) *
           std::pow(p.a, 3.0 - p.h) / (d_in * d_in * d_in);
    t.L1_ok = t.L1 < 1.0;
    if (t.L1 < 1.0) {
        t.L2 = p.k * p.k *
               (std::max(1.0, p.k * p.k) * std::abs(p.eta0) / p.c0 * n11 +
                std::abs(p.eta2) / p.d0 * n22) /
               (1.0 - t.L1) * std::pow(p.a, 3.0 - p.h) / (d_out * d_out * d_out);
        t.L2_ok = t.L2 < 1.0;
    } else {
        t.L2 = std::numeric_limits<double>::infinity();
        t.L2_ok = false;
    }
    return t;
}

// Deterministic pseudo-random doubles for test sampling.
struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next_bits() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next_bits() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    Vec3R unit_vec() {
        const double ct = 1.0 - 2.0 * uniform();
        const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
        const double ph = 2.0 * std::numbers::pi * uniform();
        return {st * std::cos(ph), st * std::sin(ph), ct};
    }
    Vec3R vec(double lo, double hi) { return {uniform(lo, hi), uniform(lo, hi), uniform(lo, hi)}; }
    Vec3C cvec(double lo, double hi) {
        return Vec3C(Complex(uniform(lo, hi), uniform(lo, hi)),
                     Complex(uniform(lo, hi), uniform(lo, hi)),
                     Complex(uniform(lo, hi), uniform(lo, hi)));
    }
    Mat3C cmat(double lo, double hi) {
        Mat3C m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = Complex(uniform(lo, hi), uniform(lo, hi));
        return m;
    }
};

} // namespace oracle
