#pragma once

// Closed-form free-space Helmholtz kernels: the scalar fundamental solution
// Phi_k(x,y) = e^{ik|x-y|}/(4*pi*|x-y|), its first and second derivatives,
// and the dyadic kernel Upsilon_k = (1/k^2) Hess Phi_k + Phi_k I.
//
// Derivatives are always taken with respect to the FIRST argument. Callers
// that need the gradient in the second argument use the antisymmetry
// grad_x Phi(x,y) = -grad_y Phi(x,y).

#include <cmath>
#include <numbers>

#include "dimerscat/errors.hpp"
#include "dimerscat/types.hpp"

namespace dimerscat {

inline constexpr double default_r_min = 1e-12;

namespace detail {

inline double separation(const Vec3R& x, const Vec3R& y, double r_min) {
    const double r = (x - y).norm();
    if (!(r >= r_min))
        throw CoincidentPoints("kernel evaluation at |x-y| = " + std::to_string(r) +
                               " below guard " + std::to_string(r_min));
    return r;
}

} // namespace detail

/// Scalar Helmholtz kernel e^{ikr}/(4*pi*r), r = |x-y|.
inline Complex phi_k(const Vec3R& x, const Vec3R& y, Complex k,
                     double r_min = default_r_min) {
    const double r = detail::separation(x, y, r_min);
    return std::exp(I_UNIT * k * r) / (4.0 * std::numbers::pi * r);
}

/// Gradient of phi_k in the first argument: (ik - 1/r) Phi_k (x-y)/r.
inline Vec3C grad_phi_k(const Vec3R& x, const Vec3R& y, Complex k,
                        double r_min = default_r_min) {
    const double r = detail::separation(x, y, r_min);
    const Complex phi = std::exp(I_UNIT * k * r) / (4.0 * std::numbers::pi * r);
    const Vec3R rhat = (x - y) / r;
    return ((I_UNIT * k - 1.0 / r) * phi) * rhat.cast<Complex>();
}

/// Hessian of phi_k in the first argument.
///
/// With rhat = (x-y)/r this is the exact second derivative of e^{ikr}/(4 pi r):
///   Hess = Phi_k [ (3/r^2 - 3ik/r - k^2) rhat rhat^T + (ik/r - 1/r^2) I ].
/// Symmetric; trace equals -k^2 Phi_k (Helmholtz equation).
inline Mat3C hess_phi_k(const Vec3R& x, const Vec3R& y, Complex k,
                        double r_min = default_r_min) {
    const double r = detail::separation(x, y, r_min);
    const Complex phi = std::exp(I_UNIT * k * r) / (4.0 * std::numbers::pi * r);
    const Vec3R rhat = (x - y) / r;
    const Complex radial = (3.0 / (r * r) - 3.0 * I_UNIT * k / r - k * k) * phi;
    const Complex lateral = (I_UNIT * k / r - 1.0 / (r * r)) * phi;
    Mat3C h = radial * (rhat * rhat.transpose()).cast<Complex>();
    h += lateral * Mat3C::Identity();
    return h;
}

/// Dyadic kernel Upsilon_k = (1/k^2) Hess Phi_k + Phi_k I. Requires k != 0.
inline Mat3C upsilon_k(const Vec3R& x, const Vec3R& y, Complex k,
                       double r_min = default_r_min) {
    if (k == Complex(0.0, 0.0))
        throw ZeroWavenumber("upsilon_k requires k != 0; use upsilon_0 for the static kernel");
    return hess_phi_k(x, y, k, r_min) / (k * k) + phi_k(x, y, k, r_min) * Mat3C::Identity();
}

/// Static dyadic kernel Upsilon_0 = Hess of 1/(4*pi*r); traceless, symmetric.
inline Mat3C upsilon_0(const Vec3R& x, const Vec3R& y, double r_min = default_r_min) {
    const double r = detail::separation(x, y, r_min);
    const Vec3R rhat = (x - y) / r;
    const double s = 1.0 / (4.0 * std::numbers::pi * r * r * r);
    Mat3C h = (3.0 * s) * (rhat * rhat.transpose()).cast<Complex>();
    h -= s * Mat3C::Identity();
    return h;
}

/// Antisymmetric matrix M with M w = v x w for all w.
inline Mat3C cross_matrix(const Vec3C& v) {
    Mat3C m;
    m << Complex(0), -v(2), v(1),
         v(2), Complex(0), -v(0),
         -v(1), v(0), Complex(0);
    return m;
}

inline Mat3C cross_matrix(const Vec3R& v) { return cross_matrix(v.cast<Complex>().eval()); }

} // namespace dimerscat
