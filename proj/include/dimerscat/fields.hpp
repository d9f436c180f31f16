#pragma once

// Field evaluation from solved moments.
//
// Full model: every particle carries a magnetic moment Q and an electric
// moment R, radiating through grad Phi_k x and Upsilon_k anchored at its
// center. Reduced model: one (Q, R) pair per dimer anchored at the
// intermediate point z_m0.
//
// Far fields use the |x| -> infinity expansion
//   E^s(x) = e^{ik|x|}/|x| ( E^inf(xhat) + O(1/|x|) ).

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "dimerscat/assembly.hpp"
#include "dimerscat/errors.hpp"
#include "dimerscat/geometry.hpp"
#include "dimerscat/incident.hpp"
#include "dimerscat/kernels.hpp"
#include "dimerscat/types.hpp"

namespace dimerscat {

namespace detail {

inline void require_observation_distance(const Vec3R& x, const ClusterGeometry& g, double a) {
    for (const auto& d : g.dimers) {
        if ((x - d.z1).norm() < 2.0 * a || (x - d.z2).norm() < 2.0 * a)
            throw ObservationTooClose("observation point within 2a of a particle center");
    }
}

inline void require_unit(const Vec3R& xhat) {
    if (std::abs(xhat.norm() - 1.0) > 1e-12)
        throw NonUnitDirection("far-field direction must be a unit vector");
}

// Radiated field of one (Q, R) pair anchored at z, evaluated at x:
//   grad_y Phi_k(x, z) x Q - Upsilon_k(x, z) R,
// with grad_y Phi_k(x, z) = -grad_x Phi_k(x, z).
inline Vec3C radiated_term(const Vec3R& x, const Vec3R& z, double k, const Vec3C& q,
                           const Vec3C& r) {
    const Vec3C grad_y = -grad_phi_k(x, z, k);
    return grad_y.cross(q) - upsilon_k(x, z, k) * r;
}

// Far-field contribution of one (Q, R) pair anchored at z:
//   e^{-ik xhat.z} [ -ik xhat x Q + (I - xhat xhat^T) R ].
inline Vec3C far_term(const Vec3R& xhat, const Vec3R& z, double k, const Vec3C& q,
                      const Vec3C& r) {
    const Complex phase = std::exp(-I_UNIT * k * xhat.dot(z));
    const Vec3C xc = xhat.cast<Complex>();
    const Vec3C transverse = r - (xc.transpose() * r)(0) * xc;
    return phase * (-I_UNIT * k * xc.cross(q) + transverse);
}

} // namespace detail

/// Scattered field of the full model,
/// E^s(x) = -k^2 sum_m sum_{l=1,2} [grad_y Phi_k(x,z_ml) x Q_ml - Upsilon_k(x,z_ml) R_ml].
/// Valid for x at least 2a away from every particle center.
inline Vec3C scattered_field(const Vec3R& x, const FullMoments& mom, const ClusterGeometry& g,
                             double k, double a) {
    detail::require_observation_distance(x, g, a);
    Vec3C e = Vec3C::Zero();
    for (std::size_t m = 0; m < g.size(); ++m) {
        e += detail::radiated_term(x, g.dimers[m].z1, k, mom.q1(m), mom.r1(m));
        e += detail::radiated_term(x, g.dimers[m].z2, k, mom.q2(m), mom.r2(m));
    }
    return -(k * k) * e;
}

/// Far-field pattern of the full model in direction xhat.
inline Vec3C far_field(const Vec3R& xhat, const FullMoments& mom, const ClusterGeometry& g,
                       double k) {
    detail::require_unit(xhat);
    Vec3C e = Vec3C::Zero();
    for (std::size_t m = 0; m < g.size(); ++m) {
        e += detail::far_term(xhat, g.dimers[m].z1, k, mom.q1(m), mom.r1(m));
        e += detail::far_term(xhat, g.dimers[m].z2, k, mom.q2(m), mom.r2(m));
    }
    return e;
}

/// Reduced-model scattered field, anchored at the intermediate points.
inline Vec3C reduced_scattered_field(const Vec3R& x, const ReducedMoments& mom,
                                     const ClusterGeometry& g, double k, double a) {
    detail::require_observation_distance(x, g, a);
    Vec3C e = Vec3C::Zero();
    for (std::size_t m = 0; m < g.size(); ++m)
        e += detail::radiated_term(x, g.dimers[m].z0(), k, mom.q1(m), mom.r2(m));
    return -(k * k) * e;
}

/// Reduced-model far field,
/// E^inf = -sum_m e^{-ik xhat.z_m0} [ ik xhat x Q_m1 - (I - xhat xhat^T) R_m2 ].
inline Vec3C reduced_far_field(const Vec3R& xhat, const ReducedMoments& mom,
                               const ClusterGeometry& g, double k) {
    detail::require_unit(xhat);
    Vec3C e = Vec3C::Zero();
    for (std::size_t m = 0; m < g.size(); ++m)
        e += detail::far_term(xhat, g.dimers[m].z0(), k, mom.q1(m), mom.r2(m));
    return e;
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre polynomial; deterministic layout.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
    std::vector<double> nodes(n), weights(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-based initial guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    return {nodes, weights};
}

/// Angular samples of E^inf over the sphere with quadrature weights
/// (Gauss-Legendre in cos(theta) x uniform trapezoid in phi).
struct FarFieldPattern {
    std::vector<double> thetas;
    std::vector<double> phis;
    std::vector<double> weights; // solid-angle quadrature weights
    std::vector<Vec3R> directions;
    std::vector<Vec3C> values;

    std::size_t size() const { return values.size(); }
};

template <typename FarFn>
FarFieldPattern evaluate_far_field_grid(FarFn&& far, int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 2) throw Error("far-field grid needs n_theta, n_phi >= 2");
    const auto [ct, wt] = gauss_legendre(n_theta);
    FarFieldPattern pat;
    pat.thetas.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    const double dphi = 2.0 * std::numbers::pi / n_phi;
    for (int i = 0; i < n_theta; ++i) {
        const double cos_t = ct[i];
        const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
        const double theta = std::acos(cos_t);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = dphi * j;
            const Vec3R xhat(sin_t * std::cos(phi), sin_t * std::sin(phi), cos_t);
            pat.thetas.push_back(theta);
            pat.phis.push_back(phi);
            pat.weights.push_back(wt[i] * dphi);
            pat.directions.push_back(xhat);
            pat.values.push_back(far(xhat));
        }
    }
    return pat;
}

inline FarFieldPattern far_field_grid(const FullMoments& mom, const ClusterGeometry& g, double k,
                                      int n_theta, int n_phi) {
    return evaluate_far_field_grid(
        [&](const Vec3R& xhat) { return far_field(xhat, mom, g, k); }, n_theta, n_phi);
}

inline FarFieldPattern reduced_far_field_grid(const ReducedMoments& mom,
                                              const ClusterGeometry& g, double k, int n_theta,
                                              int n_phi) {
    return evaluate_far_field_grid(
        [&](const Vec3R& xhat) { return reduced_far_field(xhat, mom, g, k); }, n_theta, n_phi);
}

/// Quadrature approximation of the total scattering cross section
/// sigma = integral over the sphere of |E^inf|^2.
inline double scattering_cross_section(const FarFieldPattern& pat) {
    double sigma = 0.0;
    for (std::size_t i = 0; i < pat.size(); ++i)
        sigma += pat.weights[i] * pat.values[i].squaredNorm();
    return sigma;
}

} // namespace dimerscat
