#pragma once

// Material contrasts, polarization tensors, the resonant wavenumber, and the
// quantitative regime / invertibility checks the model imposes.
//
// The dielectric particle carries the high contrast eta1 = eta0 * a^-2; the
// plasmonic particle carries the order-one contrast eta2 with Re(eps_r) < 0.
// The resonance condition 1 - k^2 eta1 a^2 lambda = +-c0 a^h fixes k; the
// plasmonic branch 1 + eta2 lambda = +-d0 a^h is encoded by (d0, sign_d).

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "dimerscat/errors.hpp"
#include "dimerscat/geometry.hpp"
#include "dimerscat/types.hpp"

namespace dimerscat {

struct ModelParams {
    double a = 0.01;
    double h = 1.9;
    double t1 = 0.3;
    double t2 = 0.3;
    double alpha0 = 1.0;
    double beta0 = 1.0;
    double k = 1.0;
    Complex eta0{1.0, 0.0}; // Re(eta0) > 0
    Complex eta2{1.0, 0.0};
    double c0 = 1.0;
    double d0 = 1.0;
    int sign_c = +1;
    int sign_d = +1;
    double eps0 = 1.0; // vacuum permittivity (unit system choice)
    double mu0 = 1.0;  // vacuum permeability

    Complex eta1() const { return eta0 * std::pow(a, -2.0); }
    double d_in() const { return alpha0 * std::pow(a, t1); }
    double d_out() const { return beta0 * std::pow(a, t2); }
    ScalingParams scaling() const { return {a, t1, t2, alpha0, beta0}; }
};

/// The four resonant-mode tensors; configuration inputs, not computed here.
struct PolarizationTensors {
    Mat3C P011 = Mat3C::Zero(); // dielectric particle, divergence-free mode
    Mat3C P012 = Mat3C::Zero(); // dielectric particle, gradient-harmonic modes
    Mat3C P021 = Mat3C::Zero(); // plasmonic particle, divergence-free modes
    Mat3C P022 = Mat3C::Zero(); // plasmonic particle, resonant gradient mode
};

inline Mat3C isotropic_tensor(Complex c) { return c * Mat3C::Identity(); }

struct ConditionCheck {
    std::string label;
    double value = 0.0;  // the computed quantity being bounded
    double margin = 0.0; // distance to the nearest bound; positive iff pass
    bool pass = false;
};

struct RegimeReport {
    std::vector<ConditionCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// Resonant wavenumber k = sqrt((1 - sign_c c0 a^h) / (Re(eta0) lambda)).
/// Only an effectively real eta0 produces a real k; |Im eta0| above 1e-12
/// is rejected rather than silently dropped.
inline double wavenumber_from_resonance(double lambda_n0, const ModelParams& p) {
    if (std::abs(p.eta0.imag()) > 1e-12)
        throw ComplexEta0Unsupported("resonance formula requires real eta0, got Im = " +
                                     std::to_string(p.eta0.imag()));
    const double radicand =
        (1.0 - static_cast<double>(p.sign_c) * p.c0 * std::pow(p.a, p.h)) /
        (p.eta0.real() * lambda_n0);
    if (!(radicand > 0.0))
        throw NonPositiveRadicand("k^2 = " + std::to_string(radicand) + " is not positive");
    return std::sqrt(radicand);
}

/// Admissibility of the exponents and the frequency:
///   (i)  0 < t2 <= t1 < 1
///   (ii) 9/5 < h < min{2, 5 - 8 t1}
///   (iii) k^4 / ((4 pi)^4 c0^2 d0^2) < 1
inline RegimeReport check_regime(const ModelParams& p) {
    RegimeReport r;

    const double m1 = std::min({p.t2, p.t1 - p.t2, 1.0 - p.t1});
    r.checks.push_back({"exponent ordering 0 < t2 <= t1 < 1", m1, m1,
                        p.t2 > 0.0 && p.t2 <= p.t1 && p.t1 < 1.0});

    const double h_hi = std::min(2.0, 5.0 - 8.0 * p.t1);
    const double m2 = std::min(p.h - 1.8, h_hi - p.h);
    r.checks.push_back({"contrast exponent 9/5 < h < min{2, 5-8 t1}", p.h, m2, m2 > 0.0});

    const double four_pi = 4.0 * std::numbers::pi;
    const double v3 = std::pow(p.k, 4.0) / (std::pow(four_pi, 4.0) * p.c0 * p.c0 * p.d0 * p.d0);
    r.checks.push_back({"frequency bound k^4/((4pi)^4 c0^2 d0^2) < 1", v3, 1.0 - v3, v3 < 1.0});

    return r;
}

/// Quantitative invertibility bounds for the coupled block system, using the
/// spectral norm for the tensors and moduli for the complex contrasts:
///   L1 = (k^2/2) ((k^2|eta0|/c0)|P011| + (|eta2|/d0)|P022|) a^{3-h} d_in^-3 < 1
///   L2 = k^2 ((max{1,k^2}|eta0|/c0)|P011| + (|eta2|/d0)|P022|) / (1-L1)
///        * a^{3-h} d_out^-3 < 1
/// L1 >= 1 is reported (L2 becomes +inf), never thrown.
inline RegimeReport check_invertibility(const ModelParams& p, const PolarizationTensors& t) {
    const double n011 = spectral_norm(t.P011);
    const double n022 = spectral_norm(t.P022);
    const double k2 = p.k * p.k;
    const double a3h = std::pow(p.a, 3.0 - p.h);

    const double L1 = 0.5 * k2 *
                      (k2 * std::abs(p.eta0) / p.c0 * n011 + std::abs(p.eta2) / p.d0 * n022) *
                      a3h / std::pow(p.d_in(), 3.0);
    double L2 = std::numeric_limits<double>::infinity();
    if (L1 < 1.0)
        L2 = k2 *
             (std::max(1.0, k2) * std::abs(p.eta0) / p.c0 * n011 +
              std::abs(p.eta2) / p.d0 * n022) /
             (1.0 - L1) * a3h / std::pow(p.d_out(), 3.0);

    RegimeReport r;
    r.checks.push_back({"intra-dimer coupling L1 < 1", L1, 1.0 - L1, L1 < 1.0});
    r.checks.push_back({"inter-dimer coupling L2 < 1", L2, 1.0 - L2, L2 < 1.0});
    return r;
}

} // namespace dimerscat
