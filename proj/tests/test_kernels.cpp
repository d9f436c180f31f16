#include <catch2/catch_amalgamated.hpp>

#include <numbers>

#include "dimerscat/kernels.hpp"
#include "oracles.hpp"

using namespace dimerscat;

namespace {
const double inv4pi = 1.0 / (4.0 * std::numbers::pi);
}

TEST_CASE("phi_k closed-form values") {
    const Vec3R y = Vec3R::Zero();
    const Vec3R x = Vec3R::UnitX();

    CHECK(std::abs(phi_k(x, y, 0.0) - Complex(inv4pi, 0.0)) < 1e-15);
    CHECK(std::abs(phi_k(x, y, std::numbers::pi) - Complex(-inv4pi, 0.0)) < 1e-15);
    CHECK_THROWS_AS(phi_k(x, x, 1.0), CoincidentPoints);

    oracle::Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const Vec3R a = rng.vec(-2, 2), b = rng.vec(-2, 2);
        if ((a - b).norm() < 1e-3) continue;
        const Complex k(rng.uniform(0, 5), 0.0);
        CHECK(std::abs(phi_k(a, b, k) - phi_k(b, a, k)) < 1e-15); // symmetric kernel
        CHECK(std::abs(phi_k(a, b, k) - oracle::phi(a, b, k)) < 1e-14 * std::abs(phi_k(a, b, k)) + 1e-18);
    }
}

TEST_CASE("grad_phi_k static value, antisymmetry, finite differences") {
    const Vec3R y = Vec3R::Zero();
    const Vec3R x = Vec3R::UnitX();
    const Vec3C g0 = grad_phi_k(x, y, 0.0);
    CHECK(std::abs(g0(0) - Complex(-inv4pi, 0.0)) < 1e-15);
    CHECK(std::abs(g0(1)) < 1e-16);
    CHECK(std::abs(g0(2)) < 1e-16);

    oracle::Rng rng(12);
    for (int i = 0; i < 50; ++i) {
        const Vec3R a = rng.vec(-2, 2), b = rng.vec(-2, 2);
        const double r = (a - b).norm();
        if (r < 0.05) continue;
        const Complex k(rng.uniform(0, 5), rng.uniform(-0.5, 0.5));

        const Vec3C g = grad_phi_k(a, b, k);
        CHECK((g + grad_phi_k(b, a, k)).norm() < 1e-14 * g.norm()); // swap antisymmetry

        const Vec3C fd = oracle::fd_gradient(
            [&](const Vec3R& q) { return oracle::phi(q, b, k); }, a, 1e-5 * r);
        CHECK((g - fd).norm() <= 1e-6 * fd.norm());
    }
}

TEST_CASE("hess_phi_k satisfies the Helmholtz equation and matches differences") {
    oracle::Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        const Vec3R a = rng.vec(-2, 2), b = rng.vec(-2, 2);
        const double r = (a - b).norm();
        if (r < 0.05) continue;
        const Complex k(rng.uniform(0.1, 5), 0.0);

        const Mat3C h = hess_phi_k(a, b, k);
        CHECK((h - h.transpose()).norm() < 1e-14 * h.norm()); // symmetric matrix
        CHECK((h - hess_phi_k(b, a, k)).norm() < 1e-14 * h.norm()); // even under swap

        const Complex lap = h.trace();
        CHECK(std::abs(lap + k * k * phi_k(a, b, k)) <= 1e-12 * std::abs(lap));

        const Mat3C fd = oracle::fd_hessian(
            [&](const Vec3R& q) { return oracle::phi(q, b, k); }, a, 1e-5 * r);
        CHECK((h - fd).norm() <= 1e-5 * fd.norm());
    }
}

TEST_CASE("hess_phi_k static limit is harmonic") {
    const Mat3C h = hess_phi_k(Vec3R::UnitX(), Vec3R::Zero(), 0.0);
    CHECK(std::abs(h.trace()) < 1e-14 * h.norm());
    // diagonal dominates off-diagonal for the axial configuration
    CHECK(std::abs(h(0, 0)) > std::abs(h(0, 1)));
    CHECK(std::abs(h(0, 0) - Complex(2.0 * inv4pi, 0.0)) < 1e-14);
}

TEST_CASE("upsilon_k trace identity, symmetry, closed-form oracle") {
    oracle::Rng rng(14);
    int tested = 0;
    for (int i = 0; tested < 100; ++i) {
        const Vec3R a = rng.vec(-3, 3), b = rng.vec(-3, 3);
        if ((a - b).norm() < 0.05) continue;
        const Complex k(rng.uniform(0.1, 4), 0.0);
        const Mat3C u = upsilon_k(a, b, k);

        CHECK(std::abs(u.trace() - 2.0 * phi_k(a, b, k)) <= 1e-12 * std::abs(u.trace()));
        CHECK((u - u.transpose()).norm() < 1e-14 * u.norm());

        const Mat3C ref = oracle::upsilon(a, b, k);
        CHECK((u - ref).norm() <= 1e-10 * ref.norm());
        ++tested;
    }
    CHECK_THROWS_AS(upsilon_k(Vec3R::UnitX(), Vec3R::Zero(), 0.0), ZeroWavenumber);
}

TEST_CASE("upsilon_0 is traceless and matches the small-k limit") {
    oracle::Rng rng(15);
    for (int i = 0; i < 20; ++i) {
        const Vec3R a = rng.vec(-2, 2), b = rng.vec(-2, 2);
        if ((a - b).norm() < 0.1) continue;
        const Mat3C u0 = upsilon_0(a, b);
        CHECK(std::abs(u0.trace()) <= 1e-14 * u0.norm());
        CHECK((u0 - hess_phi_k(a, b, 1e-6)).norm() <= 1e-6 * u0.norm());
    }

    const double r = 1.7;
    const Mat3C axial = upsilon_0(Vec3R(0, 0, r), Vec3R::Zero());
    const double scale = inv4pi / (r * r * r);
    CHECK(std::abs(axial(2, 2) - Complex(2.0 * scale, 0.0)) < 1e-15);
    CHECK(std::abs(axial(0, 0) - Complex(-scale, 0.0)) < 1e-15);
    CHECK(std::abs(axial(1, 1) - Complex(-scale, 0.0)) < 1e-15);
}

TEST_CASE("cross_matrix realizes the cross product") {
    const Mat3C m = cross_matrix(Vec3C(1, 0, 0));
    CHECK((m * Vec3C(0, 1, 0) - Vec3C(0, 0, 1)).norm() < 1e-16);

    oracle::Rng rng(16);
    for (int i = 0; i < 30; ++i) {
        const Vec3C v = rng.cvec(-1, 1), w = rng.cvec(-1, 1);
        const Mat3C mv = cross_matrix(v);
        CHECK((mv + mv.transpose()).norm() < 1e-16);
        CHECK((mv * w - v.cross(w)).norm() <= 1e-15 * (v.norm() * w.norm()));
    }
}
