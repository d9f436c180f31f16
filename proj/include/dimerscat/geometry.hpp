#pragma once

// Dimer cluster construction and validation.
//
// A dimer is a pair of particle centers (z1, z2) with intermediate point
// z0 = z1 + (z2 - z1)/2. Clusters obey the scaling relations
//   d_in = alpha0 * a^t1   (intra-dimer center separation)
//   d_out = beta0 * a^t2   (minimal distance between intermediate points)
//   count ~ floor(d_out^-3)
// with 0 < t2 <= t1 < 1, inside the unit cube.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dimerscat/errors.hpp"
#include "dimerscat/types.hpp"

namespace dimerscat {

struct DimerSites {
    Vec3R z1; // dielectric particle center
    Vec3R z2; // plasmonic particle center

    /// Intermediate point, exactly the midpoint of the two centers.
    Vec3R z0() const { return z1 + 0.5 * (z2 - z1); }
};

struct ScalingParams {
    double a = 0.0;
    double t1 = 0.0;
    double t2 = 0.0;
    double alpha0 = 1.0;
    double beta0 = 1.0;

    double d_in() const { return alpha0 * std::pow(a, t1); }
    double d_out() const { return beta0 * std::pow(a, t2); }

    /// floor(d_out^-3), the asymptotic dimer count for a unit-volume region.
    /// The floor carries a 1e-12 relative guard so that counts sitting one
    /// ulp below an integer (e.g. a = 0.01, t2 = 1/3 -> exactly 100) are not
    /// knocked down by rounding.
    std::size_t expected_count() const {
        const double raw = 1.0 / std::pow(d_out(), 3.0);
        return static_cast<std::size_t>(std::floor(raw * (1.0 + 1e-12)));
    }

    void validate() const {
        if (!(a > 0.0)) throw InvalidScaling("a must be positive");
        if (!(t2 > 0.0 && t2 <= t1 && t1 < 1.0))
            throw InvalidScaling("exponents must satisfy 0 < t2 <= t1 < 1");
        if (!(alpha0 > 0.0 && beta0 > 0.0))
            throw InvalidScaling("alpha0 and beta0 must be positive");
    }
};

struct ClusterGeometry {
    std::vector<DimerSites> dimers;
    double realized_d_in = 0.0;  // min over dimers of |z1 - z2|
    double realized_d_out = 0.0; // min over pairs of |z_m0 - z_j0|; +inf for a single dimer

    std::size_t size() const { return dimers.size(); }
};

/// Exhaustive-scan minima over a dimer list.
inline void recompute_distances(ClusterGeometry& g) {
    g.realized_d_in = std::numeric_limits<double>::infinity();
    for (const auto& d : g.dimers)
        g.realized_d_in = std::min(g.realized_d_in, (d.z1 - d.z2).norm());
    g.realized_d_out = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m < g.dimers.size(); ++m)
        for (std::size_t j = m + 1; j < g.dimers.size(); ++j)
            g.realized_d_out =
                std::min(g.realized_d_out, (g.dimers[m].z0() - g.dimers[j].z0()).norm());
}

inline ClusterGeometry make_cluster(std::vector<DimerSites> dimers) {
    ClusterGeometry g;
    g.dimers = std::move(dimers);
    recompute_distances(g);
    return g;
}

namespace detail {

inline void check_dimer_fits(const ScalingParams& s) {
    s.validate();
    if (s.d_in() >= s.d_out())
        throw TooDense("intra-dimer separation " + std::to_string(s.d_in()) +
                       " >= inter-dimer distance " + std::to_string(s.d_out()));
}

// Deterministic uniform double in [0,1) from a 64-bit generator state.
inline double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

} // namespace detail

/// Places the intermediate points on a cubic lattice of pitch d_out centered
/// in the unit cube; all dimers share the given axis direction. A single
/// dimer (count 1) sits at the cube center with realized_d_out = +inf.
inline ClusterGeometry make_lattice_cluster(const ScalingParams& s, const Vec3R& orientation,
                                            std::optional<std::size_t> count_override = {}) {
    detail::check_dimer_fits(s);
    const Vec3R axis = orientation.normalized();
    const std::size_t count = count_override.value_or(s.expected_count());
    if (count == 0) throw InvalidScaling("requested dimer count is zero");

    const double pitch = s.d_out();
    const auto side = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(count))));
    const double extent = pitch * static_cast<double>(side - 1);
    const double origin = 0.5 * (1.0 - extent);

    std::vector<DimerSites> dimers;
    dimers.reserve(count);
    const Vec3R half_sep = 0.5 * s.d_in() * axis;
    for (std::size_t iz = 0; iz < side && dimers.size() < count; ++iz)
        for (std::size_t iy = 0; iy < side && dimers.size() < count; ++iy)
            for (std::size_t ix = 0; ix < side && dimers.size() < count; ++ix) {
                const Vec3R z0(origin + pitch * static_cast<double>(ix),
                               origin + pitch * static_cast<double>(iy),
                               origin + pitch * static_cast<double>(iz));
                dimers.push_back({z0 - half_sep, z0 + half_sep});
            }
    return make_cluster(std::move(dimers));
}

/// Rejection-samples intermediate points in the unit cube with pairwise
/// distance >= d_out. Deterministic for a fixed seed. Axes are drawn
/// uniformly on the sphere unless a fixed orientation is supplied.
inline ClusterGeometry make_random_cluster(const ScalingParams& s, std::uint64_t seed,
                                           int max_attempts = 100000,
                                           std::optional<Vec3R> orientation = {},
                                           std::optional<std::size_t> count_override = {}) {
    detail::check_dimer_fits(s);
    const std::size_t count = count_override.value_or(s.expected_count());
    if (count == 0) throw InvalidScaling("requested dimer count is zero");

    // splitmix64; fixed algorithm so identical seeds give identical clusters
    // on every platform.
    std::uint64_t state = seed;
    auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    };
    auto draw = [&]() { return detail::uniform01(next()); };

    const double pitch = s.d_out();
    std::vector<Vec3R> centers;
    centers.reserve(count);
    int attempts = 0;
    while (centers.size() < count) {
        if (++attempts > max_attempts)
            throw PlacementFailed("could not place " + std::to_string(count) +
                                  " intermediate points with spacing " + std::to_string(pitch) +
                                  " in " + std::to_string(max_attempts) + " attempts");
        const Vec3R z0(draw(), draw(), draw());
        bool ok = true;
        for (const auto& c : centers)
            if ((c - z0).norm() < pitch) { ok = false; break; }
        if (ok) centers.push_back(z0);
    }

    std::vector<DimerSites> dimers;
    dimers.reserve(count);
    const double half = 0.5 * s.d_in();
    for (const auto& z0 : centers) {
        Vec3R axis;
        if (orientation) {
            axis = orientation->normalized();
        } else {
            const double ct = 1.0 - 2.0 * draw();
            const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
            const double phi = 2.0 * std::numbers::pi * draw();
            axis = Vec3R(st * std::cos(phi), st * std::sin(phi), ct);
        }
        dimers.push_back({z0 - half * axis, z0 + half * axis});
    }
    return make_cluster(std::move(dimers));
}

struct ValidationReport {
    double recomputed_d_in = 0.0;
    double recomputed_d_out = 0.0;
    double stored_d_in = 0.0;
    double stored_d_out = 0.0;
    double expected_d_in = 0.0;  // alpha0 * a^t1
    double expected_d_out = 0.0; // beta0 * a^t2
    std::size_t count = 0;
    std::size_t expected_count = 0;

    bool stored_matches_recomputed = false;
    bool d_in_ok = false;  // |recomputed - expected| <= tol * expected
    bool d_out_ok = false; // recomputed >= expected * (1 - tol); d_out is a minimum-separation bound
    bool count_matches_expected = false; // informational (overrides are legitimate)

    bool all_ok() const { return stored_matches_recomputed && d_in_ok && d_out_ok; }
};

/// Recomputes the cluster minima by exhaustive scan and compares them against
/// the stored values and the scaling targets. Report-only; never throws.
inline ValidationReport validate_geometry(const ClusterGeometry& g, const ScalingParams& s,
                                          double tol) {
    ClusterGeometry scan = g;
    recompute_distances(scan);

    ValidationReport r;
    r.recomputed_d_in = scan.realized_d_in;
    r.recomputed_d_out = scan.realized_d_out;
    r.stored_d_in = g.realized_d_in;
    r.stored_d_out = g.realized_d_out;
    r.expected_d_in = s.d_in();
    r.expected_d_out = s.d_out();
    r.count = g.size();
    r.expected_count = s.expected_count();

    auto close = [tol](double u, double v) {
        if (std::isinf(u) || std::isinf(v)) return u == v;
        return std::abs(u - v) <= tol * std::max(std::abs(u), std::abs(v));
    };
    r.stored_matches_recomputed =
        close(r.stored_d_in, r.recomputed_d_in) && close(r.stored_d_out, r.recomputed_d_out);
    r.d_in_ok = std::abs(r.recomputed_d_in - r.expected_d_in) <= tol * r.expected_d_in;
    r.d_out_ok = r.recomputed_d_out >= r.expected_d_out * (1.0 - tol);
    r.count_matches_expected = r.count == r.expected_count;
    return r;
}

/// Text export: one record per dimer, "z1x z1y z1z z2x z2y z2z".
/// Intermediate points and realized distances are always recomputed on load.
inline void save_geometry(std::ostream& os, const ClusterGeometry& g) {
    os << "# dimer cluster: z1x z1y z1z z2x z2y z2z\n";
    char line[256];
    for (const auto& d : g.dimers) {
        std::snprintf(line, sizeof(line), "%.17g %.17g %.17g %.17g %.17g %.17g\n",
                      d.z1.x(), d.z1.y(), d.z1.z(), d.z2.x(), d.z2.y(), d.z2.z());
        os << line;
    }
}

inline ClusterGeometry load_geometry(std::istream& is) {
    std::vector<DimerSites> dimers;
    std::string line;
    while (std::getline(is, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        DimerSites d;
        if (!(ls >> d.z1.x() >> d.z1.y() >> d.z1.z() >> d.z2.x() >> d.z2.y() >> d.z2.z()))
            throw Error("malformed geometry record: " + line);
        dimers.push_back(d);
    }
    if (dimers.empty()) throw Error("geometry file contains no dimers");
    return make_cluster(std::move(dimers));
}

inline void save_geometry(const std::string& path, const ClusterGeometry& g) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open geometry file for writing: " + path);
    save_geometry(os, g);
}

inline ClusterGeometry load_geometry(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open geometry file: " + path);
    return load_geometry(is);
}

} // namespace dimerscat
