#pragma once

// Incident plane waves  E = p e^{ik theta.x},  H = (theta x p) e^{ik theta.x}
// with unit direction theta, unit polarization p, theta.p = 0.
// (Part of the fields module; split out because assembly consumes it.)

#include <utility>

#include "dimerscat/errors.hpp"
#include "dimerscat/types.hpp"

namespace dimerscat {

struct IncidentWave {
    Vec3R theta = Vec3R::UnitZ(); // propagation direction
    Vec3R p = Vec3R::UnitX();     // polarization
    double k = 1.0;

    void validate() const {
        if (std::abs(theta.norm() - 1.0) > 1e-12 || std::abs(p.norm() - 1.0) > 1e-12)
            throw NonTransversePolarization("incident direction and polarization must be unit vectors");
        if (std::abs(theta.dot(p)) > 1e-12)
            throw NonTransversePolarization("polarization must be orthogonal to the direction, theta.p = " +
                                            std::to_string(theta.dot(p)));
    }
};

inline std::pair<Vec3C, Vec3C> incident_fields(const IncidentWave& w, const Vec3R& x) {
    w.validate();
    const Complex phase = std::exp(I_UNIT * w.k * w.theta.dot(x));
    const Vec3C e = phase * w.p.cast<Complex>();
    const Vec3C h = phase * w.theta.cross(w.p).cast<Complex>();
    return {e, h};
}

} // namespace dimerscat
