#pragma once

#include <Eigen/Dense>
#include <complex>

namespace dimerscat {

using Complex = std::complex<double>;

using Vec3R = Eigen::Vector3d;
using Vec3C = Eigen::Vector3cd;
using Mat3C = Eigen::Matrix3cd;

using Vec6C = Eigen::Vector<Complex, 6>;
using Vec12C = Eigen::Vector<Complex, 12>;
using Mat6C = Eigen::Matrix<Complex, 6, 6>;
using Mat12C = Eigen::Matrix<Complex, 12, 12>;

inline constexpr Complex I_UNIT{0.0, 1.0};

/// Largest singular value of a 3x3 complex matrix.
inline double spectral_norm(const Mat3C& m) {
    return Eigen::JacobiSVD<Mat3C>(m).singularValues()(0);
}

} // namespace dimerscat
