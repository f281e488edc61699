#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace testutil {

using Complex = std::complex<double>;

inline bool close(Complex a, Complex b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(Complex a, Complex b, double tol) {
    const double scale = std::max(1.0, std::max(std::abs(a), std::abs(b)));
    return std::abs(a - b) <= tol * scale;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace testutil
