#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "acspi/ladder_algebra.hpp"

namespace acspi {

// Gauss-Hermite rule for the weight exp(-x^2): integrates polynomials of
// degree <= 2n-1 exactly.  Golub-Welsch on the Hermite Jacobi matrix; nodes
// are symmetrized about 0 so the pairing x_i = -x_{n-1-i} holds exactly.
inline void gauss_hermite_rule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1 || n > 256) throw std::invalid_argument("gauss_hermite_rule: n must be in [1, 256]");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const double mu0 = std::sqrt(M_PI);
    if (n == 1) {
        nodes[0] = 0.0;
        weights[0] = mu0;
        return;
    }

    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = std::sqrt(0.5 * static_cast<double>(k));
        jacobi(k, k - 1) = b;
        jacobi(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    if (solver.info() != Eigen::Success) throw std::runtime_error("gauss_hermite_rule: eigensolver failed");

    for (int i = 0; i < n; ++i) {
        nodes[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
        const double v0 = solver.eigenvectors()(0, i);
        weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
    }

    // enforce the exact +/- pairing
    for (int i = 0; i < n / 2; ++i) {
        const int j = n - 1 - i;
        const double mag = 0.5 * (nodes[static_cast<std::size_t>(j)] - nodes[static_cast<std::size_t>(i)]);
        nodes[static_cast<std::size_t>(i)] = -mag;
        nodes[static_cast<std::size_t>(j)] = mag;
        const double w = 0.5 * (weights[static_cast<std::size_t>(i)] + weights[static_cast<std::size_t>(j)]);
        weights[static_cast<std::size_t>(i)] = w;
        weights[static_cast<std::size_t>(j)] = w;
    }
    if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

// Fixed phase-space abscissas alpha_j with weights w_j > 0 such that
//   integral (d^2 alpha / pi) f(alpha)  ~=  sum_j w_j f(alpha_j)
// for integrands carrying at least exp(-|alpha - center|^2) decay.
struct QuadratureGrid {
    std::vector<Complex> nodes;
    std::vector<double> weights;
    int n_re = 0;
    int n_im = 0;
    double s_re = 1.0;
    double s_im = 1.0;
    Complex center{0.0, 0.0};

    std::size_t size() const { return nodes.size(); }
};

// Scaled 2-D product rule.  Node (i,k) = center + s_re x_i + i s_im y_k;
// the Gaussian reference weight is folded back into w so that plain sums
// over the grid realize the phase-space integral.
inline QuadratureGrid product_grid(int n_re, int n_im, double s_re, double s_im,
                                   Complex center = Complex(0.0, 0.0)) {
    if (n_re < 1 || n_im < 1) throw std::invalid_argument("product_grid: counts must be >= 1");
    if (!(s_re > 0.0) || !(s_im > 0.0)) throw std::invalid_argument("product_grid: scalings must be > 0");

    std::vector<double> xs, wx, ys, wy;
    gauss_hermite_rule(n_re, xs, wx);
    gauss_hermite_rule(n_im, ys, wy);

    QuadratureGrid grid;
    grid.n_re = n_re;
    grid.n_im = n_im;
    grid.s_re = s_re;
    grid.s_im = s_im;
    grid.center = center;
    grid.nodes.reserve(static_cast<std::size_t>(n_re) * static_cast<std::size_t>(n_im));
    grid.weights.reserve(grid.nodes.capacity());

    const double scale = s_re * s_im / M_PI;
    for (int i = 0; i < n_re; ++i) {
        for (int k = 0; k < n_im; ++k) {
            const double x = xs[static_cast<std::size_t>(i)];
            const double y = ys[static_cast<std::size_t>(k)];
            grid.nodes.push_back(center + Complex(s_re * x, s_im * y));
            grid.weights.push_back(scale * wx[static_cast<std::size_t>(i)] *
                                   wy[static_cast<std::size_t>(k)] * std::exp(x * x + y * y));
        }
    }
    return grid;
}

// Worst-case deviation of the discretized resolution of identity over the
// probe states: max_beta | sum_j w_j |<beta|alpha_j>|^2 - 1 |.
inline double identity_residual(const QuadratureGrid& grid, const std::vector<Complex>& probes) {
    if (probes.empty()) throw std::invalid_argument("identity_residual: probes must be nonempty");
    double worst = 0.0;
    for (const Complex beta : probes) {
        double acc = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j) {
            acc += grid.weights[j] * std::exp(-std::norm(beta - grid.nodes[j]));
        }
        worst = std::max(worst, std::abs(acc - 1.0));
    }
    return worst;
}

}  // namespace acspi
