#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <utility>

#include <Eigen/Dense>

#include "acspi/errors.hpp"
#include "acspi/models.hpp"
#include "acspi/params.hpp"
#include "acspi/quadrature.hpp"
#include "acspi/symbols.hpp"

namespace acspi {

// <alpha|beta> with the exponents combined before exponentiating; the real
// part of the exponent is -|alpha - beta|^2 / 2 <= 0, so this never overflows
// and |result| <= 1.
inline Complex coherent_overlap(Complex alpha, Complex beta) {
    const Complex expo =
        Complex(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta), 0.0) + std::conj(alpha) * beta;
    return std::exp(expo);
}

// Weighted coherent-state samples of a wave function: v_j = sqrt(w_j) <alpha_j|psi>.
struct CSState {
    Eigen::VectorXcd v;
    std::shared_ptr<const QuadratureGrid> grid;
    double time = 0.0;
};

// Dense one-step kernel.  built_for_time records the drive midpoint the
// kernel was assembled for (0 for static potentials); K the truncation order
// of the symbol it carries (-1 when assembled from a bare symbol).
struct StepMatrix {
    Eigen::MatrixXcd P;
    std::shared_ptr<const QuadratureGrid> grid;
    double dt = 0.0;
    double built_for_time = 0.0;
    double omega0 = 0.0;
    int K = -1;
};

namespace detail {

// Harmonic part of the step kernel: sqrt(w_i w_j) e^{-i omega0 dt/2}
// <alpha_i e^{+i omega0 dt} | alpha_j>.  Independent of the potential, so a
// driven run computes it once and rescales rows per step.
inline Eigen::MatrixXcd harmonic_factor(const QuadratureGrid& grid, double dt,
                                        const PhysicalParams& params) {
    const auto n = static_cast<Eigen::Index>(grid.size());
    const Complex rot = std::exp(Complex(0.0, params.omega0 * dt));
    const Complex phase = std::exp(Complex(0.0, -0.5 * params.omega0 * dt));
    Eigen::VectorXd sw(n);
    for (Eigen::Index j = 0; j < n; ++j) sw(j) = std::sqrt(grid.weights[static_cast<std::size_t>(j)]);

    Eigen::MatrixXcd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex ai_rot = grid.nodes[static_cast<std::size_t>(i)] * rot;
        const Complex row_pref = sw(i) * phase;
        for (Eigen::Index j = 0; j < n; ++j) {
            c(i, j) = row_pref * sw(j) * coherent_overlap(ai_rot, grid.nodes[static_cast<std::size_t>(j)]);
        }
    }
    return c;
}

// Row i of the full kernel is the harmonic factor scaled by the anharmonic
// symbol at the half-rotated node alpha_i e^{+i omega0 dt/2}.
inline void scale_rows(const Eigen::MatrixXcd& harmonic, const QuadratureGrid& grid,
                       const SymbolPolynomial& g_sym, double dt, const PhysicalParams& params,
                       Eigen::MatrixXcd& out) {
    const Complex half_rot = std::exp(Complex(0.0, 0.5 * params.omega0 * dt));
    out.resize(harmonic.rows(), harmonic.cols());
    for (Eigen::Index i = 0; i < harmonic.rows(); ++i) {
        const Complex g = g_sym(grid.nodes[static_cast<std::size_t>(i)] * half_rot);
        out.row(i) = g * harmonic.row(i);
    }
}

}  // namespace detail

// State projection of a coherent initial wave packet |alpha0>.
inline CSState project_initial(std::shared_ptr<const QuadratureGrid> grid, Complex alpha0,
                               std::ostream* diag = nullptr);

// Discretized resolution-of-identity norm: v^dag Gamma v with
// Gamma_ij = sqrt(w_i w_j) <alpha_i|alpha_j>.  Clamped at zero; the Gram form
// is positive semidefinite up to rounding.
inline double norm_estimate(const CSState& state) {
    const auto& grid = *state.grid;
    const auto n = static_cast<Eigen::Index>(grid.size());
    Complex acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex yi = std::conj(std::sqrt(grid.weights[static_cast<std::size_t>(i)]) * state.v(i));
        for (Eigen::Index j = 0; j < n; ++j) {
            acc += yi * coherent_overlap(grid.nodes[static_cast<std::size_t>(i)],
                                         grid.nodes[static_cast<std::size_t>(j)]) *
                   std::sqrt(grid.weights[static_cast<std::size_t>(j)]) * state.v(j);
        }
    }
    return std::max(0.0, acc.real());
}

// Norm and the first two position moments in one pass over the Gram kernel.
// The three quadratic forms share the pairwise overlap, which dominates the
// cost; the imaginary residues of all three are checked here.
struct Moments {
    double norm = 0.0;
    double q = 0.0;
    double q2 = 0.0;
};

inline Moments moments(const CSState& state, const PhysicalParams& params) {
    const auto& grid = *state.grid;
    const auto n = static_cast<Eigen::Index>(grid.size());
    Complex n_acc(0.0, 0.0), q_acc(0.0, 0.0), q2_acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex ai = grid.nodes[static_cast<std::size_t>(i)];
        const Complex yi = std::conj(std::sqrt(grid.weights[static_cast<std::size_t>(i)]) * state.v(i));
        for (Eigen::Index j = 0; j < n; ++j) {
            const Complex aj = grid.nodes[static_cast<std::size_t>(j)];
            const Complex t = yi * coherent_overlap(ai, aj) *
                              std::sqrt(grid.weights[static_cast<std::size_t>(j)]) * state.v(j);
            const Complex s = std::conj(ai) + aj;
            n_acc += t;
            q_acc += t * s;
            q2_acc += t * (s * s + 1.0);
        }
    }

    const auto realize = [](Complex z, const char* what) {
        if (std::abs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z))) {
            throw numerical_abort(std::string("moments: non-real ") + what + " residue");
        }
        return z.real();
    };

    Moments m;
    m.norm = std::max(0.0, realize(n_acc, "norm"));
    if (m.norm <= 0.0) throw std::domain_error("moments: zero-norm state");
    m.q = params.lambda * realize(q_acc, "mean-Q") / m.norm;
    m.q2 = params.lambda * params.lambda * realize(q2_acc, "mean-Q2") / m.norm;
    return m;
}

inline double expectation_Q(const CSState& state, const PhysicalParams& params) {
    return moments(state, params).q;
}

inline double expectation_Q2(const CSState& state, const PhysicalParams& params) {
    return moments(state, params).q2;
}

inline CSState project_initial(std::shared_ptr<const QuadratureGrid> grid, Complex alpha0,
                               std::ostream* diag) {
    if (!grid) throw std::invalid_argument("project_initial: null grid");
    CSState state;
    state.grid = std::move(grid);
    state.time = 0.0;
    const auto n = static_cast<Eigen::Index>(state.grid->size());
    state.v.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        state.v(j) = std::sqrt(state.grid->weights[static_cast<std::size_t>(j)]) *
                     coherent_overlap(state.grid->nodes[static_cast<std::size_t>(j)], alpha0);
    }
    if (diag != nullptr) {
        const double nrm = norm_estimate(state);
        if (nrm < 0.99) {
            *diag << "project_initial: initial state poorly covered by the grid (norm estimate "
                  << nrm << ")\n";
        }
    }
    return state;
}

// Full one-step kernel for a fixed anharmonic symbol.
inline StepMatrix build_step_matrix(std::shared_ptr<const QuadratureGrid> grid,
                                    const SymbolPolynomial& g_sym, double dt,
                                    const PhysicalParams& params, double built_for_time = 0.0,
                                    int K = -1) {
    if (!grid) throw std::invalid_argument("build_step_matrix: null grid");
    StepMatrix m;
    m.grid = std::move(grid);
    m.dt = dt;
    m.built_for_time = built_for_time;
    m.omega0 = params.omega0;
    m.K = K;
    const Eigen::MatrixXcd harmonic = detail::harmonic_factor(*m.grid, dt, params);
    detail::scale_rows(harmonic, *m.grid, g_sym, dt, params, m.P);
    return m;
}

inline CSState step(const CSState& state, const StepMatrix& m) {
    if (state.grid != m.grid) throw std::invalid_argument("step: state and matrix use different grids");
    CSState out;
    out.grid = state.grid;
    out.time = state.time + m.dt;
    out.v = m.P * state.v;
    return out;
}

// Repeated stepping over t_total.  A static potential assembles the kernel
// once; an active drive recombines precomputed kernel symbols with powers of
// the drive coefficient at each step midpoint.  The norm estimate is sampled every
// norm_check_every steps (and at the end): below norm_floor the packet has
// escaped the grid; above norm_ceiling (or NaN) the truncated kernel has gone
// unstable, which happens when dt is too large for the grid extent.  Either
// way the run aborts rather than emit untrustworthy output.
inline CSState propagate(const CSState& initial, const PotentialSpec& spec, double t_total,
                         int n_steps, const SymbolTruncation& trunc, const PhysicalParams& params,
                         const std::function<void(double, const CSState&)>& observer = {},
                         double norm_floor = 0.5, int norm_check_every = 16,
                         std::ostream* diag = nullptr, double norm_ceiling = 2.0) {
    if (n_steps < 1) throw std::invalid_argument("propagate: n_steps must be >= 1");
    if (norm_check_every < 1) throw std::invalid_argument("propagate: norm_check_every must be >= 1");
    const double dt = t_total / n_steps;
    const bool driven = spec.drive_active && spec.drive_amplitude != 0.0;

    CSState state = initial;
    Eigen::VectorXcd tmp(state.v.size());

    const auto check_norm = [&](int step_idx) {
        if ((step_idx + 1) % norm_check_every != 0 && step_idx + 1 != n_steps) return;
        const double nrm = norm_estimate(state);
        if (nrm < norm_floor || !(nrm < norm_ceiling)) {
            if (diag != nullptr) {
                *diag << "propagate: norm estimate " << nrm << " outside [" << norm_floor << ", "
                      << norm_ceiling << ") at t = " << state.time
                      << (nrm < norm_floor ? " (grid escape)" : " (unstable step size)") << "\n";
            }
            throw numerical_abort(nrm < norm_floor
                                      ? "propagate: norm estimate below floor (grid escape)"
                                      : "propagate: norm estimate above ceiling (step too large "
                                        "for the grid extent)");
        }
    };

    if (!driven) {
        const SymbolPolynomial g =
            build_G_symbol(anharmonic_part(spec, params, 0.0), dt, trunc, params);
        const StepMatrix m = build_step_matrix(state.grid, g, dt, params, 0.0, trunc.K);
        for (int k = 0; k < n_steps; ++k) {
            tmp.noalias() = m.P * state.v;
            state.v.swap(tmp);
            state.time = initial.time + dt * (k + 1);
            check_norm(k);
            if (observer) observer(state.time, state);
        }
        return state;
    }

    // Drive-split kernel: H1(t) = A + c(t) q with c = S sin(omega t), so the
    // per-step symbol is sum_m c^m G_m with fixed G_m.  Tabulating G_m at the
    // half-rotated nodes once makes a driven step one dense matrix-vector
    // product plus a row rescale, the same cost as a static step.
    const Eigen::MatrixXcd harmonic = detail::harmonic_factor(*state.grid, dt, params);
    PotentialSpec still = spec;
    still.drive_active = false;
    const std::vector<SymbolPolynomial> parts =
        build_G_drive_expansion(anharmonic_part(still, params, 0.0), dt, trunc, params);
    const Complex half_rot = std::exp(Complex(0.0, 0.5 * params.omega0 * dt));
    const Eigen::Index n_nodes = state.v.size();
    const auto n_parts = static_cast<Eigen::Index>(parts.size());
    Eigen::MatrixXcd gtab(n_nodes, n_parts);
    for (Eigen::Index i = 0; i < n_nodes; ++i) {
        const Complex arg = state.grid->nodes[static_cast<std::size_t>(i)] * half_rot;
        for (Eigen::Index m = 0; m < n_parts; ++m) {
            gtab(i, m) = parts[static_cast<std::size_t>(m)](arg);
        }
    }
    Eigen::VectorXcd cpow(n_parts), gfac(n_nodes);
    for (int k = 0; k < n_steps; ++k) {
        const double t_mid = initial.time + dt * (k + 0.5);
        const Complex c(spec.drive_amplitude * std::sin(spec.drive_frequency * t_mid), 0.0);
        cpow(0) = Complex(1.0, 0.0);
        for (Eigen::Index m = 1; m < n_parts; ++m) cpow(m) = cpow(m - 1) * c;
        gfac.noalias() = gtab * cpow;
        tmp.noalias() = harmonic * state.v;
        state.v = gfac.cwiseProduct(tmp);
        state.time = initial.time + dt * (k + 1);
        check_norm(k);
        if (observer) observer(state.time, state);
    }
    return state;
}

}  // namespace acspi
