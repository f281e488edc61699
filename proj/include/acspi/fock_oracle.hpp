#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include <Eigen/Dense>

#include "acspi/ladder_algebra.hpp"
#include "acspi/models.hpp"
#include "acspi/params.hpp"

namespace acspi {

// Reference-basis state: coefficients over the harmonic-oscillator number
// states |0> .. |dim-1>.
struct FockState {
    Eigen::VectorXcd c;

    int dim() const { return static_cast<int>(c.size()); }
    double norm2() const { return c.squaredNorm(); }
};

// c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!), truncated at dim terms.
inline FockState coherent_in_fock(Complex alpha, int dim, std::ostream* diag = nullptr) {
    if (dim < 1) throw std::invalid_argument("coherent_in_fock: dim must be >= 1");
    FockState state;
    state.c = Eigen::VectorXcd::Zero(dim);
    state.c(0) = Complex(std::exp(-0.5 * std::norm(alpha)), 0.0);
    for (int n = 1; n < dim; ++n) {
        state.c(n) = state.c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    const double loss = 1.0 - state.norm2();
    if (diag != nullptr && loss > 1e-8) {
        *diag << "coherent_in_fock: truncation loss " << loss << " at dim " << dim << "\n";
    }
    return state;
}

// H = hbar omega0 (n + 1/2) + H1(t) in the number basis.  The harmonic part
// is exactly diagonal; the anharmonic part enters through its antinormal form.
inline Eigen::MatrixXcd hamiltonian_matrix(const PotentialSpec& spec, double t,
                                           const PhysicalParams& params, int dim) {
    const PositionPolynomial h1 = anharmonic_part(spec, params, t);
    const int min_dim = h1.is_zero() ? 1 : h1.degree() + 2;
    if (dim < min_dim) throw std::invalid_argument("hamiltonian_matrix: dim too small for H1 degree");

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) h(n, n) = Complex(params.hbar * params.omega0 * (n + 0.5), 0.0);
    if (!h1.is_zero()) h += fock_matrix(position_to_antinormal(h1, params), dim);
    return h;
}

namespace detail {

// One-step unitary exp(-i H dt / hbar) through the spectral decomposition.
inline Eigen::MatrixXcd step_unitary(const Eigen::MatrixXcd& h, double dt, double hbar) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() != Eigen::Success) throw std::runtime_error("step_unitary: eigensolver failed");
    const Eigen::VectorXd& e = es.eigenvalues();
    Eigen::VectorXcd phases(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) {
        phases(k) = std::exp(Complex(0.0, -e(k) * dt / hbar));
    }
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

// Exact unitary stepping in the truncated number basis.  The drive is sampled
// at each step midpoint; propagators are cached on the quantized drive
// coefficient so periodic drives reuse decompositions.
inline FockState evolve_oracle(const FockState& initial, const PotentialSpec& spec, double t_total,
                               int n_steps, const PhysicalParams& params,
                               const std::function<void(double, const FockState&)>& observer = {}) {
    if (n_steps < 1) throw std::invalid_argument("evolve_oracle: n_steps must be >= 1");
    const int dim = initial.dim();
    const double dt = t_total / n_steps;
    const bool driven = spec.drive_active && spec.drive_amplitude != 0.0;

    FockState state = initial;
    if (!driven) {
        const Eigen::MatrixXcd u =
            detail::step_unitary(hamiltonian_matrix(spec, 0.0, params, dim), dt, params.hbar);
        for (int k = 0; k < n_steps; ++k) {
            state.c = u * state.c;
            if (observer) observer(dt * (k + 1), state);
        }
        return state;
    }

    constexpr double kDriveQuantum = 1e-12;
    constexpr std::size_t kCacheCap = 1024;
    std::unordered_map<long long, Eigen::MatrixXcd> cache;
    for (int k = 0; k < n_steps; ++k) {
        const double t_mid = dt * (k + 0.5);
        const double d = spec.drive_amplitude * std::sin(spec.drive_frequency * t_mid);
        const long long key = std::llround(d / kDriveQuantum);
        const auto it = cache.find(key);
        if (it != cache.end()) {
            state.c = it->second * state.c;
        } else {
            Eigen::MatrixXcd u =
                detail::step_unitary(hamiltonian_matrix(spec, t_mid, params, dim), dt, params.hbar);
            state.c = u * state.c;
            if (cache.size() < kCacheCap) cache.emplace(key, std::move(u));
        }
        if (observer) observer(dt * (k + 1), state);
    }
    return state;
}

// Gap between the two lowest eigenvalues of the static Hamiltonian.  The
// basis size must already be converged: the value at dim and dim + 20 must
// agree to 1e-8 relative or the call fails.
inline double tunneling_splitting(const PotentialSpec& spec, const PhysicalParams& params, int dim) {
    if (spec.drive_active && spec.drive_amplitude != 0.0) {
        throw std::invalid_argument("tunneling_splitting: drive must be off");
    }
    const auto gap_at = [&](int d) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian_matrix(spec, 0.0, params, d));
        if (es.info() != Eigen::Success) throw std::runtime_error("tunneling_splitting: eigensolver failed");
        return es.eigenvalues()(1) - es.eigenvalues()(0);
    };
    const double gap = gap_at(dim);
    const double gap_check = gap_at(dim + 20);
    if (!(gap > 0.0) || std::abs(gap - gap_check) > 1e-8 * std::abs(gap_check)) {
        throw std::runtime_error("tunneling_splitting: basis size not converged");
    }
    return gap;
}

// <Q> over the truncated basis, normalized by the state norm.
inline double fock_expectation_Q(const FockState& state, const PhysicalParams& params) {
    const double n2 = state.norm2();
    if (n2 == 0.0) throw std::domain_error("fock_expectation_Q: zero-norm state");
    Complex upper(0.0, 0.0);
    for (int n = 0; n + 1 < state.dim(); ++n) {
        upper += std::conj(state.c(n)) * state.c(n + 1) * std::sqrt(static_cast<double>(n + 1));
    }
    return 2.0 * params.lambda * upper.real() / n2;
}

// <Q^2>: diagonal lambda^2 (2n+1) plus the two-quantum band.
inline double fock_expectation_Q2(const FockState& state, const PhysicalParams& params) {
    const double n2 = state.norm2();
    if (n2 == 0.0) throw std::domain_error("fock_expectation_Q2: zero-norm state");
    const double lam2 = params.lambda * params.lambda;
    double diag = 0.0;
    Complex band(0.0, 0.0);
    for (int n = 0; n < state.dim(); ++n) {
        diag += (2.0 * n + 1.0) * std::norm(state.c(n));
        if (n + 2 < state.dim()) {
            band += std::conj(state.c(n)) * state.c(n + 2) *
                    std::sqrt(static_cast<double>((n + 1) * (n + 2)));
        }
    }
    return lam2 * (diag + 2.0 * band.real()) / n2;
}

}  // namespace acspi
