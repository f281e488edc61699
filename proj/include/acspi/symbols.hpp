#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "acspi/ladder_algebra.hpp"
#include "acspi/params.hpp"

namespace acspi {

// Polynomial in (alpha, alpha*): sum of s_{mn} alpha^m (alpha*)^n.
// For an antinormal-ordered operator this is its phase-space symbol, obtained
// by the substitution a -> alpha, a^dag -> alpha*.
class SymbolPolynomial {
public:
    using TermMap = std::map<std::pair<int, int>, Complex>;

    SymbolPolynomial() = default;

    static SymbolPolynomial constant(Complex c) {
        SymbolPolynomial s;
        s.add_term(0, 0, c);
        return s;
    }

    void add_term(int m, int n, Complex c) {
        if (m < 0 || n < 0) throw std::invalid_argument("SymbolPolynomial: negative exponent");
        auto key = std::make_pair(m, n);
        auto it = terms_.find(key);
        if (it == terms_.end()) {
            if (c != Complex(0.0, 0.0)) terms_.emplace(key, c);
        } else {
            it->second += c;
            if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
        }
    }

    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    int degree() const {
        int d = -1;
        for (const auto& [mn, c] : terms_) d = std::max(d, mn.first + mn.second);
        return d;
    }

    Complex coeff(int m, int n) const {
        auto it = terms_.find(std::make_pair(m, n));
        return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
    }

    SymbolPolynomial& operator+=(const SymbolPolynomial& other) {
        for (const auto& [mn, c] : other.terms_) add_term(mn.first, mn.second, c);
        return *this;
    }

    SymbolPolynomial& operator*=(Complex s) {
        if (s == Complex(0.0, 0.0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [mn, c] : terms_) c *= s;
        return *this;
    }

    // Exact term-sum evaluation with precomputed powers of alpha and alpha*.
    Complex operator()(Complex alpha) const {
        const int d = degree();
        if (d < 0) return Complex(0.0, 0.0);
        std::vector<Complex> pa(static_cast<std::size_t>(d) + 1), pc(static_cast<std::size_t>(d) + 1);
        pa[0] = pc[0] = Complex(1.0, 0.0);
        const Complex ac = std::conj(alpha);
        for (int k = 1; k <= d; ++k) {
            pa[static_cast<std::size_t>(k)] = pa[static_cast<std::size_t>(k - 1)] * alpha;
            pc[static_cast<std::size_t>(k)] = pc[static_cast<std::size_t>(k - 1)] * ac;
        }
        Complex acc(0.0, 0.0);
        for (const auto& [mn, c] : terms_) {
            acc += c * pa[static_cast<std::size_t>(mn.first)] * pc[static_cast<std::size_t>(mn.second)];
        }
        return acc;
    }

private:
    TermMap terms_;
};

// Kernel truncation order K of the short-time factor.
struct SymbolTruncation {
    int K = 4;

    SymbolTruncation() = default;
    explicit SymbolTruncation(int k) : K(k) {
        if (K < 1) throw std::invalid_argument("SymbolTruncation: K must be >= 1");
    }
};

// Symbol of an antinormal-ordered polynomial: a^p (a^dag)^q -> alpha^p (alpha*)^q.
inline SymbolPolynomial symbol_of(const LadderPolynomial& lp) {
    SymbolPolynomial s;
    for (const auto& [pq, c] : lp.terms()) s.add_term(pq.first, pq.second, c);
    return s;
}

// Symbols of Q^k for k = 0..max_k, via the operator-ordering route.
inline std::vector<SymbolPolynomial> q_power_symbols(int max_k, const PhysicalParams& params) {
    if (max_k < 0) throw std::invalid_argument("q_power_symbols: max_k must be >= 0");
    std::vector<SymbolPolynomial> out;
    out.reserve(static_cast<std::size_t>(max_k) + 1);
    const auto powers = antinormal_sum_powers(max_k);
    double lambda_k = 1.0;
    for (int k = 0; k <= max_k; ++k) {
        SymbolPolynomial s = symbol_of(powers[static_cast<std::size_t>(k)]);
        s *= Complex(lambda_k, 0.0);
        out.push_back(std::move(s));
        lambda_k *= params.lambda;
    }
    return out;
}

// Same symbols through Gaussian de-smoothing:
//   exp(-(lambda^2/2) d^2/dq^2) q^k  evaluated at q = lambda (alpha + alpha*).
// Independent of the ordering route; the two must agree coefficient-wise.
inline std::vector<SymbolPolynomial> q_power_symbols_desmoothed(int max_k,
                                                               const PhysicalParams& params) {
    if (max_k < 0) throw std::invalid_argument("q_power_symbols_desmoothed: max_k must be >= 0");
    const double lam2 = params.lambda * params.lambda;

    // binomials up to max_k
    std::vector<std::vector<double>> binom(static_cast<std::size_t>(max_k) + 1);
    for (int r = 0; r <= max_k; ++r) {
        binom[static_cast<std::size_t>(r)].assign(static_cast<std::size_t>(r) + 1, 1.0);
        for (int m = 1; m < r; ++m) {
            binom[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)] =
                binom[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(m - 1)] +
                binom[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(m)];
        }
    }

    std::vector<SymbolPolynomial> out;
    out.reserve(static_cast<std::size_t>(max_k) + 1);
    for (int k = 0; k <= max_k; ++k) {
        SymbolPolynomial s;
        // term j of the heat-kernel series: (-lam2/2)^j/j! * k!/(k-2j)! * q^(k-2j)
        double series = 1.0;  // (-lam2/2)^j / j! * falling factorial
        for (int j = 0; 2 * j <= k; ++j) {
            const int r = k - 2 * j;
            // substitute q^r = lambda^r (alpha + alpha*)^r
            double lam_r = 1.0;
            for (int i = 0; i < r; ++i) lam_r *= params.lambda;
            for (int m = 0; m <= r; ++m) {
                s.add_term(m, r - m,
                           Complex(series * lam_r * binom[static_cast<std::size_t>(r)][static_cast<std::size_t>(m)], 0.0));
            }
            series *= -0.5 * lam2 / static_cast<double>(j + 1);
            series *= static_cast<double>(r) * static_cast<double>(r - 1);
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline constexpr int kDefaultSymbolDegreeCap = 64;

// Term-wise map of a position-polynomial series through the Q^k symbols.
inline SymbolPolynomial position_series_symbol(const PositionPolynomial& series,
                                               const PhysicalParams& params) {
    SymbolPolynomial out;
    if (series.degree() < 0) return out;
    const auto q_syms = q_power_symbols(series.degree(), params);
    for (int k = 0; k <= series.degree(); ++k) {
        const Complex c = series.coeff(k);
        if (c == Complex(0.0, 0.0)) continue;
        SymbolPolynomial part = q_syms[static_cast<std::size_t>(k)];
        part *= c;
        out += part;
    }
    return out;
}

// Symbol of the truncated short-time kernel
//   sum_{n=0}^{K} ((-i dt)^n / n!) (H1/hbar)^n
// for a position-polynomial H1.  The power series is formed exactly as a
// position polynomial of degree deg(H1)*K and mapped term-wise through
// q_power_symbols.
inline SymbolPolynomial build_G_symbol(const PositionPolynomial& H1, double dt,
                                       const SymbolTruncation& trunc, const PhysicalParams& params,
                                       int degree_cap = kDefaultSymbolDegreeCap) {
    if (trunc.K < 1) throw std::invalid_argument("build_G_symbol: K must be >= 1");
    if (H1.is_zero() || dt == 0.0) return SymbolPolynomial::constant(Complex(1.0, 0.0));

    const int total_degree = H1.degree() * trunc.K;
    if (total_degree > degree_cap) {
        throw std::invalid_argument("build_G_symbol: deg(H1)*K exceeds the degree cap");
    }

    const Complex z = Complex(0.0, -dt / params.hbar);
    PositionPolynomial series = PositionPolynomial::monomial(0);  // n = 0 term
    PositionPolynomial h_power = PositionPolynomial::monomial(0);
    Complex factor(1.0, 0.0);
    for (int n = 1; n <= trunc.K; ++n) {
        h_power = h_power * H1;
        factor *= z / static_cast<double>(n);
        series += h_power * factor;
    }
    return position_series_symbol(series, params);
}

// Split of the truncated kernel for a linearly driven potential.  With
// H1(t) = A + c(t) q the series is a polynomial in the scalar c:
//   sum_{n=0}^{K} (z^n/n!) (A + c q)^n = sum_{m=0}^{K} c^m G_m,
//   G_m = q^m sum_{n=m}^{K} (z^n/n!) C(n,m) A^{n-m},   z = -i dt / hbar.
// Exact in the commutative position algebra, so recombining the returned
// symbols with powers of c matches build_G_symbol of the full H1(t) up to
// roundoff.  A driven run tabulates the K+1 symbols on the grid once and
// recombines per step.
inline std::vector<SymbolPolynomial> build_G_drive_expansion(
    const PositionPolynomial& A, double dt, const SymbolTruncation& trunc,
    const PhysicalParams& params, int degree_cap = kDefaultSymbolDegreeCap) {
    if (trunc.K < 1) throw std::invalid_argument("build_G_drive_expansion: K must be >= 1");
    if (std::max(A.degree(), 1) * trunc.K > degree_cap) {
        throw std::invalid_argument("build_G_drive_expansion: deg(H1)*K exceeds the degree cap");
    }
    const auto kk = static_cast<std::size_t>(trunc.K);
    const Complex z(0.0, -dt / params.hbar);
    std::vector<Complex> zfac(kk + 1);
    std::vector<PositionPolynomial> apow(kk + 1);
    zfac[0] = Complex(1.0, 0.0);
    apow[0] = PositionPolynomial::monomial(0);
    for (std::size_t n = 1; n <= kk; ++n) {
        zfac[n] = zfac[n - 1] * z / static_cast<double>(n);
        apow[n] = apow[n - 1] * A;
    }
    std::vector<std::vector<double>> binom(kk + 1);
    for (std::size_t n = 0; n <= kk; ++n) {
        binom[n].assign(n + 1, 1.0);
        for (std::size_t m = 1; m < n; ++m) {
            binom[n][m] = binom[n - 1][m - 1] + binom[n - 1][m];
        }
    }
    std::vector<SymbolPolynomial> out;
    out.reserve(kk + 1);
    for (std::size_t m = 0; m <= kk; ++m) {
        PositionPolynomial series = PositionPolynomial::zero();
        for (std::size_t n = m; n <= kk; ++n) {
            series += apow[n - m] * (zfac[n] * binom[n][m]);
        }
        series = series * PositionPolynomial::monomial(static_cast<int>(m));
        out.push_back(position_series_symbol(series, params));
    }
    return out;
}

}  // namespace acspi
