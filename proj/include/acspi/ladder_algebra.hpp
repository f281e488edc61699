#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "acspi/params.hpp"

namespace acspi {

using Complex = std::complex<double>;

enum class LadderOp { Annihilate, Create };

// Polynomial in ladder operators, kept in antinormal order: every stored
// term is a^p (a^dag)^q.  Zero coefficients are pruned exactly (no epsilon).
class LadderPolynomial {
public:
    // key = (p, q) for the word a^p (a^dag)^q
    using TermMap = std::map<std::pair<int, int>, Complex>;

    LadderPolynomial() = default;

    static LadderPolynomial identity() {
        LadderPolynomial lp;
        lp.add_term(0, 0, Complex(1.0, 0.0));
        return lp;
    }

    void add_term(int p, int q, Complex c) {
        if (p < 0 || q < 0) throw std::invalid_argument("LadderPolynomial: negative exponent");
        auto key = std::make_pair(p, q);
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

    Complex coeff(int p, int q) const {
        auto it = terms_.find(std::make_pair(p, q));
        return it == terms_.end() ? Complex(0.0, 0.0) : it->second;
    }

    int degree() const {
        int d = -1;
        for (const auto& [pq, c] : terms_) d = std::max(d, pq.first + pq.second);
        return d;
    }

    LadderPolynomial& operator+=(const LadderPolynomial& other) {
        for (const auto& [pq, c] : other.terms_) add_term(pq.first, pq.second, c);
        return *this;
    }

    LadderPolynomial& operator*=(Complex s) {
        if (s == Complex(0.0, 0.0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [pq, c] : terms_) c *= s;
        return *this;
    }

    // Right-multiply by a single ladder operator, restoring antinormal order.
    // a^p (a^dag)^q * a      = a^(p+1) (a^dag)^q - q * a^p (a^dag)^(q-1)
    // a^p (a^dag)^q * a^dag  = a^p (a^dag)^(q+1)
    LadderPolynomial times_letter(LadderOp op) const {
        LadderPolynomial out;
        for (const auto& [pq, c] : terms_) {
            const int p = pq.first;
            const int q = pq.second;
            if (op == LadderOp::Create) {
                out.add_term(p, q + 1, c);
            } else {
                out.add_term(p + 1, q, c);
                if (q > 0) out.add_term(p, q - 1, -static_cast<double>(q) * c);
            }
        }
        return out;
    }

private:
    TermMap terms_;
};

// Polynomial in the position operator Q: coeffs[k] multiplies Q^k.
class PositionPolynomial {
public:
    PositionPolynomial() = default;

    explicit PositionPolynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
        trim();
    }

    static PositionPolynomial zero() { return PositionPolynomial{}; }

    static PositionPolynomial monomial(int k, Complex c = Complex(1.0, 0.0)) {
        if (k < 0) throw std::invalid_argument("PositionPolynomial: negative power");
        std::vector<Complex> v(static_cast<std::size_t>(k) + 1, Complex(0.0, 0.0));
        v.back() = c;
        return PositionPolynomial(std::move(v));
    }

    const std::vector<Complex>& coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

    Complex coeff(int k) const {
        if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Complex(0.0, 0.0);
        return coeffs_[static_cast<std::size_t>(k)];
    }

    PositionPolynomial& operator+=(const PositionPolynomial& other) {
        if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size(), Complex(0.0, 0.0));
        for (std::size_t k = 0; k < other.coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
        trim();
        return *this;
    }

    PositionPolynomial operator+(const PositionPolynomial& other) const {
        PositionPolynomial out = *this;
        out += other;
        return out;
    }

    PositionPolynomial operator*(Complex s) const {
        PositionPolynomial out = *this;
        if (s == Complex(0.0, 0.0)) {
            out.coeffs_.clear();
            return out;
        }
        for (auto& c : out.coeffs_) c *= s;
        return out;
    }

    PositionPolynomial operator*(const PositionPolynomial& other) const {
        if (is_zero() || other.is_zero()) return zero();
        std::vector<Complex> prod(coeffs_.size() + other.coeffs_.size() - 1, Complex(0.0, 0.0));
        for (std::size_t i = 0; i < coeffs_.size(); ++i) {
            for (std::size_t j = 0; j < other.coeffs_.size(); ++j) {
                prod[i + j] += coeffs_[i] * other.coeffs_[j];
            }
        }
        return PositionPolynomial(std::move(prod));
    }

    // Evaluate at a scalar position value.
    Complex operator()(Complex q) const {
        Complex acc(0.0, 0.0);
        for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * q + coeffs_[k];
        return acc;
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == Complex(0.0, 0.0)) coeffs_.pop_back();
    }

    std::vector<Complex> coeffs_;
};

// Bring a sum of ladder-operator words into antinormal order by folding the
// letters through times_letter (the rewriting a^dag a -> a a^dag - 1 to fixpoint).
inline LadderPolynomial reorder_antinormal(
    const std::vector<std::pair<std::vector<LadderOp>, Complex>>& words) {
    LadderPolynomial out;
    for (const auto& [word, coeff] : words) {
        LadderPolynomial acc = LadderPolynomial::identity();
        for (LadderOp op : word) acc = acc.times_letter(op);
        acc *= coeff;
        out += acc;
    }
    return out;
}

// Antinormal form of (a + a^dag)^k for k = 0..max_k.
inline std::vector<LadderPolynomial> antinormal_sum_powers(int max_k) {
    std::vector<LadderPolynomial> powers;
    powers.reserve(static_cast<std::size_t>(max_k) + 1);
    powers.push_back(LadderPolynomial::identity());
    for (int k = 1; k <= max_k; ++k) {
        LadderPolynomial next = powers.back().times_letter(LadderOp::Annihilate);
        next += powers.back().times_letter(LadderOp::Create);
        powers.push_back(std::move(next));
    }
    return powers;
}

// Substitute Q = lambda * (a + a^dag) and reorder.  Linear in the input.
inline LadderPolynomial position_to_antinormal(const PositionPolynomial& p,
                                               const PhysicalParams& params) {
    LadderPolynomial out;
    if (p.is_zero()) return out;
    const auto powers = antinormal_sum_powers(p.degree());
    double lambda_k = 1.0;
    for (int k = 0; k <= p.degree(); ++k) {
        const Complex c = p.coeff(k);
        if (c != Complex(0.0, 0.0)) {
            LadderPolynomial scaled = powers[static_cast<std::size_t>(k)];
            scaled *= c * lambda_k;
            out += scaled;
        }
        lambda_k *= params.lambda;
    }
    return out;
}

// Matrix elements <n| a^p (a^dag)^q |n'> for n, n' < dim, computed exactly:
//   (a^dag)^q |n'> = sqrt((n'+q)!/n'!) |n'+q>,  a^p |m> = sqrt(m!/(m-p)!) |m-p>.
// Every element is exact, so truncation introduces no artifacts anywhere.
inline Eigen::MatrixXcd fock_matrix(const LadderPolynomial& lp, int dim) {
    if (dim < 1) throw std::invalid_argument("fock_matrix: dim must be >= 1");
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (const auto& [pq, c] : lp.terms()) {
        const int p = pq.first;
        const int q = pq.second;
        for (int ncol = 0; ncol < dim; ++ncol) {
            const int m = ncol + q;
            const int nrow = m - p;
            if (nrow < 0 || nrow >= dim) continue;
            double amp = 1.0;
            for (int j = ncol + 1; j <= m; ++j) amp *= std::sqrt(static_cast<double>(j));
            for (int j = nrow + 1; j <= m; ++j) amp *= std::sqrt(static_cast<double>(j));
            out(nrow, ncol) += c * amp;
        }
    }
    return out;
}

}  // namespace acspi
