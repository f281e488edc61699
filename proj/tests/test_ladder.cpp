#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "acspi/ladder_algebra.hpp"
#include "helpers.hpp"

using acspi::Complex;
using acspi::LadderOp;
using acspi::LadderPolynomial;
using acspi::PositionPolynomial;

namespace {

// Truncated ladder matrices: an independent route to the same operator.
// Inside the leading (dim - degree) block the truncation is invisible.
Eigen::MatrixXcd letter_matrix(LadderOp op, int dim) {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) a(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
    return op == LadderOp::Annihilate ? a : Eigen::MatrixXcd(a.adjoint());
}

Eigen::MatrixXcd word_matrix(const std::vector<LadderOp>& word, int dim) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    for (LadderOp op : word) m = m * letter_matrix(op, dim);
    return m;
}

}  // namespace

TEST_CASE("single-letter rewriting restores antinormal order", "[ladder]") {
    const auto ad_a = acspi::reorder_antinormal({{{LadderOp::Create, LadderOp::Annihilate}, Complex(1.0, 0.0)}});
    CHECK(ad_a.terms().size() == 2);
    CHECK(ad_a.coeff(1, 1) == Complex(1.0, 0.0));
    CHECK(ad_a.coeff(0, 0) == Complex(-1.0, 0.0));

    const auto quartic = acspi::reorder_antinormal(
        {{{LadderOp::Create, LadderOp::Create, LadderOp::Annihilate, LadderOp::Annihilate}, Complex(1.0, 0.0)}});
    CHECK(quartic.terms().size() == 3);
    CHECK(quartic.coeff(2, 2) == Complex(1.0, 0.0));
    CHECK(quartic.coeff(1, 1) == Complex(-4.0, 0.0));
    CHECK(quartic.coeff(0, 0) == Complex(2.0, 0.0));
}

TEST_CASE("letter rule lowers the creation count by one", "[ladder]") {
    LadderPolynomial p;
    p.add_term(2, 3, Complex(1.0, 0.0));
    const auto r = p.times_letter(LadderOp::Annihilate);
    CHECK(r.terms().size() == 2);
    CHECK(r.coeff(3, 3) == Complex(1.0, 0.0));
    CHECK(r.coeff(2, 2) == Complex(-3.0, 0.0));
}

TEST_CASE("sum powers match the two-letter expansion", "[ladder]") {
    const auto powers = acspi::antinormal_sum_powers(4);
    REQUIRE(powers.size() == 5);
    CHECK(powers[0].coeff(0, 0) == Complex(1.0, 0.0));
    CHECK(powers[2].coeff(2, 0) == Complex(1.0, 0.0));
    CHECK(powers[2].coeff(1, 1) == Complex(2.0, 0.0));
    CHECK(powers[2].coeff(0, 2) == Complex(1.0, 0.0));
    CHECK(powers[2].coeff(0, 0) == Complex(-1.0, 0.0));
    CHECK(powers[3].degree() == 3);

    // self-adjoint operator: coefficient map symmetric under (p,q) swap
    for (const auto& [pq, c] : powers[4].terms()) {
        CHECK(testutil::close(c, std::conj(powers[4].coeff(pq.second, pq.first)), 1e-15));
    }
}

TEST_CASE("exact matrix elements agree with truncated matrix products", "[ladder]") {
    const int dim = 30;
    std::mt19937 rng(0x5eed);
    std::uniform_int_distribution<int> len_dist(1, 6);
    std::uniform_int_distribution<int> letter_dist(0, 1);
    std::uniform_real_distribution<double> coeff_dist(-1.0, 1.0);

    for (int trial = 0; trial < 12; ++trial) {
        std::vector<std::pair<std::vector<LadderOp>, Complex>> words;
        Eigen::MatrixXcd oracle = Eigen::MatrixXcd::Zero(dim, dim);
        int max_len = 0;
        const int n_words = 1 + trial % 3;
        for (int w = 0; w < n_words; ++w) {
            const int len = len_dist(rng);
            max_len = std::max(max_len, len);
            std::vector<LadderOp> word;
            for (int i = 0; i < len; ++i) {
                word.push_back(letter_dist(rng) == 0 ? LadderOp::Annihilate : LadderOp::Create);
            }
            const Complex c(coeff_dist(rng), coeff_dist(rng));
            oracle += c * word_matrix(word, dim);
            words.emplace_back(std::move(word), c);
        }

        const auto reordered = acspi::reorder_antinormal(words);
        const auto exact = acspi::fock_matrix(reordered, dim);
        const int block = dim - max_len;
        const double dev = testutil::max_abs_diff(exact.topLeftCorner(block, block),
                                                  oracle.topLeftCorner(block, block));
        CHECK(dev <= 1e-10);
    }
}

TEST_CASE("number-shifted product has an exact diagonal", "[ladder]") {
    const auto a_ad = acspi::reorder_antinormal({{{LadderOp::Annihilate, LadderOp::Create}, Complex(1.0, 0.0)}});
    const auto m = acspi::fock_matrix(a_ad, 4);
    for (int n = 0; n < 4; ++n) {
        for (int k = 0; k < 4; ++k) {
            const Complex want = n == k ? Complex(n + 1.0, 0.0) : Complex(0.0, 0.0);
            CHECK(testutil::close(m(n, k), want, 1e-13));
        }
    }
}

TEST_CASE("position polynomials multiply and evaluate", "[ladder]") {
    const auto one_plus = PositionPolynomial({Complex(1.0, 0.0), Complex(1.0, 0.0)});
    const auto one_minus = PositionPolynomial({Complex(1.0, 0.0), Complex(-1.0, 0.0)});
    const auto prod = one_plus * one_minus;
    CHECK(prod.degree() == 2);
    CHECK(prod.coeff(0) == Complex(1.0, 0.0));
    CHECK(prod.coeff(1) == Complex(0.0, 0.0));
    CHECK(prod.coeff(2) == Complex(-1.0, 0.0));
    CHECK(testutil::close(prod(Complex(2.0, 1.0)), Complex(-2.0, -4.0), 1e-15));

    const auto zero = prod * Complex(0.0, 0.0);
    CHECK(zero.is_zero());
    CHECK(zero.degree() == -1);
}

TEST_CASE("position substitution reproduces the vacuum spread", "[ladder]") {
    const acspi::PhysicalParams params;
    const auto q2 = PositionPolynomial::monomial(2);
    const auto op = acspi::position_to_antinormal(q2, params);
    const double lam2 = params.lambda * params.lambda;
    CHECK(testutil::close(op.coeff(1, 1), Complex(2.0 * lam2, 0.0), 1e-15));
    CHECK(testutil::close(op.coeff(0, 0), Complex(-lam2, 0.0), 1e-15));

    const auto m = acspi::fock_matrix(op, 6);
    CHECK(testutil::close(m(0, 0), Complex(lam2, 0.0), 1e-14));
}

TEST_CASE("coefficients cancel without epsilon thresholds", "[ladder]") {
    LadderPolynomial p;
    p.add_term(1, 2, Complex(0.5, -0.25));
    p.add_term(1, 2, Complex(-0.5, 0.25));
    CHECK(p.is_zero());

    p.add_term(0, 1, Complex(3.0, 0.0));
    p *= Complex(0.0, 0.0);
    CHECK(p.is_zero());
    CHECK(p.degree() == -1);
}

TEST_CASE("invalid ladder inputs are rejected", "[ladder]") {
    LadderPolynomial p;
    CHECK_THROWS_AS(p.add_term(-1, 0, Complex(1.0, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(acspi::fock_matrix(p, 0), std::invalid_argument);
    CHECK_THROWS_AS(PositionPolynomial::monomial(-2), std::invalid_argument);
    CHECK_THROWS_AS(acspi::PhysicalParams(1.0, -1.0, 1.0), std::invalid_argument);
}
