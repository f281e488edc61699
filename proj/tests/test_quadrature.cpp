#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "acspi/quadrature.hpp"
#include "helpers.hpp"

using acspi::Complex;

TEST_CASE("smallest rules carry their closed-form nodes", "[quadrature]") {
    std::vector<double> x, w;
    acspi::gauss_hermite_rule(1, x, w);
    CHECK(x[0] == 0.0);
    CHECK(w[0] == Catch::Approx(std::sqrt(M_PI)).epsilon(1e-14));

    acspi::gauss_hermite_rule(2, x, w);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(x[0] == Catch::Approx(-inv_sqrt2).epsilon(1e-14));
    CHECK(x[1] == Catch::Approx(inv_sqrt2).epsilon(1e-14));
    CHECK(w[0] == Catch::Approx(0.88622692545275801).epsilon(1e-13));
    CHECK(w[1] == Catch::Approx(0.88622692545275801).epsilon(1e-13));
}

TEST_CASE("rules integrate Gaussian moments to closed form", "[quadrature]") {
    // integral x^(2m) e^(-x^2) dx = sqrt(pi) (2m-1)!! / 2^m, exact for 2m <= 2n-1
    std::vector<double> x, w;
    acspi::gauss_hermite_rule(8, x, w);
    double dfact = 1.0;
    double pow2 = 1.0;
    for (int m = 0; m <= 7; ++m) {
        if (m > 0) {
            dfact *= 2.0 * m - 1.0;
            pow2 *= 2.0;
        }
        double even = 0.0;
        double odd = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double x2m = std::pow(x[i], 2 * m);
            even += w[i] * x2m;
            odd += w[i] * x2m * x[i];
        }
        const double want = std::sqrt(M_PI) * dfact / pow2;
        CHECK(even == Catch::Approx(want).epsilon(1e-12));
        CHECK(std::abs(odd) <= 1e-13 * want);
    }
}

TEST_CASE("node pairing about zero is exact", "[quadrature]") {
    for (int n : {5, 12, 31}) {
        std::vector<double> x, w;
        acspi::gauss_hermite_rule(n, x, w);
        for (int i = 0; i < n / 2; ++i) {
            CHECK(x[static_cast<std::size_t>(i)] == -x[static_cast<std::size_t>(n - 1 - i)]);
            CHECK(w[static_cast<std::size_t>(i)] == w[static_cast<std::size_t>(n - 1 - i)]);
            CHECK(w[static_cast<std::size_t>(i)] > 0.0);
        }
        if (n % 2 == 1) CHECK(x[static_cast<std::size_t>(n / 2)] == 0.0);
    }
}

TEST_CASE("product grid folds the reference Gaussian into its weights", "[quadrature]") {
    const auto trivial = acspi::product_grid(1, 1, 1.0, 1.0);
    REQUIRE(trivial.size() == 1);
    CHECK(trivial.nodes[0] == Complex(0.0, 0.0));
    CHECK(trivial.weights[0] == Catch::Approx(1.0).epsilon(1e-14));

    const Complex center(1.0, -0.5);
    const auto grid = acspi::product_grid(3, 2, 2.0, 0.5, center);
    REQUIRE(grid.size() == 6);
    CHECK(grid.n_re == 3);
    CHECK(grid.n_im == 2);

    std::vector<double> xs, wx, ys, wy;
    acspi::gauss_hermite_rule(3, xs, wx);
    acspi::gauss_hermite_rule(2, ys, wy);
    // layout: index = i * n_im + k
    CHECK(testutil::close(grid.nodes[0], center + Complex(2.0 * xs[0], 0.5 * ys[0]), 1e-15));
    CHECK(testutil::close(grid.nodes[1], center + Complex(2.0 * xs[0], 0.5 * ys[1]), 1e-15));
    CHECK(testutil::close(grid.nodes[5], center + Complex(2.0 * xs[2], 0.5 * ys[1]), 1e-15));
    const double want_w = (2.0 * 0.5 / M_PI) * wx[1] * wy[0] * std::exp(xs[1] * xs[1] + ys[0] * ys[0]);
    CHECK(grid.weights[2] == Catch::Approx(want_w).epsilon(1e-13));
    for (double w : grid.weights) CHECK(w > 0.0);
}

TEST_CASE("discretized identity closes on coherent probes", "[quadrature]") {
    std::vector<Complex> probes;
    for (int i = -3; i <= 3; ++i) {
        for (int k = -3; k <= 3; ++k) {
            const Complex beta(0.5 * i, 0.5 * k);
            if (std::abs(beta) <= 1.5) probes.push_back(beta);
        }
    }

    const auto fine = acspi::product_grid(24, 24, 1.0, 1.0);
    const double res_fine = acspi::identity_residual(fine, probes);
    CHECK(res_fine <= 1e-6);

    const auto coarse = acspi::product_grid(12, 12, 1.0, 1.0);
    const double res_coarse = acspi::identity_residual(coarse, probes);
    CHECK(res_fine < res_coarse);

    // a single node resolves nothing away from its own center
    const auto single = acspi::product_grid(1, 1, 1.0, 1.0);
    const double res_single = acspi::identity_residual(single, {Complex(2.0, 0.0)});
    CHECK(res_single == Catch::Approx(0.98168436111126578).epsilon(1e-12));
}

TEST_CASE("off-center scaled grids still resolve nearby probes", "[quadrature]") {
    const Complex center(-2.0, 1.0);
    const auto grid = acspi::product_grid(24, 24, 1.25, 1.0, center);
    std::vector<Complex> probes;
    for (int i = -2; i <= 2; ++i) {
        probes.push_back(center + Complex(0.4 * i, 0.3 * i));
    }
    CHECK(acspi::identity_residual(grid, probes) <= 1e-6);
}

TEST_CASE("quadrature input validation", "[quadrature]") {
    std::vector<double> x, w;
    CHECK_THROWS_AS(acspi::gauss_hermite_rule(0, x, w), std::invalid_argument);
    CHECK_THROWS_AS(acspi::gauss_hermite_rule(300, x, w), std::invalid_argument);
    CHECK_THROWS_AS(acspi::product_grid(0, 4, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(acspi::product_grid(4, 4, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(acspi::identity_residual(acspi::product_grid(1, 1, 1.0, 1.0), {}),
                    std::invalid_argument);
}
