#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "acspi/fock_oracle.hpp"
#include "acspi/propagator.hpp"
#include "helpers.hpp"

using acspi::Complex;
using acspi::FockState;
using acspi::PhysicalParams;

TEST_CASE("coherent expansion has the right weight distribution", "[fock]") {
    const auto vac = acspi::coherent_in_fock(Complex(0.0, 0.0), 5);
    CHECK(vac.c(0) == Complex(1.0, 0.0));
    for (int n = 1; n < 5; ++n) CHECK(vac.c(n) == Complex(0.0, 0.0));

    const auto one = acspi::coherent_in_fock(Complex(1.0, 0.0), 30);
    CHECK(one.norm2() == Catch::Approx(1.0).margin(1e-12));
    double mean_n = 0.0;
    for (int n = 0; n < 30; ++n) mean_n += n * std::norm(one.c(n));
    CHECK(mean_n == Catch::Approx(1.0).margin(1e-10));

    std::ostringstream diag;
    acspi::coherent_in_fock(Complex(3.0, 0.0), 5, &diag);
    CHECK_FALSE(diag.str().empty());

    CHECK_THROWS_AS(acspi::coherent_in_fock(Complex(0.0, 0.0), 0), std::invalid_argument);
}

TEST_CASE("series overlaps reproduce the closed-form overlap", "[fock]") {
    const int dim = 40;
    const std::vector<Complex> labels = {
        {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {-1.3, 0.8}, {2.0, 0.0}, {0.7, -1.9}};
    for (const Complex a : labels) {
        for (const Complex b : labels) {
            const auto fa = acspi::coherent_in_fock(a, dim);
            const auto fb = acspi::coherent_in_fock(b, dim);
            Complex series(0.0, 0.0);
            for (int n = 0; n < dim; ++n) series += std::conj(fa.c(n)) * fb.c(n);
            CHECK(testutil::close(series, acspi::coherent_overlap(a, b), 1e-10));
        }
    }
}

TEST_CASE("number-basis Hamiltonian is diagonal-harmonic plus Hermitian rest", "[fock]") {
    const PhysicalParams params(1.0, 1.0, 0.7);
    const auto pure = acspi::harmonic(params);
    const auto h0 = acspi::hamiltonian_matrix(pure, 0.0, params, 8);
    for (int n = 0; n < 8; ++n) {
        for (int k = 0; k < 8; ++k) {
            const Complex want = n == k ? Complex(0.7 * (n + 0.5), 0.0) : Complex(0.0, 0.0);
            CHECK(h0(n, k) == want);
        }
    }

    const PhysicalParams unit;
    const auto well = acspi::double_well(unit, 2.0, 0.0031, 0.01);
    const auto h = acspi::hamiltonian_matrix(well, 37.0, unit, 50);
    CHECK(testutil::max_abs_diff(h, h.adjoint()) <= 1e-12);

    CHECK_THROWS_AS(acspi::hamiltonian_matrix(well, 0.0, unit, 5), std::invalid_argument);
}

TEST_CASE("harmonic oracle evolution rotates coherent labels", "[fock]") {
    const PhysicalParams params;
    const auto spec = acspi::harmonic(params);
    const Complex alpha0(1.5, 0.0);
    const auto initial = acspi::coherent_in_fock(alpha0, 40);

    std::vector<double> norms;
    std::vector<std::pair<double, double>> traj;
    acspi::evolve_oracle(initial, spec, 2.0 * M_PI, 50, params, [&](double t, const FockState& s) {
        norms.push_back(s.norm2());
        traj.emplace_back(t, acspi::fock_expectation_Q(s, params));
    });

    REQUIRE(traj.size() == 50);
    for (double n2 : norms) CHECK(n2 == Catch::Approx(norms.front()).margin(1e-12));
    for (const auto& [t, q] : traj) {
        CHECK(q == Catch::Approx(2.0 * params.lambda * 1.5 * std::cos(t)).margin(1e-9));
    }
}

TEST_CASE("static oracle conserves the energy expectation", "[fock]") {
    const PhysicalParams params;
    const auto spec = acspi::double_well(params, 2.0, 0.0, 0.0);
    const int dim = 60;
    const auto initial = acspi::coherent_in_fock(Complex(-std::sqrt(2.0), 0.0), dim);
    const auto h = acspi::hamiltonian_matrix(spec, 0.0, params, dim);

    const double e0 = (initial.c.adjoint() * h * initial.c)(0).real();
    double worst = 0.0;
    acspi::evolve_oracle(initial, spec, 10.0, 100, params, [&](double, const FockState& s) {
        const double e = (s.c.adjoint() * h * s.c)(0).real();
        worst = std::max(worst, std::abs(e - e0));
    });
    CHECK(worst <= 1e-10 * std::abs(e0));
}

TEST_CASE("split gap drives well-to-well oscillation", "[fock]") {
    const PhysicalParams params;
    const auto harmonic_gap = acspi::tunneling_splitting(acspi::harmonic(params), params, 30);
    CHECK(harmonic_gap == Catch::Approx(1.0).margin(1e-12));

    // gap shrinks monotonically as the wells separate
    double prev = 1e300;
    for (double q0 : {3.0, 3.5, 4.0, 4.5}) {
        const auto spec = acspi::double_well(params, q0, 0.0, 0.0);
        const double gap = acspi::tunneling_splitting(spec, params, 140);
        CHECK(gap > 0.0);
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 0.01);

    const auto driven = acspi::double_well(params, 3.0, 0.1, 0.5);
    CHECK_THROWS_AS(acspi::tunneling_splitting(driven, params, 100), std::invalid_argument);

    // transfer happens on the scale pi hbar / gap
    const auto spec = acspi::double_well(params, 3.0, 0.0, 0.0);
    const double gap = acspi::tunneling_splitting(spec, params, 100);
    const double t_half = M_PI * params.hbar / gap;
    const Complex alpha0(-3.0 / (2.0 * params.lambda), 0.0);
    const auto initial = acspi::coherent_in_fock(alpha0, 100);

    double q_end = 0.0;
    bool flipped = false;
    acspi::evolve_oracle(initial, spec, t_half, 1200, params, [&](double, const FockState& s) {
        const double q = acspi::fock_expectation_Q(s, params);
        if (q > 0.0) flipped = true;
        q_end = q;
    });
    CHECK(flipped);
    CHECK(q_end > 1.5);  // most of the packet reaches the far well near t_half
}

TEST_CASE("driven oracle matches an uncached per-step reference", "[fock]") {
    const PhysicalParams params;
    const auto spec = acspi::double_well(params, 2.0, 0.1, 0.5);
    const int dim = 30;
    const int n_steps = 30;
    const double t_total = 3.0;
    const double dt = t_total / n_steps;
    const auto initial = acspi::coherent_in_fock(Complex(-1.0, 0.0), dim);

    Eigen::VectorXcd ref = initial.c;
    for (int k = 0; k < n_steps; ++k) {
        const auto h = acspi::hamiltonian_matrix(spec, dt * (k + 0.5), params, dim);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
        Eigen::VectorXcd phases(dim);
        for (int m = 0; m < dim; ++m) phases(m) = std::exp(Complex(0.0, -es.eigenvalues()(m) * dt));
        ref = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * ref;
    }

    std::vector<double> norms;
    const auto final_state = acspi::evolve_oracle(initial, spec, t_total, n_steps, params,
                                                 [&](double, const FockState& s) { norms.push_back(s.norm2()); });
    for (double n2 : norms) CHECK(n2 == Catch::Approx(1.0).margin(1e-11));
    CHECK((final_state.c - ref).cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("number-basis moments match coherent closed forms", "[fock]") {
    const PhysicalParams params;
    const auto vac = acspi::coherent_in_fock(Complex(0.0, 0.0), 10);
    CHECK(acspi::fock_expectation_Q(vac, params) == 0.0);
    CHECK(acspi::fock_expectation_Q2(vac, params) ==
          Catch::Approx(params.lambda * params.lambda).margin(1e-14));

    FockState one;
    one.c = Eigen::VectorXcd::Zero(10);
    one.c(1) = Complex(1.0, 0.0);
    CHECK(acspi::fock_expectation_Q(one, params) == 0.0);

    const auto two = acspi::coherent_in_fock(Complex(2.0, 0.0), 60);
    CHECK(acspi::fock_expectation_Q(two, params) == Catch::Approx(2.0 * std::sqrt(2.0)).margin(1e-10));
    CHECK(acspi::fock_expectation_Q2(two, params) == Catch::Approx(8.5).margin(1e-9));

    FockState dead;
    dead.c = Eigen::VectorXcd::Zero(4);
    CHECK_THROWS_AS(acspi::fock_expectation_Q(dead, params), std::domain_error);
    CHECK_THROWS_AS(acspi::fock_expectation_Q2(dead, params), std::domain_error);
}
