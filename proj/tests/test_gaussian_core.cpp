#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "gausscap/covariance.hpp"
#include "gausscap/entropy.hpp"

using namespace gausscap;

namespace {

// independent oracle: entropy of the geometric photon-number distribution
// p_i = (1-v) v^i, v = s/(s+1), truncated to tail mass < 1e-14
double geometric_entropy_bits(double s) {
    if (s <= 0.0) return 0.0;
    const double v = s / (s + 1.0);
    double h = 0.0;
    double p = 1.0 - v;
    double mass = 0.0;
    while (1.0 - mass > 1e-14) {
        h -= p * std::log2(p);
        mass += p;
        p *= v;
    }
    return h;
}

Eigen::MatrixXd random_sp2(std::mt19937& rng) {
    std::uniform_real_distribution<double> angle(0.0, 6.28);
    std::uniform_real_distribution<double> squeeze(-0.8, 0.8);
    return rotation_symplectic(angle(rng)) * squeeze_symplectic(squeeze(rng)) *
           rotation_symplectic(angle(rng));
}

}  // namespace

TEST_CASE("bosonic entropy pinned values") {
    CHECK(bosonic_entropy(0.0) == 0.0);
    CHECK(bosonic_entropy(1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(bosonic_entropy(0.5) ==
          doctest::Approx(geometric_entropy_bits(0.5)).epsilon(1e-10));
    CHECK(bosonic_entropy(0.5) == doctest::Approx(1.377444).epsilon(1e-6));
    CHECK_THROWS_AS(bosonic_entropy(-0.1), std::domain_error);
}

TEST_CASE("bosonic entropy matches the geometric-distribution oracle") {
    for (double s : {1e-6, 0.01, 0.3, 1.0, 2.5, 7.0, 20.0}) {
        CHECK(bosonic_entropy(s) ==
              doctest::Approx(geometric_entropy_bits(s)).epsilon(1e-10));
    }
    // strictly increasing
    double prev = -1.0;
    for (double s = 0.0; s <= 5.0; s += 0.25) {
        const double g = bosonic_entropy(s);
        CHECK(g > prev);
        prev = g;
    }
}

TEST_CASE("thermal and vacuum covariances") {
    CHECK_THROWS_AS(ThermalSpec(-1.0), std::domain_error);
    const auto vac = thermal_cov(ThermalSpec(0.0));
    CHECK(vac.entries.isApprox(0.5 * Eigen::MatrixXd::Identity(2, 2), 1e-15));
    CHECK(thermal_cov(ThermalSpec(1.0)).entries(0, 0) == doctest::Approx(1.5));
    CHECK(thermal_cov(ThermalSpec(5.0)).entries(1, 1) == doctest::Approx(5.5));

    CHECK(symplectic_eigenvalues(vacuum_cov(1))[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(symplectic_eigenvalues(thermal_cov(ThermalSpec(1.0)))[0] ==
          doctest::Approx(1.5).epsilon(1e-13));
}

TEST_CASE("tmsv covariance purifies the thermal state") {
    const auto t0 = tmsv_cov(ThermalSpec(0.0));
    CHECK(t0.entries.isApprox(0.5 * Eigen::MatrixXd::Identity(4, 4), 1e-15));

    const auto t1 = tmsv_cov(ThermalSpec(1.0));
    CHECK(t1.entries(0, 2) == doctest::Approx(std::sqrt(2.0)));
    CHECK(t1.entries(1, 3) == doctest::Approx(-std::sqrt(2.0)));

    for (double n : {0.3, 1.0, 4.2, 50.0}) {
        const auto nus = symplectic_eigenvalues(tmsv_cov(ThermalSpec(n)));
        CHECK(nus[0] == doctest::Approx(0.5).epsilon(1e-10));
        CHECK(nus[1] == doctest::Approx(0.5).epsilon(1e-10));
        // reduced state of either arm is the thermal input
        CHECK(mean_photon(tmsv_cov(ThermalSpec(n))) == doctest::Approx(2 * n).epsilon(1e-12));
    }
}

TEST_CASE("gaussian entropy: vacuum, thermal, additivity") {
    CHECK(gaussian_entropy(vacuum_cov(1)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(gaussian_entropy(thermal_cov(ThermalSpec(1.0))) == doctest::Approx(2.0).epsilon(1e-12));

    Eigen::MatrixXd two = Eigen::MatrixXd::Zero(4, 4);
    two.block<2, 2>(0, 0) = thermal_cov(ThermalSpec(1.0)).entries;
    two.block<2, 2>(2, 2) = thermal_cov(ThermalSpec(1.0)).entries;
    CHECK(gaussian_entropy(CovarianceMatrix(2, two)) == doctest::Approx(4.0).epsilon(1e-12));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> nd(0.0, 3.0);
    for (int i = 0; i < 20; ++i) {
        const double na = nd(rng), nb = nd(rng);
        const Eigen::Matrix2d sa = random_sp2(rng);
        const Eigen::Matrix2d sb = random_sp2(rng);
        Eigen::Matrix2d blocka = sa * thermal_cov(ThermalSpec(na)).entries * sa.transpose();
        Eigen::Matrix2d blockb = sb * thermal_cov(ThermalSpec(nb)).entries * sb.transpose();
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(4, 4);
        sum.block<2, 2>(0, 0) = 0.5 * (blocka + blocka.transpose().eval());
        sum.block<2, 2>(2, 2) = 0.5 * (blockb + blockb.transpose().eval());
        const double joint = gaussian_entropy(CovarianceMatrix(2, sum));
        const double parts = bosonic_entropy(na) + bosonic_entropy(nb);
        CHECK(joint == doctest::Approx(parts).epsilon(1e-12));
    }
}

TEST_CASE("symplectic spectrum invariant under symplectic congruence") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> nd(0.0, 4.0);
    for (int i = 0; i < 200; ++i) {
        const double n = nd(rng);
        const Eigen::Matrix2d s = random_sp2(rng);
        const auto cov = thermal_cov(ThermalSpec(n));
        const auto moved = apply_symplectic(cov, s);
        const auto nus = symplectic_eigenvalues(moved);
        CHECK(nus[0] == doctest::Approx(n + 0.5).epsilon(1e-10));
        CHECK(nus[0] >= 0.5 - 1e-12);
    }
}

TEST_CASE("symplectic eigenvalue input validation") {
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 0.3, -0.3, 1.0;
    CHECK_THROWS_AS(CovarianceMatrix(1, bad), std::invalid_argument);

    Eigen::MatrixXd unphys = 0.1 * Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_AS(gaussian_entropy(CovarianceMatrix(1, unphys)), std::invalid_argument);
}

TEST_CASE("gaussian input construction") {
    SUBCASE("x = 1 is thermal") {
        const auto cov = make_gaussian_input(GaussianInputParams(1.5, 1.0, 0.0));
        CHECK(cov.entries.isApprox(1.5 * Eigen::MatrixXd::Identity(2, 2), 1e-12));
    }
    SUBCASE("squeezed instance, cosh 2s = 2") {
        const auto cov = make_gaussian_input(GaussianInputParams(1.5, 0.25, 0.0));
        CHECK(cov.entries(0, 0) == doctest::Approx(0.75 * (2.0 + std::sqrt(3.0))).epsilon(1e-12));
        CHECK(cov.entries(1, 1) == doctest::Approx(0.75 * (2.0 - std::sqrt(3.0))).epsilon(1e-12));
        CHECK(cov.entries.determinant() == doctest::Approx(0.5625).epsilon(1e-12));
        CHECK(0.5 * cov.entries.trace() == doctest::Approx(1.5).epsilon(1e-12));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(GaussianInputParams(1.5, 0.0, 0.0), std::domain_error);
        CHECK_THROWS_AS(GaussianInputParams(1.5, 1.2, 0.0), std::domain_error);
        CHECK_THROWS_AS(GaussianInputParams(1.0, 0.01, 0.0), std::domain_error);
    }
    SUBCASE("det and trace constraints over a grid") {
        for (double e : {0.6, 1.5, 5.0, 40.0}) {
            for (double x : {0.2, 0.5, 0.9, 1.0}) {
                if (e * std::sqrt(x) < 0.5) continue;
                for (double ang : {0.0, 0.7, 2.1}) {
                    const auto cov = make_gaussian_input(GaussianInputParams(e, x, ang));
                    CHECK(cov.entries.determinant() ==
                          doctest::Approx(e * e * x).epsilon(1e-12));
                    CHECK(0.5 * cov.entries.trace() == doctest::Approx(e).epsilon(1e-12));
                    CHECK(mean_photon(cov) == doctest::Approx(e - 0.5).epsilon(1e-12));
                }
            }
        }
    }
    SUBCASE("fixed det: energy is minimised at x = 1") {
        const double nu = 2.3;  // N + 1/2
        double prev = 1e300;
        for (double x : {0.2, 0.4, 0.6, 0.8, 1.0}) {
            const double e = nu / std::sqrt(x);
            const auto cov = make_gaussian_input(GaussianInputParams(e, x, 0.3));
            const double energy = 0.5 * cov.entries.trace();
            CHECK(energy < prev + 1e-12);
            prev = energy;
            CHECK(cov.entries.determinant() == doctest::Approx(nu * nu).epsilon(1e-10));
        }
    }
}

TEST_CASE("mean photon bookkeeping") {
    CHECK(mean_photon(vacuum_cov(1)) == doctest::Approx(0.0));
    CHECK(mean_photon(thermal_cov(ThermalSpec(1.0))) == doctest::Approx(1.0));
    CHECK(mean_photon(tmsv_cov(ThermalSpec(1.0))) == doctest::Approx(2.0));
}

TEST_CASE("purified gaussian input reduces correctly and is pure") {
    for (double e : {1.5, 4.0}) {
        for (double x : {0.4, 1.0}) {
            for (double ang : {0.0, 1.1}) {
                const GaussianInputParams p(e, x, ang);
                const auto joint = purified_input_cov(p);
                const auto nus = symplectic_eigenvalues(joint);
                CHECK(nus[0] == doctest::Approx(0.5).epsilon(1e-9));
                CHECK(nus[1] == doctest::Approx(0.5).epsilon(1e-9));
                CHECK(joint.entries.block<2, 2>(0, 0).isApprox(
                    make_gaussian_input(p).entries, 1e-10));
            }
        }
    }
}
