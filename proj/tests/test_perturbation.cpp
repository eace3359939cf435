#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "gausscap/coherent_info.hpp"
#include "gausscap/perturbation.hpp"

using namespace gausscap;
using namespace std::complex_literals;

namespace {

PerturbationSpec spec(std::vector<int> k, std::vector<int> l,
                      std::complex<double> c = 1.0, double eps = 0.01) {
    return PerturbationSpec(std::move(k), std::move(l), c, eps);
}

}  // namespace

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(spec({1, 0}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(spec({1}, {2}), std::invalid_argument);   // unbalanced
    CHECK_THROWS_AS(spec({0}, {0}), std::invalid_argument);   // m = 0
    CHECK_THROWS_AS(spec({-1}, {-1}), std::invalid_argument);
    CHECK(spec({2, 0}, {1, 1}).order() == 2);
}

TEST_CASE("c_zero convention") {
    CHECK(c_zero(spec({1}, {1}, 1.0)) == doctest::Approx(4.0));
    CHECK(c_zero(spec({2, 0}, {1, 1}, 1.0i)) == doctest::Approx(1.0));
    CHECK(c_zero(spec({1}, {1}, 1.0i)) == doctest::Approx(0.0));
}

TEST_CASE("moment trace: oracle-pinned values at N=1") {
    // frozen from the Fock-oracle trace quotient (see test_fock_oracle)
    CHECK(moment_trace(spec({1}, {1}), 1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(moment_trace(spec({2}, {2}), 1.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(moment_trace(spec({1, 1}, {1, 1}), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(moment_trace(spec({2, 0}, {1, 1}), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(moment_trace(spec({1, 0}, {0, 1}), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
    // purely imaginary amplitude on a diagonal monomial: no perturbation
    CHECK(moment_trace(spec({1}, {1}, 1.0i), 1.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(moment_trace(spec({1}, {1}), 0.0), std::domain_error);
}

TEST_CASE("moment trace symmetry under simultaneous mode permutation") {
    const double a = moment_trace(spec({2, 1}, {1, 2}, 0.3 + 0.4i), 1.7);
    const double b = moment_trace(spec({1, 2}, {2, 1}, 0.3 + 0.4i), 1.7);
    CHECK(a == doctest::Approx(b).epsilon(1e-15));
}

TEST_CASE("input entropy shift") {
    CHECK(input_entropy_shift(spec({1}, {1}, 1.0, 0.0), 1.0) == 0.0);
    CHECK(input_entropy_shift(spec({1}, {1}, 1.0, 0.01), 1.0) ==
          doctest::Approx(-1e-4).epsilon(1e-12));
    const double h1 = input_entropy_shift(spec({1}, {1}, 1.0, 0.01), 1.0);
    const double h2 = input_entropy_shift(spec({1}, {1}, 1.0, 0.02), 1.0);
    CHECK(h2 == doctest::Approx(4.0 * h1).epsilon(1e-12));
    CHECK(h1 < 0.0);
}

TEST_CASE("output entropy shift") {
    SUBCASE("identity channel reduces to the input shift") {
        const auto s = spec({1}, {1}, 1.0, 0.01);
        CHECK(output_entropy_shift(s, 1.0, ChannelParams(1.0, 0.0)) ==
              doctest::Approx(input_entropy_shift(s, 1.0)).epsilon(1e-12));
    }
    SUBCASE("oracle-pinned instance eta=0.5, Nn=0.25") {
        const auto s = spec({1}, {1}, 1.0, 0.01);
        // -(eps^2/2) * eta^2 * 4 / (0.75 * 1.75)
        CHECK(output_entropy_shift(s, 1.0, ChannelParams(0.5, 0.25)) ==
              doctest::Approx(-1e-4 * 0.5 * 0.25 * 4.0 / (0.75 * 1.75)).epsilon(1e-12));
    }
    SUBCASE("erasure point: no dependence on the input perturbation") {
        CHECK(output_entropy_shift(spec({1}, {1}, 1.0, 0.01), 1.0,
                                   ChannelParams(0.0, 0.5)) == 0.0);
    }
    SUBCASE("quadratic epsilon scaling") {
        const ChannelParams p(0.6, 0.2);
        const double a = output_entropy_shift(spec({2}, {2}, 1.0, 0.01), 1.0, p);
        const double b = output_entropy_shift(spec({2}, {2}, 1.0, 0.02), 1.0, p);
        CHECK(b == doctest::Approx(4.0 * a).epsilon(1e-12));
    }
}

TEST_CASE("joint entropy shift") {
    SUBCASE("pure joint state at the identity channel") {
        CHECK(joint_entropy_shift(spec({1}, {1}, 1.0, 0.01), 1.0,
                                  ChannelParams(1.0, 0.0)) == doctest::Approx(0.0));
    }
    SUBCASE("oracle-pinned instance eta=0.8, Nn=0, N=1, m=1") {
        // sum = A + B = 2/3, shift = -(eps^2/2) * 4 * (2/3) / 4 = -eps^2/3
        CHECK(joint_entropy_shift(spec({1}, {1}, 1.0, 0.01), 1.0,
                                  ChannelParams(0.8, 0.0)) ==
              doctest::Approx(-1e-4 / 3.0).epsilon(1e-10));
    }
    SUBCASE("m=1 sum is A + B") {
        const ChannelParams p(0.6, 0.2);
        const double direct = normalized_sum(1, 1.0, p);
        const auto js = joint_spectrum(p, ThermalSpec(1.0));
        const double a = js.n_a * (js.n_a + 1.0) * js.sinh2_r() * js.sinh2_r();
        const double b = js.n_b * (js.n_b + 1.0) * js.cosh2_r() * js.cosh2_r();
        CHECK(direct == doctest::Approx((a + b) / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("normalized sum") {
    CHECK(normalized_sum(1, 1.0, ChannelParams(0.8, 0.0)) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(normalized_sum(1, 1.0, ChannelParams(1.0, 0.0)), std::domain_error);
    CHECK_THROWS_AS(normalized_sum(1, 1.0, ChannelParams(0.0, 0.0)), std::domain_error);

    SUBCASE("m=1 algebraic identity for the gap") {
        // N(N+1) - (A+B) = [n_a n_b + (n_a+1)(n_b+1)] cosh^2 r sinh^2 r
        for (double eta : {0.3, 0.6, 0.9}) {
            for (double nn : {0.0, 0.2}) {
                for (double n : {0.5, 1.0, 4.0}) {
                    const ChannelParams p(eta, nn);
                    const auto js = joint_spectrum(p, ThermalSpec(n));
                    const double a = js.n_a * (js.n_a + 1.0) * js.sinh2_r() * js.sinh2_r();
                    const double b = js.n_b * (js.n_b + 1.0) * js.cosh2_r() * js.cosh2_r();
                    const double gap = n * (n + 1.0) - (a + b);
                    const double want = (js.n_a * js.n_b + (js.n_a + 1.0) * (js.n_b + 1.0)) *
                                        js.cosh2_r() * js.sinh2_r();
                    CHECK(gap == doctest::Approx(want).epsilon(1e-9));
                }
            }
        }
    }

    SUBCASE("noiseless channels: below one for every input") {
        for (double eta : {0.1, 0.4, 0.7, 0.95}) {
            for (double n : {0.1, 1.0, 5.0, 100.0}) {
                for (int m : {1, 2, 3}) {
                    CHECK(normalized_sum(m, n, ChannelParams(eta, 0.0)) < 1.0);
                }
            }
        }
    }

    SUBCASE("below one whenever N exceeds the noise threshold") {
        std::mt19937 rng(5);
        std::uniform_real_distribution<double> eta_d(0.05, 0.95);
        std::uniform_real_distribution<double> nn_d(0.0, 1.5);
        std::uniform_real_distribution<double> n_mult(1.0001, 50.0);
        std::uniform_int_distribution<int> m_d(1, 4);
        for (int i = 0; i < 1000; ++i) {
            const ChannelParams p(eta_d(rng), nn_d(rng));
            const double n = noise_threshold_mean_photon(p) * n_mult(rng) + 1e-6;
            CHECK(normalized_sum(m_d(rng), n, p) < 1.0);
        }
    }
}

TEST_CASE("coherent information shift") {
    SUBCASE("identity channel: d_ic equals the input shift") {
        const auto rep = coherent_info_shift(spec({1}, {1}, 1.0, 0.01), 1.0,
                                             ChannelParams(1.0, 0.0));
        CHECK(rep.d_s_joint == doctest::Approx(0.0));
        CHECK(rep.d_ic == doctest::Approx(rep.d_s_in).epsilon(1e-12));
        CHECK(rep.d_ic < 0.0);
    }
    SUBCASE("documented instance eta=0.8, Nn=0") {
        const auto rep = coherent_info_shift(spec({1}, {1}, 1.0, 0.01), 1.0,
                                             ChannelParams(0.8, 0.0));
        // out: -(eps^2/2)*0.64*4/1.44 ; joint: -eps^2/3
        CHECK(rep.d_s_out == doctest::Approx(-1e-4 * 0.32 * 4.0 / 1.44).epsilon(1e-10));
        CHECK(rep.d_ic == doctest::Approx(rep.d_s_out - rep.d_s_joint).epsilon(1e-15));
        CHECK(rep.d_ic < 0.0);
    }
    SUBCASE("sign at scale, all balanced splits up to three modes") {
        std::mt19937 rng(17);
        std::uniform_int_distribution<int> md(1, 3);
        for (auto [eta, nn] : {std::pair{0.8, 0.1}, {0.6, 0.2}, {0.9, 0.5}}) {
            const ChannelParams p(eta, nn);
            const double n = 1e4;
            for (int rep_i = 0; rep_i < 40; ++rep_i) {
                const int m = md(rng);
                const int modes = 1 + rng() % 3;
                std::vector<int> k(modes, 0), l(modes, 0);
                for (int j = 0; j < m; ++j) k[rng() % modes]++;
                for (int j = 0; j < m; ++j) l[rng() % modes]++;
                const auto rep = coherent_info_shift(
                    PerturbationSpec(k, l, 1.0, 0.01), n, p);
                CHECK(rep.d_ic < 0.0);
            }
        }
    }
}

TEST_CASE("cross terms") {
    SUBCASE("distinct monomials are orthogonal") {
        CHECK(cross_term(spec({1}, {1}), spec({2}, {2}), 1.0) == 0.0);
        CHECK(cross_term(spec({2, 0}, {1, 1}), spec({1, 1}, {2, 0}, 1.0i), 1.0) ==
              doctest::Approx(0.0));
    }
    SUBCASE("a spec against itself reproduces the moment trace") {
        const auto s1 = spec({1}, {1}, 0.7 + 0.2i);
        CHECK(cross_term(s1, s1, 1.3) ==
              doctest::Approx(moment_trace(s1, 1.3)).epsilon(1e-12));
        const auto s2 = spec({2, 0}, {1, 1}, 0.7 - 0.5i);
        CHECK(cross_term(s2, s2, 0.8) ==
              doctest::Approx(moment_trace(s2, 0.8)).epsilon(1e-12));
    }
    SUBCASE("swapped exponent pair is the same perturbation family") {
        // (k,l) against (l,k) pairs through the conjugate route; value
        // 2 Re(c_a c_b) * prod(k!l!)/[N(N+1)]^m, zero for orthogonal phases
        const auto a = spec({1, 0}, {0, 1}, 1.0);
        const auto b = spec({0, 1}, {1, 0}, 1.0);
        CHECK(cross_term(a, b, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
        const auto b_rot = spec({0, 1}, {1, 0}, 1.0i);
        CHECK(cross_term(a, b_rot, 1.0) == doctest::Approx(0.0));
    }
    SUBCASE("mode count mismatch") {
        CHECK_THROWS_AS(cross_term(spec({1}, {1}), spec({1, 0}, {0, 1}), 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("linearity of distinct contributions") {
    // total second-order shift of a sum of orthogonal perturbations is the
    // sum of the individual shifts
    const ChannelParams p(0.7, 0.1);
    const auto s1 = spec({1}, {1}, 1.0, 0.01);
    const auto s2 = spec({2}, {2}, 0.5, 0.01);
    CHECK(cross_term(s1, s2, 2.0) == 0.0);
    const double total = input_entropy_shift(s1, 2.0) + input_entropy_shift(s2, 2.0);
    CHECK(total < 0.0);
    CHECK(input_entropy_shift(s1, 2.0) ==
          doctest::Approx(-0.5 * 1e-4 * moment_trace(s1, 2.0)));
    (void)p;
}
