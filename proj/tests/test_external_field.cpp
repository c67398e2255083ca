#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "remlab/analytic_bk.hpp"
#include "remlab/analytic_rem.hpp"
#include "remlab/external_field.hpp"

using namespace remlab;

TEST_CASE("binary entropy rate") {
    CHECK(binary_entropy_rate(0.0) == 0.0);
    CHECK(binary_entropy_rate(1.0) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(binary_entropy_rate(-1.0) == doctest::Approx(kLog2).epsilon(1e-15));
    CHECK(binary_entropy_rate(0.5) == doctest::Approx(0.130812).epsilon(1e-6));
    CHECK(binary_entropy_rate(1.0 + 1e-9) == kInf);
    for (double y : {-0.999999, -0.3, 0.2, 0.9, 0.99999999})
        CHECK(binary_entropy_rate(y) == doctest::Approx(oracle::entropy_rate(y)).epsilon(1e-12));
}

TEST_CASE("field energy examples") {
    CHECK(rem_field_energy(1.0, 0.0, 1.0) == doctest::Approx(1.193147).epsilon(1e-6));
    CHECK(rem_field_energy(1.0, 0.5, 0.3) == doctest::Approx(0.749355).epsilon(1e-5));
    FieldSolution s = field_solution({1.0, 0.5}, 0.3);
    CHECK(s.high_temperature);
    CHECK(s.y0 == doctest::Approx(0.489).epsilon(1e-3));
    CHECK(s.c_beta == doctest::Approx(0.985).epsilon(1e-3));
}

TEST_CASE("y0 and c_beta re-derived by bisection") {
    const double a = 1.0, h = 0.5, beta = 0.3;
    double y0 = bisect([&](double y) { return a * std::atanh(y) / std::sqrt(2.0 * (kLog2 - oracle::entropy_rate(y))) - h; },
                       0.0, 1.0 - 1e-12);
    double c = bisect([&](double y) { return oracle::entropy_rate(y) - (kLog2 - 0.5 * beta * beta * a * a); }, 0.0, 1.0);
    FieldSolution s = field_solution({a, h}, beta);
    CHECK(s.y0 == doctest::Approx(y0).epsilon(1e-12));
    CHECK(s.c_beta == doctest::Approx(c).epsilon(1e-12));
    REQUIRE(y0 <= c);
    double E = kLog2 + 0.5 * beta * beta * a * a + std::log(std::cosh(beta * h));
    CHECK(E == doctest::Approx(0.749355).epsilon(1e-5));
    CHECK(rem_field_energy(a, h, beta) == doctest::Approx(E).epsilon(1e-14));
}

TEST_CASE("field energy matches the grid oracle") {
    for (auto [a, h] : {std::pair{1.0, 0.5}, {0.7, 1.3}, {2.0, 0.1}, {1.0, 3.0}})
        for (double b : {0.0, 0.3, 0.9, 1.6, 3.0}) {
            CAPTURE(a);
            CAPTURE(h);
            CAPTURE(b);
            CHECK(rem_field_energy(a, h, b) == doctest::Approx(oracle::field_grid(a, h, b)).epsilon(1e-6));
        }
}

TEST_CASE("vanishing field gives the Gaussian REM") {
    for (int i = 0; i < 100; ++i) {
        double b = 4.0 * i / 99;
        CHECK(std::fabs(rem_field_energy(1.0, 1e-9, b) - rem_gaussian(b)) <= 1e-6);
        CHECK(rem_field_energy(1.7, 0.0, b) == doctest::Approx(rem_gaussian(1.7 * b)).epsilon(1e-14));
    }
}

TEST_CASE("field energy is nondecreasing in h and convex in beta") {
    for (double a : {0.5, 1.0, 2.0}) {
        for (double b : {0.2, 0.8, 1.5, 3.0}) {
            double prev = -kInf;
            for (double h = 0.0; h <= 3.0; h += 0.1) {
                double e = rem_field_energy(a, h, b);
                CHECK(e >= prev - 1e-12);
                prev = e;
            }
        }
        for (double h : {0.0, 0.3, 1.0}) {
            FreeEnergyCurve c = build_field_curve({a, h});
            CHECK(c(0.0) == doctest::Approx(kLog2).epsilon(1e-12));
            const double dh = 5.0 / 499;
            for (int i = 1; i < 499; ++i) CHECK(c((i - 1) * dh) - 2 * c(i * dh) + c((i + 1) * dh) >= -1e-9);
            for (double b : {0.1, 0.7, 2.0}) CHECK(c(b) == doctest::Approx(rem_field_energy(a, h, b)).epsilon(1e-12));
        }
    }
}

TEST_CASE("the two field branches agree at the frontier") {
    for (auto [a, h] : {std::pair{1.0, 0.5}, {0.7, 1.3}, {2.0, 0.1}}) {
        FieldSolution s = field_solution({a, h}, 0.1);
        double b = s.beta_star;
        double high = kLog2 + 0.5 * b * b * a * a + log_cosh(b * h);
        double low = b * (a * s.x0 + h * s.y0);
        CHECK(high == doctest::Approx(low).epsilon(1e-8));
    }
}

TEST_CASE("word GREM reduces to known models") {
    WordSpec single{2, {{{1, 2}, 1.3}}, {0.5, 0.5}, 0.0};
    WordSpec prefix{2, {{{1}, 1.0}, {{1, 2}, 0.5}}, {0.4, 0.6}, 0.0};
    GremSpec g = GremSpec::uniform({0.4, 0.6}, {1.0, 0.5}, 2.0);
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> w(0.05, 1.5);
    BkSpec bk{3, {0.2, 0.3, 0.5}, {}};
    for (SymbolSet m = 1; m <= 7; ++m) bk.weights[m] = w(gen);
    WordSpec all = word_spec_from_bk(bk);
    for (double b : {0.0, 0.4, 1.0, 2.0, 3.5}) {
        CHECK(word_grem_energy(single, b) == doctest::Approx(rem_gaussian(1.3 * b)).epsilon(1e-7));
        CHECK(word_grem_energy(prefix, b) == doctest::Approx(grem_energy_gamma(g, b)).epsilon(1e-7));
        CHECK(word_grem_energy(all, b) == doctest::Approx(bk_energy_min(bk, b)).epsilon(1e-7));
    }
}

TEST_CASE("word GREM with a field matches the one-symbol closed form") {
    WordSpec ws{1, {{{1}, 1.0}}, {1.0}, 0.5};
    for (double b : {0.1, 0.3, 1.0, 2.5}) CHECK(word_grem_energy(ws, b) == doctest::Approx(rem_field_energy(1.0, 0.5, b)).epsilon(1e-7));
    // a word with a repeated symbol uses the symbol set for its constraint
    WordSpec rep{1, {{{1, 1}, 1.0}}, {1.0}, 0.5};
    CHECK(word_grem_energy(rep, 1.0) == doctest::Approx(word_grem_energy(ws, 1.0)).epsilon(1e-12));
}

TEST_CASE("word model validation") {
    CHECK_THROWS_AS((WordSpec{2, {{{1}, 1.0}}, {0.5, 0.5}, 0.0}.validate()), std::invalid_argument);
    // the solver handles at most three symbols
    CHECK_THROWS_AS(word_grem_energy(WordSpec{4, {{{1, 2, 3, 4}, 1.0}}, {0.25, 0.25, 0.25, 0.25}, 0.0}, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((FieldParams{0.0, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((FieldParams{1.0, -1.0}.validate()), std::invalid_argument);
}
