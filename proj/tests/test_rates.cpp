#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "remlab/numeric.hpp"
#include "remlab/rates.hpp"

using namespace remlab;

namespace {

std::vector<RateFunction> sample_families(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> g(0.3, 4.0), th(0.05, 3.0), pr(0.05, 0.95), al(0.1, 2.0);
    std::vector<RateFunction> out{RateFunction::gaussian(), RateFunction::two_sided_exponential()};
    for (int i = 0; i < 20; ++i) {
        out.push_back(RateFunction::power_gamma(g(gen)));
        out.push_back(RateFunction::poisson(th(gen)));
        out.push_back(RateFunction::binomial(pr(gen)));
        out.push_back(RateFunction::negated(RateFunction::poisson(th(gen))));
        out.push_back(RateFunction::truncated(RateFunction::power_gamma(g(gen)), al(gen)));
        out.push_back(RateFunction::piecewise_half(RateFunction::two_sided_exponential(), RateFunction::gaussian()));
    }
    return out;
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

}  // namespace

TEST_CASE("rate values at reference points") {
    CHECK(RateFunction::gaussian()(1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(RateFunction::two_sided_exponential()(0.0) == 0.0);
    CHECK(RateFunction::poisson(0.5)(0.5) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(RateFunction::binomial(0.3)(0.3) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(RateFunction::poisson(0.5)(-0.1) == kInf);
    CHECK(RateFunction::binomial(0.5)(1.5) == kInf);
}

TEST_CASE("level sets at log 2") {
    Interval g = RateFunction::gaussian().level_set(kLog2);
    CHECK(g.lo == doctest::Approx(-1.177410).epsilon(1e-6));
    CHECK(g.hi == doctest::Approx(1.177410).epsilon(1e-6));
    Interval e = RateFunction::two_sided_exponential().level_set(kLog2);
    CHECK(e.lo == doctest::Approx(-0.693147).epsilon(1e-6));
    CHECK(e.hi == doctest::Approx(0.693147).epsilon(1e-6));
    Interval b = RateFunction::binomial(0.5).level_set(kLog2);
    CHECK(b.lo == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(b.hi == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("level sets below the minimum are empty") {
    CHECK(RateFunction::gaussian().level_set(-0.1).empty);
    CHECK(RateFunction::poisson(1.0).level_set(-1e-3).empty);
}

TEST_CASE("rate invariants over random families") {
    std::mt19937_64 gen(11);
    for (const auto& rf : sample_families(gen)) {
        CAPTURE(to_string(rf.family()));
        CHECK(rf(rf.zero()) == doctest::Approx(0.0).epsilon(1e-12));
        Interval z = rf.level_set(0.0);
        CHECK(z.contains(rf.zero()));
        Interval prev = z;
        for (double c : {0.05, 0.2, 0.5, kLog2, 1.0, 2.0}) {
            Interval cur = rf.level_set(c);
            REQUIRE_FALSE(cur.empty);
            CHECK(std::isfinite(cur.lo));
            CHECK(std::isfinite(cur.hi));
            CHECK(cur.lo <= prev.lo + 1e-12);
            CHECK(cur.hi >= prev.hi - 1e-12);
            CHECK(rf(cur.lo) <= c + 1e-9);
            CHECK(rf(cur.hi) <= c + 1e-9);
            prev = cur;
        }
        Interval d = rf.domain();
        double lo = std::max(d.lo, -5.0), hi = std::min(d.hi, 5.0);
        // U shape: nonincreasing up to the zero, nondecreasing after it
        double zero = rf.zero(), last = kInf;
        for (int i = 0; i <= 200; ++i) {
            double x = lo + (hi - lo) * i / 200;
            double v = rf(x);
            CHECK(v >= 0.0);
            if (x <= zero && last != kInf) CHECK(v <= last + 1e-12);
            last = v;
        }
        last = kInf;
        for (int i = 200; i >= 0; --i) {
            double x = lo + (hi - lo) * i / 200;
            double v = rf(x);
            if (x >= zero && last != kInf) CHECK(v <= last + 1e-12);
            last = v;
        }
    }
}

TEST_CASE("power gamma 2 equals the Gaussian rate pointwise") {
    RateFunction pg = RateFunction::power_gamma(2.0), g = RateFunction::gaussian();
    for (int i = 0; i < 1000; ++i) {
        double x = -5.0 + 10.0 * i / 999;
        CHECK(pg(x) == g(x));
    }
}

TEST_CASE("negated and truncated rates") {
    RateFunction p = RateFunction::poisson(0.7);
    RateFunction n = RateFunction::negated(p);
    RateFunction t = RateFunction::truncated(RateFunction::two_sided_exponential(), 0.4);
    for (int i = 0; i <= 100; ++i) {
        double x = -3.0 + 6.0 * i / 100;
        CHECK(n(x) == p(-x));
        if (std::fabs(x) <= 0.4) CHECK(t(x) == std::fabs(x));
        else CHECK(t(x) == kInf);
    }
}

TEST_CASE("Gaussian sampler at N = 4 has variance 1/4") {
    DrivingDistribution d(RateFunction::gaussian(), 4);
    KeyedStream rng(derive_key({4, 1}));
    const int n = 1000000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = d.sample(rng);
        s += x;
        s2 += x * x;
    }
    double mean = s / n, var = s2 / n - mean * mean;
    CHECK(std::fabs(mean) < 0.005);
    CHECK(var == doctest::Approx(0.25).epsilon(0.02));
}

TEST_CASE("power gamma 1 node variable is N independent") {
    // P(|X| > t) = exp(-t) for the density (1/2) e^{-|x|}
    for (int N : {1, 7, 40}) {
        DrivingDistribution d(RateFunction::power_gamma(1.0), N);
        KeyedStream rng(derive_key({static_cast<std::uint64_t>(N), 2}));
        const int n = 200000;
        int over1 = 0, over2 = 0, pos = 0;
        for (int i = 0; i < n; ++i) {
            double x = d.sample_node(rng);
            over1 += std::fabs(x) > 1.0;
            over2 += std::fabs(x) > 2.0;
            pos += x > 0.0;
        }
        CAPTURE(N);
        CHECK(double(over1) / n == doctest::Approx(std::exp(-1.0)).epsilon(0.02));
        CHECK(double(over2) / n == doctest::Approx(std::exp(-2.0)).epsilon(0.03));
        CHECK(double(pos) / n == doctest::Approx(0.5).epsilon(0.01));
    }
}

TEST_CASE("power gamma 2 at N = 1 matches the Gaussian sampler") {
    DrivingDistribution pg(RateFunction::power_gamma(2.0), 1), g(RateFunction::gaussian(), 1);
    KeyedStream r1(derive_key({5, 1})), r2(derive_key({5, 2}));
    const int n = 1000000;
    std::vector<double> a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = pg.sample(r1);
        b[i] = g.sample(r2);
    }
    // two-sample KS critical value at the 0.1% level
    CHECK(ks_statistic(a, b) < 1.95 * std::sqrt(2.0 / n));
}

TEST_CASE("samplers of asymmetric families centre on the zero of the rate") {
    for (RateFunction rf : {RateFunction::poisson(0.8), RateFunction::binomial(0.3),
                            RateFunction::negated(RateFunction::poisson(1.5))}) {
        DrivingDistribution d(rf, 50);
        KeyedStream rng(derive_key({9, static_cast<std::uint64_t>(rf.family())}));
        double s = 0.0;
        const int n = 100000;
        for (int i = 0; i < n; ++i) s += d.sample(rng);
        CHECK(s / n == doctest::Approx(rf.zero()).epsilon(0.01));
    }
}

TEST_CASE("family names round trip") {
    for (Family f : {Family::Gaussian, Family::TwoSidedExponential, Family::PowerGamma, Family::Poisson,
                     Family::Binomial, Family::Negated, Family::Truncated, Family::PiecewiseHalf})
        CHECK(family_from_string(to_string(f)) == f);
    CHECK_THROWS_AS(family_from_string("Cauchy"), std::invalid_argument);
}
