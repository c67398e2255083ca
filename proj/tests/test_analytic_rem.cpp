#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "remlab/analytic_rem.hpp"

using namespace remlab;

namespace {

// E(0) = log 2, continuity at every breakpoint and discrete convexity.
void check_curve(const FreeEnergyCurve& c, double hi = 5.0) {
    CHECK(c(0.0) == doctest::Approx(kLog2).epsilon(1e-12));
    for (double b : c.breakpoints) {
        CHECK(c.segments[c.segment_index(b) - 1].eval(b) == doctest::Approx(c(b)).epsilon(1e-9));
    }
    const int n = 500;
    const double h = hi / (n - 1);
    for (int i = 1; i + 1 < n; ++i) {
        double d2 = c((i - 1) * h) - 2.0 * c(i * h) + c((i + 1) * h);
        CHECK(d2 >= -1e-9);
    }
}

// The variational value computed by the independent scan oracle.
double scan_rem(const RateFunction& rf, double sign, double beta) {
    Interval L = rf.level_set(kLog2);
    return kLog2 + oracle::scan_max([&](double x) { return -beta * sign * x - rf(x); }, L.lo, L.hi, 20000);
}

}  // namespace

TEST_CASE("variational REM examples") {
    ObjectiveFn id;
    CHECK(rem_variational(RateFunction::gaussian(), id, 0.0) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(rem_variational(RateFunction::gaussian(), id, 1.0) == doctest::Approx(1.193147).epsilon(1e-6));
    CHECK(rem_variational(RateFunction::two_sided_exponential(), id, 2.0) == doctest::Approx(1.386294).epsilon(1e-6));
}

TEST_CASE("closed form REM examples") {
    CHECK(rem_gaussian(0.0) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(rem_gaussian(1.0) == doctest::Approx(1.193147).epsilon(1e-6));
    CHECK(rem_gaussian(2.0) == doctest::Approx(2.354821).epsilon(1e-6));
    CHECK(rem_exponential(0.5) == doctest::Approx(kLog2).epsilon(1e-15));
    CHECK(rem_exponential(2.0) == doctest::Approx(1.386294).epsilon(1e-6));
    CHECK(rem_weibull(3.0, 1.0) == doctest::Approx(1.359814).epsilon(1e-6));
    CHECK(rem_weibull(1.0, 0.5) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(rem_poisson(0.5, 1, 1.0) == doctest::Approx(0.377087).epsilon(1e-6));
    CHECK(rem_poisson(0.5, 1, 0.0) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(rem_binomial(0.5, 1, 1.0) == doctest::Approx(0.313262).epsilon(1e-6));
    CHECK(rem_binomial(0.3, -1, 0.0) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(annealed_compact(0.0, 5.0) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(annealed_compact(1.0, 1.0) == doctest::Approx(1.693147).epsilon(1e-6));
    CHECK(annealed_compact(kInf, 1.0) == kInf);
    CHECK(rem_truncated(TruncKind::Exp, 1.0, 0.5) == doctest::Approx(0.693147).epsilon(1e-6));
    CHECK(rem_truncated(TruncKind::Exp, 0.5, 2.0) == doctest::Approx(1.193147).epsilon(1e-6));
    CHECK(rem_truncated(TruncKind::Gauss, 0.5, 2.0) == doctest::Approx(2.193147).epsilon(1e-6));
}

TEST_CASE("Weibull gamma < 1 stays at log 2 up to its threshold") {
    const double g = 0.5;
    const double thr = std::pow(g, -1.0 / g) * std::pow(kLog2, -(1.0 - g) / g);
    CHECK(rem_weibull(g, 0.95 * thr) == doctest::Approx(kLog2).epsilon(1e-12));
    CHECK(rem_weibull(g, 1.05 * thr) > kLog2 + 1e-6);
    for (double b : {0.5 * thr, 0.99 * thr, 1.01 * thr, 2.0 * thr})
        CHECK(rem_weibull(g, b) == doctest::Approx(rem_variational(RateFunction::power_gamma(g), {}, b)).epsilon(1e-8));
}

TEST_CASE("Poisson theta > log 2 uses the variational value") {
    ObjectiveFn id;
    for (double b : {0.5, 1.0, 3.0, 6.0})
        CHECK(rem_poisson(1.0, 1, b) ==
              doctest::Approx(rem_variational(RateFunction::poisson(1.0), id, b)).epsilon(1e-9));
}

TEST_CASE("Binomial large beta slope is -x1") {
    const double p = 0.7;
    LevelThresholds t = binomial_thresholds(p);
    // x1 solves I(x1) = log 2 on the left of p
    RateFunction rf = RateFunction::binomial(p);
    double x1 = bisect([&](double x) { return rf(x) - kLog2; }, 1e-15, p);
    CHECK(t.x1 == doctest::Approx(x1).epsilon(1e-10));
    double b = std::max(t.beta0, 1.0) + 5.0;
    double slope = (rem_binomial(p, 1, b + 0.01) - rem_binomial(p, 1, b)) / 0.01;
    CHECK(slope == doctest::Approx(-x1).epsilon(1e-8));
}

TEST_CASE("curve shapes") {
    FreeEnergyCurve g = build_rem_curve({RemModel::Kind::Gaussian});
    REQUIRE(g.breakpoints.size() == 1);
    CHECK(g.breakpoints[0] == doctest::Approx(1.177410).epsilon(1e-6));
    CHECK(g.segments[0].kind == SegmentKind::Quadratic);
    CHECK(g.segments[1].kind == SegmentKind::Linear);
    FreeEnergyCurve e = build_rem_curve({RemModel::Kind::Exponential});
    REQUIRE(e.breakpoints.size() == 1);
    CHECK(e.breakpoints[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(e.segments[0].kind == SegmentKind::Constant);
    CHECK(e.segments[1].kind == SegmentKind::Linear);
    FreeEnergyCurve p = build_rem_curve({RemModel::Kind::Poisson, 0.5, 1});
    CHECK(p.breakpoints.empty());
    REQUIRE(p.segments.size() == 1);
    CHECK(p.segments[0].kind == SegmentKind::ExpDecay);
}

TEST_CASE("curves agree with energies and satisfy the anchors") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> g(0.3, 4.0), th(0.05, 3.0), pr(0.05, 0.95), al(0.05, 1.5);
    std::vector<RemModel> models{{RemModel::Kind::Gaussian}, {RemModel::Kind::Exponential}};
    for (int i = 0; i < 8; ++i) {
        models.push_back({RemModel::Kind::Weibull, g(gen)});
        models.push_back({RemModel::Kind::Poisson, th(gen), i % 2 ? 1 : -1});
        models.push_back({RemModel::Kind::Binomial, pr(gen), i % 2 ? 1 : -1});
        models.push_back({RemModel::Kind::TruncatedExp, al(gen)});
        models.push_back({RemModel::Kind::TruncatedGauss, al(gen)});
        models.push_back({RemModel::Kind::Compact, al(gen)});
    }
    for (const auto& m : models) {
        FreeEnergyCurve c = build_rem_curve(m);
        c.validate();
        check_curve(c);
        for (double b : {0.0, 0.3, 1.1, 2.7, 6.0}) CHECK(c(b) == doctest::Approx(m.energy(b)).epsilon(1e-12));
    }
}

TEST_CASE("closed forms agree with the variational solver (40 draws x 25 betas)") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> g(0.3, 4.0), th(0.05, 3.0), pr(0.05, 0.95), al(0.05, 1.5), kind(0, 6);
    double worst = 0.0;
    for (int i = 0; i < 40; ++i) {
        RemModel m;
        switch (static_cast<int>(kind(gen))) {
            case 0: m = {RemModel::Kind::Gaussian}; break;
            case 1: m = {RemModel::Kind::Exponential}; break;
            case 2: m = {RemModel::Kind::Weibull, g(gen)}; break;
            case 3: m = {RemModel::Kind::Poisson, th(gen), i % 2 ? 1 : -1}; break;
            case 4: m = {RemModel::Kind::Binomial, pr(gen), i % 2 ? 1 : -1}; break;
            default: m = {RemModel::Kind::TruncatedExp, al(gen)}; break;
        }
        for (int j = 0; j < 25; ++j) {
            double b = 5.0 * j / 24;
            worst = std::max(worst, std::fabs(m.energy(b) - rem_variational(m.rate(), m.objective(), b)));
        }
    }
    CHECK(worst <= 1e-6);
}

TEST_CASE("variational solver agrees with the scan oracle") {
    for (double b : {0.2, 0.9, 1.7, 3.5}) {
        CHECK(rem_variational(RateFunction::gaussian(), {}, b) ==
              doctest::Approx(scan_rem(RateFunction::gaussian(), 1.0, b)).epsilon(1e-9));
        CHECK(rem_variational(RateFunction::poisson(0.4), {}, b) ==
              doctest::Approx(scan_rem(RateFunction::poisson(0.4), 1.0, b)).epsilon(1e-9));
        ObjectiveFn neg{ObjectiveFn::Kind::Negation};
        CHECK(rem_variational(RateFunction::binomial(0.2), neg, b) ==
              doctest::Approx(scan_rem(RateFunction::binomial(0.2), -1.0, b)).epsilon(1e-9));
    }
}

TEST_CASE("hybrid rate matches the pure exponential rate") {
    RateFunction hybrid = RateFunction::piecewise_half(RateFunction::two_sided_exponential(), RateFunction::gaussian());
    for (double b : {0.0, 0.5, 1.0, 1.5, 3.0})
        CHECK(rem_variational(hybrid, {}, b) ==
              doctest::Approx(rem_variational(RateFunction::two_sided_exponential(), {}, b)).epsilon(1e-9));
}

TEST_CASE("power gamma 2 and Gaussian give identical curves") {
    for (double b : {0.0, 0.4, 1.2, 2.5})
        CHECK(rem_variational(RateFunction::power_gamma(2.0), {}, b) == rem_variational(RateFunction::gaussian(), {}, b));
}

TEST_CASE("nonnegative support with zero rate at 0 gives no transition") {
    RateFunction half = RateFunction::piecewise_half(RateFunction::truncated(RateFunction::gaussian(), 1e-300),
                                                     RateFunction::two_sided_exponential());
    for (double b : {0.5, 2.0, 10.0}) CHECK(rem_variational(half, {}, b) == doctest::Approx(kLog2).epsilon(1e-12));
}
