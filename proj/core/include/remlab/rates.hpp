#pragma once

#include <memory>
#include <string>
#include <vector>

#include "remlab/rng.hpp"

namespace remlab {

enum class Family {
    Gaussian,
    TwoSidedExponential,
    PowerGamma,
    Poisson,
    Binomial,
    Negated,
    Truncated,
    PiecewiseHalf,
};

std::string to_string(Family f);
Family family_from_string(const std::string& s);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool empty = false;

    bool contains(double x) const { return !empty && x >= lo && x <= hi; }
    double width() const { return empty ? 0.0 : hi - lo; }
};

// Large-deviation rate function of a driving-distribution family.
// Values outside the effective domain are +infinity.
class RateFunction {
public:
    static RateFunction gaussian();
    static RateFunction two_sided_exponential();
    static RateFunction power_gamma(double gamma);
    static RateFunction poisson(double theta);
    static RateFunction binomial(double p);
    static RateFunction negated(const RateFunction& inner);
    static RateFunction truncated(const RateFunction& inner, double half_width);
    // left(x) for x < 0, right(x) for x >= 0; both parts must vanish at 0.
    static RateFunction piecewise_half(const RateFunction& left, const RateFunction& right);

    Family family() const { return family_; }
    const std::vector<double>& params() const { return params_; }
    const RateFunction& inner() const { return *parts_.at(0); }
    const RateFunction& left() const { return *parts_.at(0); }
    const RateFunction& right() const { return *parts_.at(1); }

    double operator()(double x) const;
    Interval domain() const;
    // {x : I(x) <= c}; flagged empty when c is below the minimum of I.
    Interval level_set(double c) const;
    // A point where the rate vanishes (the mean of the driving law).
    double zero() const;

private:
    RateFunction(Family f, std::vector<double> params,
                 std::vector<std::shared_ptr<const RateFunction>> parts = {});

    Family family_;
    std::vector<double> params_;
    std::vector<std::shared_ptr<const RateFunction>> parts_;
};

// Law of the per-particle variable at particle number N, with the rate
// function above as its large-deviation rate.
class DrivingDistribution {
public:
    DrivingDistribution(RateFunction rate, int N);

    const RateFunction& rate() const { return rate_; }
    int N() const { return N_; }

    // One draw from lambda_N (per-particle scale, e.g. N(0, 1/N) for Gaussian).
    double sample(KeyedStream& rng) const { return sample_node(rng) / N_; }
    // One draw at Hamiltonian scale: N times a lambda_N draw. For PowerGamma
    // this has density proportional to exp(-|x|^g / (g N^(g-1))).
    double sample_node(KeyedStream& rng) const;

private:
    double draw(const RateFunction& rf, KeyedStream& rng) const;

    RateFunction rate_;
    int N_;
};

}  // namespace remlab
