#include "remlab/rates.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "remlab/numeric.hpp"

namespace remlab {

namespace {

double xlogy_over(double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); }

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

std::string to_string(Family f) {
    switch (f) {
        case Family::Gaussian: return "Gaussian";
        case Family::TwoSidedExponential: return "TwoSidedExponential";
        case Family::PowerGamma: return "PowerGamma";
        case Family::Poisson: return "Poisson";
        case Family::Binomial: return "Binomial";
        case Family::Negated: return "Negated";
        case Family::Truncated: return "Truncated";
        case Family::PiecewiseHalf: return "PiecewiseHalf";
    }
    return "?";
}

Family family_from_string(const std::string& s) {
    for (Family f : {Family::Gaussian, Family::TwoSidedExponential, Family::PowerGamma, Family::Poisson,
                     Family::Binomial, Family::Negated, Family::Truncated, Family::PiecewiseHalf}) {
        if (to_string(f) == s) return f;
    }
    throw std::invalid_argument("family: unknown rate family '" + s + "'");
}

RateFunction::RateFunction(Family f, std::vector<double> params,
                           std::vector<std::shared_ptr<const RateFunction>> parts)
    : family_(f), params_(std::move(params)), parts_(std::move(parts)) {}

RateFunction RateFunction::gaussian() { return RateFunction(Family::Gaussian, {}); }

RateFunction RateFunction::two_sided_exponential() { return RateFunction(Family::TwoSidedExponential, {}); }

RateFunction RateFunction::power_gamma(double gamma) {
    require(std::isfinite(gamma) && gamma > 0.0, "params: PowerGamma needs gamma > 0");
    return RateFunction(Family::PowerGamma, {gamma});
}

RateFunction RateFunction::poisson(double theta) {
    require(std::isfinite(theta) && theta > 0.0, "params: Poisson needs theta > 0");
    return RateFunction(Family::Poisson, {theta});
}

RateFunction RateFunction::binomial(double p) {
    require(p > 0.0 && p < 1.0, "params: Binomial needs p in (0,1)");
    return RateFunction(Family::Binomial, {p});
}

RateFunction RateFunction::negated(const RateFunction& inner) {
    return RateFunction(Family::Negated, {}, {std::make_shared<const RateFunction>(inner)});
}

RateFunction RateFunction::truncated(const RateFunction& inner, double half_width) {
    require(std::isfinite(half_width) && half_width > 0.0, "params: Truncated needs half-width > 0");
    require(std::fabs(inner.zero()) <= half_width, "params: Truncated half-width must contain the mean");
    return RateFunction(Family::Truncated, {half_width}, {std::make_shared<const RateFunction>(inner)});
}

RateFunction RateFunction::piecewise_half(const RateFunction& left, const RateFunction& right) {
    require(left(0.0) == 0.0 && right(0.0) == 0.0, "params: PiecewiseHalf parts must vanish at 0");
    return RateFunction(Family::PiecewiseHalf, {},
                        {std::make_shared<const RateFunction>(left), std::make_shared<const RateFunction>(right)});
}

double RateFunction::operator()(double x) const {
    switch (family_) {
        case Family::Gaussian: return 0.5 * x * x;
        case Family::TwoSidedExponential: return std::fabs(x);
        case Family::PowerGamma:
            // same arithmetic as the named families, so g = 2 and g = 1 match them bit for bit
            if (params_[0] == 2.0) return 0.5 * x * x;
            if (params_[0] == 1.0) return std::fabs(x);
            return std::pow(std::fabs(x), params_[0]) / params_[0];
        case Family::Poisson: {
            double th = params_[0];
            if (x < 0.0) return kInf;
            return th - x + xlogy_over(x, th);
        }
        case Family::Binomial: {
            double p = params_[0];
            if (x < 0.0 || x > 1.0) return kInf;
            return xlogy_over(x, p) + xlogy_over(1.0 - x, 1.0 - p);
        }
        case Family::Negated: return inner()(-x);
        case Family::Truncated: return std::fabs(x) > params_[0] ? kInf : inner()(x);
        case Family::PiecewiseHalf: return x < 0.0 ? left()(x) : right()(x);
    }
    return kInf;
}

Interval RateFunction::domain() const {
    switch (family_) {
        case Family::Gaussian:
        case Family::TwoSidedExponential:
        case Family::PowerGamma: return {-kInf, kInf};
        case Family::Poisson: return {0.0, kInf};
        case Family::Binomial: return {0.0, 1.0};
        case Family::Negated: {
            Interval d = inner().domain();
            return {-d.hi, -d.lo};
        }
        case Family::Truncated: {
            Interval d = inner().domain();
            return {std::max(d.lo, -params_[0]), std::min(d.hi, params_[0])};
        }
        case Family::PiecewiseHalf: return {std::min(0.0, left().domain().lo), std::max(0.0, right().domain().hi)};
    }
    return {};
}

Interval RateFunction::level_set(double c) const {
    if (!(c >= 0.0)) return {0.0, 0.0, true};
    auto excess = [this, c](double x) { return (*this)(x) - c; };
    switch (family_) {
        case Family::Gaussian: {
            double r = std::sqrt(2.0 * c);
            return {-r, r};
        }
        case Family::TwoSidedExponential: return {-c, c};
        case Family::PowerGamma: {
            double g = params_[0];
            double r = g == 2.0 ? std::sqrt(2.0 * c) : std::pow(g * c, 1.0 / g);
            return {-r, r};
        }
        case Family::Poisson: {
            double th = params_[0];
            double lo = c >= th ? 0.0 : bisect(excess, 0.0, th);
            double top = 2.0 * th + 1.0;
            while ((*this)(top) <= c) top *= 2.0;
            return {lo, bisect(excess, th, top)};
        }
        case Family::Binomial: {
            double p = params_[0];
            double lo = (*this)(0.0) <= c ? 0.0 : bisect(excess, 0.0, p);
            double hi = (*this)(1.0) <= c ? 1.0 : bisect(excess, p, 1.0);
            return {lo, hi};
        }
        case Family::Negated: {
            Interval in = inner().level_set(c);
            return {-in.hi, -in.lo, in.empty};
        }
        case Family::Truncated: {
            Interval in = inner().level_set(c);
            return {std::max(in.lo, -params_[0]), std::min(in.hi, params_[0]), in.empty};
        }
        case Family::PiecewiseHalf: {
            Interval l = left().level_set(c);
            Interval r = right().level_set(c);
            return {std::min(0.0, l.lo), std::max(0.0, r.hi)};
        }
    }
    return {0.0, 0.0, true};
}

double RateFunction::zero() const {
    switch (family_) {
        case Family::Poisson:
        case Family::Binomial: return params_[0];
        case Family::Negated: return -inner().zero();
        case Family::Truncated: return inner().zero();
        default: return 0.0;
    }
}

DrivingDistribution::DrivingDistribution(RateFunction rate, int N) : rate_(std::move(rate)), N_(N) {
    if (N < 1) throw std::invalid_argument("N: particle number must be >= 1");
}

double DrivingDistribution::sample_node(KeyedStream& rng) const { return draw(rate_, rng); }

double DrivingDistribution::draw(const RateFunction& rf, KeyedStream& rng) const {
    const double n = N_;
    switch (rf.family()) {
        case Family::Gaussian: return std::sqrt(n) * rng.normal();
        case Family::TwoSidedExponential: {
            double mag = -std::log(rng.uniform());
            return rng.uniform() < 0.5 ? -mag : mag;
        }
        case Family::PowerGamma: {
            double g = rf.params()[0];
            std::gamma_distribution<double> gamma(1.0 / g, g * std::pow(n, g - 1.0));
            double mag = std::pow(gamma(rng), 1.0 / g);
            return rng.uniform() < 0.5 ? -mag : mag;
        }
        case Family::Poisson: {
            std::poisson_distribution<long long> pois(n * rf.params()[0]);
            return static_cast<double>(pois(rng));
        }
        case Family::Binomial: {
            std::binomial_distribution<long long> bin(N_, rf.params()[0]);
            return static_cast<double>(bin(rng));
        }
        case Family::Negated: return -draw(rf.inner(), rng);
        case Family::Truncated: {
            double limit = rf.params()[0] * n;
            for (int attempt = 0; attempt < 1000000; ++attempt) {
                double x = draw(rf.inner(), rng);
                if (std::fabs(x) <= limit) return x;
            }
            throw std::runtime_error("truncated sampler: acceptance rate too small");
        }
        case Family::PiecewiseHalf: {
            if (rng.uniform() < 0.5) return -std::fabs(draw(rf.left(), rng));
            return std::fabs(draw(rf.right(), rng));
        }
    }
    return 0.0;
}

}  // namespace remlab
