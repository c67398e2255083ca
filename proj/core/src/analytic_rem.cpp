#include "remlab/analytic_rem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace remlab {

namespace {

const double kSqrt2Log2 = std::sqrt(2.0 * kLog2);

}  // namespace

double rem_variational(const RateFunction& rf, ObjectiveFn f, double beta) {
    Interval L = rf.level_set(kLog2);
    if (L.empty) throw std::logic_error("rem_variational: empty level set");
    auto g = [&](double x) { return beta * f(x) + rf(x); };

    double best = std::min(g(L.lo), g(L.hi));
    if (L.contains(0.0)) best = std::min(best, g(0.0));
    if (L.contains(rf.zero())) best = std::min(best, g(rf.zero()));

    if (L.width() > 0.0) {
        double a = L.lo, b = L.hi;
        for (int n : {1000, 10000, 100000}) {
            double h = (b - a) / n;
            int arg = 0;
            double fb = kInf;
            for (int i = 0; i <= n; ++i) {
                double v = g(a + h * i);
                if (v < fb) {
                    fb = v;
                    arg = i;
                }
            }
            best = std::min(best, fb);
            double na = std::max(L.lo, a + h * (arg - 1));
            double nb = std::min(L.hi, a + h * (arg + 1));
            a = na;
            b = nb;
        }
        best = std::min(best, g(golden_min(g, a, b)));
    }
    return kLog2 - best;
}

double rem_gaussian(double beta) {
    return beta < kSqrt2Log2 ? kLog2 + 0.5 * beta * beta : beta * kSqrt2Log2;
}

double rem_exponential(double beta) { return beta < 1.0 ? kLog2 : beta * kLog2; }

double rem_weibull(double gamma, double beta) {
    if (!(gamma > 0.0)) throw std::invalid_argument("gamma: must be > 0");
    double slope = std::pow(gamma * kLog2, 1.0 / gamma);
    if (gamma > 1.0) {
        double bc = std::pow(gamma * kLog2, (gamma - 1.0) / gamma);
        if (beta <= bc) return kLog2 + (gamma - 1.0) / gamma * std::pow(beta, gamma / (gamma - 1.0));
        return slope * beta;
    }
    double bc = std::pow(gamma, -1.0 / gamma) * std::pow(kLog2, -(1.0 - gamma) / gamma);
    return beta < bc ? kLog2 : slope * beta;
}

LevelThresholds poisson_thresholds(double theta) {
    Interval L = RateFunction::poisson(theta).level_set(kLog2);
    LevelThresholds t;
    t.x1 = L.lo;
    t.beta0 = L.lo > 0.0 ? std::log(theta / L.lo) : kInf;
    t.x2 = L.hi;
    t.beta1 = std::log(L.hi / theta);
    return t;
}

LevelThresholds binomial_thresholds(double p) {
    Interval L = RateFunction::binomial(p).level_set(kLog2);
    LevelThresholds t;
    t.x1 = L.lo;
    t.beta0 = L.lo > 0.0 ? std::log(p * (1.0 - L.lo) / ((1.0 - p) * L.lo)) : kInf;
    t.x2 = L.hi;
    t.beta1 = L.hi < 1.0 ? std::log((1.0 - p) * L.hi / (p * (1.0 - L.hi))) : kInf;
    return t;
}

double rem_poisson(double theta, int sign, double beta) {
    if (!(theta > 0.0)) throw std::invalid_argument("theta: must be > 0");
    LevelThresholds t = poisson_thresholds(theta);
    if (sign >= 0) {
        if (beta <= t.beta0) return kLog2 - theta + theta * std::exp(-beta);
        return -beta * t.x1;
    }
    if (beta <= t.beta1) return kLog2 - theta + theta * std::exp(beta);
    return beta * t.x2;
}

double rem_binomial(double p, int sign, double beta) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("prob: must be in (0,1)");
    LevelThresholds t = binomial_thresholds(p);
    if (sign >= 0) {
        if (beta <= t.beta0) return kLog2 + std::log((1.0 - p) + p * std::exp(-beta));
        return -beta * t.x1;
    }
    if (beta <= t.beta1) return kLog2 + beta + std::log(p + (1.0 - p) * std::exp(-beta));
    return beta * t.x2;
}

double annealed_compact(double alpha, double beta) {
    if (beta == 0.0) return kLog2;
    if (std::isinf(alpha)) return kInf;
    return kLog2 + alpha * beta;
}

double rem_truncated(TruncKind kind, double alpha, double beta) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha: must be > 0");
    if (kind == TruncKind::Exp) {
        if (alpha >= kLog2) return rem_exponential(beta);
        return beta <= 1.0 ? kLog2 : kLog2 - alpha + beta * alpha;
    }
    if (alpha >= kLog2) return rem_gaussian(beta);
    double edge = std::sqrt(2.0 * alpha);
    return beta <= edge ? kLog2 + 0.5 * beta * beta : kLog2 - alpha + beta * edge;
}

double RemModel::energy(double beta) const {
    switch (kind) {
        case Kind::Gaussian: return rem_gaussian(beta);
        case Kind::Exponential: return rem_exponential(beta);
        case Kind::Weibull: return rem_weibull(param, beta);
        case Kind::Poisson: return rem_poisson(param, sign, beta);
        case Kind::Binomial: return rem_binomial(param, sign, beta);
        case Kind::TruncatedExp: return rem_truncated(TruncKind::Exp, param, beta);
        case Kind::TruncatedGauss: return rem_truncated(TruncKind::Gauss, param, beta);
        case Kind::Compact: return annealed_compact(param, beta);
    }
    return kLog2;
}

RateFunction RemModel::rate() const {
    switch (kind) {
        case Kind::Gaussian: return RateFunction::gaussian();
        case Kind::Exponential: return RateFunction::two_sided_exponential();
        case Kind::Weibull: return RateFunction::power_gamma(param);
        case Kind::Poisson: return RateFunction::poisson(param);
        case Kind::Binomial: return RateFunction::binomial(param);
        case Kind::TruncatedExp: return RateFunction::truncated(RateFunction::two_sided_exponential(), param);
        case Kind::TruncatedGauss:
            return RateFunction::truncated(RateFunction::gaussian(), std::sqrt(2.0 * param));
        case Kind::Compact: break;
    }
    throw std::invalid_argument("model: compact laws have no rate function here");
}

ObjectiveFn RemModel::objective() const {
    ObjectiveFn f;
    if ((kind == Kind::Poisson || kind == Kind::Binomial) && sign < 0) f.kind = ObjectiveFn::Kind::Negation;
    return f;
}

FreeEnergyCurve build_rem_curve(const RemModel& m) {
    using K = SegmentKind;
    FreeEnergyCurve c;
    auto seg = [](K k, std::vector<double> co) { return Segment{k, std::move(co)}; };
    switch (m.kind) {
        case RemModel::Kind::Gaussian:
            c.breakpoints = {kSqrt2Log2};
            c.segments = {seg(K::Quadratic, {kLog2, 0.0, 0.5}), seg(K::Linear, {0.0, kSqrt2Log2})};
            break;
        case RemModel::Kind::Exponential:
            c.breakpoints = {1.0};
            c.segments = {seg(K::Constant, {kLog2}), seg(K::Linear, {0.0, kLog2})};
            break;
        case RemModel::Kind::Weibull: {
            double g = m.param;
            if (!(g > 0.0)) throw std::invalid_argument("gamma: must be > 0");
            double slope = std::pow(g * kLog2, 1.0 / g);
            if (g > 1.0) {
                c.breakpoints = {std::pow(g * kLog2, (g - 1.0) / g)};
                Segment low = g == 2.0 ? seg(K::Quadratic, {kLog2, 0.0, 0.5})
                                       : seg(K::Power, {kLog2, 0.0, (g - 1.0) / g, g / (g - 1.0)});
                c.segments = {low, seg(K::Linear, {0.0, slope})};
            } else {
                c.breakpoints = {std::pow(g, -1.0 / g) * std::pow(kLog2, -(1.0 - g) / g)};
                c.segments = {seg(K::Constant, {kLog2}), seg(K::Linear, {0.0, slope})};
            }
            break;
        }
        case RemModel::Kind::Poisson: {
            double th = m.param;
            LevelThresholds t = poisson_thresholds(th);
            if (m.sign >= 0) {
                c.segments = {seg(K::ExpDecay, {kLog2 - th, th, -1.0})};
                if (std::isfinite(t.beta0)) {
                    c.breakpoints = {t.beta0};
                    c.segments.push_back(seg(K::Linear, {0.0, -t.x1}));
                }
            } else {
                c.breakpoints = {t.beta1};
                c.segments = {seg(K::ExpDecay, {kLog2 - th, th, 1.0}), seg(K::Linear, {0.0, t.x2})};
            }
            break;
        }
        case RemModel::Kind::Binomial: {
            double p = m.param;
            LevelThresholds t = binomial_thresholds(p);
            if (m.sign >= 0) {
                c.segments = {seg(K::Logistic, {kLog2, 0.0, 1.0 - p, p, -1.0})};
                if (std::isfinite(t.beta0)) {
                    c.breakpoints = {t.beta0};
                    c.segments.push_back(seg(K::Linear, {0.0, -t.x1}));
                }
            } else {
                c.segments = {seg(K::Logistic, {kLog2, 1.0, p, 1.0 - p, -1.0})};
                if (std::isfinite(t.beta1)) {
                    c.breakpoints = {t.beta1};
                    c.segments.push_back(seg(K::Linear, {0.0, t.x2}));
                }
            }
            break;
        }
        case RemModel::Kind::TruncatedExp: {
            double al = m.param;
            if (al >= kLog2) return build_rem_curve({RemModel::Kind::Exponential});
            c.breakpoints = {1.0};
            c.segments = {seg(K::Constant, {kLog2}), seg(K::Linear, {kLog2 - al, al})};
            break;
        }
        case RemModel::Kind::TruncatedGauss: {
            double al = m.param;
            if (al >= kLog2) return build_rem_curve({RemModel::Kind::Gaussian});
            double edge = std::sqrt(2.0 * al);
            c.breakpoints = {edge};
            c.segments = {seg(K::Quadratic, {kLog2, 0.0, 0.5}), seg(K::Linear, {kLog2 - al, edge})};
            break;
        }
        case RemModel::Kind::Compact:
            if (!std::isfinite(m.param)) throw std::invalid_argument("alpha: infinite support has no finite curve");
            c.segments = {seg(K::Linear, {kLog2, m.param})};
            break;
    }
    return c;
}

}  // namespace remlab
