#pragma once

#include "remlab/curve.hpp"
#include "remlab/numeric.hpp"
#include "remlab/rates.hpp"

namespace remlab {

// Objective f in H_N(sigma) = N f(xi(sigma)).
struct ObjectiveFn {
    enum class Kind { Identity, Negation, Scale, Square };
    Kind kind = Kind::Identity;
    double scale = 1.0;

    double operator()(double x) const {
        switch (kind) {
            case Kind::Identity: return x;
            case Kind::Negation: return -x;
            case Kind::Scale: return scale * x;
            case Kind::Square: return x * x;
        }
        return x;
    }
};

// log 2 - inf over {I <= log 2} of (beta f(x) + I(x)), by staged grid
// refinement plus golden-section polishing. Accurate to ~1e-10.
double rem_variational(const RateFunction& rf, ObjectiveFn f, double beta);

double rem_gaussian(double beta);
double rem_exponential(double beta);
double rem_weibull(double gamma, double beta);
// sign = +1: Hamiltonian is the Poisson count; sign = -1: its negation.
double rem_poisson(double theta, int sign, double beta);
double rem_binomial(double p, int sign, double beta);
// Annealed value log 2 + alpha beta for compactly supported laws; alpha may be +inf.
double annealed_compact(double alpha, double beta);

enum class TruncKind { Exp, Gauss };
// alpha is the rate level of the truncation; alpha >= log 2 gives the untruncated REM.
double rem_truncated(TruncKind kind, double alpha, double beta);

// Level-set endpoints and the betas where the minimiser reaches them.
struct LevelThresholds {
    double x1 = 0.0, beta0 = kInf;  // sign +1 branch
    double x2 = 0.0, beta1 = kInf;  // sign -1 branch
};
LevelThresholds poisson_thresholds(double theta);
LevelThresholds binomial_thresholds(double p);

struct RemModel {
    enum class Kind { Gaussian, Exponential, Weibull, Poisson, Binomial, TruncatedExp, TruncatedGauss, Compact };
    Kind kind = Kind::Gaussian;
    double param = 0.0;  // gamma, theta, p or alpha
    int sign = 1;

    double energy(double beta) const;
    // Rate and objective for the variational oracle (not available for Compact).
    RateFunction rate() const;
    ObjectiveFn objective() const;
};

FreeEnergyCurve build_rem_curve(const RemModel& model);

}  // namespace remlab
