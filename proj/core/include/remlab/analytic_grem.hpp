#pragma once

#include <string>
#include <vector>

#include "remlab/curve.hpp"
#include "remlab/rates.hpp"

namespace remlab {

// An n-level GREM: H_N(sigma) = sum_i a_i xi(sigma_1..sigma_i), level i owning
// a fraction p_i of the N spins. Each level's driving law has rate |x|^g/g
// (g = 1 two-sided exponential, g = 2 Gaussian).
struct GremSpec {
    enum class Levels { Uniform, PerLevel, Mixed };

    std::vector<double> p;
    std::vector<double> a;
    Levels levels = Levels::Uniform;
    std::vector<double> gammas;  // one per level, always filled

    static GremSpec uniform(std::vector<double> p, std::vector<double> a, double gamma);
    static GremSpec per_level(std::vector<double> p, std::vector<double> a, std::vector<double> gammas);
    // kinds are "exp" or "gauss"
    static GremSpec mixed(std::vector<double> p, std::vector<double> a, const std::vector<std::string>& kinds);

    std::size_t n() const { return p.size(); }
    bool uniform_gamma() const;
    double gamma() const { return gammas.at(0); }
    RateFunction level_rate(std::size_t i) const;
    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

struct BetaLadder {
    std::vector<double> betas;  // beta_1 < ... < beta_K
    std::vector<int> ranks;     // r_1 < ... < r_K (1-based level indices)
};

// Freezing ladder for a uniform gamma >= 1 spec (gamma = 1 uses the
// exponential rule beta_k = min 1/a_i over the remaining levels). Ties go to
// the largest index. Trailing zero-weight levels never freeze, so r_K < n is
// possible only when every remaining weight is 0.
BetaLadder beta_ladder(const GremSpec& spec);

double grem_energy_gamma(const GremSpec& spec, double beta);
double grem_energy_exp(const GremSpec& spec, double beta);
// Two-level GREM with gamma in (0, 1).
double grem2_sub1(double p1, double p2, double a1, double a2, double gamma, double beta);
double grem2_exp_gauss(const std::vector<double>& p, const std::vector<double>& a, double beta);
double grem2_gauss_exp(const std::vector<double>& p, const std::vector<double>& a, double beta);

enum class MixedSubcase { A1, A2, A3, B1, B2 };
MixedSubcase exp_gauss_subcase(const std::vector<double>& p, const std::vector<double>& a);
MixedSubcase gauss_exp_subcase(const std::vector<double>& p, const std::vector<double>& a);
std::string to_string(MixedSubcase s);

struct Sub1Regime {
    int scenario = 0;             // 1, 2 or 3
    std::vector<double> betas;    // transition points
    std::vector<char> vertices;   // active vertex per interval: 'A', 'B', 'C', 'D'
};
Sub1Regime grem2_sub1_regime(double p1, double p2, double a1, double a2, double gamma);

// Closed form when one exists, otherwise the variational oracle.
double grem_energy(const GremSpec& spec, double beta);
bool has_closed_form(const GremSpec& spec);

// log 2 - inf over Psi+ of sum_i (I_i(x_i) - beta a_i x_i), n <= 4: grid
// dynamic programme over cumulative rate budgets, then exact local exchange
// moves on the budget polytope.
double grem_variational(const GremSpec& spec, double beta);

struct GammaLimitReport {
    std::vector<double> eps;
    std::vector<double> gaps;
    bool monotone = false;
};
GammaLimitReport gamma_limit_check(const GremSpec& spec, double beta, const std::vector<double>& eps);

// Collapses a gamma = 1 spec to its reduced form (strictly decreasing weights).
GremSpec reduce_exp_grem(const GremSpec& spec);

FreeEnergyCurve build_grem_curve(const GremSpec& spec);

struct RecoveredParams {
    std::vector<double> p;
    std::vector<double> a;
    double identity_residual = 0.0;
};
// Inverts a reduced-form curve. gamma == 1 for the exponential family.
// Throws std::invalid_argument if the characterising identity fails by > 1e-8.
RecoveredParams recover_params(const FreeEnergyCurve& curve, double gamma);

}  // namespace remlab
