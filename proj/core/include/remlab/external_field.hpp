#pragma once

#include <vector>

#include "remlab/analytic_bk.hpp"
#include "remlab/curve.hpp"

namespace remlab {

// I0(y) = y atanh(y) - log cosh(atanh(y)); log 2 at |y| = 1, +inf beyond.
double binary_entropy_rate(double y);

// H_N(sigma) = a N xi_sigma + h sum_i sigma_i with xi_sigma ~ N(0, 1/N).
struct FieldParams {
    double a = 1.0;
    double h = 0.0;

    void validate() const;
};

struct FieldSolution {
    double y0 = 0.0;         // root of a atanh(y) / sqrt(2 (log 2 - I0(y))) = h
    double x0 = 0.0;         // sqrt(2 (log 2 - I0(y0)))
    double beta_star = 0.0;  // x0 / a, end of the high-temperature branch
    double c_beta = 0.0;     // I0(c_beta) = log 2 - beta^2 a^2 / 2, 0 when beta a > sqrt(2 log 2)
    bool high_temperature = true;
};

FieldSolution field_solution(const FieldParams& fp, double beta);
double rem_field_energy(const FieldParams& fp, double beta);
inline double rem_field_energy(double a, double h, double beta) { return rem_field_energy(FieldParams{a, h}, beta); }
FreeEnergyCurve build_field_curve(const FieldParams& fp);

struct Word {
    std::vector<int> sym;  // 1-based symbols, repeats allowed
    double a = 0.0;

    SymbolSet set() const;
};

struct WordSpec {
    int n = 0;
    std::vector<Word> words;
    std::vector<double> p;
    double h = 0.0;

    void validate() const;
};

inline constexpr int kMaxWordSymbols = 3;
inline constexpr int kMaxWords = 7;

// log 2 - inf of sum_s (x_s^2/2 - beta a_s x_s) + sum_i (p_i I0(y_i/p_i) - beta h y_i)
// subject to, for every nonempty A, sum_{set(s) in A} x_s^2/2 + sum_{i in A} p_i I0(y_i/p_i) <= p_A log 2.
// Solved by a log-barrier Newton method (the problem is convex). Accurate to ~1e-9.
double word_grem_energy(const WordSpec& ws, double beta);

// One word per subset carrying a weight (zero weights included).
WordSpec word_spec_from_bk(const BkSpec& spec, double h = 0.0);

}  // namespace remlab
