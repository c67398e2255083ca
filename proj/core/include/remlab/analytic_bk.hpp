#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "remlab/analytic_grem.hpp"

namespace remlab {

// Subsets of the symbols {1..n} are bitmasks: bit i-1 stands for symbol i.
using SymbolSet = std::uint32_t;

inline constexpr int kMaxBkSymbols = 8;

// H_N(sigma) = sum over nonempty s of a_s xi(s, sigma(s)).
struct BkSpec {
    int n = 0;
    std::vector<double> p;
    std::map<SymbolSet, double> weights;
    double gamma = 2.0;  // 2 is Gaussian, 1 two-sided exponential

    SymbolSet full() const { return (SymbolSet{1} << n) - 1; }
    double proportion(SymbolSet A) const;
    // w^2_A = sum over s subset of A of a_s^2
    double w2(SymbolSet A) const;
    void validate() const;
};

using Permutation = std::vector<int>;  // 0-based symbol indices, level order
std::vector<Permutation> all_permutations(int n);

// Hidden GREM seen along level order pi.
GremSpec pi_grem(const BkSpec& spec, const Permutation& pi);

std::vector<double> bk_permutation_energies(const BkSpec& spec, double beta);
// Optionally reports how many permutations attain the minimum (rel. tol 1e-12).
double bk_energy_min(const BkSpec& spec, double beta, int* minimizers = nullptr);

struct ChainResult {
    std::vector<SymbolSet> sets;  // G_1 < ... < G_K
    std::vector<double> betas;    // beta_1 < ... < beta_K
    // Symbols that only carry zero weight increments and never freeze.
    SymbolSet unfrozen = 0;
    // Permutations listing G_1, then G_2 \ G_1, ... : prod of block factorials.
    std::uint64_t surviving_permutations = 0;

    std::size_t K() const { return sets.size(); }
};

// Gaussian only. Throws std::logic_error if the union of minimising blocks
// fails to attain the minimum itself.
ChainResult bk_chain(const BkSpec& spec);
double bk_energy_chain(const BkSpec& spec, double beta);
double bk_energy_chain(const BkSpec& spec, const ChainResult& chain, double beta);

// Block tree GREM with per-level Gaussian weights: max over level orders.
double block_tree_energy(const std::vector<double>& p, const std::vector<double>& a, double beta);
// Block tree GREM weighted by the BK increments w(pi, i); bounds bk_energy_min from above.
double block_tree_energy_sets(const BkSpec& spec, double beta);

}  // namespace remlab
