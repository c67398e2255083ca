#include "remlab/analytic_bk.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "remlab/numeric.hpp"

namespace remlab {

namespace {

bool close_rel(double x, double y) {
    if (x == y) return true;
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    return std::fabs(x - y) <= 1e-12 * std::max(std::fabs(x), std::fabs(y));
}

std::uint64_t factorial(int k) {
    std::uint64_t f = 1;
    for (int i = 2; i <= k; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

}  // namespace

double BkSpec::proportion(SymbolSet A) const {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        if (A >> i & 1u) s += p[i];
    return s;
}

double BkSpec::w2(SymbolSet A) const {
    double s = 0.0;
    for (const auto& [mask, a] : weights)
        if ((mask & ~A) == 0) s += a * a;
    return s;
}

void BkSpec::validate() const {
    if (n < 1 || n > kMaxBkSymbols) throw std::invalid_argument("n: symbol count must be in 1..8");
    if (static_cast<int>(p.size()) != n) throw std::invalid_argument("p: length must equal n");
    double sum = 0.0;
    for (double x : p) {
        if (!(x > 0.0)) throw std::invalid_argument("p: proportions must be > 0");
        sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("p: proportions must sum to 1");
    bool positive = false;
    for (const auto& [mask, a] : weights) {
        if (mask == 0 || (mask & ~full()) != 0) throw std::invalid_argument("weights: subset outside 1..n");
        if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("weights: a_s must be finite and >= 0");
        positive = positive || a > 0.0;
    }
    if (!positive) throw std::invalid_argument("weights: at least one a_s must be > 0");
    if (!(gamma >= 1.0) || !std::isfinite(gamma)) throw std::invalid_argument("gamma: must be >= 1");
}

std::vector<Permutation> all_permutations(int n) {
    Permutation pi(static_cast<std::size_t>(n));
    std::iota(pi.begin(), pi.end(), 0);
    std::vector<Permutation> out;
    do out.push_back(pi);
    while (std::next_permutation(pi.begin(), pi.end()));
    return out;
}

GremSpec pi_grem(const BkSpec& spec, const Permutation& pi) {
    const bool exp_family = spec.gamma == 1.0;
    const double q = exp_family ? 0.0 : spec.gamma / (spec.gamma - 1.0);
    std::vector<double> p, w;
    SymbolSet prev = 0;
    for (int sym : pi) {
        SymbolSet cur = prev | (SymbolSet{1} << sym);
        double acc = 0.0;
        for (const auto& [mask, a] : spec.weights) {
            if ((mask & ~cur) != 0 || (mask & ~prev) == 0) continue;
            if (exp_family) acc = std::max(acc, a);
            else if (q == 2.0) acc += a * a;
            else if (a > 0.0) acc += std::pow(a, q);
        }
        p.push_back(spec.p[static_cast<std::size_t>(sym)]);
        w.push_back(exp_family ? acc : (q == 2.0 ? std::sqrt(acc) : std::pow(acc, 1.0 / q)));
        prev = cur;
    }
    return GremSpec::uniform(std::move(p), std::move(w), spec.gamma);
}

std::vector<double> bk_permutation_energies(const BkSpec& spec, double beta) {
    spec.validate();
    std::vector<double> out;
    for (const auto& pi : all_permutations(spec.n)) out.push_back(grem_energy(pi_grem(spec, pi), beta));
    return out;
}

double bk_energy_min(const BkSpec& spec, double beta, int* minimizers) {
    auto e = bk_permutation_energies(spec, beta);
    double best = *std::min_element(e.begin(), e.end());
    if (minimizers) *minimizers = static_cast<int>(std::count_if(e.begin(), e.end(), [&](double x) {
        return close_rel(x, best);
    }));
    return best;
}

ChainResult bk_chain(const BkSpec& spec) {
    spec.validate();
    if (spec.gamma != 2.0) throw std::invalid_argument("gamma: chain construction is Gaussian only");
    const SymbolSet I = spec.full();
    ChainResult out;
    out.surviving_permutations = 1;
    SymbolSet G = 0;
    while (G != I) {
        const SymbolSet rest = I & ~G;
        const double wG = spec.w2(G);
        auto B = [&](SymbolSet T) {
            double inc = spec.w2(G | T) - wG;
            if (!(inc > 0.0)) return kInf;
            return std::sqrt(2.0 * spec.proportion(T) * kLog2 / inc);
        };
        double best = kInf;
        for (SymbolSet T = rest; T != 0; T = (T - 1) & rest) best = std::min(best, B(T));
        if (!std::isfinite(best)) {
            out.unfrozen = rest;
            out.surviving_permutations *= factorial(std::popcount(rest));
            break;
        }
        SymbolSet U = 0;
        for (SymbolSet T = rest; T != 0; T = (T - 1) & rest)
            if (close_rel(B(T), best)) U |= T;
        if (!close_rel(B(U), best)) throw std::logic_error("bk_chain: union of minimising blocks is not minimising");
        if (!out.betas.empty() && !(best > out.betas.back()))
            throw std::logic_error("bk_chain: thresholds not strictly increasing");
        out.sets.push_back(G | U);
        out.betas.push_back(best);
        out.surviving_permutations *= factorial(std::popcount(U));
        G |= U;
    }
    return out;
}

double bk_energy_chain(const BkSpec& spec, const ChainResult& chain, double beta) {
    const std::size_t j = static_cast<std::size_t>(
        std::upper_bound(chain.betas.begin(), chain.betas.end(), beta) - chain.betas.begin());
    const SymbolSet Gj = j == 0 ? 0 : chain.sets[j - 1];
    double e = j == 0 ? kLog2 : kLog2 * spec.proportion(spec.full() & ~Gj);
    double frozen = 0.0;
    double prev_w2 = 0.0;
    for (std::size_t i = 0; i < j; ++i) {
        double cur = spec.w2(chain.sets[i]);
        frozen += chain.betas[i] * (cur - prev_w2);
        prev_w2 = cur;
    }
    double total = 0.0;
    for (const auto& [mask, a] : spec.weights) total += a * a;
    return e + beta * frozen + 0.5 * beta * beta * (total - prev_w2);
}

double bk_energy_chain(const BkSpec& spec, double beta) { return bk_energy_chain(spec, bk_chain(spec), beta); }

double block_tree_energy(const std::vector<double>& p, const std::vector<double>& a, double beta) {
    GremSpec base = GremSpec::uniform(p, a, 2.0);
    base.validate();
    if (base.n() > static_cast<std::size_t>(kMaxBkSymbols)) throw std::invalid_argument("p: at most 8 levels");
    double best = -kInf;
    for (const auto& pi : all_permutations(static_cast<int>(p.size()))) {
        std::vector<double> pp, aa;
        for (int i : pi) {
            pp.push_back(p[static_cast<std::size_t>(i)]);
            aa.push_back(a[static_cast<std::size_t>(i)]);
        }
        best = std::max(best, grem_energy_gamma(GremSpec::uniform(pp, aa, 2.0), beta));
    }
    return best;
}

double block_tree_energy_sets(const BkSpec& spec, double beta) {
    auto e = bk_permutation_energies(spec, beta);
    return *std::max_element(e.begin(), e.end());
}

}  // namespace remlab
