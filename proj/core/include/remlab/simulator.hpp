#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "remlab/analytic_bk.hpp"
#include "remlab/analytic_grem.hpp"
#include "remlab/analytic_rem.hpp"
#include "remlab/external_field.hpp"

namespace remlab {

// Largest-remainder apportionment of N spins over the levels, at least one
// spin per level, ties to the lowest index.
std::vector<int> partition(int N, const std::vector<double>& p);

enum class TreeKind { Fixed, RegularPoisson, PoissonPerNode, Multinomial1, Multinomial2 };
std::string to_string(TreeKind k);
TreeKind tree_kind_from_string(const std::string& s);

struct TreeModel {
    TreeKind kind = TreeKind::Fixed;
    std::vector<double> p;
    std::vector<int> k;  // Fixed only; empty means partition(N, p)
};

struct TreeStats {
    std::vector<double> B;   // B_i: nodes at level i (i = 1..n)
    std::vector<double> s2;  // s2_i: sum over level-i nodes of (leaves below)^2
    double leaves() const { return B.empty() ? 0.0 : B.back(); }
};

// Levels are numbered 1..n; node ids are positions within a level in
// breadth-first order, so the children of a node form a contiguous range.
struct Tree {
    TreeKind kind = TreeKind::Fixed;
    int N = 0;
    std::vector<int> k;                             // spin counts per level (Fixed, Multinomial)
    std::vector<std::uint64_t> fanout;              // per-level fanout of regular trees
    std::vector<std::vector<std::uint32_t>> counts; // PoissonPerNode: fanout of each node at levels 0..n-1
    std::vector<std::vector<std::uint64_t>> first;  // PoissonPerNode: id of each node's first child
    TreeStats stats;
    int attempts = 1;

    int levels() const { return static_cast<int>(fanout.empty() ? counts.size() : fanout.size()); }
    bool regular() const { return !fanout.empty(); }
    std::uint64_t children(int level, std::uint64_t id) const;       // fanout below a node at `level`
    std::uint64_t child(int level, std::uint64_t id, std::uint64_t c) const;
};

// Thrown when a run would exceed its configuration or node budget.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double required, double cap)
        : std::runtime_error(what), required_(required), cap_(cap) {}
    double required() const { return required_; }
    double cap() const { return cap_; }

private:
    double required_;
    double cap_;
};

inline constexpr std::uint64_t kEnumerationCap = std::uint64_t{1} << 26;
inline constexpr std::uint64_t kNodeCap = std::uint64_t{1} << 27;

// Deterministic in (model, N, seed, replica). PoissonPerNode trees whose
// realised node count exceeds kNodeCap are redrawn (Tree::attempts > 1).
Tree build_tree(const TreeModel& model, int N, std::uint64_t seed, std::uint64_t replica);

struct SimModel {
    enum class Kind { Rem, Grem, Bk, Word, Field };
    Kind kind = Kind::Rem;
    RemModel rem;
    GremSpec grem;
    BkSpec bk;
    WordSpec word;
    FieldParams field;

    static SimModel of(const RemModel& m);
    static SimModel of(const GremSpec& s);
    static SimModel of(const BkSpec& s);
    static SimModel of(const WordSpec& s);
    static SimModel of(const FieldParams& f);
    std::string describe() const;
};

// Limiting free energy for the model: closed form where one exists,
// otherwise the matching variational solver.
double analytic_energy(const SimModel& model, double beta);

struct SimOptions {
    TreeKind tree = TreeKind::Fixed;
    std::vector<int> k;  // Fixed trees: explicit spin counts
    int replicas = 1;
    std::uint64_t seed = 0;
    std::vector<double> betas;
    bool sampling = false;  // allow sampling above the enumeration cap
    std::uint64_t samples = std::uint64_t{1} << 20;
    std::uint64_t enumeration_cap = kEnumerationCap;
    int threads = 0;  // 0: REMLAB_THREADS or hardware concurrency
};

struct SimResult {
    std::string model;
    int N = 0;
    std::uint64_t seed = 0;
    int replicas = 0;
    std::vector<double> betas;
    std::vector<std::vector<double>> values;  // [replica][beta]: (1/N) log Z_N
    std::vector<TreeStats> trees;             // random trees only
    std::vector<int> attempts;                // random trees only
    bool sampled = false;

    std::vector<double> mean() const;
    std::vector<double> stddev() const;
};

SimResult simulate(const SimModel& model, int N, const SimOptions& opt);

// H(sigma) for every configuration of one replica, in the order the
// enumeration visits them (N <= 24). Same draws as simulate().
std::vector<double> configuration_energies(const SimModel& model, int N, const SimOptions& opt,
                                           std::uint64_t replica);

// Worker count: REMLAB_THREADS if set, else hardware concurrency.
int default_threads();

struct EmpiricalHistogram {
    std::vector<double> edges;
    std::vector<double> mass;
    std::vector<double> stat;  // -(1/N) log mass, +inf when empty
    double underflow = 0.0;
    double overflow = 0.0;
    std::uint64_t draws = 0;
};

// 2^N per-particle draws xi_sigma / N from the driving law, binned on
// [lo, lo + bins * width).
EmpiricalHistogram empirical_ldp(const RateFunction& rate, int N, double lo, double width, int bins,
                                 std::uint64_t seed);

struct ConvergeRow {
    int N = 0;
    double beta = 0.0;
    double analytic = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
    double median_abs_error = 0.0;
};

std::vector<ConvergeRow> converge(const SimModel& model, const std::vector<int>& Ns, const SimOptions& opt);

// Monte Carlo estimates of E((X+a)/(X+Y+a+b))^2 and E(X+a)/(X+Y+a+b)^2 for
// independent X ~ Poisson(a lambda), Y ~ Poisson(b lambda).
struct PoissonRatioMoments {
    double square_mean = 0.0, square_se = 0.0;
    double inverse_mean = 0.0, inverse_se = 0.0;
};
PoissonRatioMoments poisson_ratio_moments(double a, double b, double lambda, std::uint64_t draws,
                                          std::uint64_t seed);

}  // namespace remlab
