#include "remlab/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <random>
#include <thread>

#include "remlab/numeric.hpp"
#include "remlab/rng.hpp"

namespace remlab {

namespace {

// Domain tags keep the keyed streams of different purposes apart.
constexpr std::uint64_t kTagTree = 0x7472656500000001ull;
constexpr std::uint64_t kTagVar = 0x7661720000000002ull;
constexpr std::uint64_t kTagThrow = 0x7468726f00000003ull;
constexpr std::uint64_t kTagThrowFresh = 0x7468726f00000004ull;
constexpr std::uint64_t kTagSample = 0x73616d7000000005ull;
constexpr std::uint64_t kTagWord = 0x776f726400000006ull;
constexpr std::uint64_t kTagLdp = 0x6c64700000000007ull;
constexpr std::uint64_t kTagRatio = 0x7261746f00000008ull;

constexpr int kMaxTreeAttempts = 8;

std::uint64_t poisson_draw(double mean, KeyedStream& rng) {
    std::poisson_distribution<std::uint64_t> d(mean);
    return d(rng);
}

void finish_regular_stats(Tree& t) {
    const int n = t.levels();
    t.stats.B.assign(n, 0.0);
    t.stats.s2.assign(n, 0.0);
    double nodes = 1.0;
    for (int i = 0; i < n; ++i) {
        nodes *= static_cast<double>(t.fanout[i]);
        double below = 1.0;
        for (int j = i + 1; j < n; ++j) below *= static_cast<double>(t.fanout[j]);
        t.stats.B[i] = nodes;
        t.stats.s2[i] = nodes * below * below;
    }
}

std::vector<int> multinomial_counts(const std::vector<double>& p, int N, std::uint64_t seed, std::uint64_t replica,
                                    bool nested) {
    std::vector<int> K(p.size(), 0);
    std::vector<double> cum(p.size());
    std::partial_sum(p.begin(), p.end(), cum.begin());
    for (int j = 0; j < N; ++j) {
        KeyedStream rng(nested ? derive_key({seed, replica, kTagThrow, static_cast<std::uint64_t>(j)})
                               : derive_key({seed, replica, kTagThrowFresh, static_cast<std::uint64_t>(N),
                                             static_cast<std::uint64_t>(j)}));
        double u = rng.uniform() * cum.back();
        std::size_t face = static_cast<std::size_t>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
        ++K[std::min(face, p.size() - 1)];
    }
    return K;
}

// One level of the Hamiltonian over a tree: weight * xi with xi at node scale.
struct LevelDriver {
    DrivingDistribution dist;
    double weight;
};

std::vector<LevelDriver> tree_drivers(const SimModel& m, int N) {
    std::vector<LevelDriver> out;
    if (m.kind == SimModel::Kind::Rem) {
        double sign = m.rem.objective()(1.0);
        out.push_back({DrivingDistribution(m.rem.rate(), N), sign});
    } else {
        for (std::size_t i = 0; i < m.grem.n(); ++i) out.push_back({DrivingDistribution(m.grem.level_rate(i), N), m.grem.a[i]});
    }
    return out;
}

std::vector<double> tree_proportions(const SimModel& m) {
    return m.kind == SimModel::Kind::Rem ? std::vector<double>{1.0} : m.grem.p;
}

double node_variable(const LevelDriver& d, std::uint64_t seed, std::uint64_t replica, int level, std::uint64_t id) {
    KeyedStream rng(derive_key({seed, replica, kTagVar, static_cast<std::uint64_t>(level), id}));
    return d.weight * d.dist.sample_node(rng);
}

double count_energy(double count, int N) {
    if (count == std::ldexp(1.0, N)) return kLog2;
    return std::log(count) / N;
}

// Depth-first walk calling visit(H) once per leaf; each node variable is
// drawn exactly once.
template <class F>
void for_each_leaf(const Tree& tree, const std::vector<LevelDriver>& drivers, std::uint64_t seed,
                   std::uint64_t replica, F&& visit) {
    const int n = tree.levels();
    auto dfs = [&](auto&& self, int level, std::uint64_t id, double H) -> void {
        if (level == n) {
            visit(H);
            return;
        }
        const std::uint64_t f = tree.children(level, id);
        for (std::uint64_t c = 0; c < f; ++c) {
            std::uint64_t cid = tree.child(level, id, c);
            self(self, level + 1, cid, H + node_variable(drivers[level], seed, replica, level + 1, cid));
        }
    };
    dfs(dfs, 0, 0, 0.0);
}

struct TreeRun {
    std::vector<double> values;
    TreeStats stats;
    int attempts = 1;
};

TreeRun run_tree(const SimModel& m, const std::vector<LevelDriver>& drivers, int N, const SimOptions& opt,
                 std::uint64_t replica) {
    TreeModel tm{opt.tree, tree_proportions(m), opt.k};
    Tree tree = build_tree(tm, N, opt.seed, replica);
    const int n = tree.levels();
    const double leaves = tree.stats.leaves();
    const bool sample = leaves > static_cast<double>(opt.enumeration_cap);
    if (sample && !opt.sampling)
        throw BudgetExceeded("N: " + std::to_string(static_cast<std::uint64_t>(leaves)) + " configurations exceed the enumeration cap of " +
                                 std::to_string(opt.enumeration_cap) + " (enable sampling)",
                             leaves, static_cast<double>(opt.enumeration_cap));

    const std::size_t nb = opt.betas.size();
    std::vector<LogSumExp> lse(nb);
    if (!sample) {
        for_each_leaf(tree, drivers, opt.seed, replica, [&](double H) {
            for (std::size_t b = 0; b < nb; ++b) lse[b].add(-opt.betas[b] * H);
        });
    } else {
        for (std::uint64_t s = 0; s < opt.samples; ++s) {
            KeyedStream rng(derive_key({opt.seed, replica, kTagSample, s}));
            std::uint64_t id = 0;
            double H = 0.0, logw = 0.0;
            for (int level = 0; level < n; ++level) {
                std::uint64_t f = tree.children(level, id);
                std::uint64_t c = std::min(f - 1, static_cast<std::uint64_t>(rng.uniform() * static_cast<double>(f)));
                logw += std::log(static_cast<double>(f));
                id = tree.child(level, id, c);
                H += node_variable(drivers[level], opt.seed, replica, level + 1, id);
            }
            for (std::size_t b = 0; b < nb; ++b) lse[b].add(logw - opt.betas[b] * H);
        }
    }
    TreeRun out;
    for (std::size_t b = 0; b < nb; ++b) {
        if (opt.betas[b] == 0.0) out.values.push_back(count_energy(leaves, N));
        else if (sample) out.values.push_back((lse[b].value() - std::log(static_cast<double>(opt.samples))) / N);
        else out.values.push_back(lse[b].value() / N);
    }
    out.stats = tree.stats;
    out.attempts = tree.attempts;
    return out;
}

// Subset-indexed models (BK, words, field): one variable per word and
// projected configuration, plus the field term h * sum_i sigma_i.
struct WordTerm {
    SymbolSet set;
    double weight;
    RateFunction rate;
};

struct WordModel {
    int n;
    std::vector<double> p;
    std::vector<WordTerm> terms;
    double h;
};

WordModel word_model(const SimModel& m) {
    WordModel w;
    switch (m.kind) {
        case SimModel::Kind::Bk: {
            w.n = m.bk.n;
            w.p = m.bk.p;
            w.h = 0.0;
            RateFunction rate = m.bk.gamma == 2.0   ? RateFunction::gaussian()
                                : m.bk.gamma == 1.0 ? RateFunction::two_sided_exponential()
                                                    : RateFunction::power_gamma(m.bk.gamma);
            for (const auto& [mask, a] : m.bk.weights) w.terms.push_back({mask, a, rate});
            break;
        }
        case SimModel::Kind::Word:
            w.n = m.word.n;
            w.p = m.word.p;
            w.h = m.word.h;
            for (const auto& word : m.word.words) w.terms.push_back({word.set(), word.a, RateFunction::gaussian()});
            break;
        default:
            w.n = 1;
            w.p = {1.0};
            w.h = m.field.h;
            w.terms.push_back({1u, m.field.a, RateFunction::gaussian()});
    }
    return w;
}

// Maps each word onto the spin blocks it reads and draws its variables.
class WordLayout {
public:
    WordLayout(const WordModel& wm, int N, const std::vector<int>& k_opt) : wm_(wm), N_(N) {
        std::vector<int> k = k_opt.empty() ? partition(N, wm.p) : k_opt;
        std::vector<int> offset(k.size(), 0);
        for (std::size_t i = 1; i < k.size(); ++i) offset[i] = offset[i - 1] + k[i - 1];
        for (const auto& t : wm.terms) {
            Projection pr;
            for (int i = 0; i < wm.n; ++i)
                if (t.set >> i & 1u) {
                    pr.parts.emplace_back(offset[i], k[i]);
                    pr.bits += k[i];
                }
            proj_.push_back(pr);
            dists_.emplace_back(t.rate, N);
        }
    }

    std::size_t words() const { return proj_.size(); }
    int bits(std::size_t w) const { return proj_[w].bits; }

    std::uint64_t project(std::size_t w, std::uint64_t sigma) const {
        std::uint64_t idx = 0;
        int shift = 0;
        for (auto [off, width] : proj_[w].parts) {
            idx |= ((sigma >> off) & ((std::uint64_t{1} << width) - 1)) << shift;
            shift += width;
        }
        return idx;
    }
    double variable(std::uint64_t seed, std::uint64_t replica, std::size_t w, std::uint64_t idx) const {
        KeyedStream rng(derive_key({seed, replica, kTagWord, static_cast<std::uint64_t>(w), idx}));
        return wm_.terms[w].weight * dists_[w].sample_node(rng);
    }
    double field(std::uint64_t sigma) const { return wm_.h * (N_ - 2 * std::popcount(sigma)); }

    // Every word variable, drawn up front: vars[w][projected index].
    std::vector<std::vector<double>> materialize(std::uint64_t seed, std::uint64_t replica) const {
        double stored = 0.0;
        for (const auto& pr : proj_) stored += std::ldexp(1.0, pr.bits);
        if (stored > static_cast<double>(kNodeCap))
            throw BudgetExceeded("words: " + std::to_string(static_cast<std::uint64_t>(stored)) +
                                     " word variables exceed the node cap",
                                 stored, static_cast<double>(kNodeCap));
        std::vector<std::vector<double>> vars(proj_.size());
        for (std::size_t w = 0; w < proj_.size(); ++w) {
            vars[w].resize(std::size_t{1} << proj_[w].bits);
            for (std::uint64_t idx = 0; idx < vars[w].size(); ++idx) vars[w][idx] = variable(seed, replica, w, idx);
        }
        return vars;
    }
    double energy(const std::vector<std::vector<double>>& vars, std::uint64_t sigma) const {
        double H = field(sigma);
        for (std::size_t w = 0; w < proj_.size(); ++w) H += vars[w][project(w, sigma)];
        return H;
    }

private:
    struct Projection {
        std::vector<std::pair<int, int>> parts;  // (shift in sigma, width)
        int bits = 0;
    };
    const WordModel& wm_;
    int N_;
    std::vector<Projection> proj_;
    std::vector<DrivingDistribution> dists_;
};

std::vector<double> run_words(const WordModel& wm, int N, const SimOptions& opt, std::uint64_t replica) {
    WordLayout layout(wm, N, opt.k);
    const double configs = std::ldexp(1.0, N);
    const bool sample = configs > static_cast<double>(opt.enumeration_cap);
    if (sample && !opt.sampling)
        throw BudgetExceeded("N: 2^" + std::to_string(N) + " configurations exceed the enumeration cap of " +
                                 std::to_string(opt.enumeration_cap) + " (enable sampling)",
                             configs, static_cast<double>(opt.enumeration_cap));
    const std::size_t nb = opt.betas.size();
    std::vector<LogSumExp> lse(nb);
    if (!sample) {
        auto vars = layout.materialize(opt.seed, replica);
        const std::uint64_t total = std::uint64_t{1} << N;
        for (std::uint64_t sigma = 0; sigma < total; ++sigma) {
            double H = layout.energy(vars, sigma);
            for (std::size_t b = 0; b < nb; ++b) lse[b].add(-opt.betas[b] * H);
        }
    } else {
        const std::uint64_t mask = N >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << N) - 1;
        for (std::uint64_t s = 0; s < opt.samples; ++s) {
            KeyedStream rng(derive_key({opt.seed, replica, kTagSample, s}));
            std::uint64_t sigma = rng() & mask;
            double H = layout.field(sigma);
            for (std::size_t w = 0; w < layout.words(); ++w) H += layout.variable(opt.seed, replica, w, layout.project(w, sigma));
            for (std::size_t b = 0; b < nb; ++b) lse[b].add(-opt.betas[b] * H);
        }
    }
    std::vector<double> out;
    for (std::size_t b = 0; b < nb; ++b) {
        if (opt.betas[b] == 0.0) out.push_back(kLog2);
        else if (sample)
            out.push_back(kLog2 + (lse[b].value() - std::log(static_cast<double>(opt.samples))) / N);
        else out.push_back(lse[b].value() / N);
    }
    return out;
}

template <class F>
void parallel_for(int count, int threads, F&& body) {
    threads = std::max(1, std::min(threads, count));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[static_cast<std::size_t>(i)] = std::current_exception();
            }
        }
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

std::vector<int> partition(int N, const std::vector<double>& p) {
    const int n = static_cast<int>(p.size());
    if (n == 0) throw std::invalid_argument("p: at least one level required");
    for (double x : p)
        if (!(x > 0.0)) throw std::invalid_argument("p: proportions must be > 0");
    if (N < n) throw std::invalid_argument("N: must be at least the number of levels");
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    std::vector<int> k(n);
    std::vector<double> rem(n);
    int used = 0;
    for (int i = 0; i < n; ++i) {
        double q = N * p[i] / total;
        k[i] = static_cast<int>(std::floor(q));
        rem[i] = q - k[i];
        used += k[i];
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return rem[x] > rem[y] + 1e-12; });
    for (int j = 0; used < N; ++j, ++used) ++k[order[j % n]];
    for (int i = 0; i < n; ++i) {
        while (k[i] < 1) {
            int donor = static_cast<int>(std::max_element(k.begin(), k.end()) - k.begin());
            --k[donor];
            ++k[i];
        }
    }
    return k;
}

std::string to_string(TreeKind k) {
    switch (k) {
        case TreeKind::Fixed: return "fixed";
        case TreeKind::RegularPoisson: return "regular-poisson";
        case TreeKind::PoissonPerNode: return "poisson";
        case TreeKind::Multinomial1: return "multinomial1";
        case TreeKind::Multinomial2: return "multinomial2";
    }
    return "?";
}

TreeKind tree_kind_from_string(const std::string& s) {
    for (TreeKind k : {TreeKind::Fixed, TreeKind::RegularPoisson, TreeKind::PoissonPerNode, TreeKind::Multinomial1,
                       TreeKind::Multinomial2})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("tree: unknown tree kind '" + s + "'");
}

std::uint64_t Tree::children(int level, std::uint64_t id) const {
    return regular() ? fanout[static_cast<std::size_t>(level)] : counts[static_cast<std::size_t>(level)][id];
}

std::uint64_t Tree::child(int level, std::uint64_t id, std::uint64_t c) const {
    return regular() ? id * fanout[static_cast<std::size_t>(level)] + c : first[static_cast<std::size_t>(level)][id] + c;
}

Tree build_tree(const TreeModel& model, int N, std::uint64_t seed, std::uint64_t replica) {
    if (N > 62) throw std::invalid_argument("N: at most 62 spins");
    Tree t;
    t.kind = model.kind;
    t.N = N;
    const int n = static_cast<int>(model.p.size());
    switch (model.kind) {
        case TreeKind::Fixed:
        case TreeKind::RegularPoisson:
        case TreeKind::PoissonPerNode:
            if (model.kind == TreeKind::Fixed && !model.k.empty()) {
                if (model.k.size() != model.p.size()) throw std::invalid_argument("k: one count per level required");
                int sum = 0;
                for (int x : model.k) {
                    if (x < 1) throw std::invalid_argument("k: counts must be >= 1");
                    sum += x;
                }
                if (sum != N) throw std::invalid_argument("k: counts must sum to N");
                t.k = model.k;
            } else {
                t.k = partition(N, model.p);
            }
            break;
        case TreeKind::Multinomial1:
        case TreeKind::Multinomial2:
            if (n == 0) throw std::invalid_argument("p: at least one level required");
            t.k = multinomial_counts(model.p, N, seed, replica, model.kind == TreeKind::Multinomial1);
            break;
    }

    if (model.kind == TreeKind::PoissonPerNode) {
        double expected = 0.0, nodes = 1.0;
        for (int i = 0; i + 1 < n; ++i) {
            nodes *= 1.0 + std::ldexp(1.0, t.k[i]);
            expected += nodes;
        }
        if (expected > static_cast<double>(kNodeCap))
            throw BudgetExceeded("N: expected Poisson tree size exceeds the node cap", expected,
                                 static_cast<double>(kNodeCap));
        for (int attempt = 1;; ++attempt) {
            t.counts.assign(n, {});
            t.first.assign(n, {});
            t.attempts = attempt;
            std::uint64_t width = 1, stored = 0;
            bool over = false;
            for (int i = 0; i < n && !over; ++i) {
                const double mean = std::ldexp(1.0, t.k[i]);
                auto& cnt = t.counts[i];
                auto& fst = t.first[i];
                cnt.resize(width);
                fst.resize(width);
                std::uint64_t next = 0;
                for (std::uint64_t v = 0; v < width; ++v) {
                    KeyedStream rng(derive_key({seed, replica, kTagTree, static_cast<std::uint64_t>(attempt),
                                                static_cast<std::uint64_t>(i), v}));
                    cnt[v] = static_cast<std::uint32_t>(1 + poisson_draw(mean, rng));
                    fst[v] = next;
                    next += cnt[v];
                }
                width = next;
                if (i + 1 < n) {
                    stored += width;
                    over = stored > kNodeCap;
                }
            }
            if (!over) break;
            if (attempt == kMaxTreeAttempts)
                throw BudgetExceeded("tree: Poisson tree exceeded the node cap on every retry",
                                     static_cast<double>(stored), static_cast<double>(kNodeCap));
        }
        // Leaves below each node, from the bottom level up.
        t.stats.B.assign(n, 0.0);
        t.stats.s2.assign(n, 0.0);
        std::vector<std::vector<double>> leaves(n);
        for (int i = n - 1; i >= 1; --i) {
            std::vector<double> cur(t.counts[i].size());
            if (i == n - 1) {
                for (std::size_t v = 0; v < cur.size(); ++v) cur[v] = t.counts[i][v];
            } else {
                for (std::size_t v = 0; v < cur.size(); ++v) {
                    double s = 0.0;
                    for (std::uint64_t c = 0; c < t.counts[i][v]; ++c) s += leaves[i + 1][t.first[i][v] + c];
                    cur[v] = s;
                }
            }
            leaves[i] = std::move(cur);
        }
        double total_leaves = 0.0;
        for (std::uint32_t c : t.counts[n - 1]) total_leaves += c;
        for (int i = 1; i <= n; ++i) {
            if (i == n) {
                t.stats.B[i - 1] = total_leaves;
                t.stats.s2[i - 1] = total_leaves;
            } else {
                t.stats.B[i - 1] = static_cast<double>(leaves[i].size());
                double s2 = 0.0;
                for (double x : leaves[i]) s2 += x * x;
                t.stats.s2[i - 1] = s2;
            }
        }
        return t;
    }

    for (int i = 0; i < n; ++i) {
        if (model.kind == TreeKind::RegularPoisson) {
            KeyedStream rng(derive_key({seed, replica, kTagTree, 0, static_cast<std::uint64_t>(i)}));
            t.fanout.push_back(1 + poisson_draw(std::ldexp(1.0, t.k[i]), rng));
        } else {
            t.fanout.push_back(std::uint64_t{1} << t.k[i]);
        }
    }
    finish_regular_stats(t);
    return t;
}

SimModel SimModel::of(const RemModel& m) {
    SimModel s;
    s.kind = Kind::Rem;
    s.rem = m;
    return s;
}

SimModel SimModel::of(const GremSpec& g) {
    SimModel s;
    s.kind = Kind::Grem;
    s.grem = g;
    return s;
}

SimModel SimModel::of(const BkSpec& b) {
    SimModel s;
    s.kind = Kind::Bk;
    s.bk = b;
    return s;
}

SimModel SimModel::of(const WordSpec& w) {
    SimModel s;
    s.kind = Kind::Word;
    s.word = w;
    return s;
}

SimModel SimModel::of(const FieldParams& f) {
    SimModel s;
    s.kind = Kind::Field;
    s.field = f;
    return s;
}

std::string SimModel::describe() const {
    switch (kind) {
        case Kind::Rem: return "rem";
        case Kind::Grem: return "grem";
        case Kind::Bk: return "bk";
        case Kind::Word: return "word";
        case Kind::Field: return "rem-field";
    }
    return "?";
}

double analytic_energy(const SimModel& m, double beta) {
    switch (m.kind) {
        case SimModel::Kind::Rem: return m.rem.energy(beta);
        case SimModel::Kind::Grem: return grem_energy(m.grem, beta);
        case SimModel::Kind::Bk: return bk_energy_min(m.bk, beta);
        case SimModel::Kind::Word: return word_grem_energy(m.word, beta);
        case SimModel::Kind::Field: return rem_field_energy(m.field, beta);
    }
    return kLog2;
}

int default_threads() {
    if (const char* env = std::getenv("REMLAB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<double> SimResult::mean() const {
    std::vector<double> m(betas.size(), 0.0);
    for (const auto& row : values)
        for (std::size_t b = 0; b < betas.size(); ++b) m[b] += row[b];
    for (double& x : m) x /= static_cast<double>(values.size());
    return m;
}

std::vector<double> SimResult::stddev() const {
    std::vector<double> mu = mean(), s(betas.size(), 0.0);
    if (values.size() < 2) return s;
    for (const auto& row : values)
        for (std::size_t b = 0; b < betas.size(); ++b) s[b] += (row[b] - mu[b]) * (row[b] - mu[b]);
    for (double& x : s) x = std::sqrt(x / static_cast<double>(values.size() - 1));
    return s;
}

SimResult simulate(const SimModel& model, int N, const SimOptions& opt) {
    if (opt.replicas < 1) throw std::invalid_argument("replicas: must be >= 1");
    if (opt.betas.empty()) throw std::invalid_argument("beta: grid is empty");
    for (double b : opt.betas)
        if (!(b >= 0.0) || !std::isfinite(b)) throw std::invalid_argument("beta: values must be finite and >= 0");
    if (N < 1 || N > 62) throw std::invalid_argument("N: must be in 1..62");

    SimResult res;
    res.model = model.describe();
    res.N = N;
    res.seed = opt.seed;
    res.replicas = opt.replicas;
    res.betas = opt.betas;
    res.values.assign(static_cast<std::size_t>(opt.replicas), {});
    const int threads = opt.threads > 0 ? opt.threads : default_threads();

    if (model.kind == SimModel::Kind::Rem || model.kind == SimModel::Kind::Grem) {
        if (model.kind == SimModel::Kind::Grem) model.grem.validate();
        if (model.kind == SimModel::Kind::Rem && model.rem.kind == RemModel::Kind::Compact)
            throw std::invalid_argument("model: compact laws cannot be simulated without a concrete distribution");
        auto drivers = tree_drivers(model, N);
        const bool random_tree = opt.tree != TreeKind::Fixed;
        std::vector<TreeRun> runs(static_cast<std::size_t>(opt.replicas));
        parallel_for(opt.replicas, threads, [&](int r) {
            runs[static_cast<std::size_t>(r)] = run_tree(model, drivers, N, opt, static_cast<std::uint64_t>(r));
        });
        for (std::size_t r = 0; r < runs.size(); ++r) {
            res.values[r] = runs[r].values;
            if (random_tree) {
                res.trees.push_back(runs[r].stats);
                res.attempts.push_back(runs[r].attempts);
            }
        }
        res.sampled = std::any_of(runs.begin(), runs.end(), [&](const TreeRun& t) {
            return t.stats.leaves() > static_cast<double>(opt.enumeration_cap);
        });
    } else {
        if (opt.tree != TreeKind::Fixed) throw std::invalid_argument("tree: random trees apply to REM and GREM models only");
        if (model.kind == SimModel::Kind::Bk) model.bk.validate();
        if (model.kind == SimModel::Kind::Word) model.word.validate();
        if (model.kind == SimModel::Kind::Field) model.field.validate();
        WordModel wm = word_model(model);
        parallel_for(opt.replicas, threads, [&](int r) {
            res.values[static_cast<std::size_t>(r)] = run_words(wm, N, opt, static_cast<std::uint64_t>(r));
        });
        res.sampled = std::ldexp(1.0, N) > static_cast<double>(opt.enumeration_cap);
    }
    return res;
}

std::vector<double> configuration_energies(const SimModel& model, int N, const SimOptions& opt,
                                           std::uint64_t replica) {
    if (N < 1 || N > 24) throw std::invalid_argument("N: energy listing needs 1 <= N <= 24");
    std::vector<double> out;
    if (model.kind == SimModel::Kind::Rem || model.kind == SimModel::Kind::Grem) {
        auto drivers = tree_drivers(model, N);
        Tree tree = build_tree(TreeModel{opt.tree, tree_proportions(model), opt.k}, N, opt.seed, replica);
        if (tree.stats.leaves() > static_cast<double>(std::uint64_t{1} << 24))
            throw BudgetExceeded("N: too many leaves to list", tree.stats.leaves(), std::ldexp(1.0, 24));
        for_each_leaf(tree, drivers, opt.seed, replica, [&](double H) { out.push_back(H); });
    } else {
        WordModel wm = word_model(model);
        WordLayout layout(wm, N, opt.k);
        auto vars = layout.materialize(opt.seed, replica);
        for (std::uint64_t sigma = 0; sigma < (std::uint64_t{1} << N); ++sigma) out.push_back(layout.energy(vars, sigma));
    }
    return out;
}

EmpiricalHistogram empirical_ldp(const RateFunction& rate, int N, double lo, double width, int bins,
                                 std::uint64_t seed) {
    if (N < 1 || N > 30) throw std::invalid_argument("N: histogram needs 1 <= N <= 30");
    if (!(width > 0.0) || bins < 1) throw std::invalid_argument("bins: need width > 0 and at least one bin");
    DrivingDistribution dist(rate, N);
    EmpiricalHistogram hist;
    hist.draws = std::uint64_t{1} << N;
    for (int b = 0; b <= bins; ++b) hist.edges.push_back(lo + b * width);
    std::vector<std::uint64_t> count(static_cast<std::size_t>(bins), 0);
    std::uint64_t under = 0, over = 0;
    KeyedStream rng(derive_key({seed, kTagLdp, static_cast<std::uint64_t>(N)}));
    for (std::uint64_t i = 0; i < hist.draws; ++i) {
        double x = dist.sample(rng);
        double pos = std::floor((x - lo) / width);
        if (pos < 0.0) ++under;
        else if (pos >= bins) ++over;
        else ++count[static_cast<std::size_t>(pos)];
    }
    const double total = static_cast<double>(hist.draws);
    for (std::uint64_t c : count) {
        double m = c / total;
        hist.mass.push_back(m);
        hist.stat.push_back(c == 0 ? kInf : -std::log(m) / N);
    }
    hist.underflow = under / total;
    hist.overflow = over / total;
    return hist;
}

std::vector<ConvergeRow> converge(const SimModel& model, const std::vector<int>& Ns, const SimOptions& opt) {
    std::vector<double> limit;
    for (double b : opt.betas) limit.push_back(analytic_energy(model, b));
    std::vector<ConvergeRow> rows;
    for (int N : Ns) {
        SimResult res = simulate(model, N, opt);
        auto mu = res.mean();
        auto sd = res.stddev();
        for (std::size_t b = 0; b < opt.betas.size(); ++b) {
            std::vector<double> err;
            for (const auto& row : res.values) err.push_back(std::fabs(row[b] - limit[b]));
            rows.push_back({N, opt.betas[b], limit[b], mu[b], sd[b], median(err)});
        }
    }
    return rows;
}

PoissonRatioMoments poisson_ratio_moments(double a, double b, double lambda, std::uint64_t draws,
                                          std::uint64_t seed) {
    if (!(a > 0.0 && b > 0.0 && lambda > 0.0) || draws < 2)
        throw std::invalid_argument("params: need a, b, lambda > 0 and at least two draws");
    KeyedStream rng(derive_key({seed, kTagRatio}));
    std::poisson_distribution<std::uint64_t> X(a * lambda), Y(b * lambda);
    double s1 = 0.0, q1 = 0.0, s2 = 0.0, q2 = 0.0;
    for (std::uint64_t i = 0; i < draws; ++i) {
        double x = static_cast<double>(X(rng)), y = static_cast<double>(Y(rng));
        double d = x + y + a + b;
        double u = (x + a) / d;
        double v = (x + a) / (d * d);
        s1 += u * u;
        q1 += u * u * u * u;
        s2 += v;
        q2 += v * v;
    }
    const double n = static_cast<double>(draws);
    PoissonRatioMoments m;
    m.square_mean = s1 / n;
    m.square_se = std::sqrt(std::max(0.0, q1 / n - m.square_mean * m.square_mean) / (n - 1.0));
    m.inverse_mean = s2 / n;
    m.inverse_se = std::sqrt(std::max(0.0, q2 / n - m.inverse_mean * m.inverse_mean) / (n - 1.0));
    return m;
}

}  // namespace remlab
