#include "remlab/analytic_grem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "remlab/analytic_rem.hpp"
#include "remlab/numeric.hpp"

namespace remlab {

namespace {

constexpr double kTieTol = 1e-12;

bool ties(double x, double best) { return std::fabs(x - best) <= kTieTol * std::fabs(best); }

double tail_sum(const std::vector<double>& v, std::size_t from) {
    return std::accumulate(v.begin() + static_cast<std::ptrdiff_t>(from), v.end(), 0.0);
}

// Entropy still available once the first r levels are frozen.
double free_entropy(const std::vector<double>& p, std::size_t r) {
    return r == 0 ? kLog2 : kLog2 * tail_sum(p, r);
}

double pow_weight(double a, double q) { return a == 0.0 ? 0.0 : std::pow(a, q); }

struct Ladder {
    std::vector<double> betas;
    std::vector<std::size_t> ranks;  // cumulative level counts
};

Ladder ladder_gamma(const std::vector<double>& p, const std::vector<double>& a, double gamma) {
    const double q = gamma / (gamma - 1.0);
    const std::size_t n = p.size();
    Ladder L;
    std::size_t r = 0;
    while (r < n) {
        double best = kInf, P = 0.0, A = 0.0;
        std::size_t arg = n;
        for (std::size_t k = r; k < n; ++k) {
            P += p[k];
            A += pow_weight(a[k], q);
            if (A <= 0.0) continue;
            double B = std::pow(P * gamma * kLog2 / A, 1.0 / q);
            if (arg == n || (B < best && !ties(B, best))) {
                best = B;
                arg = k;
            } else if (ties(B, best)) {
                best = std::min(best, B);
                arg = k;
            }
        }
        if (arg == n) break;
        L.betas.push_back(best);
        L.ranks.push_back(arg + 1);
        r = arg + 1;
    }
    return L;
}

Ladder ladder_exp(const std::vector<double>& a) {
    const std::size_t n = a.size();
    Ladder L;
    std::size_t r = 0;
    while (r < n) {
        double best = kInf;
        std::size_t arg = n;
        for (std::size_t k = r; k < n; ++k) {
            if (a[k] <= 0.0) continue;
            double B = 1.0 / a[k];
            if (arg == n || (B < best && !ties(B, best))) {
                best = B;
                arg = k;
            } else if (ties(B, best)) {
                best = std::min(best, B);
                arg = k;
            }
        }
        if (arg == n) break;
        L.betas.push_back(best);
        L.ranks.push_back(arg + 1);
        r = arg + 1;
    }
    return L;
}

void require_uniform(const GremSpec& s, const char* who) {
    if (!s.uniform_gamma()) throw std::invalid_argument(std::string("levels: ") + who + " needs a uniform gamma");
}

// Segment j of a gamma > 1 curve: c0 + c1 b + c2 b^q.
struct PowerSegment {
    double c0, c1, c2;
};

std::vector<PowerSegment> gamma_segments(const GremSpec& s, const Ladder& L) {
    const double g = s.gamma();
    const double q = g / (g - 1.0);
    std::vector<PowerSegment> out;
    double c1 = 0.0;
    std::size_t r = 0;
    for (std::size_t j = 0; j <= L.betas.size(); ++j) {
        if (j > 0) {
            double group = 0.0;
            for (std::size_t i = r; i < L.ranks[j - 1]; ++i) group += pow_weight(s.a[i], q);
            c1 += std::pow(L.betas[j - 1], 1.0 / (g - 1.0)) * group;
            r = L.ranks[j - 1];
        }
        double rest = 0.0;
        for (std::size_t i = r; i < s.n(); ++i) rest += pow_weight(s.a[i], q);
        out.push_back({free_entropy(s.p, r), c1, (g - 1.0) / g * rest});
    }
    return out;
}

// Segment j of a gamma = 1 curve: c0 + c1 b.
std::vector<std::pair<double, double>> exp_segments(const GremSpec& s, const Ladder& L) {
    std::vector<std::pair<double, double>> out;
    double c0 = kLog2, c1 = 0.0;
    std::size_t r = 0;
    out.emplace_back(c0, c1);
    for (std::size_t j = 0; j < L.betas.size(); ++j) {
        double P = 0.0;
        for (std::size_t i = r; i < L.ranks[j]; ++i) P += s.p[i];
        c0 -= P * kLog2;
        c1 += s.a[L.ranks[j] - 1] * P * kLog2;
        r = L.ranks[j];
        out.emplace_back(c0, c1);
    }
    return out;
}

std::size_t count_below(const std::vector<double>& betas, double beta) {
    return static_cast<std::size_t>(std::lower_bound(betas.begin(), betas.end(), beta) - betas.begin());
}

}  // namespace

GremSpec GremSpec::uniform(std::vector<double> p, std::vector<double> a, double gamma) {
    GremSpec s;
    s.gammas.assign(p.size(), gamma);
    s.p = std::move(p);
    s.a = std::move(a);
    s.levels = Levels::Uniform;
    return s;
}

GremSpec GremSpec::per_level(std::vector<double> p, std::vector<double> a, std::vector<double> gammas) {
    GremSpec s;
    s.p = std::move(p);
    s.a = std::move(a);
    s.gammas = std::move(gammas);
    s.levels = Levels::PerLevel;
    return s;
}

GremSpec GremSpec::mixed(std::vector<double> p, std::vector<double> a, const std::vector<std::string>& kinds) {
    GremSpec s;
    s.p = std::move(p);
    s.a = std::move(a);
    s.levels = Levels::Mixed;
    for (const auto& k : kinds) {
        if (k == "exp") s.gammas.push_back(1.0);
        else if (k == "gauss") s.gammas.push_back(2.0);
        else throw std::invalid_argument("levels.mixed: unknown level kind '" + k + "'");
    }
    return s;
}

bool GremSpec::uniform_gamma() const {
    return std::all_of(gammas.begin(), gammas.end(), [&](double g) { return g == gammas.front(); });
}

RateFunction GremSpec::level_rate(std::size_t i) const {
    double g = gammas.at(i);
    if (g == 2.0) return RateFunction::gaussian();
    if (g == 1.0) return RateFunction::two_sided_exponential();
    return RateFunction::power_gamma(g);
}

void GremSpec::validate() const {
    if (p.empty()) throw std::invalid_argument("p: at least one level required");
    if (a.size() != p.size()) throw std::invalid_argument("a: length must match p");
    if (gammas.size() != p.size()) throw std::invalid_argument("levels: one rate per level required");
    double sum = 0.0;
    for (double x : p) {
        if (!(x > 0.0)) throw std::invalid_argument("p: proportions must be > 0");
        sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("p: proportions must sum to 1");
    bool positive = false;
    for (double x : a) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("a: weights must be finite and >= 0");
        positive = positive || x > 0.0;
    }
    if (!positive) throw std::invalid_argument("a: at least one weight must be > 0");
    for (double g : gammas)
        if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("gamma: must be > 0");
}

BetaLadder beta_ladder(const GremSpec& spec) {
    spec.validate();
    require_uniform(spec, "beta_ladder");
    double g = spec.gamma();
    if (g < 1.0) throw std::invalid_argument("gamma: beta_ladder needs gamma >= 1");
    Ladder L = g == 1.0 ? ladder_exp(spec.a) : ladder_gamma(spec.p, spec.a, g);
    BetaLadder out;
    out.betas = L.betas;
    for (std::size_t r : L.ranks) out.ranks.push_back(static_cast<int>(r));
    return out;
}

double grem_energy_gamma(const GremSpec& spec, double beta) {
    require_uniform(spec, "grem_energy_gamma");
    double g = spec.gamma();
    if (!(g > 1.0)) throw std::invalid_argument("gamma: grem_energy_gamma needs gamma > 1");
    Ladder L = ladder_gamma(spec.p, spec.a, g);
    PowerSegment s = gamma_segments(spec, L)[count_below(L.betas, beta)];
    return s.c0 + s.c1 * beta + s.c2 * std::pow(beta, g / (g - 1.0));
}

double grem_energy_exp(const GremSpec& spec, double beta) {
    require_uniform(spec, "grem_energy_exp");
    if (spec.gamma() != 1.0) throw std::invalid_argument("gamma: grem_energy_exp needs gamma = 1");
    Ladder L = ladder_exp(spec.a);
    auto segs = exp_segments(spec, L);
    std::size_t j = static_cast<std::size_t>(std::upper_bound(L.betas.begin(), L.betas.end(), beta) - L.betas.begin());
    return segs[j].first + segs[j].second * beta;
}

Sub1Regime grem2_sub1_regime(double p1, double p2, double a1, double a2, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma: must lie in (0,1)");
    const double al = 1.0 / gamma;
    const double a = a1 * std::pow(gamma, al), b = a2 * std::pow(gamma, al);
    const double c = p1 * kLog2, d = p2 * kLog2;
    const double slopeB = a * std::pow(c, al);
    const double slopeC = slopeB + b * std::pow(d, al);
    const double slopeD = b * std::pow(c + d, al);
    Sub1Regime r;
    if (slopeD <= slopeC) {
        r.scenario = 1;
        r.betas = {c / slopeB, d / (b * std::pow(d, al))};
        r.vertices = {'A', 'B', 'C'};
    } else if (b * std::pow(c + d, al - 1.0) <= a * std::pow(c, al - 1.0)) {
        r.scenario = 2;
        r.betas = {c / slopeB, d / (slopeD - slopeB)};
        r.vertices = {'A', 'B', 'D'};
    } else {
        r.scenario = 3;
        r.betas = {(c + d) / slopeD};
        r.vertices = {'A', 'D'};
    }
    return r;
}

double grem2_sub1(double p1, double p2, double a1, double a2, double gamma, double beta) {
    Sub1Regime r = grem2_sub1_regime(p1, p2, a1, a2, gamma);
    const double al = 1.0 / gamma;
    const double a = a1 * std::pow(gamma, al), b = a2 * std::pow(gamma, al);
    const double c = p1 * kLog2, d = p2 * kLog2;
    std::size_t j = static_cast<std::size_t>(std::upper_bound(r.betas.begin(), r.betas.end(), beta) - r.betas.begin());
    switch (r.vertices[j]) {
        case 'A': return kLog2;
        case 'B': return kLog2 + beta * a * std::pow(c, al) - c;
        case 'C': return kLog2 + beta * (a * std::pow(c, al) + b * std::pow(d, al)) - (c + d);
        default: return kLog2 + beta * b * std::pow(c + d, al) - (c + d);
    }
}

std::string to_string(MixedSubcase s) {
    switch (s) {
        case MixedSubcase::A1: return "A1";
        case MixedSubcase::A2: return "A2";
        case MixedSubcase::A3: return "A3";
        case MixedSubcase::B1: return "B1";
        case MixedSubcase::B2: return "B2";
    }
    return "?";
}

MixedSubcase exp_gauss_subcase(const std::vector<double>& p, const std::vector<double>& a) {
    double ratio = a[0] > 0.0 ? a[1] / a[0] : kInf;
    if (ratio < std::sqrt(2.0 * p[1] * kLog2)) return MixedSubcase::A1;
    if (ratio < std::sqrt(2.0 * kLog2)) return MixedSubcase::A2;
    return MixedSubcase::A3;
}

MixedSubcase gauss_exp_subcase(const std::vector<double>& p, const std::vector<double>& a) {
    double ratio = a[1] > 0.0 ? a[0] / a[1] : kInf;
    return ratio <= std::sqrt(2.0 * p[0] * kLog2) ? MixedSubcase::B1 : MixedSubcase::B2;
}

double grem2_exp_gauss(const std::vector<double>& p, const std::vector<double>& a, double beta) {
    const double a1 = a[0], a2 = a[1];
    switch (exp_gauss_subcase(p, a)) {
        case MixedSubcase::A1: {
            double s2 = std::sqrt(2.0 * p[1] * kLog2);
            double e1 = beta * a1 <= 1.0 ? p[0] * kLog2 : beta * a1 * p[0] * kLog2;
            double e2 = beta * a2 <= s2 ? p[1] * kLog2 + 0.5 * a2 * a2 * beta * beta : beta * a2 * s2;
            return e1 + e2;
        }
        case MixedSubcase::A2:
            if (beta * a1 <= 1.0) return kLog2 + 0.5 * beta * beta * a2 * a2;
            return beta * (0.5 * a2 * a2 / a1 + a1 * kLog2);
        default: return rem_gaussian(a2 * beta);
    }
}

double grem2_gauss_exp(const std::vector<double>& p, const std::vector<double>& a, double beta) {
    const double a1 = a[0], a2 = a[1];
    if (gauss_exp_subcase(p, a) == MixedSubcase::B1) {
        if (beta * a2 <= 1.0) return kLog2 + 0.5 * beta * beta * a1 * a1;
        return beta * (0.5 * a1 * a1 / a2 + a2 * kLog2);
    }
    double s1 = std::sqrt(2.0 * p[0] * kLog2);
    if (beta * a1 <= s1) return kLog2 + 0.5 * beta * beta * a1 * a1;
    if (beta * a2 <= 1.0) return p[1] * kLog2 + beta * a1 * s1;
    return beta * (a1 * s1 + a2 * p[1] * kLog2);
}

bool has_closed_form(const GremSpec& s) {
    if (s.uniform_gamma()) return s.gamma() >= 1.0 || s.n() <= 2;
    return s.n() == 2 && s.levels == GremSpec::Levels::Mixed;
}

double grem_energy(const GremSpec& spec, double beta) {
    spec.validate();
    if (spec.uniform_gamma()) {
        double g = spec.gamma();
        if (g > 1.0) return grem_energy_gamma(spec, beta);
        if (g == 1.0) return grem_energy_exp(spec, beta);
        if (spec.n() == 1) return rem_weibull(g, spec.a[0] * beta);
        if (spec.n() == 2) return grem2_sub1(spec.p[0], spec.p[1], spec.a[0], spec.a[1], g, beta);
    } else if (spec.n() == 2 && spec.levels == GremSpec::Levels::Mixed) {
        if (spec.gammas[0] == 1.0) return grem2_exp_gauss(spec.p, spec.a, beta);
        return grem2_gauss_exp(spec.p, spec.a, beta);
    }
    return grem_variational(spec, beta);
}

double grem_variational(const GremSpec& spec, double beta) {
    spec.validate();
    const std::size_t n = spec.n();
    if (n > 4) throw std::invalid_argument("p: variational oracle supports at most 4 levels");

    std::vector<RateFunction> rates;
    for (std::size_t i = 0; i < n; ++i) rates.push_back(spec.level_rate(i));
    std::vector<double> budget(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += spec.p[i];
        budget[i] = i + 1 == n ? kLog2 : acc * kLog2;
    }
    // Cost of spending rate budget u at level i.
    auto phi = [&](std::size_t i, double u) {
        if (u <= 0.0) return 0.0;
        return u - beta * spec.a[i] * rates[i].level_set(u).hi;
    };

    const int M = 1200;
    const double h = kLog2 / M;
    std::vector<int> cap(n);
    for (std::size_t i = 0; i < n; ++i)
        cap[i] = std::min(M, static_cast<int>(std::floor(budget[i] / h + 1e-9)));
    std::vector<std::vector<double>> table(n, std::vector<double>(M + 1));
    for (std::size_t i = 0; i < n; ++i)
        for (int d = 0; d <= M; ++d) table[i][d] = phi(i, d * h);

    // value[k][m]: best cost of levels k..n-1 given cumulative spend m*h before level k.
    std::vector<std::vector<double>> value(n + 1, std::vector<double>(M + 1, 0.0));
    std::vector<std::vector<int>> choice(n, std::vector<int>(M + 1, 0));
    for (std::size_t k = n; k-- > 0;) {
        for (int m = 0; m <= M; ++m) {
            double best = kInf;
            int arg = m;
            for (int m2 = m; m2 <= cap[k]; ++m2) {
                double v = table[k][m2 - m] + value[k + 1][m2];
                if (v < best) {
                    best = v;
                    arg = m2;
                }
            }
            value[k][m] = best;
            choice[k][m] = arg;
        }
    }
    std::vector<double> u(n);
    int m = 0;
    for (std::size_t k = 0; k < n; ++k) {
        int m2 = choice[k][m];
        u[k] = (m2 - m) * h;
        m = m2;
    }

    auto total = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += phi(i, x[i]);
        return s;
    };
    double current = total(u);
    // Exchange moves u_i += t, u_j -= t (j == n: move u_i alone).
    for (int sweep = 0; sweep < 200; ++sweep) {
        double start = current;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j <= n; ++j) {
                if (j == i) continue;
                double tlo = -u[i], thi = j < n ? u[j] : kInf;
                double S = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    S += u[k];
                    double delta = (k >= i ? 1.0 : 0.0) - (j < n && k >= j ? 1.0 : 0.0);
                    double slack = std::max(0.0, budget[k] - S);
                    if (delta > 0.0) thi = std::min(thi, slack);
                    else if (delta < 0.0) tlo = std::max(tlo, -slack);
                }
                if (!(thi > tlo)) continue;
                auto along = [&](double t) {
                    double v = current - phi(i, u[i]) + phi(i, std::max(0.0, u[i] + t));
                    if (j < n) v += phi(j, std::max(0.0, u[j] - t)) - phi(j, u[j]);
                    return v;
                };
                double bt = 0.0, bv = current;
                for (double t : {tlo, thi, golden_min(along, tlo, thi, 1e-15)}) {
                    double v = along(t);
                    if (v < bv - 1e-16) {
                        bv = v;
                        bt = t;
                    }
                }
                if (bt != 0.0) {
                    u[i] = std::max(0.0, u[i] + bt);
                    if (j < n) u[j] = std::max(0.0, u[j] - bt);
                    current = total(u);
                }
            }
        }
        if (start - current < 1e-15) break;
    }
    return kLog2 - std::min(current, 0.0);
}

GammaLimitReport gamma_limit_check(const GremSpec& spec, double beta, const std::vector<double>& eps) {
    GremSpec base = GremSpec::uniform(spec.p, spec.a, 1.0);
    double e1 = grem_energy_exp(base, beta);
    GammaLimitReport rep;
    rep.eps = eps;
    rep.monotone = true;
    for (double e : eps) {
        GremSpec s = GremSpec::uniform(spec.p, spec.a, 1.0 + e);
        double gap = std::fabs(grem_energy_gamma(s, beta) - e1);
        if (!rep.gaps.empty() && !(gap < rep.gaps.back() || (gap == 0.0 && rep.gaps.back() == 0.0)))
            rep.monotone = false;
        rep.gaps.push_back(gap);
    }
    return rep;
}

GremSpec reduce_exp_grem(const GremSpec& spec) {
    spec.validate();
    if (!spec.uniform_gamma() || spec.gamma() != 1.0) throw std::invalid_argument("gamma: reduction needs gamma = 1");
    Ladder L = ladder_exp(spec.a);
    std::vector<double> p, a;
    std::size_t r = 0;
    for (std::size_t j = 0; j < L.ranks.size(); ++j) {
        double P = 0.0;
        for (std::size_t i = r; i < L.ranks[j]; ++i) P += spec.p[i];
        p.push_back(P);
        a.push_back(spec.a[L.ranks[j] - 1]);
        r = L.ranks[j];
    }
    if (r < spec.n()) {
        p.push_back(tail_sum(spec.p, r));
        a.push_back(0.0);
    }
    return GremSpec::uniform(p, a, 1.0);
}

FreeEnergyCurve build_grem_curve(const GremSpec& spec) {
    spec.validate();
    using K = SegmentKind;
    FreeEnergyCurve c;
    if (spec.uniform_gamma()) {
        const double g = spec.gamma();
        if (g > 1.0) {
            Ladder L = ladder_gamma(spec.p, spec.a, g);
            c.breakpoints = L.betas;
            for (const auto& s : gamma_segments(spec, L)) {
                if (g == 2.0) c.segments.push_back({K::Quadratic, {s.c0, s.c1, s.c2}});
                else c.segments.push_back({K::Power, {s.c0, s.c1, s.c2, g / (g - 1.0)}});
            }
            return c;
        }
        if (g == 1.0) {
            Ladder L = ladder_exp(spec.a);
            c.breakpoints = L.betas;
            auto segs = exp_segments(spec, L);
            c.segments.push_back({K::Constant, {segs[0].first}});
            for (std::size_t j = 1; j < segs.size(); ++j) c.segments.push_back({K::Linear, {segs[j].first, segs[j].second}});
            return c;
        }
        if (spec.n() == 1) {
            double a = spec.a[0];
            c.breakpoints = {std::pow(g, -1.0 / g) * std::pow(kLog2, -(1.0 - g) / g) / a};
            c.segments = {{K::Constant, {kLog2}}, {K::Linear, {0.0, std::pow(g * kLog2, 1.0 / g) * a}}};
            return c;
        }
        if (spec.n() == 2) {
            const double al = 1.0 / g;
            const double a = spec.a[0] * std::pow(g, al), b = spec.a[1] * std::pow(g, al);
            const double cc = spec.p[0] * kLog2, d = spec.p[1] * kLog2;
            Sub1Regime r = grem2_sub1_regime(spec.p[0], spec.p[1], spec.a[0], spec.a[1], g);
            for (double t : r.betas)
                if (std::isfinite(t)) c.breakpoints.push_back(t);
            for (std::size_t j = 0; j <= c.breakpoints.size(); ++j) {
                switch (r.vertices[j]) {
                    case 'A': c.segments.push_back({K::Constant, {kLog2}}); break;
                    case 'B': c.segments.push_back({K::Linear, {kLog2 - cc, a * std::pow(cc, al)}}); break;
                    case 'C':
                        c.segments.push_back(
                            {K::Linear, {kLog2 - cc - d, a * std::pow(cc, al) + b * std::pow(d, al)}});
                        break;
                    default: c.segments.push_back({K::Linear, {kLog2 - cc - d, b * std::pow(cc + d, al)}});
                }
            }
            return c;
        }
    } else if (spec.n() == 2 && spec.levels == GremSpec::Levels::Mixed) {
        const auto& p = spec.p;
        const double a1 = spec.a[0], a2 = spec.a[1];
        auto push = [&](double bp, Segment s) {
            if (std::isfinite(bp)) c.breakpoints.push_back(bp);
            c.segments.push_back(std::move(s));
        };
        if (spec.gammas[0] == 1.0) {
            switch (exp_gauss_subcase(p, spec.a)) {
                case MixedSubcase::A1: {
                    double s2 = std::sqrt(2.0 * p[1] * kLog2);
                    double t1 = 1.0 / a1, t2 = a2 > 0.0 ? s2 / a2 : kInf;
                    // E1 switches at t1, E2 at t2; in A1 t1 < t2.
                    c.segments.push_back({K::Quadratic, {kLog2, 0.0, 0.5 * a2 * a2}});
                    push(t1, {K::Quadratic, {p[1] * kLog2, a1 * p[0] * kLog2, 0.5 * a2 * a2}});
                    push(t2, {K::Linear, {0.0, a1 * p[0] * kLog2 + a2 * s2}});
                    if (!std::isfinite(t2)) c.segments.pop_back();
                    break;
                }
                case MixedSubcase::A2:
                    c.segments.push_back({K::Quadratic, {kLog2, 0.0, 0.5 * a2 * a2}});
                    push(1.0 / a1, {K::Linear, {0.0, 0.5 * a2 * a2 / a1 + a1 * kLog2}});
                    break;
                default: {
                    double s = std::sqrt(2.0 * kLog2);
                    c.segments.push_back({K::Quadratic, {kLog2, 0.0, 0.5 * a2 * a2}});
                    push(s / a2, {K::Linear, {0.0, a2 * s}});
                }
            }
        } else {
            if (gauss_exp_subcase(p, spec.a) == MixedSubcase::B1) {
                c.segments.push_back({K::Quadratic, {kLog2, 0.0, 0.5 * a1 * a1}});
                push(a2 > 0.0 ? 1.0 / a2 : kInf, {K::Linear, {0.0, 0.5 * a1 * a1 / a2 + a2 * kLog2}});
                if (!(a2 > 0.0)) c.segments.pop_back();
            } else {
                double s1 = std::sqrt(2.0 * p[0] * kLog2);
                c.segments.push_back({K::Quadratic, {kLog2, 0.0, 0.5 * a1 * a1}});
                push(s1 / a1, {K::Linear, {p[1] * kLog2, a1 * s1}});
                push(a2 > 0.0 ? 1.0 / a2 : kInf, {K::Linear, {0.0, a1 * s1 + a2 * p[1] * kLog2}});
                if (!(a2 > 0.0)) c.segments.pop_back();
            }
        }
        return c;
    }
    throw std::invalid_argument("levels: no closed-form curve for this spec");
}

RecoveredParams recover_params(const FreeEnergyCurve& curve, double gamma) {
    curve.validate();
    const std::size_t K = curve.breakpoints.size();
    if (K == 0) throw std::invalid_argument("curve: no breakpoints, nothing to recover");
    RecoveredParams out;
    if (gamma == 1.0) {
        std::vector<double> slope(K + 1);
        for (std::size_t i = 0; i <= K; ++i) {
            const Segment& s = curve.segments[i];
            if (s.kind == SegmentKind::Constant) slope[i] = 0.0;
            else if (s.kind == SegmentKind::Linear) slope[i] = s.coeffs[1];
            else throw std::invalid_argument("curve: exponential family needs constant/linear segments");
        }
        double identity = 0.0;
        for (std::size_t i = 1; i <= K; ++i) {
            double x = curve.breakpoints[i - 1];
            double jump = slope[i] - slope[i - 1];
            identity += x * jump;
            out.a.push_back(1.0 / x);
            out.p.push_back(x * jump / kLog2);
        }
        out.identity_residual = std::fabs(identity - kLog2);
    } else if (gamma > 1.0) {
        const double q = gamma / (gamma - 1.0);
        std::vector<double> c(K + 1);
        for (std::size_t i = 0; i <= K; ++i) {
            const Segment& s = curve.segments[i];
            double c2 = 0.0;
            if (s.kind == SegmentKind::Quadratic && q == 2.0) c2 = s.coeffs[2];
            else if (s.kind == SegmentKind::Power && std::fabs(s.coeffs[3] - q) < 1e-12) c2 = s.coeffs[2];
            else if (s.kind != SegmentKind::Linear && s.kind != SegmentKind::Constant)
                throw std::invalid_argument("curve: segment kind does not match gamma");
            c[i] = q * c2;
        }
        if (std::fabs(c[K]) > 1e-12) throw std::invalid_argument("curve: last segment must be linear");
        double identity = 0.0;
        for (std::size_t i = 0; i < K; ++i) {
            double x = curve.breakpoints[i];
            double drop = c[i] - c[i + 1];
            if (!(drop > 0.0)) throw std::invalid_argument("curve: curvature must drop at every breakpoint");
            double xq = std::pow(x, q);
            identity += xq * drop;
            out.a.push_back(std::pow(drop, 1.0 / q));
            out.p.push_back((q - 1.0) / (q * kLog2) * xq * drop);
        }
        out.identity_residual = std::fabs(identity - q / (q - 1.0) * kLog2);
    } else {
        throw std::invalid_argument("gamma: recovery needs gamma >= 1");
    }
    if (out.identity_residual > 1e-8) throw std::invalid_argument("curve: not a valid reduced-form energy curve");
    return out;
}

}  // namespace remlab
