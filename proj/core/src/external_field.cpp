#include "remlab/external_field.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "remlab/analytic_rem.hpp"
#include "remlab/numeric.hpp"

namespace remlab {

namespace {

double xlog1p(double y) { return y == -1.0 ? 0.0 : (1.0 + y) * std::log1p(y); }

}  // namespace

double binary_entropy_rate(double y) {
    if (std::fabs(y) > 1.0) return kInf;
    return 0.5 * (xlog1p(y) + xlog1p(-y));
}

void FieldParams::validate() const {
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("a: must be > 0");
    if (!(h >= 0.0) || !std::isfinite(h)) throw std::invalid_argument("h: must be >= 0");
}

FieldSolution field_solution(const FieldParams& fp, double beta) {
    fp.validate();
    FieldSolution s;
    const double edge = std::sqrt(2.0 * kLog2) / fp.a;
    if (fp.h == 0.0) {
        s.y0 = 0.0;
    } else {
        auto g = [&](double y) {
            double room = kLog2 - binary_entropy_rate(y);
            return fp.a * std::atanh(y) / std::sqrt(2.0 * std::max(room, 0.0)) - fp.h;
        };
        s.y0 = bisect(g, 0.0, 1.0 - 1e-12);
    }
    s.x0 = std::sqrt(2.0 * (kLog2 - binary_entropy_rate(s.y0)));
    s.beta_star = s.x0 / fp.a;
    if (beta <= edge) {
        double target = kLog2 - 0.5 * beta * beta * fp.a * fp.a;
        s.c_beta = bisect([&](double c) { return binary_entropy_rate(c) - target; }, 0.0, 1.0);
        s.high_temperature = s.y0 <= s.c_beta;
    } else {
        s.c_beta = 0.0;
        s.high_temperature = false;
    }
    return s;
}

double rem_field_energy(const FieldParams& fp, double beta) {
    fp.validate();
    if (fp.h == 0.0) return rem_gaussian(fp.a * beta);
    FieldSolution s = field_solution(fp, beta);
    if (s.high_temperature) return kLog2 + 0.5 * beta * beta * fp.a * fp.a + log_cosh(beta * fp.h);
    return beta * (fp.a * s.x0 + fp.h * s.y0);
}

FreeEnergyCurve build_field_curve(const FieldParams& fp) {
    fp.validate();
    FreeEnergyCurve c;
    if (fp.h == 0.0) {
        double s = std::sqrt(2.0 * kLog2);
        c.breakpoints = {s / fp.a};
        c.segments = {{SegmentKind::Quadratic, {kLog2, 0.0, 0.5 * fp.a * fp.a}}, {SegmentKind::Linear, {0.0, fp.a * s}}};
        return c;
    }
    FieldSolution s = field_solution(fp, 0.0);
    c.breakpoints = {s.beta_star};
    c.segments = {{SegmentKind::CoshField, {kLog2, 0.5 * fp.a * fp.a, fp.h}},
                  {SegmentKind::Linear, {0.0, fp.a * s.x0 + fp.h * s.y0}}};
    return c;
}

SymbolSet Word::set() const {
    SymbolSet m = 0;
    for (int s : sym) m |= SymbolSet{1} << (s - 1);
    return m;
}

void WordSpec::validate() const {
    if (n < 1 || n > kMaxBkSymbols) throw std::invalid_argument("n: symbol count must be in 1..8");
    if (static_cast<int>(p.size()) != n) throw std::invalid_argument("p: length must equal n");
    double sum = 0.0;
    for (double x : p) {
        if (!(x > 0.0)) throw std::invalid_argument("p: proportions must be > 0");
        sum += x;
    }
    if (std::fabs(sum - 1.0) > 1e-12) throw std::invalid_argument("p: proportions must sum to 1");
    if (words.empty()) throw std::invalid_argument("words: at least one word required");
    SymbolSet covered = 0;
    for (const auto& w : words) {
        if (w.sym.empty()) throw std::invalid_argument("words.sym: empty word");
        for (int s : w.sym)
            if (s < 1 || s > n) throw std::invalid_argument("words.sym: symbol outside 1..n");
        if (!(w.a >= 0.0) || !std::isfinite(w.a)) throw std::invalid_argument("words.a: must be finite and >= 0");
        covered |= w.set();
    }
    if (covered != (SymbolSet{1} << n) - 1) throw std::invalid_argument("words: every symbol must appear in a word");
    if (!(h >= 0.0) || !std::isfinite(h)) throw std::invalid_argument("h: must be >= 0");
}

double word_grem_energy(const WordSpec& ws, double beta) {
    ws.validate();
    if (ws.n > kMaxWordSymbols) throw std::invalid_argument("n: word solver supports at most 3 symbols");
    if (static_cast<int>(ws.words.size()) > kMaxWords) throw std::invalid_argument("words: at most 7 words");

    const int S = static_cast<int>(ws.words.size());
    const int n = ws.n;
    const int dim = S + n;
    const SymbolSet full = (SymbolSet{1} << n) - 1;
    std::vector<SymbolSet> sets;
    for (const auto& w : ws.words) sets.push_back(w.set());

    using Vec = Eigen::VectorXd;
    using Mat = Eigen::MatrixXd;

    auto inside = [&](const Vec& z) {
        for (int i = 0; i < n; ++i)
            if (std::fabs(z[S + i]) >= ws.p[i]) return false;
        return true;
    };
    auto objective = [&](const Vec& z) {
        double f = 0.0;
        for (int s = 0; s < S; ++s) f += 0.5 * z[s] * z[s] - beta * ws.words[s].a * z[s];
        for (int i = 0; i < n; ++i) f += ws.p[i] * binary_entropy_rate(z[S + i] / ws.p[i]) - beta * ws.h * z[S + i];
        return f;
    };
    auto slack = [&](const Vec& z, SymbolSet A) {
        double g = 0.0, b = 0.0;
        for (int s = 0; s < S; ++s)
            if ((sets[s] & ~A) == 0) g += 0.5 * z[s] * z[s];
        for (int i = 0; i < n; ++i)
            if (A >> i & 1u) {
                g += ws.p[i] * binary_entropy_rate(z[S + i] / ws.p[i]);
                b += ws.p[i] * kLog2;
            }
        return b - g;
    };
    // t f(z) - sum_A log(slack_A(z))
    auto barrier = [&](const Vec& z, double t) {
        if (!inside(z)) return kInf;
        double v = t * objective(z);
        for (SymbolSet A = 1; A <= full; ++A) {
            double r = slack(z, A);
            if (!(r > 0.0)) return kInf;
            v -= std::log(r);
        }
        return v;
    };

    Vec z = Vec::Zero(dim);
    const int m = static_cast<int>(full);
    for (double t = 1.0; static_cast<double>(m) / t > 1e-11; t *= 8.0) {
        for (int it = 0; it < 100; ++it) {
            Vec grad = Vec::Zero(dim);
            Mat hess = Mat::Zero(dim, dim);
            for (int s = 0; s < S; ++s) {
                grad[s] += t * (z[s] - beta * ws.words[s].a);
                hess(s, s) += t;
            }
            for (int i = 0; i < n; ++i) {
                double u = z[S + i] / ws.p[i];
                grad[S + i] += t * (std::atanh(u) - beta * ws.h);
                hess(S + i, S + i) += t / (ws.p[i] * (1.0 - u * u));
            }
            for (SymbolSet A = 1; A <= full; ++A) {
                double r = slack(z, A);
                Vec dg = Vec::Zero(dim);
                Vec d2 = Vec::Zero(dim);
                for (int s = 0; s < S; ++s)
                    if ((sets[s] & ~A) == 0) {
                        dg[s] = z[s];
                        d2[s] = 1.0;
                    }
                for (int i = 0; i < n; ++i)
                    if (A >> i & 1u) {
                        double u = z[S + i] / ws.p[i];
                        dg[S + i] = std::atanh(u);
                        d2[S + i] = 1.0 / (ws.p[i] * (1.0 - u * u));
                    }
                grad += dg / r;
                hess += Mat(d2.asDiagonal()) / r + dg * dg.transpose() / (r * r);
            }
            Vec step = -hess.ldlt().solve(grad);
            double decrement = -grad.dot(step);
            if (decrement < 1e-14) break;
            double f0 = barrier(z, t);
            double len = 1.0;
            Vec next = z + step;
            while (len > 1e-16) {
                next = z + len * step;
                double f1 = barrier(next, t);
                if (f1 <= f0 - 0.25 * len * decrement) break;
                len *= 0.5;
            }
            if (len <= 1e-16) break;
            z = next;
        }
    }
    return kLog2 - objective(z);
}

WordSpec word_spec_from_bk(const BkSpec& spec, double h) {
    WordSpec ws;
    ws.n = spec.n;
    ws.p = spec.p;
    ws.h = h;
    for (const auto& [mask, a] : spec.weights) {
        Word w;
        for (int i = 0; i < spec.n; ++i)
            if (mask >> i & 1u) w.sym.push_back(i + 1);
        w.a = a;
        ws.words.push_back(std::move(w));
    }
    return ws;
}

}  // namespace remlab
