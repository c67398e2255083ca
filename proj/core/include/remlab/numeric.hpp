#pragma once

#include <cmath>
#include <limits>

namespace remlab {

inline constexpr double kLog2 = 0.693147180559945309417232121458176568;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Bisection on a bracket with a sign change. Runs until the midpoint
// coincides with an endpoint (full double precision) or max_iter is hit.
template <class F>
double bisect(F&& f, double lo, double hi, int max_iter = 400) {
    double flo = f(lo);
    if (flo == 0.0) return lo;
    for (int it = 0; it < max_iter; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Golden-section search for a minimiser of f on [lo, hi].
template <class F>
double golden_min(F&& f, double lo, double hi, double tol = 1e-13) {
    const double r = 0.6180339887498949;
    double x1 = hi - r * (hi - lo);
    double x2 = lo + r * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > tol * (1.0 + std::fabs(lo) + std::fabs(hi))) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    return f1 <= f2 ? x1 : x2;
}

// Streaming log(sum exp(x_i)) with a running maximum.
class LogSumExp {
public:
    void add(double x) {
        if (x == -kInf) return;
        if (x <= max_) {
            sum_ += std::exp(x - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - x) + 1.0;
            max_ = x;
        }
    }
    void add_weighted(double x, double log_weight) { add(x + log_weight); }
    void merge(const LogSumExp& o) {
        if (o.max_ == -kInf) return;
        if (o.max_ <= max_) {
            sum_ += o.sum_ * std::exp(o.max_ - max_);
        } else {
            sum_ = sum_ * std::exp(max_ - o.max_) + o.sum_;
            max_ = o.max_;
        }
    }
    double value() const { return max_ == -kInf ? -kInf : max_ + std::log(sum_); }

private:
    double max_ = -kInf;
    double sum_ = 0.0;
};

// log cosh(x) without overflow.
inline double log_cosh(double x) {
    double ax = std::fabs(x);
    return ax + std::log1p(std::exp(-2.0 * ax)) - kLog2;
}

}  // namespace remlab
