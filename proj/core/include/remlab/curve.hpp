#pragma once

#include <string>
#include <vector>

namespace remlab {

enum class SegmentKind {
    Constant,   // c0
    Linear,     // c0 + c1 b
    Quadratic,  // c0 + c1 b + c2 b^2
    Power,      // c0 + c1 b + c2 b^c3
    ExpDecay,   // c0 + c1 exp(c2 b)
    Logistic,   // c0 + c1 b + log(c2 + c3 exp(c4 b))
    CoshField,  // c0 + c1 b^2 + log cosh(c2 b)
};

std::string to_string(SegmentKind k);
SegmentKind segment_kind_from_string(const std::string& s);

struct Segment {
    SegmentKind kind = SegmentKind::Constant;
    std::vector<double> coeffs;

    double eval(double beta) const;
};

// Piecewise closed form of beta -> E(beta). breakpoints holds the interior
// points beta_1 < ... < beta_K; segment j covers [beta_j, beta_{j+1}) with
// beta_0 = 0 and beta_{K+1} = infinity.
struct FreeEnergyCurve {
    std::vector<double> breakpoints;
    std::vector<Segment> segments;

    double operator()(double beta) const;
    std::size_t segment_index(double beta) const;
    void validate() const;
};

}  // namespace remlab
