#include "remlab/curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "remlab/numeric.hpp"

namespace remlab {

namespace {

std::size_t arity(SegmentKind k) {
    switch (k) {
        case SegmentKind::Constant: return 1;
        case SegmentKind::Linear: return 2;
        case SegmentKind::Quadratic: return 3;
        case SegmentKind::Power: return 4;
        case SegmentKind::ExpDecay: return 3;
        case SegmentKind::Logistic: return 5;
        case SegmentKind::CoshField: return 3;
    }
    return 0;
}

}  // namespace

std::string to_string(SegmentKind k) {
    switch (k) {
        case SegmentKind::Constant: return "constant";
        case SegmentKind::Linear: return "linear";
        case SegmentKind::Quadratic: return "quadratic";
        case SegmentKind::Power: return "power-gamma";
        case SegmentKind::ExpDecay: return "exp-decay";
        case SegmentKind::Logistic: return "logistic";
        case SegmentKind::CoshField: return "cosh-field";
    }
    return "?";
}

SegmentKind segment_kind_from_string(const std::string& s) {
    for (SegmentKind k : {SegmentKind::Constant, SegmentKind::Linear, SegmentKind::Quadratic, SegmentKind::Power,
                          SegmentKind::ExpDecay, SegmentKind::Logistic, SegmentKind::CoshField}) {
        if (to_string(k) == s) return k;
    }
    throw std::invalid_argument("segments.kind: unknown segment kind '" + s + "'");
}

double Segment::eval(double b) const {
    const auto& c = coeffs;
    switch (kind) {
        case SegmentKind::Constant: return c[0];
        case SegmentKind::Linear: return c[0] + c[1] * b;
        case SegmentKind::Quadratic: return c[0] + b * (c[1] + c[2] * b);
        case SegmentKind::Power: return c[0] + c[1] * b + c[2] * std::pow(b, c[3]);
        case SegmentKind::ExpDecay: return c[0] + c[1] * std::exp(c[2] * b);
        case SegmentKind::Logistic: return c[0] + c[1] * b + std::log(c[2] + c[3] * std::exp(c[4] * b));
        case SegmentKind::CoshField: return c[0] + c[1] * b * b + log_cosh(c[2] * b);
    }
    return 0.0;
}

std::size_t FreeEnergyCurve::segment_index(double beta) const {
    return static_cast<std::size_t>(std::upper_bound(breakpoints.begin(), breakpoints.end(), beta) -
                                    breakpoints.begin());
}

double FreeEnergyCurve::operator()(double beta) const { return segments[segment_index(beta)].eval(beta); }

void FreeEnergyCurve::validate() const {
    if (segments.size() != breakpoints.size() + 1)
        throw std::invalid_argument("segments: expected one more segment than breakpoints");
    for (std::size_t i = 0; i < breakpoints.size(); ++i) {
        if (!(breakpoints[i] > (i == 0 ? 0.0 : breakpoints[i - 1])))
            throw std::invalid_argument("breakpoints: must be positive and strictly increasing");
    }
    for (const auto& s : segments) {
        if (s.coeffs.size() != arity(s.kind))
            throw std::invalid_argument("segments.coeffs: wrong coefficient count for kind " + to_string(s.kind));
    }
}

}  // namespace remlab
