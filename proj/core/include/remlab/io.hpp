#pragma once

#include <string>
#include <vector>

#include "remlab/analytic_bk.hpp"
#include "remlab/analytic_grem.hpp"
#include "remlab/curve.hpp"
#include "remlab/external_field.hpp"
#include "remlab/rates.hpp"

// JSON descriptors for the model types. Parsers throw std::invalid_argument
// with a "field: message" diagnostic.
namespace remlab::io {

// 17 significant digits, enough to round-trip any double.
std::string fmt(double x);

// {"family": "PowerGamma", "params": [1.5]}; composite families nest their
// parts under "inner" (Negated, Truncated) or "left"/"right" (PiecewiseHalf).
std::string rate_to_json(const RateFunction& rf);
RateFunction rate_from_json(const std::string& text);

// {"breakpoints": [...], "segments": [{"kind": "quadratic", "coeffs": [...]}]}
std::string curve_to_json(const FreeEnergyCurve& c);
FreeEnergyCurve curve_from_json(const std::string& text);
// "beta,value" rows
std::string curve_to_csv(const FreeEnergyCurve& c, const std::vector<double>& betas);

// {"p": [...], "a": [...], "levels": {"uniform_gamma": 2} | {"per_level": [...]} | {"mixed": ["exp", "gauss"]}}
std::string grem_to_json(const GremSpec& s);
GremSpec grem_from_json(const std::string& text);

// {"n": 3, "p": [...], "weights": {"1": 0.2, "1,3": 0.5}, "gamma": 2}
std::string bk_to_json(const BkSpec& s);
BkSpec bk_from_json(const std::string& text);

// {"n": 2, "words": [{"sym": [1], "a": 0.3}], "p": [...], "h": 0.5}
std::string word_to_json(const WordSpec& s);
WordSpec word_from_json(const std::string& text);

std::string symbol_set_key(SymbolSet s);
SymbolSet symbol_set_from_key(const std::string& key, int n);

}  // namespace remlab::io
