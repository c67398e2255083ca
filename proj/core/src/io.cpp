#include "remlab/io.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace remlab::io {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("json: ") + e.what());
    }
}

const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw std::invalid_argument(std::string(key) + ": missing");
    return j.at(key);
}

double number(const json& j, const char* field) {
    if (!j.is_number()) throw std::invalid_argument(std::string(field) + ": expected a number");
    return j.get<double>();
}

std::vector<double> numbers(const json& j, const char* field) {
    if (!j.is_array()) throw std::invalid_argument(std::string(field) + ": expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : j) out.push_back(number(x, field));
    return out;
}

int integer(const json& j, const char* field) {
    if (!j.is_number_integer()) throw std::invalid_argument(std::string(field) + ": expected an integer");
    return j.get<int>();
}

json rate_json(const RateFunction& rf) {
    json j = {{"family", to_string(rf.family())}, {"params", rf.params()}};
    switch (rf.family()) {
        case Family::Negated:
        case Family::Truncated: j["inner"] = rate_json(rf.inner()); break;
        case Family::PiecewiseHalf:
            j["left"] = rate_json(rf.left());
            j["right"] = rate_json(rf.right());
            break;
        default: break;
    }
    return j;
}

RateFunction rate_of(const json& j) {
    if (!need(j, "family").is_string()) throw std::invalid_argument("family: expected a string");
    Family f = family_from_string(j.at("family").get<std::string>());
    std::vector<double> params = j.contains("params") ? numbers(j.at("params"), "params") : std::vector<double>{};
    auto param = [&](std::size_t count) {
        if (params.size() != count)
            throw std::invalid_argument("params: " + to_string(f) + " takes " + std::to_string(count) + " parameter(s)");
    };
    switch (f) {
        case Family::Gaussian: param(0); return RateFunction::gaussian();
        case Family::TwoSidedExponential: param(0); return RateFunction::two_sided_exponential();
        case Family::PowerGamma: param(1); return RateFunction::power_gamma(params[0]);
        case Family::Poisson: param(1); return RateFunction::poisson(params[0]);
        case Family::Binomial: param(1); return RateFunction::binomial(params[0]);
        case Family::Negated: param(0); return RateFunction::negated(rate_of(need(j, "inner")));
        case Family::Truncated: param(1); return RateFunction::truncated(rate_of(need(j, "inner")), params[0]);
        case Family::PiecewiseHalf:
            param(0);
            return RateFunction::piecewise_half(rate_of(need(j, "left")), rate_of(need(j, "right")));
    }
    throw std::invalid_argument("family: unsupported");
}

}  // namespace

std::string fmt(double x) {
    // shortest text that reads back to the same double
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
}

std::string rate_to_json(const RateFunction& rf) { return rate_json(rf).dump(); }

RateFunction rate_from_json(const std::string& text) { return rate_of(parse(text)); }

std::string curve_to_json(const FreeEnergyCurve& c) {
    json segs = json::array();
    for (const auto& s : c.segments) segs.push_back({{"kind", to_string(s.kind)}, {"coeffs", s.coeffs}});
    return json{{"breakpoints", c.breakpoints}, {"segments", segs}}.dump();
}

FreeEnergyCurve curve_from_json(const std::string& text) {
    json j = parse(text);
    FreeEnergyCurve c;
    c.breakpoints = numbers(need(j, "breakpoints"), "breakpoints");
    const json& segs = need(j, "segments");
    if (!segs.is_array()) throw std::invalid_argument("segments: expected an array");
    for (const auto& s : segs) {
        if (!need(s, "kind").is_string()) throw std::invalid_argument("segments.kind: expected a string");
        c.segments.push_back({segment_kind_from_string(s.at("kind").get<std::string>()),
                              numbers(need(s, "coeffs"), "segments.coeffs")});
    }
    c.validate();
    return c;
}

std::string curve_to_csv(const FreeEnergyCurve& c, const std::vector<double>& betas) {
    std::ostringstream out;
    out << "beta,value\n";
    for (double b : betas) out << fmt(b) << ',' << fmt(c(b)) << '\n';
    return out.str();
}

std::string grem_to_json(const GremSpec& s) {
    json levels;
    switch (s.levels) {
        case GremSpec::Levels::Uniform: levels = {{"uniform_gamma", s.gamma()}}; break;
        case GremSpec::Levels::PerLevel: levels = {{"per_level", s.gammas}}; break;
        case GremSpec::Levels::Mixed: {
            json kinds = json::array();
            for (double g : s.gammas) kinds.push_back(g == 1.0 ? "exp" : "gauss");
            levels = {{"mixed", kinds}};
        }
    }
    return json{{"p", s.p}, {"a", s.a}, {"levels", levels}}.dump();
}

GremSpec grem_from_json(const std::string& text) {
    json j = parse(text);
    auto p = numbers(need(j, "p"), "p");
    auto a = numbers(need(j, "a"), "a");
    GremSpec s;
    const json& lv = need(j, "levels");
    if (lv.contains("uniform_gamma")) {
        s = GremSpec::uniform(p, a, number(lv.at("uniform_gamma"), "levels.uniform_gamma"));
    } else if (lv.contains("per_level")) {
        s = GremSpec::per_level(p, a, numbers(lv.at("per_level"), "levels.per_level"));
    } else if (lv.contains("mixed")) {
        std::vector<std::string> kinds;
        if (!lv.at("mixed").is_array()) throw std::invalid_argument("levels.mixed: expected an array");
        for (const auto& k : lv.at("mixed")) {
            if (!k.is_string()) throw std::invalid_argument("levels.mixed: expected strings");
            kinds.push_back(k.get<std::string>());
        }
        s = GremSpec::mixed(p, a, kinds);
    } else {
        throw std::invalid_argument("levels: expected uniform_gamma, per_level or mixed");
    }
    s.validate();
    return s;
}

std::string symbol_set_key(SymbolSet s) {
    std::string key;
    for (int i = 0; i < 32; ++i)
        if (s >> i & 1u) key += (key.empty() ? "" : ",") + std::to_string(i + 1);
    return key;
}

SymbolSet symbol_set_from_key(const std::string& key, int n) {
    SymbolSet s = 0;
    int last = 0;
    std::stringstream in(key);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        int v = 0;
        try {
            std::size_t used = 0;
            v = std::stoi(tok, &used);
            if (used != tok.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("weights: bad subset key '" + key + "'");
        }
        if (v < 1 || v > n) throw std::invalid_argument("weights: symbol outside 1..n in '" + key + "'");
        if (v <= last) throw std::invalid_argument("weights: key '" + key + "' is not a sorted index set");
        last = v;
        s |= SymbolSet{1} << (v - 1);
    }
    if (s == 0) throw std::invalid_argument("weights: empty subset key");
    return s;
}

std::string bk_to_json(const BkSpec& s) {
    json w = json::object();
    for (const auto& [mask, a] : s.weights) w[symbol_set_key(mask)] = a;
    return json{{"n", s.n}, {"p", s.p}, {"weights", w}, {"gamma", s.gamma}}.dump();
}

BkSpec bk_from_json(const std::string& text) {
    json j = parse(text);
    BkSpec s;
    s.n = integer(need(j, "n"), "n");
    if (s.n < 1 || s.n > kMaxBkSymbols) throw std::invalid_argument("n: symbol count must be in 1..8");
    s.p = numbers(need(j, "p"), "p");
    const json& w = need(j, "weights");
    if (!w.is_object()) throw std::invalid_argument("weights: expected an object");
    for (const auto& [key, val] : w.items()) s.weights[symbol_set_from_key(key, s.n)] = number(val, "weights");
    if (j.contains("gamma")) s.gamma = number(j.at("gamma"), "gamma");
    s.validate();
    return s;
}

std::string word_to_json(const WordSpec& s) {
    json words = json::array();
    for (const auto& w : s.words) words.push_back({{"sym", w.sym}, {"a", w.a}});
    return json{{"n", s.n}, {"words", words}, {"p", s.p}, {"h", s.h}}.dump();
}

WordSpec word_from_json(const std::string& text) {
    json j = parse(text);
    WordSpec s;
    s.n = integer(need(j, "n"), "n");
    s.p = numbers(need(j, "p"), "p");
    if (j.contains("h")) s.h = number(j.at("h"), "h");
    const json& words = need(j, "words");
    if (!words.is_array()) throw std::invalid_argument("words: expected an array");
    for (const auto& w : words) {
        Word word;
        const json& sym = need(w, "sym");
        if (!sym.is_array()) throw std::invalid_argument("words.sym: expected an array");
        for (const auto& x : sym) word.sym.push_back(integer(x, "words.sym"));
        word.a = number(need(w, "a"), "words.a");
        s.words.push_back(std::move(word));
    }
    s.validate();
    return s;
}

}  // namespace remlab::io
