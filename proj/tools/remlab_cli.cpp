#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "remlab/analytic_bk.hpp"
#include "remlab/analytic_grem.hpp"
#include "remlab/analytic_rem.hpp"
#include "remlab/external_field.hpp"
#include "remlab/io.hpp"
#include "remlab/simulator.hpp"

#ifndef REMLAB_VERSION
#define REMLAB_VERSION "0.0.0"
#endif

using nlohmann::json;
using namespace remlab;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitBudget = 3;

struct Flags {
    std::string model, beta, tree, weights, words, curve, format, family, bins, config, out, N_list;
    std::vector<double> p, a, gamma;
    std::optional<double> theta, prob, h, alpha;
    std::optional<int> N, replicas;
    std::optional<std::uint64_t> seed, samples;
    bool sampling = false;
};

std::string slurp(const std::string& path, const char* field) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(std::string(field) + ": cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text, const char* field) {
    try {
        return json::parse(text);
    } catch (const json::parse_error&) {
        throw std::invalid_argument(std::string(field) + ": not valid JSON");
    }
}

std::vector<double> expand_grid(const std::string& spec) {
    std::vector<double> out;
    auto to_num = [](const std::string& s) {
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw std::invalid_argument("beta: cannot parse '" + s + "'");
        }
    };
    if (spec.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream in(spec);
        for (std::string t; std::getline(in, t, ':');) parts.push_back(t);
        if (parts.size() != 3) throw std::invalid_argument("beta: expected lo:hi:step");
        double lo = to_num(parts[0]), hi = to_num(parts[1]), step = to_num(parts[2]);
        if (!(step > 0.0)) throw std::invalid_argument("beta: step must be > 0");
        if (hi < lo) throw std::invalid_argument("beta: hi must be >= lo");
        auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        for (long i = 0; i <= count; ++i) out.push_back(lo + static_cast<double>(i) * step);
    } else {
        std::stringstream in(spec);
        for (std::string t; std::getline(in, t, ',');) out.push_back(to_num(t));
    }
    if (out.empty()) throw std::invalid_argument("beta: grid is empty");
    for (double b : out)
        if (!(b >= 0.0)) throw std::invalid_argument("beta: values must be >= 0");
    return out;
}

std::vector<int> int_list(const std::string& s, const char* field) {
    std::vector<int> out;
    std::stringstream in(s);
    for (std::string t; std::getline(in, t, ',');) {
        try {
            out.push_back(std::stoi(t));
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(field) + ": cannot parse '" + t + "'");
        }
    }
    return out;
}

// Flags as a manifest-shaped JSON object (only the options actually given).
json flags_to_json(const Flags& f) {
    json j = json::object();
    if (!f.model.empty()) j["model"] = f.model;
    if (!f.p.empty()) j["p"] = f.p;
    if (!f.a.empty()) j["a"] = f.a;
    if (!f.gamma.empty()) j["gamma"] = f.gamma;
    if (f.theta) j["theta"] = *f.theta;
    if (f.prob) j["prob"] = *f.prob;
    if (f.h) j["h"] = *f.h;
    if (f.alpha) j["alpha"] = *f.alpha;
    if (!f.beta.empty()) j["beta"] = expand_grid(f.beta);
    if (f.N) j["N"] = *f.N;
    if (!f.N_list.empty()) j["N_list"] = int_list(f.N_list, "N-list");
    if (f.seed) j["seed"] = *f.seed;
    if (f.replicas) j["replicas"] = *f.replicas;
    if (!f.tree.empty()) j["tree"] = f.tree;
    if (!f.weights.empty()) j["weights"] = parse_json(slurp(f.weights, "weights"), "weights");
    if (!f.words.empty()) j["words"] = parse_json(slurp(f.words, "words"), "words");
    if (!f.curve.empty()) j["curve"] = parse_json(slurp(f.curve, "curve"), "curve");
    if (!f.format.empty()) j["format"] = f.format;
    if (!f.family.empty()) j["family"] = f.family;
    if (!f.bins.empty()) j["bins"] = f.bins;
    if (f.samples) j["samples"] = *f.samples;
    if (f.sampling) j["sampling"] = true;
    return j;
}

const json& field(const json& cfg, const char* key, const std::string& why) {
    if (!cfg.contains(key)) throw std::invalid_argument(std::string(key) + ": required " + why);
    return cfg.at(key);
}

template <class T>
T get(const json& cfg, const char* key, const std::string& why) {
    try {
        return field(cfg, key, why).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(std::string(key) + ": wrong type");
    }
}

template <class T>
T get_or(const json& cfg, const char* key, T fallback) {
    if (!cfg.contains(key)) return fallback;
    return get<T>(cfg, key, "");
}

double scalar_gamma(const json& cfg, const std::string& why) {
    auto g = get<std::vector<double>>(cfg, "gamma", why);
    if (g.size() != 1) throw std::invalid_argument("gamma: expected a single value " + why);
    return g[0];
}

struct Model {
    std::string name;
    SimModel sim;
    bool simulable = true;
    std::optional<FreeEnergyCurve> curve;
    std::vector<double> block_p, block_a;  // block-tree only

    double energy(double beta) const {
        if (name == "block-tree") return block_tree_energy(block_p, block_a, beta);
        if (name == "rem-compact") return sim.rem.energy(beta);
        return analytic_energy(sim, beta);
    }
};

Model build_model(const json& cfg) {
    Model m;
    m.name = get<std::string>(cfg, "model", "");
    const std::string& n = m.name;
    const std::string why = "for model " + n;
    auto rem = [&](RemModel::Kind kind, double param = 0.0, int sign = 1) {
        RemModel r{kind, param, sign};
        m.sim = SimModel::of(r);
        if (kind != RemModel::Kind::Compact) (void)r.rate();
        m.curve = build_rem_curve(r);
    };
    if (n == "rem-gaussian") rem(RemModel::Kind::Gaussian);
    else if (n == "rem-exp") rem(RemModel::Kind::Exponential);
    else if (n == "rem-weibull") rem(RemModel::Kind::Weibull, scalar_gamma(cfg, why));
    else if (n == "rem-poisson") rem(RemModel::Kind::Poisson, get<double>(cfg, "theta", why));
    else if (n == "rem-poisson-neg") rem(RemModel::Kind::Poisson, get<double>(cfg, "theta", why), -1);
    else if (n == "rem-binomial") rem(RemModel::Kind::Binomial, get<double>(cfg, "prob", why));
    else if (n == "rem-binomial-neg") rem(RemModel::Kind::Binomial, get<double>(cfg, "prob", why), -1);
    else if (n == "rem-truncated-exp") rem(RemModel::Kind::TruncatedExp, get<double>(cfg, "alpha", why));
    else if (n == "rem-truncated-gauss") rem(RemModel::Kind::TruncatedGauss, get<double>(cfg, "alpha", why));
    else if (n == "rem-compact") {
        double alpha = get<double>(cfg, "alpha", why);
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha: must be > 0");
        m.sim = SimModel::of(RemModel{RemModel::Kind::Compact, alpha, 1});
        m.simulable = false;
        if (std::isfinite(alpha)) m.curve = build_rem_curve(m.sim.rem);
    } else if (n == "rem-field") {
        FieldParams fp{1.0, get<double>(cfg, "h", why)};
        if (cfg.contains("a")) {
            auto a = get<std::vector<double>>(cfg, "a", why);
            if (a.size() != 1) throw std::invalid_argument("a: expected a single weight for rem-field");
            fp.a = a[0];
        }
        fp.validate();
        m.sim = SimModel::of(fp);
        m.curve = build_field_curve(fp);
    } else if (n == "grem" || n == "grem-exp-gauss" || n == "grem-gauss-exp") {
        auto p = get<std::vector<double>>(cfg, "p", why);
        auto a = get<std::vector<double>>(cfg, "a", why);
        GremSpec s;
        if (n == "grem") {
            auto g = get<std::vector<double>>(cfg, "gamma", why);
            if (g.size() == 1) s = GremSpec::uniform(p, a, g[0]);
            else if (g.size() == p.size()) s = GremSpec::per_level(p, a, g);
            else throw std::invalid_argument("gamma: give one value or one per level");
        } else {
            s = GremSpec::mixed(p, a, n == "grem-exp-gauss" ? std::vector<std::string>{"exp", "gauss"}
                                                           : std::vector<std::string>{"gauss", "exp"});
        }
        s.validate();
        m.sim = SimModel::of(s);
        if (has_closed_form(s)) m.curve = build_grem_curve(s);
    } else if (n == "bk") {
        BkSpec b = io::bk_from_json(field(cfg, "weights", why).dump());
        m.sim = SimModel::of(b);
    } else if (n == "block-tree") {
        m.block_p = get<std::vector<double>>(cfg, "p", why);
        m.block_a = get<std::vector<double>>(cfg, "a", why);
        GremSpec::uniform(m.block_p, m.block_a, 2.0).validate();
        if (m.block_p.size() > static_cast<std::size_t>(kMaxBkSymbols))
            throw std::invalid_argument("p: block-tree supports at most 8 levels");
        m.simulable = false;
    } else if (n == "word") {
        WordSpec w = io::word_from_json(field(cfg, "words", why).dump());
        m.sim = SimModel::of(w);
    } else {
        throw std::invalid_argument("model: unknown model '" + n + "'");
    }
    return m;
}

std::string output_format(const json& cfg) {
    std::string f = get_or<std::string>(cfg, "format", "csv");
    if (f != "csv" && f != "json") throw std::invalid_argument("format: expected csv or json");
    return f;
}

SimOptions sim_options(const json& cfg) {
    SimOptions o;
    o.seed = get<std::uint64_t>(cfg, "seed", "for stochastic commands");
    o.replicas = get_or<int>(cfg, "replicas", 1);
    o.betas = get<std::vector<double>>(cfg, "beta", "");
    o.tree = tree_kind_from_string(get_or<std::string>(cfg, "tree", "fixed"));
    o.sampling = get_or<bool>(cfg, "sampling", false);
    if (cfg.contains("samples")) o.samples = get<std::uint64_t>(cfg, "samples", "");
    return o;
}

std::string run_analytic(const json& cfg) {
    Model m = build_model(cfg);
    auto betas = get<std::vector<double>>(cfg, "beta", "");
    std::ostringstream out;
    if (output_format(cfg) == "csv") {
        out << "beta,value\n";
        for (double b : betas) out << io::fmt(b) << ',' << io::fmt(m.energy(b)) << '\n';
        return out.str();
    }
    json j = {{"model", m.name}};
    if (m.curve) j["curve"] = json::parse(io::curve_to_json(*m.curve));
    json pts = json::array();
    for (double b : betas) pts.push_back({{"beta", b}, {"value", m.energy(b)}});
    j["points"] = pts;
    return j.dump(2) + "\n";
}

std::string run_simulate(const json& cfg) {
    Model m = build_model(cfg);
    if (!m.simulable) throw std::invalid_argument("model: '" + m.name + "' has no simulator");
    SimOptions o = sim_options(cfg);
    int N = get<int>(cfg, "N", "for simulate");
    SimResult r = simulate(m.sim, N, o);
    for (std::size_t i = 0; i < r.attempts.size(); ++i)
        if (r.attempts[i] > 1)
            std::cerr << "warning: replica " << i << " tree redrawn " << r.attempts[i] - 1 << " time(s)\n";
    std::ostringstream out;
    if (output_format(cfg) == "csv") {
        out << "model,N,seed,replica,beta,logZ_over_N\n";
        for (std::size_t rep = 0; rep < r.values.size(); ++rep)
            for (std::size_t b = 0; b < r.betas.size(); ++b)
                out << m.name << ',' << N << ',' << r.seed << ',' << rep << ',' << io::fmt(r.betas[b]) << ','
                    << io::fmt(r.values[rep][b]) << '\n';
        return out.str();
    }
    json j = {{"model", m.name}, {"N", N},           {"seed", r.seed},       {"replicas", r.replicas},
              {"beta", r.betas}, {"values", r.values}, {"mean", r.mean()}, {"std", r.stddev()},
              {"sampled", r.sampled}};
    if (!r.trees.empty()) {
        json trees = json::array();
        for (std::size_t i = 0; i < r.trees.size(); ++i)
            trees.push_back({{"B", r.trees[i].B}, {"s2", r.trees[i].s2}, {"attempts", r.attempts[i]}});
        j["trees"] = trees;
    }
    return j.dump(2) + "\n";
}

std::string run_converge(const json& cfg) {
    Model m = build_model(cfg);
    if (!m.simulable) throw std::invalid_argument("model: '" + m.name + "' has no simulator");
    SimOptions o = sim_options(cfg);
    auto Ns = get<std::vector<int>>(cfg, "N_list", "for converge");
    auto rows = converge(m.sim, Ns, o);
    std::ostringstream out;
    if (output_format(cfg) == "csv") {
        out << "model,N,beta,analytic,mean,std,median_abs_error\n";
        for (const auto& r : rows)
            out << m.name << ',' << r.N << ',' << io::fmt(r.beta) << ',' << io::fmt(r.analytic) << ','
                << io::fmt(r.mean) << ',' << io::fmt(r.stddev) << ',' << io::fmt(r.median_abs_error) << '\n';
        return out.str();
    }
    json arr = json::array();
    for (const auto& r : rows)
        arr.push_back({{"N", r.N},
                       {"beta", r.beta},
                       {"analytic", r.analytic},
                       {"mean", r.mean},
                       {"std", r.stddev},
                       {"median_abs_error", r.median_abs_error}});
    return json{{"model", m.name}, {"rows", arr}}.dump(2) + "\n";
}

std::string run_ladder(const json& cfg) {
    Model m = build_model(cfg);
    json j = {{"model", m.name}};
    if (m.sim.kind == SimModel::Kind::Grem && m.name == "grem") {
        BetaLadder L = beta_ladder(m.sim.grem);
        j["betas"] = L.betas;
        j["ranks"] = L.ranks;
    } else if (m.sim.kind == SimModel::Kind::Bk) {
        ChainResult c = bk_chain(m.sim.bk);
        json sets = json::array();
        for (SymbolSet s : c.sets) sets.push_back(io::symbol_set_key(s));
        j["betas"] = c.betas;
        j["sets"] = sets;
        j["unfrozen"] = io::symbol_set_key(c.unfrozen);
        j["surviving_permutations"] = c.surviving_permutations;
    } else if (m.curve) {
        j["betas"] = m.curve->breakpoints;
    } else {
        throw std::invalid_argument("model: no ladder for '" + m.name + "'");
    }
    return j.dump(2) + "\n";
}

std::string run_recover(const json& cfg) {
    FreeEnergyCurve c = io::curve_from_json(field(cfg, "curve", "for recover").dump());
    std::string fam = get_or<std::string>(cfg, "family", "exp");
    double g = 1.0;
    if (fam == "gamma") g = cfg.contains("gamma") ? scalar_gamma(cfg, "for family gamma") : 2.0;
    else if (fam != "exp") throw std::invalid_argument("family: expected exp or gamma");
    RecoveredParams r = recover_params(c, g);
    return json{{"p", r.p}, {"a", r.a}, {"gamma", g}, {"identity_residual", r.identity_residual}}.dump(2) + "\n";
}

std::string run_validate(const json& cfg) {
    Model m = build_model(cfg);
    json j = {{"model", m.name}, {"valid", true}};
    if (m.sim.kind == SimModel::Kind::Grem) j["spec"] = json::parse(io::grem_to_json(m.sim.grem));
    if (m.sim.kind == SimModel::Kind::Bk) j["spec"] = json::parse(io::bk_to_json(m.sim.bk));
    if (m.sim.kind == SimModel::Kind::Word) j["spec"] = json::parse(io::word_to_json(m.sim.word));
    if (m.curve) j["curve"] = json::parse(io::curve_to_json(*m.curve));
    return j.dump(2) + "\n";
}

std::string run_histogram(const json& cfg) {
    Model m = build_model(cfg);
    if (m.sim.kind != SimModel::Kind::Rem || !m.simulable)
        throw std::invalid_argument("model: histogram needs a REM driving law");
    std::string spec = get<std::string>(cfg, "bins", "as lo:width:count");
    std::vector<std::string> parts;
    std::stringstream in(spec);
    for (std::string t; std::getline(in, t, ':');) parts.push_back(t);
    if (parts.size() != 3) throw std::invalid_argument("bins: expected lo:width:count");
    double lo = 0.0, width = 0.0;
    int count = 0;
    try {
        lo = std::stod(parts[0]);
        width = std::stod(parts[1]);
        count = std::stoi(parts[2]);
    } catch (const std::exception&) {
        throw std::invalid_argument("bins: cannot parse '" + spec + "'");
    }
    auto hist = empirical_ldp(m.sim.rem.rate(), get<int>(cfg, "N", "for histogram"), lo, width, count,
                              get<std::uint64_t>(cfg, "seed", "for stochastic commands"));
    std::ostringstream out;
    out << "lo,hi,mass,rate_stat\n";
    for (std::size_t b = 0; b < hist.mass.size(); ++b)
        out << io::fmt(hist.edges[b]) << ',' << io::fmt(hist.edges[b + 1]) << ',' << io::fmt(hist.mass[b]) << ','
            << io::fmt(hist.stat[b]) << '\n';
    return out.str();
}

void emit(const std::string& body, const std::string& out) {
    if (out.empty()) {
        std::cout << body;
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::invalid_argument("out: cannot write '" + out + "'");
    f << body;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Free energies of random energy models: closed forms, oracles and finite-N simulation"};
    app.set_help_flag("--help", "Print this help message and exit");
    app.require_subcommand(1);
    Flags f;

    auto add_common = [&](CLI::App* c) {
        c->add_option("--model", f.model, "Model name (rem-gaussian, grem, bk, word, ...)");
        c->add_option("--p", f.p, "Level proportions")->delimiter(',');
        c->add_option("--a", f.a, "Level weights")->delimiter(',');
        c->add_option("--gamma", f.gamma, "Rate exponent, one value or one per level")->delimiter(',');
        c->add_option("--theta", f.theta, "Poisson mean");
        c->add_option("--prob", f.prob, "Binomial success probability");
        c->add_option("--h", f.h, "External field");
        c->add_option("--alpha", f.alpha, "Truncation level or compact support bound");
        c->add_option("--beta", f.beta, "Inverse temperatures, lo:hi:step or a comma list");
        c->add_option("--N", f.N, "Spin count");
        c->add_option("--N-list", f.N_list, "Comma list of spin counts");
        c->add_option("--seed", f.seed, "Random seed");
        c->add_option("--replicas", f.replicas, "Independent replicas");
        c->add_option("--tree", f.tree, "fixed, regular-poisson, poisson, multinomial1, multinomial2");
        c->add_option("--weights", f.weights, "BK spec JSON file");
        c->add_option("--words", f.words, "Word spec JSON file");
        c->add_option("--curve", f.curve, "Energy curve JSON file (recover)");
        c->add_option("--family", f.family, "exp or gamma (recover)");
        c->add_option("--bins", f.bins, "lo:width:count (histogram)");
        c->add_option("--samples", f.samples, "Samples per replica above the enumeration cap");
        c->add_flag("--sampling", f.sampling, "Allow sampling above the enumeration cap");
        c->add_option("--format", f.format, "csv or json");
        c->add_option("--config", f.config, "Run manifest JSON; its values win over flags");
        c->add_option("--out", f.out, "Output file (a manifest is written next to it)");
    };
    std::vector<std::pair<CLI::App*, std::string (*)(const json&)>> commands = {
        {app.add_subcommand("analytic", "Evaluate the limiting free energy on a beta grid"), run_analytic},
        {app.add_subcommand("simulate", "Finite-N free energy by enumeration or sampling"), run_simulate},
        {app.add_subcommand("converge", "Simulation error against the limit across N"), run_converge},
        {app.add_subcommand("ladder", "Freezing thresholds of a GREM or BK chain"), run_ladder},
        {app.add_subcommand("recover", "Recover GREM parameters from an energy curve"), run_recover},
        {app.add_subcommand("validate", "Check a model descriptor"), run_validate},
        {app.add_subcommand("histogram", "Empirical-measure rate statistics per bin"), run_histogram},
    };
    for (auto& [cmd, fn] : commands) add_common(cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        for (auto& [cmd, fn] : commands) {
            if (!cmd->parsed()) continue;
            json cfg = flags_to_json(f);
            if (!f.config.empty()) {
                json manifest = parse_json(slurp(f.config, "config"), "config");
                if (!manifest.is_object()) throw std::invalid_argument("config: expected a JSON object");
                if (manifest.contains("command") && manifest.at("command") != cmd->get_name())
                    throw std::invalid_argument("command: manifest was written by '" +
                                                manifest.at("command").get<std::string>() + "'");
                for (const auto& [key, val] : manifest.items()) {
                    if (key == "command" || key == "tool_version") continue;
                    if (cfg.contains(key) && cfg.at(key) != val)
                        std::cerr << "warning: config value for '" << key << "' overrides the flag\n";
                    cfg[key] = val;
                }
            }
            std::string body = fn(cfg);
            emit(body, f.out);
            if (!f.out.empty()) {
                json manifest = cfg;
                manifest["command"] = cmd->get_name();
                manifest["tool_version"] = std::string("remlab ") + REMLAB_VERSION;
                emit(manifest.dump(2) + "\n", f.out + ".manifest.json");
            }
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
