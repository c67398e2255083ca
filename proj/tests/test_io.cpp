#include "doctest.h"
#include "remlab/analytic_rem.hpp"
#include "remlab/io.hpp"

using namespace remlab;

TEST_CASE("fmt round-trips doubles") {
    for (double x : {0.1, 1.0 / 3.0, kLog2, 1e-300, -2.5e17}) CHECK(std::stod(io::fmt(x)) == x);
}

TEST_CASE("rate descriptors round trip") {
    for (const RateFunction& rf :
         {RateFunction::gaussian(), RateFunction::power_gamma(1.5), RateFunction::poisson(0.3),
          RateFunction::negated(RateFunction::binomial(0.2)),
          RateFunction::truncated(RateFunction::two_sided_exponential(), 0.4),
          RateFunction::piecewise_half(RateFunction::two_sided_exponential(), RateFunction::gaussian())}) {
        std::string j = io::rate_to_json(rf);
        RateFunction back = io::rate_from_json(j);
        CHECK(io::rate_to_json(back) == j);
        for (double x : {-0.7, 0.0, 0.3, 1.2}) CHECK(back(x) == rf(x));
    }
    CHECK_THROWS_WITH_AS(io::rate_from_json(R"({"family":"PowerGamma"})"), "params: PowerGamma takes 1 parameter(s)",
                         std::invalid_argument);
    CHECK_THROWS_AS(io::rate_from_json(R"({"family":"Cauchy","params":[]})"), std::invalid_argument);
    CHECK_THROWS_AS(io::rate_from_json("{"), std::invalid_argument);
}

TEST_CASE("curve descriptors round trip") {
    FreeEnergyCurve c = build_rem_curve({RemModel::Kind::Gaussian});
    FreeEnergyCurve back = io::curve_from_json(io::curve_to_json(c));
    CHECK(back.breakpoints == c.breakpoints);
    for (double b : {0.0, 0.7, 1.5, 4.0}) CHECK(back(b) == c(b));
    std::string csv = io::curve_to_csv(c, {0.0, 1.0});
    CHECK(csv.rfind("beta,value\n0,0.6931471805599453\n", 0) == 0);
}

TEST_CASE("GREM descriptors round trip") {
    for (const GremSpec& s : {GremSpec::uniform({0.5, 0.5}, {1, 0.5}, 2.0), GremSpec::per_level({0.3, 0.7}, {1, 2}, {1.5, 3}),
                              GremSpec::mixed({0.5, 0.5}, {2, 1}, {"exp", "gauss"})}) {
        std::string j = io::grem_to_json(s);
        GremSpec back = io::grem_from_json(j);
        CHECK(back.p == s.p);
        CHECK(back.a == s.a);
        CHECK(back.gammas == s.gammas);
        CHECK(io::grem_to_json(back) == j);
    }
    CHECK_THROWS_WITH_AS(io::grem_from_json(R"({"p":[0.5,0.6],"a":[1,1],"levels":{"uniform_gamma":2}})"),
                         "p: proportions must sum to 1", std::invalid_argument);
    CHECK_THROWS_WITH_AS(io::grem_from_json(R"({"p":[1],"a":[1]})"), "levels: missing", std::invalid_argument);
}

TEST_CASE("BK descriptors") {
    BkSpec s = io::bk_from_json(R"({"n":3, "p":[0.2,0.3,0.5], "weights":{"1":0.2, "1,3":0.5, "1,2,3":0.3}})");
    CHECK(s.weights.at(1u) == 0.2);
    CHECK(s.weights.at(5u) == 0.5);
    CHECK(s.weights.at(7u) == 0.3);
    CHECK(s.gamma == 2.0);
    CHECK(io::bk_from_json(io::bk_to_json(s)).weights == s.weights);
    CHECK(io::symbol_set_key(5u) == "1,3");
    CHECK_THROWS_WITH_AS(io::symbol_set_from_key("3,1", 3), "weights: key '3,1' is not a sorted index set",
                         std::invalid_argument);
    CHECK_THROWS_AS(io::symbol_set_from_key("4", 3), std::invalid_argument);
    CHECK_THROWS_AS(io::symbol_set_from_key("x", 3), std::invalid_argument);
}

TEST_CASE("word descriptors") {
    WordSpec w = io::word_from_json(
        R"({"n":2, "words":[{"sym":[1],"a":0.3},{"sym":[1,2],"a":0.7}], "p":[0.5,0.5], "h":0.5})");
    CHECK(w.words.size() == 2);
    CHECK(w.words[1].set() == 3u);
    CHECK(w.h == 0.5);
    WordSpec back = io::word_from_json(io::word_to_json(w));
    CHECK(io::word_to_json(back) == io::word_to_json(w));
    CHECK_THROWS_AS(io::word_from_json(R"({"n":2, "words":[{"sym":[1],"a":0.3}], "p":[0.5,0.5]})"),
                    std::invalid_argument);
}
