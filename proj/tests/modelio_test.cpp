#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qvaforge/modelio.hpp"
#include "testutil.hpp"

using namespace qvaforge;
using namespace qvaforge::modelio;
using namespace qvftest;

namespace {
constexpr int T = 3;
}

TEST_CASE("expression parsing and lowering") {
    CHECK(parse_expr("1/(z1-z2)", T) == inv_d12(T));
    CHECK(parse_expr("z1^2*z2", T) ==
          RatFn::poly(PolyExact::variable(Var::z1, 2) * PolyExact::variable(Var::z2), T));
    CHECK(parse_expr("-3/2", T) == RatFn::constant(Rational(-3, 2), T));
    CHECK(parse_expr("(z1-z2)^-1", T) == inv_d12(T));
    CHECK(parse_expr("t^2/(z1-z2)", T) == RatFn::t_power(2, T) * inv_d12(T));

    SUBCASE("t-adic expansion of a t-linear denominator") {
        // oracle: 1/(z1-z2-t) = sum_k t^k/(z1-z2)^{k+1}
        RatFn expect = inv_d12(T) + RatFn::t_power(1, T) * pole(fnring::PoleFactor::d12, 2, T) +
                       RatFn::t_power(2, T) * pole(fnring::PoleFactor::d12, 3, T);
        CHECK(parse_expr("1/(z1-z2-t)", T) == expect);
    }
    SUBCASE("pole whitelist enforcement") {
        CHECK_THROWS_WITH_AS(parse_expr("1/(z1-2*z2)", T), doctest::Contains("DisallowedPole"),
                             Error);
        // scalar multiples of whitelisted factors are invertible
        CHECK(parse_expr("1/(2*z1-2*z2)", T) == inv_d12(T).scaled(Rational(1, 2)));
        CHECK(parse_expr("1/(2*z1)", T) ==
              pole(fnring::PoleFactor::z1, 1, T).scaled(Rational(1, 2)));
    }
    SUBCASE("syntax errors carry a position") {
        CHECK_THROWS_WITH_AS(parse_expr("1 +", T), doctest::Contains("position"), Error);
        CHECK_THROWS_WITH_AS(parse_expr("(z1", T), doctest::Contains("SyntaxError"), Error);
        CHECK_THROWS_WITH_AS(parse_expr("z4", T), doctest::Contains("UnknownVariable"), Error);
    }
    SUBCASE("parser round trip") {
        for (const char* s :
             {"1/(z1-z2)", "1/(z1-z2-t) + t/z1", "z1^2*z2 - 3/2", "-(z1 - z2)^2/(z1*z2)",
              "1 + t/(z1-z2) + 1/2*t^2/(z1-z2)^2"}) {
            ExprPtr once = parse_expr_text(s);
            ExprPtr twice = parse_expr_text(print_expr(once));
            CHECK(expr_equal(once, twice));
            CHECK(lower_expr(once, T) == lower_expr(twice, T));
        }
    }
}

TEST_CASE("model documents") {
    const char* text = R"(
# a comment
generator phi odd
generator psi odd

bichar phi psi = 1/(z1-z2)   # inline comment
bichar psi phi = 1/(z1-z2)
bichar phi phi = 0
bichar psi psi = 0
option t_trunc 3
option d_trunc 2
option degree_bound 2
option compose_twist on
)";
    ModelDoc doc = parse_model_doc(text, "inline");
    CHECK(doc.generators.size() == 2);
    CHECK(doc.entries.size() == 4);
    CHECK(doc.t_trunc == 3);
    CHECK(doc.d_trunc == 2);
    CHECK(doc.compose_twist);

    qva::Model m = load_model(doc);
    CHECK(m.t_trunc == 3);
    CHECK(m.d_trunc == 2);
    CHECK(bichar::classify(m.r) == bichar::QvaClass::ClassicalSuperVA);

    SUBCASE("syntax errors") {
        CHECK_THROWS_AS(parse_model_doc("generator phi strange", "x"), Error);
        CHECK_THROWS_AS(parse_model_doc("bichar phi psi 1/(z1-z2)", "x"), Error);
        CHECK_THROWS_AS(parse_model_doc("option t_trunc abc", "x"), Error);
        CHECK_THROWS_AS(parse_model_doc("option unknown 1", "x"), Error);
        CHECK_THROWS_AS(parse_model_doc("frobnicate a b", "x"), Error);
    }
    SUBCASE("missing explicit zero fails validation") {
        ModelDoc bad = doc;
        bad.entries.pop_back();
        CHECK_THROWS_WITH_AS(load_model(bad), doctest::Contains("missing table entry"), Error);
    }
    SUBCASE("an entry outside W2 fails at load time") {
        ModelDoc bad = doc;
        bad.entries[0].expr = "1/z2";
        CHECK_THROWS_WITH_AS(load_model(bad), doctest::Contains("membership"), Error);
    }
    SUBCASE("entries referencing undeclared generators fail") {
        ModelDoc bad = doc;
        bad.entries.push_back({"phi", "chi", "0"});
        CHECK_THROWS_WITH_AS(load_model(bad), doctest::Contains("undeclared"), Error);
    }
}

TEST_CASE("builtin catalog") {
    CHECK(builtin_names().size() == 4);
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        qva::Model m = load_model(builtin_doc(name, 3));
        CHECK(m.t_trunc == 3);
    }
    CHECK_THROWS_AS(builtin_doc("no_such_model"), Error);

    SUBCASE("classification labels") {
        auto label = [](const std::string& n) {
            return bichar::classify(load_model(builtin_doc(n, 3)).r);
        };
        CHECK(label("charged_free_fermion") == bichar::QvaClass::ClassicalSuperVA);
        CHECK(label("fermion_ek") == bichar::QvaClass::EKQuantumVA);
        CHECK(label("fermion_essential") == bichar::QvaClass::EKQuantumVA);
        CHECK(label("fermion_hd") == bichar::QvaClass::HDQuantumVA);
    }
    SUBCASE("the essential-singularity series tracks the truncation") {
        for (int tt : {2, 4, 5}) {
            qva::Model m = load_model(builtin_doc("fermion_essential", tt));
            const RatFn& e = m.r.entry(m.gens->rank_of("phi"), m.gens->rank_of("psi"));
            CHECK(e.t_trunc() == tt);
            for (int k = 0; k < tt; ++k) {
                // order k has the pole (z1-z2)^k with coefficient 1/k!
                RatFn::Order o = e.order(k);
                CHECK(o.den.exp[fnring::fidx(fnring::PoleFactor::d12)] == k);
                CHECK(o.num.constant_value() == Rational(1, factorial(k)));
            }
        }
    }
}

TEST_CASE("element text") {
    auto gens = fermion_gens();
    const auto& gs = *gens;

    CHECK(parse_element(gs, "1") == elem(Monomial::unit()));
    CHECK(parse_element(gs, "phi") == elem(mono(gs, {{"phi", 0}})));
    CHECK(parse_element(gs, "phi[2]") == elem(mono(gs, {{"phi", 2}})));
    CHECK(parse_element(gs, "phi[0]*psi[1]") == elem(mono(gs, {{"phi", 0}, {"psi", 1}})));
    CHECK(parse_element(gs, "psi[0]*phi[0]") == -elem(mono(gs, {{"phi", 0}, {"psi", 0}})));
    CHECK(parse_element(gs, "2*phi[0] - 1/2*psi[1]") ==
          elem(mono(gs, {{"phi", 0}})).scaled(Rational(2)) -
              elem(mono(gs, {{"psi", 1}})).scaled(Rational(1, 2)));
    CHECK(parse_element(gs, "phi[0]*phi[0]").is_zero());
    CHECK_THROWS_AS(parse_element(gs, "chi[0]"), Error);
    CHECK_THROWS_AS(parse_element(gs, "phi[0]*"), Error);

    SUBCASE("canonical element text parses back to itself") {
        ScalarElement e = elem(mono(gs, {{"phi", 0}, {"psi", 1}})).scaled(Rational(3)) +
                          elem(mono(gs, {{"phi", 2}}));
        CHECK(parse_element(gs, e.str(gs)) == e);
    }
}
