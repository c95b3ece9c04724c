#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qvaforge/superhopf.hpp"

using namespace qvaforge;
using namespace qvaforge::superhopf;
using qvaforge::fnring::RatFn;
using qvaforge::fnring::Var;

namespace {

GeneratorSet fermion_gens() {
    return GeneratorSet::from_decls({{"phi", Parity::odd}, {"psi", Parity::odd}});
}

Monomial mono(const GeneratorSet& gs, std::initializer_list<std::pair<const char*, int>> ps) {
    std::vector<GenPower> w;
    for (const auto& [name, d] : ps) {
        int r = gs.rank_of(name);
        REQUIRE(r >= 0);
        w.push_back(GenPower{r, d, gs.odd(r)});
    }
    auto n = normalize_word(w);
    REQUIRE(n.has_value());
    REQUIRE(n->first == 1);
    return n->second;
}

ScalarElement elem(const Monomial& m) { return ScalarElement::term(m, Rational(1)); }

}  // namespace

TEST_CASE("word normalization tracks Koszul signs") {
    GeneratorSet gs = fermion_gens();
    int phi = gs.rank_of("phi"), psi = gs.rank_of("psi");

    auto r = normalize_word({{psi, 0, true}, {phi, 0, true}});
    REQUIRE(r.has_value());
    CHECK(r->first == -1);
    CHECK(r->second == mono(gs, {{"phi", 0}, {"psi", 0}}));

    CHECK_FALSE(normalize_word({{phi, 0, true}, {phi, 0, true}}).has_value());

    auto s = normalize_word({{phi, 1, true}, {phi, 0, true}});
    REQUIRE(s.has_value());
    CHECK(s->first == -1);
    CHECK(s->second == mono(gs, {{"phi", 0}, {"phi", 1}}));
}

TEST_CASE("products") {
    GeneratorSet gs = fermion_gens();
    ScalarElement phi = elem(mono(gs, {{"phi", 0}}));
    ScalarElement psi = elem(mono(gs, {{"psi", 0}}));
    ScalarElement phipsi = elem(mono(gs, {{"phi", 0}, {"psi", 0}}));

    CHECK(mul(phi, psi) == phipsi);
    CHECK(mul(psi, phi) == -phipsi);
    CHECK(mul(phi, phi).is_zero());
    ScalarElement one = elem(Monomial::unit());
    CHECK(mul(one, phipsi) == phipsi);
}

TEST_CASE("coproducts") {
    GeneratorSet gs = fermion_gens();
    Monomial phi = mono(gs, {{"phi", 0}});
    Monomial psi = mono(gs, {{"psi", 0}});
    Monomial phipsi = mono(gs, {{"phi", 0}, {"psi", 0}});
    Monomial one = Monomial::unit();

    SUBCASE("generators are primitive") {
        ScalarTensor2 d = coproduct(phi);
        ScalarTensor2 expect;
        expect.add_term({phi, one}, Rational(1));
        expect.add_term({one, phi}, Rational(1));
        CHECK(d == expect);
    }
    SUBCASE("the unit is grouplike") {
        ScalarTensor2 d = coproduct(one);
        ScalarTensor2 expect;
        expect.add_term({one, one}, Rational(1));
        CHECK(d == expect);
    }
    SUBCASE("coproduct of phi*psi has the signed cross terms") {
        ScalarTensor2 d = coproduct(phipsi);
        ScalarTensor2 expect;
        expect.add_term({phipsi, one}, Rational(1));
        expect.add_term({one, phipsi}, Rational(1));
        expect.add_term({phi, psi}, Rational(1));
        expect.add_term({psi, phi}, Rational(-1));
        CHECK(d == expect);
    }
    SUBCASE("double coproduct of a generator") {
        ScalarTensor3 d = coproduct2(phi);
        ScalarTensor3 expect;
        expect.add_term({phi, one, one}, Rational(1));
        expect.add_term({one, phi, one}, Rational(1));
        expect.add_term({one, one, phi}, Rational(1));
        CHECK(d == expect);
    }
    SUBCASE("double coproduct of phi*psi: the nine-term expansion") {
        // obtained by applying (coproduct (x) id) to the four-term coproduct by hand
        ScalarTensor3 expect;
        expect.add_term({phipsi, one, one}, Rational(1));
        expect.add_term({one, phipsi, one}, Rational(1));
        expect.add_term({one, one, phipsi}, Rational(1));
        expect.add_term({phi, psi, one}, Rational(1));
        expect.add_term({psi, phi, one}, Rational(-1));
        expect.add_term({phi, one, psi}, Rational(1));
        expect.add_term({one, phi, psi}, Rational(1));
        expect.add_term({psi, one, phi}, Rational(-1));
        expect.add_term({one, psi, phi}, Rational(-1));
        CHECK(coproduct2(phipsi) == expect);
    }
}

TEST_CASE("counit and antipode") {
    GeneratorSet gs = fermion_gens();
    ScalarElement phi = elem(mono(gs, {{"phi", 0}}));
    ScalarElement phipsi = elem(mono(gs, {{"phi", 0}, {"psi", 0}}));
    ScalarElement one = elem(Monomial::unit());

    CHECK(counit(one) == Rational(1));
    CHECK(counit(phi) == Rational(0));
    CHECK(counit(one.scaled(Rational(3)) + phipsi) == Rational(3));

    CHECK(antipode(phi) == -phi);
    CHECK(antipode(one) == one);
    // S is an algebra map here (supercommutativity), so the two sign flips cancel
    CHECK(antipode(phipsi) == phipsi);
}

TEST_CASE("divided powers") {
    GeneratorSet gs = fermion_gens();
    ScalarElement phi = elem(mono(gs, {{"phi", 0}}));
    ScalarElement phipsi = elem(mono(gs, {{"phi", 0}, {"psi", 0}}));

    CHECK(d_power(phi, 1) == elem(mono(gs, {{"phi", 1}})));
    CHECK(d_power(phipsi, 0) == phipsi);
    CHECK(d_power(phipsi, 1) ==
          elem(mono(gs, {{"phi", 1}, {"psi", 0}})) + elem(mono(gs, {{"phi", 0}, {"psi", 1}})));

    SUBCASE("divided-power tower") {
        for (const Monomial& m : enumerate_basis(gs, 2, 1)) {
            ScalarElement e = elem(m);
            for (int a = 0; a <= 2; ++a)
                for (int b = 0; b <= 2; ++b) {
                    ScalarElement lhs = d_power(d_power(e, b), a);
                    ScalarElement rhs = d_power(e, a + b).scaled(Rational(binomial(a + b, b)));
                    CHECK(lhs == rhs);
                }
        }
    }
}

TEST_CASE("translation exponentials") {
    GeneratorSet gs = fermion_gens();
    const int T = 2;
    ScalarElement phi = elem(mono(gs, {{"phi", 0}}));
    ScalarElement phipsi = elem(mono(gs, {{"phi", 0}, {"psi", 0}}));
    ScalarElement one = elem(Monomial::unit());

    FnElement e0 = exp_zD(one, Var::z1, 3, T);
    FnElement unitFn;
    unitFn.add_term(Monomial::unit(), RatFn::one(T));
    CHECK(e0 == unitFn);

    FnElement e1 = exp_zD(phi, Var::z1, 2, T);
    FnElement expect;
    expect.add_term(mono(gs, {{"phi", 0}}), RatFn::one(T));
    expect.add_term(mono(gs, {{"phi", 1}}), RatFn::variable(Var::z1, T));
    expect.add_term(mono(gs, {{"phi", 2}}),
                    RatFn::poly(fnring::PolyExact::variable(Var::z1, 2), T));
    CHECK(e1 == expect);

    FnElement e2 = exp_zD(phipsi, Var::z1, 1, T);
    FnElement expect2;
    expect2.add_term(mono(gs, {{"phi", 0}, {"psi", 0}}), RatFn::one(T));
    expect2.add_term(mono(gs, {{"phi", 1}, {"psi", 0}}), RatFn::variable(Var::z1, T));
    expect2.add_term(mono(gs, {{"phi", 0}, {"psi", 1}}), RatFn::variable(Var::z1, T));
    CHECK(e2 == expect2);
}

TEST_CASE("flip and twist") {
    GeneratorSet gs = fermion_gens();
    Monomial phi = mono(gs, {{"phi", 0}});
    Monomial psi = mono(gs, {{"psi", 0}});
    Monomial one = Monomial::unit();

    ScalarTensor2 x;
    x.add_term({phi, psi}, Rational(1));
    ScalarTensor2 flipped;
    flipped.add_term({psi, phi}, Rational(-1));
    CHECK(koszul_flip(x) == flipped);
    CHECK(koszul_flip(koszul_flip(x)) == x);

    ScalarTensor2 y;
    y.add_term({phi, one}, Rational(1));
    ScalarTensor2 yf;
    yf.add_term({one, phi}, Rational(1));
    CHECK(koszul_flip(y) == yf);

    CHECK(koszul_sign_twist(x) == -x);
    CHECK(koszul_sign_twist(koszul_sign_twist(x)) == x);
}

TEST_CASE("Hopf laws on the basis up to degree 3") {
    // include an even generator so multiplicities are exercised too
    GeneratorSet gs = GeneratorSet::from_decls(
        {{"phi", Parity::odd}, {"psi", Parity::odd}, {"a", Parity::even}});
    auto basis = enumerate_basis(gs, 3, 2);

    for (const Monomial& m : basis) {
        ScalarElement e = elem(m);

        // coassociativity
        ScalarTensor3 left, right;
        for (const auto& [k, c] : coproduct(m)) {
            for (const auto& [ab, q] : coproduct(k[0])) left.add_term({ab[0], ab[1], k[1]}, c * q);
            for (const auto& [bc, q] : coproduct(k[1])) right.add_term({k[0], bc[0], bc[1]}, c * q);
        }
        CHECK(left == right);
        CHECK(coproduct2(m) == left);

        // super-cocommutativity
        CHECK(koszul_flip(coproduct(m)) == coproduct(m));

        // counit laws
        ScalarElement fromLeft, fromRight;
        for (const auto& [k, c] : coproduct(m)) {
            if (k[0].is_unit()) fromLeft.add_term(k[1], c);
            if (k[1].is_unit()) fromRight.add_term(k[0], c);
        }
        CHECK(fromLeft == e);
        CHECK(fromRight == e);

        // antipode law: mul (S (x) id) coproduct = counit * 1
        ScalarElement sLeft, sRight;
        for (const auto& [k, c] : coproduct(m)) {
            sLeft += mul(antipode(elem(k[0])), elem(k[1])).scaled(c);
            sRight += mul(elem(k[0]), antipode(elem(k[1]))).scaled(c);
        }
        ScalarElement eta;
        eta.add_term(Monomial::unit(), counit(e));
        CHECK(sLeft == eta);
        CHECK(sRight == eta);
    }

    SUBCASE("coproduct is an algebra map for the Koszul tensor product") {
        auto small = enumerate_basis(gs, 2, 1);
        for (const Monomial& a : small)
            for (const Monomial& b : small) {
                auto prod = mul_monomials(a, b);
                ScalarTensor2 lhs;
                if (prod) {
                    for (const auto& [k, c] : coproduct(prod->second))
                        lhs.add_term(k, c * Rational(prod->first));
                }
                CHECK(lhs == tensor_mul(coproduct(a), coproduct(b)));
            }
    }
}

TEST_CASE("even generators carry multiplicities") {
    GeneratorSet gs = GeneratorSet::from_decls({{"a", Parity::even}});
    int a = gs.rank_of("a");
    auto sq = normalize_word({{a, 0, false}, {a, 0, false}});
    REQUIRE(sq.has_value());
    CHECK(sq->first == 1);
    CHECK(sq->second.factors().size() == 1);
    CHECK(sq->second.factors()[0].mult == 2);

    // binomial coproduct
    ScalarTensor2 d = coproduct(sq->second);
    Monomial one = Monomial::unit();
    Monomial a1 = normalize_word({{a, 0, false}})->second;
    ScalarTensor2 expect;
    expect.add_term({sq->second, one}, Rational(1));
    expect.add_term({one, sq->second}, Rational(1));
    expect.add_term({a1, a1}, Rational(2));
    CHECK(d == expect);
    CHECK(antipode_sign(sq->second) == 1);
}

TEST_CASE("element printing") {
    GeneratorSet gs = fermion_gens();
    ScalarElement e = elem(mono(gs, {{"phi", 0}, {"psi", 1}})).scaled(Rational(3)) +
                      elem(Monomial::unit()).scaled(Rational(1, 2));
    CHECK(e.str(gs) == "1/2 + 3*phi[0]*psi[1]");
    CHECK(elem(mono(gs, {{"phi", 0}})).str(gs) == "phi[0]");
    CHECK(ScalarElement().str(gs) == "0");
}
