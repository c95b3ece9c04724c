#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qvaforge/qva.hpp"
#include "testutil.hpp"

using namespace qvaforge;
using namespace qvaforge::qva;
using namespace qvftest;
using fnring::PoleFactor;
using superhopf::FnElement;
using superhopf::FnTensor2;

namespace {

constexpr int T = 3;
constexpr int M = 3;

Model fermion_model(int bound = 2) {
    return Model::make(fermion_bichar(fermion_gens(), T), M, bound, true, "fermion");
}

Model identity_model(int bound = 2) {
    return Model::make(identity_table(fermion_gens(), T), M, bound, true, "identity");
}

Model hd_model(int bound = 2) {
    return Model::make(hd_deformed_bichar(fermion_gens(), T), M, bound, true, "hd");
}

Model ek_model(int bound = 2) {
    return Model::make(ek_bichar(fermion_gens(), T), M, bound, true, "ek");
}

FnElement lift1(const Model& m, const Monomial& mono) { return m.lift(mono); }

/// independent oracle: apply residue_diagonal to every coefficient of the
/// z3 = 0 specialization of the three-point map
FnElement residue_oracle(const Model& m, const ScalarElement& a, const ScalarElement& b,
                         const ScalarElement& c, int n) {
    FnElement out;
    FnElement state = x3_at_z3zero(m, a, b, c);
    for (const auto& [mono, coef] : state.terms())
        out.add_term(mono, fnring::residue_diagonal(coef, Var::z1, Var::z2, n));
    return out;
}

/// independent oracle for the normal ordered product: the constant term of the
/// diagonal expansion of the two-field state
FnElement nop_oracle(const Model& m, const ScalarElement& a, const ScalarElement& b,
                     const ScalarElement& c) {
    FnElement out;
    FnElement state = x3_at_z3zero(m, a, b, c);
    for (const auto& [mono, coef] : state.terms()) {
        int P = std::max(1, fnring::diagonal_pole_order(coef, Var::z1, Var::z2));
        out.add_term(mono, fnring::diagonal_expand(coef, Var::z1, Var::z2, P, 0).coeff(0));
    }
    return out;
}

}  // namespace

TEST_CASE("S-maps") {
    Model fm = fermion_model();
    Model im = identity_model();
    const auto& gs = *fm.gens;
    Monomial phi = mono(gs, {{"phi", 0}});
    Monomial psi = mono(gs, {{"psi", 0}});
    Monomial one = Monomial::unit();

    SUBCASE("the identity bicharacter collapses to the plain tensor") {
        FnTensor2 s = smap(im.r, elem(phi), elem(psi));
        FnTensor2 expect;
        expect.add_term({phi, psi}, RatFn::one(T));
        CHECK(s == expect);
    }
    SUBCASE("the fermion braiding is the identity map") {
        FnTensor2 s = smap(fm.braid, elem(phi), elem(psi));
        FnTensor2 expect;
        expect.add_term({phi, psi}, RatFn::one(T));
        CHECK(s == expect);
    }
    SUBCASE("smap with the fermion pairing keeps the singular scalar part") {
        FnTensor2 s = smap(fm.r, elem(phi), elem(psi));
        FnTensor2 expect;
        expect.add_term({phi, psi}, RatFn::one(T));
        expect.add_term({one, one}, inv_d12(T));
        CHECK(s == expect);
    }
    SUBCASE("the structure braiding carries the Koszul twist") {
        FnTensor2 s = s_tau(fm, elem(phi), elem(psi));
        FnTensor2 expect;
        expect.add_term({phi, psi}, -RatFn::one(T));
        CHECK(s == expect);
    }
    SUBCASE("a shift-invariant pairing has the identity translation map") {
        for (const Monomial& a : superhopf::enumerate_basis(gs, 2, 1))
            for (const Monomial& b : superhopf::enumerate_basis(gs, 2, 1)) {
                FnTensor2 s = s_gamma(fm, elem(a), elem(b));
                FnTensor2 expect;
                expect.add_term({a, b}, RatFn::one(T));
                CHECK(s == expect);
            }
    }
    SUBCASE("S-map outputs preserve total parity") {
        Model hm = hd_model();
        for (const Monomial& a : superhopf::enumerate_basis(gs, 2, 1))
            for (const Monomial& b : superhopf::enumerate_basis(gs, 2, 1)) {
                FnTensor2 st = s_tau(hm, elem(a), elem(b));
                for (const auto& [k, v] : st.terms())
                    CHECK((k[0].parity() + k[1].parity()) % 2 == (a.parity() + b.parity()) % 2);
                FnTensor2 sg = s_gamma(hm, elem(a), elem(b));
                for (const auto& [k, v] : sg.terms())
                    CHECK((k[0].parity() + k[1].parity()) % 2 == (a.parity() + b.parity()) % 2);
            }
    }
}

TEST_CASE("two-point multiplication map") {
    Model fm = fermion_model();
    Model im = identity_model();
    const auto& gs = *fm.gens;
    Monomial phi = mono(gs, {{"phi", 0}});
    Monomial psi = mono(gs, {{"psi", 0}});
    ScalarElement unit = elem(Monomial::unit());

    SUBCASE("vacuum collapse") {
        for (const Monomial& a : superhopf::enumerate_basis(gs, 2, 2)) {
            CHECK(x2(fm, elem(a), unit).value == superhopf::exp_zD(elem(a), Var::z1, M, T));
            CHECK(x2(fm, unit, elem(a)).value == superhopf::exp_zD(elem(a), Var::z2, M, T));
        }
    }
    SUBCASE("fermion pair: exponential product plus the vacuum pole") {
        // hand expansion at M = 1 of the singular multiplication
        Model fm1 = Model::make(fermion_bichar(fermion_gens(), T), 1, 2, true, "fermion-m1");
        FnElement got = x2(fm1, elem(phi), elem(psi)).value;
        FnElement expect;
        expect.add_term(Monomial::unit(), inv_d12(T));
        expect.add_term(mono(gs, {{"phi", 0}, {"psi", 0}}), RatFn::one(T));
        expect.add_term(mono(gs, {{"phi", 1}, {"psi", 0}}), RatFn::variable(Var::z1, T));
        expect.add_term(mono(gs, {{"phi", 0}, {"psi", 1}}), RatFn::variable(Var::z2, T));
        expect.add_term(mono(gs, {{"phi", 1}, {"psi", 1}}),
                        RatFn::poly(PolyExact::variable(Var::z1) * PolyExact::variable(Var::z2), T));
        CHECK(got == expect);
    }
    SUBCASE("identity pairing: pure exponential product") {
        FnElement got = x2(im, elem(phi), elem(psi)).value;
        FnElement expect = superhopf::mul(superhopf::exp_zD(elem(phi), Var::z1, M, T),
                                          superhopf::exp_zD(elem(psi), Var::z2, M, T));
        CHECK(got == expect);
    }
    SUBCASE("coefficients stay in the X codomain") {
        fnring::RingProfile x2prof;
        x2prof.allowed[fnring::fidx(PoleFactor::z1)] = true;
        x2prof.allowed[fnring::fidx(PoleFactor::d12)] = true;
        for (const Monomial& a : superhopf::enumerate_basis(gs, 2, 1))
            for (const Monomial& b : superhopf::enumerate_basis(gs, 2, 1))
                {
                    XResult xr = x2(fm, elem(a), elem(b));
                    for (const auto& [mono2, coef] : xr.value.terms()) CHECK(coef.member(x2prof));
                }
    }
}

TEST_CASE("three-point multiplication map") {
    Model fm = fermion_model();
    const auto& gs = *fm.gens;
    Monomial phi = mono(gs, {{"phi", 0}});
    Monomial psi = mono(gs, {{"psi", 0}});
    ScalarElement unit = elem(Monomial::unit());

    SUBCASE("vacuum collapse") {
        for (const Monomial& a : superhopf::enumerate_basis(gs, 2, 1))
            CHECK(x3(fm, elem(a), unit, unit).value == superhopf::exp_zD(elem(a), Var::z1, M, T));
    }

    SUBCASE("iterated vertex operators expand the three-point map") {
        // certifies the choice e^{z3 D} in the third slot
        for (const Monomial& c : {Monomial::unit(), psi, mono(gs, {{"phi", 0}, {"psi", 0}})}) {
            FnElement inner = y_apply(fm, lift1(fm, psi), lift1(fm, c), Var::z2);
            FnElement iterated = filter_ddeg(y_apply(fm, lift1(fm, phi), inner, Var::z1), M);
            FnElement threept = filter_ddeg(x3_at_z3zero(fm, elem(phi), elem(psi), elem(c)), M);

            std::set<Monomial> monos;
            for (const auto& [mn, q] : iterated.terms()) monos.insert(mn);
            for (const auto& [mn, q] : threept.terms()) monos.insert(mn);
            for (const Monomial& mn : monos) {
                RatFn fl = iterated.terms().count(mn) ? iterated.terms().at(mn) : RatFn::zero(T);
                RatFn fr = threept.terms().count(mn) ? threept.terms().at(mn) : RatFn::zero(T);
                auto el = fnring::iota_expand(fl, Var::z1, Var::z2, M);
                auto er = fnring::iota_expand(fr, Var::z1, Var::z2, M);
                // the iterated route is an expansion truncated at inner power M;
                // compare on the window where both routes are complete
                int lo = -std::max(el.low_trunc, er.low_trunc);
                int hi = M - std::max(el.low_trunc, er.low_trunc);
                REQUIRE(lo <= hi);
                CHECK(fnring::laurent_equal_on(el, er, lo, hi, T));
            }
        }
    }

    SUBCASE("the five-term two-field state on a generator") {
        // X_{z1,z2,0}(phi (x) psi (x) psi) expanded by hand at M = 1: the
        // surviving contributions are the pairing term, the double
        // exponential, and the single contraction against the third slot
        Model fm1 = Model::make(fermion_bichar(fermion_gens(), T), 1, 2, true, "fermion-m1");
        FnElement got = x3_at_z3zero(fm1, elem(phi), elem(psi), elem(psi));
        FnElement expect;
        fnring::DenomProfile z1d12;
        z1d12.exp[fnring::fidx(PoleFactor::z1)] = 1;
        z1d12.exp[fnring::fidx(PoleFactor::d12)] = 1;
        expect.add_term(psi, RatFn::fraction(PolyExact::variable(Var::z2), z1d12, T));
        expect.add_term(mono(gs, {{"psi", 1}}),
                        -RatFn::fraction(PolyExact::variable(Var::z2),
                                         fnring::DenomProfile{{1, 0, 0, 0, 0, 0, 0, 0, 0}}, T));
        expect.add_term(mono(gs, {{"phi", 0}, {"psi", 0}, {"psi", 1}}),
                        -RatFn::variable(Var::z2, T));
        expect.add_term(mono(gs, {{"phi", 1}, {"psi", 0}, {"psi", 1}}),
                        -RatFn::poly(PolyExact::variable(Var::z1) * PolyExact::variable(Var::z2), T));
        CHECK(got == expect);
    }

    SUBCASE("z3 = 0 coefficients live in the two-variable codomain") {
        fnring::RingProfile prof;
        prof.allowed[fnring::fidx(PoleFactor::z1)] = true;
        prof.allowed[fnring::fidx(PoleFactor::z2)] = true;
        prof.allowed[fnring::fidx(PoleFactor::d12)] = true;
        FnElement state = x3_at_z3zero(fm, elem(phi), elem(psi), elem(psi));
        for (const auto& [mono3, coef] : state.terms()) CHECK(coef.member(prof));
    }
}

TEST_CASE("residues") {
    Model fm = fermion_model();
    const auto& gs = *fm.gens;
    Monomial phi = mono(gs, {{"phi", 0}});
    Monomial psi = mono(gs, {{"psi", 0}});

    SUBCASE("fermion pair reproduces the test vector") {
        for (const Monomial& c : superhopf::enumerate_basis(gs, 2, 1)) {
            FnElement got = residue(fm, elem(phi), elem(psi), elem(c), 0);
            CHECK(first_difference(got, lift1(fm, c), M, gs) == std::nullopt);
            CHECK(residue(fm, elem(phi), elem(psi), elem(c), 1).is_zero());
            CHECK(residue(fm, elem(phi), elem(phi), elem(c), 0).is_zero());
        }
    }

    SUBCASE("closed formula matches the diagonal-expansion oracle") {
        std::vector<Model> models;
        models.push_back(fermion_model());
        models.push_back(identity_model());
        models.push_back(hd_model());
        models.push_back(ek_model());
        auto bs = superhopf::enumerate_basis(gs, 2, 1);
        for (const Model& m : models) {
            int checked = 0;
            for (const Monomial& a : bs)
                for (const Monomial& b : bs) {
                    if (a.is_unit() || b.is_unit()) continue;
                    if (checked >= 8) break;
                    ++checked;
                    for (const Monomial& c : {Monomial::unit(), psi}) {
                        for (int n = 0; n <= 2; ++n) {
                            FnElement closed = residue(m, elem(a), elem(b), elem(c), n);
                            FnElement oracle = residue_oracle(m, elem(a), elem(b), elem(c), n);
                            CHECK(first_difference(closed, oracle, M, gs) == std::nullopt);
                        }
                    }
                }
        }
    }
}

TEST_CASE("operator product expansion and normal ordered product") {
    Model fm = fermion_model();
    Model im = identity_model();
    const auto& gs = *fm.gens;
    Monomial phi = mono(gs, {{"phi", 0}});
    Monomial psi = mono(gs, {{"psi", 0}});
    Monomial phipsi = mono(gs, {{"phi", 0}, {"psi", 0}});

    SUBCASE("fermion pair: single simple pole with vacuum coefficient") {
        OPEData d = ope(fm, elem(phi), elem(psi));
        REQUIRE(d.singular.size() == 1);
        CHECK(d.singular.count(0) == 1);
        FnElement expect;
        expect.add_term(Monomial::unit(), RatFn::one(T));
        CHECK(d.singular.at(0) == expect);
    }
    SUBCASE("diagonal pairs are regular") {
        CHECK(ope(fm, elem(phi), elem(phi)).singular.empty());
        CHECK(ope(fm, elem(psi), elem(psi)).singular.empty());
    }
    SUBCASE("normal ordered golden") {
        FnElement expect;
        expect.add_term(phipsi, RatFn::one(T));
        CHECK(nop(fm, elem(phi), elem(psi)) == expect);
    }
    SUBCASE("identity pairing: normal ordering is the algebra product") {
        for (const Monomial& a : superhopf::enumerate_basis(gs, 2, 1))
            for (const Monomial& b : superhopf::enumerate_basis(gs, 2, 1)) {
                FnElement expect;
                auto prod = superhopf::mul_monomials(a, b);
                if (prod)
                    expect.add_term(prod->second, RatFn::constant(Rational(prod->first), T));
                CHECK(nop(im, elem(a), elem(b)) == expect);
            }
    }
    SUBCASE("the composite fermion bilinear is a Heisenberg field") {
        OPEData d = ope(fm, elem(phipsi), elem(phipsi));
        REQUIRE(d.singular.size() == 2);
        FnElement vac;
        vac.add_term(Monomial::unit(), RatFn::one(T));
        CHECK(d.singular.at(1) == vac);
        CHECK(d.singular.at(0).is_zero());
    }
    SUBCASE("normal ordered product against the diagonal constant-term oracle") {
        for (const auto& [a, b] :
             std::vector<std::pair<Monomial, Monomial>>{{phi, psi}, {phi, phi}, {phipsi, phi}}) {
            for (const Monomial& c : {Monomial::unit(), psi, phipsi}) {
                FnElement viaFormula =
                    y_apply(fm, nop(fm, elem(a), elem(b)), lift1(fm, c), Var::z2);
                FnElement oracle = nop_oracle(fm, elem(a), elem(b), elem(c));
                CHECK(first_difference(viaFormula, oracle, M, gs) == std::nullopt);
            }
        }
    }
}

TEST_CASE("axiom checks on the fermion model") {
    Model fm = fermion_model();

    SUBCASE("vacuum") { CHECK(check_axiom(fm, Axiom::vacuum).all_pass()); }
    SUBCASE("hd covariance") { CHECK(check_axiom(fm, Axiom::hd_covariance).all_pass()); }
    SUBCASE("yang baxter") { CHECK(check_axiom(fm, Axiom::yang_baxter).all_pass()); }
    SUBCASE("group properties") { CHECK(check_axiom(fm, Axiom::group_properties).all_pass()); }
    SUBCASE("braided symmetry") { CHECK(check_axiom(fm, Axiom::braided_symmetry).all_pass()); }
    SUBCASE("compatibility") { CHECK(check_axiom(fm, Axiom::compatibility).all_pass()); }
    SUBCASE("locality finds the classical exponent") {
        const auto& gs = *fm.gens;
        auto cs = superhopf::enumerate_basis(gs, 2, 1);
        LocalityResult res = locality_exponent(fm, elem(mono(gs, {{"phi", 0}})),
                                               elem(mono(gs, {{"psi", 0}})), cs, 2, 6);
        REQUIRE(res.found);
        CHECK(res.exponent == 1);
        LocalityResult res2 = locality_exponent(fm, elem(mono(gs, {{"phi", 0}})),
                                                elem(mono(gs, {{"phi", 0}})), cs, 2, 6);
        REQUIRE(res2.found);
        CHECK(res2.exponent == 0);
    }
}

TEST_CASE("axiom checks on deformed models") {
    SUBCASE("hd-deformed model") {
        Model hm = hd_model();
        CHECK(check_axiom(hm, Axiom::vacuum).all_pass());
        CHECK(check_axiom(hm, Axiom::yang_baxter).all_pass());
        CHECK(check_axiom(hm, Axiom::group_properties).all_pass());
        CHECK(check_axiom(hm, Axiom::braided_symmetry).all_pass());
        CHECK(check_axiom(hm, Axiom::hd_covariance).all_pass());
        CHECK(check_axiom(hm, Axiom::compatibility).all_pass());
    }
    SUBCASE("ek model locality is finite mod t^3") {
        Model em = ek_model();
        const auto& gs = *em.gens;
        auto cs = superhopf::enumerate_basis(gs, 1, 1);
        LocalityResult res = locality_exponent(em, elem(mono(gs, {{"phi", 0}})),
                                               elem(mono(gs, {{"psi", 0}})), cs, 3, 6);
        REQUIRE(res.found);
        CHECK(res.exponent <= 6);
        CHECK(res.exponent == 3);
    }
    SUBCASE("ek model braided symmetry") {
        Model em = ek_model();
        CHECK(check_axiom(em, Axiom::braided_symmetry).all_pass());
        CHECK(check_axiom(em, Axiom::group_properties).all_pass());
    }
}
