// Acceptance suite: every criterion is exact-symbolic or property-based and
// prints one PASS/FAIL line. The whole suite stays well under a minute.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <set>

#include "qvaforge/modelio.hpp"
#include "qvaforge/qva.hpp"
#include "testutil.hpp"

using namespace qvaforge;
using namespace qvaforge::qva;
using namespace qvftest;
using fnring::LaurentExp;
using fnring::PoleFactor;
using superhopf::FnElement;
using superhopf::Monomial;
using superhopf::ScalarElement;

namespace {

constexpr int T = 3;
constexpr int M = 3;

Model builtin(const std::string& name) {
    modelio::ModelDoc doc = modelio::builtin_doc(name, T);
    doc.d_trunc = M;
    return modelio::load_model(doc);
}

std::vector<Model> all_builtins() {
    std::vector<Model> out;
    for (const auto& name : modelio::builtin_names()) out.push_back(builtin(name));
    return out;
}

void verdict(int criterion, const std::string& what, bool pass) {
    std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str());
    CHECK_MESSAGE(pass, "criterion ", criterion, ": ", what);
}

FnElement vacuum_element(int t) {
    FnElement e;
    e.add_term(Monomial::unit(), RatFn::one(t));
    return e;
}

/// independent oracle: residue_diagonal applied to the z3 = 0 three-point map
FnElement residue_oracle(const Model& m, const ScalarElement& a, const ScalarElement& b,
                         const ScalarElement& c, int n) {
    FnElement out;
    FnElement state = x3_at_z3zero(m, a, b, c);
    for (const auto& [mono, coef] : state.terms())
        out.add_term(mono, fnring::residue_diagonal(coef, Var::z1, Var::z2, n));
    return out;
}

}  // namespace

TEST_CASE("acceptance") {
    Model fermion = builtin("charged_free_fermion");
    const auto& gs = *fermion.gens;
    Monomial phi = mono(gs, {{"phi", 0}});
    Monomial psi = mono(gs, {{"psi", 0}});
    Monomial phipsi = mono(gs, {{"phi", 0}, {"psi", 0}});

    // 1. fermion OPE golden
    {
        OPEData d = ope(fermion, elem(phi), elem(psi));
        bool ok = d.singular.size() == 1 && d.singular.count(0) == 1 &&
                  d.singular.at(0) == vacuum_element(T);
        ok = ok && ope(fermion, elem(phi), elem(phi)).singular.empty();
        ok = ok && ope(fermion, elem(psi), elem(psi)).singular.empty();
        verdict(1, "fermion OPE: phi x psi ~ vacuum at pole 1; phi x phi and psi x psi regular",
                ok);
    }

    // 2. normal-ordered golden
    {
        FnElement expect;
        expect.add_term(phipsi, RatFn::one(T));
        verdict(2, "normal ordered product of the generating pair is phi[0]*psi[0]",
                nop(fermion, elem(phi), elem(psi)) == expect);
    }

    // 3. Heisenberg property with the diagonal-expansion oracle
    {
        OPEData d = ope(fermion, elem(phipsi), elem(phipsi));
        bool ok = d.singular.size() == 2 && d.singular.count(1) && d.singular.count(0) &&
                  d.singular.at(1) == vacuum_element(T) && d.singular.at(0).is_zero();
        for (const Monomial& c : superhopf::enumerate_basis(gs, 2, 1)) {
            FnElement o1 = residue_oracle(fermion, elem(phipsi), elem(phipsi), elem(c), 1);
            ok = ok && !first_difference(o1, fermion.lift(c), M, gs).has_value();
            FnElement o0 = residue_oracle(fermion, elem(phipsi), elem(phipsi), elem(c), 0);
            ok = ok && filter_ddeg(o0, M).is_zero();
        }
        verdict(3, "phi[0]*psi[0] is a Heisenberg field (pole 2 vacuum, pole 1 zero; oracle-checked)",
                ok);
    }

    // 4. braided symmetry on all builtins
    {
        bool ok = true;
        for (const Model& m : all_builtins()) {
            CheckArgs args;
            args.degree_bound = 2;
            args.ddeg_bound = 2;
            ok = ok && check_axiom(m, Axiom::braided_symmetry, args).all_pass();
        }
        verdict(4, "braided symmetry, pairs of length <= 2 and ddeg <= 2, all builtins (T=3, M=3)",
                ok);
    }

    // 5. Yang-Baxter on all builtins
    {
        bool ok = true;
        for (const Model& m : all_builtins())
            ok = ok && check_axiom(m, Axiom::yang_baxter).all_pass();
        verdict(5, "Yang-Baxter on all generator triples, all builtins", ok);
    }

    // 6. convolution group certification
    {
        bool ok = true;
        auto pairs = superhopf::enumerate_basis(gs, 2, 2);
        for (const Model& m : all_builtins()) {
            bichar::Bicharacter rinv = bichar::inverse(m.r);
            bichar::Bicharacter rr = bichar::convolve(m.r, m.r);
            bichar::Bicharacter unitB = bichar::convolve(m.r, rinv);
            for (const Monomial& a : pairs)
                for (const Monomial& b : pairs) {
                    ok = ok && bichar::eval(rr, a, b) == bichar::convolve_pointwise(m.r, m.r, a, b);
                    ok = ok && bichar::eval(unitB, a, b) ==
                                   bichar::convolve_pointwise(m.r, rinv, a, b);
                    ok = ok && bichar::eval(rinv, a, b) ==
                                   bichar::eval(m.r, superhopf::antipode(elem(a)), elem(b));
                    RatFn eta = a.is_unit() && b.is_unit() ? RatFn::one(T) : RatFn::zero(T);
                    ok = ok && bichar::eval(unitB, a, b) == eta;
                    if (!ok) break;
                }
        }
        verdict(6, "table convolve/inverse certified against the pointwise definitions; r * r^-1 = eta x eta",
                ok);
    }

    // 7. residue formula against the expansion oracle
    {
        bool ok = true;
        auto bs = superhopf::enumerate_basis(gs, 2, 1);
        std::vector<Monomial> cs{Monomial::unit(), psi, phipsi};
        for (const Model& m : all_builtins()) {
            int triples = 0;
            for (const Monomial& a : bs) {
                if (a.is_unit()) continue;
                for (const Monomial& b : bs) {
                    if (b.is_unit()) continue;
                    for (const Monomial& c : cs) {
                        ++triples;
                        for (int n = 0; n <= T; ++n) {
                            FnElement closed = residue(m, elem(a), elem(b), elem(c), n);
                            FnElement oracle = residue_oracle(m, elem(a), elem(b), elem(c), n);
                            if (first_difference(closed, oracle, M, gs)) ok = false;
                        }
                    }
                    if (triples >= 30) break;
                }
                if (triples >= 30) break;
            }
            ok = ok && triples >= 25;
        }
        verdict(7, "closed residue formula = diagonal-expansion oracle, 30 triples per builtin, all n <= 3",
                ok);
    }

    // 8. Hopf axiom suite to degree 3
    {
        bool ok = true;
        auto basis = superhopf::enumerate_basis(gs, 3, 3);
        for (const Monomial& a : basis) {
            superhopf::ScalarTensor3 left, right;
            for (const auto& [k, c] : superhopf::coproduct(a)) {
                for (const auto& [ab, q] : superhopf::coproduct(k[0]))
                    left.add_term({ab[0], ab[1], k[1]}, c * q);
                for (const auto& [bc, q] : superhopf::coproduct(k[1]))
                    right.add_term({k[0], bc[0], bc[1]}, c * q);
            }
            ok = ok && left == right;
            ok = ok && superhopf::koszul_flip(superhopf::coproduct(a)) == superhopf::coproduct(a);

            ScalarElement ea = elem(a);
            ScalarElement fromLeft, fromRight, sLeft, sRight;
            for (const auto& [k, c] : superhopf::coproduct(a)) {
                if (k[0].is_unit()) fromLeft.add_term(k[1], c);
                if (k[1].is_unit()) fromRight.add_term(k[0], c);
                sLeft += superhopf::mul(superhopf::antipode(elem(k[0])), elem(k[1])).scaled(c);
                sRight += superhopf::mul(elem(k[0]), superhopf::antipode(elem(k[1]))).scaled(c);
            }
            ScalarElement eta;
            eta.add_term(Monomial::unit(), superhopf::counit(ea));
            ok = ok && fromLeft == ea && fromRight == ea && sLeft == eta && sRight == eta;
        }
        auto small = superhopf::enumerate_basis(gs, 2, 1);
        for (const Monomial& a : small)
            for (const Monomial& b : small) {
                auto prod = superhopf::mul_monomials(a, b);
                superhopf::ScalarTensor2 lhs;
                if (prod)
                    for (const auto& [k, c] : superhopf::coproduct(prod->second))
                        lhs.add_term(k, c * Rational(prod->first));
                ok = ok && lhs == superhopf::tensor_mul(superhopf::coproduct(a),
                                                        superhopf::coproduct(b));
            }
        verdict(8, "coassociativity, cocommutativity, counit, antipode and Koszul multiplicativity to degree 3",
                ok);
    }

    // 9. locality exponents
    {
        auto cs = superhopf::enumerate_basis(gs, 2, 1);
        LocalityResult fr = locality_exponent(fermion, elem(phi), elem(psi), cs, 2, 6);
        bool ok = fr.found && fr.exponent == 1;

        Model ek = builtin("fermion_ek");
        LocalityResult er =
            locality_exponent(ek, elem(phi), elem(psi), superhopf::enumerate_basis(gs, 1, 1), 3, 6);
        ok = ok && er.found && er.exponent <= 6;
        verdict(9, "locality: fermion N = 1; fermion_ek finite N <= 6 mod t^3 (found N = " +
                       std::to_string(er.exponent) + ")",
                ok);
    }

    // 10. classification labels
    {
        bool ok = bichar::classify(builtin("charged_free_fermion").r) ==
                  bichar::QvaClass::ClassicalSuperVA;
        ok = ok && bichar::classify(builtin("fermion_ek").r) == bichar::QvaClass::EKQuantumVA;
        ok = ok &&
             bichar::classify(builtin("fermion_essential").r) == bichar::QvaClass::EKQuantumVA;
        ok = ok && bichar::classify(builtin("fermion_hd").r) == bichar::QvaClass::HDQuantumVA;
        verdict(10, "classification: fermion classical, ek/essential EK, hd H_D", ok);
    }

    // 11. expansion kernel to order 5
    {
        RatFn f = inv_d12(T);
        LaurentExp a = fnring::iota_expand(f, Var::z1, Var::z2, 5);
        LaurentExp b = fnring::iota_expand(f, Var::z2, Var::z1, 5);
        bool ok = true;
        for (int n = 0; n <= 5; ++n) {
            ok = ok && a.coeff(n) == pole(PoleFactor::z1, n + 1, T);
            ok = ok && b.coeff(n) == -pole(PoleFactor::z2, n + 1, T);
        }
        PolyExact diff = PolyExact::variable(Var::z1) - PolyExact::variable(Var::z2);
        for (const LaurentExp& e : {a, b}) {
            LaurentExp prod = fnring::laurent_mul_ratfn(e, RatFn::poly(diff, T));
            for (int p = -prod.low_trunc; p <= prod.high_trunc; ++p)
                ok = ok && (p == 0 ? prod.coeff(p).is_one() : prod.coeff(p).is_zero());
        }
        verdict(11, "iota expansions of 1/(z1-z2) match the two series to order 5; (z1-z2)*expansion = 1",
                ok);
    }

    // 12. extension-order consistency to degree 3
    {
        bool ok = true;
        auto basis = superhopf::enumerate_basis(gs, 3, 2);
        for (const Model& m : all_builtins())
            for (const Monomial& a : basis)
                for (const Monomial& b : basis) {
                    RatFn left = bichar::eval(m.r, a, b, bichar::EvalOrder::left_first);
                    RatFn right = bichar::eval(m.r, a, b, bichar::EvalOrder::right_first);
                    if (!(left == right)) ok = false;
                }
        verdict(12, "multleft-first and multright-first extensions agree to degree 3, all builtins",
                ok);
    }
}
