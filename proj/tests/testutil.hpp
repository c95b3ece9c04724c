#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "qvaforge/bichar.hpp"
#include "qvaforge/fnring.hpp"
#include "qvaforge/superhopf.hpp"

namespace qvftest {

using namespace qvaforge;
using fnring::DenomProfile;
using fnring::PoleFactor;
using fnring::PolyExact;
using fnring::RatFn;
using fnring::Var;
using superhopf::GeneratorSet;
using superhopf::GeneratorSetPtr;
using superhopf::GenPower;
using superhopf::Monomial;
using superhopf::Parity;
using superhopf::ScalarElement;

inline GeneratorSetPtr fermion_gens() {
    return std::make_shared<const GeneratorSet>(
        GeneratorSet::from_decls({{"phi", Parity::odd}, {"psi", Parity::odd}}));
}

inline RatFn pole(PoleFactor f, int e, int T) {
    DenomProfile d;
    d.exp[fnring::fidx(f)] = e;
    return RatFn::fraction(PolyExact::constant(Rational(1)), d, T);
}

inline RatFn inv_d12(int T) { return pole(PoleFactor::d12, 1, T); }

/// The charged-fermion pairing: 1/(z1-z2) between the two odd generators,
/// zero on the diagonal pairs.
inline bichar::Bicharacter fermion_bichar(const GeneratorSetPtr& gens, int T) {
    bichar::Bicharacter r(gens, T, fnring::RingProfile::w2());
    int phi = gens->rank_of("phi");
    int psi = gens->rank_of("psi");
    r.set_entry(phi, psi, inv_d12(T));
    r.set_entry(psi, phi, inv_d12(T));
    r.set_entry(phi, phi, RatFn::zero(T));
    r.set_entry(psi, psi, RatFn::zero(T));
    return r;
}

inline bichar::Bicharacter identity_table(const GeneratorSetPtr& gens, int T) {
    return bichar::identity_bicharacter(gens, T);
}

/// fermion entry plus t/z1 on (phi, psi) only; braiding and translation both
/// become nontrivial.
inline bichar::Bicharacter hd_deformed_bichar(const GeneratorSetPtr& gens, int T) {
    bichar::Bicharacter r = fermion_bichar(gens, T);
    int phi = gens->rank_of("phi");
    int psi = gens->rank_of("psi");
    r.set_entry(phi, psi, inv_d12(T) + RatFn::t_power(1, T) * pole(PoleFactor::z1, 1, T));
    return r;
}

/// symmetric-slot entries 1/(z1-z2-t), expanded t-adically.
inline bichar::Bicharacter ek_bichar(const GeneratorSetPtr& gens, int T) {
    bichar::Bicharacter r = fermion_bichar(gens, T);
    RatFn den = RatFn::poly(PolyExact::variable(Var::z1) - PolyExact::variable(Var::z2), T) -
                RatFn::t_power(1, T);
    RatFn entry = RatFn::div(RatFn::one(T), den);
    r.set_entry(gens->rank_of("phi"), gens->rank_of("psi"), entry);
    r.set_entry(gens->rank_of("psi"), gens->rank_of("phi"), entry);
    return r;
}

inline Monomial mono(const GeneratorSet& gs,
                     std::initializer_list<std::pair<const char*, int>> ps) {
    std::vector<GenPower> w;
    for (const auto& [name, d] : ps) {
        int rank = gs.rank_of(name);
        w.push_back(GenPower{rank, d, gs.odd(rank)});
    }
    auto n = superhopf::normalize_word(w);
    return n->second;
}

inline ScalarElement elem(const Monomial& m) { return ScalarElement::term(m, Rational(1)); }

}  // namespace qvftest
