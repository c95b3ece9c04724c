#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qvaforge/bichar.hpp"
#include "qvaforge/fnring.hpp"
#include "qvaforge/superhopf.hpp"

namespace qvaforge::qva {

using bichar::Bicharacter;
using fnring::RatFn;
using fnring::Var;
using superhopf::FnElement;
using superhopf::FnTensor2;
using superhopf::FnTensor3;
using superhopf::GeneratorSetPtr;
using superhopf::Monomial;
using superhopf::ScalarElement;

// ---------------------------------------------------------------------------
// Model
// ---------------------------------------------------------------------------

/// A validated bicharacter together with its derived braiding/translation
/// tables and the truncation configuration.
struct Model {
    GeneratorSetPtr gens;
    Bicharacter r;
    Bicharacter braid;  // r^{-1} * r^tau
    Bicharacter trans;  // r^{-1} * r^gamma
    int t_trunc = 4;
    int d_trunc = 3;
    int degree_bound = 2;
    bool compose_twist = true;
    std::string name;

    /// Validates r up to degree_bound and precomputes the derived tables.
    static Model make(Bicharacter r, int d_trunc, int degree_bound, bool compose_twist,
                      std::string name);

    FnElement lift(const ScalarElement& e) const;
    FnElement lift(const Monomial& m) const;
};

struct XResult {
    FnElement value;
    int d_trunc;
    int t_trunc;
};

/// Exact singular data of Y(a,z)Y(b,w): for each pole order n+1 the
/// Y-argument element (coefficients may depend on w = z2), plus the
/// normal-ordered element from the k = -1 constant term.
struct OPEData {
    std::map<int, FnElement> singular;  // n -> argument of Y at 1/(z-w)^{n+1}
    FnElement nop;
    int max_pole() const { return singular.empty() ? 0 : singular.rbegin()->first + 1; }
};

// ---------------------------------------------------------------------------
// S-maps and X-maps
// ---------------------------------------------------------------------------

/// S^rho(a (x) b) = sum (-1)^{a''~ b'~} a' (x) b' rho(a'' (x) b'').
FnTensor2 smap(const Bicharacter& rho, const ScalarElement& a, const ScalarElement& b);

/// Same, with the bicharacter values moved to the variable pair (v1, v2).
FnTensor2 smap_at(const Bicharacter& rho, const ScalarElement& a, const ScalarElement& b, Var v1,
                  Var v2);

/// The structure braiding map: smap with the braiding table, composed with the
/// Koszul twist when the model's compose_twist flag is set.
FnTensor2 s_tau(const Model& m, const ScalarElement& a, const ScalarElement& b);

/// The translation map S^{(gamma)}.
FnTensor2 s_gamma(const Model& m, const ScalarElement& a, const ScalarElement& b);

XResult x2(const Model& m, const ScalarElement& a, const ScalarElement& b);
XResult x2_at(const Model& m, const ScalarElement& a, const ScalarElement& b, Var v1, Var v2);
XResult x3(const Model& m, const ScalarElement& a, const ScalarElement& b, const ScalarElement& c);

/// x3 specialized at z3 = 0 (the two-field state Y(a,z1)Y(b,z2)c before
/// expansion).
FnElement x3_at_z3zero(const Model& m, const ScalarElement& a, const ScalarElement& b,
                       const ScalarElement& c);

/// Y(a, out) b = X_{out,0}(a (x) b); function coefficients pass through.
FnElement y_apply(const Model& m, const FnElement& a, const FnElement& b, Var out);

OPEData ope(const Model& m, const ScalarElement& a, const ScalarElement& b);
FnElement nop(const Model& m, const ScalarElement& a, const ScalarElement& b);
FnElement residue(const Model& m, const ScalarElement& a, const ScalarElement& b,
                  const ScalarElement& c, int n);

// ---------------------------------------------------------------------------
// Truncation-aware comparison
// ---------------------------------------------------------------------------

/// Drop terms whose monomial exceeds the derivation-degree budget; a formula
/// built from exp-truncated factors is complete and exact below it.
FnElement filter_ddeg(const FnElement& e, int M);
FnTensor2 filter_ddeg(const FnTensor2& e, int M);
FnTensor3 filter_ddeg(const FnTensor3& e, int M);

/// Empty optional when equal; otherwise a description of the first differing
/// coefficient in canonical form.
std::optional<std::string> first_difference(const FnElement& a, const FnElement& b, int M,
                                            const superhopf::GeneratorSet& gs);
std::optional<std::string> first_difference(const FnTensor2& a, const FnTensor2& b, int M,
                                            const superhopf::GeneratorSet& gs);
std::optional<std::string> first_difference(const FnTensor3& a, const FnTensor3& b, int M,
                                            const superhopf::GeneratorSet& gs);

// ---------------------------------------------------------------------------
// Axiom checks
// ---------------------------------------------------------------------------

enum class Axiom {
    vacuum,
    hd_covariance,
    yang_baxter,
    compatibility,
    group_properties,
    locality,
    braided_symmetry,
};

const char* axiom_name(Axiom a);
std::optional<Axiom> axiom_from_name(const std::string& s);
std::vector<Axiom> all_axioms();

struct CheckRecord {
    std::string axiom;
    std::string inputs;
    int t_trunc;
    int d_trunc;
    bool pass;
    std::string detail;  // first differing coefficient, found exponents, ...

    std::string str() const;
};

struct CheckReport {
    std::vector<CheckRecord> records;
    bool all_pass() const;
    std::string str() const;
};

struct CheckArgs {
    int degree_bound = -1;  // -1: use the model's bound
    int ddeg_bound = -1;
    int locality_k = 2;     // compare mod t^k
    int locality_nmax = 6;
};

CheckReport check_axiom(const Model& m, Axiom axiom, const CheckArgs& args = {});
CheckReport check_all(const Model& m, const CheckArgs& args = {});

/// Minimal N <= Nmax with (z1-z2)^N ( Y(a,z1)Y(b,z2)c - braided partner ) = 0
/// mod t^k for every c in cs, comparing the two iota expansions.
struct LocalityResult {
    bool found = false;
    int exponent = -1;
};
LocalityResult locality_exponent(const Model& m, const ScalarElement& a, const ScalarElement& b,
                                 const std::vector<Monomial>& cs, int k, int Nmax);

}  // namespace qvaforge::qva
