#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "qvaforge/error.hpp"
#include "qvaforge/rational.hpp"

namespace qvaforge::fnring {

// ---------------------------------------------------------------------------
// Variables and exponent vectors
// ---------------------------------------------------------------------------

enum class Var : int { z1 = 0, z2 = 1, z3 = 2, gamma = 3, u = 4 };

inline constexpr int kVarCount = 5;

const char* var_name(Var v);
std::optional<Var> var_from_name(const std::string& name);
inline int vidx(Var v) { return static_cast<int>(v); }
inline bool is_z_var(Var v) { return vidx(v) <= 2; }

using ExpVec = std::array<int, kVarCount>;

/// Graded-lexicographic order, descending, so map iteration starts at the
/// leading term. Variable priority z1 > z2 > z3 > gamma > u.
struct GrlexDesc {
    bool operator()(const ExpVec& a, const ExpVec& b) const;
};

// ---------------------------------------------------------------------------
// Exact multivariate polynomials
// ---------------------------------------------------------------------------

class PolyExact {
public:
    using TermMap = std::map<ExpVec, Rational, GrlexDesc>;

    PolyExact() = default;

    static PolyExact constant(const Rational& c);
    static PolyExact variable(Var v, int exp = 1);
    static PolyExact monomial(const ExpVec& e, const Rational& c);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    Rational constant_value() const;  // coefficient of the empty monomial

    PolyExact operator-() const;
    PolyExact& operator+=(const PolyExact& o);
    PolyExact& operator-=(const PolyExact& o);
    friend PolyExact operator+(PolyExact a, const PolyExact& b) { return a += b; }
    friend PolyExact operator-(PolyExact a, const PolyExact& b) { return a -= b; }
    friend PolyExact operator*(const PolyExact& a, const PolyExact& b);
    PolyExact scaled(const Rational& c) const;
    PolyExact pow(int n) const;

    PolyExact derive(Var v) const;
    /// Substitute `v := p`. Exponents of v are expanded through powers of p.
    PolyExact subst(Var v, const PolyExact& p) const;

    int degree_in(Var v) const;
    bool uses(Var v) const { return degree_in(v) > 0; }
    /// Split into slices by the exponent of v; v is removed from the keys.
    std::map<int, PolyExact> slices_in(Var v) const;

    void add_term(const ExpVec& e, const Rational& c);
    const TermMap& terms() const { return terms_; }

    bool operator==(const PolyExact& o) const { return terms_ == o.terms_; }

    std::string str() const;

private:
    TermMap terms_;
};

// ---------------------------------------------------------------------------
// Whitelisted pole factors
// ---------------------------------------------------------------------------

enum class PoleFactor : int {
    z1 = 0, z2 = 1, z3 = 2,       // z_i
    d12 = 3, d13 = 4, d23 = 5,    // z_i - z_j, i < j
    g1 = 6, g2 = 7, g3 = 8,       // z_i + gamma
};

inline constexpr int kFactorCount = 9;

const char* factor_name(PoleFactor f);
const PolyExact& factor_poly(PoleFactor f);
inline int fidx(PoleFactor f) { return static_cast<int>(f); }
inline PoleFactor factor_at(int i) { return static_cast<PoleFactor>(i); }

/// Difference factor for an ordered pair of distinct z-variables, plus the
/// sign relating it to (a - b): (a - b) = sign * factor_poly(result).
std::pair<PoleFactor, int> diff_factor(Var a, Var b);
PoleFactor gamma_factor(Var z);
PoleFactor z_factor(Var z);

struct DenomProfile {
    std::array<int, kFactorCount> exp{};

    bool is_one() const;
    int total() const;
    DenomProfile operator*(const DenomProfile& o) const;  // exponent sum
    static DenomProfile lcm(const DenomProfile& a, const DenomProfile& b);
    bool operator==(const DenomProfile& o) const { return exp == o.exp; }

    PolyExact to_poly() const;
    /// Product of factor^(other[f] - exp[f]); other must dominate.
    PolyExact cofactor_to(const DenomProfile& other) const;
    bool involves(Var v) const;

    std::string str() const;  // "1" when trivial
};

/// A pole whitelist, e.g. the codomain of a bicharacter or of an X-map.
struct RingProfile {
    std::array<bool, kFactorCount> allowed{};
    std::string name;

    bool allows(const DenomProfile& d) const;

    static const RingProfile& w2();           // poles at z1 and z1-z2 only
    static const RingProfile& braided();      // adds z2 poles
    static const RingProfile& translation();  // z1, z1-z2, z1+gamma
    static const RingProfile& x3_codomain();  // z1, z2 and the three differences
    static const RingProfile& everything();
};

// ---------------------------------------------------------------------------
// Truncated t-series of exact rational functions
// ---------------------------------------------------------------------------

class RatFn {
public:
    struct Order {
        PolyExact num;
        DenomProfile den;
        bool operator==(const Order& o) const { return num == o.num && den == o.den; }
    };

    RatFn() : RatFn(1) {}
    explicit RatFn(int t_trunc);

    static RatFn zero(int T) { return RatFn(T); }
    static RatFn one(int T) { return constant(Rational(1), T); }
    static RatFn constant(const Rational& c, int T);
    static RatFn variable(Var v, int T);
    static RatFn poly(const PolyExact& p, int T);
    static RatFn t_power(int k, int T);
    /// Build num/den at t-order 0 and normalize.
    static RatFn fraction(const PolyExact& num, const DenomProfile& den, int T);
    static RatFn from_orders(std::vector<Order> orders);

    int t_trunc() const { return static_cast<int>(orders_.size()); }
    const Order& order(int k) const { return orders_[static_cast<size_t>(k)]; }
    bool is_zero() const;
    bool is_one() const;

    RatFn operator-() const;
    friend RatFn operator+(const RatFn& a, const RatFn& b);
    friend RatFn operator-(const RatFn& a, const RatFn& b);
    friend RatFn operator*(const RatFn& a, const RatFn& b);
    RatFn& operator+=(const RatFn& o) { return *this = *this + o; }
    RatFn& operator-=(const RatFn& o) { return *this = *this - o; }
    RatFn& operator*=(const RatFn& o) { return *this = *this * o; }
    RatFn scaled(const Rational& c) const;
    static RatFn div(const RatFn& a, const RatFn& b);
    RatFn inverse() const;
    RatFn pow(int n) const;

    bool operator==(const RatFn& o) const { return orders_ == o.orders_; }
    bool agree_mod_t(const RatFn& o, int k) const;

    RatFn derive(Var v) const;
    RatFn divided_derive(Var v, int k) const;  // (1/k!) d^k/dv^k

    /// Simultaneous substitution z -> z + gamma for every z in `shifted`.
    RatFn shift_vars(const std::set<Var>& shifted) const;
    /// Apply a permutation of {z1,z2,z3}; perm[i] is the image of z_(i+1).
    RatFn rename_z(const std::array<Var, 3>& perm) const;
    RatFn subst_zero(Var v) const;
    RatFn truncate_t(int k) const;       // drop orders >= k, keeping the size
    RatFn shrink_t_trunc(int T) const;   // reduce the recorded truncation

    int max_pole(PoleFactor f) const;
    bool member(const RingProfile& prof) const;

    bool uses(Var v) const;
    /// Max gamma-degree of the numerators; requires no z+gamma pole factor.
    int gamma_num_degree() const;
    RatFn truncate_gamma(int G) const;

    std::string str() const;

private:
    std::vector<Order> orders_;
};

// ---------------------------------------------------------------------------
// Truncated Laurent expansions (iota maps and diagonal expansions)
// ---------------------------------------------------------------------------

struct LaurentExp {
    enum class Kind { Iota, Diagonal };

    Kind kind = Kind::Iota;
    Var outer = Var::z1;  // Diagonal: the variable that is eliminated (z_i)
    Var inner = Var::z2;  // Diagonal: the remaining variable (z_j); u = z_i - z_j
    std::map<int, RatFn> coeffs;  // power of inner (Iota) or of u (Diagonal)
    int low_trunc = 0;   // coefficients complete on [-low_trunc, high_trunc]
    int high_trunc = 0;
    int t_trunc = 1;

    RatFn coeff(int p) const;
    void add(int p, const RatFn& f);

    std::string str() const;
};

/// Expansion i_{outer;inner}: series in the inner variable whose coefficients
/// are rational in the remaining ones.
LaurentExp iota_expand(const RatFn& f, Var outer, Var inner, int K);

/// Substitute z_i = z_j + u and expand in u over [-P, K].
LaurentExp diagonal_expand(const RatFn& f, Var vi, Var vj, int P, int K);

/// Largest pole order of f on the diagonal z_i = z_j across t-orders.
int diagonal_pole_order(const RatFn& f, Var vi, Var vj);

/// Coefficient of u^{-1} in the diagonal expansion of f * (z_i - z_j)^n.
RatFn residue_diagonal(const RatFn& f, Var vi, Var vj, int n);

bool membership(const RatFn& f, const RingProfile& prof);

/// Product of two expansions with the same locus; the window shrinks to the
/// range on which both operands are complete.
LaurentExp laurent_mul(const LaurentExp& a, const LaurentExp& b);

/// Multiply by a rational function whose only inner-variable content is plain
/// numerator powers (no pole factor involving the inner variable).
LaurentExp laurent_mul_ratfn(const LaurentExp& a, const RatFn& g);

bool laurent_equal_on(const LaurentExp& a, const LaurentExp& b, int lo, int hi, int t_orders);

/// Full expansion in gamma: gamma-numerator powers are split off and
/// (z_i+gamma) pole factors are expanded binomially; entries are gamma-free,
/// complete through gamma^G.
std::map<int, RatFn> gamma_expand(const RatFn& f, int G);

// Coefficient-ring hooks used by the graded-algebra templates.
inline bool is_zero(const RatFn& f) { return f.is_zero(); }
inline RatFn scale_coeff(const RatFn& f, const Rational& q) { return f.scaled(q); }

}  // namespace qvaforge::fnring
