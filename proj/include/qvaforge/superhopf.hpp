#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qvaforge/error.hpp"
#include "qvaforge/fnring.hpp"
#include "qvaforge/rational.hpp"

namespace qvaforge::superhopf {

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

enum class Parity : int { even = 0, odd = 1 };

struct GeneratorDecl {
    std::string name;
    Parity parity = Parity::even;
};

/// Declared generators ordered by name; a generator is addressed by its rank
/// in that order, so monomial comparisons never need the name strings.
class GeneratorSet {
public:
    static GeneratorSet from_decls(std::vector<GeneratorDecl> decls);

    int size() const { return static_cast<int>(gens_.size()); }
    int rank_of(const std::string& name) const;
    const GeneratorDecl& gen(int rank) const { return gens_[static_cast<size_t>(rank)]; }
    bool odd(int rank) const { return gens_[static_cast<size_t>(rank)].parity == Parity::odd; }

private:
    std::vector<GeneratorDecl> gens_;
};

using GeneratorSetPtr = std::shared_ptr<const GeneratorSet>;

/// A symbol D^{(ddeg)} g_0 for a declared generator g.
struct GenPower {
    int gen = 0;
    int ddeg = 0;
    bool odd = false;

    friend bool operator<(const GenPower& a, const GenPower& b) {
        return std::pair(a.gen, a.ddeg) < std::pair(b.gen, b.ddeg);
    }
    friend bool operator==(const GenPower& a, const GenPower& b) {
        return a.gen == b.gen && a.ddeg == b.ddeg;
    }
};

// ---------------------------------------------------------------------------
// Monomials
// ---------------------------------------------------------------------------

class Monomial {
public:
    struct Factor {
        int gen = 0;
        int ddeg = 0;
        int mult = 1;
        bool odd = false;

        friend bool operator==(const Factor& a, const Factor& b) {
            return a.gen == b.gen && a.ddeg == b.ddeg && a.mult == b.mult;
        }
    };

    Monomial() = default;  // the unit

    static Monomial unit() { return Monomial(); }
    bool is_unit() const { return factors_.empty(); }

    int parity() const { return parity_; }
    bool odd() const { return parity_ == 1; }
    int length() const;      // factor count with multiplicity
    int total_ddeg() const;  // sum of ddeg * mult

    const std::vector<Factor>& factors() const { return factors_; }
    std::vector<GenPower> word() const;

    /// Graded order: shorter words first, then lexicographic on factors.
    friend bool operator<(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial& a, const Monomial& b) { return a.factors_ == b.factors_; }

    std::string str(const GeneratorSet& gs) const;

    /// Internal: factors must already be sorted and merged.
    static Monomial from_sorted(std::vector<Factor> fs);

private:
    std::vector<Factor> factors_;
    int parity_ = 0;
};

/// Sort a word into canonical order, tracking one Koszul flip per odd-odd
/// transposition. Returns nullopt (zero) when an odd symbol repeats.
std::optional<std::pair<int, Monomial>> normalize_word(std::vector<GenPower> word);

// ---------------------------------------------------------------------------
// Elements with a parametric coefficient ring
// ---------------------------------------------------------------------------

template <class C>
class Element {
public:
    using TermMap = std::map<Monomial, C>;

    Element() = default;

    static Element term(const Monomial& m, const C& c) {
        Element e;
        e.add_term(m, c);
        return e;
    }

    void add_term(const Monomial& m, const C& c) {
        using qvaforge::is_zero;
        using qvaforge::fnring::is_zero;
        if (is_zero(c)) return;
        auto [it, inserted] = terms_.emplace(m, c);
        if (!inserted) {
            it->second = it->second + c;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    const TermMap& terms() const { return terms_; }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }
    bool is_zero() const { return terms_.empty(); }

    Element operator-() const {
        Element r;
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    Element& operator+=(const Element& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, c);
        return *this;
    }
    Element& operator-=(const Element& o) {
        for (const auto& [m, c] : o.terms_) add_term(m, -c);
        return *this;
    }
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }

    Element scaled(const Rational& q) const {
        using qvaforge::scale_coeff;
        using qvaforge::fnring::scale_coeff;
        Element r;
        for (const auto& [m, c] : terms_) r.add_term(m, scale_coeff(c, q));
        return r;
    }

    template <class D>
    Element<D> map_coeff(const std::function<D(const C&)>& f) const {
        Element<D> r;
        for (const auto& [m, c] : terms_) r.add_term(m, f(c));
        return r;
    }

    bool operator==(const Element& o) const { return terms_ == o.terms_; }

    std::string str(const GeneratorSet& gs) const;

private:
    TermMap terms_;
};

template <class C, int N>
class TensorElement {
public:
    using Key = std::array<Monomial, N>;
    using TermMap = std::map<Key, C>;

    TensorElement() = default;

    void add_term(const Key& k, const C& c) {
        using qvaforge::is_zero;
        using qvaforge::fnring::is_zero;
        if (is_zero(c)) return;
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second = it->second + c;
            if (is_zero(it->second)) terms_.erase(it);
        }
    }

    const TermMap& terms() const { return terms_; }
    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }
    bool is_zero() const { return terms_.empty(); }

    TensorElement operator-() const {
        TensorElement r;
        for (const auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }
    TensorElement& operator+=(const TensorElement& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, c);
        return *this;
    }
    TensorElement& operator-=(const TensorElement& o) {
        for (const auto& [k, c] : o.terms_) add_term(k, -c);
        return *this;
    }
    friend TensorElement operator+(TensorElement a, const TensorElement& b) { return a += b; }
    friend TensorElement operator-(TensorElement a, const TensorElement& b) { return a -= b; }

    bool operator==(const TensorElement& o) const { return terms_ == o.terms_; }

    std::string str(const GeneratorSet& gs) const;

private:
    TermMap terms_;
};

using ScalarElement = Element<Rational>;
using ScalarTensor2 = TensorElement<Rational, 2>;
using ScalarTensor3 = TensorElement<Rational, 3>;
using FnElement = Element<fnring::RatFn>;
using FnTensor2 = TensorElement<fnring::RatFn, 2>;
using FnTensor3 = TensorElement<fnring::RatFn, 3>;

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

/// Multiply two monomials; zero yields nullopt. The sign is the Koszul sign of
/// sorting the concatenated word.
std::optional<std::pair<int, Monomial>> mul_monomials(const Monomial& a, const Monomial& b);

template <class C>
Element<C> mul(const Element<C>& a, const Element<C>& b) {
    Element<C> r;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            auto prod = mul_monomials(ma, mb);
            if (!prod) continue;
            C c = ca * cb;
            if (prod->first < 0) c = -c;
            r.add_term(prod->second, c);
        }
    return r;
}

/// Product on H (x) H with the Koszul rule (a(x)b)(c(x)d) = (-1)^{b~c~}(ac(x)bd).
template <class C>
TensorElement<C, 2> tensor_mul(const TensorElement<C, 2>& x, const TensorElement<C, 2>& y) {
    TensorElement<C, 2> r;
    for (const auto& [kx, cx] : x.terms())
        for (const auto& [ky, cy] : y.terms()) {
            auto left = mul_monomials(kx[0], ky[0]);
            if (!left) continue;
            auto right = mul_monomials(kx[1], ky[1]);
            if (!right) continue;
            int sign = left->first * right->first;
            if (kx[1].odd() && ky[0].odd()) sign = -sign;
            C c = cx * cy;
            if (sign < 0) c = -c;
            r.add_term({left->second, right->second}, c);
        }
    return r;
}

// ---------------------------------------------------------------------------
// Hopf structure
// ---------------------------------------------------------------------------

ScalarTensor2 coproduct(const Monomial& m);
ScalarTensor3 coproduct2(const Monomial& m);

template <class C>
TensorElement<C, 2> coproduct(const Element<C>& e) {
    TensorElement<C, 2> r;
    for (const auto& [m, c] : e.terms())
        for (const auto& [k, q] : coproduct(m)) {
            using qvaforge::scale_coeff;
            using qvaforge::fnring::scale_coeff;
            r.add_term(k, scale_coeff(c, q));
        }
    return r;
}

template <class C>
TensorElement<C, 3> coproduct2(const Element<C>& e) {
    TensorElement<C, 3> r;
    for (const auto& [m, c] : e.terms())
        for (const auto& [k, q] : coproduct2(m)) {
            using qvaforge::scale_coeff;
            using qvaforge::fnring::scale_coeff;
            r.add_term(k, scale_coeff(c, q));
        }
    return r;
}

/// Coefficient of the empty monomial; `zero` supplies the ring zero.
template <class C>
C counit(const Element<C>& e, const C& zero) {
    auto it = e.terms().find(Monomial::unit());
    return it == e.terms().end() ? zero : it->second;
}

inline Rational counit(const Element<Rational>& e) { return counit(e, Rational(0)); }

/// Antipode sign of a monomial: S(x_1...x_n) = (-1)^n reverse(x_n...x_1).
int antipode_sign(const Monomial& m);

template <class C>
Element<C> antipode(const Element<C>& e) {
    Element<C> r;
    for (const auto& [m, c] : e.terms()) r.add_term(m, antipode_sign(m) < 0 ? -c : c);
    return r;
}

Element<Rational> d_power(const Monomial& m, int n);

template <class C>
Element<C> d_power(const Element<C>& e, int n) {
    Element<C> r;
    for (const auto& [m, c] : e.terms())
        for (const auto& [dm, q] : d_power(m, n)) {
            using qvaforge::scale_coeff;
            using qvaforge::fnring::scale_coeff;
            r.add_term(dm, scale_coeff(c, q));
        }
    return r;
}

/// sum_{n<=M} var^n D^{(n)} a with rational-function coefficients.
FnElement exp_zD(const Element<Rational>& a, fnring::Var var, int M, int T);

/// exp-map applied to an element that already carries function coefficients;
/// the coefficients pass through untouched.
FnElement exp_zD(const FnElement& a, fnring::Var var, int M);

template <class C>
TensorElement<C, 2> koszul_flip(const TensorElement<C, 2>& x) {
    TensorElement<C, 2> r;
    for (const auto& [k, c] : x.terms()) {
        bool flip = k[0].odd() && k[1].odd();
        r.add_term({k[1], k[0]}, flip ? -c : c);
    }
    return r;
}

template <class C>
TensorElement<C, 2> koszul_sign_twist(const TensorElement<C, 2>& x) {
    TensorElement<C, 2> r;
    for (const auto& [k, c] : x.terms()) {
        bool flip = k[0].odd() && k[1].odd();
        r.add_term(k, flip ? -c : c);
    }
    return r;
}

/// All basis monomials with at most `max_len` factors, each of derivation
/// degree at most `max_ddeg`, in increasing monomial order.
std::vector<Monomial> enumerate_basis(const GeneratorSet& gs, int max_len, int max_ddeg);

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

namespace detail {
std::string coeff_prefix(const Rational& c);
std::string coeff_prefix(const fnring::RatFn& c);
bool coeff_is_one(const Rational& c);
bool coeff_is_one(const fnring::RatFn& c);
}  // namespace detail

template <class C>
std::string Element<C>::str(const GeneratorSet& gs) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (m.is_unit())
            os << (detail::coeff_is_one(c) ? std::string("1") : detail::coeff_prefix(c));
        else if (detail::coeff_is_one(c))
            os << m.str(gs);
        else
            os << detail::coeff_prefix(c) << "*" << m.str(gs);
    }
    return os.str();
}

template <class C, int N>
std::string TensorElement<C, N>::str(const GeneratorSet& gs) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        if (!detail::coeff_is_one(c)) os << detail::coeff_prefix(c) << "*";
        for (int i = 0; i < N; ++i) {
            if (i) os << " (x) ";
            os << k[static_cast<size_t>(i)].str(gs);
        }
    }
    return os.str();
}

}  // namespace qvaforge::superhopf
