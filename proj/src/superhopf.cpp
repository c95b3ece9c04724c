#include "qvaforge/superhopf.hpp"

#include <tuple>

namespace qvaforge::superhopf {

// ---------------------------------------------------------------------------
// GeneratorSet
// ---------------------------------------------------------------------------

GeneratorSet GeneratorSet::from_decls(std::vector<GeneratorDecl> decls) {
    std::sort(decls.begin(), decls.end(),
              [](const GeneratorDecl& a, const GeneratorDecl& b) { return a.name < b.name; });
    for (size_t i = 1; i < decls.size(); ++i)
        if (decls[i].name == decls[i - 1].name)
            fail(ErrorCode::BadInput, "duplicate generator name: " + decls[i].name);
    GeneratorSet gs;
    gs.gens_ = std::move(decls);
    return gs;
}

int GeneratorSet::rank_of(const std::string& name) const {
    for (size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i].name == name) return static_cast<int>(i);
    return -1;
}

// ---------------------------------------------------------------------------
// Monomial
// ---------------------------------------------------------------------------

int Monomial::length() const {
    int n = 0;
    for (const auto& f : factors_) n += f.mult;
    return n;
}

int Monomial::total_ddeg() const {
    int n = 0;
    for (const auto& f : factors_) n += f.ddeg * f.mult;
    return n;
}

std::vector<GenPower> Monomial::word() const {
    std::vector<GenPower> w;
    for (const auto& f : factors_)
        for (int i = 0; i < f.mult; ++i) w.push_back(GenPower{f.gen, f.ddeg, f.odd});
    return w;
}

bool operator<(const Monomial& a, const Monomial& b) {
    int la = a.length(), lb = b.length();
    if (la != lb) return la < lb;
    auto key = [](const Monomial::Factor& f) { return std::tuple(f.gen, f.ddeg, f.mult); };
    return std::lexicographical_compare(
        a.factors_.begin(), a.factors_.end(), b.factors_.begin(), b.factors_.end(),
        [&](const Monomial::Factor& x, const Monomial::Factor& y) { return key(x) < key(y); });
}

Monomial Monomial::from_sorted(std::vector<Factor> fs) {
    Monomial m;
    m.factors_ = std::move(fs);
    int p = 0;
    for (const auto& f : m.factors_)
        if (f.odd) p += f.mult;
    m.parity_ = p % 2;
    return m;
}

std::string Monomial::str(const GeneratorSet& gs) const {
    if (factors_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& f : factors_) {
        if (!first) os << "*";
        first = false;
        os << gs.gen(f.gen).name << "[" << f.ddeg << "]";
        if (f.mult > 1) os << "^" << f.mult;
    }
    return os.str();
}

std::optional<std::pair<int, Monomial>> normalize_word(std::vector<GenPower> word) {
    int sign = 1;
    // insertion sort; each odd-odd transposition flips the sign
    for (size_t i = 1; i < word.size(); ++i) {
        GenPower x = word[i];
        size_t j = i;
        while (j > 0 && x < word[j - 1]) {
            if (x.odd && word[j - 1].odd) sign = -sign;
            word[j] = word[j - 1];
            --j;
        }
        word[j] = x;
    }
    std::vector<Monomial::Factor> fs;
    for (const auto& g : word) {
        if (!fs.empty() && fs.back().gen == g.gen && fs.back().ddeg == g.ddeg) {
            if (g.odd) return std::nullopt;  // odd squares vanish
            fs.back().mult += 1;
        } else {
            fs.push_back(Monomial::Factor{g.gen, g.ddeg, 1, g.odd});
        }
    }
    return std::pair(sign, Monomial::from_sorted(std::move(fs)));
}

std::optional<std::pair<int, Monomial>> mul_monomials(const Monomial& a, const Monomial& b) {
    std::vector<GenPower> w = a.word();
    std::vector<GenPower> wb = b.word();
    w.insert(w.end(), wb.begin(), wb.end());
    return normalize_word(std::move(w));
}

// ---------------------------------------------------------------------------
// Coproducts
// ---------------------------------------------------------------------------

namespace {

struct PartialSplit {
    std::vector<Monomial::Factor> left, right;
    int left_par = 0, right_par = 0;
    Rational coef = Rational(1);
};

}  // namespace

ScalarTensor2 coproduct(const Monomial& m) {
    std::vector<PartialSplit> acc{PartialSplit{}};
    for (const auto& f : m.factors()) {
        std::vector<PartialSplit> next;
        next.reserve(acc.size() * static_cast<size_t>(f.mult + 1));
        for (const auto& t : acc) {
            for (int i = 0; i <= f.mult; ++i) {
                PartialSplit s = t;
                s.coef *= Rational(binomial(f.mult, i));
                if (i > 0) {
                    // (x (x) y)(f^i (x) 1) = (-1)^{y~ f~} x f^i (x) y
                    if (f.odd && s.right_par == 1) s.coef = -s.coef;
                    s.left.push_back(Monomial::Factor{f.gen, f.ddeg, i, f.odd});
                    if (f.odd) s.left_par ^= (i % 2);
                }
                if (i < f.mult) {
                    s.right.push_back(Monomial::Factor{f.gen, f.ddeg, f.mult - i, f.odd});
                    if (f.odd) s.right_par ^= ((f.mult - i) % 2);
                }
                next.push_back(std::move(s));
            }
        }
        acc = std::move(next);
    }
    ScalarTensor2 r;
    for (auto& t : acc)
        r.add_term({Monomial::from_sorted(std::move(t.left)), Monomial::from_sorted(std::move(t.right))},
                   t.coef);
    return r;
}

ScalarTensor3 coproduct2(const Monomial& m) {
    ScalarTensor3 r;
    for (const auto& [lr, c] : coproduct(m))
        for (const auto& [ab, q] : coproduct(lr[0]))
            r.add_term({ab[0], ab[1], lr[1]}, c * q);
    return r;
}

// ---------------------------------------------------------------------------
// Antipode, divided powers
// ---------------------------------------------------------------------------

// On a supercommutative algebra S(ab) = (-1)^{a~b~} S(b)S(a) collapses to an
// algebra map, so S just negates every factor.
int antipode_sign(const Monomial& m) { return (m.length() % 2 == 0) ? 1 : -1; }

namespace {

Element<Rational> d_power_word(const std::vector<GenPower>& w, size_t i, int n) {
    if (i == w.size()) {
        Element<Rational> r;
        if (n == 0) r.add_term(Monomial::unit(), Rational(1));
        return r;
    }
    Element<Rational> r;
    const GenPower& g = w[i];
    for (int j = 0; j <= n; ++j) {
        Element<Rational> rest = d_power_word(w, i + 1, n - j);
        if (rest.is_zero()) continue;
        auto head = normalize_word({GenPower{g.gen, g.ddeg + j, g.odd}});
        Element<Rational> lead = Element<Rational>::term(
            head->second, Rational(binomial(g.ddeg + j, j)) * Rational(head->first));
        r += mul(lead, rest);
    }
    return r;
}

}  // namespace

Element<Rational> d_power(const Monomial& m, int n) { return d_power_word(m.word(), 0, n); }

FnElement exp_zD(const Element<Rational>& a, fnring::Var var, int M, int T) {
    FnElement r;
    for (int m = 0; m <= M; ++m) {
        fnring::RatFn zc = fnring::RatFn::poly(fnring::PolyExact::variable(var, m), T);
        if (m == 0) zc = fnring::RatFn::one(T);
        for (const auto& [mono, c] : d_power(a, m)) r.add_term(mono, zc.scaled(c));
    }
    return r;
}

FnElement exp_zD(const FnElement& a, fnring::Var var, int M) {
    FnElement r;
    for (const auto& [mono, c] : a.terms()) {
        for (int m = 0; m <= M; ++m) {
            fnring::RatFn zc =
                fnring::RatFn::poly(fnring::PolyExact::variable(var, m), c.t_trunc());
            if (m == 0) zc = fnring::RatFn::one(c.t_trunc());
            for (const auto& [dm, q] : d_power(mono, m))
                r.add_term(dm, (c * zc).scaled(q));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Basis enumeration
// ---------------------------------------------------------------------------

namespace {

void enumerate_rec(const std::vector<GenPower>& symbols, size_t from, int remaining,
                   std::vector<GenPower>& word, std::vector<Monomial>& out) {
    {
        auto nw = normalize_word(word);
        if (nw) out.push_back(nw->second);
    }
    if (remaining == 0) return;
    for (size_t s = from; s < symbols.size(); ++s) {
        // odd symbols may not repeat
        if (!word.empty() && symbols[s] == word.back() && symbols[s].odd) continue;
        word.push_back(symbols[s]);
        enumerate_rec(symbols, s, remaining - 1, word, out);
        word.pop_back();
    }
}

}  // namespace

std::vector<Monomial> enumerate_basis(const GeneratorSet& gs, int max_len, int max_ddeg) {
    std::vector<GenPower> symbols;
    for (int g = 0; g < gs.size(); ++g)
        for (int d = 0; d <= max_ddeg; ++d) symbols.push_back(GenPower{g, d, gs.odd(g)});
    std::sort(symbols.begin(), symbols.end());
    std::vector<Monomial> out;
    std::vector<GenPower> word;
    if (max_len >= 0) {
        word.clear();
        enumerate_rec(symbols, 0, max_len, word, out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Printing helpers
// ---------------------------------------------------------------------------

namespace detail {

std::string coeff_prefix(const Rational& c) { return to_string(c); }
std::string coeff_prefix(const fnring::RatFn& c) { return "(" + c.str() + ")"; }
bool coeff_is_one(const Rational& c) { return c == Rational(1); }
bool coeff_is_one(const fnring::RatFn& c) { return c.is_one(); }

}  // namespace detail

}  // namespace qvaforge::superhopf
