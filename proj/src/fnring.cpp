#include "qvaforge/fnring.hpp"

#include <algorithm>
#include <sstream>

namespace qvaforge::fnring {

// ---------------------------------------------------------------------------
// Variables
// ---------------------------------------------------------------------------

const char* var_name(Var v) {
    switch (v) {
        case Var::z1: return "z1";
        case Var::z2: return "z2";
        case Var::z3: return "z3";
        case Var::gamma: return "gamma";
        case Var::u: return "u";
    }
    return "?";
}

std::optional<Var> var_from_name(const std::string& name) {
    for (int i = 0; i < kVarCount; ++i) {
        Var v = static_cast<Var>(i);
        if (name == var_name(v)) return v;
    }
    return std::nullopt;
}

bool GrlexDesc::operator()(const ExpVec& a, const ExpVec& b) const {
    int ta = 0, tb = 0;
    for (int i = 0; i < kVarCount; ++i) {
        ta += a[static_cast<size_t>(i)];
        tb += b[static_cast<size_t>(i)];
    }
    if (ta != tb) return ta > tb;
    return a > b;  // lexicographic, higher exponent of z1 first
}

// ---------------------------------------------------------------------------
// PolyExact
// ---------------------------------------------------------------------------

PolyExact PolyExact::constant(const Rational& c) {
    PolyExact p;
    p.add_term(ExpVec{}, c);
    return p;
}

PolyExact PolyExact::variable(Var v, int exp) {
    ExpVec e{};
    e[static_cast<size_t>(vidx(v))] = exp;
    return monomial(e, Rational(1));
}

PolyExact PolyExact::monomial(const ExpVec& e, const Rational& c) {
    PolyExact p;
    p.add_term(e, c);
    return p;
}

bool PolyExact::is_constant() const {
    if (terms_.empty()) return true;
    return terms_.size() == 1 && terms_.begin()->first == ExpVec{};
}

Rational PolyExact::constant_value() const {
    auto it = terms_.find(ExpVec{});
    return it == terms_.end() ? Rational(0) : it->second;
}

void PolyExact::add_term(const ExpVec& e, const Rational& c) {
    if (qvaforge::is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (qvaforge::is_zero(it->second)) terms_.erase(it);
    }
}

PolyExact PolyExact::operator-() const {
    PolyExact r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

PolyExact& PolyExact::operator+=(const PolyExact& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

PolyExact& PolyExact::operator-=(const PolyExact& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

PolyExact operator*(const PolyExact& a, const PolyExact& b) {
    PolyExact r;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            ExpVec e;
            for (int i = 0; i < kVarCount; ++i)
                e[static_cast<size_t>(i)] = ea[static_cast<size_t>(i)] + eb[static_cast<size_t>(i)];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

PolyExact PolyExact::scaled(const Rational& c) const {
    PolyExact r;
    if (qvaforge::is_zero(c)) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

PolyExact PolyExact::pow(int n) const {
    PolyExact r = constant(Rational(1));
    for (int i = 0; i < n; ++i) r = r * (*this);
    return r;
}

PolyExact PolyExact::derive(Var v) const {
    const auto vi = static_cast<size_t>(vidx(v));
    PolyExact r;
    for (const auto& [e, c] : terms_) {
        if (e[vi] == 0) continue;
        ExpVec d = e;
        d[vi] -= 1;
        r.add_term(d, c * Rational(e[vi]));
    }
    return r;
}

PolyExact PolyExact::subst(Var v, const PolyExact& p) const {
    const auto vi = static_cast<size_t>(vidx(v));
    std::vector<PolyExact> powers{PolyExact::constant(Rational(1))};
    PolyExact r;
    for (const auto& [e, c] : terms_) {
        int a = e[vi];
        while (static_cast<int>(powers.size()) <= a) powers.push_back(powers.back() * p);
        ExpVec rest = e;
        rest[vi] = 0;
        r += powers[static_cast<size_t>(a)] * PolyExact::monomial(rest, c);
    }
    return r;
}

int PolyExact::degree_in(Var v) const {
    const auto vi = static_cast<size_t>(vidx(v));
    int d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[vi]);
    return d;
}

std::map<int, PolyExact> PolyExact::slices_in(Var v) const {
    const auto vi = static_cast<size_t>(vidx(v));
    std::map<int, PolyExact> out;
    for (const auto& [e, c] : terms_) {
        ExpVec rest = e;
        rest[vi] = 0;
        out[e[vi]].add_term(rest, c);
    }
    return out;
}

std::string PolyExact::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Rational a = c;
        if (first) {
            if (a < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool hasVar = e != ExpVec{};
        if (!hasVar || a != Rational(1)) {
            os << to_string(a);
            if (hasVar) os << "*";
        }
        bool firstVar = true;
        for (int i = 0; i < kVarCount; ++i) {
            int k = e[static_cast<size_t>(i)];
            if (k == 0) continue;
            if (!firstVar) os << "*";
            firstVar = false;
            os << var_name(static_cast<Var>(i));
            if (k > 1) os << "^" << k;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Pole factors
// ---------------------------------------------------------------------------

const char* factor_name(PoleFactor f) {
    switch (f) {
        case PoleFactor::z1: return "z1";
        case PoleFactor::z2: return "z2";
        case PoleFactor::z3: return "z3";
        case PoleFactor::d12: return "z1-z2";
        case PoleFactor::d13: return "z1-z3";
        case PoleFactor::d23: return "z2-z3";
        case PoleFactor::g1: return "z1+gamma";
        case PoleFactor::g2: return "z2+gamma";
        case PoleFactor::g3: return "z3+gamma";
    }
    return "?";
}

namespace {

PolyExact make_factor_poly(PoleFactor f) {
    switch (f) {
        case PoleFactor::z1: return PolyExact::variable(Var::z1);
        case PoleFactor::z2: return PolyExact::variable(Var::z2);
        case PoleFactor::z3: return PolyExact::variable(Var::z3);
        case PoleFactor::d12: return PolyExact::variable(Var::z1) - PolyExact::variable(Var::z2);
        case PoleFactor::d13: return PolyExact::variable(Var::z1) - PolyExact::variable(Var::z3);
        case PoleFactor::d23: return PolyExact::variable(Var::z2) - PolyExact::variable(Var::z3);
        case PoleFactor::g1: return PolyExact::variable(Var::z1) + PolyExact::variable(Var::gamma);
        case PoleFactor::g2: return PolyExact::variable(Var::z2) + PolyExact::variable(Var::gamma);
        case PoleFactor::g3: return PolyExact::variable(Var::z3) + PolyExact::variable(Var::gamma);
    }
    return PolyExact();
}

// Variables appearing in a factor: (main, partner) where partner may be the
// same z-var (plain z_i), another z-var (difference) or gamma.
struct FactorVars {
    Var a;
    Var b;
    bool is_diff;
    bool is_gamma;
};

FactorVars factor_vars(PoleFactor f) {
    switch (f) {
        case PoleFactor::z1: return {Var::z1, Var::z1, false, false};
        case PoleFactor::z2: return {Var::z2, Var::z2, false, false};
        case PoleFactor::z3: return {Var::z3, Var::z3, false, false};
        case PoleFactor::d12: return {Var::z1, Var::z2, true, false};
        case PoleFactor::d13: return {Var::z1, Var::z3, true, false};
        case PoleFactor::d23: return {Var::z2, Var::z3, true, false};
        case PoleFactor::g1: return {Var::z1, Var::gamma, false, true};
        case PoleFactor::g2: return {Var::z2, Var::gamma, false, true};
        case PoleFactor::g3: return {Var::z3, Var::gamma, false, true};
    }
    return {Var::z1, Var::z1, false, false};
}

bool factor_involves(PoleFactor f, Var v) {
    FactorVars fv = factor_vars(f);
    return fv.a == v || fv.b == v;
}

}  // namespace

const PolyExact& factor_poly(PoleFactor f) {
    static const std::array<PolyExact, kFactorCount> polys = [] {
        std::array<PolyExact, kFactorCount> a;
        for (int i = 0; i < kFactorCount; ++i) a[static_cast<size_t>(i)] = make_factor_poly(factor_at(i));
        return a;
    }();
    return polys[static_cast<size_t>(fidx(f))];
}

std::pair<PoleFactor, int> diff_factor(Var a, Var b) {
    if (!is_z_var(a) || !is_z_var(b) || a == b) fail(ErrorCode::BadInput, "difference factor needs two distinct z-variables");
    bool flip = vidx(a) > vidx(b);
    int lo = std::min(vidx(a), vidx(b));
    int hi = std::max(vidx(a), vidx(b));
    PoleFactor f = PoleFactor::d12;
    if (lo == 0 && hi == 1) f = PoleFactor::d12;
    else if (lo == 0 && hi == 2) f = PoleFactor::d13;
    else f = PoleFactor::d23;
    return {f, flip ? -1 : 1};
}

PoleFactor gamma_factor(Var z) {
    switch (z) {
        case Var::z1: return PoleFactor::g1;
        case Var::z2: return PoleFactor::g2;
        case Var::z3: return PoleFactor::g3;
        default: fail(ErrorCode::BadInput, "gamma factor needs a z-variable");
    }
}

PoleFactor z_factor(Var z) {
    switch (z) {
        case Var::z1: return PoleFactor::z1;
        case Var::z2: return PoleFactor::z2;
        case Var::z3: return PoleFactor::z3;
        default: fail(ErrorCode::BadInput, "plain pole factor needs a z-variable");
    }
}

// ---------------------------------------------------------------------------
// DenomProfile
// ---------------------------------------------------------------------------

bool DenomProfile::is_one() const {
    for (int e : exp)
        if (e != 0) return false;
    return true;
}

int DenomProfile::total() const {
    int t = 0;
    for (int e : exp) t += e;
    return t;
}

DenomProfile DenomProfile::operator*(const DenomProfile& o) const {
    DenomProfile r;
    for (int i = 0; i < kFactorCount; ++i)
        r.exp[static_cast<size_t>(i)] = exp[static_cast<size_t>(i)] + o.exp[static_cast<size_t>(i)];
    return r;
}

DenomProfile DenomProfile::lcm(const DenomProfile& a, const DenomProfile& b) {
    DenomProfile r;
    for (int i = 0; i < kFactorCount; ++i)
        r.exp[static_cast<size_t>(i)] = std::max(a.exp[static_cast<size_t>(i)], b.exp[static_cast<size_t>(i)]);
    return r;
}

PolyExact DenomProfile::to_poly() const {
    PolyExact p = PolyExact::constant(Rational(1));
    for (int i = 0; i < kFactorCount; ++i) {
        int e = exp[static_cast<size_t>(i)];
        if (e > 0) p = p * factor_poly(factor_at(i)).pow(e);
    }
    return p;
}

PolyExact DenomProfile::cofactor_to(const DenomProfile& other) const {
    PolyExact p = PolyExact::constant(Rational(1));
    for (int i = 0; i < kFactorCount; ++i) {
        int d = other.exp[static_cast<size_t>(i)] - exp[static_cast<size_t>(i)];
        if (d < 0) fail(ErrorCode::BadInput, "cofactor_to requires a dominating profile");
        if (d > 0) p = p * factor_poly(factor_at(i)).pow(d);
    }
    return p;
}

bool DenomProfile::involves(Var v) const {
    for (int i = 0; i < kFactorCount; ++i)
        if (exp[static_cast<size_t>(i)] > 0 && factor_involves(factor_at(i), v)) return true;
    return false;
}

std::string DenomProfile::str() const {
    if (is_one()) return "1";
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i < kFactorCount; ++i) {
        int e = exp[static_cast<size_t>(i)];
        if (e == 0) continue;
        if (!first) os << "*";
        first = false;
        os << "(" << factor_name(factor_at(i)) << ")^" << e;
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// RingProfile
// ---------------------------------------------------------------------------

bool RingProfile::allows(const DenomProfile& d) const {
    for (int i = 0; i < kFactorCount; ++i)
        if (d.exp[static_cast<size_t>(i)] > 0 && !allowed[static_cast<size_t>(i)]) return false;
    return true;
}

namespace {
RingProfile make_profile(std::initializer_list<PoleFactor> fs, const char* name) {
    RingProfile p;
    p.name = name;
    for (PoleFactor f : fs) p.allowed[static_cast<size_t>(fidx(f))] = true;
    return p;
}
}  // namespace

const RingProfile& RingProfile::w2() {
    static const RingProfile p = make_profile({PoleFactor::z1, PoleFactor::d12}, "W2");
    return p;
}

const RingProfile& RingProfile::braided() {
    static const RingProfile p = make_profile({PoleFactor::z1, PoleFactor::z2, PoleFactor::d12}, "braided");
    return p;
}

const RingProfile& RingProfile::translation() {
    static const RingProfile p =
        make_profile({PoleFactor::z1, PoleFactor::d12, PoleFactor::g1}, "translation");
    return p;
}

const RingProfile& RingProfile::x3_codomain() {
    static const RingProfile p = make_profile(
        {PoleFactor::z1, PoleFactor::z2, PoleFactor::d12, PoleFactor::d13, PoleFactor::d23}, "x3");
    return p;
}

const RingProfile& RingProfile::everything() {
    static const RingProfile p = [] {
        RingProfile q;
        q.name = "all";
        q.allowed.fill(true);
        return q;
    }();
    return p;
}

// ---------------------------------------------------------------------------
// Fraction normalization
// ---------------------------------------------------------------------------

namespace {

/// Divide p by the (monic linear) pole factor; nullopt when not divisible.
std::optional<PolyExact> divide_once(const PolyExact& p, PoleFactor f) {
    if (p.is_zero()) return p;
    FactorVars fv = factor_vars(f);
    Var x = fv.a;
    if (!fv.is_diff && !fv.is_gamma) {
        // plain variable factor: every monomial needs a positive exponent
        PolyExact q;
        const auto xi = static_cast<size_t>(vidx(x));
        for (const auto& [e, c] : p.terms()) {
            if (e[xi] == 0) return std::nullopt;
            ExpVec d = e;
            d[xi] -= 1;
            q.add_term(d, c);
        }
        return q;
    }
    // factor x - a with a = partner (difference) or a = -gamma (shift factor)
    PolyExact a = fv.is_gamma ? -PolyExact::variable(Var::gamma) : PolyExact::variable(fv.b);
    auto slices = p.slices_in(x);
    int d = slices.rbegin()->first;
    if (d == 0) return std::nullopt;
    std::vector<PolyExact> c(static_cast<size_t>(d) + 1);
    for (auto& [k, poly] : slices) c[static_cast<size_t>(k)] = poly;
    // synthetic division: q_{d-1} = c_d, q_{k-1} = c_k + a*q_k, rem = c_0 + a*q_0
    std::vector<PolyExact> q(static_cast<size_t>(d));
    q[static_cast<size_t>(d - 1)] = c[static_cast<size_t>(d)];
    for (int k = d - 1; k >= 1; --k)
        q[static_cast<size_t>(k - 1)] = c[static_cast<size_t>(k)] + a * q[static_cast<size_t>(k)];
    PolyExact rem = c[0] + a * q[0];
    if (!rem.is_zero()) return std::nullopt;
    PolyExact quot;
    for (int k = 0; k < d; ++k) quot += q[static_cast<size_t>(k)] * PolyExact::variable(x).pow(k);
    return quot;
}

void normalize_order(RatFn::Order& o) {
    if (o.num.is_zero()) {
        o.den = DenomProfile{};
        return;
    }
    for (int i = 0; i < kFactorCount; ++i) {
        int& e = o.den.exp[static_cast<size_t>(i)];
        while (e > 0) {
            auto q = divide_once(o.num, factor_at(i));
            if (!q) break;
            o.num = *q;
            --e;
        }
    }
}

RatFn::Order frac_add(const RatFn::Order& a, const RatFn::Order& b) {
    RatFn::Order r;
    r.den = DenomProfile::lcm(a.den, b.den);
    r.num = a.num * a.den.cofactor_to(r.den) + b.num * b.den.cofactor_to(r.den);
    normalize_order(r);
    return r;
}

RatFn::Order frac_mul(const RatFn::Order& a, const RatFn::Order& b) {
    RatFn::Order r;
    r.num = a.num * b.num;
    r.den = a.den * b.den;
    normalize_order(r);
    return r;
}

RatFn::Order frac_scale(const RatFn::Order& a, const Rational& c) {
    RatFn::Order r{a.num.scaled(c), a.den};
    if (r.num.is_zero()) r.den = DenomProfile{};
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// RatFn
// ---------------------------------------------------------------------------

RatFn::RatFn(int t_trunc) {
    if (t_trunc < 1) fail(ErrorCode::TruncationZero, "t-truncation must be positive");
    orders_.resize(static_cast<size_t>(t_trunc));
}

RatFn RatFn::constant(const Rational& c, int T) {
    RatFn r(T);
    if (!qvaforge::is_zero(c)) r.orders_[0].num = PolyExact::constant(c);
    return r;
}

RatFn RatFn::variable(Var v, int T) {
    RatFn r(T);
    r.orders_[0].num = PolyExact::variable(v);
    return r;
}

RatFn RatFn::poly(const PolyExact& p, int T) {
    RatFn r(T);
    r.orders_[0].num = p;
    return r;
}

RatFn RatFn::t_power(int k, int T) {
    RatFn r(T);
    if (k < 0) fail(ErrorCode::BadInput, "negative t-power");
    if (k < T) r.orders_[static_cast<size_t>(k)].num = PolyExact::constant(Rational(1));
    return r;
}

RatFn RatFn::fraction(const PolyExact& num, const DenomProfile& den, int T) {
    RatFn r(T);
    r.orders_[0] = Order{num, den};
    normalize_order(r.orders_[0]);
    return r;
}

RatFn RatFn::from_orders(std::vector<Order> orders) {
    if (orders.empty()) fail(ErrorCode::TruncationZero, "t-truncation must be positive");
    RatFn r(static_cast<int>(orders.size()));
    for (size_t k = 0; k < orders.size(); ++k) {
        normalize_order(orders[k]);
        r.orders_[k] = std::move(orders[k]);
    }
    return r;
}

bool RatFn::is_zero() const {
    for (const auto& o : orders_)
        if (!o.num.is_zero()) return false;
    return true;
}

bool RatFn::is_one() const {
    if (!orders_[0].den.is_one()) return false;
    if (!(orders_[0].num == PolyExact::constant(Rational(1)))) return false;
    for (size_t k = 1; k < orders_.size(); ++k)
        if (!orders_[k].num.is_zero()) return false;
    return true;
}

RatFn RatFn::operator-() const {
    RatFn r = *this;
    for (auto& o : r.orders_) o.num = -o.num;
    return r;
}

RatFn operator+(const RatFn& a, const RatFn& b) {
    int T = std::min(a.t_trunc(), b.t_trunc());
    RatFn r(T);
    for (int k = 0; k < T; ++k) r.orders_[static_cast<size_t>(k)] = frac_add(a.order(k), b.order(k));
    return r;
}

RatFn operator-(const RatFn& a, const RatFn& b) { return a + (-b); }

RatFn operator*(const RatFn& a, const RatFn& b) {
    int T = std::min(a.t_trunc(), b.t_trunc());
    RatFn r(T);
    for (int k = 0; k < T; ++k) {
        RatFn::Order acc;
        for (int i = 0; i <= k; ++i) {
            if (a.order(i).num.is_zero() || b.order(k - i).num.is_zero()) continue;
            acc = frac_add(acc, frac_mul(a.order(i), b.order(k - i)));
        }
        r.orders_[static_cast<size_t>(k)] = acc;
    }
    return r;
}

RatFn RatFn::scaled(const Rational& c) const {
    RatFn r(t_trunc());
    for (int k = 0; k < t_trunc(); ++k) r.orders_[static_cast<size_t>(k)] = frac_scale(order(k), c);
    return r;
}

RatFn RatFn::inverse() const {
    int T = t_trunc();
    const Order& b0 = order(0);
    if (b0.num.is_zero())
        fail(ErrorCode::DivisionOutsideRing, "divisor has zero order-0 part");
    // factor the order-0 numerator over the whitelist
    PolyExact rest = b0.num;
    DenomProfile invDen;
    for (int i = 0; i < kFactorCount; ++i) {
        while (true) {
            auto q = divide_once(rest, factor_at(i));
            if (!q) break;
            rest = *q;
            invDen.exp[static_cast<size_t>(i)] += 1;
        }
    }
    if (!rest.is_constant())
        fail(ErrorCode::DivisionOutsideRing,
             "divisor numerator has a factor outside the pole whitelist: " + rest.str());
    Rational c = rest.constant_value();
    Order inv0{b0.den.to_poly().scaled(Rational(1) / c), invDen};
    normalize_order(inv0);

    std::vector<Order> inv(static_cast<size_t>(T));
    inv[0] = inv0;
    for (int k = 1; k < T; ++k) {
        Order acc;
        for (int i = 1; i <= k; ++i) {
            if (order(i).num.is_zero() || inv[static_cast<size_t>(k - i)].num.is_zero()) continue;
            acc = frac_add(acc, frac_mul(order(i), inv[static_cast<size_t>(k - i)]));
        }
        acc = frac_mul(acc, inv0);
        acc.num = -acc.num;
        inv[static_cast<size_t>(k)] = acc;
    }
    RatFn r(T);
    r.orders_ = std::move(inv);
    return r;
}

RatFn RatFn::div(const RatFn& a, const RatFn& b) {
    int T = std::min(a.t_trunc(), b.t_trunc());
    RatFn bb = b.t_trunc() == T ? b : b.shrink_t_trunc(T);
    return a * bb.inverse();
}

RatFn RatFn::pow(int n) const {
    if (n < 0) fail(ErrorCode::BadInput, "negative power");
    RatFn r = one(t_trunc());
    for (int i = 0; i < n; ++i) r = r * (*this);
    return r;
}

bool RatFn::agree_mod_t(const RatFn& o, int k) const {
    int K = std::min({k, t_trunc(), o.t_trunc()});
    for (int i = 0; i < K; ++i)
        if (!(order(i) == o.order(i))) return false;
    return true;
}

RatFn RatFn::derive(Var v) const {
    RatFn r(t_trunc());
    for (int k = 0; k < t_trunc(); ++k) {
        const Order& o = order(k);
        if (o.num.is_zero()) continue;
        Order d;
        std::vector<int> active;
        for (int i = 0; i < kFactorCount; ++i)
            if (o.den.exp[static_cast<size_t>(i)] > 0) active.push_back(i);
        if (active.empty()) {
            d.num = o.num.derive(v);
        } else {
            for (int i : active) d.den.exp[static_cast<size_t>(i)] = o.den.exp[static_cast<size_t>(i)] + 1;
            PolyExact prodAll = PolyExact::constant(Rational(1));
            for (int i : active) prodAll = prodAll * factor_poly(factor_at(i));
            PolyExact num = o.num.derive(v) * prodAll;
            for (int i : active) {
                PolyExact df = factor_poly(factor_at(i)).derive(v);
                if (df.is_zero()) continue;
                PolyExact rest = PolyExact::constant(Rational(1));
                for (int j : active)
                    if (j != i) rest = rest * factor_poly(factor_at(j));
                num -= o.num.scaled(Rational(o.den.exp[static_cast<size_t>(i)])) * df * rest;
            }
            d.num = num;
        }
        normalize_order(d);
        r.orders_[static_cast<size_t>(k)] = d;
    }
    return r;
}

RatFn RatFn::divided_derive(Var v, int k) const {
    RatFn r = *this;
    for (int i = 0; i < k; ++i) r = r.derive(v);
    return r.scaled(inv_factorial(k));
}

RatFn RatFn::shift_vars(const std::set<Var>& shifted) const {
    for (Var v : shifted)
        if (!is_z_var(v)) fail(ErrorCode::BadInput, "only z-variables can be shifted");
    RatFn r(t_trunc());
    for (int k = 0; k < t_trunc(); ++k) {
        const Order& o = order(k);
        Order s;
        s.num = o.num;
        for (Var v : shifted)
            s.num = s.num.subst(v, PolyExact::variable(v) + PolyExact::variable(Var::gamma));
        for (int i = 0; i < kFactorCount; ++i) {
            int e = o.den.exp[static_cast<size_t>(i)];
            if (e == 0) continue;
            PoleFactor f = factor_at(i);
            FactorVars fv = factor_vars(f);
            if (fv.is_gamma) {
                if (shifted.count(fv.a))
                    fail(ErrorCode::DisallowedPoleAfterShift,
                         std::string("(") + factor_name(f) + ") would shift to a disallowed factor");
                s.den.exp[static_cast<size_t>(i)] += e;
            } else if (fv.is_diff) {
                bool sa = shifted.count(fv.a) > 0, sb = shifted.count(fv.b) > 0;
                if (sa != sb)
                    fail(ErrorCode::DisallowedPoleAfterShift,
                         std::string("(") + factor_name(f) + ") is not invariant under a partial shift");
                s.den.exp[static_cast<size_t>(i)] += e;
            } else {
                if (shifted.count(fv.a))
                    s.den.exp[static_cast<size_t>(fidx(gamma_factor(fv.a)))] += e;
                else
                    s.den.exp[static_cast<size_t>(i)] += e;
            }
        }
        normalize_order(s);
        r.orders_[static_cast<size_t>(k)] = s;
    }
    return r;
}

RatFn RatFn::rename_z(const std::array<Var, 3>& perm) const {
    bool seen[3] = {false, false, false};
    for (Var v : perm) {
        if (!is_z_var(v)) fail(ErrorCode::BadInput, "rename images must be z-variables");
        seen[vidx(v)] = true;
    }
    if (!(seen[0] && seen[1] && seen[2])) fail(ErrorCode::BadInput, "rename must be a permutation");

    RatFn r(t_trunc());
    for (int k = 0; k < t_trunc(); ++k) {
        const Order& o = order(k);
        Order s;
        for (const auto& [e, c] : o.num.terms()) {
            ExpVec d = e;
            for (int i = 0; i < 3; ++i) d[static_cast<size_t>(vidx(perm[static_cast<size_t>(i)]))] = e[static_cast<size_t>(i)];
            s.num.add_term(d, c);
        }
        int sign = 1;
        for (int i = 0; i < kFactorCount; ++i) {
            int e = o.den.exp[static_cast<size_t>(i)];
            if (e == 0) continue;
            PoleFactor f = factor_at(i);
            FactorVars fv = factor_vars(f);
            if (fv.is_gamma) {
                s.den.exp[static_cast<size_t>(fidx(gamma_factor(perm[static_cast<size_t>(vidx(fv.a))])))] += e;
            } else if (fv.is_diff) {
                auto [nf, sg] = diff_factor(perm[static_cast<size_t>(vidx(fv.a))], perm[static_cast<size_t>(vidx(fv.b))]);
                s.den.exp[static_cast<size_t>(fidx(nf))] += e;
                if (sg < 0 && (e % 2) == 1) sign = -sign;
            } else {
                s.den.exp[static_cast<size_t>(fidx(z_factor(perm[static_cast<size_t>(vidx(fv.a))])))] += e;
            }
        }
        if (sign < 0) s.num = -s.num;
        normalize_order(s);
        r.orders_[static_cast<size_t>(k)] = s;
    }
    return r;
}

RatFn RatFn::subst_zero(Var v) const {
    if (v == Var::u) {
        RatFn r(t_trunc());
        for (int k = 0; k < t_trunc(); ++k) {
            Order s;
            auto slices = order(k).num.slices_in(Var::u);
            if (slices.count(0)) s.num = slices[0];
            s.den = order(k).den;
            normalize_order(s);
            r.orders_[static_cast<size_t>(k)] = s;
        }
        return r;
    }
    RatFn r(t_trunc());
    for (int k = 0; k < t_trunc(); ++k) {
        const Order& o = order(k);
        Order s;
        auto slices = o.num.slices_in(v);
        if (slices.count(0)) s.num = slices[0];
        int sign = 1;
        for (int i = 0; i < kFactorCount; ++i) {
            int e = o.den.exp[static_cast<size_t>(i)];
            if (e == 0) continue;
            PoleFactor f = factor_at(i);
            FactorVars fv = factor_vars(f);
            if (v == Var::gamma) {
                if (fv.is_gamma)
                    s.den.exp[static_cast<size_t>(fidx(z_factor(fv.a)))] += e;
                else
                    s.den.exp[static_cast<size_t>(i)] += e;
                continue;
            }
            if (!factor_involves(f, v)) {
                s.den.exp[static_cast<size_t>(i)] += e;
                continue;
            }
            if (fv.is_gamma || !fv.is_diff)
                fail(ErrorCode::BadInput,
                     std::string("substituting 0 hits pole factor (") + factor_name(f) + ")");
            // difference factor: z_a - z_b with one of them set to zero
            if (fv.a == v) {
                s.den.exp[static_cast<size_t>(fidx(z_factor(fv.b)))] += e;
                if ((e % 2) == 1) sign = -sign;
            } else {
                s.den.exp[static_cast<size_t>(fidx(z_factor(fv.a)))] += e;
            }
        }
        if (sign < 0) s.num = -s.num;
        normalize_order(s);
        r.orders_[static_cast<size_t>(k)] = s;
    }
    return r;
}

RatFn RatFn::truncate_t(int k) const {
    RatFn r = *this;
    for (int i = std::max(k, 0); i < t_trunc(); ++i) r.orders_[static_cast<size_t>(i)] = Order{};
    return r;
}

RatFn RatFn::shrink_t_trunc(int T) const {
    if (T < 1) fail(ErrorCode::TruncationZero, "t-truncation must be positive");
    if (T > t_trunc()) fail(ErrorCode::BadInput, "cannot extend a t-truncation");
    RatFn r(T);
    for (int k = 0; k < T; ++k) r.orders_[static_cast<size_t>(k)] = order(k);
    return r;
}

int RatFn::max_pole(PoleFactor f) const {
    int m = 0;
    for (const auto& o : orders_) m = std::max(m, o.den.exp[static_cast<size_t>(fidx(f))]);
    return m;
}

bool RatFn::member(const RingProfile& prof) const {
    for (const auto& o : orders_)
        if (!prof.allows(o.den)) return false;
    return true;
}

bool RatFn::uses(Var v) const {
    for (const auto& o : orders_) {
        if (o.num.uses(v)) return true;
        if (o.den.involves(v)) return true;
    }
    return false;
}

int RatFn::gamma_num_degree() const {
    int d = 0;
    for (const auto& o : orders_) {
        for (int i = 0; i < kFactorCount; ++i)
            if (o.den.exp[static_cast<size_t>(i)] > 0 && factor_vars(factor_at(i)).is_gamma)
                fail(ErrorCode::BadInput, "gamma degree undefined with z+gamma pole factors");
        d = std::max(d, o.num.degree_in(Var::gamma));
    }
    return d;
}

RatFn RatFn::truncate_gamma(int G) const {
    RatFn r(t_trunc());
    for (int k = 0; k < t_trunc(); ++k) {
        const Order& o = order(k);
        for (int i = 0; i < kFactorCount; ++i)
            if (o.den.exp[static_cast<size_t>(i)] > 0 && factor_vars(factor_at(i)).is_gamma)
                fail(ErrorCode::BadInput, "gamma truncation undefined with z+gamma pole factors");
        Order s;
        for (const auto& [e, c] : o.num.terms())
            if (e[static_cast<size_t>(vidx(Var::gamma))] <= G) s.num.add_term(e, c);
        s.den = o.den;
        normalize_order(s);
        r.orders_[static_cast<size_t>(k)] = s;
    }
    return r;
}

std::string RatFn::str() const {
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k < t_trunc(); ++k) {
        const Order& o = order(k);
        if (o.num.is_zero()) continue;
        if (!first) os << "; ";
        first = false;
        os << "t^" << k << ": (" << o.num.str() << ")/(" << o.den.str() << ")";
    }
    if (first) return "0";
    return os.str();
}

// ---------------------------------------------------------------------------
// Laurent expansions
// ---------------------------------------------------------------------------

RatFn LaurentExp::coeff(int p) const {
    auto it = coeffs.find(p);
    return it == coeffs.end() ? RatFn::zero(t_trunc) : it->second;
}

void LaurentExp::add(int p, const RatFn& f) {
    if (f.is_zero()) return;
    auto it = coeffs.find(p);
    if (it == coeffs.end())
        coeffs.emplace(p, f);
    else {
        it->second = it->second + f;
        if (it->second.is_zero()) coeffs.erase(it);
    }
}

std::string LaurentExp::str() const {
    std::string base = kind == Kind::Diagonal ? "u" : var_name(inner);
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, f] : coeffs) {
        if (f.is_zero()) continue;
        if (!first) os << "\n";
        first = false;
        os << base << "^" << p << ": " << f.str();
    }
    if (first) return "0";
    return os.str();
}

namespace {

// Laurent series with Order-valued coefficients; used while expanding a
// single t-order.
using OrderSeries = std::map<int, RatFn::Order>;

void series_add(OrderSeries& s, int p, const RatFn::Order& o) {
    if (o.num.is_zero()) return;
    auto it = s.find(p);
    if (it == s.end())
        s.emplace(p, o);
    else {
        it->second = frac_add(it->second, o);
        if (it->second.num.is_zero()) s.erase(it);
    }
}

OrderSeries series_mul(const OrderSeries& a, const OrderSeries& b, int cap) {
    OrderSeries r;
    for (const auto& [pa, oa] : a)
        for (const auto& [pb, ob] : b) {
            if (pa + pb > cap) continue;
            series_add(r, pa + pb, frac_mul(oa, ob));
        }
    return r;
}

}  // namespace

LaurentExp iota_expand(const RatFn& f, Var outer, Var inner, int K) {
    if (!is_z_var(outer) || !is_z_var(inner) || outer == inner)
        fail(ErrorCode::BadInput, "iota expansion needs two distinct z-variables");
    if (K < 0) fail(ErrorCode::BadInput, "iota expansion needs K >= 0");

    LaurentExp out;
    out.kind = LaurentExp::Kind::Iota;
    out.outer = outer;
    out.inner = inner;
    out.high_trunc = K;
    out.t_trunc = f.t_trunc();

    int maxInnerPole = 0;
    std::vector<OrderSeries> perOrder(static_cast<size_t>(f.t_trunc()));
    for (int k = 0; k < f.t_trunc(); ++k) {
        const RatFn::Order& o = f.order(k);
        if (o.num.is_zero()) continue;

        int dExp = 0, dSign = 1;  // (outer - inner)^{-dExp} with sign applied
        int innerPole = 0;
        DenomProfile pass;
        for (int i = 0; i < kFactorCount; ++i) {
            int e = o.den.exp[static_cast<size_t>(i)];
            if (e == 0) continue;
            PoleFactor pf = factor_at(i);
            FactorVars fv = factor_vars(pf);
            bool hasOuter = factor_involves(pf, outer);
            bool hasInner = factor_involves(pf, inner);
            if (hasOuter && hasInner) {
                dExp = e;
                if (fv.a == inner && (e % 2) == 1) dSign = -dSign;  // stored as (inner - outer)
            } else if (hasInner) {
                if (fv.is_diff || fv.is_gamma)
                    fail(ErrorCode::UnsupportedFactor,
                         std::string("factor (") + factor_name(pf) + ") couples the inner variable to a third one");
                innerPole = e;
            } else {
                pass.exp[static_cast<size_t>(i)] += e;
            }
        }
        maxInnerPole = std::max(maxInnerPole, innerPole);

        OrderSeries s;
        // numerator split by inner powers
        for (const auto& [a, poly] : o.num.slices_in(inner))
            series_add(s, a, RatFn::Order{poly, DenomProfile{}});
        // inner^{-innerPole}
        if (innerPole > 0) {
            OrderSeries shift;
            shift.emplace(-innerPole, RatFn::Order{PolyExact::constant(Rational(1)), DenomProfile{}});
            s = series_mul(s, shift, K + innerPole + dExp);
        }
        // (outer - inner)^{-dExp} -> sum_n binom(dExp-1+n, n) inner^n outer^{-dExp-n}
        if (dExp > 0) {
            OrderSeries diff;
            for (int n = 0; n + 0 <= K + innerPole; ++n) {
                RatFn::Order term;
                term.num = PolyExact::constant(Rational(binomial(dExp - 1 + n, n)) * Rational(dSign));
                term.den.exp[static_cast<size_t>(fidx(z_factor(outer)))] = dExp + n;
                series_add(diff, n, term);
            }
            s = series_mul(s, diff, K + innerPole);
        }
        // passthrough denominator
        if (!pass.is_one()) {
            OrderSeries passS;
            passS.emplace(0, RatFn::Order{PolyExact::constant(Rational(1)), pass});
            s = series_mul(s, passS, K);
        }
        // drop anything above the window
        for (auto it = s.begin(); it != s.end();) {
            if (it->first > K)
                it = s.erase(it);
            else
                ++it;
        }
        perOrder[static_cast<size_t>(k)] = std::move(s);
    }

    out.low_trunc = maxInnerPole;
    for (int k = 0; k < f.t_trunc(); ++k) {
        for (auto& [p, ord] : perOrder[static_cast<size_t>(k)]) {
            normalize_order(ord);
            if (ord.num.is_zero()) continue;
            auto it = out.coeffs.find(p);
            if (it == out.coeffs.end()) it = out.coeffs.emplace(p, RatFn::zero(f.t_trunc())).first;
            std::vector<RatFn::Order> slot(static_cast<size_t>(f.t_trunc()));
            slot[static_cast<size_t>(k)] = ord;
            it->second = it->second + RatFn::from_orders(std::move(slot));
        }
    }
    return out;
}

int diagonal_pole_order(const RatFn& f, Var vi, Var vj) {
    return f.max_pole(diff_factor(vi, vj).first);
}

LaurentExp diagonal_expand(const RatFn& f, Var vi, Var vj, int P, int K) {
    if (!is_z_var(vi) || !is_z_var(vj) || vi == vj)
        fail(ErrorCode::BadInput, "diagonal expansion needs two distinct z-variables");
    if (f.uses(Var::u)) fail(ErrorCode::BadInput, "diagonal expansion input already uses u");

    LaurentExp out;
    out.kind = LaurentExp::Kind::Diagonal;
    out.outer = vi;
    out.inner = vj;
    out.low_trunc = P;
    out.high_trunc = K;
    out.t_trunc = f.t_trunc();

    int seriesCap = K + P;
    for (int k = 0; k < f.t_trunc(); ++k) {
        const RatFn::Order& o = f.order(k);
        if (o.num.is_zero()) continue;

        OrderSeries s;
        {
            // numerator with z_i := z_j + u, split by u powers
            PolyExact num = o.num.subst(vi, PolyExact::variable(vj) + PolyExact::variable(Var::u));
            for (const auto& [a, poly] : num.slices_in(Var::u))
                series_add(s, a, RatFn::Order{poly, DenomProfile{}});
        }

        for (int i = 0; i < kFactorCount; ++i) {
            int e = o.den.exp[static_cast<size_t>(i)];
            if (e == 0) continue;
            PoleFactor pf = factor_at(i);
            FactorVars fv = factor_vars(pf);
            if (!factor_involves(pf, vi)) {
                OrderSeries passS;
                RatFn::Order t{PolyExact::constant(Rational(1)), DenomProfile{}};
                t.den.exp[static_cast<size_t>(i)] = e;
                passS.emplace(0, t);
                s = series_mul(s, passS, seriesCap);
                continue;
            }
            if (fv.is_diff && factor_involves(pf, vj)) {
                // the u-pole itself
                if (e > P)
                    fail(ErrorCode::InsufficientLowTrunc,
                         "diagonal pole order " + std::to_string(e) + " exceeds P=" + std::to_string(P));
                int sign = (fv.a == vj && (e % 2) == 1) ? -1 : 1;  // stored as z_j - z_i = -u
                OrderSeries shift;
                shift.emplace(-e, RatFn::Order{PolyExact::constant(Rational(sign)), DenomProfile{}});
                s = series_mul(s, shift, seriesCap);
                continue;
            }
            // a factor g(z_i, .) = g(z_j, .) + u: expand 1/(base + u)^e as
            // sum_n (-1)^n binom(e+n-1, n) u^n base^{-e-n}
            OrderSeries expand;
            for (int n = 0; n <= seriesCap; ++n) {
                Rational c = Rational(binomial(e + n - 1, n));
                if ((n % 2) == 1) c = -c;
                RatFn::Order term{PolyExact::constant(c), DenomProfile{}};
                int baseIdx;
                if (fv.is_gamma) {
                    baseIdx = fidx(gamma_factor(vj));
                } else if (fv.is_diff) {
                    // z_i - z_k -> (z_j - z_k) + u, possibly with orientation sign
                    Var other = fv.a == vi ? fv.b : fv.a;
                    int orient = fv.a == vi ? 1 : -1;  // stored poly = orient * (z_i - z_k)
                    auto [nf, sg] = diff_factor(vj, other);
                    baseIdx = fidx(nf);
                    // stored^{-e} = orient^e (z_i - z_k)^{-e}; base (z_j - z_k) = sg * poly(nf)
                    int total = 1;
                    if (orient < 0 && (e % 2) == 1) total = -total;
                    if (sg < 0 && ((e + n) % 2) == 1) total = -total;
                    if (total < 0) term.num = -term.num;
                } else {
                    baseIdx = fidx(z_factor(vj));
                }
                term.den.exp[static_cast<size_t>(baseIdx)] = e + n;
                series_add(expand, n, term);
            }
            s = series_mul(s, expand, seriesCap);
        }

        for (auto& [p, ord] : s) {
            if (p > K || p < -P) continue;
            normalize_order(ord);
            if (ord.num.is_zero()) continue;
            auto it = out.coeffs.find(p);
            if (it == out.coeffs.end()) it = out.coeffs.emplace(p, RatFn::zero(f.t_trunc())).first;
            std::vector<RatFn::Order> slot(static_cast<size_t>(f.t_trunc()));
            slot[static_cast<size_t>(k)] = ord;
            it->second = it->second + RatFn::from_orders(std::move(slot));
        }
    }
    return out;
}

RatFn residue_diagonal(const RatFn& f, Var vi, Var vj, int n) {
    if (n < 0) fail(ErrorCode::BadInput, "residue weight must be non-negative");
    PolyExact diff = PolyExact::variable(vi) - PolyExact::variable(vj);
    RatFn g = f * RatFn::poly(diff.pow(n), f.t_trunc());
    int P = std::max(1, diagonal_pole_order(g, vi, vj));
    LaurentExp e = diagonal_expand(g, vi, vj, P, 0);
    return e.coeff(-1);
}

bool membership(const RatFn& f, const RingProfile& prof) { return f.member(prof); }

LaurentExp laurent_mul(const LaurentExp& a, const LaurentExp& b) {
    if (a.kind != b.kind || a.outer != b.outer || a.inner != b.inner)
        fail(ErrorCode::BadInput, "laurent_mul needs matching loci");
    LaurentExp r;
    r.kind = a.kind;
    r.outer = a.outer;
    r.inner = a.inner;
    r.t_trunc = std::min(a.t_trunc, b.t_trunc);
    r.low_trunc = a.low_trunc + b.low_trunc;
    r.high_trunc = std::min(a.high_trunc - b.low_trunc, b.high_trunc - a.low_trunc);
    for (const auto& [pa, ca] : a.coeffs)
        for (const auto& [pb, cb] : b.coeffs) {
            if (pa + pb > r.high_trunc) continue;
            r.add(pa + pb, ca * cb);
        }
    return r;
}

LaurentExp laurent_mul_ratfn(const LaurentExp& a, const RatFn& g) {
    // split g by plain inner powers
    for (int k = 0; k < g.t_trunc(); ++k)
        for (int i = 0; i < kFactorCount; ++i)
            if (g.order(k).den.exp[static_cast<size_t>(i)] > 0 && factor_involves(factor_at(i), a.inner))
                fail(ErrorCode::BadInput, "multiplier has a pole involving the expansion variable");

    std::map<int, RatFn> slices;
    for (int k = 0; k < g.t_trunc(); ++k) {
        for (const auto& [aExp, poly] : g.order(k).num.slices_in(a.inner)) {
            std::vector<RatFn::Order> slot(static_cast<size_t>(g.t_trunc()));
            slot[static_cast<size_t>(k)] = RatFn::Order{poly, g.order(k).den};
            RatFn part = RatFn::from_orders(std::move(slot));
            auto it = slices.find(aExp);
            if (it == slices.end())
                slices.emplace(aExp, part);
            else
                it->second = it->second + part;
        }
    }
    LaurentExp r;
    r.kind = a.kind;
    r.outer = a.outer;
    r.inner = a.inner;
    r.t_trunc = std::min(a.t_trunc, g.t_trunc());
    int minSlice = slices.empty() ? 0 : slices.begin()->first;
    r.low_trunc = a.low_trunc - minSlice;
    r.high_trunc = a.high_trunc + minSlice;
    for (const auto& [sExp, sf] : slices)
        for (const auto& [p, c] : a.coeffs) {
            if (p + sExp > r.high_trunc) continue;
            r.add(p + sExp, c * sf);
        }
    return r;
}

bool laurent_equal_on(const LaurentExp& a, const LaurentExp& b, int lo, int hi, int t_orders) {
    if (-a.low_trunc > lo || a.high_trunc < hi || -b.low_trunc > lo || b.high_trunc < hi)
        fail(ErrorCode::InconclusiveTruncation, "expansion windows do not cover the comparison range");
    for (int p = lo; p <= hi; ++p)
        if (!a.coeff(p).agree_mod_t(b.coeff(p), t_orders)) return false;
    return true;
}

std::map<int, RatFn> gamma_expand(const RatFn& f, int G) {
    std::map<int, RatFn> out;
    for (int k = 0; k < f.t_trunc(); ++k) {
        const RatFn::Order& o = f.order(k);
        if (o.num.is_zero()) continue;

        std::map<int, RatFn::Order> s;
        for (const auto& [a, poly] : o.num.slices_in(Var::gamma)) {
            if (a > G) continue;
            s.emplace(a, RatFn::Order{poly, DenomProfile{}});
        }
        for (int i = 0; i < kFactorCount; ++i) {
            int e = o.den.exp[static_cast<size_t>(i)];
            if (e == 0) continue;
            PoleFactor pf = factor_at(i);
            FactorVars fv = factor_vars(pf);
            std::map<int, RatFn::Order> fac;
            if (fv.is_gamma) {
                for (int n = 0; n <= G; ++n) {
                    Rational c = Rational(binomial(e + n - 1, n));
                    if ((n % 2) == 1) c = -c;
                    RatFn::Order term{PolyExact::constant(c), DenomProfile{}};
                    term.den.exp[static_cast<size_t>(fidx(z_factor(fv.a)))] = e + n;
                    fac.emplace(n, term);
                }
            } else {
                RatFn::Order term{PolyExact::constant(Rational(1)), DenomProfile{}};
                term.den.exp[static_cast<size_t>(i)] = e;
                fac.emplace(0, term);
            }
            std::map<int, RatFn::Order> next;
            for (const auto& [pa, oa] : s)
                for (const auto& [pb, ob] : fac) {
                    if (pa + pb > G) continue;
                    auto prod = frac_mul(oa, ob);
                    auto it = next.find(pa + pb);
                    if (it == next.end())
                        next.emplace(pa + pb, prod);
                    else
                        it->second = frac_add(it->second, prod);
                }
            s = std::move(next);
        }
        for (auto& [p, ord] : s) {
            normalize_order(ord);
            if (ord.num.is_zero()) continue;
            auto it = out.find(p);
            if (it == out.end()) it = out.emplace(p, RatFn::zero(f.t_trunc())).first;
            std::vector<RatFn::Order> slot(static_cast<size_t>(f.t_trunc()));
            slot[static_cast<size_t>(k)] = ord;
            it->second = it->second + RatFn::from_orders(std::move(slot));
        }
    }
    return out;
}

}  // namespace qvaforge::fnring
