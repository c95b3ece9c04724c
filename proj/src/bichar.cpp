#include "qvaforge/bichar.hpp"

#include <mutex>
#include <sstream>
#include <tuple>

namespace qvaforge::bichar {

using fnring::Var;
using superhopf::GeneratorSet;
using superhopf::ScalarElement;

const char* qva_class_name(QvaClass c) {
    switch (c) {
        case QvaClass::ClassicalSuperVA: return "ClassicalSuperVA";
        case QvaClass::EKQuantumVA: return "EKQuantumVA";
        case QvaClass::HDQuantumVA: return "HDQuantumVA";
    }
    return "?";
}

std::string ValidationReport::str() const {
    if (ok()) return "ok";
    std::ostringstream os;
    for (const auto& i : issues) os << i.what << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Bicharacter table
// ---------------------------------------------------------------------------

struct EvalCache {
    std::mutex mutex;
    std::map<std::tuple<Monomial, Monomial, EvalOrder>, RatFn> values;
};

Bicharacter::Bicharacter(GeneratorSetPtr gens, int t_trunc, const RingProfile& codomain)
    : gens_(std::move(gens)), t_trunc_(t_trunc), codomain_(&codomain),
      cache_(std::make_unique<EvalCache>()) {}

Bicharacter::Bicharacter(Bicharacter&&) noexcept = default;
Bicharacter& Bicharacter::operator=(Bicharacter&&) noexcept = default;
Bicharacter::~Bicharacter() = default;

Bicharacter::Bicharacter(const Bicharacter& o)
    : gens_(o.gens_), t_trunc_(o.t_trunc_), codomain_(o.codomain_), table_(o.table_),
      cache_(std::make_unique<EvalCache>()) {}

void Bicharacter::set_entry(int genA, int genB, const RatFn& value) {
    table_.insert_or_assign({genA, genB}, value);
    std::lock_guard<std::mutex> lock(cache_->mutex);
    cache_->values.clear();
}

bool Bicharacter::has_entry(int genA, int genB) const { return table_.count({genA, genB}) > 0; }

const RatFn& Bicharacter::entry(int genA, int genB) const {
    auto it = table_.find({genA, genB});
    if (it == table_.end())
        fail(ErrorCode::MissingTableEntry,
             "no table entry for (" + gens_->gen(genA).name + ", " + gens_->gen(genB).name +
                 "); declare zeros explicitly");
    return it->second;
}

bool Bicharacter::table_equal(const Bicharacter& o) const { return table_ == o.table_; }

std::string Bicharacter::str() const {
    std::ostringstream os;
    for (const auto& [key, v] : table_)
        os << "r(" << gens_->gen(key.first).name << ", " << gens_->gen(key.second).name
           << ") = " << v.str() << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Extension to element pairs
// ---------------------------------------------------------------------------

namespace {

/// First factor (one unit of multiplicity) and the remainder.
std::pair<Monomial, Monomial> split_head(const Monomial& m) {
    std::vector<Monomial::Factor> rest = m.factors();
    Monomial::Factor head = rest.front();
    if (rest.front().mult > 1)
        rest.front().mult -= 1;
    else
        rest.erase(rest.begin());
    head.mult = 1;
    return {Monomial::from_sorted({head}), Monomial::from_sorted(std::move(rest))};
}

RatFn eval_mono(const Bicharacter& r, const Monomial& a, const Monomial& b, EvalOrder order);

RatFn eval_base(const Bicharacter& r, const Monomial& a, const Monomial& b) {
    const GeneratorSet& gs = *r.gens();
    const auto& fa = a.factors().front();
    const auto& fb = b.factors().front();
    if (gs.odd(fa.gen) != gs.odd(fb.gen)) return RatFn::zero(r.t_trunc());
    const RatFn& base = r.entry(fa.gen, fb.gen);
    // covariance: the ddeg towers evaluate to divided derivatives of the entry
    return base.divided_derive(Var::z1, fa.ddeg).divided_derive(Var::z2, fb.ddeg);
}

RatFn eval_peel_left(const Bicharacter& r, const Monomial& a, const Monomial& b, EvalOrder order) {
    auto [head, rest] = split_head(a);
    RatFn acc = RatFn::zero(r.t_trunc());
    for (const auto& [cd, q] : superhopf::coproduct(b)) {
        RatFn lhs = eval_mono(r, head, cd[0], order);
        if (lhs.is_zero()) continue;
        RatFn rhs = eval_mono(r, rest, cd[1], order);
        if (rhs.is_zero()) continue;
        Rational c = q;
        if (rest.odd() && cd[0].odd()) c = -c;
        acc += (lhs * rhs).scaled(c);
    }
    return acc;
}

RatFn eval_peel_right(const Bicharacter& r, const Monomial& a, const Monomial& b, EvalOrder order) {
    auto [head, rest] = split_head(b);
    RatFn acc = RatFn::zero(r.t_trunc());
    for (const auto& [cd, q] : superhopf::coproduct(a)) {
        RatFn lhs = eval_mono(r, cd[0], head, order);
        if (lhs.is_zero()) continue;
        RatFn rhs = eval_mono(r, cd[1], rest, order);
        if (rhs.is_zero()) continue;
        Rational c = q;
        if (cd[1].odd() && head.odd()) c = -c;
        acc += (lhs * rhs).scaled(c);
    }
    return acc;
}

RatFn eval_mono(const Bicharacter& r, const Monomial& a, const Monomial& b, EvalOrder order) {
    int T = r.t_trunc();
    if (a.is_unit()) return b.is_unit() ? RatFn::one(T) : RatFn::zero(T);
    if (b.is_unit()) return RatFn::zero(T);
    if (a.parity() != b.parity()) return RatFn::zero(T);
    if (a.length() == 1 && b.length() == 1) return eval_base(r, a, b);

    if (order == EvalOrder::left_first)
        return a.length() > 1 ? eval_peel_left(r, a, b, order) : eval_peel_right(r, a, b, order);
    return b.length() > 1 ? eval_peel_right(r, a, b, order) : eval_peel_left(r, a, b, order);
}

}  // namespace

RatFn eval(const Bicharacter& r, const Monomial& a, const Monomial& b, EvalOrder order) {
    {
        std::lock_guard<std::mutex> lock(r.cache_->mutex);
        auto it = r.cache_->values.find({a, b, order});
        if (it != r.cache_->values.end()) return it->second;
    }
    RatFn v = eval_mono(r, a, b, order);
    std::lock_guard<std::mutex> lock(r.cache_->mutex);
    r.cache_->values.emplace(std::tuple(a, b, order), v);
    return v;
}

RatFn eval(const Bicharacter& r, const ScalarElement& a, const ScalarElement& b, EvalOrder order) {
    RatFn acc = RatFn::zero(r.t_trunc());
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) acc += eval(r, ma, mb, order).scaled(ca * cb);
    return acc;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

ValidationReport validate(const Bicharacter& r, int degree_bound, int ddeg_bound) {
    if (ddeg_bound < 0) ddeg_bound = degree_bound;
    const GeneratorSet& gs = *r.gens();
    ValidationReport rep;

    for (int g = 0; g < gs.size(); ++g)
        for (int h = 0; h < gs.size(); ++h) {
            bool matched = gs.odd(g) == gs.odd(h);
            if (matched && !r.has_entry(g, h))
                rep.issues.push_back({"missing table entry for parity-matched pair (" +
                                      gs.gen(g).name + ", " + gs.gen(h).name + ")"});
            if (!matched && r.has_entry(g, h) && !r.entry(g, h).is_zero())
                rep.issues.push_back({"evenness violation: nonzero entry on parity-mismatched pair (" +
                                      gs.gen(g).name + ", " + gs.gen(h).name + ")"});
            if (r.has_entry(g, h) && !r.entry(g, h).member(r.codomain()))
                rep.issues.push_back({"codomain membership failure on (" + gs.gen(g).name + ", " +
                                      gs.gen(h).name + "): " + r.entry(g, h).str() + " outside " +
                                      r.codomain().name});
        }
    if (!rep.ok()) return rep;

    auto basis = superhopf::enumerate_basis(gs, degree_bound, ddeg_bound);
    for (const auto& a : basis)
        for (const auto& b : basis) {
            RatFn left = eval(r, a, b, EvalOrder::left_first);
            RatFn right = eval(r, a, b, EvalOrder::right_first);
            if (!(left == right)) {
                rep.issues.push_back({"extension orders disagree on (" + a.str(gs) + ", " +
                                      b.str(gs) + "): " + left.str() + " vs " + right.str()});
                return rep;
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// Convolution group
// ---------------------------------------------------------------------------

namespace {

Bicharacter map_table(const Bicharacter& r, const RingProfile& codomain,
                      const std::function<RatFn(int, int, const RatFn&)>& f) {
    Bicharacter out(r.gens(), r.t_trunc(), codomain);
    const GeneratorSet& gs = *r.gens();
    for (int g = 0; g < gs.size(); ++g)
        for (int h = 0; h < gs.size(); ++h) {
            if (gs.odd(g) != gs.odd(h)) continue;
            out.set_entry(g, h, f(g, h, r.entry(g, h)));
        }
    return out;
}

}  // namespace

Bicharacter identity_bicharacter(GeneratorSetPtr gens, int t_trunc) {
    Bicharacter out(std::move(gens), t_trunc, RingProfile::w2());
    const GeneratorSet& gs = *out.gens();
    for (int g = 0; g < gs.size(); ++g)
        for (int h = 0; h < gs.size(); ++h)
            if (gs.odd(g) == gs.odd(h)) out.set_entry(g, h, RatFn::zero(t_trunc));
    return out;
}

Bicharacter convolve(const Bicharacter& r, const Bicharacter& s) {
    if (r.gens().get() != s.gens().get())
        fail(ErrorCode::BadInput, "convolution needs a shared generator set");
    const RingProfile& codomain =
        &r.codomain() == &s.codomain() ? r.codomain() : RingProfile::everything();
    // forced on primitives: both coproduct legs collapse through the counit
    return map_table(r, codomain, [&](int g, int h, const RatFn& v) { return v + s.entry(g, h); });
}

Bicharacter inverse(const Bicharacter& r) {
    // r^{-1}(a (x) b) = r(S(a) (x) b); S negates primitives
    return map_table(r, r.codomain(), [](int, int, const RatFn& v) { return -v; });
}

Bicharacter transpose(const Bicharacter& r) {
    static const std::array<Var, 3> swap12{Var::z2, Var::z1, Var::z3};
    const GeneratorSet& gs = *r.gens();
    return map_table(r, RingProfile::braided(), [&](int g, int h, const RatFn&) {
        RatFn v = r.entry(h, g).rename_z(swap12);
        if (gs.odd(g) && gs.odd(h)) v = -v;
        return v;
    });
}

Bicharacter braiding(const Bicharacter& r) {
    Bicharacter rt = transpose(r);
    const GeneratorSet& gs = *r.gens();
    Bicharacter out(r.gens(), r.t_trunc(), RingProfile::braided());
    for (int g = 0; g < gs.size(); ++g)
        for (int h = 0; h < gs.size(); ++h)
            if (gs.odd(g) == gs.odd(h)) out.set_entry(g, h, rt.entry(g, h) - r.entry(g, h));
    return out;
}

Bicharacter shift(const Bicharacter& r) {
    return map_table(r, RingProfile::translation(),
                     [](int, int, const RatFn& v) { return v.shift_vars({Var::z1, Var::z2}); });
}

Bicharacter translation(const Bicharacter& r) {
    Bicharacter sh = shift(r);
    const GeneratorSet& gs = *r.gens();
    Bicharacter out(r.gens(), r.t_trunc(), RingProfile::translation());
    for (int g = 0; g < gs.size(); ++g)
        for (int h = 0; h < gs.size(); ++h)
            if (gs.odd(g) == gs.odd(h)) out.set_entry(g, h, sh.entry(g, h) - r.entry(g, h));
    return out;
}

RatFn convolve_pointwise(const Bicharacter& r, const Bicharacter& s, const Monomial& a,
                         const Monomial& b) {
    RatFn acc = RatFn::zero(std::min(r.t_trunc(), s.t_trunc()));
    for (const auto& [da, ca] : superhopf::coproduct(a))
        for (const auto& [db, cb] : superhopf::coproduct(b)) {
            RatFn left = eval(r, da[0], db[0]);
            if (left.is_zero()) continue;
            RatFn right = eval(s, da[1], db[1]);
            if (right.is_zero()) continue;
            Rational c = ca * cb;
            if (da[1].odd() && db[0].odd()) c = -c;
            acc += (left * right).scaled(c);
        }
    return acc;
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

bool is_symmetric(const Bicharacter& r) { return transpose(r).table_equal(r); }

bool is_shift_invariant(const Bicharacter& r) {
    const GeneratorSet& gs = *r.gens();
    for (int g = 0; g < gs.size(); ++g)
        for (int h = 0; h < gs.size(); ++h) {
            if (gs.odd(g) != gs.odd(h)) continue;
            const RatFn& v = r.entry(g, h);
            if (!(v.derive(Var::z1) + v.derive(Var::z2)).is_zero()) return false;
        }
    return true;
}

QvaClass classify(const Bicharacter& r) {
    bool shiftInv = is_shift_invariant(r);
    bool symmetric = is_symmetric(r);
    if (shiftInv && symmetric) return QvaClass::ClassicalSuperVA;
    if (shiftInv) return QvaClass::EKQuantumVA;
    return QvaClass::HDQuantumVA;
}

}  // namespace qvaforge::bichar
