#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qvaforge/fnring.hpp"
#include "qvaforge/superhopf.hpp"

namespace qvaforge::bichar {

using fnring::RatFn;
using fnring::RingProfile;
using superhopf::GeneratorSetPtr;
using superhopf::Monomial;

enum class EvalOrder { left_first, right_first };

enum class QvaClass { ClassicalSuperVA, EKQuantumVA, HDQuantumVA };
const char* qva_class_name(QvaClass c);

struct ValidationIssue {
    std::string what;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string str() const;
};

struct EvalCache;

/// An even bicharacter, stored as its generator-pair table in (z1, z2) and
/// extended to all element pairs on demand. Entries exist exactly for the
/// parity-matched generator pairs; an absent matched pair is an error, not an
/// implicit zero.
class Bicharacter {
public:
    Bicharacter(GeneratorSetPtr gens, int t_trunc, const RingProfile& codomain);
    Bicharacter(Bicharacter&&) noexcept;
    Bicharacter& operator=(Bicharacter&&) noexcept;
    Bicharacter(const Bicharacter& o);  // fresh cache
    ~Bicharacter();

    void set_entry(int genA, int genB, const RatFn& value);
    const RatFn& entry(int genA, int genB) const;  // throws MissingTableEntry
    bool has_entry(int genA, int genB) const;

    const GeneratorSetPtr& gens() const { return gens_; }
    int t_trunc() const { return t_trunc_; }
    const RingProfile& codomain() const { return *codomain_; }

    bool table_equal(const Bicharacter& o) const;

    std::string str() const;

private:
    GeneratorSetPtr gens_;
    int t_trunc_;
    const RingProfile* codomain_;
    std::map<std::pair<int, int>, RatFn> table_;
    mutable std::unique_ptr<EvalCache> cache_;

    friend RatFn eval(const Bicharacter& r, const Monomial& a, const Monomial& b, EvalOrder order);
};

/// Extension of the table to arbitrary monomials: multiplicativity against the
/// coproduct with Koszul signs, unit collapse, and covariance derivatives of
/// the table entries along the divided-power towers.
RatFn eval(const Bicharacter& r, const Monomial& a, const Monomial& b,
           EvalOrder order = EvalOrder::left_first);

RatFn eval(const Bicharacter& r, const superhopf::ScalarElement& a,
           const superhopf::ScalarElement& b, EvalOrder order = EvalOrder::left_first);

/// Consistency of the two extension orders, evenness, explicit-zero policy and
/// codomain membership, on all monomial pairs up to the bound.
ValidationReport validate(const Bicharacter& r, int degree_bound, int ddeg_bound = -1);

Bicharacter identity_bicharacter(GeneratorSetPtr gens, int t_trunc);
Bicharacter convolve(const Bicharacter& r, const Bicharacter& s);
Bicharacter inverse(const Bicharacter& r);
Bicharacter transpose(const Bicharacter& r);
Bicharacter braiding(const Bicharacter& r);
Bicharacter shift(const Bicharacter& r);
Bicharacter translation(const Bicharacter& r);

/// Pointwise convolution at the element level (the defining formula); used to
/// certify the table-level convolve.
RatFn convolve_pointwise(const Bicharacter& r, const Bicharacter& s, const Monomial& a,
                         const Monomial& b);

QvaClass classify(const Bicharacter& r);
bool is_symmetric(const Bicharacter& r);
bool is_shift_invariant(const Bicharacter& r);

}  // namespace qvaforge::bichar
