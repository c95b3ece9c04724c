#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qvaforge/qva.hpp"

namespace qvaforge::modelio {

using fnring::RatFn;
using superhopf::GeneratorSetPtr;
using superhopf::Parity;

// ---------------------------------------------------------------------------
// Expression language: rational literals, z1, z2, t, + - * / ^, parentheses
// ---------------------------------------------------------------------------

struct ExprAst;
using ExprPtr = std::shared_ptr<const ExprAst>;

struct ExprAst {
    enum class Kind { number, variable, add, sub, mul, divide, power, negate };
    Kind kind;
    Rational value;        // number
    std::string var;       // variable: "z1", "z2", "t"
    ExprPtr lhs, rhs;      // binary nodes; power uses lhs and exponent
    int exponent = 0;      // power
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

ExprPtr parse_expr_text(const std::string& text);
std::string print_expr(const ExprPtr& e);

/// Lower to the exact function ring; divisions are expanded t-adically and
/// must stay inside the pole whitelist.
RatFn lower_expr(const ExprPtr& e, int t_trunc);

inline RatFn parse_expr(const std::string& text, int t_trunc) {
    return lower_expr(parse_expr_text(text), t_trunc);
}

// ---------------------------------------------------------------------------
// Model documents
// ---------------------------------------------------------------------------

struct ModelDoc {
    struct Entry {
        std::string genA, genB;
        std::string expr;
    };
    std::vector<std::pair<std::string, Parity>> generators;
    std::vector<Entry> entries;
    int t_trunc = 4;
    int d_trunc = 3;
    int degree_bound = 2;
    bool compose_twist = true;
    std::string name = "model";
};

/// Line-oriented format: `generator <name> <parity>`, `bichar <a> <b> = <expr>`,
/// `option <key> <value>`, `#` comments.
ModelDoc parse_model_doc(const std::string& text, const std::string& name = "model");
ModelDoc load_model_file(const std::string& path);

qva::Model load_model(const ModelDoc& doc);

// ---------------------------------------------------------------------------
// Built-in catalog
// ---------------------------------------------------------------------------

std::vector<std::string> builtin_names();
bool is_builtin(const std::string& name);

/// The catalog is generated in code so the golden tests cannot drift from the
/// shipped models; t_trunc controls the truncated series entries.
ModelDoc builtin_doc(const std::string& name, int t_trunc = 4);

// ---------------------------------------------------------------------------
// Element text: `phi[0]*psi[1]` with an optional rational coefficient prefix,
// summed with + and -; `1` is the vacuum.
// ---------------------------------------------------------------------------

superhopf::ScalarElement parse_element(const superhopf::GeneratorSet& gs, const std::string& text);

}  // namespace qvaforge::modelio
