#include "qvaforge/modelio.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace qvaforge::modelio {

using fnring::Var;
using superhopf::GeneratorDecl;
using superhopf::GeneratorSet;
using superhopf::GenPower;
using superhopf::Monomial;
using superhopf::ScalarElement;

// ---------------------------------------------------------------------------
// Expression parsing
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char get() {
        skip_ws();
        return pos < s.size() ? s[pos++] : '\0';
    }
    [[noreturn]] void error(const std::string& what) {
        fail(ErrorCode::SyntaxError, what + " at position " + std::to_string(pos) + " in '" + s + "'");
    }
};

ExprPtr make_num(const Rational& q) {
    auto e = std::make_shared<ExprAst>();
    e->kind = ExprAst::Kind::number;
    e->value = q;
    return e;
}

ExprPtr make_var(const std::string& v) {
    auto e = std::make_shared<ExprAst>();
    e->kind = ExprAst::Kind::variable;
    e->var = v;
    return e;
}

ExprPtr make_bin(ExprAst::Kind k, ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<ExprAst>();
    e->kind = k;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

ExprPtr make_pow(ExprPtr base, int n) {
    auto e = std::make_shared<ExprAst>();
    e->kind = ExprAst::Kind::power;
    e->lhs = std::move(base);
    e->exponent = n;
    return e;
}

ExprPtr make_neg(ExprPtr a) {
    auto e = std::make_shared<ExprAst>();
    e->kind = ExprAst::Kind::negate;
    e->lhs = std::move(a);
    return e;
}

ExprPtr parse_sum(Lexer& lx);

int parse_int(Lexer& lx) {
    bool neg = false;
    if (lx.peek() == '-') {
        lx.get();
        neg = true;
    }
    if (!std::isdigit(static_cast<unsigned char>(lx.peek()))) lx.error("expected an integer");
    long v = 0;
    while (lx.pos < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.pos]))) {
        v = v * 10 + (lx.s[lx.pos] - '0');
        ++lx.pos;
    }
    return static_cast<int>(neg ? -v : v);
}

ExprPtr parse_atom(Lexer& lx) {
    char c = lx.peek();
    if (c == '(') {
        lx.get();
        ExprPtr e = parse_sum(lx);
        if (lx.get() != ')') lx.error("expected ')'");
        return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        while (lx.pos < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.pos])))
            num += lx.s[lx.pos++];
        return make_num(Rational(BigInt(num)));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string name;
        while (lx.pos < lx.s.size() &&
               (std::isalnum(static_cast<unsigned char>(lx.s[lx.pos])) || lx.s[lx.pos] == '_'))
            name += lx.s[lx.pos++];
        if (name != "z1" && name != "z2" && name != "t")
            fail(ErrorCode::UnknownVariable, "'" + name + "' is not one of z1, z2, t");
        return make_var(name);
    }
    lx.error("expected a number, variable or '('");
}

ExprPtr parse_factor(Lexer& lx) {
    if (lx.peek() == '-') {
        lx.get();
        return make_neg(parse_factor(lx));
    }
    ExprPtr base = parse_atom(lx);
    if (lx.peek() == '^') {
        lx.get();
        int n = parse_int(lx);
        return make_pow(std::move(base), n);
    }
    return base;
}

ExprPtr parse_term(Lexer& lx) {
    ExprPtr e = parse_factor(lx);
    while (true) {
        char c = lx.peek();
        if (c == '*') {
            lx.get();
            e = make_bin(ExprAst::Kind::mul, std::move(e), parse_factor(lx));
        } else if (c == '/') {
            lx.get();
            e = make_bin(ExprAst::Kind::divide, std::move(e), parse_factor(lx));
        } else {
            return e;
        }
    }
}

ExprPtr parse_sum(Lexer& lx) {
    ExprPtr e = parse_term(lx);
    while (true) {
        char c = lx.peek();
        if (c == '+') {
            lx.get();
            e = make_bin(ExprAst::Kind::add, std::move(e), parse_term(lx));
        } else if (c == '-') {
            lx.get();
            e = make_bin(ExprAst::Kind::sub, std::move(e), parse_term(lx));
        } else {
            return e;
        }
    }
}

}  // namespace

ExprPtr parse_expr_text(const std::string& text) {
    Lexer lx{text};
    ExprPtr e = parse_sum(lx);
    if (lx.peek() != '\0') lx.error("trailing input");
    return e;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return a == b;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case ExprAst::Kind::number: return a->value == b->value;
        case ExprAst::Kind::variable: return a->var == b->var;
        case ExprAst::Kind::negate: return expr_equal(a->lhs, b->lhs);
        case ExprAst::Kind::power: return a->exponent == b->exponent && expr_equal(a->lhs, b->lhs);
        default: return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    }
}

std::string print_expr(const ExprPtr& e) {
    switch (e->kind) {
        case ExprAst::Kind::number: return to_string(e->value);
        case ExprAst::Kind::variable: return e->var;
        case ExprAst::Kind::negate: return "-(" + print_expr(e->lhs) + ")";
        case ExprAst::Kind::power: {
            std::string ex = std::to_string(e->exponent);
            if (e->exponent < 0) ex = "(" + ex + ")";
            return "(" + print_expr(e->lhs) + ")^" + ex;
        }
        case ExprAst::Kind::add: return "(" + print_expr(e->lhs) + " + " + print_expr(e->rhs) + ")";
        case ExprAst::Kind::sub: return "(" + print_expr(e->lhs) + " - " + print_expr(e->rhs) + ")";
        case ExprAst::Kind::mul: return "(" + print_expr(e->lhs) + "*" + print_expr(e->rhs) + ")";
        case ExprAst::Kind::divide:
            return "(" + print_expr(e->lhs) + "/" + print_expr(e->rhs) + ")";
    }
    return "?";
}

RatFn lower_expr(const ExprPtr& e, int t_trunc) {
    switch (e->kind) {
        case ExprAst::Kind::number: return RatFn::constant(e->value, t_trunc);
        case ExprAst::Kind::variable:
            if (e->var == "t") return RatFn::t_power(1, t_trunc);
            return RatFn::variable(e->var == "z1" ? Var::z1 : Var::z2, t_trunc);
        case ExprAst::Kind::negate: return -lower_expr(e->lhs, t_trunc);
        case ExprAst::Kind::add: return lower_expr(e->lhs, t_trunc) + lower_expr(e->rhs, t_trunc);
        case ExprAst::Kind::sub: return lower_expr(e->lhs, t_trunc) - lower_expr(e->rhs, t_trunc);
        case ExprAst::Kind::mul: return lower_expr(e->lhs, t_trunc) * lower_expr(e->rhs, t_trunc);
        case ExprAst::Kind::divide:
            try {
                return RatFn::div(lower_expr(e->lhs, t_trunc), lower_expr(e->rhs, t_trunc));
            } catch (const Error& err) {
                if (err.code() == ErrorCode::DivisionOutsideRing)
                    fail(ErrorCode::DisallowedPole, err.what());
                throw;
            }
        case ExprAst::Kind::power: {
            RatFn base = lower_expr(e->lhs, t_trunc);
            if (e->exponent >= 0) return base.pow(e->exponent);
            try {
                return base.inverse().pow(-e->exponent);
            } catch (const Error& err) {
                if (err.code() == ErrorCode::DivisionOutsideRing)
                    fail(ErrorCode::DisallowedPole, err.what());
                throw;
            }
        }
    }
    fail(ErrorCode::BadInput, "bad expression node");
}

// ---------------------------------------------------------------------------
// Model documents
// ---------------------------------------------------------------------------

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

}  // namespace

ModelDoc parse_model_doc(const std::string& text, const std::string& name) {
    ModelDoc doc;
    doc.name = name;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto where = [&] { return name + ":" + std::to_string(lineno); };
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

        if (line.find("bichar") == line.find_first_not_of(" \t")) {
            auto eq = line.find('=');
            if (eq == std::string::npos)
                fail(ErrorCode::SyntaxError, where() + ": bichar line needs '='");
            auto head = split_ws(line.substr(0, eq));
            if (head.size() != 3 || head[0] != "bichar")
                fail(ErrorCode::SyntaxError, where() + ": expected 'bichar <a> <b> = <expr>'");
            doc.entries.push_back(ModelDoc::Entry{head[1], head[2], line.substr(eq + 1)});
            continue;
        }
        auto toks = split_ws(line);
        if (toks[0] == "generator") {
            if (toks.size() != 3 || (toks[2] != "even" && toks[2] != "odd"))
                fail(ErrorCode::SyntaxError, where() + ": expected 'generator <name> <even|odd>'");
            doc.generators.emplace_back(toks[1], toks[2] == "odd" ? Parity::odd : Parity::even);
        } else if (toks[0] == "option") {
            if (toks.size() != 3)
                fail(ErrorCode::SyntaxError, where() + ": expected 'option <key> <value>'");
            const std::string& key = toks[1];
            const std::string& val = toks[2];
            auto as_int = [&] {
                try {
                    return std::stoi(val);
                } catch (...) {
                    fail(ErrorCode::SyntaxError, where() + ": option " + key + " needs an integer");
                }
            };
            if (key == "t_trunc")
                doc.t_trunc = as_int();
            else if (key == "d_trunc")
                doc.d_trunc = as_int();
            else if (key == "degree_bound")
                doc.degree_bound = as_int();
            else if (key == "compose_twist")
                doc.compose_twist = val == "on" || val == "true" || val == "1";
            else
                fail(ErrorCode::SyntaxError, where() + ": unknown option '" + key + "'");
        } else {
            fail(ErrorCode::SyntaxError, where() + ": unknown directive '" + toks[0] + "'");
        }
    }
    return doc;
}

ModelDoc load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::BadInput, "cannot open model file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model_doc(ss.str(), path);
}

qva::Model load_model(const ModelDoc& doc) {
    if (doc.generators.empty()) fail(ErrorCode::ValidationFailed, "model declares no generators");
    std::vector<GeneratorDecl> decls;
    for (const auto& [n, p] : doc.generators) decls.push_back(GeneratorDecl{n, p});
    auto gens = std::make_shared<const GeneratorSet>(GeneratorSet::from_decls(std::move(decls)));

    bichar::Bicharacter r(gens, doc.t_trunc, fnring::RingProfile::w2());
    for (const auto& entry : doc.entries) {
        int a = gens->rank_of(entry.genA);
        int b = gens->rank_of(entry.genB);
        if (a < 0 || b < 0)
            fail(ErrorCode::ValidationFailed, "bichar entry references undeclared generator (" +
                                                  entry.genA + ", " + entry.genB + ")");
        r.set_entry(a, b, parse_expr(entry.expr, doc.t_trunc));
    }
    return qva::Model::make(std::move(r), doc.d_trunc, doc.degree_bound, doc.compose_twist,
                            doc.name);
}

// ---------------------------------------------------------------------------
// Built-in catalog
// ---------------------------------------------------------------------------

std::vector<std::string> builtin_names() {
    return {"charged_free_fermion", "fermion_ek", "fermion_hd", "fermion_essential"};
}

bool is_builtin(const std::string& name) {
    for (const auto& n : builtin_names())
        if (n == name) return true;
    return false;
}

namespace {

ModelDoc fermion_base(const std::string& name, int T) {
    ModelDoc doc;
    doc.name = name;
    doc.t_trunc = T;
    doc.generators = {{"phi", Parity::odd}, {"psi", Parity::odd}};
    doc.entries = {{"phi", "phi", "0"}, {"psi", "psi", "0"}};
    return doc;
}

/// truncated exponential of t/(z1-z2): sum_k t^k / (k! (z1-z2)^k)
std::string essential_series(int T) {
    std::ostringstream os;
    os << "1";
    BigInt fact = 1;
    for (int k = 1; k < T; ++k) {
        fact *= k;
        os << " + 1/" << fact.str() << "*t^" << k << "/(z1-z2)^" << k;
    }
    return os.str();
}

}  // namespace

ModelDoc builtin_doc(const std::string& name, int t_trunc) {
    if (name == "charged_free_fermion") {
        ModelDoc doc = fermion_base(name, t_trunc);
        doc.entries.push_back({"phi", "psi", "1/(z1-z2)"});
        doc.entries.push_back({"psi", "phi", "1/(z1-z2)"});
        return doc;
    }
    if (name == "fermion_ek") {
        ModelDoc doc = fermion_base(name, t_trunc);
        doc.entries.push_back({"phi", "psi", "1/(z1-z2-t)"});
        doc.entries.push_back({"psi", "phi", "1/(z1-z2-t)"});
        return doc;
    }
    if (name == "fermion_hd") {
        ModelDoc doc = fermion_base(name, t_trunc);
        doc.entries.push_back({"phi", "psi", "1/(z1-z2) + t/z1"});
        doc.entries.push_back({"psi", "phi", "1/(z1-z2)"});
        return doc;
    }
    if (name == "fermion_essential") {
        ModelDoc doc = fermion_base(name, t_trunc);
        doc.entries.push_back({"phi", "psi", essential_series(t_trunc)});
        doc.entries.push_back({"psi", "phi", essential_series(t_trunc)});
        return doc;
    }
    fail(ErrorCode::BadInput, "unknown builtin '" + name + "'; available: charged_free_fermion, "
                              "fermion_ek, fermion_hd, fermion_essential");
}

// ---------------------------------------------------------------------------
// Element text
// ---------------------------------------------------------------------------

namespace {

/// one product term: [rational] [* name[idx]]*
std::pair<Monomial, Rational> parse_element_term(const GeneratorSet& gs, Lexer& lx) {
    Rational coef(1);
    std::vector<GenPower> word;
    bool first = true;
    while (true) {
        char c = lx.peek();
        if (std::isdigit(static_cast<unsigned char>(c)) && first) {
            std::string num;
            while (lx.pos < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.pos])))
                num += lx.s[lx.pos++];
            coef = Rational(BigInt(num));
            if (lx.peek() == '/') {
                lx.get();
                std::string den;
                while (lx.pos < lx.s.size() &&
                       std::isdigit(static_cast<unsigned char>(lx.s[lx.pos])))
                    den += lx.s[lx.pos++];
                if (den.empty()) lx.error("expected a denominator");
                coef /= Rational(BigInt(den));
            }
        } else if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (lx.pos < lx.s.size() &&
                   (std::isalnum(static_cast<unsigned char>(lx.s[lx.pos])) || lx.s[lx.pos] == '_'))
                name += lx.s[lx.pos++];
            int rank = gs.rank_of(name);
            if (rank < 0) fail(ErrorCode::BadInput, "unknown generator '" + name + "'");
            int d = 0;
            if (lx.peek() == '[') {
                lx.get();
                d = parse_int(lx);
                if (d < 0) lx.error("derivation degree must be non-negative");
                if (lx.get() != ']') lx.error("expected ']'");
            }
            word.push_back(GenPower{rank, d, gs.odd(rank)});
        } else {
            lx.error("expected a coefficient or generator");
        }
        first = false;
        if (lx.peek() == '*') {
            lx.get();
            continue;
        }
        break;
    }
    auto norm = superhopf::normalize_word(std::move(word));
    if (!norm) return {Monomial::unit(), Rational(0)};
    return {norm->second, coef * Rational(norm->first)};
}

}  // namespace

ScalarElement parse_element(const GeneratorSet& gs, const std::string& text) {
    Lexer lx{text};
    ScalarElement out;
    bool neg = false;
    if (lx.peek() == '-') {
        lx.get();
        neg = true;
    }
    while (true) {
        auto [mono, coef] = parse_element_term(gs, lx);
        out.add_term(mono, neg ? -coef : coef);
        char c = lx.peek();
        if (c == '+') {
            lx.get();
            neg = false;
        } else if (c == '-') {
            lx.get();
            neg = true;
        } else if (c == '\0') {
            break;
        } else {
            lx.error("expected '+', '-' or end of element");
        }
    }
    return out;
}

}  // namespace qvaforge::modelio
