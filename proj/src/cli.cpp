#include "qvaforge/cli.hpp"

#include <CLI11.hpp>

#include <sstream>

#include "qvaforge/modelio.hpp"
#include "qvaforge/qva.hpp"

namespace qvaforge::cli {

using fnring::LaurentExp;
using fnring::RatFn;
using fnring::Var;
using modelio::ModelDoc;
using superhopf::ScalarElement;

namespace {

struct GlobalOpts {
    std::string model_path;
    std::string builtin;
    int t_order = -1;
    int d_order = -1;
    int degree_bound = -1;
    std::string format = "text";
};

qva::Model resolve_model(const GlobalOpts& g) {
    ModelDoc doc;
    if (!g.builtin.empty() && !g.model_path.empty())
        fail(ErrorCode::BadInput, "give either --model or --builtin, not both");
    if (!g.builtin.empty()) {
        doc = modelio::builtin_doc(g.builtin, g.t_order >= 0 ? g.t_order : 4);
    } else if (!g.model_path.empty()) {
        doc = modelio::load_model_file(g.model_path);
        if (g.t_order >= 0) doc.t_trunc = g.t_order;
    } else {
        fail(ErrorCode::BadInput, "a model is required: --model PATH or --builtin NAME");
    }
    if (g.d_order >= 0) doc.d_trunc = g.d_order;
    if (g.degree_bound >= 0) doc.degree_bound = g.degree_bound;
    return modelio::load_model(doc);
}

std::string format_ope(const qva::OPEData& d, const superhopf::GeneratorSet& gs,
                       const std::string& format) {
    std::ostringstream os;
    if (format == "machine") {
        if (d.singular.empty()) {
            os << "empty\n";
        } else {
            for (auto it = d.singular.rbegin(); it != d.singular.rend(); ++it)
                os << "pole " << it->first + 1 << ": " << it->second.str(gs) << "\n";
        }
        return os.str();
    }
    if (d.singular.empty()) return "{}\n";
    os << "{ ";
    bool first = true;
    for (auto it = d.singular.rbegin(); it != d.singular.rend(); ++it) {
        if (!first) os << "; ";
        first = false;
        os << "pole " << it->first + 1 << ": " << it->second.str(gs);
    }
    os << " }\n";
    return os.str();
}

}  // namespace

CliResult run_cli(const std::vector<std::string>& args) {
    CliResult res;
    CLI::App app{"exact engine for bicharacter-constructed quantum vertex algebras", "qva-forge"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--model", g.model_path, "model definition file");
    app.add_option("--builtin", g.builtin, "built-in model name");
    app.add_option("--t-order", g.t_order, "t-series truncation override");
    app.add_option("--d-order", g.d_order, "derivation-degree truncation override");
    app.add_option("--degree-bound", g.degree_bound, "monomial degree bound for checks");
    app.add_option("--format", g.format, "output format: text or machine")
        ->check(CLI::IsMember({"text", "machine"}));

    std::string argA, argB, argC, smapKind, checkWhat = "all", exprText, mapSpec;
    int residueN = 0, expandOrder = 4;

    CLI::App* opeCmd = app.add_subcommand("ope", "operator product expansion of Y(A,z)Y(B,w)");
    opeCmd->add_option("A", argA)->required();
    opeCmd->add_option("B", argB)->required();

    CLI::App* nopCmd = app.add_subcommand("nop", "normal ordered product :Y(A,z)Y(B,z): at z=w");
    nopCmd->add_option("A", argA)->required();
    nopCmd->add_option("B", argB)->required();

    CLI::App* x2Cmd = app.add_subcommand("x2", "two-point singular multiplication X_{z1,z2}");
    x2Cmd->add_option("A", argA)->required();
    x2Cmd->add_option("B", argB)->required();

    CLI::App* x3Cmd = app.add_subcommand("x3", "three-point map X_{z1,z2,z3}");
    x3Cmd->add_option("A", argA)->required();
    x3Cmd->add_option("B", argB)->required();
    x3Cmd->add_option("C", argC)->required();

    CLI::App* resCmd = app.add_subcommand("residue", "Res_{z=w} X_{z,w,0}(A,B,C) (z-w)^n dz");
    resCmd->add_option("A", argA)->required();
    resCmd->add_option("B", argB)->required();
    resCmd->add_option("C", argC)->required();
    resCmd->add_option("--n", residueN, "weight (z-w)^n")->required();

    CLI::App* smapCmd = app.add_subcommand("smap", "braiding or translation map on A (x) B");
    smapCmd->add_option("kind", smapKind)->required()->check(CLI::IsMember({"tau", "gamma"}));
    smapCmd->add_option("A", argA)->required();
    smapCmd->add_option("B", argB)->required();

    CLI::App* checkCmd = app.add_subcommand("check", "verify quantum vertex algebra axioms");
    checkCmd->add_option("what", checkWhat, "all or one axiom id");

    app.add_subcommand("classify", "classify the model by its bicharacter");

    CLI::App* expandCmd = app.add_subcommand("expand", "iota-expand an expression");
    expandCmd->add_option("EXPR", exprText)->required();
    expandCmd->add_option("--map", mapSpec, "i_{z1;z2} or i_{z2;z1}")->required();
    expandCmd->add_option("--order", expandOrder, "truncation order of the expansion");

    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    std::vector<const char*> argv;
    argv.push_back("qva-forge");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::ostringstream os;
        os << app.help();
        res.out = os.str();
        return res;
    } catch (const CLI::ParseError& e) {
        res.err = std::string(e.what()) + "\n";
        res.exit_code = 2;
        return res;
    }

    std::ostringstream out;
    try {
        if (expandCmd->parsed()) {
            int T = g.t_order >= 0 ? g.t_order : 4;
            RatFn f = modelio::parse_expr(exprText, T);
            Var outer, inner;
            if (mapSpec == "i_{z1;z2}") {
                outer = Var::z1;
                inner = Var::z2;
            } else if (mapSpec == "i_{z2;z1}") {
                outer = Var::z2;
                inner = Var::z1;
            } else {
                fail(ErrorCode::BadInput, "--map must be i_{z1;z2} or i_{z2;z1}");
            }
            LaurentExp e = fnring::iota_expand(f, outer, inner, expandOrder);
            out << e.str() << "\n";
            res.out = out.str();
            return res;
        }

        qva::Model model = resolve_model(g);
        const superhopf::GeneratorSet& gs = *model.gens;
        auto elemArg = [&](const std::string& s) { return modelio::parse_element(gs, s); };

        if (opeCmd->parsed()) {
            out << format_ope(qva::ope(model, elemArg(argA), elemArg(argB)), gs, g.format);
        } else if (nopCmd->parsed()) {
            out << qva::nop(model, elemArg(argA), elemArg(argB)).str(gs) << "\n";
        } else if (x2Cmd->parsed()) {
            out << qva::x2(model, elemArg(argA), elemArg(argB)).value.str(gs) << "\n";
        } else if (x3Cmd->parsed()) {
            out << qva::x3(model, elemArg(argA), elemArg(argB), elemArg(argC)).value.str(gs)
                << "\n";
        } else if (resCmd->parsed()) {
            out << qva::residue(model, elemArg(argA), elemArg(argB), elemArg(argC), residueN)
                       .str(gs)
                << "\n";
        } else if (smapCmd->parsed()) {
            superhopf::FnTensor2 s = smapKind == "tau"
                                         ? qva::s_tau(model, elemArg(argA), elemArg(argB))
                                         : qva::s_gamma(model, elemArg(argA), elemArg(argB));
            out << s.str(gs) << "\n";
        } else if (checkCmd->parsed()) {
            qva::CheckReport report;
            if (checkWhat == "all") {
                report = qva::check_all(model);
            } else {
                auto ax = qva::axiom_from_name(checkWhat);
                if (!ax)
                    fail(ErrorCode::UnsupportedAxiom,
                         "'" + checkWhat + "'; supported: all, vacuum, hd_covariance, yang_baxter, "
                         "compatibility, group_properties, locality, braided_symmetry");
                report = qva::check_axiom(model, *ax);
            }
            out << report.str();
            if (!report.all_pass()) {
                res.exit_code = 1;
                out << "FAILED\n";
            } else {
                out << "all checks passed\n";
            }
        } else if (app.get_subcommand("classify")->parsed()) {
            out << bichar::qva_class_name(bichar::classify(model.r)) << "\n";
        }
        res.out = out.str();
    } catch (const Error& e) {
        res.err = std::string(e.what()) + "\n";
        res.exit_code = 2;
    }
    return res;
}

}  // namespace qvaforge::cli
