// Python bindings exposing the checker's main operations: analyzing a source
// text, dumping its clause encoding, and asking inhabitation queries.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <stdexcept>

#include "gmlcheck/driver.hpp"
#include "gmlcheck/horn.hpp"

namespace py = pybind11;
using namespace gml;

namespace {

SplitPolicy policy_of(const std::string& name, long fuel) {
    if (name == "once") return SplitPolicy::once();
    if (name == "full") return SplitPolicy::full(fuel);
    if (name == "never") return SplitPolicy::never();
    throw std::invalid_argument("split must be one of: never, once, full");
}

py::dict diag_to_dict(const Diagnostic& d, const std::string& file) {
    py::dict out;
    out["kind"] = diagnostic_kind_name(d.kind);
    out["check"] = d.check_index;
    out["arm"] = d.arm;
    out["line"] = d.loc.line;
    out["col"] = d.loc.col;
    out["suggest_refutation"] = d.suggest_refutation;
    out["witness"] = d.witness ? print_pattern(d.witness) : std::string();
    out["message"] = d.message;
    out["rendered"] = render_human(d, file);
    out["is_error"] = diagnostic_is_error(d);
    return out;
}

py::dict check_text(const std::string& text, const std::string& filename,
                    const std::string& split, long fuel) {
    SurfaceProgram prog;
    try {
        prog = parse_program(text, filename);
    } catch (const SyntaxError& e) {
        throw std::invalid_argument(filename + ":" + std::to_string(e.loc.line) + ":" +
                                    std::to_string(e.loc.col) + ": " + e.what());
    }
    CheckConfig cfg;
    cfg.exhaustive_policy = policy_of(split, fuel);
    std::vector<TypeDeclSyntax> prelude =
        parse_prelude(default_prelude_text(), "<prelude>");
    ProgramReport rep = check_program(prog, prelude, cfg);

    py::list diags;
    long leaves = 0, splits = 0;
    if (rep.program_error) diags.append(diag_to_dict(*rep.program_error, filename));
    for (const CheckReport& c : rep.checks) {
        for (const Diagnostic& d : c.diagnostics) diags.append(diag_to_dict(d, filename));
        leaves += c.stats.leaves;
        splits += c.stats.splits;
    }
    py::dict out;
    out["diagnostics"] = diags;
    out["leaves"] = leaves;
    out["splits"] = splits;
    out["exit_code"] = rep.any_error() ? 2 : rep.any_warning() ? 1 : 0;
    return out;
}

std::vector<std::string> clauses_text(const std::string& text) {
    SurfaceProgram prog;
    try {
        prog = parse_program(text, "<input>");
    } catch (const SyntaxError& e) {
        throw std::invalid_argument(std::string(e.what()) + " at line " +
                                    std::to_string(e.loc.line));
    }
    std::vector<TypeDeclSyntax> prelude =
        parse_prelude(default_prelude_text(), "<prelude>");
    Env env = elaborate_env(prelude, prog.decls);
    HornProgram hprog = horn_encode(env);
    std::vector<std::string> lines;
    lines.reserve(hprog.clauses.size());
    for (const HornClause& c : hprog.clauses) lines.push_back(print_clause(c));
    return lines;
}

py::dict oracle(const std::string& decls_text, const std::string& type_text, int depth) {
    SurfaceProgram prog;
    try {
        prog = parse_program(decls_text, "<input>");
    } catch (const SyntaxError& e) {
        throw std::invalid_argument(std::string(e.what()) + " at line " +
                                    std::to_string(e.loc.line));
    }
    std::vector<TypeDeclSyntax> prelude =
        parse_prelude(default_prelude_text(), "<prelude>");
    Env env = elaborate_env(prelude, prog.decls);

    TypeExprPtr te;
    try {
        te = parse_type_expr(type_text);
    } catch (const SyntaxError& e) {
        throw std::invalid_argument("bad type expression: " + std::string(e.what()));
    }
    InferSession session;
    std::map<std::string, Type> vars;
    Type goal = type_of_expr(te, env, session, vars);

    HornProgram hprog = horn_encode(env);
    ResolutionResult r = sld_inhabited(goal, depth, hprog, env);
    py::dict out;
    switch (r.kind) {
        case ResolutionResult::Kind::Witness:
            out["kind"] = "witness";
            out["witness"] = print_pattern(r.witness);
            break;
        case ResolutionResult::Kind::NoProofWithinDepth:
            out["kind"] = "no-proof-within-depth";
            break;
        case ResolutionResult::Kind::DepthExhausted:
            out["kind"] = "depth-exhausted";
            break;
    }
    out["depth"] = r.depth;
    out["applications"] = r.applications;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exhaustiveness and redundancy checking for matches over indexed variants";
    m.def("check_text", &check_text, py::arg("text"), py::arg("filename") = "<input>",
          py::arg("split") = "never", py::arg("fuel") = 4096L,
          "Analyze every check block in a source text; returns diagnostics and stats.");
    m.def("clauses_text", &clauses_text, py::arg("text"),
          "Clause encoding of the declarations in a source text, one line each.");
    m.def("oracle", &oracle, py::arg("decls_text"), py::arg("type_text"),
          py::arg("depth") = 10,
          "Ask whether a type is inhabited; returns the verdict and any witness.");
}
