// Command-line front end: check match blocks, dump the clause encoding of the
// types in scope, answer inhabitation queries, and time the checker.
//
// Exit codes: 0 clean, 1 warnings, 2 errors (bad input or failed refutation),
// 64 usage problems, 66 unreadable input files.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "gmlcheck/driver.hpp"
#include "gmlcheck/horn.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitWarnings = 1;
constexpr int kExitErrors = 2;
constexpr int kExitUsage = 64;
constexpr int kExitNoInput = 66;
constexpr int kOracleCheckDepth = 6;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

struct LoadedProgram {
    gml::SurfaceProgram program;
    std::vector<gml::TypeDeclSyntax> prelude;
    gml::Env env;
    std::string file;
};

// Reads, parses, and elaborates a source file plus its prelude. On failure
// prints a message and returns the exit code instead.
std::variant<LoadedProgram, int> load(const std::string& path,
                                      const std::string& prelude_path) {
    LoadedProgram out;
    out.file = path;
    std::optional<std::string> text = read_file(path);
    if (!text) {
        std::cerr << "gmlcheck: cannot read " << path << "\n";
        return kExitNoInput;
    }
    try {
        out.program = gml::parse_program(*text, path);
    } catch (const gml::SyntaxError& e) {
        std::cerr << path << ':' << e.loc.line << ':' << e.loc.col
                  << ": error: " << e.what() << "\n";
        return kExitErrors;
    }
    if (prelude_path.empty()) {
        out.prelude = gml::parse_prelude(gml::default_prelude_text(), "<prelude>");
    } else {
        std::optional<std::string> ptext = read_file(prelude_path);
        if (!ptext) {
            std::cerr << "gmlcheck: cannot read " << prelude_path << "\n";
            return kExitNoInput;
        }
        try {
            out.prelude = gml::parse_prelude(*ptext, prelude_path);
        } catch (const gml::SyntaxError& e) {
            std::cerr << prelude_path << ':' << e.loc.line << ':' << e.loc.col
                      << ": error: " << e.what() << "\n";
            return kExitErrors;
        }
    }
    try {
        out.env = gml::elaborate_env(out.prelude, out.program.decls);
    } catch (const gml::TypeError& e) {
        std::cerr << path << ':' << e.loc.line << ':' << e.loc.col
                  << ": error: " << e.what() << "\n";
        return kExitErrors;
    }
    return out;
}

gml::SplitPolicy policy_of(const std::string& name, long fuel) {
    if (name == "once") return gml::SplitPolicy::once();
    if (name == "full") return gml::SplitPolicy::full(fuel);
    return gml::SplitPolicy::never();
}

int run_check(const std::string& path, const std::string& prelude_path,
              const std::string& split, long fuel, bool compat, bool machine,
              bool oracle_check) {
    auto loaded = load(path, prelude_path);
    if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
    LoadedProgram& lp = std::get<LoadedProgram>(loaded);

    gml::CheckConfig cfg;
    cfg.exhaustive_policy = policy_of(split, fuel);
    std::vector<gml::RecordedQuery> recorded;
    if (oracle_check)
        cfg.collector = [&recorded](const gml::RecordedQuery& q) {
            recorded.push_back(q);
        };

    std::vector<gml::Diagnostic> all;
    for (size_t i = 0; i < lp.program.checks.size(); ++i) {
        gml::CheckReport rep = gml::check_match(lp.program.checks[i],
                                                static_cast<int>(i) + 1, lp.env, cfg);
        for (gml::Diagnostic& d : rep.diagnostics) all.push_back(std::move(d));
    }

    bool first = true;
    for (const gml::Diagnostic& d : all) {
        if (machine) {
            std::cout << gml::render_machine(d) << "\n";
            continue;
        }
        if (compat) {
            std::string text = gml::render_compat(d);
            if (text.empty()) text = gml::render_human(d, lp.file);
            if (!first) std::cout << "\n";
            std::cout << text << "\n";
            first = false;
            continue;
        }
        std::cout << gml::render_human(d, lp.file) << "\n";
    }

    bool any_error = false;
    bool any_warning = false;
    for (const gml::Diagnostic& d : all)
        (gml::diagnostic_is_error(d) ? any_error : any_warning) = true;

    if (oracle_check) {
        gml::HornProgram hprog = gml::horn_encode(lp.env);
        long confirmed = 0, unresolved = 0, disagreed = 0;
        for (const gml::RecordedQuery& q : recorded) {
            if (q.verdict != gml::Emptiness::Empty) continue;
            gml::QueryResult r =
                gml::query_pattern(q.pattern, q.type, kOracleCheckDepth, hprog, lp.env);
            switch (r.verdict) {
                case gml::QueryVerdict::Refuted:
                    ++confirmed;
                    break;
                case gml::QueryVerdict::Unknown:
                    ++unresolved;
                    std::cout << "oracle-check: unresolved: pattern "
                              << gml::print_pattern(q.pattern) << " at type "
                              << gml::print_type(q.type) << "\n";
                    break;
                case gml::QueryVerdict::Proved:
                    ++disagreed;
                    any_error = true;
                    std::cout << "oracle-check: disagreement: pattern "
                              << gml::print_pattern(q.pattern) << " at type "
                              << gml::print_type(q.type)
                              << " was judged empty but a matching value exists\n";
                    break;
            }
        }
        std::cout << "oracle-check: " << confirmed << " empty verdicts confirmed, "
                  << unresolved << " unresolved, " << disagreed << " disagreements\n";
    }

    if (any_error) return kExitErrors;
    if (any_warning) return kExitWarnings;
    return kExitClean;
}

int run_clauses(const std::string& path, const std::string& prelude_path) {
    auto loaded = load(path, prelude_path);
    if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
    LoadedProgram& lp = std::get<LoadedProgram>(loaded);
    gml::HornProgram prog = gml::horn_encode(lp.env);
    for (const gml::HornClause& c : prog.clauses) std::cout << gml::print_clause(c) << "\n";
    return kExitClean;
}

int run_oracle(const std::string& path, const std::string& prelude_path,
               const std::string& type_text, int depth) {
    auto loaded = load(path, prelude_path);
    if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
    LoadedProgram& lp = std::get<LoadedProgram>(loaded);

    gml::TypeExprPtr te;
    try {
        te = gml::parse_type_expr(type_text);
    } catch (const gml::SyntaxError& e) {
        std::cerr << "gmlcheck: bad --type argument: " << e.what() << "\n";
        return kExitUsage;
    }
    gml::InferSession session;
    gml::Type goal;
    try {
        std::map<std::string, gml::Type> vars;
        goal = gml::type_of_expr(te, lp.env, session, vars);
    } catch (const gml::TypeError& e) {
        std::cerr << "gmlcheck: bad --type argument: " << e.what() << "\n";
        return kExitUsage;
    }

    gml::HornProgram hprog = gml::horn_encode(lp.env);
    gml::ResolutionResult r = gml::sld_inhabited(goal, depth, hprog, lp.env);
    switch (r.kind) {
        case gml::ResolutionResult::Kind::Witness:
            std::cout << "witness depth=" << r.depth << " " << gml::print_pattern(r.witness)
                      << "\n";
            break;
        case gml::ResolutionResult::Kind::NoProofWithinDepth:
            std::cout << "no-proof-within-depth depth=" << r.depth << "\n";
            break;
        case gml::ResolutionResult::Kind::DepthExhausted:
            std::cout << "depth-exhausted depth=" << r.depth << "\n";
            break;
    }
    return kExitClean;
}

int run_bench(const std::string& path, const std::string& prelude_path,
              const std::string& split, long fuel) {
    auto loaded = load(path, prelude_path);
    if (std::holds_alternative<int>(loaded)) return std::get<int>(loaded);
    LoadedProgram& lp = std::get<LoadedProgram>(loaded);

    gml::CheckConfig cfg;
    cfg.exhaustive_policy = policy_of(split, fuel);
    double total_ms = 0.0;
    for (size_t i = 0; i < lp.program.checks.size(); ++i) {
        auto start = std::chrono::steady_clock::now();
        gml::CheckReport rep = gml::check_match(lp.program.checks[i],
                                                static_cast<int>(i) + 1, lp.env, cfg);
        auto stop = std::chrono::steady_clock::now();
        double ms = std::chrono::duration<double, std::milli>(stop - start).count();
        total_ms += ms;
        bool err = false, warn = false;
        for (const gml::Diagnostic& d : rep.diagnostics)
            (gml::diagnostic_is_error(d) ? err : warn) = true;
        const char* status = err ? "errors" : warn ? "warnings" : "clean";
        std::ostringstream line;
        line.setf(std::ios::fixed);
        line.precision(2);
        line << "check " << (i + 1) << ": " << status << " " << ms
             << " ms leaves=" << rep.stats.leaves << " splits=" << rep.stats.splits
             << " diagnostics=" << rep.diagnostics.size();
        std::cout << line.str() << "\n";
    }
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << "total " << total_ms << " ms";
    std::cout << line.str() << "\n";
    return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exhaustiveness and redundancy checker for matches over indexed variants"};
    app.require_subcommand(1);

    std::string file;
    std::string prelude_path;
    std::string split = "never";
    long fuel = 4096;
    bool compat = false;
    bool machine = false;
    bool oracle_check = false;
    std::string type_text;
    int depth = 10;

    CLI::App* check = app.add_subcommand("check", "Analyze the match checks of a file");
    check->add_option("file", file, "source file")->required();
    check->add_option("--split", split, "wildcard splitting for multi-arm exhaustiveness")
        ->check(CLI::IsMember({"never", "once", "full"}));
    check->add_option("--fuel", fuel, "split budget for --split full");
    check->add_option("--prelude", prelude_path, "replace the built-in prelude");
    check->add_flag("--ocaml-compat-messages", compat,
                    "render warnings in classic compiler wording");
    check->add_flag("--machine", machine, "tab-separated machine-readable output");
    check->add_flag("--oracle-check", oracle_check,
                    "re-verify every emptiness verdict against the clause oracle");

    CLI::App* clauses = app.add_subcommand("clauses", "Print the clause encoding of all types");
    clauses->add_option("file", file, "source file")->required();
    clauses->add_option("--prelude", prelude_path, "replace the built-in prelude");

    CLI::App* oracle = app.add_subcommand("oracle", "Ask whether a type is inhabited");
    oracle->add_option("file", file, "source file providing declarations")->required();
    oracle->add_option("--type", type_text, "type expression to query")->required();
    oracle->add_option("--depth", depth, "iterative deepening bound");
    oracle->add_option("--prelude", prelude_path, "replace the built-in prelude");

    CLI::App* bench = app.add_subcommand("bench", "Time each check of a file");
    bench->add_option("file", file, "source file")->required();
    bench->add_option("--split", split, "wildcard splitting for multi-arm exhaustiveness")
        ->check(CLI::IsMember({"never", "once", "full"}));
    bench->add_option("--fuel", fuel, "split budget for --split full");
    bench->add_option("--prelude", prelude_path, "replace the built-in prelude");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (check->parsed()) {
        if (compat && machine) {
            std::cerr << "gmlcheck: --machine and --ocaml-compat-messages are exclusive\n";
            return kExitUsage;
        }
        return run_check(file, prelude_path, split, fuel, compat, machine, oracle_check);
    }
    if (clauses->parsed()) return run_clauses(file, prelude_path);
    if (oracle->parsed()) return run_oracle(file, prelude_path, type_text, depth);
    if (bench->parsed()) return run_bench(file, prelude_path, split, fuel);
    return kExitUsage;
}
