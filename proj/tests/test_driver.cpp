#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <string>
#include <vector>

#include "gmlcheck/driver.hpp"
#include "gmlcheck/horn.hpp"
#include "gmlcheck/search.hpp"
#include "enumerate.hpp"
#include "util.hpp"

using namespace gml;

namespace {

ProgramReport run_corpus(const std::string& name, const CheckConfig& cfg = {}) {
    gmltest::LoadedCorpus c = gmltest::load_corpus(name);
    std::vector<TypeDeclSyntax> prelude =
        parse_prelude(default_prelude_text(), "<prelude>");
    return check_program(c.program, prelude, cfg);
}

ProgramReport run_text(const std::string& text, const CheckConfig& cfg = {}) {
    SurfaceProgram prog = parse_program(text, "<test>");
    std::vector<TypeDeclSyntax> prelude =
        parse_prelude(default_prelude_text(), "<prelude>");
    return check_program(prog, prelude, cfg);
}

std::vector<Diagnostic> all_diags(const ProgramReport& rep) {
    std::vector<Diagnostic> out;
    if (rep.program_error) out.push_back(*rep.program_error);
    for (const CheckReport& c : rep.checks)
        out.insert(out.end(), c.diagnostics.begin(), c.diagnostics.end());
    return out;
}

}  // namespace

TEST_CASE("every corpus file reports exactly the recorded diagnostics") {
    struct Expected {
        Diagnostic::Kind kind;
        int arm;
        int line, col;
        std::string witness;  // empty: no witness field expected
        bool suggest;
    };
    // One entry per file; files absent from the map must be clean.
    const std::map<std::string, Expected> expected = {
        {"cmp", {Diagnostic::Kind::NonExhaustive, 0, 8, 1, "Eq", false}},
        {"deeper", {Diagnostic::Kind::NonExhaustive, 0, 4, 1, "Some _", false}},
        {"deepprime", {Diagnostic::Kind::UnreachableCase, 2, 6, 3, "", true}},
        {"halting", {Diagnostic::Kind::NonExhaustive, 0, 31, 1, "Some Tm_fin", false}},
        {"g1", {Diagnostic::Kind::NonExhaustive, 0, 4, 1, "Bool", false}},
        {"harder", {Diagnostic::Kind::NonExhaustive, 0, 8, 1, "Some (PlusS _)", false}},
    };
    const std::vector<std::string> files = {
        "cmp", "deep", "deeper", "deeperprime", "deepprime", "easy", "expr",
        "f", "halting", "g1", "g2", "h", "h2", "harder", "harderprime",
        "inv_zero", "magic", "plus", "stress", "trivial",
    };
    for (const std::string& f : files) {
        CAPTURE(f);
        ProgramReport rep = run_corpus(f + ".gml");
        REQUIRE(!rep.program_error.has_value());
        std::vector<Diagnostic> diags = all_diags(rep);
        auto it = expected.find(f);
        if (it == expected.end()) {
            CHECK(diags.empty());
            CHECK_FALSE(rep.any_warning());
            CHECK_FALSE(rep.any_error());
            continue;
        }
        REQUIRE(diags.size() == 1);
        const Diagnostic& d = diags[0];
        CHECK(d.kind == it->second.kind);
        CHECK(d.check_index == 1);
        CHECK(d.arm == it->second.arm);
        CHECK(d.loc.line == it->second.line);
        CHECK(d.loc.col == it->second.col);
        CHECK(d.suggest_refutation == it->second.suggest);
        if (!it->second.witness.empty()) {
            REQUIRE(d.witness != nullptr);
            CHECK(print_pattern(d.witness) == it->second.witness);
        }
        CHECK(rep.any_warning());
        CHECK_FALSE(rep.any_error());
    }
}

TEST_CASE("classic compiler wording is reproduced byte for byte") {
    std::vector<Diagnostic> g1 = all_diags(run_corpus("g1.gml"));
    REQUIRE(g1.size() == 1);
    CHECK(render_compat(g1[0]) ==
          "Warning 8: this pattern-matching is not exhaustive.\n"
          "Here is an example of a value that is not matched:\n"
          "Bool");

    std::vector<Diagnostic> cmp = all_diags(run_corpus("cmp.gml"));
    REQUIRE(cmp.size() == 1);
    CHECK(render_compat(cmp[0]) ==
          "Warning 8: this pattern-matching is not exhaustive.\n"
          "Here is an example of a value that is not matched:\n"
          "Eq");

    std::vector<Diagnostic> dp = all_diags(run_corpus("deepprime.gml"));
    REQUIRE(dp.size() == 1);
    CHECK(render_compat(dp[0]) ==
          "Warning 56: this match case is unreachable.\n"
          "Consider replacing it with a refutation case '<pat> -> .'");

    // Diagnostics without a classic counterpart render as empty.
    Diagnostic te;
    te.kind = Diagnostic::Kind::TypeError;
    CHECK(render_compat(te).empty());
}

TEST_CASE("the one-line and machine renderers") {
    std::vector<Diagnostic> g1 = all_diags(run_corpus("g1.gml"));
    REQUIRE(g1.size() == 1);
    CHECK(render_human(g1[0], "g1.gml") ==
          "g1.gml:4:1: warning: this match is not exhaustive; an unmatched value: Bool");
    CHECK(render_machine(g1[0]) == "non-exhaustive\t1\t0\t4\t1\t0\tBool\t");

    std::vector<Diagnostic> dp = all_diags(run_corpus("deepprime.gml"));
    REQUIRE(dp.size() == 1);
    CHECK(render_human(dp[0], "deepprime.gml") ==
          "deepprime.gml:6:3: warning: arm 2 is unreachable; no well-typed value can "
          "match it (it could be a refutation arm)");
    CHECK(render_machine(dp[0]) == "unreachable-case\t1\t2\t6\t3\t1\t\t");
}

TEST_CASE("accepting the rewrite suggestion makes the check clean") {
    // deepprime's unreachable arm, restated as the suggested refutation arm.
    ProgramReport rep = run_text(
        "type _ t = Int : int t | Bool : bool t\n"
        "check char t option with\n"
        "| None -> ok\n"
        "| Some _ -> .\n");
    CHECK(all_diags(rep).empty());
}

TEST_CASE("a refutation arm that can match reports the value that reaches it") {
    ProgramReport rep = run_text(
        "check bool option with\n"
        "| None -> ok\n"
        "| Some _ -> .\n");
    std::vector<Diagnostic> diags = all_diags(rep);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].kind == Diagnostic::Kind::RefutationFailed);
    CHECK(diags[0].arm == 2);
    REQUIRE(diags[0].witness != nullptr);
    CHECK(print_pattern(diags[0].witness) == "Some _");
    CHECK(diagnostic_is_error(diags[0]));
    CHECK(rep.any_error());
}

TEST_CASE("an arm shadowed by earlier arms is unreachable without the rewrite hint") {
    ProgramReport rep = run_text(
        "check bool option with\n"
        "| _ -> ok\n"
        "| None -> ok\n");
    std::vector<Diagnostic> diags = all_diags(rep);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].kind == Diagnostic::Kind::UnreachableCase);
    CHECK(diags[0].arm == 2);
    CHECK_FALSE(diags[0].suggest_refutation);
    CHECK(render_human(diags[0], "f") ==
          "f:3:3: warning: arm 2 is unreachable; earlier arms already cover it");
}

TEST_CASE("an ill-typed arm aborts its check with a type error") {
    ProgramReport rep = run_text(
        "check int with\n"
        "| Some _ -> ok\n");
    std::vector<Diagnostic> diags = all_diags(rep);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].kind == Diagnostic::Kind::TypeError);
    CHECK(diags[0].arm == 1);
    CHECK(!diags[0].message.empty());
    CHECK(rep.any_error());
}

TEST_CASE("a bad declaration surfaces as a program-level error") {
    ProgramReport rep = run_text("type t = C of missing\n");
    REQUIRE(rep.program_error.has_value());
    CHECK(rep.program_error->kind == Diagnostic::Kind::TypeError);
    CHECK(rep.any_error());
    CHECK(rep.checks.empty());
}

TEST_CASE("checks are numbered in file order") {
    ProgramReport rep = run_text(
        "check bool option with\n"
        "| None -> ok\n"
        "check int option with\n"
        "| Some _ -> ok\n");
    REQUIRE(rep.checks.size() == 2);
    std::vector<Diagnostic> diags = all_diags(rep);
    REQUIRE(diags.size() == 2);
    CHECK(diags[0].check_index == 1);
    CHECK(print_pattern(diags[0].witness) == "Some _");
    CHECK(diags[1].check_index == 2);
    CHECK(print_pattern(diags[1].witness) == "None");
}

TEST_CASE("the splitting policy decides multi-arm exhaustiveness") {
    const std::string decls =
        "type zero = Zero\n"
        "type 'a succ = Succ\n"
        "type (_, _, _) plus = Plus0 : (zero, 'x, 'x) plus"
        " | PlusS : ('x, 'y, 'z) plus -> ('x succ, 'y, 'z succ) plus\n";
    const std::string shallow = decls +
        "check (zero succ, zero, zero) plus option option with\n"
        "| None -> ok\n"
        "| Some None -> ok\n";

    // Cautious default: the hole of type plus is assumed matchable.
    ProgramReport cautious = run_text(shallow);
    std::vector<Diagnostic> diags = all_diags(cautious);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].kind == Diagnostic::Kind::NonExhaustive);
    CHECK(print_pattern(diags[0].witness) == "Some (Some _)");

    // One round of splitting kills both constructors at these indices.
    CheckConfig once;
    once.exhaustive_policy = SplitPolicy::once();
    CHECK(all_diags(run_text(shallow, once)).empty());
    CheckConfig full;
    full.exhaustive_policy = SplitPolicy::full();
    CHECK(all_diags(run_text(shallow, full)).empty());

    // At these indices emptiness sits two constructors deep: the subpattern
    // created by a one-shot split stands, and only the full policy digs on.
    const std::string deep = decls +
        "check (zero succ, zero succ, zero succ) plus option option with\n"
        "| None -> ok\n"
        "| Some None -> ok\n";
    std::vector<Diagnostic> once_diags = all_diags(run_text(deep, once));
    REQUIRE(once_diags.size() == 1);
    CHECK(print_pattern(once_diags[0].witness) == "Some (Some (PlusS _))");
    CHECK(all_diags(run_text(deep, full)).empty());
}

TEST_CASE("single-arm checks always split one-shot, whatever the policy") {
    // deeper.gml has one arm; a Full policy neither helps nor hurts it,
    // and harderprime.gml stays clean even under Never.
    CheckConfig full;
    full.exhaustive_policy = SplitPolicy::full();
    std::vector<Diagnostic> diags = all_diags(run_corpus("deeper.gml", full));
    REQUIRE(diags.size() == 1);
    CHECK(print_pattern(diags[0].witness) == "Some _");

    CheckConfig never;
    never.exhaustive_policy = SplitPolicy::never();
    CHECK(all_diags(run_corpus("harderprime.gml", never)).empty());
}

TEST_CASE("non-exhaustiveness witnesses are typable at the scrutinee type") {
    const std::vector<std::string> files = {"cmp.gml", "deeper.gml", "halting.gml",
                                            "g1.gml", "harder.gml"};
    for (const std::string& f : files) {
        CAPTURE(f);
        gmltest::LoadedCorpus c = gmltest::load_corpus(f);
        std::vector<TypeDeclSyntax> prelude =
            parse_prelude(default_prelude_text(), "<prelude>");
        ProgramReport rep = check_program(c.program, prelude, {});
        std::vector<Diagnostic> diags = all_diags(rep);
        REQUIRE(diags.size() == 1);
        REQUIRE(diags[0].witness != nullptr);
        REQUIRE(c.program.checks.size() == 1);
        InferSession s;
        std::map<std::string, Type> vars;
        Type scrutinee = gml::type_of_expr(c.program.checks[0].scrutinee, c.env, s, vars);
        for (const PatPtr& alt : or_alternatives(diags[0].witness)) {
            CAPTURE(print_pattern(alt));
            CHECK(pattern_typable(alt, scrutinee, UnifyMode::PatternCompat, c.env, s));
        }
    }
}

TEST_CASE("exhaustive corpus checks really cover every derivable value") {
    // Cross-check against the clause-based oracle: every value the resolver
    // can derive for the scrutinee must match some arm.
    const std::vector<std::string> files = {"deep.gml", "deepprime.gml", "easy.gml",
                                            "g2.gml", "magic.gml", "plus.gml",
                                            "trivial.gml", "harderprime.gml"};
    for (const std::string& f : files) {
        CAPTURE(f);
        gmltest::LoadedCorpus c = gmltest::load_corpus(f);
        HornProgram prog = horn_encode(c.env);
        for (const MatchCheckSyntax& check : c.program.checks) {
            InferSession s;
            std::map<std::string, Type> vars;
            Type scrutinee = gml::type_of_expr(check.scrutinee, c.env, s, vars);
            std::vector<PatPtr> arms;
            for (const MatchArm& a : check.arms)
                if (a.kind == ArmKind::Concrete)
                    arms.push_back(lift_pattern(a.pattern, c.env));
            for (const PatPtr& w : sld_witnesses(scrutinee, 5, prog, c.env)) {
                CAPTURE(print_pattern(w));
                // The witness, taken as a value shape, must fall inside the
                // rows: nothing may remain of it after subtracting them.
                std::vector<PatPtr> rest = residual(w, arms, scrutinee, c.env);
                bool leftover = false;
                for (const PatPtr& piece : rest) {
                    SearchOutcome out =
                        search_pattern(piece, scrutinee, SplitPolicy::once(), c.env, s);
                    if (out.emptiness == Emptiness::Inhabited) leftover = true;
                }
                CHECK_FALSE(leftover);
            }
        }
    }
}

TEST_CASE("the query collector sees every emptiness decision") {
    std::vector<RecordedQuery> log;
    CheckConfig cfg;
    cfg.collector = [&](const RecordedQuery& q) { log.push_back(q); };
    ProgramReport rep = run_corpus("deepprime.gml", cfg);
    REQUIRE(all_diags(rep).size() == 1);
    REQUIRE(!log.empty());
    // Arm 2's piece is judged empty; the final wildcard residual of arm 1
    // (None) is the same piece, judged the same way.
    int empties = 0;
    for (const RecordedQuery& q : log) {
        REQUIRE(q.pattern != nullptr);
        REQUIRE(q.type != nullptr);
        if (q.verdict == Emptiness::Empty) ++empties;
    }
    CHECK(empties == 1);
    CHECK(log.size() == 2);  // arm 2 residual piece + missing-pattern piece
}

TEST_CASE("the built-in prelude and the corpus prelude file agree") {
    std::vector<TypeDeclSyntax> built_in =
        parse_prelude(default_prelude_text(), "<prelude>");
    std::vector<TypeDeclSyntax> from_file =
        parse_prelude(gmltest::read_corpus("prelude.gml"), "prelude.gml");
    SurfaceProgram a, b;
    a.decls = built_in;
    b.decls = from_file;
    CHECK(print_program(a) == print_program(b));
    // A prelude must not smuggle in checks.
    CHECK_THROWS_AS(parse_prelude("check int with\n| _ -> ok\n", "<t>"), SyntaxError);
}

TEST_CASE("reports expose per-check search statistics") {
    ProgramReport rep = run_corpus("stress.gml");
    REQUIRE(rep.checks.size() == 1);
    CHECK(all_diags(rep).empty());
    CHECK(rep.checks[0].stats.leaves > 0);
}
