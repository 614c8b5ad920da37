#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "util.hpp"

#ifndef GMLCHECK_CLI_PATH
#define GMLCHECK_CLI_PATH "./gmlcheck"
#endif

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the command-line tool with the given arguments, capturing both
// streams.  Arguments must already be shell-quoted where needed.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const std::string tag = std::to_string(++counter);
    const std::string out_path = "/tmp/gmlcheck_test_out_" + tag;
    const std::string err_path = "/tmp/gmlcheck_test_err_" + tag;
    const std::string cmd = std::string(GMLCHECK_CLI_PATH) + " " + args + " >" +
                            out_path + " 2>" + err_path;
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    r.out = gmltest::read_file(out_path);
    r.err = gmltest::read_file(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::string corpus(const std::string& name) { return gmltest::corpus_path(name); }

std::string write_temp(const std::string& name, const std::string& text) {
    const std::string path = "/tmp/gmlcheck_test_" + name;
    std::ofstream out(path, std::ios::binary);
    out << text;
    return path;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("usage and input-problem exit codes") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(contains(run_cli("--help").out, "check"));
    CHECK(contains(run_cli("--help").out, "oracle"));

    CHECK(run_cli("").exit_code == 64);                       // subcommand required
    CHECK(run_cli("check --no-such-flag x.gml").exit_code == 64);
    CHECK(run_cli("frobnicate x.gml").exit_code == 64);

    RunResult missing = run_cli("check /no/such/file.gml");
    CHECK(missing.exit_code == 66);
    CHECK(contains(missing.err, "cannot read"));

    RunResult exclusive =
        run_cli("check --machine --ocaml-compat-messages " + corpus("g1.gml"));
    CHECK(exclusive.exit_code == 64);
    CHECK(contains(exclusive.err, "exclusive"));
}

TEST_CASE("clean files exit zero with no output") {
    for (const std::string f : {"trivial.gml", "plus.gml", "magic.gml", "g2.gml"}) {
        CAPTURE(f);
        RunResult r = run_cli("check " + corpus(f));
        CHECK(r.exit_code == 0);
        CHECK(r.out.empty());
        CHECK(r.err.empty());
    }
}

TEST_CASE("warnings render one line each and exit one") {
    const std::string path = corpus("g1.gml");
    RunResult r = run_cli("check " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.out == path +
                       ":4:1: warning: this match is not exhaustive; "
                       "an unmatched value: Bool\n");
}

TEST_CASE("classic wording output is byte-exact") {
    RunResult g1 = run_cli("check --ocaml-compat-messages " + corpus("g1.gml"));
    CHECK(g1.exit_code == 1);
    CHECK(g1.out ==
          "Warning 8: this pattern-matching is not exhaustive.\n"
          "Here is an example of a value that is not matched:\n"
          "Bool\n");

    RunResult cmp = run_cli("check --ocaml-compat-messages " + corpus("cmp.gml"));
    CHECK(cmp.exit_code == 1);
    CHECK(cmp.out ==
          "Warning 8: this pattern-matching is not exhaustive.\n"
          "Here is an example of a value that is not matched:\n"
          "Eq\n");

    RunResult dp = run_cli("check --ocaml-compat-messages " + corpus("deepprime.gml"));
    CHECK(dp.exit_code == 1);
    CHECK(dp.out ==
          "Warning 56: this match case is unreachable.\n"
          "Consider replacing it with a refutation case '<pat> -> .'\n");
}

TEST_CASE("machine output is one tab-separated record per diagnostic") {
    RunResult r = run_cli("check --machine " + corpus("g1.gml"));
    CHECK(r.exit_code == 1);
    CHECK(r.out == "non-exhaustive\t1\t0\t4\t1\t0\tBool\t\n");

    RunResult dp = run_cli("check --machine " + corpus("deepprime.gml"));
    CHECK(dp.out == "unreachable-case\t1\t2\t6\t3\t1\t\t\n");
}

TEST_CASE("the clause dump lists base facts, prelude, then file declarations") {
    RunResult r = run_cli("clauses " + corpus("plus.gml"));
    CHECK(r.exit_code == 0);
    CHECK(r.out ==
          "int.\n"
          "bool.\n"
          "char.\n"
          "float.\n"
          "unit.\n"
          "A -> B.\n"
          "option(A).\n"
          "option(A) :- A.\n"
          "sum(A, B) :- A.\n"
          "sum(A, B) :- B.\n"
          "list(A).\n"
          "list(A) :- A, list(A).\n"
          "zero.\n"
          "succ(_).\n"
          "plus(zero, X, X).\n"
          "plus(succ(X), Y, succ(Z)) :- plus(X, Y, Z).\n");
}

TEST_CASE("inhabitation queries from the command line") {
    RunResult yes = run_cli("oracle " + corpus("plus.gml") +
                            " --type '(zero succ, zero, zero succ) plus' --depth 4");
    CHECK(yes.exit_code == 0);
    CHECK(yes.out == "witness depth=2 PlusS Plus0\n");

    RunResult no = run_cli("oracle " + corpus("plus.gml") +
                           " --type '(zero, zero succ, zero) plus'");
    CHECK(no.exit_code == 0);
    CHECK(no.out == "no-proof-within-depth depth=1\n");

    RunResult machine = run_cli("oracle " + corpus("halting.gml") +
                                " --type '(s0, blank, endt, endt) eval' --depth 20");
    CHECK(machine.exit_code == 0);
    CHECK(machine.out ==
          "witness depth=7 Tm_ext_left (Tm_mv_left (Tr1, Tm_ext_left "
          "(Tm_mv_left (Tr3, Tm_fin))))\n");

    RunResult shallow = run_cli("oracle " + corpus("halting.gml") +
                                " --type '(s0, blank, endt, endt) eval' --depth 3");
    CHECK(shallow.exit_code == 0);
    CHECK(shallow.out == "depth-exhausted depth=3\n");

    CHECK(run_cli("oracle " + corpus("plus.gml") + " --type '((('").exit_code == 64);
    CHECK(run_cli("oracle " + corpus("plus.gml") + " --type 'nosuch'").exit_code == 64);
}

TEST_CASE("emptiness verdicts can be re-verified by the clause oracle") {
    RunResult stress = run_cli("check --oracle-check " + corpus("stress.gml"));
    CHECK(stress.exit_code == 0);
    CHECK(stress.out ==
          "oracle-check: 24 empty verdicts confirmed, 0 unresolved, 0 disagreements\n");

    RunResult dp = run_cli("check --oracle-check " + corpus("deepprime.gml"));
    CHECK(dp.exit_code == 1);  // the unreachable-arm warning stands
    CHECK(contains(dp.out,
                   "oracle-check: 1 empty verdicts confirmed, 0 unresolved, "
                   "0 disagreements\n"));
}

TEST_CASE("a replacement prelude changes what programs may reference") {
    const std::string bare = write_temp("bare_prelude.gml", "type nothing = |\n");
    // The default prelude makes option available; the bare one does not.
    RunResult ok = run_cli("check " + corpus("deep.gml"));
    CHECK(ok.exit_code == 0);
    // The missing name only surfaces when the scrutinee is resolved, so it
    // arrives as a diagnostic on stdout rather than a load failure.
    RunResult broken = run_cli("check --prelude " + bare + " " + corpus("deep.gml"));
    CHECK(broken.exit_code == 2);
    CHECK(contains(broken.out, "error"));

    // A prelude holding the same text as the built-in changes nothing.
    RunResult same =
        run_cli("check --prelude " + corpus("prelude.gml") + " " + corpus("g1.gml"));
    CHECK(same.exit_code == 1);

    const std::string checky = write_temp("checky_prelude.gml",
                                          "check int with\n| _ -> ok\n");
    RunResult rejected =
        run_cli("check --prelude " + checky + " " + corpus("g1.gml"));
    CHECK(rejected.exit_code == 2);
}

TEST_CASE("syntax errors point at the offending location") {
    const std::string bad = write_temp("bad_syntax.gml", "type t =\n| -> ok\n");
    RunResult r = run_cli("check " + bad);
    CHECK(r.exit_code == 2);
    CHECK(contains(r.err, ":2:"));
    CHECK(contains(r.err, "error"));
}

TEST_CASE("the splitting policy is selectable") {
    // Multi-arm checks default to no splitting; `--split once` digs deeper.
    const std::string text =
        "type zero = Zero\n"
        "type 'a succ = Succ\n"
        "type (_, _, _) plus = Plus0 : (zero, 'x, 'x) plus"
        " | PlusS : ('x, 'y, 'z) plus -> ('x succ, 'y, 'z succ) plus\n"
        "check (zero succ, zero, zero) plus option option with\n"
        "| None -> ok\n"
        "| Some None -> ok\n";
    const std::string path = write_temp("policy.gml", text);
    CHECK(run_cli("check " + path).exit_code == 1);
    CHECK(run_cli("check --split once " + path).exit_code == 0);
    CHECK(run_cli("check --split full " + path).exit_code == 0);
    CHECK(run_cli("check --split bogus " + path).exit_code == 64);

    // Single-arm checks always split one-shot: the policy flag is a no-op.
    RunResult harder = run_cli("check --split full " + corpus("harder.gml"));
    CHECK(harder.exit_code == 1);
    CHECK(contains(harder.out, "Some (PlusS _)"));
}

TEST_CASE("bench reports one timing line per check plus a total") {
    RunResult r = run_cli("bench " + corpus("deepprime.gml"));
    CHECK(r.exit_code == 0);
    CHECK(contains(r.out, "check 1: warnings "));
    CHECK(contains(r.out, " ms leaves="));
    CHECK(contains(r.out, " splits="));
    CHECK(contains(r.out, " diagnostics=1"));
    CHECK(contains(r.out, "total "));
    CHECK(r.out.find("total ") > r.out.find("check 1:"));
}
