// Acceptance gate: one line per criterion, "[acceptance] criterion N: PASS"
// or "FAIL".  Returns nonzero if any criterion fails.  Details of individual
// failures go to stderr.

#include <chrono>
#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmlcheck/driver.hpp"
#include "gmlcheck/horn.hpp"
#include "gmlcheck/matrix.hpp"
#include "gmlcheck/search.hpp"
#include "gmlcheck/syntax.hpp"
#include "gmlcheck/tycore.hpp"
#include "enumerate.hpp"
#include "testgen.hpp"
#include "util.hpp"

using namespace gml;

namespace {

int g_failures = 0;

void expect(bool cond, const std::string& what) {
    if (!cond) {
        ++g_failures;
        std::cerr << "  [detail] " << what << "\n";
    }
}

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
}

const std::vector<std::string>& corpus_files() {
    static const std::vector<std::string> files = {
        "cmp", "deep", "deeper", "deeperprime", "deepprime", "easy", "expr",
        "f", "halting", "g1", "g2", "h", "h2", "harder", "harderprime",
        "inv_zero", "magic", "plus", "stress", "trivial",
    };
    return files;
}

std::vector<TypeDeclSyntax> std_prelude() {
    return parse_prelude(default_prelude_text(), "<prelude>");
}

std::vector<Diagnostic> all_diags(const ProgramReport& rep) {
    std::vector<Diagnostic> out;
    if (rep.program_error) out.push_back(*rep.program_error);
    for (const CheckReport& c : rep.checks)
        out.insert(out.end(), c.diagnostics.begin(), c.diagnostics.end());
    return out;
}

// ---- criterion 1: golden corpus verdicts ----------------------------------------

bool criterion1() {
    struct Expected {
        Diagnostic::Kind kind;
        int arm;
        std::string witness;
        bool suggest;
    };
    const std::map<std::string, Expected> expected = {
        {"cmp", {Diagnostic::Kind::NonExhaustive, 0, "Eq", false}},
        {"deeper", {Diagnostic::Kind::NonExhaustive, 0, "Some _", false}},
        {"deepprime", {Diagnostic::Kind::UnreachableCase, 2, "", true}},
        {"halting", {Diagnostic::Kind::NonExhaustive, 0, "Some Tm_fin", false}},
        {"g1", {Diagnostic::Kind::NonExhaustive, 0, "Bool", false}},
        {"harder", {Diagnostic::Kind::NonExhaustive, 0, "Some (PlusS _)", false}},
    };
    for (const std::string& f : corpus_files()) {
        gmltest::LoadedCorpus c = gmltest::load_corpus(f + ".gml");
        ProgramReport rep = check_program(c.program, std_prelude(), {});
        expect(!rep.program_error.has_value(), f + ": unexpected program error");
        std::vector<Diagnostic> diags = all_diags(rep);
        auto it = expected.find(f);
        if (it == expected.end()) {
            expect(diags.empty(), f + ": expected a clean report, got " +
                                      std::to_string(diags.size()) + " diagnostic(s)");
            continue;
        }
        if (diags.size() != 1) {
            expect(false, f + ": expected exactly one diagnostic");
            continue;
        }
        const Diagnostic& d = diags[0];
        expect(d.kind == it->second.kind, f + ": wrong diagnostic kind");
        expect(d.arm == it->second.arm, f + ": wrong arm index");
        expect(d.suggest_refutation == it->second.suggest, f + ": wrong rewrite hint");
        if (!it->second.witness.empty()) {
            expect(d.witness && print_pattern(d.witness) == it->second.witness,
                   f + ": wrong witness");
        }
    }

    // Byte-exact classic wording for the three quoted warnings.
    auto compat_of = [](const std::string& file) {
        gmltest::LoadedCorpus c = gmltest::load_corpus(file);
        std::vector<Diagnostic> diags = all_diags(check_program(c.program, std_prelude(), {}));
        return diags.size() == 1 ? render_compat(diags[0]) : std::string("<none>");
    };
    expect(compat_of("g1.gml") ==
               "Warning 8: this pattern-matching is not exhaustive.\n"
               "Here is an example of a value that is not matched:\n"
               "Bool",
           "g1: classic wording mismatch");
    expect(compat_of("cmp.gml") ==
               "Warning 8: this pattern-matching is not exhaustive.\n"
               "Here is an example of a value that is not matched:\n"
               "Eq",
           "cmp: classic wording mismatch");
    expect(compat_of("deepprime.gml") ==
               "Warning 56: this match case is unreachable.\n"
               "Consider replacing it with a refutation case '<pat> -> .'",
           "deepprime: classic wording mismatch");
    return g_failures == 0;
}

// ---- criterion 2: every Empty verdict confirmed by the clause oracle ------------

struct SweepStats {
    long empties = 0;
    long confirmed = 0;
    long unresolved = 0;
    long disagreed = 0;
};

void sweep_program(const SurfaceProgram& prog, const Env& env, SweepStats& st) {
    std::vector<RecordedQuery> log;
    CheckConfig cfg;
    cfg.collector = [&log](const RecordedQuery& q) { log.push_back(q); };
    for (size_t i = 0; i < prog.checks.size(); ++i)
        check_match(prog.checks[i], static_cast<int>(i) + 1, env, cfg);
    HornProgram hprog = horn_encode(env);
    for (const RecordedQuery& q : log) {
        if (q.verdict != Emptiness::Empty) continue;
        ++st.empties;
        QueryResult r = query_pattern(q.pattern, q.type, 6, hprog, env);
        if (r.verdict == QueryVerdict::Refuted) {
            ++st.confirmed;
        } else if (r.verdict == QueryVerdict::Unknown) {
            ++st.unresolved;
            std::cerr << "  [detail] unresolved: " << print_pattern(q.pattern) << " at "
                      << print_type(q.type) << "\n";
        } else {
            ++st.disagreed;
            std::cerr << "  [detail] disagreement: " << print_pattern(q.pattern) << " at "
                      << print_type(q.type) << "\n";
        }
    }
}

bool criterion2() {
    auto start = std::chrono::steady_clock::now();
    SweepStats st;
    for (const std::string& f : corpus_files()) {
        gmltest::LoadedCorpus c = gmltest::load_corpus(f + ".gml");
        sweep_program(c.program, c.env, st);
    }

    std::mt19937 rng(20260814u);
    int accepted = 0;
    long generated = 0;
    while (accepted < 200 && generated < 2000) {
        ++generated;
        const std::string text = gmltest::gen_random_program(rng);
        SurfaceProgram prog;
        try {
            prog = parse_program(text, "<random>");
        } catch (const SyntaxError& e) {
            expect(false, std::string("generator produced unparsable text: ") + e.what());
            continue;
        }
        ProgramReport rep = check_program(prog, std_prelude(), {});
        bool type_error = rep.program_error.has_value();
        for (const Diagnostic& d : all_diags(rep))
            if (d.kind == Diagnostic::Kind::TypeError) type_error = true;
        if (type_error) continue;  // reject: only well-formed programs count
        Env env = elaborate_env(std_prelude(), prog.decls);
        sweep_program(prog, env, st);
        ++accepted;
    }
    expect(accepted == 200, "generator accepted only " + std::to_string(accepted) +
                                " of 200 programs");
    expect(st.disagreed == 0, std::to_string(st.disagreed) + " oracle disagreement(s)");
    expect(st.unresolved == 0, std::to_string(st.unresolved) + " unresolved verdict(s)");
    expect(st.empties == st.confirmed + st.unresolved + st.disagreed,
           "sweep accounting mismatch");
    const double elapsed = ms_since(start);
    std::cerr << "  [info] criterion 2: " << st.empties << " empty verdicts over "
              << accepted << " random programs in " << elapsed << " ms\n";
    expect(elapsed < 60000.0, "sweep exceeded 60 s");
    return g_failures == 0;
}

// ---- criterion 3: enumerated values fall on exactly one side of the split -------

bool criterion3() {
    long values_checked = 0;
    for (const std::string& f : corpus_files()) {
        gmltest::LoadedCorpus c = gmltest::load_corpus(f + ".gml");
        for (const MatchCheckSyntax& check : c.program.checks) {
            std::vector<TypeExprPtr> grounds;
            grounds.push_back(gmltest::te_close_vars(check.scrutinee, te_app("int", {})));
            grounds.push_back(gmltest::te_close_vars(check.scrutinee, te_app("bool", {})));
            if (print_type_expr(grounds[0]) == print_type_expr(grounds[1]))
                grounds.pop_back();  // scrutinee was already closed
            std::vector<PatPtr> arm_pats;
            for (const MatchArm& a : check.arms)
                arm_pats.push_back(lift_pattern(a.pattern, c.env));
            for (const TypeExprPtr& te : grounds) {
                Type scrutinee = gmltest::ground_of_expr(te, c.env);
                std::vector<PatPtr> missing =
                    residual(pat_wild(), arm_pats, scrutinee, c.env);
                for (const gmltest::Value& v :
                     gmltest::enumerate_values(scrutinee, c.env, 3)) {
                    ++values_checked;
                    bool in_arm = false, in_missing = false;
                    for (const PatPtr& p : arm_pats)
                        if (gmltest::value_matches(v, p)) in_arm = true;
                    for (const PatPtr& p : missing)
                        if (gmltest::value_matches(v, p)) in_missing = true;
                    expect(in_arm != in_missing,
                           f + ": value " + gmltest::value_print(v) + " at " +
                               print_type(scrutinee) +
                               (in_arm ? " matched by arms and missing rows"
                                       : " matched by neither side"));
                }
            }
        }
    }
    std::cerr << "  [info] criterion 3: " << values_checked << " values checked\n";
    // The corpus scrutinees are mostly indexed types with few or no ground
    // inhabitants, so the enumeration is small; it just must not be vacuous.
    expect(values_checked >= 10, "enumeration unexpectedly small");
    return g_failures == 0;
}

// ---- criterion 4: compatibility is reflexive and symmetric, not transitive ------

bool criterion4() {
    Env env = gmltest::make_mixed_env();
    InferSession session;
    std::vector<Type> pool;
    std::mt19937 rng(424242u);
    for (int i = 0; i < 1000; ++i) {
        Type t1 = gmltest::gen_random_type(rng, session, pool, 3);
        Type t2 = gmltest::gen_random_type(rng, session, pool, 3);
        if (!compatible(t1, t1, env) || !compatible(t2, t2, env)) {
            expect(false, "reflexivity violated by " + print_type(t1));
            return false;
        }
        if (compatible(t1, t2, env) != compatible(t2, t1, env)) {
            expect(false, "symmetry violated by " + print_type(t1) + " / " + print_type(t2));
            return false;
        }
    }
    expect(compatible(ty_app("int"), ty_app("a"), env), "int should accept abstract a");
    expect(compatible(ty_app("a"), ty_app("bool"), env), "abstract a should accept bool");
    expect(!compatible(ty_app("int"), ty_app("bool"), env),
           "int and bool must stay incompatible");
    return g_failures == 0;
}

// ---- criterion 5: the 8-factor stress check visits exactly 4^8 leaves -----------

bool criterion5() {
    gmltest::LoadedCorpus c = gmltest::load_corpus("stress.gml");
    auto start = std::chrono::steady_clock::now();
    ProgramReport rep = check_program(c.program, std_prelude(), {});
    const double elapsed = ms_since(start);
    std::cerr << "  [info] criterion 5: stress check took " << elapsed << " ms\n";
    expect(all_diags(rep).empty(), "stress check must be clean");
    expect(rep.checks.size() == 1, "stress has one check");
    if (!rep.checks.empty()) {
        expect(rep.checks[0].stats.leaves == 65536,
               "expected 65536 leaves, saw " +
                   std::to_string(rep.checks[0].stats.leaves));
    }
    expect(elapsed < 120000.0, "stress exceeded 120 s");
    return g_failures == 0;
}

// ---- criterion 6: the halting-problem program stays tractable -------------------

bool criterion6() {
    gmltest::LoadedCorpus c = gmltest::load_corpus("halting.gml");
    auto start = std::chrono::steady_clock::now();
    ProgramReport rep = check_program(c.program, std_prelude(), {});
    const double elapsed = ms_since(start);
    std::cerr << "  [info] criterion 6: halting check took " << elapsed << " ms\n";
    expect(elapsed < 5000.0, "halting check exceeded 5 s");
    std::vector<Diagnostic> diags = all_diags(rep);
    expect(diags.size() == 1 && diags[0].kind == Diagnostic::Kind::NonExhaustive &&
               diags[0].witness && print_pattern(diags[0].witness) == "Some Tm_fin",
           "halting conservative verdict changed");

    // Regression value recorded from the resolver's own first run.
    HornProgram prog = horn_encode(c.env);
    std::map<std::string, Type> vars;
    InferSession s;
    Type goal = type_of_expr(parse_type_expr("(s0, blank, endt, endt) eval"), c.env, s, vars);
    ResolutionResult r = sld_inhabited(goal, 20, prog, c.env);
    expect(r.kind == ResolutionResult::Kind::Witness && r.depth == 7 &&
               print_pattern(r.witness) ==
                   "Tm_ext_left (Tm_mv_left (Tr1, Tm_ext_left (Tm_mv_left (Tr3, Tm_fin))))",
           "halting oracle regression value changed");
    return g_failures == 0;
}

// ---- criterion 7: more splitting never flips Empty back to Inhabited ------------

bool criterion7() {
    long queries = 0;
    for (const std::string& f : corpus_files()) {
        gmltest::LoadedCorpus c = gmltest::load_corpus(f + ".gml");
        std::vector<RecordedQuery> log;
        CheckConfig cfg;
        cfg.collector = [&log](const RecordedQuery& q) { log.push_back(q); };
        check_program(c.program, std_prelude(), cfg);
        for (const RecordedQuery& q : log) {
            ++queries;
            InferSession s;
            auto empti = [&](SplitPolicy p) {
                return search_pattern(q.pattern, q.type, p, c.env, s).emptiness;
            };
            Emptiness never = empti(SplitPolicy::never());
            Emptiness once = empti(SplitPolicy::once());
            Emptiness full = empti(SplitPolicy::full(4096));
            if (never == Emptiness::Empty)
                expect(once == Emptiness::Empty,
                       f + ": Empty under Never but not Once for " +
                           print_pattern(q.pattern));
            if (once == Emptiness::Empty)
                expect(full == Emptiness::Empty,
                       f + ": Empty under Once but not Full for " +
                           print_pattern(q.pattern));
        }
    }
    std::cerr << "  [info] criterion 7: " << queries << " recorded queries\n";
    expect(queries > 0, "no queries recorded");
    return g_failures == 0;
}

// ---- criterion 8: ten thousand unify/restore rounds leave no trace --------------

bool criterion8() {
    Env env = gmltest::make_mixed_env();
    InferSession session;
    std::vector<Type> pool;
    std::mt19937 rng(77777777u);
    auto snap = session.snapshot();
    const Trail::Mark base = session.trail().save();
    std::vector<Trail::Mark> marks;
    for (int i = 0; i < 10000; ++i) {
        const Trail::Mark mark = session.trail().save();
        Type t1 = gmltest::gen_random_type(rng, session, pool, 3);
        Type t2 = gmltest::gen_random_type(rng, session, pool, 3);
        const UnifyMode mode = (rng() & 1u) ? UnifyMode::Strict : UnifyMode::PatternCompat;
        try {
            unify(t1, t2, mode, env, session.trail());
        } catch (const UnifyError&) {
        }
        // Usually restore immediately; sometimes leave the bindings in place
        // and restore a whole batch later, exercising nested rollback.
        if (rng() % 4 == 0 && marks.size() < 8) {
            marks.push_back(mark);
        } else {
            session.trail().undo_to(mark);
        }
        if (!marks.empty() && rng() % 16 == 0) {
            session.trail().undo_to(marks.front());
            marks.clear();
        }
    }
    session.trail().undo_to(base);
    expect(session.matches_snapshot(snap), "variable store differs from snapshot");
    return g_failures == 0;
}

}  // namespace

int main() {
    struct Criterion {
        int number;
        bool (*fn)();
    };
    const std::vector<Criterion> table = {
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
        {5, criterion5}, {6, criterion6}, {7, criterion7}, {8, criterion8},
    };
    bool all_pass = true;
    for (const Criterion& c : table) {
        g_failures = 0;
        bool ok = false;
        try {
            ok = c.fn();
        } catch (const std::exception& e) {
            std::cerr << "  [detail] criterion " << c.number << " threw: " << e.what()
                      << "\n";
            ok = false;
        }
        std::cout << "[acceptance] criterion " << c.number << ": "
                  << (ok ? "PASS" : "FAIL") << "\n";
        if (!ok) all_pass = false;
    }
    return all_pass ? 0 : 1;
}
