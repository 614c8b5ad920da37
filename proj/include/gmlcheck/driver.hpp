#pragma once
// The checker proper: runs every match check of a program through residual
// computation, emptiness search, refutation validation, and exhaustiveness
// analysis, and renders the results.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gmlcheck/matrix.hpp"
#include "gmlcheck/pattern.hpp"
#include "gmlcheck/search.hpp"
#include "gmlcheck/syntax.hpp"
#include "gmlcheck/tycore.hpp"

namespace gml {

struct Diagnostic {
    enum class Kind {
        NonExhaustive,     // warning: some well-typed value is unmatched
        UnreachableCase,   // warning: an arm no value can reach
        RefutationFailed,  // error: a refutation arm can match a value
        TypeError,         // error: ill-formed declarations, scrutinee, or pattern
    };
    Kind kind = Kind::TypeError;
    int check_index = 0;  // 1-based position of the check in the file
    int arm = 0;          // 1-based arm index; 0 for whole-match diagnostics
    SrcLoc loc;
    PatPtr witness;       // NonExhaustive / RefutationFailed
    bool suggest_refutation = false;  // UnreachableCase: emptiness is type-proven
    std::string message;              // TypeError
};

bool diagnostic_is_error(const Diagnostic& d);

// One emptiness query performed by the checker, recorded for cross-checking
// against the clause-based oracle.
struct RecordedQuery {
    PatPtr pattern;
    Type type;  // resolved at the moment of the query
    Emptiness verdict;
};
using QueryCollector = std::function<void(const RecordedQuery&)>;

struct CheckConfig {
    // Splitting policy for the exhaustiveness step of checks with more than
    // one arm.  Single-arm checks always use the one-shot policy, and the
    // per-arm reachability step always does too.
    SplitPolicy exhaustive_policy = SplitPolicy::never();
    QueryCollector collector;
};

struct CheckReport {
    int check_index = 0;
    SrcLoc loc;
    std::vector<Diagnostic> diagnostics;
    SearchStats stats;
};

struct ProgramReport {
    std::vector<CheckReport> checks;
    std::optional<Diagnostic> program_error;  // declaration elaboration failure
    bool any_error() const;
    bool any_warning() const;
};

// Analyze one check against an already-elaborated environment.  Never throws
// for input-level problems: they come back as TypeError diagnostics.
CheckReport check_match(const MatchCheckSyntax& check, int check_index, const Env& env,
                        const CheckConfig& cfg = {});

ProgramReport check_program(const SurfaceProgram& prog,
                            const std::vector<TypeDeclSyntax>& prelude,
                            const CheckConfig& cfg = {});

// Declarations every program sees unless a prelude file overrides them.
const std::string& default_prelude_text();

// Parse a prelude: declarations only; a check block is rejected.
std::vector<TypeDeclSyntax> parse_prelude(std::string_view text,
                                          std::string_view filename);

// One-line renderer with a file:line:col prefix.
std::string render_human(const Diagnostic& d, const std::string& file);

// Classic compiler wording for the two diagnostics that have one (returns ""
// for the others, which should then be rendered in the default style).
std::string render_compat(const Diagnostic& d);

// Tab-separated fields: kind, check, arm, line, col, suggest, witness, message.
std::string render_machine(const Diagnostic& d);

const char* diagnostic_kind_name(Diagnostic::Kind k);

}  // namespace gml
