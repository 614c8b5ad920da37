#include "gmlcheck/driver.hpp"

#include <sstream>

namespace gml {

bool diagnostic_is_error(const Diagnostic& d) {
    return d.kind == Diagnostic::Kind::RefutationFailed ||
           d.kind == Diagnostic::Kind::TypeError;
}

bool ProgramReport::any_error() const {
    if (program_error) return true;
    for (const CheckReport& c : checks)
        for (const Diagnostic& d : c.diagnostics)
            if (diagnostic_is_error(d)) return true;
    return false;
}

bool ProgramReport::any_warning() const {
    for (const CheckReport& c : checks)
        for (const Diagnostic& d : c.diagnostics)
            if (!diagnostic_is_error(d)) return true;
    return false;
}

CheckReport check_match(const MatchCheckSyntax& check, int check_index, const Env& env,
                        const CheckConfig& cfg) {
    CheckReport rep;
    rep.check_index = check_index;
    rep.loc = check.loc;

    InferSession session;
    Type scrutinee;
    try {
        std::map<std::string, Type> tyvars;
        scrutinee = type_of_expr(check.scrutinee, env, session, tyvars);
    } catch (const TypeError& e) {
        Diagnostic d;
        d.kind = Diagnostic::Kind::TypeError;
        d.check_index = check_index;
        d.loc = e.loc.line ? e.loc : check.loc;
        d.message = e.what();
        rep.diagnostics.push_back(std::move(d));
        return rep;
    }

    // Every arm must be well formed and able to match the scrutinee type at
    // all before any reachability reasoning is meaningful.
    std::vector<PatPtr> arms;
    for (size_t i = 0; i < check.arms.size(); ++i) {
        const MatchArm& arm = check.arms[i];
        try {
            PatPtr p = lift_pattern(arm.pattern, env);
            if (!pattern_typable(p, scrutinee, UnifyMode::PatternCompat, env, session)) {
                std::ostringstream msg;
                msg << "pattern " << print_pattern(p)
                    << " cannot match values of type " << print_type(scrutinee);
                throw TypeError(arm.loc, msg.str());
            }
            arms.push_back(std::move(p));
        } catch (const TypeError& e) {
            Diagnostic d;
            d.kind = Diagnostic::Kind::TypeError;
            d.check_index = check_index;
            d.arm = static_cast<int>(i) + 1;
            d.loc = e.loc.line ? e.loc : arm.loc;
            d.message = e.what();
            rep.diagnostics.push_back(std::move(d));
            return rep;
        }
    }

    const SplitPolicy arm_policy = SplitPolicy::once();
    auto run_search = [&](const PatPtr& q, SplitPolicy policy) {
        SearchOutcome out = search_pattern(q, scrutinee, policy, env, session, &rep.stats);
        if (cfg.collector)
            cfg.collector(RecordedQuery{q, deep_resolve(scrutinee), out.emptiness});
        return out;
    };

    std::vector<PatPtr> covered;
    for (size_t i = 0; i < arms.size(); ++i) {
        const MatchArm& arm = check.arms[i];
        const std::vector<PatPtr> pieces = residual(arms[i], covered, scrutinee, env);
        bool any_inhabited = false;
        PatPtr first_witness;
        for (const PatPtr& piece : pieces) {
            SearchOutcome out = run_search(piece, arm_policy);
            if (out.emptiness == Emptiness::Inhabited) {
                any_inhabited = true;
                if (!first_witness) first_witness = out.witness;
            }
        }
        if (arm.kind == ArmKind::Refutation) {
            if (any_inhabited) {
                Diagnostic d;
                d.kind = Diagnostic::Kind::RefutationFailed;
                d.check_index = check_index;
                d.arm = static_cast<int>(i) + 1;
                d.loc = arm.loc;
                d.witness = first_witness;
                rep.diagnostics.push_back(std::move(d));
            }
        } else if (pieces.empty() || !any_inhabited) {
            Diagnostic d;
            d.kind = Diagnostic::Kind::UnreachableCase;
            d.check_index = check_index;
            d.arm = static_cast<int>(i) + 1;
            d.loc = arm.loc;
            d.suggest_refutation = !pieces.empty();
            rep.diagnostics.push_back(std::move(d));
        }
        covered.push_back(arms[i]);
    }

    const std::vector<PatPtr> missing = residual(pat_wild(), covered, scrutinee, env);
    const SplitPolicy policy = arms.size() == 1 ? SplitPolicy::once() : cfg.exhaustive_policy;
    std::vector<PatPtr> witnesses;
    for (const PatPtr& m : missing) {
        SearchOutcome out = run_search(m, policy);
        if (out.emptiness == Emptiness::Inhabited) witnesses.push_back(out.witness);
    }
    if (!witnesses.empty()) {
        Diagnostic d;
        d.kind = Diagnostic::Kind::NonExhaustive;
        d.check_index = check_index;
        d.arm = 0;
        d.loc = check.loc;
        d.witness = or_of(witnesses);
        rep.diagnostics.push_back(std::move(d));
    }
    return rep;
}

ProgramReport check_program(const SurfaceProgram& prog,
                            const std::vector<TypeDeclSyntax>& prelude,
                            const CheckConfig& cfg) {
    ProgramReport out;
    Env env;
    try {
        env = elaborate_env(prelude, prog.decls);
    } catch (const TypeError& e) {
        Diagnostic d;
        d.kind = Diagnostic::Kind::TypeError;
        d.loc = e.loc;
        d.message = e.what();
        out.program_error = std::move(d);
        return out;
    }
    for (size_t i = 0; i < prog.checks.size(); ++i)
        out.checks.push_back(
            check_match(prog.checks[i], static_cast<int>(i) + 1, env, cfg));
    return out;
}

const std::string& default_prelude_text() {
    static const std::string text =
        "# Declarations available to every program unless --prelude overrides them.\n"
        "type 'a option = None | Some of 'a\n"
        "type ('a, 'b) sum = Inl of 'a | Inr of 'b\n"
        "type 'a list = Nil | Cons of 'a * 'a list\n";
    return text;
}

std::vector<TypeDeclSyntax> parse_prelude(std::string_view text,
                                          std::string_view filename) {
    SurfaceProgram prog = parse_program(text, filename);
    if (!prog.checks.empty())
        throw SyntaxError(prog.checks[0].loc, "a prelude may only declare types");
    return std::move(prog.decls);
}

// ---- rendering ------------------------------------------------------------------

const char* diagnostic_kind_name(Diagnostic::Kind k) {
    switch (k) {
        case Diagnostic::Kind::NonExhaustive: return "non-exhaustive";
        case Diagnostic::Kind::UnreachableCase: return "unreachable-case";
        case Diagnostic::Kind::RefutationFailed: return "refutation-failed";
        case Diagnostic::Kind::TypeError: return "type-error";
    }
    return "unknown";
}

std::string render_human(const Diagnostic& d, const std::string& file) {
    std::ostringstream os;
    os << file << ':' << d.loc.line << ':' << d.loc.col << ": ";
    switch (d.kind) {
        case Diagnostic::Kind::NonExhaustive:
            os << "warning: this match is not exhaustive; an unmatched value: "
               << print_pattern(d.witness);
            break;
        case Diagnostic::Kind::UnreachableCase:
            os << "warning: arm " << d.arm << " is unreachable";
            if (d.suggest_refutation)
                os << "; no well-typed value can match it (it could be a refutation arm)";
            else
                os << "; earlier arms already cover it";
            break;
        case Diagnostic::Kind::RefutationFailed:
            os << "error: refutation arm " << d.arm
               << " can be matched, for example by: " << print_pattern(d.witness);
            break;
        case Diagnostic::Kind::TypeError:
            os << "error: " << d.message;
            break;
    }
    return os.str();
}

std::string render_compat(const Diagnostic& d) {
    if (d.kind == Diagnostic::Kind::NonExhaustive)
        return "Warning 8: this pattern-matching is not exhaustive.\n"
               "Here is an example of a value that is not matched:\n" +
               print_pattern(d.witness);
    if (d.kind == Diagnostic::Kind::UnreachableCase && d.suggest_refutation)
        return "Warning 56: this match case is unreachable.\n"
               "Consider replacing it with a refutation case '<pat> -> .'";
    return "";
}

std::string render_machine(const Diagnostic& d) {
    std::ostringstream os;
    os << diagnostic_kind_name(d.kind) << '\t' << d.check_index << '\t' << d.arm << '\t'
       << d.loc.line << '\t' << d.loc.col << '\t' << (d.suggest_refutation ? 1 : 0)
       << '\t' << (d.witness ? print_pattern(d.witness) : "") << '\t' << d.message;
    return os.str();
}

}  // namespace gml
