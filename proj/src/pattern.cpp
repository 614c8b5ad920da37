#include "gmlcheck/pattern.hpp"

#include <sstream>

namespace gml {

namespace {

PatPtr make(Pattern::Kind kind, std::string name, std::vector<PatPtr> args, bool no_split) {
    auto p = std::make_shared<Pattern>();
    p->kind = kind;
    p->name = std::move(name);
    p->args = std::move(args);
    p->no_split = no_split;
    return p;
}

}  // namespace

PatPtr pat_wild(bool no_split) { return make(Pattern::Kind::Wild, "", {}, no_split); }

PatPtr pat_var(std::string name) { return make(Pattern::Kind::Var, std::move(name), {}, false); }

PatPtr pat_constr(std::string name, std::vector<PatPtr> arg) {
    return make(Pattern::Kind::Constr, std::move(name), std::move(arg), false);
}

PatPtr pat_tuple(std::vector<PatPtr> elems) {
    return make(Pattern::Kind::Tuple, "", std::move(elems), false);
}

PatPtr pat_or(PatPtr left, PatPtr right) {
    return make(Pattern::Kind::Or, "", {std::move(left), std::move(right)}, false);
}

PatPtr or_of(const std::vector<PatPtr>& alts) {
    PatPtr out = alts.back();
    for (size_t i = alts.size() - 1; i-- > 0;) out = pat_or(alts[i], out);
    return out;
}

std::vector<PatPtr> or_alternatives(const PatPtr& p) {
    std::vector<PatPtr> alts;
    std::vector<PatPtr> work{p};
    while (!work.empty()) {
        PatPtr cur = work.back();
        work.pop_back();
        if (cur->kind == Pattern::Kind::Or) {
            work.push_back(cur->args[1]);
            work.push_back(cur->args[0]);
        } else {
            alts.push_back(cur);
        }
    }
    return alts;
}

PatPtr lift_pattern(const PatSynPtr& p, const Env& env) {
    switch (p->kind) {
        case PatternSyntax::Kind::Wildcard:
            return pat_wild();
        case PatternSyntax::Kind::Var:
            return pat_var(p->name);
        case PatternSyntax::Kind::Constr: {
            const ConstructorSig* sig = env.find_ctor(p->name);
            if (!sig) throw TypeError(p->loc, "unbound constructor '" + p->name + "'");
            if (sig->argument && p->args.empty())
                throw TypeError(p->loc, "constructor " + p->name + " expects an argument");
            if (!sig->argument && !p->args.empty())
                throw TypeError(p->loc, "constructor " + p->name + " takes no argument");
            std::vector<PatPtr> arg;
            if (!p->args.empty()) arg.push_back(lift_pattern(p->args[0], env));
            return pat_constr(p->name, std::move(arg));
        }
        case PatternSyntax::Kind::Tuple: {
            std::vector<PatPtr> elems;
            for (const auto& e : p->args) elems.push_back(lift_pattern(e, env));
            return pat_tuple(std::move(elems));
        }
        case PatternSyntax::Kind::Or:
            return pat_or(lift_pattern(p->args[0], env), lift_pattern(p->args[1], env));
    }
    throw TypeError(p->loc, "malformed pattern");
}

bool pattern_equal(const PatPtr& a, const PatPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind || a->name != b->name) return false;
    if (a->args.size() != b->args.size()) return false;
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!pattern_equal(a->args[i], b->args[i])) return false;
    return true;
}

namespace {

// `atomic` contexts (constructor arguments) need parentheses around
// or-patterns and constructor applications; tuples carry their own.
void print_rec(std::ostream& os, const PatPtr& p, bool atomic) {
    switch (p->kind) {
        case Pattern::Kind::Wild:
            os << '_';
            return;
        case Pattern::Kind::Var:
            os << p->name;
            return;
        case Pattern::Kind::Constr:
            if (p->args.empty()) {
                os << p->name;
            } else if (atomic) {
                os << '(' << p->name << ' ';
                print_rec(os, p->args[0], true);
                os << ')';
            } else {
                os << p->name << ' ';
                print_rec(os, p->args[0], true);
            }
            return;
        case Pattern::Kind::Tuple: {
            os << '(';
            for (size_t i = 0; i < p->args.size(); ++i) {
                if (i) os << ", ";
                print_rec(os, p->args[i], false);
            }
            os << ')';
            return;
        }
        case Pattern::Kind::Or:
            if (atomic) os << '(';
            print_rec(os, p->args[0], false);
            os << " | ";
            print_rec(os, p->args[1], false);
            if (atomic) os << ')';
            return;
    }
}

}  // namespace

std::string print_pattern(const PatPtr& p) {
    std::ostringstream os;
    print_rec(os, p, false);
    return os.str();
}

}  // namespace gml
