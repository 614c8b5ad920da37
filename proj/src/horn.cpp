#include "gmlcheck/horn.hpp"

#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gml {

HTermPtr ht_var(int index) {
    auto t = std::make_shared<HTerm>();
    t->kind = HTerm::Kind::Var;
    t->var = index;
    return t;
}

HTermPtr ht_fun(std::string functor, std::vector<HTermPtr> args) {
    auto t = std::make_shared<HTerm>();
    t->kind = HTerm::Kind::Fun;
    t->functor = std::move(functor);
    t->args = std::move(args);
    return t;
}

// ---- encoding -------------------------------------------------------------------

namespace {

constexpr const char* kTupleFunctor = "*";
constexpr const char* kArrowFunctor = "->";

HTermPtr term_of_scheme(const Type& scheme) {
    switch (scheme->kind) {
        case TypeNode::Kind::Param:
            return ht_var(scheme->param_index);
        case TypeNode::Kind::Var:
            throw std::logic_error("term_of_scheme: unexpected free variable");
        case TypeNode::Kind::App: {
            std::vector<HTermPtr> args;
            args.reserve(scheme->args.size());
            for (const Type& a : scheme->args) args.push_back(term_of_scheme(a));
            return ht_fun(scheme->head, std::move(args));
        }
        case TypeNode::Kind::Tuple: {
            std::vector<HTermPtr> args;
            args.reserve(scheme->args.size());
            for (const Type& a : scheme->args) args.push_back(term_of_scheme(a));
            return ht_fun(kTupleFunctor, std::move(args));
        }
        case TypeNode::Kind::Arrow:
            return ht_fun(kArrowFunctor,
                          {term_of_scheme(scheme->args[0]), term_of_scheme(scheme->args[1])});
    }
    throw std::logic_error("term_of_scheme: bad kind");
}

// Tuple arguments contribute one body atom per component, recursively.
void flatten_atoms(const Type& scheme, std::vector<HTermPtr>& out) {
    if (scheme->kind == TypeNode::Kind::Tuple) {
        for (const Type& c : scheme->args) flatten_atoms(c, out);
        return;
    }
    out.push_back(term_of_scheme(scheme));
}

std::string clause_var_name(const std::string& slot) {
    if (slot.empty() || slot == "_") return "_";
    std::string s = slot;
    if (s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
    return s;
}

}  // namespace

HornProgram horn_encode(const Env& env) {
    HornProgram prog;
    for (const std::string& name : env.decl_order()) {
        const TypeDecl* d = env.find(name);
        if (d && d->kind == TypeDecl::Kind::Builtin) {
            HornClause fact;
            fact.head = ht_fun(name);
            fact.owner = name;
            prog.clauses.push_back(std::move(fact));
        }
    }
    {
        // Function types are always considered inhabited.
        HornClause arrow;
        arrow.head = ht_fun(kArrowFunctor, {ht_var(0), ht_var(1)});
        arrow.n_vars = 2;
        arrow.var_names = {"A", "B"};
        prog.clauses.push_back(std::move(arrow));
    }
    for (const std::string& name : env.decl_order()) {
        const TypeDecl* d = env.find(name);
        if (!d || d->kind != TypeDecl::Kind::Variant) continue;
        for (const ConstructorSig& c : d->ctors) {
            HornClause cl;
            cl.ctor = c.name;
            cl.owner = c.owner;
            cl.n_vars = static_cast<int>(c.slot_names.size());
            for (const std::string& s : c.slot_names)
                cl.var_names.push_back(clause_var_name(s));
            std::vector<HTermPtr> indices;
            indices.reserve(c.result_indices.size());
            for (const Type& idx : c.result_indices) indices.push_back(term_of_scheme(idx));
            cl.head = ht_fun(c.owner, std::move(indices));
            if (c.argument) flatten_atoms(*c.argument, cl.body);
            prog.clauses.push_back(std::move(cl));
        }
    }
    return prog;
}

// ---- printing -------------------------------------------------------------------

namespace {

// Precedence: function arrows bind loosest, then tuples, then applications.
void print_term_rec(std::ostringstream& os, const HTermPtr& t,
                    const std::vector<std::string>& names, int min_prec) {
    if (t->kind == HTerm::Kind::Var) {
        if (t->var >= 0 && static_cast<size_t>(t->var) < names.size())
            os << names[static_cast<size_t>(t->var)];
        else
            os << "_G" << t->var;
        return;
    }
    if (t->functor == kArrowFunctor && t->args.size() == 2) {
        if (min_prec > 0) os << '(';
        print_term_rec(os, t->args[0], names, 1);
        os << " -> ";
        print_term_rec(os, t->args[1], names, 0);
        if (min_prec > 0) os << ')';
        return;
    }
    if (t->functor == kTupleFunctor && t->args.size() >= 2) {
        if (min_prec > 1) os << '(';
        for (size_t i = 0; i < t->args.size(); ++i) {
            if (i) os << " * ";
            print_term_rec(os, t->args[i], names, 2);
        }
        if (min_prec > 1) os << ')';
        return;
    }
    os << t->functor;
    if (!t->args.empty()) {
        os << '(';
        for (size_t i = 0; i < t->args.size(); ++i) {
            if (i) os << ", ";
            print_term_rec(os, t->args[i], names, 0);
        }
        os << ')';
    }
}

}  // namespace

std::string print_term(const HTermPtr& t, const std::vector<std::string>& var_names) {
    std::ostringstream os;
    print_term_rec(os, t, var_names, 0);
    return os.str();
}

std::string print_clause(const HornClause& c) {
    std::ostringstream os;
    print_term_rec(os, c.head, c.var_names, 0);
    if (!c.body.empty()) {
        os << " :- ";
        for (size_t i = 0; i < c.body.size(); ++i) {
            if (i) os << ", ";
            print_term_rec(os, c.body[i], c.var_names, 0);
        }
    }
    os << '.';
    return os.str();
}

// ---- resolution machine ---------------------------------------------------------

namespace {

struct Machine {
    const HornProgram& prog;
    std::vector<HTermPtr> bind;
    std::vector<int> trail;
    long budget = 0;
    bool cut = false;
    long apps = 0;
    std::vector<int> proof;

    explicit Machine(const HornProgram& p) : prog(p) {}

    int fresh_block(int n) {
        int base = static_cast<int>(bind.size());
        bind.resize(bind.size() + static_cast<size_t>(n));
        return base;
    }

    HTermPtr deref(HTermPtr t) const {
        while (t->kind == HTerm::Kind::Var && bind[static_cast<size_t>(t->var)])
            t = bind[static_cast<size_t>(t->var)];
        return t;
    }

    bool occurs(int v, const HTermPtr& t0) const {
        HTermPtr t = deref(t0);
        if (t->kind == HTerm::Kind::Var) return t->var == v;
        for (const HTermPtr& a : t->args)
            if (occurs(v, a)) return true;
        return false;
    }

    void bind_var(int v, const HTermPtr& t) {
        bind[static_cast<size_t>(v)] = t;
        trail.push_back(v);
    }

    bool unify(HTermPtr a, HTermPtr b) {
        a = deref(a);
        b = deref(b);
        if (a->kind == HTerm::Kind::Var && b->kind == HTerm::Kind::Var && a->var == b->var)
            return true;
        if (a->kind == HTerm::Kind::Var) {
            if (occurs(a->var, b)) return false;
            bind_var(a->var, b);
            return true;
        }
        if (b->kind == HTerm::Kind::Var) {
            if (occurs(b->var, a)) return false;
            bind_var(b->var, a);
            return true;
        }
        if (a->functor != b->functor || a->args.size() != b->args.size()) return false;
        for (size_t i = 0; i < a->args.size(); ++i)
            if (!unify(a->args[i], b->args[i])) return false;
        return true;
    }

    void undo_to(size_t mark) {
        while (trail.size() > mark) {
            bind[static_cast<size_t>(trail.back())] = nullptr;
            trail.pop_back();
        }
    }

    HTermPtr rename(const HTermPtr& t, int base) const {
        if (t->kind == HTerm::Kind::Var) return ht_var(t->var + base);
        if (t->args.empty()) return t;
        std::vector<HTermPtr> args;
        args.reserve(t->args.size());
        for (const HTermPtr& a : t->args) args.push_back(rename(a, base));
        return ht_fun(t->functor, std::move(args));
    }

    // Whether some clause head could resolve this goal as currently bound.
    // Instantiation only ever shrinks the candidate set, so a goal with no
    // candidates can never be resolved later: its whole branch is dead.
    bool has_candidate(const HTermPtr& goal) {
        HTermPtr g = deref(goal);
        if (g->kind == HTerm::Kind::Var) return !prog.clauses.empty();
        if (g->functor == kTupleFunctor) return true;  // handled structurally
        for (const HornClause& c : prog.clauses) {
            if (c.head->functor != g->functor || c.head->args.size() != g->args.size())
                continue;
            const size_t mark = trail.size();
            const int base = fresh_block(c.n_vars);
            const bool ok = unify(g, rename(c.head, base));
            undo_to(mark);
            if (ok) return true;
        }
        return false;
    }
};

// Plain resolution with strict leftmost goal selection.  Tuple goals are
// expanded structurally (at no cost) so the recorded proof lists exactly the
// clause applications, in preorder over the derived value.
struct Solver {
    Machine m;
    const std::function<bool()>& emit;  // called on each proof; true = stop

    Solver(const HornProgram& prog, const std::function<bool()>& on_proof)
        : m(prog), emit(on_proof) {}

    bool run(std::vector<HTermPtr> goals) {
        // Flatten tuple goals into their components, preserving order.
        for (size_t i = 0; i < goals.size();) {
            HTermPtr g = m.deref(goals[i]);
            if (g->kind == HTerm::Kind::Fun && g->functor == kTupleFunctor) {
                goals.erase(goals.begin() + static_cast<long>(i));
                goals.insert(goals.begin() + static_cast<long>(i), g->args.begin(),
                             g->args.end());
                continue;
            }
            goals[i] = g;
            ++i;
        }
        if (goals.empty()) return emit();
        for (const HTermPtr& g : goals)
            if (!m.has_candidate(g)) return false;
        if (m.budget == 0) {
            m.cut = true;
            return false;
        }
        const HTermPtr goal = goals.front();
        const std::vector<HTermPtr> rest(goals.begin() + 1, goals.end());
        for (size_t ci = 0; ci < m.prog.clauses.size(); ++ci) {
            const HornClause& c = m.prog.clauses[ci];
            const size_t mark = m.trail.size();
            const int base = m.fresh_block(c.n_vars);
            if (!m.unify(goal, m.rename(c.head, base))) {
                m.undo_to(mark);
                continue;
            }
            --m.budget;
            ++m.apps;
            m.proof.push_back(static_cast<int>(ci));
            std::vector<HTermPtr> next;
            next.reserve(c.body.size() + rest.size());
            for (const HTermPtr& b : c.body) next.push_back(m.rename(b, base));
            next.insert(next.end(), rest.begin(), rest.end());
            if (run(std::move(next))) return true;
            m.proof.pop_back();
            ++m.budget;
            m.undo_to(mark);
        }
        return false;
    }
};

// Build the goal term for a semantic type; unbound type variables become
// resolver variables (shared across occurrences).
HTermPtr term_of_type(const Type& t, Machine& m, std::map<const VarCell*, int>& var_ids) {
    const Type rt = head_resolve(t);
    switch (rt->kind) {
        case TypeNode::Kind::Var: {
            auto it = var_ids.find(rt->var.get());
            if (it == var_ids.end())
                it = var_ids.emplace(rt->var.get(), m.fresh_block(1)).first;
            return ht_var(it->second);
        }
        case TypeNode::Kind::Param:
            // Treated as an unknown, like a fresh variable.
            return ht_var(m.fresh_block(1));
        case TypeNode::Kind::App: {
            std::vector<HTermPtr> args;
            args.reserve(rt->args.size());
            for (const Type& a : rt->args) args.push_back(term_of_type(a, m, var_ids));
            return ht_fun(rt->head, std::move(args));
        }
        case TypeNode::Kind::Tuple: {
            std::vector<HTermPtr> args;
            args.reserve(rt->args.size());
            for (const Type& a : rt->args) args.push_back(term_of_type(a, m, var_ids));
            return ht_fun(kTupleFunctor, std::move(args));
        }
        case TypeNode::Kind::Arrow:
            return ht_fun(kArrowFunctor, {term_of_type(rt->args[0], m, var_ids),
                                          term_of_type(rt->args[1], m, var_ids)});
    }
    throw std::logic_error("term_of_type: bad kind");
}

// Rebuild the value witnessed by a proof, walking the proof in step with the
// goal type's tuple structure and each clause's argument shape.  Base facts
// (builtins and function types) decode to wildcards.
struct Decoder {
    const HornProgram& prog;
    const Env& env;
    const std::vector<int>& proof;
    size_t pos = 0;

    PatPtr node() {
        assert(pos < proof.size());
        const HornClause& c = prog.clauses[static_cast<size_t>(proof[pos++])];
        if (c.ctor.empty()) return pat_wild();
        const ConstructorSig* sig = env.find_ctor(c.ctor);
        assert(sig);
        if (!sig->argument) return pat_constr(c.ctor);
        return pat_constr(c.ctor, {arg(*sig->argument)});
    }

    PatPtr arg(const Type& scheme) {
        if (scheme->kind == TypeNode::Kind::Tuple) {
            std::vector<PatPtr> elems;
            elems.reserve(scheme->args.size());
            for (const Type& comp : scheme->args) elems.push_back(arg(comp));
            return pat_tuple(std::move(elems));
        }
        return node();
    }

    PatPtr goal(const Type& goal_type) {
        const Type rt = head_resolve(goal_type);
        if (rt->kind == TypeNode::Kind::Tuple) {
            std::vector<PatPtr> elems;
            elems.reserve(rt->args.size());
            for (const Type& comp : rt->args) elems.push_back(goal(comp));
            return pat_tuple(std::move(elems));
        }
        return node();
    }
};

}  // namespace

ResolutionResult sld_inhabited(const Type& goal, int max_depth, const HornProgram& prog,
                               const Env& env) {
    ResolutionResult res;
    long total_apps = 0;
    for (int d = 1; d <= max_depth; ++d) {
        bool found = false;
        std::function<bool()> accept = [&found]() {
            found = true;
            return true;
        };
        Solver solver(prog, accept);
        solver.m.budget = d;
        std::map<const VarCell*, int> var_ids;
        HTermPtr g = term_of_type(goal, solver.m, var_ids);
        solver.run({g});
        total_apps += solver.m.apps;
        if (found) {
            Decoder dec{prog, env, solver.m.proof};
            res.kind = ResolutionResult::Kind::Witness;
            res.depth = d;
            res.witness = dec.goal(goal);
            res.applications = total_apps;
            return res;
        }
        if (!solver.m.cut) {
            res.kind = ResolutionResult::Kind::NoProofWithinDepth;
            res.depth = d;
            res.applications = total_apps;
            return res;
        }
    }
    res.kind = ResolutionResult::Kind::DepthExhausted;
    res.depth = max_depth;
    res.applications = total_apps;
    return res;
}

std::vector<PatPtr> sld_witnesses(const Type& goal, int depth, const HornProgram& prog,
                                  const Env& env, size_t max_count) {
    std::vector<PatPtr> out;
    std::set<std::string> seen;
    std::vector<int>* proof_ref = nullptr;
    std::function<bool()> accept = [&]() {
        Decoder dec{prog, env, *proof_ref};
        PatPtr w = dec.goal(goal);
        if (seen.insert(print_pattern(w)).second) out.push_back(std::move(w));
        return out.size() >= max_count;
    };
    Solver solver(prog, accept);
    proof_ref = &solver.m.proof;
    solver.m.budget = depth;
    std::map<const VarCell*, int> var_ids;
    HTermPtr g = term_of_type(goal, solver.m, var_ids);
    solver.run({g});
    return out;
}

// ---- pattern-constrained queries ------------------------------------------------

namespace {

struct QGoal {
    HTermPtr term;
    PatPtr cons;  // null = unconstrained
};

bool pattern_constrains(const PatPtr& p) {
    return p && p->kind != Pattern::Kind::Wild && p->kind != Pattern::Kind::Var;
}

// Leaf constraints for a constructor's flattened body atoms, one row per way
// of distributing or-alternatives that span several components.  Rows are in
// left-to-right alternative order.
using ConsRow = std::vector<PatPtr>;

void pair_rows(const Type& scheme, const PatPtr& p, std::vector<ConsRow>& rows);

void pair_tuple(const std::vector<Type>& comps, const std::vector<PatPtr>& pats,
                std::vector<ConsRow>& rows) {
    std::vector<ConsRow> acc{{}};
    for (size_t i = 0; i < comps.size(); ++i) {
        std::vector<ConsRow> comp_rows;
        pair_rows(comps[i], i < pats.size() ? pats[i] : nullptr, comp_rows);
        std::vector<ConsRow> next;
        for (const ConsRow& a : acc)
            for (const ConsRow& b : comp_rows) {
                ConsRow joined = a;
                joined.insert(joined.end(), b.begin(), b.end());
                next.push_back(std::move(joined));
            }
        acc = std::move(next);
    }
    for (ConsRow& r : acc) rows.push_back(std::move(r));
}

void pair_rows(const Type& scheme, const PatPtr& p, std::vector<ConsRow>& rows) {
    if (scheme->kind != TypeNode::Kind::Tuple) {
        rows.push_back({p});
        return;
    }
    const size_t n = scheme->args.size();
    if (!p || p->kind == Pattern::Kind::Wild || p->kind == Pattern::Kind::Var) {
        pair_tuple(scheme->args, std::vector<PatPtr>(n, nullptr), rows);
        return;
    }
    if (p->kind == Pattern::Kind::Tuple) {
        pair_tuple(scheme->args, p->args, rows);
        return;
    }
    if (p->kind == Pattern::Kind::Or) {
        for (const PatPtr& alt : or_alternatives(p)) pair_rows(scheme, alt, rows);
        return;
    }
    // A constructor pattern cannot sit at a tuple type; treat as unconstrained.
    pair_tuple(scheme->args, std::vector<PatPtr>(n, nullptr), rows);
}

struct QSolver {
    Machine m;
    const Env& env;

    QSolver(const HornProgram& prog, const Env& e) : m(prog), env(e) {}

    // Clauses that could resolve the goal under its constraint.
    bool q_has_candidate(const QGoal& g) {
        if (g.cons && g.cons->kind == Pattern::Kind::Or) {
            for (const PatPtr& alt : or_alternatives(g.cons)) {
                QGoal alt_goal{g.term, alt};
                if (q_has_candidate(alt_goal)) return true;
            }
            return false;
        }
        if (g.cons && g.cons->kind == Pattern::Kind::Constr) {
            for (const HornClause& c : m.prog.clauses) {
                if (c.ctor != g.cons->name) continue;
                const size_t mark = m.trail.size();
                const int base = m.fresh_block(c.n_vars);
                const bool ok = m.unify(g.term, m.rename(c.head, base));
                m.undo_to(mark);
                return ok;
            }
            return false;
        }
        if (g.cons && g.cons->kind == Pattern::Kind::Tuple) {
            HTermPtr t = m.deref(g.term);
            if (t->kind == HTerm::Kind::Var) return true;
            return t->functor == kTupleFunctor && t->args.size() == g.cons->args.size();
        }
        return m.has_candidate(g.term);
    }

    bool run(std::vector<QGoal> goals) {
        // Expose tuple structure: split tuple terms into component goals, and
        // force a variable term to a tuple when its constraint demands one.
        for (size_t i = 0; i < goals.size();) {
            QGoal& g = goals[i];
            if (g.cons && g.cons->kind == Pattern::Kind::Or) {
                ++i;  // alternatives are explored when the goal is selected
                continue;
            }
            HTermPtr t = m.deref(g.term);
            if (t->kind == HTerm::Kind::Var && g.cons &&
                g.cons->kind == Pattern::Kind::Tuple) {
                std::vector<HTermPtr> comps;
                for (size_t j = 0; j < g.cons->args.size(); ++j)
                    comps.push_back(ht_var(m.fresh_block(1)));
                m.bind_var(t->var, ht_fun(kTupleFunctor, comps));
                t = m.deref(g.term);
            }
            if (t->kind == HTerm::Kind::Fun && t->functor == kTupleFunctor) {
                std::vector<QGoal> comps;
                comps.reserve(t->args.size());
                const PatPtr cons = g.cons;
                const bool tup = cons && cons->kind == Pattern::Kind::Tuple &&
                                 cons->args.size() == t->args.size();
                for (size_t j = 0; j < t->args.size(); ++j)
                    comps.push_back(QGoal{t->args[j], tup ? cons->args[j] : nullptr});
                goals.erase(goals.begin() + static_cast<long>(i));
                goals.insert(goals.begin() + static_cast<long>(i), comps.begin(),
                             comps.end());
                continue;
            }
            g.term = t;
            ++i;
        }
        if (goals.empty()) return true;
        // A pending goal that no clause can ever resolve dooms the branch.
        for (QGoal& g : goals)
            if (!q_has_candidate(g)) return false;
        if (m.budget == 0) {
            m.cut = true;
            return false;
        }
        // Prefer constrained goals: their mismatches cut the search finitely.
        size_t sel = 0;
        for (size_t i = 0; i < goals.size(); ++i)
            if (pattern_constrains(goals[i].cons)) {
                sel = i;
                break;
            }
        QGoal goal = goals[static_cast<size_t>(sel)];
        std::vector<QGoal> rest = goals;
        rest.erase(rest.begin() + static_cast<long>(sel));

        if (goal.cons && goal.cons->kind == Pattern::Kind::Or) {
            for (const PatPtr& alt : or_alternatives(goal.cons)) {
                const size_t mark = m.trail.size();
                std::vector<QGoal> retry = rest;
                retry.insert(retry.begin() + static_cast<long>(sel),
                             QGoal{goal.term, alt});
                if (run(std::move(retry))) return true;
                m.undo_to(mark);
            }
            return false;
        }

        // A constructor fixed by the query pattern is not a choice the solver
        // makes, so it does not consume budget; the budget meters only the
        // free positions a witness would have to fill in.
        const bool pinned =
            goal.cons && goal.cons->kind == Pattern::Kind::Constr;
        for (size_t ci = 0; ci < m.prog.clauses.size(); ++ci) {
            const HornClause& c = m.prog.clauses[ci];
            if (pinned && c.ctor != goal.cons->name) continue;
            const size_t mark = m.trail.size();
            const int base = m.fresh_block(c.n_vars);
            if (!m.unify(goal.term, m.rename(c.head, base))) {
                m.undo_to(mark);
                continue;
            }
            if (!pinned) --m.budget;
            ++m.apps;
            // Distribute the constructor's argument pattern over the body
            // atoms; several rows arise when an or-pattern spans components.
            std::vector<ConsRow> rows;
            if (goal.cons && goal.cons->kind == Pattern::Kind::Constr &&
                !goal.cons->args.empty()) {
                const ConstructorSig* sig = env.find_ctor(c.ctor);
                assert(sig && sig->argument);
                pair_rows(*sig->argument, goal.cons->args[0], rows);
            } else {
                rows.push_back(ConsRow(c.body.size(), nullptr));
            }
            for (const ConsRow& row : rows) {
                assert(row.size() == c.body.size());
                const size_t row_mark = m.trail.size();
                std::vector<QGoal> next;
                next.reserve(c.body.size() + rest.size());
                for (size_t j = 0; j < c.body.size(); ++j)
                    next.push_back(QGoal{m.rename(c.body[j], base), row[j]});
                next.insert(next.end(), rest.begin(), rest.end());
                if (run(std::move(next))) return true;
                m.undo_to(row_mark);
            }
            if (!pinned) ++m.budget;
            m.undo_to(mark);
        }
        return false;
    }
};

}  // namespace

QueryResult query_pattern(const PatPtr& p, const Type& goal, int max_depth,
                          const HornProgram& prog, const Env& env) {
    QueryResult res;
    long total_apps = 0;
    for (int d = 1; d <= max_depth; ++d) {
        QSolver solver(prog, env);
        solver.m.budget = d;
        std::map<const VarCell*, int> var_ids;
        HTermPtr g = term_of_type(goal, solver.m, var_ids);
        const bool found = solver.run({QGoal{g, p}});
        total_apps += solver.m.apps;
        if (found) {
            res.verdict = QueryVerdict::Proved;
            res.depth = d;
            res.applications = total_apps;
            return res;
        }
        if (!solver.m.cut) {
            res.verdict = QueryVerdict::Refuted;
            res.depth = d;
            res.applications = total_apps;
            return res;
        }
    }
    res.verdict = QueryVerdict::Unknown;
    res.depth = max_depth;
    res.applications = total_apps;
    return res;
}

}  // namespace gml
