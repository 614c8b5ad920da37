#include "gmlcheck/matrix.hpp"

#include <atomic>
#include <cassert>
#include <map>
#include <memory>
#include <stdexcept>
#include <utility>

namespace gml {

namespace {

// Rows produced by expanding or-alternatives of each row's first column.
// Width is preserved; the result has one row per (row, alternative) pair.
std::vector<PatRow> expand_first_column(const std::vector<PatRow>& rows) {
    std::vector<PatRow> out;
    for (const PatRow& row : rows) {
        assert(!row.empty());
        if (row[0]->kind != Pattern::Kind::Or) {
            out.push_back(row);
            continue;
        }
        for (const PatPtr& alt : or_alternatives(row[0])) {
            PatRow expanded = row;
            expanded[0] = alt;
            out.push_back(expanded);
        }
    }
    return out;
}

// ---- constructor argument enumeration ------------------------------------------

// Fresh variables used as the types of argument positions that the matched
// result indices leave unconstrained.  They belong to no inference session:
// nothing ever binds them, so they simply act as "unknown" columns.
Type fresh_detached_var() {
    static std::atomic<int> next{-2};
    auto cell = std::make_shared<VarCell>();
    cell->id = next.fetch_sub(1);
    cell->level = 0;
    return ty_var(std::move(cell));
}

// One-way structural matching of a declaration scheme against a concrete
// type: parameter slots are bound on first sight and silently left alone on
// later sights or shape mismatches.  Used only to pick useful column types
// for enumeration, so being lossy is fine; the typed search is what decides
// emptiness.
void match_scheme(const Type& scheme, const Type& actual,
                  std::vector<std::optional<Type>>& slots) {
    const Type act = head_resolve(actual);
    switch (scheme->kind) {
        case TypeNode::Kind::Param: {
            auto idx = static_cast<size_t>(scheme->param_index);
            if (idx < slots.size() && !slots[idx]) slots[idx] = act;
            return;
        }
        case TypeNode::Kind::App:
            if (act->kind == TypeNode::Kind::App && act->head == scheme->head &&
                act->args.size() == scheme->args.size())
                for (size_t i = 0; i < scheme->args.size(); ++i)
                    match_scheme(scheme->args[i], act->args[i], slots);
            return;
        case TypeNode::Kind::Tuple:
        case TypeNode::Kind::Arrow:
            if (act->kind == scheme->kind && act->args.size() == scheme->args.size())
                for (size_t i = 0; i < scheme->args.size(); ++i)
                    match_scheme(scheme->args[i], act->args[i], slots);
            return;
        case TypeNode::Kind::Var:
            return;
    }
}

Type subst_with_slots(const Type& scheme, const std::vector<std::optional<Type>>& slots) {
    switch (scheme->kind) {
        case TypeNode::Kind::Param: {
            auto idx = static_cast<size_t>(scheme->param_index);
            if (idx < slots.size() && slots[idx]) return *slots[idx];
            return fresh_detached_var();
        }
        case TypeNode::Kind::Var:
            return scheme;
        case TypeNode::Kind::App:
        case TypeNode::Kind::Tuple:
        case TypeNode::Kind::Arrow: {
            std::vector<Type> args;
            args.reserve(scheme->args.size());
            for (const Type& a : scheme->args) args.push_back(subst_with_slots(a, slots));
            if (scheme->kind == TypeNode::Kind::App) return ty_app(scheme->head, std::move(args));
            if (scheme->kind == TypeNode::Kind::Tuple) return ty_tuple(std::move(args));
            return ty_arrow(args[0], args[1]);
        }
    }
    return scheme;
}

}  // namespace

std::optional<Type> constructor_argument_at(const ConstructorSig& c, const Type& applied) {
    if (!c.argument) return std::nullopt;
    std::vector<std::optional<Type>> slots(c.slot_names.size());
    const Type target = head_resolve(applied);
    if (target->kind == TypeNode::Kind::App && target->head == c.owner &&
        target->args.size() == c.result_indices.size())
        for (size_t i = 0; i < c.result_indices.size(); ++i)
            match_scheme(c.result_indices[i], target->args[i], slots);
    return subst_with_slots(*c.argument, slots);
}

// ---- specialization / defaulting ------------------------------------------------

std::vector<PatRow> specialize(const std::vector<PatRow>& rows, const ConstructorSig& c) {
    const size_t arity = c.argument ? 1 : 0;
    std::vector<PatRow> out;
    for (const PatRow& row : expand_first_column(rows)) {
        const PatPtr& head = row[0];
        PatRow next;
        switch (head->kind) {
            case Pattern::Kind::Wild:
            case Pattern::Kind::Var:
                next.reserve(arity + row.size() - 1);
                for (size_t i = 0; i < arity; ++i) next.push_back(pat_wild());
                break;
            case Pattern::Kind::Constr:
                if (head->name != c.name) continue;
                next.reserve(arity + row.size() - 1);
                for (const PatPtr& a : head->args) next.push_back(a);
                break;
            case Pattern::Kind::Tuple:
                throw std::logic_error("specialize: tuple pattern in a constructor column");
            case Pattern::Kind::Or:
                throw std::logic_error("specialize: unexpanded or-pattern");
        }
        next.insert(next.end(), row.begin() + 1, row.end());
        out.push_back(std::move(next));
    }
    return out;
}

std::vector<PatRow> default_matrix(const std::vector<PatRow>& rows) {
    std::vector<PatRow> out;
    for (const PatRow& row : expand_first_column(rows)) {
        const PatPtr& head = row[0];
        if (head->kind == Pattern::Kind::Wild || head->kind == Pattern::Kind::Var)
            out.emplace_back(row.begin() + 1, row.end());
    }
    return out;
}

// ---- complete uncovered sets ----------------------------------------------------

namespace {

// How the leading column of a matrix should be unfolded.
struct ColumnPlan {
    enum class Kind {
        WildOnly,   // no row constrains the column: factor a single wildcard
        TupleCols,  // unfold into component columns
        PerCtor,    // enumerate the owning declaration's constructors
    };
    Kind kind = Kind::WildOnly;
    std::vector<Type> components;  // TupleCols
    const TypeDecl* decl = nullptr;  // PerCtor
    Type applied;                    // PerCtor: the column type as an application
};

// The first constructor or tuple pattern appearing in the column, if any.
const Pattern* first_structured(const std::vector<PatRow>& rows) {
    for (const PatRow& row : rows) {
        const Pattern* p = row[0].get();
        if (p->kind == Pattern::Kind::Constr || p->kind == Pattern::Kind::Tuple) return p;
    }
    return nullptr;
}

ColumnPlan plan_column(const Type& col_type, const std::vector<PatRow>& rows, const Env& env) {
    ColumnPlan plan;
    const Type ty = head_resolve(col_type);
    switch (ty->kind) {
        case TypeNode::Kind::Tuple:
            plan.kind = ColumnPlan::Kind::TupleCols;
            plan.components = ty->args;
            return plan;
        case TypeNode::Kind::App: {
            const TypeDecl* d = env.find(ty->head);
            if (d && d->kind == TypeDecl::Kind::Variant && !d->ctors.empty()) {
                if (!first_structured(rows)) return plan;  // wildcard-factored
                plan.kind = ColumnPlan::Kind::PerCtor;
                plan.decl = d;
                plan.applied = ty;
                return plan;
            }
            return plan;  // abstract / builtin / empty variant: nothing to enumerate
        }
        case TypeNode::Kind::Arrow:
        case TypeNode::Kind::Param:
            return plan;
        case TypeNode::Kind::Var: {
            // The column type is unknown; let the patterns themselves reveal
            // the shape (they all agree, having been typed against it).
            const Pattern* witness = first_structured(rows);
            if (!witness) return plan;
            if (witness->kind == Pattern::Kind::Tuple) {
                plan.kind = ColumnPlan::Kind::TupleCols;
                for (size_t i = 0; i < witness->args.size(); ++i)
                    plan.components.push_back(fresh_detached_var());
                return plan;
            }
            const ConstructorSig* sig = env.find_ctor(witness->name);
            if (!sig) return plan;
            const TypeDecl* d = env.find(sig->owner);
            if (!d || d->ctors.empty()) return plan;
            plan.kind = ColumnPlan::Kind::PerCtor;
            plan.decl = d;
            std::vector<Type> fresh;
            for (size_t i = 0; i < static_cast<size_t>(d->arity); ++i)
                fresh.push_back(fresh_detached_var());
            plan.applied = ty_app(d->name, std::move(fresh));
            return plan;
        }
    }
    return plan;
}

std::vector<PatRow> missing_rec(const std::vector<PatRow>& rows,
                                const std::vector<Type>& col_types,
                                const Env& env) {
    if (col_types.empty()) {
        // Zero columns left: the empty vector is uncovered iff no row remains.
        if (rows.empty()) return {PatRow{}};
        return {};
    }

    const std::vector<PatRow> expanded = expand_first_column(rows);
    const ColumnPlan plan = plan_column(col_types[0], expanded, env);
    std::vector<PatRow> out;

    switch (plan.kind) {
        case ColumnPlan::Kind::WildOnly: {
            std::vector<Type> rest(col_types.begin() + 1, col_types.end());
            for (PatRow& sub : missing_rec(default_matrix(expanded), rest, env)) {
                PatRow row;
                row.reserve(sub.size() + 1);
                row.push_back(pat_wild());
                row.insert(row.end(), sub.begin(), sub.end());
                out.push_back(std::move(row));
            }
            return out;
        }
        case ColumnPlan::Kind::TupleCols: {
            const size_t n = plan.components.size();
            std::vector<PatRow> srows;
            for (const PatRow& row : expanded) {
                const PatPtr& head = row[0];
                PatRow next;
                if (head->kind == Pattern::Kind::Tuple) {
                    assert(head->args.size() == n);
                    next = head->args;
                } else {
                    for (size_t i = 0; i < n; ++i) next.push_back(pat_wild());
                }
                next.insert(next.end(), row.begin() + 1, row.end());
                srows.push_back(std::move(next));
            }
            std::vector<Type> tys = plan.components;
            tys.insert(tys.end(), col_types.begin() + 1, col_types.end());
            for (PatRow& sub : missing_rec(srows, tys, env)) {
                PatRow row;
                row.push_back(pat_tuple({sub.begin(), sub.begin() + static_cast<long>(n)}));
                row.insert(row.end(), sub.begin() + static_cast<long>(n), sub.end());
                out.push_back(std::move(row));
            }
            return out;
        }
        case ColumnPlan::Kind::PerCtor: {
            for (const ConstructorSig& c : plan.decl->ctors) {
                std::optional<Type> arg_ty = constructor_argument_at(c, plan.applied);
                std::vector<Type> tys;
                if (arg_ty) tys.push_back(*arg_ty);
                tys.insert(tys.end(), col_types.begin() + 1, col_types.end());
                for (PatRow& sub : missing_rec(specialize(expanded, c), tys, env)) {
                    PatRow row;
                    if (arg_ty) {
                        row.push_back(pat_constr(c.name, {sub[0]}));
                        row.insert(row.end(), sub.begin() + 1, sub.end());
                    } else {
                        row.push_back(pat_constr(c.name));
                        row.insert(row.end(), sub.begin(), sub.end());
                    }
                    out.push_back(std::move(row));
                }
            }
            return out;
        }
    }
    return out;
}

}  // namespace

std::vector<PatRow> missing_patterns(const std::vector<PatRow>& rows,
                                     const std::vector<Type>& col_types,
                                     const Env& env) {
    for (const PatRow& row : rows)
        if (row.size() != col_types.size())
            throw std::logic_error("missing_patterns: row width mismatch");
    return missing_rec(rows, col_types, env);
}

// ---- pattern intersection -------------------------------------------------------

PatPtr intersect(const PatPtr& a, const PatPtr& b) {
    if (a->kind == Pattern::Kind::Or || b->kind == Pattern::Kind::Or) {
        const bool split_a = a->kind == Pattern::Kind::Or;
        std::vector<PatPtr> kept;
        for (const PatPtr& alt : or_alternatives(split_a ? a : b)) {
            PatPtr meet = split_a ? intersect(alt, b) : intersect(a, alt);
            if (meet) kept.push_back(std::move(meet));
        }
        if (kept.empty()) return nullptr;
        return or_of(kept);
    }
    if (a->kind == Pattern::Kind::Wild || a->kind == Pattern::Kind::Var) {
        if (b->kind == Pattern::Kind::Wild || b->kind == Pattern::Kind::Var) return a;
        return b;
    }
    if (b->kind == Pattern::Kind::Wild || b->kind == Pattern::Kind::Var) return a;

    if (a->kind == Pattern::Kind::Constr && b->kind == Pattern::Kind::Constr) {
        if (a->name != b->name) return nullptr;
        if (a->args.empty() && b->args.empty()) return a;
        assert(a->args.size() == 1 && b->args.size() == 1);
        PatPtr sub = intersect(a->args[0], b->args[0]);
        if (!sub) return nullptr;
        return pat_constr(a->name, {std::move(sub)});
    }
    if (a->kind == Pattern::Kind::Tuple && b->kind == Pattern::Kind::Tuple) {
        assert(a->args.size() == b->args.size());
        std::vector<PatPtr> elems;
        elems.reserve(a->args.size());
        for (size_t i = 0; i < a->args.size(); ++i) {
            PatPtr sub = intersect(a->args[i], b->args[i]);
            if (!sub) return nullptr;
            elems.push_back(std::move(sub));
        }
        return pat_tuple(std::move(elems));
    }
    // A constructor and a tuple can only meet under distinct types; callers
    // never intersect across types, so treat the pair as disjoint.
    return nullptr;
}

std::vector<PatPtr> residual(const PatPtr& arm,
                             const std::vector<PatPtr>& previous,
                             const Type& scrutinee,
                             const Env& env) {
    std::vector<PatRow> rows;
    for (const PatPtr& p : previous)
        for (const PatPtr& alt : or_alternatives(p)) rows.push_back(PatRow{alt});
    std::vector<PatPtr> out;
    for (const PatRow& m : missing_patterns(rows, {scrutinee}, env)) {
        PatPtr meet = intersect(arm, m[0]);
        if (meet) out.push_back(std::move(meet));
    }
    return out;
}

}  // namespace gml
