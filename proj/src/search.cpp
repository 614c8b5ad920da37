#include "gmlcheck/search.hpp"

#include <cassert>
#include <functional>

namespace gml {

namespace {

constexpr int kMaxSplitDepth = 64;

enum class WalkMode { TypeOnly, Check };

struct SearchCtx {
    const Env& env;
    InferSession& session;
    WalkMode mode = WalkMode::Check;
    UnifyMode unify_mode = UnifyMode::PatternCompat;
    SplitPolicy::Kind policy = SplitPolicy::Kind::Never;
    long fuel = 0;  // Full policy only; shared across the whole query
    SearchStats* stats = nullptr;

    void count_leaf() {
        if (mode == WalkMode::Check && stats) ++stats->leaves;
    }
};

// Invoked with the refined form of the pattern each time the walk reaches a
// consistent assignment; returns true to accept it and stop.
using Cont = std::function<bool(const PatPtr&)>;

bool walk(SearchCtx& cx, const PatPtr& p, const Type& ty, int split_depth, const Cont& k);

bool walk_wild(SearchCtx& cx, const PatPtr& p, const Type& ty, int split_depth,
               const Cont& k) {
    if (cx.mode == WalkMode::Check && split_depth < kMaxSplitDepth) {
        const Type rt = head_resolve(ty);
        bool eligible = false;
        bool fueled = false;
        switch (cx.policy) {
            case SplitPolicy::Kind::Never:
                break;
            case SplitPolicy::Kind::Once:
                eligible = !p->no_split && split_eligible(rt, cx.env, SplitPolicy::Kind::Once);
                break;
            case SplitPolicy::Kind::Full:
                // Splits the one-shot policy would make terminate on their
                // own (generated subpatterns are never resplit, and depth is
                // bounded), so the fuel meters only the extra branching this
                // policy adds.  A Full verdict is then always at least as
                // strong as a Once verdict, whatever the fuel.
                if (!p->no_split && split_eligible(rt, cx.env, SplitPolicy::Kind::Once)) {
                    eligible = true;
                } else if (cx.fuel > 0 &&
                           split_eligible(rt, cx.env, SplitPolicy::Kind::Full)) {
                    eligible = true;
                    fueled = true;
                }
                break;
        }
        if (eligible) {
            if (cx.stats) ++cx.stats->splits;
            if (fueled) --cx.fuel;
            std::optional<PatPtr> refined = explode_pat(rt, cx.env);
            if (!refined) {
                // A variant with no constructors: no value fits here.
                cx.count_leaf();
                return false;
            }
            return walk(cx, *refined, ty, split_depth + 1, k);
        }
    }
    return k(p);
}

bool walk_constr(SearchCtx& cx, const PatPtr& p, const Type& ty, int split_depth,
                 const Cont& k) {
    const ConstructorSig* sig = cx.env.find_ctor(p->name);
    assert(sig && "patterns are validated before searching");
    std::optional<Instantiation> inst =
        instantiate_constructor(*sig, ty, cx.unify_mode, cx.env, cx.session);
    if (!inst) {
        cx.count_leaf();
        return false;
    }
    if (!sig->argument) return k(p);
    assert(inst->argument && p->args.size() == 1);
    return walk(cx, p->args[0], *inst->argument, split_depth,
                [&k, &p](const PatPtr& arg) { return k(pat_constr(p->name, {arg})); });
}

bool walk_tuple(SearchCtx& cx, const PatPtr& p, const Type& ty, int split_depth,
                const Cont& k) {
    const size_t n = p->args.size();
    const Type rt = head_resolve(ty);
    std::vector<Type> comps;
    if (rt->kind == TypeNode::Kind::Tuple && rt->args.size() == n) {
        comps = rt->args;
    } else if (rt->kind == TypeNode::Kind::Var) {
        comps.reserve(n);
        for (size_t i = 0; i < n; ++i) comps.push_back(cx.session.fresh_var());
        try {
            unify(rt, ty_tuple(comps), UnifyMode::Strict, cx.env, cx.session.trail());
        } catch (const UnifyError&) {
            cx.count_leaf();
            return false;
        }
    } else {
        cx.count_leaf();
        return false;
    }

    std::function<bool(size_t, std::vector<PatPtr>)> go =
        [&](size_t i, std::vector<PatPtr> acc) -> bool {
        if (i == n) return k(pat_tuple(std::move(acc)));
        return walk(cx, p->args[i], comps[i], split_depth,
                    [&go, i, &acc](const PatPtr& elem) {
                        std::vector<PatPtr> next = acc;
                        next.push_back(elem);
                        return go(i + 1, std::move(next));
                    });
    };
    return go(0, {});
}

bool walk_or(SearchCtx& cx, const PatPtr& p, const Type& ty, int split_depth,
             const Cont& k) {
    if (cx.mode == WalkMode::Check) {
        Trail& trail = cx.session.trail();
        const size_t mark = trail.save();
        if (walk(cx, p->args[0], ty, split_depth, k)) return true;
        trail.undo_to(mark);
        return walk(cx, p->args[1], ty, split_depth, k);
    }
    // Type-only: both alternatives must fit, and their bindings accumulate.
    return walk(cx, p->args[0], ty, split_depth, [&](const PatPtr&) {
        return walk(cx, p->args[1], ty, split_depth, k);
    });
}

bool walk(SearchCtx& cx, const PatPtr& p, const Type& ty, int split_depth, const Cont& k) {
    switch (p->kind) {
        case Pattern::Kind::Wild:
            return walk_wild(cx, p, ty, split_depth, k);
        case Pattern::Kind::Var:
            return k(p);
        case Pattern::Kind::Constr:
            return walk_constr(cx, p, ty, split_depth, k);
        case Pattern::Kind::Tuple:
            return walk_tuple(cx, p, ty, split_depth, k);
        case Pattern::Kind::Or:
            return walk_or(cx, p, ty, split_depth, k);
    }
    return false;
}

}  // namespace

bool split_eligible(const Type& t, const Env& env, SplitPolicy::Kind kind) {
    if (kind == SplitPolicy::Kind::Never) return false;
    const Type rt = head_resolve(t);
    if (rt->kind == TypeNode::Kind::Tuple) return true;
    if (rt->kind != TypeNode::Kind::App) return false;
    const TypeDecl* d = env.find(rt->head);
    if (!d || d->kind != TypeDecl::Kind::Variant) return false;
    if (kind == SplitPolicy::Kind::Full) return true;
    if (d->ctors.size() == 1) return true;
    if (d->ctors.empty()) return true;  // trivially refutable
    for (const ConstructorSig& c : d->ctors)
        if (!c.gadt_indexed) return false;
    return true;
}

std::optional<PatPtr> explode_pat(const Type& t, const Env& env) {
    const Type rt = head_resolve(t);
    if (rt->kind == TypeNode::Kind::Tuple) {
        std::vector<PatPtr> elems;
        elems.reserve(rt->args.size());
        for (size_t i = 0; i < rt->args.size(); ++i) elems.push_back(pat_wild());
        return pat_tuple(std::move(elems));
    }
    if (rt->kind != TypeNode::Kind::App) return std::nullopt;
    const TypeDecl* d = env.find(rt->head);
    if (!d || d->kind != TypeDecl::Kind::Variant || d->ctors.empty()) return std::nullopt;
    bool all_indexed = true;
    for (const ConstructorSig& c : d->ctors)
        if (!c.gadt_indexed) all_indexed = false;
    std::vector<PatPtr> alts;
    alts.reserve(d->ctors.size());
    for (const ConstructorSig& c : d->ctors) {
        if (c.argument)
            alts.push_back(pat_constr(c.name, {pat_wild(all_indexed)}));
        else
            alts.push_back(pat_constr(c.name));
    }
    return or_of(alts);
}

SearchOutcome search_pattern(const PatPtr& p, const Type& expected, SplitPolicy policy,
                             const Env& env, InferSession& session, SearchStats* stats) {
    SearchCtx cx{env, session, WalkMode::Check, UnifyMode::PatternCompat,
                 policy.kind, policy.fuel, stats};
    Trail& trail = session.trail();
    const size_t mark = trail.save();
    SearchOutcome out;
    bool found = false;
    try {
        found = walk(cx, p, expected, 0, [&](const PatPtr& witness) {
            if (stats) ++stats->leaves;
            out.emptiness = Emptiness::Inhabited;
            out.witness = witness;
            return true;
        });
    } catch (...) {
        trail.undo_to(mark);
        throw;
    }
    trail.undo_to(mark);
    if (!found) out = SearchOutcome{};
    return out;
}

bool pattern_typable(const PatPtr& p, const Type& expected, UnifyMode mode, const Env& env,
                     InferSession& session) {
    SearchCtx cx{env, session, WalkMode::TypeOnly, mode,
                 SplitPolicy::Kind::Never, 0, nullptr};
    Trail& trail = session.trail();
    const size_t mark = trail.save();
    bool ok = false;
    try {
        ok = walk(cx, p, expected, 0, [](const PatPtr&) { return true; });
    } catch (...) {
        trail.undo_to(mark);
        throw;
    }
    trail.undo_to(mark);
    return ok;
}

}  // namespace gml
