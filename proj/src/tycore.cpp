#include "gmlcheck/tycore.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace gml {

Type ty_app(std::string head, std::vector<Type> args) {
    auto t = std::make_shared<TypeNode>();
    t->kind = TypeNode::Kind::App;
    t->head = std::move(head);
    t->args = std::move(args);
    return t;
}

Type ty_arrow(Type dom, Type cod) {
    auto t = std::make_shared<TypeNode>();
    t->kind = TypeNode::Kind::Arrow;
    t->args = {std::move(dom), std::move(cod)};
    return t;
}

Type ty_tuple(std::vector<Type> elems) {
    auto t = std::make_shared<TypeNode>();
    t->kind = TypeNode::Kind::Tuple;
    t->args = std::move(elems);
    return t;
}

Type ty_param(int index, std::string name) {
    auto t = std::make_shared<TypeNode>();
    t->kind = TypeNode::Kind::Param;
    t->param_index = index;
    t->head = std::move(name);
    return t;
}

Type ty_var(VarCellPtr cell) {
    auto t = std::make_shared<TypeNode>();
    t->kind = TypeNode::Kind::Var;
    t->var = std::move(cell);
    return t;
}

Type head_resolve(const Type& t) {
    Type cur = t;
    while (cur->kind == TypeNode::Kind::Var && cur->var->binding)
        cur = cur->var->binding;
    return cur;
}

Type deep_resolve(const Type& t) {
    Type cur = head_resolve(t);
    if (cur->args.empty()) return cur;
    std::vector<Type> args;
    args.reserve(cur->args.size());
    bool changed = false;
    for (const auto& a : cur->args) {
        args.push_back(deep_resolve(a));
        changed |= args.back().get() != a.get();
    }
    if (!changed && cur.get() == t.get()) return cur;
    auto out = std::make_shared<TypeNode>(*cur);
    out->args = std::move(args);
    return out;
}

bool type_equal(const Type& a, const Type& b) {
    Type x = head_resolve(a), y = head_resolve(b);
    if (x.get() == y.get()) return true;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case TypeNode::Kind::Var:
            return x->var == y->var;
        case TypeNode::Kind::Param:
            return x->param_index == y->param_index && x->head == y->head;
        case TypeNode::Kind::App:
            if (x->head != y->head) return false;
            break;
        case TypeNode::Kind::Arrow:
        case TypeNode::Kind::Tuple:
            break;
    }
    if (x->args.size() != y->args.size()) return false;
    for (size_t i = 0; i < x->args.size(); ++i)
        if (!type_equal(x->args[i], y->args[i])) return false;
    return true;
}

// ---- session ----------------------------------------------------------------

Type InferSession::fresh_var(int level) {
    auto cell = std::make_shared<VarCell>();
    cell->id = next_id_++;
    cell->level = level;
    cells_.push_back(cell);
    return ty_var(cell);
}

std::vector<std::pair<VarCellPtr, const TypeNode*>> InferSession::snapshot() const {
    std::vector<std::pair<VarCellPtr, const TypeNode*>> snap;
    snap.reserve(cells_.size());
    for (const auto& c : cells_) snap.emplace_back(c, c->binding.get());
    return snap;
}

bool InferSession::matches_snapshot(
    const std::vector<std::pair<VarCellPtr, const TypeNode*>>& snap) const {
    if (snap.size() > cells_.size()) return false;
    for (size_t i = 0; i < snap.size(); ++i) {
        if (cells_[i] != snap[i].first) return false;
        if (cells_[i]->binding.get() != snap[i].second) return false;
    }
    // Cells created after the snapshot must have been unbound again.
    for (size_t i = snap.size(); i < cells_.size(); ++i)
        if (cells_[i]->binding) return false;
    return true;
}

// ---- environment -------------------------------------------------------------

const std::vector<std::string>& Env::builtin_types() {
    static const std::vector<std::string> names = {"int", "bool", "char", "float", "unit"};
    return names;
}

void Env::add_decl(TypeDecl decl, SrcLoc loc) {
    if (decls_.count(decl.name))
        throw TypeError(loc, "type '" + decl.name + "' is already declared");
    for (const auto& c : decl.ctors) {
        auto [it, fresh] = ctor_owner_.emplace(c.name, decl.name);
        if (!fresh)
            throw TypeError(loc, "constructor '" + c.name + "' is already declared by type '" +
                                     it->second + "'");
    }
    order_.push_back(decl.name);
    decls_.emplace(decl.name, std::move(decl));
}

const TypeDecl* Env::find(const std::string& name) const {
    auto it = decls_.find(name);
    return it == decls_.end() ? nullptr : &it->second;
}

const TypeDecl& Env::lookup(const std::string& name, SrcLoc loc) const {
    const TypeDecl* d = find(name);
    if (!d) throw TypeError(loc, "unknown type '" + name + "'");
    return *d;
}

const ConstructorSig* Env::find_ctor(const std::string& name) const {
    auto it = ctor_owner_.find(name);
    if (it == ctor_owner_.end()) return nullptr;
    const TypeDecl& d = decls_.at(it->second);
    for (const auto& c : d.ctors)
        if (c.name == name) return &c;
    return nullptr;
}

namespace {

// Shared walker for declaration schemes: converts a surface type expression,
// mapping type variables through `slots` (extended when allowed), validating
// referenced type names and arities against already-elaborated declarations
// (plus the declaration currently being elaborated).
struct SchemeBuilder {
    const Env& env;
    const std::string& self_name;
    int self_arity;
    std::map<std::string, int>& slots;
    std::vector<std::string>& slot_names;
    bool allow_new_vars;

    Type build(const TypeExprPtr& e) {
        switch (e->kind) {
            case TypeExpr::Kind::Var: {
                // "_" is anonymous: every occurrence is a distinct slot.
                if (e->name != "_") {
                    auto it = slots.find(e->name);
                    if (it != slots.end()) return ty_param(it->second, e->name);
                }
                if (!allow_new_vars)
                    throw TypeError(e->loc, "unbound type variable '" + e->name + "'");
                int idx = static_cast<int>(slot_names.size());
                if (e->name != "_") slots.emplace(e->name, idx);
                slot_names.push_back(e->name);
                return ty_param(idx, e->name);
            }
            case TypeExpr::Kind::App: {
                int arity;
                if (e->name == self_name) {
                    arity = self_arity;
                } else {
                    const TypeDecl* d = env.find(e->name);
                    if (!d) throw TypeError(e->loc, "unknown type '" + e->name + "'");
                    arity = d->arity;
                }
                if (static_cast<int>(e->args.size()) != arity)
                    throw TypeError(e->loc, "type '" + e->name + "' expects " +
                                                std::to_string(arity) + " argument(s), got " +
                                                std::to_string(e->args.size()));
                std::vector<Type> args;
                for (const auto& a : e->args) args.push_back(build(a));
                return ty_app(e->name, std::move(args));
            }
            case TypeExpr::Kind::Arrow:
                return ty_arrow(build(e->args[0]), build(e->args[1]));
            case TypeExpr::Kind::Tuple: {
                std::vector<Type> elems;
                for (const auto& a : e->args) elems.push_back(build(a));
                return ty_tuple(std::move(elems));
            }
        }
        throw TypeError(e->loc, "malformed type expression");
    }
};

// A constructor is index-refining when its result indices are anything other
// than distinct type variables: matching it then tells us something about the
// scrutinee's indices.
bool indices_are_distinct_vars(const std::vector<Type>& indices) {
    std::vector<int> seen;
    for (const auto& ix : indices) {
        if (ix->kind != TypeNode::Kind::Param) return false;
        if (std::find(seen.begin(), seen.end(), ix->param_index) != seen.end()) return false;
        seen.push_back(ix->param_index);
    }
    return true;
}

void elaborate_decl(Env& env, const TypeDeclSyntax& d) {
    TypeDecl decl;
    decl.name = d.name;
    decl.arity = static_cast<int>(d.params.size());
    decl.kind = d.body == TypeDeclSyntax::Body::Variant ? TypeDecl::Kind::Variant
                                                        : TypeDecl::Kind::Abstract;
    decl.injective_params = decl.kind == TypeDecl::Kind::Variant;

    {
        std::vector<std::string> named;
        for (const auto& p : d.params) {
            if (p == "_") continue;
            if (std::find(named.begin(), named.end(), p) != named.end())
                throw TypeError(d.loc, "duplicate type parameter '" + p + "' in '" + d.name + "'");
            named.push_back(p);
        }
    }

    for (const auto& c : d.ctors) {
        ConstructorSig sig;
        sig.name = c.name;
        sig.owner = d.name;
        std::map<std::string, int> slots;

        if (!c.indexed_syntax) {
            // Plain variant constructor: the scheme variables are the
            // declaration parameters and the result is the identity
            // application of them.
            sig.n_params = d.params.size();
            for (size_t i = 0; i < d.params.size(); ++i) {
                sig.slot_names.push_back(d.params[i]);
                if (d.params[i] != "_") slots.emplace(d.params[i], static_cast<int>(i));
                sig.result_indices.push_back(ty_param(static_cast<int>(i), d.params[i]));
            }
            if (c.argument) {
                SchemeBuilder sb{env, d.name, decl.arity, slots, sig.slot_names, false};
                sig.argument = sb.build(*c.argument);
            }
            sig.gadt_indexed = false;
        } else {
            // Indexed constructor: every variable is local to the signature.
            if (c.result_head != d.name)
                throw TypeError(c.loc, "constructor " + c.name + " must return '" + d.name +
                                           "', not '" + c.result_head + "'");
            if (static_cast<int>(c.result_indices.size()) != decl.arity)
                throw TypeError(c.loc, "constructor " + c.name + ": result applies '" + d.name +
                                           "' to " + std::to_string(c.result_indices.size()) +
                                           " argument(s), expected " + std::to_string(decl.arity));
            sig.n_params = 0;
            SchemeBuilder sb{env, d.name, decl.arity, slots, sig.slot_names, true};
            if (c.argument) sig.argument = sb.build(*c.argument);
            for (const auto& ix : c.result_indices) sig.result_indices.push_back(sb.build(ix));
            sig.gadt_indexed = !indices_are_distinct_vars(sig.result_indices);
        }
        decl.ctors.push_back(std::move(sig));
    }
    env.add_decl(std::move(decl), d.loc);
}

}  // namespace

Env elaborate_env(const std::vector<TypeDeclSyntax>& prelude,
                  const std::vector<TypeDeclSyntax>& program) {
    Env env;
    for (const auto& name : Env::builtin_types()) {
        TypeDecl b;
        b.name = name;
        b.arity = 0;
        b.kind = TypeDecl::Kind::Builtin;
        b.injective_params = false;
        env.add_decl(std::move(b));
    }
    for (const auto& d : prelude) elaborate_decl(env, d);
    for (const auto& d : program) elaborate_decl(env, d);
    return env;
}

Type type_of_expr(const TypeExprPtr& e, const Env& env, InferSession& session,
                  std::map<std::string, Type>& vars) {
    switch (e->kind) {
        case TypeExpr::Kind::Var: {
            if (e->name == "_") return session.fresh_var();
            auto it = vars.find(e->name);
            if (it == vars.end()) it = vars.emplace(e->name, session.fresh_var()).first;
            return it->second;
        }
        case TypeExpr::Kind::App: {
            const TypeDecl& d = env.lookup(e->name, e->loc);
            if (static_cast<int>(e->args.size()) != d.arity)
                throw TypeError(e->loc, "type '" + e->name + "' expects " +
                                            std::to_string(d.arity) + " argument(s), got " +
                                            std::to_string(e->args.size()));
            std::vector<Type> args;
            for (const auto& a : e->args) args.push_back(type_of_expr(a, env, session, vars));
            return ty_app(e->name, std::move(args));
        }
        case TypeExpr::Kind::Arrow:
            return ty_arrow(type_of_expr(e->args[0], env, session, vars),
                            type_of_expr(e->args[1], env, session, vars));
        case TypeExpr::Kind::Tuple: {
            std::vector<Type> elems;
            for (const auto& a : e->args) elems.push_back(type_of_expr(a, env, session, vars));
            return ty_tuple(std::move(elems));
        }
    }
    throw TypeError(e->loc, "malformed type expression");
}

// ---- unification -------------------------------------------------------------

namespace {

bool occurs(const VarCellPtr& cell, const Type& t) {
    Type cur = head_resolve(t);
    if (cur->kind == TypeNode::Kind::Var) return cur->var == cell;
    for (const auto& a : cur->args)
        if (occurs(cell, a)) return true;
    return false;
}

void bind_var(const VarCellPtr& cell, const Type& t, Trail& trail) {
    cell->binding = t;
    trail.record(cell);
}

bool is_abstract_app(const Type& t, const Env& env) {
    if (t->kind != TypeNode::Kind::App) return false;
    const TypeDecl* d = env.find(t->head);
    return d && d->kind == TypeDecl::Kind::Abstract;
}

bool is_variant_app(const Type& t, const Env& env) {
    if (t->kind != TypeNode::Kind::App) return false;
    const TypeDecl* d = env.find(t->head);
    return d && d->kind == TypeDecl::Kind::Variant;
}

}  // namespace

void unify(const Type& t1, const Type& t2, UnifyMode mode, const Env& env, Trail& trail) {
    Type a = head_resolve(t1);
    Type b = head_resolve(t2);
    if (a.get() == b.get()) return;

    if (a->kind == TypeNode::Kind::Var && b->kind == TypeNode::Kind::Var && a->var == b->var)
        return;
    if (a->kind == TypeNode::Kind::Var) {
        if (occurs(a->var, b)) throw OccursError(a, b);
        bind_var(a->var, b, trail);
        return;
    }
    if (b->kind == TypeNode::Kind::Var) {
        if (occurs(b->var, a)) throw OccursError(b, a);
        bind_var(b->var, a, trail);
        return;
    }
    if (a->kind == TypeNode::Kind::Param || b->kind == TypeNode::Kind::Param)
        throw std::logic_error("unify reached a declaration scheme parameter");

    if (a->kind == TypeNode::Kind::Arrow && b->kind == TypeNode::Kind::Arrow) {
        unify(a->args[0], b->args[0], mode, env, trail);
        unify(a->args[1], b->args[1], mode, env, trail);
        return;
    }
    if (a->kind == TypeNode::Kind::Tuple && b->kind == TypeNode::Kind::Tuple) {
        if (a->args.size() != b->args.size())
            throw UnifyError(a, b, "tuple widths differ: " + print_type(a) + " vs " + print_type(b));
        for (size_t i = 0; i < a->args.size(); ++i)
            unify(a->args[i], b->args[i], mode, env, trail);
        return;
    }
    if (a->kind == TypeNode::Kind::App && b->kind == TypeNode::Kind::App) {
        if (a->head == b->head) {
            const TypeDecl* d = env.find(a->head);
            bool injective = d ? d->injective_params : true;
            for (size_t i = 0; i < a->args.size(); ++i) {
                // Hidden definitions could distinguish non-injective
                // parameters, so index refinement must not equate them.
                if (mode == UnifyMode::PatternCompat && !injective) continue;
                unify(a->args[i], b->args[i], mode, env, trail);
            }
            return;
        }
        if (mode == UnifyMode::PatternCompat) {
            if (is_abstract_app(a, env) || is_abstract_app(b, env)) return;
            if (is_variant_app(a, env) && is_variant_app(b, env) && compatible(a, b, env)) return;
        }
        throw UnifyError(a, b,
                         "type heads clash: " + print_type(a) + " vs " + print_type(b));
    }

    // Shape clash (application vs tuple vs arrow).
    if (mode == UnifyMode::PatternCompat && (is_abstract_app(a, env) || is_abstract_app(b, env)))
        return;
    throw UnifyError(a, b, "types clash: " + print_type(a) + " vs " + print_type(b));
}

// ---- compatibility -------------------------------------------------------------

namespace {

constexpr int kCompatDepthLimit = 64;

struct CompatCtx {
    const Env& env;
    std::vector<std::pair<const TypeNode*, const TypeNode*>> assumed;
};

bool compat_rec(const Type& t1, const Type& t2, CompatCtx& cx, int depth) {
    if (depth > kCompatDepthLimit) return true;  // assume compatible on very deep/cyclic compares
    Type a = head_resolve(t1);
    Type b = head_resolve(t2);
    if (a.get() == b.get()) return true;

    // A variable could still become anything; scheme parameters likewise.
    if (a->kind == TypeNode::Kind::Var || b->kind == TypeNode::Kind::Var) return true;
    if (a->kind == TypeNode::Kind::Param || b->kind == TypeNode::Kind::Param) return true;

    for (const auto& [x, y] : cx.assumed)
        if ((x == a.get() && y == b.get()) || (x == b.get() && y == a.get())) return true;
    cx.assumed.emplace_back(a.get(), b.get());
    struct Pop {
        CompatCtx& cx;
        ~Pop() { cx.assumed.pop_back(); }
    } pop{cx};

    if (a->kind == TypeNode::Kind::Arrow && b->kind == TypeNode::Kind::Arrow)
        return compat_rec(a->args[0], b->args[0], cx, depth + 1) &&
               compat_rec(a->args[1], b->args[1], cx, depth + 1);

    if (a->kind == TypeNode::Kind::Tuple && b->kind == TypeNode::Kind::Tuple) {
        if (a->args.size() != b->args.size()) return false;
        for (size_t i = 0; i < a->args.size(); ++i)
            if (!compat_rec(a->args[i], b->args[i], cx, depth + 1)) return false;
        return true;
    }

    if (a->kind == TypeNode::Kind::App && b->kind == TypeNode::Kind::App) {
        if (a->head == b->head) {
            // Same head: only injective parameter positions can discriminate.
            const TypeDecl* d = cx.env.find(a->head);
            bool injective = d ? d->injective_params : false;
            if (!injective) return true;
            for (size_t i = 0; i < a->args.size() && i < b->args.size(); ++i)
                if (!compat_rec(a->args[i], b->args[i], cx, depth + 1)) return false;
            return true;
        }
        const TypeDecl* da = cx.env.find(a->head);
        const TypeDecl* db = cx.env.find(b->head);
        // An abstract type may secretly equal anything not headed by itself.
        if ((da && da->kind == TypeDecl::Kind::Abstract) ||
            (db && db->kind == TypeDecl::Kind::Abstract))
            return true;
        // Two distinct variants whose definitions are isomorphic in names and
        // shapes could be hidden aliases of one another.
        if (da && db && da->kind == TypeDecl::Kind::Variant && db->kind == TypeDecl::Kind::Variant) {
            if (da->ctors.size() != db->ctors.size()) return false;
            if (a->args.size() != b->args.size()) return false;
            for (size_t i = 0; i < da->ctors.size(); ++i) {
                const ConstructorSig& ca = da->ctors[i];
                const ConstructorSig& cb = db->ctors[i];
                if (ca.name != cb.name) return false;
                if (ca.argument.has_value() != cb.argument.has_value()) return false;
                if (ca.argument && !compat_rec(*ca.argument, *cb.argument, cx, depth + 1))
                    return false;
                if (ca.result_indices.size() != cb.result_indices.size()) return false;
                for (size_t j = 0; j < ca.result_indices.size(); ++j)
                    if (!compat_rec(ca.result_indices[j], cb.result_indices[j], cx, depth + 1))
                        return false;
            }
            for (size_t i = 0; i < a->args.size(); ++i)
                if (!compat_rec(a->args[i], b->args[i], cx, depth + 1)) return false;
            return true;
        }
        return false;
    }

    // Mixed shapes: only an abstract head can bridge them.
    if (is_abstract_app(a, cx.env) || is_abstract_app(b, cx.env)) return true;
    return false;
}

}  // namespace

bool compatible(const Type& t1, const Type& t2, const Env& env) {
    CompatCtx cx{env, {}};
    return compat_rec(t1, t2, cx, 0);
}

// ---- constructor instantiation -------------------------------------------------

namespace {

Type subst_scheme(const Type& scheme, const std::vector<Type>& slots) {
    switch (scheme->kind) {
        case TypeNode::Kind::Param:
            return slots.at(static_cast<size_t>(scheme->param_index));
        case TypeNode::Kind::Var:
            return scheme;  // already semantic (should not occur in schemes)
        default: {
            if (scheme->args.empty()) return scheme;
            std::vector<Type> args;
            args.reserve(scheme->args.size());
            bool changed = false;
            for (const auto& a : scheme->args) {
                args.push_back(subst_scheme(a, slots));
                changed |= args.back().get() != a.get();
            }
            if (!changed) return scheme;
            auto out = std::make_shared<TypeNode>(*scheme);
            out->args = std::move(args);
            return out;
        }
    }
}

}  // namespace

std::optional<Instantiation> instantiate_constructor(const ConstructorSig& c, const Type& expected,
                                                     UnifyMode mode, const Env& env,
                                                     InferSession& session) {
    Trail::Mark mark = session.trail().save();
    Type exp = head_resolve(expected);
    if (exp->kind == TypeNode::Kind::Var) {
        const TypeDecl& d = env.lookup(c.owner);
        std::vector<Type> fresh;
        for (int i = 0; i < d.arity; ++i) fresh.push_back(session.fresh_var());
        Type app = ty_app(c.owner, std::move(fresh));
        bind_var(exp->var, app, session.trail());
        exp = app;
    }
    if (exp->kind != TypeNode::Kind::App || exp->head != c.owner) {
        session.trail().undo_to(mark);
        return std::nullopt;
    }

    std::vector<Type> slots;
    slots.reserve(c.slot_names.size());
    for (size_t i = 0; i < c.slot_names.size(); ++i) slots.push_back(session.fresh_var());

    Instantiation inst;
    try {
        for (size_t i = 0; i < c.result_indices.size(); ++i) {
            inst.indices.push_back(subst_scheme(c.result_indices[i], slots));
            unify(inst.indices.back(), exp->args.at(i), mode, env, session.trail());
        }
    } catch (const UnifyError&) {
        session.trail().undo_to(mark);
        return std::nullopt;
    }
    if (c.argument) inst.argument = subst_scheme(*c.argument, slots);
    return inst;
}

// ---- printing -------------------------------------------------------------------

namespace {

enum { TPrecArrow = 0, TPrecTuple = 1, TPrecApp = 2 };

void print_type_rec(std::ostream& os, const Type& t, int prec) {
    Type cur = head_resolve(t);
    switch (cur->kind) {
        case TypeNode::Kind::Var:
            os << "'_" << cur->var->id;
            return;
        case TypeNode::Kind::Param:
            os << '\'' << cur->head;
            return;
        case TypeNode::Kind::App:
            if (cur->args.empty()) {
                os << cur->head;
            } else if (cur->args.size() == 1) {
                print_type_rec(os, cur->args[0], TPrecApp);
                os << ' ' << cur->head;
            } else {
                os << '(';
                for (size_t i = 0; i < cur->args.size(); ++i) {
                    if (i) os << ", ";
                    print_type_rec(os, cur->args[i], TPrecArrow);
                }
                os << ") " << cur->head;
            }
            return;
        case TypeNode::Kind::Tuple:
            if (prec > TPrecTuple) os << '(';
            for (size_t i = 0; i < cur->args.size(); ++i) {
                if (i) os << " * ";
                print_type_rec(os, cur->args[i], TPrecTuple + 1);
            }
            if (prec > TPrecTuple) os << ')';
            return;
        case TypeNode::Kind::Arrow:
            if (prec > TPrecArrow) os << '(';
            print_type_rec(os, cur->args[0], TPrecArrow + 1);
            os << " -> ";
            print_type_rec(os, cur->args[1], TPrecArrow);
            if (prec > TPrecArrow) os << ')';
            return;
    }
}

}  // namespace

std::string print_type(const Type& t) {
    std::ostringstream os;
    print_type_rec(os, t, TPrecArrow);
    return os.str();
}

}  // namespace gml
