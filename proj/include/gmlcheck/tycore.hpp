#pragma once

// Semantic types, unification with an undo trail, the type compatibility
// relation, and constructor instantiation.
//
// Type variables are mutable binding cells referenced by Var nodes; all other
// type nodes are immutable. Every binding is logged on the session's trail so
// a backtracking caller can save a mark, explore, and restore. Declaration
// schemes (constructor argument and result-index types) use Param nodes in
// place of variables; they never unify directly and are copied out with fresh
// cells by instantiate_constructor.

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gmlcheck/syntax.hpp"

namespace gml {

struct TypeNode;
using Type = std::shared_ptr<const TypeNode>;

struct VarCell {
    int id = 0;
    int level = 0;   // existential freshness marker; no generalization exists
    Type binding;    // null while unbound
};
using VarCellPtr = std::shared_ptr<VarCell>;

struct TypeNode {
    enum class Kind { Var, App, Arrow, Tuple, Param };
    Kind kind;
    VarCellPtr var;          // Var
    std::string head;        // App: type name; Param: variable name (printing)
    std::vector<Type> args;  // App: arguments; Arrow: {dom, cod}; Tuple: elements
    int param_index = -1;    // Param: slot in the owning constructor's scheme
};

Type ty_app(std::string head, std::vector<Type> args = {});
Type ty_arrow(Type dom, Type cod);
Type ty_tuple(std::vector<Type> elems);
Type ty_param(int index, std::string name);
Type ty_var(VarCellPtr cell);

// Follows Var bindings at the head only.
Type head_resolve(const Type& t);
// Rebuilds the tree with every bound Var replaced by its binding.
Type deep_resolve(const Type& t);

bool type_equal(const Type& a, const Type& b);  // structural, resolves vars

struct UnifyError : std::runtime_error {
    UnifyError(Type a, Type b, const std::string& msg)
        : std::runtime_error(msg), left(std::move(a)), right(std::move(b)) {}
    Type left, right;
};

struct OccursError : UnifyError {
    OccursError(Type a, Type b)
        : UnifyError(std::move(a), std::move(b), "occurs check failed: the type would be cyclic") {}
};

// ---- trail and session -----------------------------------------------------

class Trail {
public:
    using Mark = size_t;

    Mark save() const { return bound_.size(); }

    void record(VarCellPtr cell) { bound_.push_back(std::move(cell)); }

    // Unbinds, most recent first, every variable bound since the mark.
    void undo_to(Mark mark) {
        while (bound_.size() > mark) {
            bound_.back()->binding = nullptr;
            bound_.pop_back();
        }
    }

    size_t size() const { return bound_.size(); }

private:
    std::vector<VarCellPtr> bound_;
};

class InferSession {
public:
    Type fresh_var(int level = 0);

    Trail& trail() { return trail_; }

    // Snapshot of every cell's binding identity for purity checks.
    std::vector<std::pair<VarCellPtr, const TypeNode*>> snapshot() const;
    bool matches_snapshot(const std::vector<std::pair<VarCellPtr, const TypeNode*>>& snap) const;

    size_t cell_count() const { return cells_.size(); }

private:
    std::vector<VarCellPtr> cells_;
    Trail trail_;
    int next_id_ = 0;
};

// ---- declarations ----------------------------------------------------------

struct ConstructorSig {
    std::string name;
    std::string owner;                   // declaring type
    // Scheme slots: declaration parameters first, then existentials bound by
    // this constructor, in order of first appearance. Param nodes in the
    // argument/result_indices index into this list.
    std::vector<std::string> slot_names;
    size_t n_params = 0;                 // leading slots that are declaration parameters
    std::optional<Type> argument;        // scheme; absent for nullary constructors
    std::vector<Type> result_indices;    // scheme; length equals owner's arity
    // True when the result indices are anything other than the declaration's
    // distinct parameters: matching this constructor refines the indices.
    bool gadt_indexed = false;
};

struct TypeDecl {
    enum class Kind { Variant, Abstract, Builtin };
    std::string name;
    int arity = 0;
    Kind kind = Kind::Abstract;
    std::vector<ConstructorSig> ctors;   // Variant only; declaration order
    bool injective_params = true;        // Variant: true; Abstract/Builtin: false
};

struct TypeError : std::runtime_error {
    TypeError(SrcLoc where, const std::string& msg) : std::runtime_error(msg), loc(where) {}
    SrcLoc loc;
};

class Env {
public:
    // Base types known to every program: inhabited, mutually distinct, opaque.
    static const std::vector<std::string>& builtin_types();

    void add_decl(TypeDecl decl, SrcLoc loc = {});

    const TypeDecl* find(const std::string& name) const;
    const TypeDecl& lookup(const std::string& name, SrcLoc loc = {}) const;
    const ConstructorSig* find_ctor(const std::string& name) const;

    const std::vector<std::string>& decl_order() const { return order_; }

private:
    std::map<std::string, TypeDecl> decls_;
    std::map<std::string, std::string> ctor_owner_;
    std::vector<std::string> order_;
};

// Builds an Env from surface declarations (prelude first, then the program).
// Validates: every referenced type exists with the right arity, free type
// variables of a constructor are its declared slots, result heads match the
// declaring type. Builtins are predeclared.
Env elaborate_env(const std::vector<TypeDeclSyntax>& prelude,
                  const std::vector<TypeDeclSyntax>& program);

// Converts a type expression to a semantic type. `vars` maps type-variable
// names to cells, extended on demand with fresh session variables.
Type type_of_expr(const TypeExprPtr& e, const Env& env, InferSession& session,
                  std::map<std::string, Type>& vars);

// ---- operations ------------------------------------------------------------

enum class UnifyMode {
    Strict,         // syntactic equality after substitution
    PatternCompat,  // clashes on distinct-but-compatible heads are tolerated,
                    // non-injective argument positions are skipped
};

// Makes t1 and t2 equal (up to compatibility in PatternCompat mode), binding
// variables through the trail. Throws UnifyError/OccursError; on throw the
// caller restores its own mark (bindings made before the failure stay logged).
void unify(const Type& t1, const Type& t2, UnifyMode mode, const Env& env, Trail& trail);

// The conservative "could these be the same type?" relation: reflexive and
// symmetric, not transitive. A variable is compatible with everything (never
// bound); an abstract type is compatible with everything but a different use
// of itself; same heads compare injective positions only; two distinct
// variant heads are compatible when their constructor lists have the same
// names in order with componentwise-compatible arguments and indices.
bool compatible(const Type& t1, const Type& t2, const Env& env);

struct Instantiation {
    std::optional<Type> argument;   // freshened constructor argument
    std::vector<Type> indices;      // freshened result indices, post-unification
};

// Freshens the constructor's scheme and unifies its result indices with the
// arguments of `expected` (which must resolve to an application of c's owner,
// or to a variable, which is first bound). Returns nullopt and restores the
// trail on failure.
std::optional<Instantiation> instantiate_constructor(const ConstructorSig& c, const Type& expected,
                                                     UnifyMode mode, const Env& env,
                                                     InferSession& session);

std::string print_type(const Type& t);

}  // namespace gml
