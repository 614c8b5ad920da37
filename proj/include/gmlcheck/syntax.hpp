#pragma once

// Surface syntax for the .gml input language: type declarations, match checks,
// and the concrete grammar for types and patterns.
//
// A source file is a sequence of declarations and checks:
//
//   type ('a, 'b) name = C1 : <ty> -> <index-ty> | C2 : <index-ty>   (indexed form)
//   type ('a) name = C1 of <ty> | C2                                 (plain variant)
//   type name = |                                                    (empty variant)
//   type name                                                        (abstract)
//   check <ty> with | <pat> -> ok | <pat> -> .
//
// `<pat> -> .` is a refutation arm: it asserts the pattern covers no value.
// `#` starts a line comment. Constructor names are capitalized, type names and
// the arm body token are lowercase, type variables are written 'a.

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gml {

struct SrcLoc {
    int line = 0;  // 1-based; 0 means "no position"
    int col = 0;
};

struct SyntaxError : std::runtime_error {
    SyntaxError(SrcLoc where, const std::string& msg)
        : std::runtime_error(msg), loc(where) {}
    SrcLoc loc;
};

// ---- type expressions ------------------------------------------------------

struct TypeExpr;
using TypeExprPtr = std::shared_ptr<const TypeExpr>;

struct TypeExpr {
    enum class Kind { Var, App, Arrow, Tuple };
    Kind kind;
    std::string name;              // Var: variable name (no quote); App: head type name
    std::vector<TypeExprPtr> args; // App: arguments; Arrow: {domain, codomain}; Tuple: elements
    SrcLoc loc;
};

TypeExprPtr te_var(std::string name, SrcLoc loc = {});
TypeExprPtr te_app(std::string head, std::vector<TypeExprPtr> args = {}, SrcLoc loc = {});
TypeExprPtr te_arrow(TypeExprPtr dom, TypeExprPtr cod, SrcLoc loc = {});
TypeExprPtr te_tuple(std::vector<TypeExprPtr> elems, SrcLoc loc = {});

// ---- patterns --------------------------------------------------------------

struct PatternSyntax;
using PatSynPtr = std::shared_ptr<const PatternSyntax>;

struct PatternSyntax {
    enum class Kind { Wildcard, Var, Constr, Tuple, Or };
    Kind kind;
    std::string name;           // Var: variable name; Constr: constructor name
    std::vector<PatSynPtr> args;// Constr: 0 or 1; Tuple: >= 2; Or: exactly 2
    SrcLoc loc;
};

PatSynPtr ps_wild(SrcLoc loc = {});
PatSynPtr ps_var(std::string name, SrcLoc loc = {});
PatSynPtr ps_constr(std::string name, PatSynPtr arg = nullptr, SrcLoc loc = {});
PatSynPtr ps_tuple(std::vector<PatSynPtr> elems, SrcLoc loc = {});
PatSynPtr ps_or(PatSynPtr left, PatSynPtr right, SrcLoc loc = {});

// ---- declarations and checks ----------------------------------------------

struct ConstructorDecl {
    std::string name;
    std::optional<TypeExprPtr> argument;     // absent for nullary constructors
    // Indexed-form result type: head name and type arguments. Empty for
    // `of`-style constructors, whose indices are the declaration parameters.
    std::string result_head;
    std::vector<TypeExprPtr> result_indices;
    bool indexed_syntax = false;             // declared with `:` rather than `of`
    SrcLoc loc;
};

struct TypeDeclSyntax {
    enum class Body { Variant, Abstract };
    std::string name;
    std::vector<std::string> params;         // "_" for anonymous parameters
    Body body = Body::Abstract;
    std::vector<ConstructorDecl> ctors;      // Variant only; may be empty (`= |`)
    SrcLoc loc;
};

enum class ArmKind { Concrete, Refutation };

struct MatchArm {
    PatSynPtr pattern;
    ArmKind kind = ArmKind::Concrete;
    SrcLoc loc;
};

struct MatchCheckSyntax {
    TypeExprPtr scrutinee;
    std::vector<MatchArm> arms;
    SrcLoc loc;
};

struct SurfaceProgram {
    std::vector<TypeDeclSyntax> decls;
    std::vector<MatchCheckSyntax> checks;
};

// Parses a whole source file. Enforces: declaration names unique within the
// program, constructor names unique across all declarations, pattern variables
// linear within each or-free pattern. Throws SyntaxError with a position.
SurfaceProgram parse_program(std::string_view text, std::string_view filename = "<input>");

// Parses a single type expression (used by `oracle --type`).
TypeExprPtr parse_type_expr(std::string_view text);

// Deterministic printers; output re-parses to the same structure.
std::string print_type_expr(const TypeExprPtr& t);
std::string print_pattern_syntax(const PatSynPtr& p);
std::string print_program(const SurfaceProgram& prog);

bool type_expr_equal(const TypeExprPtr& a, const TypeExprPtr& b);
bool pattern_syntax_equal(const PatSynPtr& a, const PatSynPtr& b);

}  // namespace gml
