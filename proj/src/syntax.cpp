#include "gmlcheck/syntax.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace gml {

TypeExprPtr te_var(std::string name, SrcLoc loc) {
    auto t = std::make_shared<TypeExpr>();
    t->kind = TypeExpr::Kind::Var;
    t->name = std::move(name);
    t->loc = loc;
    return t;
}

TypeExprPtr te_app(std::string head, std::vector<TypeExprPtr> args, SrcLoc loc) {
    auto t = std::make_shared<TypeExpr>();
    t->kind = TypeExpr::Kind::App;
    t->name = std::move(head);
    t->args = std::move(args);
    t->loc = loc;
    return t;
}

TypeExprPtr te_arrow(TypeExprPtr dom, TypeExprPtr cod, SrcLoc loc) {
    auto t = std::make_shared<TypeExpr>();
    t->kind = TypeExpr::Kind::Arrow;
    t->args = {std::move(dom), std::move(cod)};
    t->loc = loc;
    return t;
}

TypeExprPtr te_tuple(std::vector<TypeExprPtr> elems, SrcLoc loc) {
    auto t = std::make_shared<TypeExpr>();
    t->kind = TypeExpr::Kind::Tuple;
    t->args = std::move(elems);
    t->loc = loc;
    return t;
}

PatSynPtr ps_wild(SrcLoc loc) {
    auto p = std::make_shared<PatternSyntax>();
    p->kind = PatternSyntax::Kind::Wildcard;
    p->loc = loc;
    return p;
}

PatSynPtr ps_var(std::string name, SrcLoc loc) {
    auto p = std::make_shared<PatternSyntax>();
    p->kind = PatternSyntax::Kind::Var;
    p->name = std::move(name);
    p->loc = loc;
    return p;
}

PatSynPtr ps_constr(std::string name, PatSynPtr arg, SrcLoc loc) {
    auto p = std::make_shared<PatternSyntax>();
    p->kind = PatternSyntax::Kind::Constr;
    p->name = std::move(name);
    if (arg) p->args.push_back(std::move(arg));
    p->loc = loc;
    return p;
}

PatSynPtr ps_tuple(std::vector<PatSynPtr> elems, SrcLoc loc) {
    auto p = std::make_shared<PatternSyntax>();
    p->kind = PatternSyntax::Kind::Tuple;
    p->args = std::move(elems);
    p->loc = loc;
    return p;
}

PatSynPtr ps_or(PatSynPtr left, PatSynPtr right, SrcLoc loc) {
    auto p = std::make_shared<PatternSyntax>();
    p->kind = PatternSyntax::Kind::Or;
    p->args = {std::move(left), std::move(right)};
    p->loc = loc;
    return p;
}

// ---- lexer -----------------------------------------------------------------

namespace {

enum class Tok {
    KwType, KwCheck, KwWith, KwOf,
    Ident,     // lowercase-led identifier
    UIdent,    // uppercase-led identifier (constructor)
    TyVar,     // 'a
    Underscore,
    LParen, RParen, Comma, Bar, Star, Arrow, Colon, Eq, Dot,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    SrcLoc loc;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return tok_; }

    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws();
        SrcLoc loc{line_, col_};
        if (pos_ >= src_.size()) {
            tok_ = {Tok::End, "", loc};
            return;
        }
        char c = src_[pos_];
        if (c == '\'' ) {
            bump();
            std::string name = lex_word();
            if (name.empty())
                throw SyntaxError(loc, "expected a type variable name after '");
            tok_ = {Tok::TyVar, name, loc};
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string word = lex_word();
            if (word == "type") tok_ = {Tok::KwType, word, loc};
            else if (word == "check") tok_ = {Tok::KwCheck, word, loc};
            else if (word == "with") tok_ = {Tok::KwWith, word, loc};
            else if (word == "of") tok_ = {Tok::KwOf, word, loc};
            else if (std::isupper(static_cast<unsigned char>(word[0])))
                tok_ = {Tok::UIdent, word, loc};
            else
                tok_ = {Tok::Ident, word, loc};
            return;
        }
        if (c == '_') {
            std::string word = lex_word();
            if (word == "_") tok_ = {Tok::Underscore, word, loc};
            else tok_ = {Tok::Ident, word, loc};  // e.g. _foo: treat as identifier
            return;
        }
        bump();
        switch (c) {
            case '(': tok_ = {Tok::LParen, "(", loc}; return;
            case ')': tok_ = {Tok::RParen, ")", loc}; return;
            case ',': tok_ = {Tok::Comma, ",", loc}; return;
            case '|': tok_ = {Tok::Bar, "|", loc}; return;
            case '*': tok_ = {Tok::Star, "*", loc}; return;
            case ':': tok_ = {Tok::Colon, ":", loc}; return;
            case '=': tok_ = {Tok::Eq, "=", loc}; return;
            case '.': tok_ = {Tok::Dot, ".", loc}; return;
            case '-':
                if (pos_ < src_.size() && src_[pos_] == '>') {
                    bump();
                    tok_ = {Tok::Arrow, "->", loc};
                    return;
                }
                throw SyntaxError(loc, "stray '-' (did you mean '->'?)");
            default:
                throw SyntaxError(loc, std::string("unexpected character '") + c + "'");
        }
    }

    std::string lex_word() {
        size_t start = pos_;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')
                bump();
            else
                break;
        }
        return std::string(src_.substr(start, pos_ - start));
    }

    void skip_ws() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
            } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::KwType: return "'type'";
        case Tok::KwCheck: return "'check'";
        case Tok::KwWith: return "'with'";
        case Tok::KwOf: return "'of'";
        case Tok::Ident: return "identifier";
        case Tok::UIdent: return "constructor name";
        case Tok::TyVar: return "type variable";
        case Tok::Underscore: return "'_'";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Bar: return "'|'";
        case Tok::Star: return "'*'";
        case Tok::Arrow: return "'->'";
        case Tok::Colon: return "':'";
        case Tok::Eq: return "'='";
        case Tok::Dot: return "'.'";
        case Tok::End: return "end of input";
    }
    return "?";
}

// ---- parser ----------------------------------------------------------------

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    SurfaceProgram program() {
        SurfaceProgram prog;
        while (lex_.peek().kind != Tok::End) {
            if (lex_.peek().kind == Tok::KwType)
                prog.decls.push_back(type_decl());
            else if (lex_.peek().kind == Tok::KwCheck)
                prog.checks.push_back(match_check());
            else
                fail("expected 'type' or 'check'");
        }
        validate(prog);
        return prog;
    }

    TypeExprPtr full_type() {
        TypeExprPtr t = type_expr();
        expect(Tok::End, "trailing input after type expression");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        throw SyntaxError(lex_.peek().loc, msg + " (found " + tok_name(lex_.peek().kind) + ")");
    }

    Token expect(Tok kind, const std::string& what) {
        if (lex_.peek().kind != kind) fail("expected " + std::string(tok_name(kind)) + " " + what);
        return lex_.take();
    }

    bool eat(Tok kind) {
        if (lex_.peek().kind == kind) {
            lex_.take();
            return true;
        }
        return false;
    }

    // type NAME | type PARAMS NAME [= ctors]
    TypeDeclSyntax type_decl() {
        TypeDeclSyntax d;
        d.loc = expect(Tok::KwType, "to start a declaration").loc;
        d.params = decl_params();
        d.name = expect(Tok::Ident, "as the type name").text;
        if (!eat(Tok::Eq)) {
            if (!d.params.empty())
                fail("an abstract type takes no parameters here; expected '='");
            d.body = TypeDeclSyntax::Body::Abstract;
            return d;
        }
        d.body = TypeDeclSyntax::Body::Variant;
        bool leading_bar = eat(Tok::Bar);
        if (leading_bar && lex_.peek().kind != Tok::UIdent)
            return d;  // `type name = |` : manifestly empty variant
        d.ctors.push_back(constructor_decl());
        while (eat(Tok::Bar)) d.ctors.push_back(constructor_decl());
        return d;
    }

    std::vector<std::string> decl_params() {
        std::vector<std::string> params;
        if (lex_.peek().kind == Tok::TyVar || lex_.peek().kind == Tok::Underscore) {
            params.push_back(lex_.take().text);
            return params;
        }
        if (lex_.peek().kind != Tok::LParen) return params;
        lex_.take();
        do {
            if (lex_.peek().kind == Tok::TyVar || lex_.peek().kind == Tok::Underscore)
                params.push_back(lex_.take().text);
            else
                fail("expected a type parameter ('a or _)");
        } while (eat(Tok::Comma));
        expect(Tok::RParen, "to close the parameter list");
        return params;
    }

    ConstructorDecl constructor_decl() {
        ConstructorDecl c;
        Token name = expect(Tok::UIdent, "as a constructor name");
        c.name = name.text;
        c.loc = name.loc;
        if (eat(Tok::KwOf)) {
            c.argument = type_expr();
        } else if (eat(Tok::Colon)) {
            c.indexed_syntax = true;
            TypeExprPtr t = type_expr();
            if (t->kind == TypeExpr::Kind::Arrow) {
                c.argument = t->args[0];
                t = t->args[1];
            }
            if (t->kind == TypeExpr::Kind::Arrow)
                throw SyntaxError(c.loc, "constructor " + c.name +
                                             " takes at most one argument; use a tuple");
            if (t->kind != TypeExpr::Kind::App)
                throw SyntaxError(c.loc, "constructor " + c.name +
                                             ": result must be an application of the declared type");
            c.result_head = t->name;
            c.result_indices = t->args;
        }
        return c;
    }

    MatchCheckSyntax match_check() {
        MatchCheckSyntax chk;
        chk.loc = expect(Tok::KwCheck, "to start a check").loc;
        chk.scrutinee = type_expr();
        expect(Tok::KwWith, "after the scrutinee type");
        eat(Tok::Bar);
        chk.arms.push_back(match_arm());
        while (eat(Tok::Bar)) chk.arms.push_back(match_arm());
        return chk;
    }

    MatchArm match_arm() {
        MatchArm arm;
        arm.loc = lex_.peek().loc;
        arm.pattern = pattern();
        expect(Tok::Arrow, "after the pattern");
        if (eat(Tok::Dot)) {
            arm.kind = ArmKind::Refutation;
        } else {
            arm.kind = ArmKind::Concrete;
            expect(Tok::Ident, "as the arm body (or '.' for a refutation)");
        }
        check_linear(arm.pattern);
        return arm;
    }

    // Or-patterns span up to the arm's '->': a '|' before the arrow continues
    // the or-pattern, arms are only separated after a body has been consumed.
    PatSynPtr pattern() {
        PatSynPtr first = app_pattern();
        if (lex_.peek().kind != Tok::Bar) return first;
        std::vector<PatSynPtr> alts{first};
        while (eat(Tok::Bar)) alts.push_back(app_pattern());
        PatSynPtr acc = alts.back();
        for (size_t i = alts.size() - 1; i-- > 0;)
            acc = ps_or(alts[i], acc, alts[i]->loc);
        return acc;
    }

    PatSynPtr app_pattern() {
        if (lex_.peek().kind == Tok::UIdent) {
            Token name = lex_.take();
            PatSynPtr arg;
            switch (lex_.peek().kind) {
                case Tok::UIdent:
                case Tok::Underscore:
                case Tok::Ident:
                case Tok::LParen:
                    arg = atomic_pattern();
                    break;
                default:
                    break;
            }
            return ps_constr(name.text, arg, name.loc);
        }
        return atomic_pattern();
    }

    PatSynPtr atomic_pattern() {
        Token t = lex_.take();
        switch (t.kind) {
            case Tok::Underscore:
                return ps_wild(t.loc);
            case Tok::Ident:
                return ps_var(t.text, t.loc);
            case Tok::UIdent:
                return ps_constr(t.text, nullptr, t.loc);
            case Tok::LParen: {
                std::vector<PatSynPtr> elems;
                elems.push_back(pattern());
                while (eat(Tok::Comma)) elems.push_back(pattern());
                expect(Tok::RParen, "to close the pattern");
                if (elems.size() == 1) return elems[0];
                return ps_tuple(std::move(elems), t.loc);
            }
            default:
                throw SyntaxError(t.loc, std::string("expected a pattern (found ") +
                                             tok_name(t.kind) + ")");
        }
    }

    // type := tuple ('->' type)?          right-associative arrow
    TypeExprPtr type_expr() {
        TypeExprPtr left = tuple_type();
        if (eat(Tok::Arrow)) {
            TypeExprPtr right = type_expr();
            return te_arrow(left, right, left->loc);
        }
        return left;
    }

    TypeExprPtr tuple_type() {
        TypeExprPtr first = app_type();
        if (lex_.peek().kind != Tok::Star) return first;
        std::vector<TypeExprPtr> elems{first};
        while (eat(Tok::Star)) elems.push_back(app_type());
        return te_tuple(std::move(elems), first->loc);
    }

    // Postfix application: `char t option`, `(a, b) cmp`, `(int) t`.
    TypeExprPtr app_type() {
        Token t = lex_.peek();
        TypeExprPtr base;
        switch (t.kind) {
            case Tok::TyVar:
                lex_.take();
                base = te_var(t.text, t.loc);
                break;
            case Tok::Underscore:
                // Anonymous type variable; every occurrence is distinct.
                lex_.take();
                base = te_var("_", t.loc);
                break;
            case Tok::Ident:
                lex_.take();
                base = te_app(t.text, {}, t.loc);
                break;
            case Tok::LParen: {
                lex_.take();
                std::vector<TypeExprPtr> group;
                group.push_back(type_expr());
                while (eat(Tok::Comma)) group.push_back(type_expr());
                expect(Tok::RParen, "to close the type");
                if (group.size() == 1) {
                    base = group[0];
                } else {
                    if (lex_.peek().kind != Tok::Ident)
                        fail("expected a type name after a multi-argument group");
                    Token head = lex_.take();
                    base = te_app(head.text, std::move(group), head.loc);
                }
                break;
            }
            default:
                fail("expected a type");
        }
        while (lex_.peek().kind == Tok::Ident) {
            Token head = lex_.take();
            base = te_app(head.text, {base}, head.loc);
        }
        return base;
    }

    // Rejects duplicate variables within each or-free branch.
    void check_linear(const PatSynPtr& p) {
        std::set<std::string> seen;
        check_linear_rec(p, seen);
    }

    void check_linear_rec(const PatSynPtr& p, std::set<std::string>& seen) {
        switch (p->kind) {
            case PatternSyntax::Kind::Wildcard:
                return;
            case PatternSyntax::Kind::Var:
                if (!seen.insert(p->name).second)
                    throw SyntaxError(p->loc, "pattern variable '" + p->name +
                                                  "' is bound more than once");
                return;
            case PatternSyntax::Kind::Or: {
                // Each alternative is checked on its own copy of the scope.
                std::set<std::string> left = seen;
                check_linear_rec(p->args[0], left);
                check_linear_rec(p->args[1], seen);
                return;
            }
            default:
                for (const auto& a : p->args) check_linear_rec(a, seen);
        }
    }

    void validate(const SurfaceProgram& prog) {
        std::set<std::string> decl_names;
        std::map<std::string, std::string> ctor_owner;
        for (const auto& d : prog.decls) {
            if (!decl_names.insert(d.name).second)
                throw SyntaxError(d.loc, "duplicate type declaration '" + d.name + "'");
            for (const auto& c : d.ctors) {
                auto [it, fresh] = ctor_owner.emplace(c.name, d.name);
                if (!fresh)
                    throw SyntaxError(c.loc, "constructor '" + c.name + "' already declared by type '" +
                                                 it->second + "'");
            }
        }
    }

    Lexer lex_;
};

}  // namespace

SurfaceProgram parse_program(std::string_view text, std::string_view filename) {
    (void)filename;
    Parser p(text);
    return p.program();
}

TypeExprPtr parse_type_expr(std::string_view text) {
    Parser p(text);
    return p.full_type();
}

// ---- printers --------------------------------------------------------------

namespace {

// Precedence levels for type printing: arrow < tuple < application/atom.
enum { PrecArrow = 0, PrecTuple = 1, PrecApp = 2 };

void print_type_rec(std::ostream& os, const TypeExprPtr& t, int prec) {
    switch (t->kind) {
        case TypeExpr::Kind::Var:
            os << '\'' << t->name;
            return;
        case TypeExpr::Kind::App:
            if (t->args.empty()) {
                os << t->name;
            } else if (t->args.size() == 1) {
                print_type_rec(os, t->args[0], PrecApp);
                os << ' ' << t->name;
            } else {
                os << '(';
                for (size_t i = 0; i < t->args.size(); ++i) {
                    if (i) os << ", ";
                    print_type_rec(os, t->args[i], PrecArrow);
                }
                os << ") " << t->name;
            }
            return;
        case TypeExpr::Kind::Tuple: {
            if (prec > PrecTuple) os << '(';
            for (size_t i = 0; i < t->args.size(); ++i) {
                if (i) os << " * ";
                print_type_rec(os, t->args[i], PrecTuple + 1);
            }
            if (prec > PrecTuple) os << ')';
            return;
        }
        case TypeExpr::Kind::Arrow: {
            if (prec > PrecArrow) os << '(';
            print_type_rec(os, t->args[0], PrecArrow + 1);
            os << " -> ";
            print_type_rec(os, t->args[1], PrecArrow);
            if (prec > PrecArrow) os << ')';
            return;
        }
    }
}

bool pattern_is_atomic(const PatSynPtr& p) {
    switch (p->kind) {
        case PatternSyntax::Kind::Wildcard:
        case PatternSyntax::Kind::Var:
        case PatternSyntax::Kind::Tuple:  // prints with its own parentheses
            return true;
        case PatternSyntax::Kind::Constr:
            return p->args.empty();
        case PatternSyntax::Kind::Or:
            return false;
    }
    return false;
}

void print_pattern_rec(std::ostream& os, const PatSynPtr& p, bool atomic_ctx) {
    switch (p->kind) {
        case PatternSyntax::Kind::Wildcard:
            os << '_';
            return;
        case PatternSyntax::Kind::Var:
            os << p->name;
            return;
        case PatternSyntax::Kind::Constr:
            if (p->args.empty()) {
                os << p->name;
                return;
            }
            if (atomic_ctx) os << '(';
            os << p->name << ' ';
            if (pattern_is_atomic(p->args[0])) {
                print_pattern_rec(os, p->args[0], true);
            } else {
                os << '(';
                print_pattern_rec(os, p->args[0], false);
                os << ')';
            }
            if (atomic_ctx) os << ')';
            return;
        case PatternSyntax::Kind::Tuple:
            os << '(';
            for (size_t i = 0; i < p->args.size(); ++i) {
                if (i) os << ", ";
                print_pattern_rec(os, p->args[i], false);
            }
            os << ')';
            return;
        case PatternSyntax::Kind::Or:
            if (atomic_ctx) os << '(';
            print_pattern_rec(os, p->args[0], false);
            os << " | ";
            print_pattern_rec(os, p->args[1], false);
            if (atomic_ctx) os << ')';
            return;
    }
}

}  // namespace

std::string print_type_expr(const TypeExprPtr& t) {
    std::ostringstream os;
    print_type_rec(os, t, PrecArrow);
    return os.str();
}

std::string print_pattern_syntax(const PatSynPtr& p) {
    std::ostringstream os;
    print_pattern_rec(os, p, false);
    return os.str();
}

std::string print_program(const SurfaceProgram& prog) {
    std::ostringstream os;
    for (const auto& d : prog.decls) {
        os << "type ";
        if (d.params.size() == 1) {
            os << (d.params[0] == "_" ? "_" : "'" + d.params[0]) << ' ';
        } else if (!d.params.empty()) {
            os << '(';
            for (size_t i = 0; i < d.params.size(); ++i) {
                if (i) os << ", ";
                os << (d.params[i] == "_" ? "_" : "'" + d.params[i]);
            }
            os << ") ";
        }
        os << d.name;
        if (d.body == TypeDeclSyntax::Body::Variant) {
            os << " =";
            if (d.ctors.empty()) {
                os << " |";
            }
            for (size_t i = 0; i < d.ctors.size(); ++i) {
                const auto& c = d.ctors[i];
                os << (i == 0 ? " " : " | ") << c.name;
                if (c.indexed_syntax) {
                    os << " : ";
                    if (c.argument) {
                        print_type_rec(os, *c.argument, PrecArrow + 1);
                        os << " -> ";
                    }
                    print_type_rec(os, te_app(c.result_head, c.result_indices), PrecArrow);
                } else if (c.argument) {
                    os << " of ";
                    print_type_rec(os, *c.argument, PrecArrow + 1);
                }
            }
        }
        os << '\n';
    }
    for (const auto& chk : prog.checks) {
        os << "check " << print_type_expr(chk.scrutinee) << " with";
        for (const auto& arm : chk.arms) {
            os << "\n  | " << print_pattern_syntax(arm.pattern) << " -> "
               << (arm.kind == ArmKind::Refutation ? "." : "ok");
        }
        os << '\n';
    }
    return os.str();
}

bool type_expr_equal(const TypeExprPtr& a, const TypeExprPtr& b) {
    if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size())
        return false;
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!type_expr_equal(a->args[i], b->args[i])) return false;
    return true;
}

bool pattern_syntax_equal(const PatSynPtr& a, const PatSynPtr& b) {
    if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size())
        return false;
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!pattern_syntax_equal(a->args[i], b->args[i])) return false;
    return true;
}

}  // namespace gml
