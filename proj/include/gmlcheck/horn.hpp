#pragma once
// Logic-programming view of inhabitation: every constructor becomes a Horn
// clause over type-level terms, and "some closed value has this type" becomes
// provability of the corresponding goal.  An iterative-deepening resolution
// engine answers goals definitively whenever the whole search space below the
// depth bound is finite, and reports honest exhaustion otherwise.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gmlcheck/pattern.hpp"
#include "gmlcheck/tycore.hpp"

namespace gml {

// First-order term: a variable identified by slot index, or a functor
// application.  Tuples use the functor "*" (n-ary) and function types the
// functor "->" (binary); both print infix.
struct HTerm {
    enum class Kind { Var, Fun };
    Kind kind = Kind::Fun;
    int var = -1;          // Var: clause-local slot or machine variable index
    std::string functor;   // Fun
    std::vector<std::shared_ptr<const HTerm>> args;  // Fun
};
using HTermPtr = std::shared_ptr<const HTerm>;

HTermPtr ht_var(int index);
HTermPtr ht_fun(std::string functor, std::vector<HTermPtr> args = {});

struct HornClause {
    HTermPtr head;
    std::vector<HTermPtr> body;
    int n_vars = 0;                       // variables are numbered 0..n_vars-1
    std::vector<std::string> var_names;   // for printing, one per variable
    std::string ctor;   // constructor that produced the clause; empty for base facts
    std::string owner;  // type that declared it; empty for base facts
};

struct HornProgram {
    std::vector<HornClause> clauses;
};

// Clauses for every type in scope: one fact per builtin, one universal fact
// for function types, and one clause per variant constructor, in declaration
// order.  Abstract types contribute nothing.
HornProgram horn_encode(const Env& env);

std::string print_term(const HTermPtr& t, const std::vector<std::string>& var_names);
std::string print_clause(const HornClause& c);

struct ResolutionResult {
    enum class Kind {
        Witness,             // a proof was found; `witness` is the decoded value
        NoProofWithinDepth,  // the whole space below `depth` is exhausted: no value
        DepthExhausted,      // every round up to the bound was cut short
    };
    Kind kind = Kind::DepthExhausted;
    int depth = 0;  // proof size found, the definitive bound, or the bound tried
    PatPtr witness;
    long applications = 0;  // clause applications across all rounds
};

// Iterative-deepening resolution on the goal "some closed value has type
// `goal`", with rounds bounded by proof size (clause applications) from 1 to
// max_depth.  Goals are solved leftmost-first; clauses are tried in program
// order; the first proof found is minimal and decodes to `witness`.
ResolutionResult sld_inhabited(const Type& goal, int max_depth, const HornProgram& prog,
                               const Env& env);

// All distinct witnesses whose proofs use at most `depth` applications, in
// discovery order, up to `max_count` of them.
std::vector<PatPtr> sld_witnesses(const Type& goal, int depth, const HornProgram& prog,
                                  const Env& env, size_t max_count = SIZE_MAX);

enum class QueryVerdict {
    Proved,   // some value of the type matches the pattern
    Refuted,  // the bounded space is exhausted: no such value
    Unknown,  // the bound cut the search short
};

struct QueryResult {
    QueryVerdict verdict = QueryVerdict::Unknown;
    int depth = 0;
    long applications = 0;
};

// Inhabitation restricted to values matching `p`: constructors in the pattern
// pin the clause used at their positions, so the search never wanders into
// constructors the pattern excludes.  Goals with no applicable clause fail
// their whole branch immediately, and constrained goals are preferred, which
// lets mismatches surface before any unbounded recursion is attempted.
QueryResult query_pattern(const PatPtr& p, const Type& goal, int max_depth,
                          const HornProgram& prog, const Env& env);

}  // namespace gml
