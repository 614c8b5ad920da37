#pragma once

// Checker-side patterns: the surface pattern shape stripped of locations and
// binder bookkeeping. Matrix decomposition, the emptiness search, and witness
// construction all operate on this one immutable representation; types are
// threaded alongside by the algorithms rather than stored per node.

#include <memory>
#include <string>
#include <vector>

#include "gmlcheck/syntax.hpp"
#include "gmlcheck/tycore.hpp"

namespace gml {

struct Pattern;
using PatPtr = std::shared_ptr<const Pattern>;

struct Pattern {
    enum class Kind { Wild, Var, Constr, Tuple, Or };
    Kind kind;
    std::string name;          // Var: binder; Constr: constructor name
    std::vector<PatPtr> args;  // Constr: 0 or 1; Tuple: elements; Or: {left, right}
    // Set on wildcards produced by splitting a GADT-only variant: the Once
    // policy must not split them again.
    bool no_split = false;
};

PatPtr pat_wild(bool no_split = false);
PatPtr pat_var(std::string name);
PatPtr pat_constr(std::string name, std::vector<PatPtr> arg = {});
PatPtr pat_tuple(std::vector<PatPtr> elems);
PatPtr pat_or(PatPtr left, PatPtr right);

// Right-nested or over `alts` (which must be non-empty).
PatPtr or_of(const std::vector<PatPtr>& alts);

// Top-level or-alternatives, left to right; a non-or pattern is itself.
std::vector<PatPtr> or_alternatives(const PatPtr& p);

// Converts a parsed pattern, validating constructors against the environment:
// the constructor must exist and take (exactly) the argument it was given.
// Throws TypeError otherwise.
PatPtr lift_pattern(const PatSynPtr& p, const Env& env);

bool pattern_equal(const PatPtr& a, const PatPtr& b);

// Deterministic re-parseable rendering: `Some (PlusS _)`, `(Bool, _)`, `A | B`.
std::string print_pattern(const PatPtr& p);

}  // namespace gml
