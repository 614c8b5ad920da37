#pragma once
// Typed emptiness search over patterns: decides whether any well-typed value
// can match a pattern at a given type, refining wildcards into constructor
// alternatives when the type alone cannot settle the question.
//
// The search runs inside a caller-provided inference session.  All bindings
// it makes are undone before returning, so back-to-back queries on one
// session cannot observe each other.

#include <optional>

#include "gmlcheck/pattern.hpp"
#include "gmlcheck/tycore.hpp"

namespace gml {

// How aggressively wildcards may be refined into constructor alternatives.
struct SplitPolicy {
    enum class Kind {
        Never,  // wildcards always stand for themselves
        Once,   // split tuples, single-constructor variants, and variants
                // whose constructors all constrain their result indices;
                // subpatterns created by the latter are not split again
        Full,   // split any tuple or variant while fuel remains
    };
    Kind kind = Kind::Once;
    long fuel = 4096;  // Full only: total split events allowed per query

    static SplitPolicy never() { return {Kind::Never, 0}; }
    static SplitPolicy once() { return {Kind::Once, 0}; }
    static SplitPolicy full(long fuel = 4096) { return {Kind::Full, fuel}; }
};

// Counters accumulated across one or more searches. `leaves` counts complete
// alternatives considered: every dead end plus every accepted witness.
struct SearchStats {
    long leaves = 0;
    long splits = 0;
};

enum class Emptiness { Empty, Inhabited };

struct SearchOutcome {
    Emptiness emptiness = Emptiness::Empty;
    PatPtr witness;  // refined pattern accepted by the search, when inhabited
};

// Decide whether some well-typed value of type `expected` matches `p`.
// Alternatives are explored left to right and the first success is returned,
// so results are deterministic.  A wildcard that stands (by policy, depth
// bound, or fuel exhaustion) is conservatively treated as matchable.
SearchOutcome search_pattern(const PatPtr& p, const Type& expected, SplitPolicy policy,
                             const Env& env, InferSession& session,
                             SearchStats* stats = nullptr);

// Typability of `p` against `expected` in the given unification mode, with no
// wildcard refinement.  Or-patterns require both alternatives to be typable.
// Bindings are undone before returning.
bool pattern_typable(const PatPtr& p, const Type& expected, UnifyMode mode, const Env& env,
                     InferSession& session);

// Whether a wildcard of type `t` may be refined under the given policy kind.
bool split_eligible(const Type& t, const Env& env, SplitPolicy::Kind kind);

// The refinement of a wildcard of type `t`: for a variant, the ordered
// alternatives `C1 _ | ... | Cn _`; for a tuple, a tuple of wildcards.
// Returns nullopt for a variant with no constructors (nothing can match) and
// for any other type (nothing to refine).
std::optional<PatPtr> explode_pat(const Type& t, const Env& env);

}  // namespace gml
