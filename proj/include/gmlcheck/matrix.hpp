#pragma once
// Pattern-matrix decomposition: specialization, defaulting, complete sets of
// uncovered patterns, and per-arm residuals.
//
// Everything here is purely syntactic.  Column types are consulted only to
// enumerate the constructors of a column and to compute the component types
// introduced by unfolding a constructor or tuple column; no unification state
// is created or mutated.  All functions are pure and safe to call from
// multiple threads that share an immutable Env.

#include <optional>
#include <vector>

#include "gmlcheck/pattern.hpp"
#include "gmlcheck/tycore.hpp"

namespace gml {

// One row of a pattern matrix.  All rows of a matrix have the same width.
using PatRow = std::vector<PatPtr>;

// Rows that can match a value built with constructor `c` in their first
// column, with that column unfolded into the constructor's argument columns
// (one column when `c` carries an argument, none otherwise).  Or-patterns in
// the first column are expanded first; wildcards and variables match any
// constructor.
std::vector<PatRow> specialize(const std::vector<PatRow>& rows, const ConstructorSig& c);

// Rows whose first column is a wildcard or variable, with that column
// removed.  Or-patterns in the first column are expanded first.
std::vector<PatRow> default_matrix(const std::vector<PatRow>& rows);

// A complete set of pattern vectors that covers exactly the well-shaped value
// vectors matched by no row of the matrix.  Constructors are enumerated in
// declaration order, and any column that no row constrains is factored into a
// single wildcard rather than enumerated.
std::vector<PatRow> missing_patterns(const std::vector<PatRow>& rows,
                                     const std::vector<Type>& col_types,
                                     const Env& env);

// The meet of two patterns describing the same column: a pattern matching
// exactly the values matched by both, or nullptr when they are disjoint.
// Or-patterns distribute; variables behave as wildcards.
PatPtr intersect(const PatPtr& a, const PatPtr& b);

// The values matched by `arm` but by no pattern in `previous`, computed by
// intersecting `arm` with each uncovered pattern of the one-column matrix
// built from `previous`.  The result list follows the enumeration order of
// missing_patterns and contains no nulls.
std::vector<PatPtr> residual(const PatPtr& arm,
                             const std::vector<PatPtr>& previous,
                             const Type& scrutinee,
                             const Env& env);

// The argument type of constructor `c` when its result is matched against the
// application `applied` (whose head must be c's owner), obtained by one-way
// syntactic matching of the declared result indices against the applied
// arguments.  Slots the match does not determine become fresh unbound
// variables that belong to no session.  Returns nullopt when `c` takes no
// argument.
std::optional<Type> constructor_argument_at(const ConstructorSig& c, const Type& applied);

}  // namespace gml
