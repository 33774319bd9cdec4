#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>

#include "omega/pasting.hpp"

namespace omega::operad {

using pasting::PdTree;
using pasting::PosKey;

// ---------------------------------------------------------------------------
// Operation terms
// ---------------------------------------------------------------------------
//
// Terms denoting operations of the initial globular operad with contraction.
// An n-operation has an arity: a pasting tree of dimension n.
//
//   Unit(n)             the unit operation on the n-globe arity
//   Lift(f, g, pi)      the contraction lift of a parallel pair of
//                       (n-1)-operations f, g along an n-arity pi with
//                       tree_boundary(pi) == arity(f) == arity(g)
//   Comp(h, l)          operadic substitution: an operation l(p) of matching
//                       dimension for every position p of arity(h), plugged
//                       into h; arity(Comp(h, l)) composes the arities
//
// Terms are immutable and shared.

struct OpTerm;
using OpTermPtr = std::shared_ptr<const OpTerm>;

enum class OpKind { Unit, Lift, Comp };

struct OpTerm {
  OpKind kind = OpKind::Unit;

  // Unit
  std::size_t unit_dim = 0;

  // Lift
  std::string tag;  // informational name; ignored by comparisons
  OpTermPtr minus, plus;
  PdTree lift_arity;

  // Comp
  OpTermPtr op;
  std::map<PosKey, OpTermPtr> labels;
};

OpTermPtr unit_op(std::size_t n);
// Checks dimensions and that both arities equal tree_boundary(arity); the
// parallelism of minus/plus up to normalization is checked by validate_op.
OpTermPtr lift_op(std::string tag, OpTermPtr minus, OpTermPtr plus, PdTree arity);
// Checks that the label keys are exactly the positions of arity(op) and that
// dimensions match.
OpTermPtr comp_op(OpTermPtr op, std::map<PosKey, OpTermPtr> labels);

std::size_t op_dim(const OpTerm& t);
inline std::size_t op_dim(const OpTermPtr& t) { return op_dim(*t); }

// The arity tree; for Comp terms this composes the label arities into the
// outer arity (throws PreconditionError when the nesting is incompatible).
PdTree op_arity(const OpTerm& t);
inline PdTree op_arity(const OpTermPtr& t) { return op_arity(*t); }

// Source (src_side) or target boundary operation, one dimension down.
// Satisfies arity(op_boundary(t)) == tree_boundary(arity(t)).
OpTermPtr op_boundary(const OpTermPtr& t, bool src_side);

// Structural equality ignoring lift tags; no normalization.
bool op_structural_equal(const OpTermPtr& a, const OpTermPtr& b);

// Rewrites to normal form:
//   R1  Comp(Unit(n), l)        -> l(top)
//   R2  Comp(h, all units)      -> h
//   R3  Comp(Comp(h, l1), l2)   -> Comp(h, p |-> Comp(l1(p), slice_p))
// where slice_p re-indexes l2 along the arity-substitution provenance.
// Normal forms are units, lifts of normal forms, and Comp(lift, labels) with
// normal labels not all units.
OpTermPtr normalize_op(const OpTermPtr& t);

// Same normal form reached outermost-first; used to cross-check confluence.
OpTermPtr normalize_op_outermost(const OpTermPtr& t);

// Equality of the denoted operations: structural equality of normal forms
// (lift tags ignored).
bool ops_equal(const OpTermPtr& a, const OpTermPtr& b);

// Full well-formedness: lift parallelism and Comp face compatibility up to
// normalization, recursively.
bool validate_op(const OpTermPtr& t, std::string* why = nullptr);

// The n-dimensional binary-composition operation along dimension k < n:
// for n == k+1 the lift of (Unit(k), Unit(k)) along glb_tree(n, k), above
// that the lift of two copies of bin_term(n-1, k).
OpTermPtr bin_term(std::size_t n, std::size_t k);

std::string show_op(const OpTermPtr& t);
std::string op_to_json(const OpTermPtr& t);
OpTermPtr op_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// Random terms and law suites
// ---------------------------------------------------------------------------

// Random well-formed operation term of the given dimension; depth bounds the
// recursion into lifts and substitutions.
OpTermPtr random_op(pasting::Rng& rng, std::size_t dim, std::size_t depth,
                    std::size_t max_width);

// Normalization laws on random well-formed terms: idempotence, preservation
// of dimension/arity/validity, and boundary compatibility up to ops_equal.
pasting::SuiteReport run_normalization_suite(std::size_t budget, std::uint64_t seed);

// The innermost and outermost strategies reach the same normal form.
pasting::SuiteReport run_confluence_suite(std::size_t budget, std::uint64_t seed);

}  // namespace omega::operad
