#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "omega/operad.hpp"
#include "omega/pasting.hpp"

namespace omega::weakcat {

using operad::OpTermPtr;
using pasting::PdTree;
using pasting::PosKey;

// ---------------------------------------------------------------------------
// Cells
// ---------------------------------------------------------------------------
//
// A cell of the free weak omega-category on a computad is an operation term
// applied to a pasting diagram of generators and previously built cells:
//
//   Cell = (term, pd)   with   op_arity(term) == pd.tree
//
// Positions of the diagram carry labels: either a named generator or a
// pointer to another cell. Stored cells are kept in a canonical "base" form
// (see normalization below).

struct Cell;
using CellPtr = std::shared_ptr<const Cell>;

struct Label {
  std::string gen;  // generator name when cell == nullptr
  CellPtr cell;

  bool is_gen() const { return cell == nullptr; }
};
bool label_equal(const Label& a, const Label& b);

struct CellPd {
  PdTree tree;
  std::map<PosKey, Label> labels;  // one label per position of the tree
};
bool cellpd_equal(const CellPd& a, const CellPd& b);

struct Cell {
  OpTermPtr term;
  CellPd pd;

  std::size_t dim() const { return pd.tree.dim; }
};

// Structural equality of stored (base-normalized) cells; lift tags ignored.
bool cells_equal(const CellPtr& a, const CellPtr& b);

// ---------------------------------------------------------------------------
// Computads
// ---------------------------------------------------------------------------

// A computad: named generators whose sources and targets are cells built
// over the previously declared generators.
class Computad {
 public:
  // Declares a 0-dimensional generator.
  CellPtr declare(const std::string& name);
  // Declares a generator one dimension above its parallel boundary cells.
  CellPtr declare(const std::string& name, const CellPtr& src, const CellPtr& tgt);

  bool has(const std::string& name) const;
  CellPtr cell(const std::string& name) const;  // throws on unknown names
  std::vector<std::string> names() const;       // declaration order

 private:
  struct Decl {
    CellPtr src, tgt;  // null for dimension 0
    CellPtr cell;
  };
  std::map<std::string, Decl> gens_;
  std::vector<std::string> order_;

  mutable std::map<const Cell*, CellPtr> deep_memo_;
  mutable std::vector<CellPtr> deep_pin_;
  friend CellPtr deep_normalize(const Computad&, const CellPtr&);
};

// The label denoting a cell: a generator reference when the cell is a
// generator's own cell, otherwise a pointer.
Label label_of(const Computad& C, const CellPtr& c);
// The cell denoted by a label.
CellPtr label_cell(const Computad& C, const Label& l);

// ---------------------------------------------------------------------------
// Diagram operations
// ---------------------------------------------------------------------------

CellPd cellpd_boundary(const CellPd& p, bool src_side);
CellPd cellpd_boundary_to(const CellPd& p, std::size_t k, bool src_side);
// Strict gluing along the shared k-boundary; requires the raw boundary
// diagrams to agree (throws otherwise).
CellPd compose_cellpd(std::size_t k, const CellPd& a, const CellPd& b);
CellPd identity_cellpd(const CellPd& p);
// The one-position globe diagram of a cell, with its normalized iterated
// boundaries at the lower positions.
CellPd eta_cellpd(const Computad& C, const CellPtr& c);

std::string cellpd_to_json(const CellPd& p);

// ---------------------------------------------------------------------------
// Cells: construction, boundaries, validity, normalization
// ---------------------------------------------------------------------------

// Checks the arity invariant and brings the cell to base normal form.
CellPtr make_cell(const Computad& C, OpTermPtr term, CellPd pd);

// Raw boundary: term boundary plus diagram restriction, not normalized.
Cell raw_boundary(const Cell& c, bool src_side);
// Normalized boundary cell.
CellPtr boundary(const Computad& C, const CellPtr& c, bool src_side);
CellPtr boundary_to(const Computad& C, const CellPtr& c, std::size_t k, bool src_side);

// Same dimension and equal sources and targets (0-cells are parallel iff
// they have equal dimension, vacuously on boundaries).
bool parallel(const Computad& C, const CellPtr& a, const CellPtr& b);

// Well-formedness: the term validates, the arity invariant holds, and every
// position's label has boundaries matching the face labels (up to cell
// equality, with deep equality as a fallback at atomic joints).
bool validate_cell(const Computad& C, const CellPtr& c, std::string* why = nullptr);

// Deep normal form: labels are deep-normalized recursively, then weak
// identity labels are inlined away where the surrounding diagram allows it.
// Used for comparisons; never the storage form.
CellPtr deep_normalize(const Computad& C, const CellPtr& c);
bool deep_equal(const Computad& C, const CellPtr& a, const CellPtr& b);

std::string show_cell(const CellPtr& c);
std::string cell_to_json(const CellPtr& c);
CellPtr cell_from_json(const Computad& C, const std::string& text);

// ---------------------------------------------------------------------------
// Weak-categorical constructions
// ---------------------------------------------------------------------------

// Binary weak composition along dimension k. Requires the k-boundaries to
// match as cells; glues the diagrams when the raw boundaries agree, and
// otherwise forms the binary-operation cell with the two operands as labels
// (the "atomic" form, with the common deep form at the joint).
CellPtr weak_comp(const Computad& C, std::size_t k, const CellPtr& x, const CellPtr& y);

// The weak identity on a cell.
CellPtr weak_id(const Computad& C, const CellPtr& c);

// The canonical coherence cell between two parallel cells over the same
// diagram: the contraction lift of their terms along the degenerate tree.
// `forward` selects the direction (a => b when true, b => a when false).
CellPtr coherence_cell(const Computad& C, const CellPtr& a, const CellPtr& b,
                       bool forward = true);

// Reverses a coherence-style cell (a lift over a degenerate tree).
CellPtr inverse_of(const Computad& C, const CellPtr& e);

struct EquivalenceWitness {
  CellPtr inverse;
  CellPtr left_cancel;   // (e . inverse) => weak identity on the source
  CellPtr right_cancel;  // (inverse . e) => weak identity on the target
  std::shared_ptr<EquivalenceWitness> left_sub, right_sub;  // when depth > 1
};
EquivalenceWitness equivalence_witness(const Computad& C, const CellPtr& e,
                                       std::size_t depth = 2);

// ---------------------------------------------------------------------------
// Named coherences
// ---------------------------------------------------------------------------

// Associativity witness (f.g).h => f.(g.h) for composable 1-cells.
CellPtr associator(const Computad& C, const CellPtr& f, const CellPtr& g, const CellPtr& h);
// Unit witnesses id.f => f and f.id => f for a 1-cell.
CellPtr unitor_left(const Computad& C, const CellPtr& f);
CellPtr unitor_right(const Computad& C, const CellPtr& f);
// Exchange witness for a 2x2 grid of 2-cells (columns (bl .1 tl), (br .1 tr)):
// the rows-then-column reading => the columns-then-row reading.
CellPtr exchanger(const Computad& C, const CellPtr& bl, const CellPtr& tl, const CellPtr& br,
                  const CellPtr& tr);

struct CoherenceSquare {
  CellPtr left_path;
  CellPtr right_path;
  CellPtr witness;  // left_path => right_path
};

// Pentagon: the two associator paths ((f.g).h).i => f.(g.(h.i)).
CoherenceSquare pentagon_witness(const Computad& C, const CellPtr& f, const CellPtr& g,
                                 const CellPtr& h, const CellPtr& i);
// Triangle: the two unit paths (f.id).g => f.g.
CoherenceSquare triangle_witness(const Computad& C, const CellPtr& f, const CellPtr& g);
// Naturality of the associator in its first argument, for a 2-cell F: f => f'
// and 1-cells g, h.
CoherenceSquare naturality_witness(const Computad& C, const CellPtr& F, const CellPtr& g,
                                   const CellPtr& h);

// ---------------------------------------------------------------------------
// Eckmann-Hilton
// ---------------------------------------------------------------------------

// The braiding construction for two endomorphism 2-cells a, b on a weak
// identity 1-cell: six coherence steps through the interchange grids,
// composed into a single 3-cell from the rows-reading of grid A to the
// rows-reading of grid B, together with its inverse and (when the two deep
// normal forms land over the same diagram) the cancellation witness.
struct EhConstruction {
  CellPtr star;                // the base point
  CellPtr id1;                 // the common boundary, a weak identity 1-cell
  CellPtr one2;                // weak identity on id1
  CellPtr gen_a, gen_b;        // the two endomorphism 2-cells id1 => id1
  CellPtr ab;                  // a .1 b (the vertical composite)
  CellPtr ba_horizontal;       // b .0 a (the horizontal composite)
  CellPtr grid_a_rows;         // rows reading of grid A = (1, b | a, 1)
  CellPtr grid_a_cols;         // columns reading of grid A
  CellPtr grid_b_cols;         // columns reading of grid B = (b, 1 | 1, a)
  CellPtr grid_b_rows;         // rows reading of grid B
  CellPtr deep_a_cols;         // deep form of grid_a_cols: (1 .1 b) .0 (a .1 1)
  CellPtr deep_b_cols;         // deep form of grid_b_cols: (b .1 1) .0 (1 .1 a)
  CellPtr collapse_left;       // half-collapsed form b .0 (a .1 1) over b .0 a
  CellPtr collapse_right;      // half-collapsed form (b .1 1) .0 a over b .0 a
  std::array<CellPtr, 6> theta;
  CellPtr braid;               // theta1 .2 ... .2 theta6
  CellPtr braid_inverse;       // reversed chain of the inverted lifts
  // Coherence deep(braid .2 braid_inverse) => deep(weak identity on the
  // braid's source), when both deep normal forms lie over the same diagram;
  // null otherwise (the composite's deep form keeps its chain of lifts, so
  // the two sides live over different trees and no single lift relates them).
  CellPtr cancellation;
};
EhConstruction eckmann_hilton(const Computad& C, const CellPtr& a, const CellPtr& b);

// The individual pieces, per the construction above. idx is 1-based (1..6).
CellPtr eh_theta(const Computad& C, std::size_t idx, const CellPtr& a, const CellPtr& b);
CellPtr eh_braid(const Computad& C, const CellPtr& a, const CellPtr& b);
CellPtr eh_braid_inverse(const Computad& C, const CellPtr& a, const CellPtr& b);

// ---------------------------------------------------------------------------
// Builder expressions
// ---------------------------------------------------------------------------

// A deferred builder expression over cells: evaluated by apply(), which
// dispatches to the constructions above and normalizes the result. Nested
// and staged evaluation agree up to cells_equal (the algebra laws).
struct OpExpr;
using OpExprPtr = std::shared_ptr<const OpExpr>;

enum class ExprKind {
  Gen,      // an existing cell
  CompK,    // weak composition along level k
  Ident,    // weak identity
  Coh,      // coherence cell (forward flag selects the direction)
  Assoc,    // associator of three 1-cells
  UnitorL,  // left unitor
  UnitorR,  // right unitor
  Exch,     // exchanger of a 2x2 grid
  EHTheta,  // Eckmann-Hilton step k (1..6) of two endomorphism 2-cells
  EHBraid,  // the full braid
  EHBraidInv
};

struct OpExpr {
  ExprKind kind;
  CellPtr cell;                 // Gen payload
  std::size_t k = 0;            // CompK level / EHTheta index
  bool forward = true;          // Coh direction
  std::vector<OpExprPtr> args;  // subexpressions
};

OpExprPtr expr_gen(const CellPtr& c);
OpExprPtr expr_comp(std::size_t k, const OpExprPtr& x, const OpExprPtr& y);
OpExprPtr expr_ident(const OpExprPtr& x);
OpExprPtr expr_coh(bool forward, const OpExprPtr& x, const OpExprPtr& y);
OpExprPtr expr_named(ExprKind kind, std::vector<OpExprPtr> args, std::size_t k = 0);

// Evaluates the expression against the computad.
CellPtr apply(const Computad& C, const OpExprPtr& e);

}  // namespace omega::weakcat
