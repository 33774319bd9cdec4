#include "omega/weakcat.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace omega::weakcat {

namespace {

using globular::GlobularMap;
using operad::bin_term;
using operad::comp_op;
using operad::lift_op;
using operad::normalize_op;
using operad::op_boundary;
using operad::OpKind;
using operad::unit_op;
using pasting::cells_at;
using pasting::compose_trees_pos;
using pasting::ComposedTreePositions;
using pasting::face_embedding;
using pasting::glb_tree;
using pasting::globe_tree;
using pasting::identity_tree;
using pasting::mu_tree;
using pasting::MuTreeResult;
using pasting::scheme_of_tree;
using pasting::tree_boundary;
using pasting::TreeScheme;
using pasting::top_cells;

using operad::op_arity;
using operad::op_dim;

// Schemes of the same few trees are requested constantly while normalizing;
// memoize them per thread.
const TreeScheme& scheme_cached(const PdTree& t) {
  static thread_local std::map<PdTree, TreeScheme> cache;
  auto it = cache.find(t);
  if (it == cache.end()) it = cache.emplace(t, scheme_of_tree(t)).first;
  return it->second;
}

PosKey face_pos(const TreeScheme& sch, PosKey q, bool src_side) {
  return {q.first - 1, src_side ? sch.gset.src_of(q.first, q.second)
                                : sch.gset.tgt_of(q.first, q.second)};
}

PosKey face_pos_to(const TreeScheme& sch, PosKey q, std::size_t j, bool src_side) {
  while (q.first > j) q = face_pos(sch, q, src_side);
  return q;
}

OpTermPtr op_boundary_to(OpTermPtr t, std::size_t j, bool src_side) {
  while (op_dim(t) > j) t = op_boundary(t, src_side);
  return t;
}

struct NormPair {
  OpTermPtr term;
  CellPd pd;
};

NormPair base_normalize(const Computad& C, OpTermPtr term, CellPd pd);

// Collapses a one-position diagram whose top label is a cell and whose face
// labels are that cell's normalized boundaries: the term is composed onto the
// cell's own term and the diagram is replaced by the cell's diagram.
std::optional<NormPair> eta_collapse(const Computad& C, const OpTermPtr& term, const CellPd& pd) {
  std::size_t n = pd.tree.dim;
  if (!(pd.tree == globe_tree(n))) return std::nullopt;
  const Label& top = pd.labels.at({n, 0});
  if (top.is_gen()) return std::nullopt;
  const CellPtr& c = top.cell;
  if (c->dim() != n) return std::nullopt;
  for (std::size_t j = 0; j < n; ++j)
    for (int s = 0; s < 2; ++s) {
      Label want = label_of(C, boundary_to(C, c, j, s == 0));
      if (!label_equal(pd.labels.at({j, s == 0 ? 0u : 1u}), want)) return std::nullopt;
    }
  std::map<PosKey, OpTermPtr> ls;
  ls[{n, 0}] = c->term;
  for (std::size_t j = 0; j < n; ++j) {
    ls[{j, 0}] = op_boundary_to(c->term, j, true);
    ls[{j, 1}] = op_boundary_to(c->term, j, false);
  }
  return NormPair{normalize_op(comp_op(term, std::move(ls))), c->pd};
}

// All-or-nothing flattening: substitute every label's own diagram into the
// tree at once. Requires each label's normalized boundaries to match the face
// labels, the trees to nest, and the transported labels to agree; aborts
// without firing otherwise.
std::optional<NormPair> flatten_all(const Computad& C, const OpTermPtr& term, const CellPd& pd) {
  bool any_ptr = false;
  for (const auto& [q, l] : pd.labels) {
    (void)q;
    if (!l.is_gen()) any_ptr = true;
  }
  if (!any_ptr) return std::nullopt;
  const TreeScheme& sch = scheme_cached(pd.tree);
  std::map<PosKey, CellPtr> at;
  for (const auto& [q, l] : pd.labels) at.emplace(q, label_cell(C, l));
  for (const auto& [q, c] : at) {
    if (q.first == 0) continue;
    for (int s = 0; s < 2; ++s)
      if (!cells_equal(boundary(C, c, s == 0), at.at(face_pos(sch, q, s == 0))))
        return std::nullopt;
  }
  std::map<PosKey, PdTree> inner_trees;
  for (const auto& [q, c] : at) inner_trees.emplace(q, c->pd.tree);
  MuTreeResult mu;
  try {
    mu = mu_tree(pd.tree, inner_trees);
  } catch (const KernelError&) {
    return std::nullopt;
  }
  std::map<PosKey, Label> labels;
  for (const auto& [q, c] : at) {
    const auto& fw = mu.fwd.at(q);
    for (const auto& [r, lab] : c->pd.labels) {
      PosKey res = fw.at(r);
      auto it = labels.find(res);
      if (it == labels.end())
        labels.emplace(res, lab);
      else if (!label_equal(it->second, lab))
        return std::nullopt;
    }
  }
  std::map<PosKey, OpTermPtr> ls;
  for (const auto& [q, c] : at) ls.emplace(q, c->term);
  OpTermPtr t2 = normalize_op(comp_op(term, std::move(ls)));
  return NormPair{std::move(t2), CellPd{std::move(mu.tree), std::move(labels)}};
}

NormPair base_normalize(const Computad& C, OpTermPtr term, CellPd pd) {
  term = normalize_op(term);
  for (;;) {
    if (auto e = eta_collapse(C, term, pd)) {
      term = std::move(e->term);
      pd = std::move(e->pd);
      continue;
    }
    if (auto f = flatten_all(C, term, pd)) {
      term = std::move(f->term);
      pd = std::move(f->pd);
      continue;
    }
    break;
  }
  return NormPair{std::move(term), std::move(pd)};
}

// The operation inserting a weak identity: the contraction lift of a pair of
// units along the degenerate globe tree.
OpTermPtr id_insertion_op(std::size_t d) {
  return lift_op("", unit_op(d - 1), unit_op(d - 1), identity_tree(globe_tree(d - 1)));
}

// One weak-identity inlining step at position p, when the label there is a
// weak identity on its own boundary and the surrounding tree absorbs the
// degenerate slot.
std::optional<NormPair> try_idinline(const Computad& C, const OpTermPtr& term, const CellPd& pd,
                                     PosKey p) {
  const TreeScheme& sch = scheme_cached(pd.tree);
  std::size_t d = p.first;
  const Label& lp = pd.labels.at(p);
  if (lp.is_gen()) return std::nullopt;
  const CellPtr& w = lp.cell;
  PosKey sf = face_pos(sch, p, true);
  PosKey tf = face_pos(sch, p, false);
  if (!label_equal(pd.labels.at(sf), pd.labels.at(tf))) return std::nullopt;
  if (!cells_equal(w, weak_id(C, boundary(C, w, true)))) return std::nullopt;
  std::map<PosKey, CellPd> inner;
  for (const auto& [q, l] : pd.labels) {
    CellPd g;
    if (q == p) {
      g.tree = identity_tree(globe_tree(d - 1));
      g.labels[{d - 1, 0}] = pd.labels.at(sf);
      for (std::size_t j = 0; j + 1 < d; ++j) {
        g.labels[{j, 0}] = pd.labels.at(face_pos_to(sch, p, j, true));
        g.labels[{j, 1}] = pd.labels.at(face_pos_to(sch, p, j, false));
      }
    } else {
      g.tree = globe_tree(q.first);
      g.labels[{q.first, 0}] = l;
      for (std::size_t j = 0; j < q.first; ++j) {
        g.labels[{j, 0}] = pd.labels.at(face_pos_to(sch, q, j, true));
        g.labels[{j, 1}] = pd.labels.at(face_pos_to(sch, q, j, false));
      }
    }
    inner.emplace(q, std::move(g));
  }
  std::map<PosKey, PdTree> inner_trees;
  for (const auto& [q, g] : inner) inner_trees.emplace(q, g.tree);
  MuTreeResult mu;
  try {
    mu = mu_tree(pd.tree, inner_trees);
  } catch (const KernelError&) {
    return std::nullopt;
  }
  std::map<PosKey, Label> labels;
  for (const auto& [q, g] : inner) {
    const auto& fw = mu.fwd.at(q);
    for (const auto& [r, lab] : g.labels) {
      PosKey res = fw.at(r);
      auto it = labels.find(res);
      if (it == labels.end())
        labels.emplace(res, lab);
      else if (!label_equal(it->second, lab))
        return std::nullopt;
    }
  }
  std::map<PosKey, OpTermPtr> ls;
  for (const auto& [q, l] : pd.labels) {
    (void)l;
    ls.emplace(q, q == p ? id_insertion_op(d) : unit_op(q.first));
  }
  OpTermPtr t2 = normalize_op(comp_op(term, std::move(ls)));
  return NormPair{std::move(t2), CellPd{std::move(mu.tree), std::move(labels)}};
}

nlohmann::json cell_to_j(const CellPtr& c);

nlohmann::json label_to_j(const Label& l) {
  nlohmann::json j;
  if (l.is_gen())
    j["gen"] = l.gen;
  else
    j["cell"] = cell_to_j(l.cell);
  return j;
}

nlohmann::json cellpd_to_j(const CellPd& p) {
  nlohmann::json j;
  j["tree"] = pasting::show_tree(p.tree);
  auto ls = nlohmann::json::array();
  for (const auto& [q, l] : p.labels)
    ls.push_back(nlohmann::json::array({q.first, q.second, label_to_j(l)}));
  j["labels"] = std::move(ls);
  return j;
}

nlohmann::json cell_to_j(const CellPtr& c) {
  nlohmann::json j;
  j["term"] = nlohmann::json::parse(operad::op_to_json(c->term));
  j["pd"] = cellpd_to_j(c->pd);
  return j;
}

CellPtr cell_from_j(const Computad& C, const nlohmann::json& j);

Label label_from_j(const Computad& C, const nlohmann::json& j) {
  if (j.contains("gen")) return Label{j.at("gen").get<std::string>(), nullptr};
  return Label{"", cell_from_j(C, j.at("cell"))};
}

CellPtr cell_from_j(const Computad& C, const nlohmann::json& j) {
  OpTermPtr term = operad::op_from_json(j.at("term").dump());
  CellPd pd;
  pd.tree = pasting::parse_tree(j.at("pd").at("tree").get<std::string>());
  for (const auto& e : j.at("pd").at("labels"))
    pd.labels[{e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()}] =
        label_from_j(C, e.at(2));
  return make_cell(C, std::move(term), std::move(pd));
}

// The readings of a 2x2 grid of 2-cells: two rows composed vertically, and
// two columns composed horizontally.
OpTermPtr grid_rows_op() {
  std::map<PosKey, OpTermPtr> ls;
  ls[{2, 0}] = bin_term(2, 0);
  ls[{2, 1}] = bin_term(2, 0);
  for (std::size_t i = 0; i < 3; ++i) ls[{1, i}] = bin_term(1, 0);
  for (std::size_t i = 0; i < 2; ++i) ls[{0, i}] = unit_op(0);
  return comp_op(bin_term(2, 1), std::move(ls));
}

OpTermPtr grid_cols_op() {
  std::map<PosKey, OpTermPtr> ls;
  ls[{2, 0}] = bin_term(2, 1);
  ls[{2, 1}] = bin_term(2, 1);
  for (std::size_t i = 0; i < 4; ++i) ls[{1, i}] = unit_op(1);
  for (std::size_t i = 0; i < 3; ++i) ls[{0, i}] = unit_op(0);
  return comp_op(bin_term(2, 0), std::move(ls));
}

}  // namespace

// ---------------------------------------------------------------------------
// Labels and equality
// ---------------------------------------------------------------------------

bool label_equal(const Label& a, const Label& b) {
  if (a.is_gen() != b.is_gen()) return false;
  if (a.is_gen()) return a.gen == b.gen;
  return cells_equal(a.cell, b.cell);
}

bool cellpd_equal(const CellPd& a, const CellPd& b) {
  if (!(a.tree == b.tree) || a.labels.size() != b.labels.size()) return false;
  auto ib = b.labels.begin();
  for (auto ia = a.labels.begin(); ia != a.labels.end(); ++ia, ++ib) {
    if (ia->first != ib->first) return false;
    if (!label_equal(ia->second, ib->second)) return false;
  }
  return true;
}

bool cells_equal(const CellPtr& a, const CellPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (!operad::op_structural_equal(a->term, b->term)) return false;
  return cellpd_equal(a->pd, b->pd);
}

// ---------------------------------------------------------------------------
// Computads
// ---------------------------------------------------------------------------

CellPtr Computad::declare(const std::string& name) {
  if (gens_.count(name)) throw PreconditionError("generator '" + name + "' already declared");
  CellPd pd;
  pd.tree = globe_tree(0);
  pd.labels[{0, 0}] = Label{name, nullptr};
  auto cell = std::make_shared<const Cell>(Cell{unit_op(0), std::move(pd)});
  gens_.emplace(name, Decl{nullptr, nullptr, cell});
  order_.push_back(name);
  return cell;
}

CellPtr Computad::declare(const std::string& name, const CellPtr& src, const CellPtr& tgt) {
  if (gens_.count(name)) throw PreconditionError("generator '" + name + "' already declared");
  if (!src || !tgt) throw PreconditionError("generator boundaries must be cells");
  if (src->dim() != tgt->dim())
    throw PreconditionError("generator boundary dimensions differ");
  std::size_t d = src->dim();
  if (d >= 1)
    for (int s = 0; s < 2; ++s)
      if (!cells_equal(boundary(*this, src, s == 0), boundary(*this, tgt, s == 0)))
        throw PreconditionError("generator boundary cells are not parallel");
  std::size_t n = d + 1;
  CellPd pd;
  pd.tree = globe_tree(n);
  pd.labels[{n, 0}] = Label{name, nullptr};
  pd.labels[{d, 0}] = label_of(*this, src);
  pd.labels[{d, 1}] = label_of(*this, tgt);
  CellPtr s = src;
  CellPtr t = src;
  for (std::size_t j = d; j-- > 0;) {
    s = boundary(*this, s, true);
    t = boundary(*this, t, false);
    pd.labels[{j, 0}] = label_of(*this, s);
    pd.labels[{j, 1}] = label_of(*this, t);
  }
  auto cell = std::make_shared<const Cell>(Cell{unit_op(n), std::move(pd)});
  gens_.emplace(name, Decl{src, tgt, cell});
  order_.push_back(name);
  return cell;
}

bool Computad::has(const std::string& name) const { return gens_.count(name) != 0; }

CellPtr Computad::cell(const std::string& name) const {
  auto it = gens_.find(name);
  if (it == gens_.end()) throw PreconditionError("unknown generator '" + name + "'");
  return it->second.cell;
}

std::vector<std::string> Computad::names() const { return order_; }

Label label_of(const Computad& C, const CellPtr& c) {
  if (!c) throw PreconditionError("null cell");
  if (c->term->kind == OpKind::Unit && c->pd.tree == globe_tree(c->dim())) {
    auto it = c->pd.labels.find({c->dim(), 0});
    if (it != c->pd.labels.end() && it->second.is_gen() && C.has(it->second.gen) &&
        cells_equal(C.cell(it->second.gen), c))
      return Label{it->second.gen, nullptr};
  }
  return Label{"", c};
}

CellPtr label_cell(const Computad& C, const Label& l) {
  if (l.is_gen()) return C.cell(l.gen);
  if (!l.cell) throw PreconditionError("empty label");
  return l.cell;
}

// ---------------------------------------------------------------------------
// Diagram operations
// ---------------------------------------------------------------------------

CellPd cellpd_boundary(const CellPd& p, bool src_side) {
  if (p.tree.dim == 0) throw PreconditionError("boundary of a 0-dimensional diagram");
  CellPd out;
  out.tree = tree_boundary(p.tree);
  GlobularMap emb = face_embedding(p.tree, src_side);
  for (std::size_t d = 0; d <= out.tree.dim; ++d)
    for (std::size_t i = 0; i < cells_at(out.tree, d); ++i)
      out.labels[{d, i}] = p.labels.at({d, emb(d, i)});
  return out;
}

CellPd cellpd_boundary_to(const CellPd& p, std::size_t k, bool src_side) {
  if (k > p.tree.dim) throw PreconditionError("boundary dimension exceeds the diagram");
  CellPd out = p;
  while (out.tree.dim > k) out = cellpd_boundary(out, src_side);
  return out;
}

CellPd compose_cellpd(std::size_t k, const CellPd& a, const CellPd& b) {
  if (a.tree.dim != b.tree.dim || k >= a.tree.dim)
    throw PreconditionError("compose_cellpd: dimension mismatch");
  if (!cellpd_equal(cellpd_boundary_to(a, k, false), cellpd_boundary_to(b, k, true)))
    throw PreconditionError("compose_cellpd: diagrams do not share the boundary");
  ComposedTreePositions pos = compose_trees_pos(k, a.tree, b.tree);
  CellPd out;
  out.tree = std::move(pos.tree);
  for (const auto& [q, r] : pos.from_right) out.labels[r] = b.labels.at(q);
  for (const auto& [q, r] : pos.from_left) out.labels[r] = a.labels.at(q);
  return out;
}

CellPd identity_cellpd(const CellPd& p) {
  return CellPd{identity_tree(p.tree), p.labels};
}

CellPd eta_cellpd(const Computad& C, const CellPtr& c) {
  std::size_t n = c->dim();
  CellPd out;
  out.tree = globe_tree(n);
  out.labels[{n, 0}] = label_of(C, c);
  for (std::size_t j = 0; j < n; ++j) {
    out.labels[{j, 0}] = label_of(C, boundary_to(C, c, j, true));
    out.labels[{j, 1}] = label_of(C, boundary_to(C, c, j, false));
  }
  return out;
}

std::string cellpd_to_json(const CellPd& p) { return cellpd_to_j(p).dump(); }

// ---------------------------------------------------------------------------
// Cells
// ---------------------------------------------------------------------------

CellPtr make_cell(const Computad& C, OpTermPtr term, CellPd pd) {
  if (!term) throw PreconditionError("null term");
  if (!(op_arity(term) == pd.tree))
    throw PreconditionError("cell arity does not match the diagram tree");
  std::size_t want = 0;
  for (std::size_t d = 0; d <= pd.tree.dim; ++d) {
    std::size_t cd = cells_at(pd.tree, d);
    want += cd;
    for (std::size_t i = 0; i < cd; ++i)
      if (!pd.labels.count({d, i}))
        throw PreconditionError("missing label in the diagram");
  }
  if (pd.labels.size() != want) throw PreconditionError("excess labels in the diagram");
  NormPair nf = base_normalize(C, std::move(term), std::move(pd));
  return std::make_shared<const Cell>(Cell{std::move(nf.term), std::move(nf.pd)});
}

Cell raw_boundary(const Cell& c, bool src_side) {
  if (c.dim() == 0) throw PreconditionError("boundary of a 0-cell");
  return Cell{op_boundary(c.term, src_side), cellpd_boundary(c.pd, src_side)};
}

CellPtr boundary(const Computad& C, const CellPtr& c, bool src_side) {
  if (!c) throw PreconditionError("null cell");
  Cell r = raw_boundary(*c, src_side);
  return make_cell(C, std::move(r.term), std::move(r.pd));
}

CellPtr boundary_to(const Computad& C, const CellPtr& c, std::size_t k, bool src_side) {
  if (!c || k > c->dim()) throw PreconditionError("boundary dimension exceeds the cell");
  CellPtr out = c;
  while (out->dim() > k) out = boundary(C, out, src_side);
  return out;
}

bool parallel(const Computad& C, const CellPtr& a, const CellPtr& b) {
  if (!a || !b) throw PreconditionError("null cell");
  if (a->dim() != b->dim()) return false;
  if (a->dim() == 0) return true;
  return cells_equal(boundary(C, a, true), boundary(C, b, true)) &&
         cells_equal(boundary(C, a, false), boundary(C, b, false));
}

bool validate_cell(const Computad& C, const CellPtr& c, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  if (!c) return fail("null cell");
  if (!operad::validate_op(c->term, why)) return false;
  PdTree ar;
  try {
    ar = op_arity(c->term);
  } catch (const KernelError& e) {
    return fail(e.what());
  }
  if (!(ar == c->pd.tree)) return fail("term arity does not match the diagram tree");
  std::size_t want = 0;
  for (std::size_t d = 0; d <= c->pd.tree.dim; ++d) {
    std::size_t cd = cells_at(c->pd.tree, d);
    want += cd;
    for (std::size_t i = 0; i < cd; ++i)
      if (!c->pd.labels.count({d, i})) return fail("missing label in the diagram");
  }
  if (c->pd.labels.size() != want) return fail("excess labels in the diagram");
  const TreeScheme& sch = scheme_cached(c->pd.tree);
  for (const auto& [q, l] : c->pd.labels) {
    CellPtr lc;
    try {
      lc = label_cell(C, l);
    } catch (const KernelError& e) {
      return fail(e.what());
    }
    if (lc->dim() != q.first) return fail("label dimension mismatch");
    if (q.first == 0) continue;
    for (int s = 0; s < 2; ++s) {
      CellPtr bc = boundary(C, lc, s == 0);
      CellPtr fc = label_cell(C, c->pd.labels.at(face_pos(sch, q, s == 0)));
      if (!cells_equal(bc, fc) && !deep_equal(C, bc, fc)) {
        std::ostringstream os;
        os << "face mismatch at position (" << q.first << "," << q.second << ")";
        return fail(os.str());
      }
    }
  }
  return true;
}

CellPtr deep_normalize(const Computad& C, const CellPtr& c) {
  if (!c) throw PreconditionError("null cell");
  auto hit = C.deep_memo_.find(c.get());
  if (hit != C.deep_memo_.end()) return hit->second;
  CellPd pd = c->pd;
  for (auto& [q, l] : pd.labels) {
    (void)q;
    if (!l.is_gen()) l = label_of(C, deep_normalize(C, l.cell));
  }
  NormPair nf = base_normalize(C, c->term, std::move(pd));
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t d = nf.pd.tree.dim; d >= 1 && !changed; --d)
      for (std::size_t i = 0; i < cells_at(nf.pd.tree, d) && !changed; ++i)
        if (auto step = try_idinline(C, nf.term, nf.pd, {d, i})) {
          nf = base_normalize(C, std::move(step->term), std::move(step->pd));
          changed = true;
        }
  }
  CellPtr out = std::make_shared<const Cell>(Cell{std::move(nf.term), std::move(nf.pd)});
  C.deep_pin_.push_back(c);
  C.deep_memo_.emplace(c.get(), out);
  return out;
}

bool deep_equal(const Computad& C, const CellPtr& a, const CellPtr& b) {
  return cells_equal(deep_normalize(C, a), deep_normalize(C, b));
}

std::string show_cell(const CellPtr& c) {
  if (!c) return "<null>";
  std::ostringstream os;
  os << operad::show_op(c->term) << " @ " << pasting::show_tree(c->pd.tree) << " {";
  bool first = true;
  for (const auto& [q, l] : c->pd.labels) {
    if (!first) os << ", ";
    first = false;
    os << q.first << "." << q.second << "=";
    if (l.is_gen())
      os << l.gen;
    else
      os << "<" << operad::show_op(l.cell->term) << " @ " << pasting::show_tree(l.cell->pd.tree)
         << ">";
  }
  os << "}";
  return os.str();
}

std::string cell_to_json(const CellPtr& c) { return cell_to_j(c).dump(); }

CellPtr cell_from_json(const Computad& C, const std::string& text) {
  try {
    return cell_from_j(C, nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("cell json: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Weak-categorical constructions
// ---------------------------------------------------------------------------

CellPtr weak_comp(const Computad& C, std::size_t k, const CellPtr& x, const CellPtr& y) {
  if (!x || !y) throw PreconditionError("null cell");
  std::size_t n = x->dim();
  if (y->dim() != n || k >= n) throw PreconditionError("weak_comp: dimension mismatch");
  CellPtr tx = boundary_to(C, x, k, false);
  CellPtr sy = boundary_to(C, y, k, true);
  if (!cells_equal(tx, sy) && !deep_equal(C, tx, sy))
    throw PreconditionError("weak_comp: boundaries do not match");
  ComposedTreePositions gpos = compose_trees_pos(k, globe_tree(n), globe_tree(n));
  if (cellpd_equal(cellpd_boundary_to(x->pd, k, false), cellpd_boundary_to(y->pd, k, true))) {
    CellPd pd = compose_cellpd(k, x->pd, y->pd);
    std::map<PosKey, OpTermPtr> ls;
    auto put = [&](const std::map<PosKey, PosKey>& side, const OpTermPtr& t) {
      for (const auto& [gq, r] : side)
        ls[r] = gq.first == n ? t : op_boundary_to(t, gq.first, gq.second == 0);
    };
    put(gpos.from_right, y->term);
    put(gpos.from_left, x->term);
    OpTermPtr term = normalize_op(comp_op(bin_term(n, k), std::move(ls)));
    return make_cell(C, std::move(term), std::move(pd));
  }
  CellPd pd;
  pd.tree = glb_tree(n, k);
  auto put = [&](const std::map<PosKey, PosKey>& side, const CellPtr& cell) {
    for (const auto& [gq, r] : side)
      pd.labels[r] = gq.first == n ? label_of(C, cell)
                                   : label_of(C, boundary_to(C, cell, gq.first, gq.second == 0));
  };
  put(gpos.from_right, y);
  put(gpos.from_left, x);
  pd.labels[gpos.from_left.at({k, 1})] = label_of(C, deep_normalize(C, tx));
  return make_cell(C, bin_term(n, k), std::move(pd));
}

CellPtr weak_id(const Computad& C, const CellPtr& c) {
  if (!c) throw PreconditionError("null cell");
  return make_cell(C, lift_op("", c->term, c->term, identity_tree(c->pd.tree)),
                   identity_cellpd(c->pd));
}

CellPtr coherence_cell(const Computad& C, const CellPtr& a, const CellPtr& b, bool forward) {
  if (!forward) return coherence_cell(C, b, a, true);
  if (!a || !b) throw PreconditionError("null cell");
  if (a->dim() != b->dim()) throw PreconditionError("coherence_cell: dimension mismatch");
  if (!cellpd_equal(a->pd, b->pd))
    throw PreconditionError("coherence_cell: cells live over different diagrams");
  if (a->dim() >= 1)
    for (int s = 0; s < 2; ++s) {
      CellPtr ba = boundary(C, a, s == 0);
      CellPtr bb = boundary(C, b, s == 0);
      if (!cells_equal(ba, bb) && !deep_equal(C, ba, bb))
        throw PreconditionError("coherence_cell: cells are not parallel");
    }
  return make_cell(C, lift_op("", a->term, b->term, identity_tree(a->pd.tree)),
                   identity_cellpd(a->pd));
}

CellPtr inverse_of(const Computad& C, const CellPtr& e) {
  if (!e) throw PreconditionError("null cell");
  if (e->term->kind != OpKind::Lift || top_cells(e->pd.tree) != 0)
    throw PreconditionError("inverse_of expects a coherence-style cell");
  return make_cell(C, lift_op("", e->term->plus, e->term->minus, e->term->lift_arity), e->pd);
}

EquivalenceWitness equivalence_witness(const Computad& C, const CellPtr& e, std::size_t depth) {
  if (!e || e->dim() == 0) throw PreconditionError("equivalence_witness expects a positive-dimensional cell");
  EquivalenceWitness w;
  w.inverse = inverse_of(C, e);
  std::size_t k = e->dim() - 1;
  auto cancel = [&](const CellPtr& first, const CellPtr& second, bool src_side) {
    CellPtr round = weak_comp(C, k, first, second);
    CellPtr idc = weak_id(C, boundary(C, e, src_side));
    if (cellpd_equal(round->pd, idc->pd)) return coherence_cell(C, round, idc);
    return coherence_cell(C, deep_normalize(C, round), deep_normalize(C, idc));
  };
  w.left_cancel = cancel(e, w.inverse, true);
  w.right_cancel = cancel(w.inverse, e, false);
  if (depth > 1) {
    w.left_sub = std::make_shared<EquivalenceWitness>(equivalence_witness(C, w.left_cancel, depth - 1));
    w.right_sub = std::make_shared<EquivalenceWitness>(equivalence_witness(C, w.right_cancel, depth - 1));
  }
  return w;
}

// ---------------------------------------------------------------------------
// Named coherences
// ---------------------------------------------------------------------------

CellPtr associator(const Computad& C, const CellPtr& f, const CellPtr& g, const CellPtr& h) {
  for (const CellPtr& c : {f, g, h})
    if (!c || c->dim() != 1) throw PreconditionError("associator expects 1-cells");
  if (!cells_equal(boundary(C, f, false), boundary(C, g, true)) ||
      !cells_equal(boundary(C, g, false), boundary(C, h, true)))
    throw PreconditionError("associator: cells are not composable");
  PdTree o{0, {}};
  PdTree t3{1, {o, o, o}};
  CellPd base;
  base.tree = t3;
  base.labels[{1, 0}] = label_of(C, f);
  base.labels[{1, 1}] = label_of(C, g);
  base.labels[{1, 2}] = label_of(C, h);
  base.labels[{0, 0}] = label_of(C, boundary(C, f, true));
  base.labels[{0, 1}] = label_of(C, boundary(C, f, false));
  base.labels[{0, 2}] = label_of(C, boundary(C, g, false));
  base.labels[{0, 3}] = label_of(C, boundary(C, h, false));
  OpTermPtr c2 = bin_term(1, 0);
  auto two = [&](bool left_nested) {
    std::map<PosKey, OpTermPtr> ls;
    ls[{1, 0}] = left_nested ? c2 : unit_op(1);
    ls[{1, 1}] = left_nested ? unit_op(1) : c2;
    for (std::size_t i = 0; i < 3; ++i) ls[{0, i}] = unit_op(0);
    return comp_op(c2, std::move(ls));
  };
  return make_cell(C, lift_op("assoc", two(true), two(false), identity_tree(t3)),
                   identity_cellpd(base));
}

CellPtr unitor_left(const Computad& C, const CellPtr& f) {
  if (!f || f->dim() != 1) throw PreconditionError("unitor_left expects a 1-cell");
  CellPtr padded = weak_comp(C, 0, weak_id(C, boundary(C, f, true)), f);
  return coherence_cell(C, padded, f);
}

CellPtr unitor_right(const Computad& C, const CellPtr& f) {
  if (!f || f->dim() != 1) throw PreconditionError("unitor_right expects a 1-cell");
  CellPtr padded = weak_comp(C, 0, f, weak_id(C, boundary(C, f, false)));
  return coherence_cell(C, padded, f);
}

CellPtr exchanger(const Computad& C, const CellPtr& bl, const CellPtr& tl, const CellPtr& br,
                  const CellPtr& tr) {
  for (const CellPtr& c : {bl, tl, br, tr})
    if (!c || c->dim() != 2) throw PreconditionError("exchanger expects 2-cells");
  if (!cells_equal(boundary(C, bl, false), boundary(C, tl, true)) ||
      !cells_equal(boundary(C, br, false), boundary(C, tr, true)) ||
      !cells_equal(boundary_to(C, bl, 0, false), boundary_to(C, br, 0, true)))
    throw PreconditionError("exchanger: cells do not form a grid");
  CellPd grid = compose_cellpd(0, compose_cellpd(1, eta_cellpd(C, bl), eta_cellpd(C, tl)),
                               compose_cellpd(1, eta_cellpd(C, br), eta_cellpd(C, tr)));
  CellPtr rows = make_cell(C, grid_rows_op(), grid);
  CellPtr cols = make_cell(C, grid_cols_op(), grid);
  return coherence_cell(C, rows, cols);
}

CoherenceSquare pentagon_witness(const Computad& C, const CellPtr& f, const CellPtr& g,
                                 const CellPtr& h, const CellPtr& i) {
  CellPtr fg = weak_comp(C, 0, f, g);
  CellPtr gh = weak_comp(C, 0, g, h);
  CellPtr hi = weak_comp(C, 0, h, i);
  CellPtr left = weak_comp(C, 1, associator(C, fg, h, i), associator(C, f, g, hi));
  CellPtr right =
      weak_comp(C, 1,
                weak_comp(C, 1, weak_comp(C, 0, associator(C, f, g, h), weak_id(C, i)),
                          associator(C, f, gh, i)),
                weak_comp(C, 0, weak_id(C, f), associator(C, g, h, i)));
  return CoherenceSquare{left, right, coherence_cell(C, left, right)};
}

CoherenceSquare triangle_witness(const Computad& C, const CellPtr& f, const CellPtr& g) {
  if (!f || !g || f->dim() != 1 || g->dim() != 1)
    throw PreconditionError("triangle_witness expects 1-cells");
  CellPtr mid = weak_id(C, boundary(C, f, false));
  CellPtr left = weak_comp(C, 1, associator(C, f, mid, g),
                           weak_comp(C, 0, weak_id(C, f), unitor_left(C, g)));
  CellPtr right = weak_comp(C, 0, unitor_right(C, f), weak_id(C, g));
  return CoherenceSquare{left, right, coherence_cell(C, left, right)};
}

CoherenceSquare naturality_witness(const Computad& C, const CellPtr& F, const CellPtr& g,
                                   const CellPtr& h) {
  if (!F || F->dim() != 2 || !g || g->dim() != 1 || !h || h->dim() != 1)
    throw PreconditionError("naturality_witness expects a 2-cell and two 1-cells");
  CellPtr f = boundary(C, F, true);
  CellPtr fp = boundary(C, F, false);
  CellPtr left =
      weak_comp(C, 1, weak_comp(C, 0, weak_comp(C, 0, F, weak_id(C, g)), weak_id(C, h)),
                associator(C, fp, g, h));
  CellPtr right = weak_comp(C, 1, associator(C, f, g, h),
                            weak_comp(C, 0, F, weak_id(C, weak_comp(C, 0, g, h))));
  return CoherenceSquare{left, right, coherence_cell(C, left, right)};
}

// ---------------------------------------------------------------------------
// Eckmann-Hilton
// ---------------------------------------------------------------------------

EhConstruction eckmann_hilton(const Computad& C, const CellPtr& a, const CellPtr& b) {
  if (!a || !b || a->dim() != 2 || b->dim() != 2)
    throw PreconditionError("eckmann_hilton expects two 2-cells");
  EhConstruction E;
  E.gen_a = a;
  E.gen_b = b;
  E.id1 = boundary(C, a, true);
  for (const CellPtr& c : {a, b})
    for (int s = 0; s < 2; ++s)
      if (!cells_equal(boundary(C, c, s == 0), E.id1))
        throw PreconditionError("eckmann_hilton: non-endomorphism inputs");
  E.star = boundary(C, E.id1, true);
  if (!cells_equal(E.id1, weak_id(C, E.star)))
    throw PreconditionError("eckmann_hilton: the common boundary is not a weak identity");
  E.one2 = weak_id(C, E.id1);
  E.ab = weak_comp(C, 1, a, b);
  E.ba_horizontal = weak_comp(C, 0, b, a);

  auto grid = [&](const CellPtr& c00, const CellPtr& c01, const CellPtr& c10,
                  const CellPtr& c11) {
    return compose_cellpd(0, compose_cellpd(1, eta_cellpd(C, c00), eta_cellpd(C, c01)),
                          compose_cellpd(1, eta_cellpd(C, c10), eta_cellpd(C, c11)));
  };
  CellPd grid_a = grid(E.one2, E.gen_b, E.gen_a, E.one2);
  CellPd grid_b = grid(E.gen_b, E.one2, E.one2, E.gen_a);

  E.grid_a_rows = make_cell(C, grid_rows_op(), grid_a);
  E.grid_a_cols = make_cell(C, grid_cols_op(), grid_a);
  E.grid_b_cols = make_cell(C, grid_cols_op(), grid_b);
  E.grid_b_rows = make_cell(C, grid_rows_op(), grid_b);

  E.deep_a_cols = deep_normalize(C, E.grid_a_cols);
  E.deep_b_cols = deep_normalize(C, E.grid_b_cols);

  // Column operations with a weak identity kept as explicit padding, and the
  // two half-collapsed composites that interpolate between the fully padded
  // column readings and the plain horizontal composite b .0 a.
  OpTermPtr u0 = unit_op(0);
  OpTermPtr u1 = unit_op(1);
  OpTermPtr u2 = unit_op(2);
  auto pad_col = [&](bool id_below) {
    std::map<PosKey, OpTermPtr> ls;
    ls[{2, 0}] = id_below ? id_insertion_op(2) : u2;
    ls[{2, 1}] = id_below ? u2 : id_insertion_op(2);
    for (std::size_t i = 0; i < 3; ++i) ls[{1, i}] = u1;
    for (std::size_t i = 0; i < 2; ++i) ls[{0, i}] = u0;
    return comp_op(bin_term(2, 1), std::move(ls));
  };
  auto pad_pair = [&](const OpTermPtr& lo, const OpTermPtr& ro) {
    std::map<PosKey, OpTermPtr> ls;
    ls[{2, 0}] = lo;
    ls[{2, 1}] = ro;
    for (std::size_t i = 0; i < 4; ++i) ls[{1, i}] = u1;
    for (std::size_t i = 0; i < 3; ++i) ls[{0, i}] = u0;
    return comp_op(bin_term(2, 0), std::move(ls));
  };
  E.collapse_left = make_cell(C, pad_pair(u2, pad_col(false)), E.ba_horizontal->pd);
  E.collapse_right = make_cell(C, pad_pair(pad_col(false), u2), E.ba_horizontal->pd);

  E.theta[0] = coherence_cell(C, E.grid_a_rows, E.grid_a_cols);
  E.theta[1] = coherence_cell(C, E.deep_a_cols, E.collapse_left);
  E.theta[2] = coherence_cell(C, E.collapse_left, E.ba_horizontal);
  E.theta[3] = coherence_cell(C, E.ba_horizontal, E.collapse_right);
  E.theta[4] = coherence_cell(C, E.collapse_right, E.deep_b_cols);
  E.theta[5] = coherence_cell(C, E.grid_b_cols, E.grid_b_rows);

  E.braid = E.theta[0];
  for (std::size_t i = 1; i < 6; ++i) E.braid = weak_comp(C, 2, E.braid, E.theta[i]);
  E.braid_inverse = inverse_of(C, E.theta[5]);
  for (std::size_t i = 5; i-- > 0;)
    E.braid_inverse = weak_comp(C, 2, E.braid_inverse, inverse_of(C, E.theta[i]));

  CellPtr round = deep_normalize(C, weak_comp(C, 2, E.braid, E.braid_inverse));
  CellPtr idc = deep_normalize(C, weak_id(C, boundary(C, E.braid, true)));
  E.cancellation = cellpd_equal(round->pd, idc->pd) ? coherence_cell(C, round, idc) : nullptr;
  return E;
}

CellPtr eh_theta(const Computad& C, std::size_t idx, const CellPtr& a, const CellPtr& b) {
  if (idx < 1 || idx > 6) throw PreconditionError("eh_theta index must be 1..6");
  return eckmann_hilton(C, a, b).theta[idx - 1];
}

CellPtr eh_braid(const Computad& C, const CellPtr& a, const CellPtr& b) {
  return eckmann_hilton(C, a, b).braid;
}

CellPtr eh_braid_inverse(const Computad& C, const CellPtr& a, const CellPtr& b) {
  return eckmann_hilton(C, a, b).braid_inverse;
}

// ---------------------------------------------------------------------------
// Builder expressions
// ---------------------------------------------------------------------------

namespace {

OpExprPtr mk_expr(OpExpr e) { return std::make_shared<const OpExpr>(std::move(e)); }

void want_args(const OpExpr& e, std::size_t n) {
  if (e.args.size() != n) throw PreconditionError("builder expression arity mismatch");
}

}  // namespace

OpExprPtr expr_gen(const CellPtr& c) {
  if (!c) throw PreconditionError("null cell");
  return mk_expr(OpExpr{ExprKind::Gen, c, 0, true, {}});
}

OpExprPtr expr_comp(std::size_t k, const OpExprPtr& x, const OpExprPtr& y) {
  if (!x || !y) throw PreconditionError("null expression");
  return mk_expr(OpExpr{ExprKind::CompK, nullptr, k, true, {x, y}});
}

OpExprPtr expr_ident(const OpExprPtr& x) {
  if (!x) throw PreconditionError("null expression");
  return mk_expr(OpExpr{ExprKind::Ident, nullptr, 0, true, {x}});
}

OpExprPtr expr_coh(bool forward, const OpExprPtr& x, const OpExprPtr& y) {
  if (!x || !y) throw PreconditionError("null expression");
  return mk_expr(OpExpr{ExprKind::Coh, nullptr, 0, forward, {x, y}});
}

OpExprPtr expr_named(ExprKind kind, std::vector<OpExprPtr> args, std::size_t k) {
  for (const auto& e : args)
    if (!e) throw PreconditionError("null expression");
  return mk_expr(OpExpr{kind, nullptr, k, true, std::move(args)});
}

CellPtr apply(const Computad& C, const OpExprPtr& e) {
  if (!e) throw PreconditionError("null expression");
  auto at = [&](std::size_t i) { return apply(C, e->args[i]); };
  switch (e->kind) {
    case ExprKind::Gen:
      return e->cell;
    case ExprKind::CompK:
      want_args(*e, 2);
      return weak_comp(C, e->k, at(0), at(1));
    case ExprKind::Ident:
      want_args(*e, 1);
      return weak_id(C, at(0));
    case ExprKind::Coh:
      want_args(*e, 2);
      return coherence_cell(C, at(0), at(1), e->forward);
    case ExprKind::Assoc:
      want_args(*e, 3);
      return associator(C, at(0), at(1), at(2));
    case ExprKind::UnitorL:
      want_args(*e, 1);
      return unitor_left(C, at(0));
    case ExprKind::UnitorR:
      want_args(*e, 1);
      return unitor_right(C, at(0));
    case ExprKind::Exch:
      want_args(*e, 4);
      return exchanger(C, at(0), at(1), at(2), at(3));
    case ExprKind::EHTheta:
      want_args(*e, 2);
      return eh_theta(C, e->k, at(0), at(1));
    case ExprKind::EHBraid:
      want_args(*e, 2);
      return eh_braid(C, at(0), at(1));
    case ExprKind::EHBraidInv:
      want_args(*e, 2);
      return eh_braid_inverse(C, at(0), at(1));
  }
  throw PreconditionError("unknown builder expression");
}

}  // namespace omega::weakcat
