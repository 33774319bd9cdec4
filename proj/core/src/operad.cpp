#include "omega/operad.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

#include "json.hpp"

namespace omega::operad {

using pasting::TreeScheme;

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

OpTermPtr unit_op(std::size_t n) {
  auto t = std::make_shared<OpTerm>();
  t->kind = OpKind::Unit;
  t->unit_dim = n;
  return t;
}

OpTermPtr lift_op(std::string tag, OpTermPtr minus, OpTermPtr plus, PdTree arity) {
  if (!minus || !plus) throw PreconditionError("lift_op: missing operand");
  if (arity.dim == 0) throw PreconditionError("lift_op: arity must have dimension >= 1");
  if (op_dim(*minus) + 1 != arity.dim || op_dim(*plus) + 1 != arity.dim)
    throw PreconditionError("lift_op: operand dimensions do not match the arity");
  PdTree b = tree_boundary(arity);
  if (!(op_arity(*minus) == b) || !(op_arity(*plus) == b))
    throw PreconditionError("lift_op: operand arities differ from the arity boundary");
  auto t = std::make_shared<OpTerm>();
  t->kind = OpKind::Lift;
  t->tag = std::move(tag);
  t->minus = std::move(minus);
  t->plus = std::move(plus);
  t->lift_arity = std::move(arity);
  return t;
}

OpTermPtr comp_op(OpTermPtr op, std::map<PosKey, OpTermPtr> labels) {
  if (!op) throw PreconditionError("comp_op: missing operation");
  TreeScheme s = pasting::scheme_of_tree(op_arity(*op));
  std::size_t expected = 0;
  for (std::size_t d = 0; d < s.gset.card.size(); ++d) expected += s.gset.card[d];
  if (labels.size() != expected)
    throw PreconditionError("comp_op: label count differs from the arity positions");
  for (const auto& [p, l] : labels) {
    if (!l) throw PreconditionError("comp_op: missing label");
    if (p.first >= s.gset.card.size() || p.second >= s.gset.card[p.first])
      throw PreconditionError("comp_op: label at a position outside the arity");
    if (op_dim(*l) != p.first)
      throw PreconditionError("comp_op: label dimension differs from its position");
  }
  auto t = std::make_shared<OpTerm>();
  t->kind = OpKind::Comp;
  t->op = std::move(op);
  t->labels = std::move(labels);
  return t;
}

// ---------------------------------------------------------------------------
// Dimension, arity, boundary
// ---------------------------------------------------------------------------

std::size_t op_dim(const OpTerm& t) {
  switch (t.kind) {
    case OpKind::Unit:
      return t.unit_dim;
    case OpKind::Lift:
      return t.lift_arity.dim;
    case OpKind::Comp:
      return op_dim(*t.op);
  }
  throw KernelError("op_dim: unreachable");
}

PdTree op_arity(const OpTerm& t) {
  switch (t.kind) {
    case OpKind::Unit:
      return pasting::globe_tree(t.unit_dim);
    case OpKind::Lift:
      return t.lift_arity;
    case OpKind::Comp: {
      std::map<PosKey, PdTree> inner;
      for (const auto& [p, l] : t.labels) inner.emplace(p, op_arity(*l));
      return pasting::mu_tree(op_arity(*t.op), inner).tree;
    }
  }
  throw KernelError("op_arity: unreachable");
}

OpTermPtr op_boundary(const OpTermPtr& t, bool src_side) {
  if (!t) throw PreconditionError("op_boundary: missing term");
  if (op_dim(*t) == 0) throw PreconditionError("op_boundary: dimension-0 operation");
  switch (t->kind) {
    case OpKind::Unit:
      return unit_op(t->unit_dim - 1);
    case OpKind::Lift:
      return src_side ? t->minus : t->plus;
    case OpKind::Comp: {
      PdTree a = op_arity(*t->op);
      globular::GlobularMap emb = pasting::face_embedding(a, src_side);
      std::map<PosKey, OpTermPtr> labels;
      for (std::size_t d = 0; d < emb.level.size(); ++d)
        for (std::size_t i = 0; i < emb.level[d].size(); ++i)
          labels.emplace(PosKey{d, i}, t->labels.at({d, emb.level[d][i]}));
      return comp_op(op_boundary(t->op, src_side), std::move(labels));
    }
  }
  throw KernelError("op_boundary: unreachable");
}

// ---------------------------------------------------------------------------
// Comparison and normalization
// ---------------------------------------------------------------------------

bool op_structural_equal(const OpTermPtr& a, const OpTermPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case OpKind::Unit:
      return a->unit_dim == b->unit_dim;
    case OpKind::Lift:
      return a->lift_arity == b->lift_arity && op_structural_equal(a->minus, b->minus) &&
             op_structural_equal(a->plus, b->plus);
    case OpKind::Comp: {
      if (!op_structural_equal(a->op, b->op)) return false;
      if (a->labels.size() != b->labels.size()) return false;
      auto ita = a->labels.begin();
      auto itb = b->labels.begin();
      for (; ita != a->labels.end(); ++ita, ++itb) {
        if (ita->first != itb->first) return false;
        if (!op_structural_equal(ita->second, itb->second)) return false;
      }
      return true;
    }
  }
  return false;
}

namespace {

bool all_unit_labels(const std::map<PosKey, OpTermPtr>& labels) {
  for (const auto& [p, l] : labels)
    if (l->kind != OpKind::Unit) return false;
  return true;
}

// Memoization by object identity; the keys are pinned so temporaries cannot
// be freed and leave stale addresses behind.
struct Memo {
  std::unordered_map<const OpTerm*, OpTermPtr> done;
  std::vector<OpTermPtr> pin;
};

OpTermPtr normalize_impl(const OpTermPtr& t, Memo& memo) {
  if (auto it = memo.done.find(t.get()); it != memo.done.end()) return it->second;
  OpTermPtr result;
  switch (t->kind) {
    case OpKind::Unit:
      result = t;
      break;
    case OpKind::Lift: {
      OpTermPtr m = normalize_impl(t->minus, memo);
      OpTermPtr p = normalize_impl(t->plus, memo);
      result = (m.get() == t->minus.get() && p.get() == t->plus.get())
                   ? t
                   : lift_op(t->tag, std::move(m), std::move(p), t->lift_arity);
      break;
    }
    case OpKind::Comp: {
      OpTermPtr op = normalize_impl(t->op, memo);
      std::map<PosKey, OpTermPtr> ls;
      for (const auto& [p, l] : t->labels) ls.emplace(p, normalize_impl(l, memo));
      while (op->kind == OpKind::Comp) {
        // R3: fold the inner substitution into the labels along the arity
        // provenance
        std::map<PosKey, PdTree> arities;
        for (const auto& [p, l] : op->labels) arities.emplace(p, op_arity(*l));
        pasting::MuTreeResult mu = pasting::mu_tree(op_arity(*op->op), arities);
        std::map<PosKey, OpTermPtr> l2 = std::move(ls);
        ls.clear();
        for (const auto& [p, l1p] : op->labels) {
          std::map<PosKey, OpTermPtr> slice;
          for (const auto& [q, r] : mu.fwd.at(p)) slice.emplace(q, l2.at(r));
          ls.emplace(p, normalize_impl(comp_op(l1p, std::move(slice)), memo));
        }
        op = op->op;
      }
      if (op->kind == OpKind::Unit) {
        result = ls.at({op->unit_dim, 0});  // R1
      } else if (all_unit_labels(ls)) {
        result = op;  // R2
      } else {
        result = comp_op(op, std::move(ls));
      }
      break;
    }
  }
  memo.pin.push_back(t);
  memo.done.emplace(t.get(), result);
  return result;
}

}  // namespace

OpTermPtr normalize_op(const OpTermPtr& t) {
  if (!t) throw PreconditionError("normalize_op: missing term");
  Memo memo;
  return normalize_impl(t, memo);
}

OpTermPtr normalize_op_outermost(const OpTermPtr& t) {
  if (!t) throw PreconditionError("normalize_op_outermost: missing term");
  switch (t->kind) {
    case OpKind::Unit:
      return t;
    case OpKind::Lift: {
      OpTermPtr m = normalize_op_outermost(t->minus);
      OpTermPtr p = normalize_op_outermost(t->plus);
      if (m.get() == t->minus.get() && p.get() == t->plus.get()) return t;
      return lift_op(t->tag, std::move(m), std::move(p), t->lift_arity);
    }
    case OpKind::Comp: {
      OpTermPtr op = t->op;
      std::map<PosKey, OpTermPtr> ls = t->labels;
      while (op->kind == OpKind::Comp) {
        // R3 at the root, on raw subterms
        std::map<PosKey, PdTree> arities;
        for (const auto& [p, l] : op->labels) arities.emplace(p, op_arity(*l));
        pasting::MuTreeResult mu = pasting::mu_tree(op_arity(*op->op), arities);
        std::map<PosKey, OpTermPtr> l2 = std::move(ls);
        ls.clear();
        for (const auto& [p, l1p] : op->labels) {
          std::map<PosKey, OpTermPtr> slice;
          for (const auto& [q, r] : mu.fwd.at(p)) slice.emplace(q, l2.at(r));
          ls.emplace(p, comp_op(l1p, std::move(slice)));
        }
        op = op->op;
      }
      if (op->kind == OpKind::Unit)
        return normalize_op_outermost(ls.at({op->unit_dim, 0}));  // R1
      OpTermPtr nop = normalize_op_outermost(op);
      std::map<PosKey, OpTermPtr> nls;
      for (const auto& [p, l] : ls) nls.emplace(p, normalize_op_outermost(l));
      if (all_unit_labels(nls)) return nop;  // R2
      return comp_op(std::move(nop), std::move(nls));
    }
  }
  throw KernelError("normalize_op_outermost: unreachable");
}

bool ops_equal(const OpTermPtr& a, const OpTermPtr& b) {
  return op_structural_equal(normalize_op(a), normalize_op(b));
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

namespace {

bool validate_impl(const OpTermPtr& t, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  switch (t->kind) {
    case OpKind::Unit:
      return true;
    case OpKind::Lift: {
      if (!validate_impl(t->minus, why) || !validate_impl(t->plus, why)) return false;
      // constructor checked dimensions and arities; check parallelism
      if (op_dim(*t->minus) >= 1) {
        if (!ops_equal(op_boundary(t->minus, true), op_boundary(t->plus, true)))
          return fail("lift: source boundaries of the operands differ");
        if (!ops_equal(op_boundary(t->minus, false), op_boundary(t->plus, false)))
          return fail("lift: target boundaries of the operands differ");
      }
      return true;
    }
    case OpKind::Comp: {
      if (!validate_impl(t->op, why)) return false;
      for (const auto& [p, l] : t->labels)
        if (!validate_impl(l, why)) return false;
      PdTree a;
      try {
        a = op_arity(*t);  // checks the arity nesting
      } catch (const PreconditionError& e) {
        return fail(std::string("comp: incompatible label arities: ") + e.what());
      }
      TreeScheme s = pasting::scheme_of_tree(op_arity(*t->op));
      for (std::size_t d = 1; d < s.gset.card.size(); ++d) {
        for (std::size_t i = 0; i < s.gset.card[d]; ++i) {
          const OpTermPtr& l = t->labels.at({d, i});
          if (!ops_equal(op_boundary(l, true), t->labels.at({d - 1, s.gset.src_of(d, i)})))
            return fail("comp: label source differs from the face label");
          if (!ops_equal(op_boundary(l, false), t->labels.at({d - 1, s.gset.tgt_of(d, i)})))
            return fail("comp: label target differs from the face label");
        }
      }
      return true;
    }
  }
  return false;
}

}  // namespace

bool validate_op(const OpTermPtr& t, std::string* why) {
  if (!t) {
    if (why) *why = "missing term";
    return false;
  }
  return validate_impl(t, why);
}

// ---------------------------------------------------------------------------
// Named operations
// ---------------------------------------------------------------------------

OpTermPtr bin_term(std::size_t n, std::size_t k) {
  if (k >= n) throw PreconditionError("bin_term: k must be below n");
  std::string tag = "bin" + std::to_string(n) + "_" + std::to_string(k);
  if (n == k + 1) return lift_op(tag, unit_op(k), unit_op(k), pasting::glb_tree(n, k));
  OpTermPtr below = bin_term(n - 1, k);
  return lift_op(tag, below, below, pasting::glb_tree(n, k));
}

// ---------------------------------------------------------------------------
// Printing and serialization
// ---------------------------------------------------------------------------

std::string show_op(const OpTermPtr& t) {
  if (!t) return "<null>";
  switch (t->kind) {
    case OpKind::Unit:
      return "u" + std::to_string(t->unit_dim);
    case OpKind::Lift: {
      if (!t->tag.empty()) return t->tag;
      return "lift(" + show_op(t->minus) + " => " + show_op(t->plus) + " ; " +
             pasting::show_tree(t->lift_arity) + ")";
    }
    case OpKind::Comp: {
      std::string s = "comp[" + show_op(t->op) + "](";
      bool first = true;
      for (const auto& [p, l] : t->labels) {
        if (l->kind == OpKind::Unit) continue;  // keep the print readable
        if (!first) s += ", ";
        first = false;
        s += "(" + std::to_string(p.first) + "," + std::to_string(p.second) +
             ")=" + show_op(l);
      }
      return s + ")";
    }
  }
  return "<invalid>";
}

namespace {

nlohmann::json op_to_j(const OpTermPtr& t) {
  nlohmann::json j;
  switch (t->kind) {
    case OpKind::Unit:
      j["kind"] = "unit";
      j["dim"] = t->unit_dim;
      break;
    case OpKind::Lift:
      j["kind"] = "lift";
      if (!t->tag.empty()) j["tag"] = t->tag;
      j["minus"] = op_to_j(t->minus);
      j["plus"] = op_to_j(t->plus);
      j["arity"] = pasting::show_tree(t->lift_arity);
      break;
    case OpKind::Comp: {
      j["kind"] = "comp";
      j["op"] = op_to_j(t->op);
      nlohmann::json ls = nlohmann::json::array();
      for (const auto& [p, l] : t->labels)
        ls.push_back({p.first, p.second, op_to_j(l)});
      j["labels"] = std::move(ls);
      break;
    }
  }
  return j;
}

OpTermPtr op_from_j(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "unit") return unit_op(j.at("dim").get<std::size_t>());
  if (kind == "lift") {
    std::string tag = j.contains("tag") ? j.at("tag").get<std::string>() : "";
    return lift_op(std::move(tag), op_from_j(j.at("minus")), op_from_j(j.at("plus")),
                   pasting::parse_tree(j.at("arity").get<std::string>()));
  }
  if (kind == "comp") {
    std::map<PosKey, OpTermPtr> labels;
    for (const auto& e : j.at("labels"))
      labels.emplace(PosKey{e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()},
                     op_from_j(e.at(2)));
    return comp_op(op_from_j(j.at("op")), std::move(labels));
  }
  throw ParseError("operation JSON: unknown kind '" + kind + "'");
}

}  // namespace

std::string op_to_json(const OpTermPtr& t) {
  if (!t) throw PreconditionError("op_to_json: missing term");
  return op_to_j(t).dump();
}

OpTermPtr op_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("operation JSON: ") + e.what());
  }
  try {
    return op_from_j(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("operation JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Random generation and suites
// ---------------------------------------------------------------------------

namespace {

std::map<PosKey, OpTermPtr> unit_labels(const PdTree& arity) {
  TreeScheme s = pasting::scheme_of_tree(arity);
  std::map<PosKey, OpTermPtr> out;
  for (std::size_t d = 0; d < s.gset.card.size(); ++d)
    for (std::size_t i = 0; i < s.gset.card[d]; ++i) out.emplace(PosKey{d, i}, unit_op(d));
  return out;
}

// Labels for a substitution into an operation of arity `a`: one arity tree
// per parallel class of positions (so the face trees agree), units where the
// class tree is a globe over unit-like faces, and contraction lifts of the
// face labels elsewhere.
std::map<PosKey, OpTermPtr> random_comp_labels(pasting::Rng& rng, const PdTree& a,
                                               std::size_t max_width) {
  TreeScheme s = pasting::scheme_of_tree(a);
  std::map<PosKey, PdTree> itree;
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, PdTree> cls;
  std::map<PosKey, OpTermPtr> lab;
  std::uniform_int_distribution<int> coin(0, 1);
  for (std::size_t d = 0; d < s.gset.card.size(); ++d) {
    for (std::size_t i = 0; i < s.gset.card[d]; ++i) {
      if (d == 0) {
        itree[{0, i}] = PdTree{};
        lab[{0, i}] = unit_op(0);
        continue;
      }
      std::size_t sp = s.gset.src_of(d, i);
      std::size_t tp = s.gset.tgt_of(d, i);
      auto key = std::make_tuple(d, sp, tp);
      auto it = cls.find(key);
      if (it == cls.end())
        it = cls.emplace(key, pasting::random_tree_over(rng, itree.at({d - 1, sp}), max_width))
                 .first;
      itree[{d, i}] = it->second;
      const OpTermPtr& f = lab.at({d - 1, sp});
      const OpTermPtr& g = lab.at({d - 1, tp});
      bool can_unit = it->second == pasting::globe_tree(d) && f->kind == OpKind::Unit &&
                      g->kind == OpKind::Unit;
      if (can_unit && coin(rng))
        lab[{d, i}] = unit_op(d);
      else
        lab[{d, i}] = lift_op("", f, g, it->second);
    }
  }
  return lab;
}

}  // namespace

OpTermPtr random_op(pasting::Rng& rng, std::size_t dim, std::size_t depth,
                    std::size_t max_width) {
  if (dim == 0) return unit_op(0);
  std::uniform_int_distribution<int> pick(0, 2);
  int branch = depth == 0 ? 0 : pick(rng);
  switch (branch) {
    default:
    case 0: {
      std::uniform_int_distribution<int> base(0, 2);
      switch (base(rng)) {
        case 0:
          return unit_op(dim);
        case 1: {
          std::uniform_int_distribution<std::size_t> ks(0, dim - 1);
          return bin_term(dim, ks(rng));
        }
        default: {
          PdTree a = pasting::random_tree_over(rng, pasting::globe_tree(dim - 1), max_width);
          return lift_op("", unit_op(dim - 1), unit_op(dim - 1), std::move(a));
        }
      }
    }
    case 1: {
      OpTermPtr m = random_op(rng, dim - 1, depth - 1, max_width);
      PdTree a = pasting::random_tree_over(rng, op_arity(*m), max_width);
      std::uniform_int_distribution<int> coin(0, 1);
      OpTermPtr p = coin(rng) ? m : comp_op(m, unit_labels(op_arity(*m)));
      return lift_op("", std::move(m), std::move(p), std::move(a));
    }
    case 2: {
      OpTermPtr h = random_op(rng, dim, depth - 1, max_width);
      return comp_op(h, random_comp_labels(rng, op_arity(*h), max_width));
    }
  }
}

pasting::SuiteReport run_normalization_suite(std::size_t budget, std::uint64_t seed) {
  pasting::SuiteReport rep;
  pasting::Rng rng(seed);
  auto check = [&](bool ok, const std::string& what) {
    ++rep.cases;
    if (!ok) {
      ++rep.failures;
      if (rep.failed.size() < 16) rep.failed.push_back(what);
    }
  };
  while (rep.cases < budget) {
    std::uniform_int_distribution<std::size_t> dims(1, 3);
    std::uniform_int_distribution<std::size_t> depths(0, 2);
    std::size_t dim = dims(rng);
    OpTermPtr t = random_op(rng, dim, depths(rng), 2);

    check(validate_op(t), "random term is well-formed");
    OpTermPtr n = normalize_op(t);
    check(op_structural_equal(normalize_op(n), n), "normalization is idempotent");
    check(op_dim(*n) == op_dim(*t), "normalization preserves dimension");
    check(op_arity(*n) == op_arity(*t), "normalization preserves arity");
    check(validate_op(n), "normal forms are well-formed");
    check(ops_equal(op_boundary(n, true), op_boundary(t, true)),
          "normalization preserves the source");
    check(ops_equal(op_boundary(n, false), op_boundary(t, false)),
          "normalization preserves the target");
    check(op_arity(*op_boundary(t, true)) == pasting::tree_boundary(op_arity(*t)),
          "boundary arity is the arity boundary");

    // substituting units is the identity
    OpTermPtr wrapped = comp_op(t, unit_labels(op_arity(*t)));
    check(op_structural_equal(normalize_op(wrapped), n), "unit labels collapse");
    // substituting into a unit is the identity
    std::map<PosKey, OpTermPtr> glabels;
    glabels.emplace(PosKey{dim, 0}, t);
    OpTermPtr sm = t, tg = t;
    for (std::size_t d = dim; d >= 1; --d) {
      sm = op_boundary(sm, true);
      tg = op_boundary(tg, false);
      glabels.emplace(PosKey{d - 1, 0}, sm);
      glabels.emplace(PosKey{d - 1, 1}, tg);
    }
    OpTermPtr eta = comp_op(unit_op(dim), std::move(glabels));
    check(op_structural_equal(normalize_op(eta), n), "unit outer collapses");
  }
  return rep;
}

pasting::SuiteReport run_confluence_suite(std::size_t budget, std::uint64_t seed) {
  pasting::SuiteReport rep;
  pasting::Rng rng(seed);
  while (rep.cases < budget) {
    std::uniform_int_distribution<std::size_t> dims(1, 3);
    std::uniform_int_distribution<std::size_t> depths(0, 3);
    OpTermPtr t = random_op(rng, dims(rng), depths(rng), 2);
    ++rep.cases;
    if (!op_structural_equal(normalize_op(t), normalize_op_outermost(t))) {
      ++rep.failures;
      if (rep.failed.size() < 16)
        rep.failed.push_back("strategies disagree on " + show_op(t));
    }
  }
  return rep;
}

}  // namespace omega::operad
