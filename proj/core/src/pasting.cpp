#include "omega/pasting.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <tuple>

#include "json.hpp"

namespace omega::pasting {

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------

bool PdTree::valid() const {
  if (dim == 0) return kids.empty();
  for (const auto& k : kids) {
    if (k.dim + 1 != dim || !k.valid()) return false;
  }
  return true;
}

bool operator<(const PdTree& a, const PdTree& b) {
  if (a.dim != b.dim) return a.dim < b.dim;
  if (a.kids.size() != b.kids.size()) return a.kids.size() < b.kids.size();
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (a.kids[i] < b.kids[i]) return true;
    if (b.kids[i] < a.kids[i]) return false;
  }
  return false;
}

namespace {

std::string show_body(const PdTree& t) {
  if (t.dim == 0) return "o";
  std::string s = "[";
  for (std::size_t i = 0; i < t.kids.size(); ++i) {
    if (i) s += ",";
    s += show_body(t.kids[i]);
  }
  return s + "]";
}

}  // namespace

std::string show_tree(const PdTree& t) {
  if (t.dim == 0) return "o";
  return "pd" + std::to_string(t.dim) + ":" + show_body(t);
}

namespace {

struct TreeParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  PdTree body(std::size_t dim) {
    skip();
    if (dim == 0) {
      if (!eat('o')) throw ParseError("pasting tree: expected 'o'");
      return PdTree{};
    }
    if (!eat('[')) throw ParseError("pasting tree: expected '['");
    PdTree t;
    t.dim = dim;
    skip();
    if (eat(']')) return t;
    while (true) {
      t.kids.push_back(body(dim - 1));
      skip();
      if (eat(']')) break;
      if (!eat(',')) throw ParseError("pasting tree: expected ',' or ']'");
    }
    return t;
  }
};

}  // namespace

PdTree parse_tree(const std::string& text) {
  TreeParser p{text};
  p.skip();
  PdTree out;
  if (p.pos < text.size() && text[p.pos] == 'o') {
    ++p.pos;
    out = PdTree{};
  } else {
    if (text.compare(p.pos, 2, "pd") != 0) throw ParseError("pasting tree: expected 'pd'");
    p.pos += 2;
    std::size_t dim = 0, digits = 0;
    while (p.pos < text.size() && std::isdigit(static_cast<unsigned char>(text[p.pos]))) {
      dim = dim * 10 + static_cast<std::size_t>(text[p.pos] - '0');
      ++p.pos;
      ++digits;
    }
    if (digits == 0 || !p.eat(':')) throw ParseError("pasting tree: expected 'pdN:'");
    if (dim == 0) throw ParseError("pasting tree: dimension 0 is written 'o'");
    out = p.body(dim);
  }
  p.skip();
  if (p.pos != text.size()) throw ParseError("pasting tree: trailing input");
  return out;
}

PdTree globe_tree(std::size_t n) {
  PdTree t;
  if (n == 0) return t;
  t.dim = n;
  t.kids.push_back(globe_tree(n - 1));
  return t;
}

PdTree tree_boundary(const PdTree& t) {
  if (t.dim == 0) throw PreconditionError("tree_boundary: dimension 0 tree has no boundary");
  if (t.dim == 1) return PdTree{};
  PdTree b;
  b.dim = t.dim - 1;
  b.kids.reserve(t.kids.size());
  for (const auto& k : t.kids) b.kids.push_back(tree_boundary(k));
  return b;
}

PdTree compose_trees(std::size_t k, const PdTree& a, const PdTree& b) {
  if (a.dim != b.dim) throw PreconditionError("compose_trees: dimension mismatch");
  if (k >= a.dim) throw PreconditionError("compose_trees: k must be below the dimension");
  PdTree out;
  out.dim = a.dim;
  if (k == 0) {
    out.kids = a.kids;
    out.kids.insert(out.kids.end(), b.kids.begin(), b.kids.end());
    return out;
  }
  if (a.kids.size() != b.kids.size())
    throw PreconditionError("compose_trees: trees are not composable along k");
  out.kids.reserve(a.kids.size());
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    out.kids.push_back(compose_trees(k - 1, a.kids[i], b.kids[i]));
  return out;
}

PdTree glb_tree(std::size_t n, std::size_t k) {
  return compose_trees(k, globe_tree(n), globe_tree(n));
}

PdTree identity_tree(const PdTree& t) {
  PdTree out;
  out.dim = t.dim + 1;
  out.kids.reserve(t.kids.size());
  for (const auto& k : t.kids) out.kids.push_back(identity_tree(k));
  return out;
}

std::size_t cells_at(const PdTree& t, std::size_t d) {
  if (d > t.dim) return 0;
  if (d == 0) return t.dim == 0 ? 1 : t.kids.size() + 1;
  std::size_t n = 0;
  for (const auto& k : t.kids) n += cells_at(k, d - 1);
  return n;
}

std::size_t top_cells(const PdTree& t) { return cells_at(t, t.dim); }

// ---------------------------------------------------------------------------
// Schemes
// ---------------------------------------------------------------------------

namespace {

void collect_addrs(const PdTree& t, std::size_t d, std::vector<std::size_t>& prefix,
                   std::vector<std::vector<std::size_t>>& out) {
  if (d == 0) {
    if (t.dim == 0) {
      prefix.push_back(0);
      out.push_back(prefix);
      prefix.pop_back();
    } else {
      for (std::size_t j = 0; j <= t.kids.size(); ++j) {
        prefix.push_back(j);
        out.push_back(prefix);
        prefix.pop_back();
      }
    }
    return;
  }
  for (std::size_t i = 0; i < t.kids.size(); ++i) {
    prefix.push_back(i);
    collect_addrs(t.kids[i], d - 1, prefix, out);
    prefix.pop_back();
  }
}

std::vector<std::size_t> src_addr(const PdTree& t, std::size_t d,
                                  const std::vector<std::size_t>& a, bool src_side) {
  if (d == 1) return {src_side ? a[0] : a[0] + 1};
  std::vector<std::size_t> sub(a.begin() + 1, a.end());
  std::vector<std::size_t> rec = src_addr(t.kids[a[0]], d - 1, sub, src_side);
  rec.insert(rec.begin(), a[0]);
  return rec;
}

}  // namespace

TreeScheme scheme_of_tree(const PdTree& t) {
  if (!t.valid()) throw PreconditionError("scheme_of_tree: malformed tree");
  TreeScheme s;
  s.tree = t;
  s.addr.resize(t.dim + 1);
  s.index.resize(t.dim + 1);
  for (std::size_t d = 0; d <= t.dim; ++d) {
    std::vector<std::size_t> prefix;
    collect_addrs(t, d, prefix, s.addr[d]);
    for (std::size_t i = 0; i < s.addr[d].size(); ++i) s.index[d].emplace(s.addr[d][i], i);
  }
  s.gset.card.resize(t.dim + 1);
  for (std::size_t d = 0; d <= t.dim; ++d) s.gset.card[d] = s.addr[d].size();
  s.gset.src.resize(t.dim);
  s.gset.tgt.resize(t.dim);
  for (std::size_t d = 1; d <= t.dim; ++d) {
    for (const auto& a : s.addr[d]) {
      s.gset.src[d - 1].push_back(s.index_of(d - 1, src_addr(t, d, a, true)));
      s.gset.tgt[d - 1].push_back(s.index_of(d - 1, src_addr(t, d, a, false)));
    }
  }
  return s;
}

namespace {

std::vector<std::size_t> face_addr(const PdTree& t, std::size_t d,
                                   const std::vector<std::size_t>& a, bool src_side) {
  if (t.dim == 1) return {src_side ? std::size_t{0} : t.kids.size()};
  if (d == 0) return a;
  std::vector<std::size_t> sub(a.begin() + 1, a.end());
  std::vector<std::size_t> rec = face_addr(t.kids[a[0]], d - 1, sub, src_side);
  rec.insert(rec.begin(), a[0]);
  return rec;
}

}  // namespace

globular::GlobularMap face_embedding(const PdTree& t, bool src_side) {
  PdTree b = tree_boundary(t);
  TreeScheme sb = scheme_of_tree(b);
  TreeScheme st = scheme_of_tree(t);
  globular::GlobularMap f;
  f.level.resize(b.dim + 1);
  for (std::size_t d = 0; d <= b.dim; ++d) {
    f.level[d].reserve(sb.addr[d].size());
    for (const auto& a : sb.addr[d])
      f.level[d].push_back(st.index_of(d, face_addr(t, d, a, src_side)));
  }
  return f;
}

namespace {

// address of an a-position inside compose_trees(k, a, b); identity for the
// left operand, kid-shift at the k-th nesting level for the right one
std::vector<std::size_t> right_addr(std::size_t k, const PdTree& a, const PdTree& b,
                                    std::size_t d, const std::vector<std::size_t>& ad) {
  if (k == 0) {
    std::vector<std::size_t> out = ad;
    out[0] += a.kids.size();
    return out;
  }
  if (d == 0) return ad;
  std::vector<std::size_t> sub(ad.begin() + 1, ad.end());
  std::vector<std::size_t> rec = right_addr(k - 1, a.kids[ad[0]], b.kids[ad[0]], d - 1, sub);
  rec.insert(rec.begin(), ad[0]);
  return rec;
}

}  // namespace

ComposedTreePositions compose_trees_pos(std::size_t k, const PdTree& a, const PdTree& b) {
  ComposedTreePositions out;
  out.tree = compose_trees(k, a, b);
  TreeScheme sa = scheme_of_tree(a);
  TreeScheme sb = scheme_of_tree(b);
  TreeScheme sc = scheme_of_tree(out.tree);
  for (std::size_t d = 0; d <= a.dim; ++d) {
    for (std::size_t i = 0; i < sa.addr[d].size(); ++i)
      out.from_left[{d, i}] = {d, sc.index_of(d, sa.addr[d][i])};
    for (std::size_t i = 0; i < sb.addr[d].size(); ++i)
      out.from_right[{d, i}] = {d, sc.index_of(d, right_addr(k, a, b, d, sb.addr[d][i]))};
  }
  return out;
}

// ---------------------------------------------------------------------------
// Labelled diagrams
// ---------------------------------------------------------------------------

bool operator<(const LabeledPd& a, const LabeledPd& b) {
  if (a.tree < b.tree) return true;
  if (b.tree < a.tree) return false;
  return a.labels < b.labels;
}

bool pd_valid(const globular::FiniteGlobularSet& X, const LabeledPd& p) {
  if (!p.tree.valid()) return false;
  return globular::map_valid(scheme_of_tree(p.tree).gset, X, p.labels);
}

LabeledPd eta_pd(const globular::FiniteGlobularSet& X, std::size_t d, std::size_t cell) {
  if (d >= X.card.size() || cell >= X.card[d])
    throw PreconditionError("eta_pd: no such cell");
  LabeledPd p;
  p.tree = globe_tree(d);
  p.labels.level.resize(d + 1);
  std::vector<std::size_t> srcs(d + 1), tgts(d + 1);
  srcs[d] = tgts[d] = cell;
  for (std::size_t j = d; j >= 1; --j) {
    srcs[j - 1] = X.src_of(j, srcs[j]);
    tgts[j - 1] = X.tgt_of(j, tgts[j]);
  }
  for (std::size_t j = 0; j < d; ++j) p.labels.level[j] = {srcs[j], tgts[j]};
  p.labels.level[d] = {cell};
  return p;
}

LabeledPd pd_boundary(const LabeledPd& p, bool src_side) {
  LabeledPd out;
  out.tree = tree_boundary(p.tree);
  globular::GlobularMap emb = face_embedding(p.tree, src_side);
  out.labels.level.resize(out.tree.dim + 1);
  for (std::size_t d = 0; d <= out.tree.dim; ++d) {
    out.labels.level[d].reserve(emb.level[d].size());
    for (std::size_t i = 0; i < emb.level[d].size(); ++i)
      out.labels.level[d].push_back(p.labels(d, emb.level[d][i]));
  }
  return out;
}

LabeledPd pd_boundary_to(const LabeledPd& p, std::size_t k, bool src_side) {
  if (k > p.dim()) throw PreconditionError("pd_boundary_to: k above dimension");
  LabeledPd out = p;
  for (std::size_t d = p.dim(); d > k; --d) out = pd_boundary(out, src_side);
  return out;
}

LabeledPd compose_pd(const globular::FiniteGlobularSet& /*X*/, std::size_t k,
                     const LabeledPd& a, const LabeledPd& b, ComposedTreePositions* pos) {
  if (a.dim() != b.dim()) throw PreconditionError("compose_pd: dimension mismatch");
  if (k >= a.dim()) throw PreconditionError("compose_pd: k must be below the dimension");
  if (!(pd_boundary_to(a, k, false) == pd_boundary_to(b, k, true)))
    throw PreconditionError("compose_pd: boundary diagrams do not match");
  ComposedTreePositions ctp = compose_trees_pos(k, a.tree, b.tree);
  LabeledPd out;
  out.tree = ctp.tree;
  TreeScheme sc = scheme_of_tree(out.tree);
  out.labels.level.resize(out.tree.dim + 1);
  for (std::size_t d = 0; d <= out.tree.dim; ++d)
    out.labels.level[d].assign(sc.gset.card[d], 0);
  for (const auto& [from, to] : ctp.from_right)
    out.labels.level[to.first][to.second] = b.labels(from.first, from.second);
  for (const auto& [from, to] : ctp.from_left)
    out.labels.level[to.first][to.second] = a.labels(from.first, from.second);
  if (pos) *pos = std::move(ctp);
  return out;
}

LabeledPd identity_pd(const LabeledPd& p) {
  LabeledPd out;
  out.tree = identity_tree(p.tree);
  out.labels = p.labels;
  out.labels.level.emplace_back();  // no top cells in the degenerate tree
  return out;
}

std::string pd_to_json(const LabeledPd& p) {
  nlohmann::json j;
  j["tree"] = show_tree(p.tree);
  j["labels"] = p.labels.level;
  return j.dump();
}

LabeledPd pd_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pasting diagram JSON: ") + e.what());
  }
  LabeledPd p;
  try {
    p.tree = parse_tree(j.at("tree").get<std::string>());
    p.labels.level = j.at("labels").get<std::vector<std::vector<std::size_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("pasting diagram JSON: ") + e.what());
  }
  return p;
}

// ---------------------------------------------------------------------------
// Monad multiplication
// ---------------------------------------------------------------------------

namespace {

globular::FiniteGlobularSet terminal_gset(std::size_t dim) {
  globular::FiniteGlobularSet X;
  X.card.assign(dim + 1, 1);
  X.src.assign(dim, {0});
  X.tgt.assign(dim, {0});
  return X;
}

struct ProvCell {
  LabeledPd pd;
  std::map<PosKey, std::map<PosKey, PosKey>> fwd;
};

}  // namespace

NestedPd nested_boundary(const NestedPd& n, bool src_side) {
  NestedPd out;
  out.outer = tree_boundary(n.outer);
  globular::GlobularMap emb = face_embedding(n.outer, src_side);
  TreeScheme sb = scheme_of_tree(out.outer);
  for (std::size_t d = 0; d <= out.outer.dim; ++d)
    for (std::size_t i = 0; i < sb.gset.card[d]; ++i)
      out.inner[{d, i}] = n.inner.at({d, emb.level[d][i]});
  return out;
}

bool nested_valid(const globular::FiniteGlobularSet& X, const NestedPd& n) {
  if (!n.outer.valid()) return false;
  TreeScheme s = scheme_of_tree(n.outer);
  for (std::size_t d = 0; d <= n.outer.dim; ++d) {
    for (std::size_t i = 0; i < s.gset.card[d]; ++i) {
      auto it = n.inner.find({d, i});
      if (it == n.inner.end()) return false;
      const LabeledPd& q = it->second;
      if (q.dim() != d || !pd_valid(X, q)) return false;
      if (d >= 1) {
        auto sp = n.inner.find({d - 1, s.gset.src_of(d, i)});
        auto tp = n.inner.find({d - 1, s.gset.tgt_of(d, i)});
        if (sp == n.inner.end() || tp == n.inner.end()) return false;
        if (!(pd_boundary(q, true) == sp->second)) return false;
        if (!(pd_boundary(q, false) == tp->second)) return false;
      }
    }
  }
  return true;
}

MuPdResult mu_pd(const globular::FiniteGlobularSet& X, const NestedPd& n) {
  if (!nested_valid(X, n)) throw PreconditionError("mu_pd: invalid nested diagram");
  TreeScheme outer_s = scheme_of_tree(n.outer);

  EvalAlgebra<ProvCell> alg;
  alg.label = [&](std::size_t d, const std::vector<std::size_t>& addr) {
    PosKey p{d, outer_s.index_of(d, addr)};
    ProvCell c;
    c.pd = n.inner.at(p);
    TreeScheme is = scheme_of_tree(c.pd.tree);
    for (std::size_t dd = 0; dd <= c.pd.dim(); ++dd)
      for (std::size_t ii = 0; ii < is.gset.card[dd]; ++ii)
        c.fwd[p][{dd, ii}] = {dd, ii};
    return c;
  };
  alg.comp = [&](std::size_t k, const ProvCell& a, const ProvCell& b) {
    ProvCell c;
    ComposedTreePositions ctp;
    c.pd = compose_pd(X, k, a.pd, b.pd, &ctp);
    for (const auto& [p, m] : a.fwd)
      for (const auto& [q, r] : m) c.fwd[p][q] = ctp.from_left.at(r);
    for (const auto& [p, m] : b.fwd)
      for (const auto& [q, r] : m) c.fwd[p][q] = ctp.from_right.at(r);
    return c;
  };
  alg.ident = [&](const ProvCell& a) {
    ProvCell c;
    c.pd = identity_pd(a.pd);
    c.fwd = a.fwd;  // positions keep their keys in the degenerate tree
    return c;
  };

  ProvCell top = eval_pd(alg, n.outer);

  // complete the provenance at outer positions that are faces of evaluated
  // ones: the inner diagram there is the boundary of the inner diagram above
  for (std::size_t d = n.outer.dim; d >= 1; --d) {
    for (std::size_t i = 0; i < outer_s.gset.card[d]; ++i) {
      PosKey p{d, i};
      auto it = top.fwd.find(p);
      if (it == top.fwd.end()) continue;
      const LabeledPd& q = n.inner.at(p);
      for (bool src_side : {true, false}) {
        PosKey f{d - 1,
                 src_side ? outer_s.gset.src_of(d, i) : outer_s.gset.tgt_of(d, i)};
        if (top.fwd.count(f)) continue;
        globular::GlobularMap emb = face_embedding(q.tree, src_side);
        std::map<PosKey, PosKey> m;
        for (std::size_t dd = 0; dd < emb.level.size(); ++dd)
          for (std::size_t ii = 0; ii < emb.level[dd].size(); ++ii)
            m[{dd, ii}] = it->second.at({dd, emb.level[dd][ii]});
        top.fwd[f] = std::move(m);
      }
    }
  }
  return MuPdResult{std::move(top.pd), std::move(top.fwd)};
}

MuTreeResult mu_tree(const PdTree& outer, const std::map<PosKey, PdTree>& inner) {
  std::size_t dmax = outer.dim;
  globular::FiniteGlobularSet X = terminal_gset(dmax);
  NestedPd n;
  n.outer = outer;
  for (const auto& [p, t] : inner) {
    LabeledPd q;
    q.tree = t;
    q.labels.level.resize(t.dim + 1);
    TreeScheme s = scheme_of_tree(t);
    for (std::size_t d = 0; d <= t.dim; ++d) q.labels.level[d].assign(s.gset.card[d], 0);
    n.inner.emplace(p, std::move(q));
  }
  MuPdResult r = mu_pd(X, n);
  return MuTreeResult{std::move(r.pd.tree), std::move(r.fwd)};
}

NestedPd eta_outer(const globular::FiniteGlobularSet&, const LabeledPd& p) {
  NestedPd n;
  n.outer = globe_tree(p.dim());
  n.inner[{p.dim(), 0}] = p;
  // the globe tree has two cells in every dimension below the top: index 0
  // carries the iterated source, index 1 the iterated target
  LabeledPd s = p, t = p;
  for (std::size_t d = p.dim(); d >= 1; --d) {
    s = pd_boundary(s, true);
    t = pd_boundary(t, false);
    n.inner[{d - 1, 0}] = s;
    n.inner[{d - 1, 1}] = t;
  }
  return n;
}

NestedPd map_eta(const globular::FiniteGlobularSet& X, const LabeledPd& p) {
  NestedPd n;
  n.outer = p.tree;
  TreeScheme s = scheme_of_tree(p.tree);
  for (std::size_t d = 0; d <= p.dim(); ++d)
    for (std::size_t i = 0; i < s.gset.card[d]; ++i)
      n.inner[{d, i}] = eta_pd(X, d, p.labels(d, i));
  return n;
}

// ---------------------------------------------------------------------------
// Random generation
// ---------------------------------------------------------------------------

PdTree random_tree(Rng& rng, std::size_t dim, std::size_t max_width) {
  PdTree t;
  t.dim = dim;
  if (dim == 0) return t;
  std::uniform_int_distribution<std::size_t> w(0, max_width);
  std::size_t width = w(rng);
  t.kids.reserve(width);
  for (std::size_t i = 0; i < width; ++i) t.kids.push_back(random_tree(rng, dim - 1, max_width));
  return t;
}

PdTree random_tree_over(Rng& rng, const PdTree& boundary, std::size_t max_width) {
  PdTree t;
  t.dim = boundary.dim + 1;
  if (boundary.dim == 0) {
    std::uniform_int_distribution<std::size_t> w(0, max_width);
    std::size_t width = w(rng);
    for (std::size_t i = 0; i < width; ++i) t.kids.push_back(PdTree{});
    return t;
  }
  t.kids.reserve(boundary.kids.size());
  for (const auto& bk : boundary.kids) t.kids.push_back(random_tree_over(rng, bk, max_width));
  return t;
}

std::optional<LabeledPd> random_labels(Rng& rng, const globular::FiniteGlobularSet& X,
                                       const PdTree& tree,
                                       const std::map<PosKey, std::size_t>& prescribed) {
  TreeScheme s = scheme_of_tree(tree);
  LabeledPd p;
  p.tree = tree;
  p.labels.level.resize(tree.dim + 1);
  for (std::size_t d = 0; d <= tree.dim; ++d) {
    p.labels.level[d].assign(s.gset.card[d], 0);
    for (std::size_t i = 0; i < s.gset.card[d]; ++i) {
      std::vector<std::size_t> candidates;
      auto fixed = prescribed.find({d, i});
      for (std::size_t y = 0; y < X.cells(d); ++y) {
        if (fixed != prescribed.end() && y != fixed->second) continue;
        if (d >= 1) {
          if (X.src_of(d, y) != p.labels(d - 1, s.gset.src_of(d, i))) continue;
          if (X.tgt_of(d, y) != p.labels(d - 1, s.gset.tgt_of(d, i))) continue;
        }
        candidates.push_back(y);
      }
      if (candidates.empty()) return std::nullopt;
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      p.labels.level[d][i] = candidates[pick(rng)];
    }
  }
  return p;
}

std::optional<LabeledPd> random_pd(Rng& rng, const globular::FiniteGlobularSet& X,
                                   std::size_t dim, std::size_t max_width,
                                   std::size_t attempts) {
  for (std::size_t a = 0; a < attempts; ++a) {
    PdTree t = random_tree(rng, dim, max_width);
    if (auto p = random_labels(rng, X, t)) return p;
  }
  return std::nullopt;
}

std::optional<LabeledPd> random_pd_with_source(Rng& rng, const globular::FiniteGlobularSet& X,
                                               std::size_t dim, std::size_t k,
                                               const LabeledPd& face, std::size_t max_width,
                                               std::size_t attempts) {
  if (face.dim() != k) throw PreconditionError("random_pd_with_source: face dimension != k");
  for (std::size_t a = 0; a < attempts; ++a) {
    // grow the tree upward from the prescribed k-boundary
    std::vector<PdTree> chain{face.tree};
    for (std::size_t d = k; d < dim; ++d)
      chain.push_back(random_tree_over(rng, chain.back(), max_width));
    // compose the source-side embeddings: scheme(face.tree) -> scheme(top)
    globular::GlobularMap emb = globular::identity_map(scheme_of_tree(face.tree).gset);
    for (std::size_t d = k; d < dim; ++d) {
      globular::GlobularMap up = face_embedding(chain[d - k + 1], true);
      for (std::size_t dd = 0; dd < emb.level.size(); ++dd)
        for (auto& v : emb.level[dd]) v = up.level[dd][v];
    }
    std::map<PosKey, std::size_t> prescribed;
    for (std::size_t dd = 0; dd < emb.level.size(); ++dd)
      for (std::size_t ii = 0; ii < emb.level[dd].size(); ++ii)
        prescribed[{dd, emb.level[dd][ii]}] = face.labels(dd, ii);
    if (auto p = random_labels(rng, X, chain.back(), prescribed)) return p;
  }
  return std::nullopt;
}

std::optional<NestedPd> random_nested(Rng& rng, const globular::FiniteGlobularSet& X,
                                      std::size_t dim, std::size_t max_width,
                                      std::size_t attempts) {
  for (std::size_t a = 0; a < attempts; ++a) {
    PdTree outer = random_tree(rng, dim, max_width);
    TreeScheme s = scheme_of_tree(outer);
    // inner trees: one per parallel class so that faces stay compatible
    std::map<PosKey, PdTree> itree;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, PdTree> cls;
    for (std::size_t d = 0; d <= dim; ++d) {
      for (std::size_t i = 0; i < s.gset.card[d]; ++i) {
        if (d == 0) {
          itree[{0, i}] = PdTree{};
          continue;
        }
        std::size_t sp = s.gset.src_of(d, i), tp = s.gset.tgt_of(d, i);
        auto key = std::make_tuple(d, sp, tp);
        auto it = cls.find(key);
        if (it == cls.end())
          it = cls.emplace(key, random_tree_over(rng, itree.at({d - 1, sp}), max_width)).first;
        itree[{d, i}] = it->second;
      }
    }
    // labels position by position, prescribing both faces
    std::map<PosKey, LabeledPd> inner;
    bool ok = true;
    for (std::size_t d = 0; d <= dim && ok; ++d) {
      for (std::size_t i = 0; i < s.gset.card[d] && ok; ++i) {
        std::map<PosKey, std::size_t> prescribed;
        if (d >= 1) {
          const PdTree& t = itree.at({d, i});
          const LabeledPd& sf = inner.at({d - 1, s.gset.src_of(d, i)});
          const LabeledPd& tf = inner.at({d - 1, s.gset.tgt_of(d, i)});
          for (bool src_side : {true, false}) {
            const LabeledPd& f = src_side ? sf : tf;
            globular::GlobularMap emb = face_embedding(t, src_side);
            for (std::size_t dd = 0; dd < emb.level.size(); ++dd)
              for (std::size_t ii = 0; ii < emb.level[dd].size(); ++ii) {
                auto [it2, inserted] =
                    prescribed.emplace(PosKey{dd, emb.level[dd][ii]}, f.labels(dd, ii));
                if (!inserted && it2->second != f.labels(dd, ii)) ok = false;
              }
          }
        }
        if (!ok) break;
        auto lp = random_labels(rng, X, itree.at({d, i}), prescribed);
        if (!lp) {
          ok = false;
          break;
        }
        inner[{d, i}] = *lp;
      }
    }
    if (ok) return NestedPd{outer, inner};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Law suites
// ---------------------------------------------------------------------------

namespace {

LabeledPd iterated_identity(const LabeledPd& p, std::size_t times) {
  LabeledPd out = p;
  for (std::size_t i = 0; i < times; ++i) out = identity_pd(out);
  return out;
}

}  // namespace

SuiteReport run_strict_axiom_suite(std::size_t budget, std::uint64_t seed,
                                   std::size_t max_dim) {
  SuiteReport rep;
  Rng rng(seed);
  std::vector<globular::FiniteGlobularSet> pool;
  pool.push_back(terminal_gset(max_dim));
  pool.push_back(globular::standard_globe(max_dim));
  pool.push_back(scheme_of_tree(parse_tree("pd2:[[o,o],[o]]")).gset);

  auto check = [&](bool ok, const std::string& what) {
    ++rep.cases;
    if (!ok) {
      ++rep.failures;
      if (rep.failed.size() < 16) rep.failed.push_back(what);
    }
  };

  std::size_t round = 0;
  while (rep.cases < budget) {
    const globular::FiniteGlobularSet& X = pool[round % pool.size()];
    ++round;
    std::uniform_int_distribution<std::size_t> dims(1, std::min(max_dim, X.dim()));
    std::size_t n = dims(rng);
    std::uniform_int_distribution<std::size_t> ks(0, n - 1);
    std::size_t k = ks(rng);

    auto a = random_pd(rng, X, n, 3);
    if (!a) continue;
    auto b = random_pd_with_source(rng, X, n, k, pd_boundary_to(*a, k, false), 3);
    if (!b) continue;
    LabeledPd ab = compose_pd(X, k, *a, *b);

    // (a) boundaries of a composite
    check(pd_boundary_to(ab, k, true) == pd_boundary_to(*a, k, true), "src_k of comp");
    check(pd_boundary_to(ab, k, false) == pd_boundary_to(*b, k, false), "tgt_k of comp");
    for (std::size_t l = k + 1; l < n; ++l) {
      check(pd_boundary_to(ab, l, true) ==
                compose_pd(X, k, pd_boundary_to(*a, l, true), pd_boundary_to(*b, l, true)),
            "src_l of comp distributes");
      check(pd_boundary_to(ab, l, false) ==
                compose_pd(X, k, pd_boundary_to(*a, l, false), pd_boundary_to(*b, l, false)),
            "tgt_l of comp distributes");
    }

    // (b) boundaries of an identity
    check(pd_boundary(identity_pd(*a), true) == *a, "src of identity");
    check(pd_boundary(identity_pd(*a), false) == *a, "tgt of identity");

    // (c) associativity
    if (auto c = random_pd_with_source(rng, X, n, k, pd_boundary_to(*b, k, false), 3)) {
      check(compose_pd(X, k, ab, *c) == compose_pd(X, k, *a, compose_pd(X, k, *b, *c)),
            "associativity");
    }

    // (d) units (in the composable orientation)
    LabeledPd left_unit = iterated_identity(pd_boundary_to(*a, k, true), n - k);
    LabeledPd right_unit = iterated_identity(pd_boundary_to(*a, k, false), n - k);
    check(compose_pd(X, k, left_unit, *a) == *a, "left unit");
    check(compose_pd(X, k, *a, right_unit) == *a, "right unit");

    // (f) nullary exchange
    check(compose_pd(X, k, identity_pd(*a), identity_pd(*b)) == identity_pd(ab),
          "nullary exchange");

    // (e) binary exchange, when a higher direction exists
    if (k + 1 < n) {
      std::uniform_int_distribution<std::size_t> ls(k + 1, n - 1);
      std::size_t l = ls(rng);
      auto c = random_pd_with_source(rng, X, n, l, pd_boundary_to(*a, l, false), 3);
      if (c) {
        auto d = random_pd_with_source(rng, X, n, l, pd_boundary_to(*b, l, false), 3);
        if (d && pd_boundary_to(*c, k, false) == pd_boundary_to(*d, k, true)) {
          LabeledPd cd = compose_pd(X, k, *c, *d);
          check(compose_pd(X, l, ab, cd) ==
                    compose_pd(X, k, compose_pd(X, l, *a, *c), compose_pd(X, l, *b, *d)),
                "binary exchange");
        }
      }
    }
  }
  return rep;
}

SuiteReport run_monad_law_suite(std::size_t budget, std::uint64_t seed) {
  SuiteReport rep;
  Rng rng(seed);
  std::vector<globular::FiniteGlobularSet> pool;
  pool.push_back(terminal_gset(3));
  pool.push_back(globular::standard_globe(3));
  pool.push_back(scheme_of_tree(parse_tree("pd2:[[o,o],[o]]")).gset);

  auto check = [&](bool ok, const std::string& what) {
    ++rep.cases;
    if (!ok) {
      ++rep.failures;
      if (rep.failed.size() < 16) rep.failed.push_back(what);
    }
  };

  std::size_t round = 0;
  while (rep.cases < budget) {
    const globular::FiniteGlobularSet& X = pool[round % pool.size()];
    ++round;
    std::uniform_int_distribution<std::size_t> dims(0, std::min<std::size_t>(3, X.dim()));
    std::size_t n = dims(rng);

    auto p = random_pd(rng, X, n, 3);
    if (!p) continue;
    // unit laws
    check(mu_pd(X, eta_outer(X, *p)).pd == *p, "mu . outer eta = id");
    check(mu_pd(X, map_eta(X, *p)).pd == *p, "mu . inner eta = id");

    // associativity on the eta-expanded three-layer nesting M with
    // M.outer = N.outer and M.inner(q) = map_eta(N.inner(q)): flattening the
    // two inner layers first gives back N, flattening the two outer layers
    // first gives map_eta(mu(N)); both routes must meet at mu(N)
    auto nested = random_nested(rng, X, n, 2);
    if (!nested) continue;
    LabeledPd via_inner = mu_pd(X, *nested).pd;
    LabeledPd via_outer = mu_pd(X, map_eta(X, via_inner)).pd;
    check(via_inner == via_outer, "mu associativity (eta-expanded nesting)");
  }
  return rep;
}

std::vector<PdTree> enumerate_pd(std::size_t dim, std::size_t max_metric) {
  if (dim == 0) return {PdTree{}};
  // enumerate with all widths capped by the metric, then filter by the metric
  std::function<std::vector<PdTree>(std::size_t)> gen = [&](std::size_t d) {
    std::vector<PdTree> out;
    if (d == 0) {
      out.push_back(PdTree{});
      return out;
    }
    std::vector<PdTree> sub = gen(d - 1);
    std::vector<std::vector<PdTree>> seqs{{}};
    for (std::size_t w = 0; w < max_metric; ++w) {
      std::vector<std::vector<PdTree>> next;
      for (const auto& seq : seqs)
        if (seq.size() == w)
          for (const auto& t : sub) {
            auto ext = seq;
            ext.push_back(t);
            next.push_back(std::move(ext));
          }
      for (auto& seq : next) seqs.push_back(std::move(seq));
    }
    for (const auto& seq : seqs) {
      PdTree t;
      t.dim = d;
      t.kids = seq;
      out.push_back(std::move(t));
    }
    return out;
  };
  std::vector<PdTree> all = gen(dim);
  std::vector<PdTree> keep;
  for (auto& t : all) {
    if (t.dim != dim) continue;
    std::size_t metric =
        dim >= 2 ? top_cells(t) + t.kids.size() : t.kids.size();
    if (metric <= max_metric) keep.push_back(std::move(t));
  }
  std::sort(keep.begin(), keep.end(), [&](const PdTree& a, const PdTree& b) {
    auto ma = dim >= 2 ? top_cells(a) + a.kids.size() : a.kids.size();
    auto mb = dim >= 2 ? top_cells(b) + b.kids.size() : b.kids.size();
    if (ma != mb) return ma < mb;
    return show_tree(a) < show_tree(b);
  });
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  return keep;
}

}  // namespace omega::pasting
