#include "omega/foundations.hpp"

#include <algorithm>
#include <set>

namespace omega::foundations {

bool operator<(const Term& a, const Term& b) {
  if (a.is_var != b.is_var) return b.is_var;  // operations sort before variables
  if (a.head != b.head) return a.head < b.head;
  return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(),
                                      b.args.end());
}

Term var(std::string name) {
  Term t;
  t.is_var = true;
  t.head = std::move(name);
  return t;
}

Term app(std::string op, std::vector<Term> args) {
  Term t;
  t.is_var = false;
  t.head = std::move(op);
  t.args = std::move(args);
  return t;
}

std::size_t term_height(const Term& t) {
  std::size_t h = 0;
  for (const auto& a : t.args) h = std::max(h, term_height(a));
  return h + 1;
}

std::string show_term(const Term& t) {
  if (t.is_var || t.args.empty()) return t.head;
  std::string s = t.head + "(";
  for (std::size_t i = 0; i < t.args.size(); ++i) {
    if (i) s += ",";
    s += show_term(t.args[i]);
  }
  return s + ")";
}

namespace {

// All tuples (t1..tk) with ti drawn from pool, streamed into sink.
void for_each_tuple(const std::vector<Term>& pool, std::size_t k,
                    std::vector<Term>& acc,
                    const std::function<void(const std::vector<Term>&)>& sink) {
  if (k == 0) {
    sink(acc);
    return;
  }
  for (const auto& t : pool) {
    acc.push_back(t);
    for_each_tuple(pool, k - 1, acc, sink);
    acc.pop_back();
  }
}

}  // namespace

std::vector<std::vector<Term>> adamek_chain(const Signature& sig,
                                            const std::vector<std::string>& base,
                                            std::size_t stages,
                                            std::size_t height_cap) {
  if (stages > height_cap) throw CapError("adamek_chain: height cap exceeded");
  std::vector<std::vector<Term>> chain;
  chain.emplace_back();  // stage 0: initial object, no terms
  for (std::size_t k = 1; k <= stages; ++k) {
    const std::vector<Term>& prev = chain.back();
    std::set<Term> stage;
    for (const auto& v : base) stage.insert(var(v));
    for (const auto& [op, arity] : sig) {
      std::vector<Term> acc;
      for_each_tuple(prev, arity, acc, [&](const std::vector<Term>& args) {
        stage.insert(app(op, args));
      });
    }
    chain.emplace_back(stage.begin(), stage.end());
  }
  return chain;
}

std::vector<std::size_t> adamek_sizes(const Signature& sig,
                                      const std::vector<std::string>& base,
                                      std::size_t stages,
                                      std::size_t height_cap) {
  if (stages > height_cap) throw CapError("adamek_sizes: height cap exceeded");
  std::vector<std::size_t> sizes{0};
  for (std::size_t k = 1; k <= stages; ++k) {
    std::size_t next = base.size();
    for (const auto& [op, arity] : sig) {
      std::size_t pw = 1;
      for (std::size_t i = 0; i < arity; ++i) pw *= sizes.back();
      next += pw;
    }
    sizes.push_back(next);
  }
  return sizes;
}

// ---------------------------------------------------------------------------
// FinFunction
// ---------------------------------------------------------------------------

bool FinFunction::valid() const {
  if (map.size() != dom) return false;
  return std::all_of(map.begin(), map.end(), [&](std::size_t v) { return v < cod; });
}

FinFunction fin_identity(std::size_t n) {
  FinFunction f;
  f.dom = f.cod = n;
  f.map.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.map[i] = i;
  return f;
}

FinFunction fin_compose(const FinFunction& g, const FinFunction& f) {
  if (f.cod != g.dom) throw PreconditionError("fin_compose: domain mismatch");
  FinFunction h;
  h.dom = f.dom;
  h.cod = g.cod;
  h.map.reserve(f.dom);
  for (std::size_t i = 0; i < f.dom; ++i) h.map.push_back(g(f(i)));
  return h;
}

bool is_pullback_square(const FinFunction& f, const FinFunction& g,
                        const FinFunction& h, const FinFunction& k) {
  if (!f.valid() || !g.valid() || !h.valid() || !k.valid()) return false;
  if (f.dom != g.dom || f.cod != h.dom || g.cod != k.dom || h.cod != k.cod) return false;
  // commute
  for (std::size_t p = 0; p < f.dom; ++p)
    if (h(f(p)) != k(g(p))) return false;
  // (f,g) injective
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t p = 0; p < f.dom; ++p)
    if (!seen.insert({f(p), g(p)}).second) return false;
  // |P| equals the size of the fibre product { (a,b) : h(a) = k(b) }
  std::vector<std::size_t> ha(h.cod, 0), kb(h.cod, 0);
  for (std::size_t a = 0; a < h.dom; ++a) ++ha[h(a)];
  for (std::size_t b = 0; b < k.dom; ++b) ++kb[k(b)];
  std::size_t fibre = 0;
  for (std::size_t c = 0; c < h.cod; ++c) fibre += ha[c] * kb[c];
  return fibre == f.dom;
}

// ---------------------------------------------------------------------------
// Planar trees
// ---------------------------------------------------------------------------

bool operator<(const PlanarTree& a, const PlanarTree& b) {
  if (a.kids.size() != b.kids.size()) return a.kids.size() < b.kids.size();
  if (a.is_leaf()) return a.label < b.label;
  for (std::size_t i = 0; i < a.kids.size(); ++i) {
    if (a.kids[i] < b.kids[i]) return true;
    if (b.kids[i] < a.kids[i]) return false;
  }
  return false;
}

std::size_t leaf_count(const PlanarTree& t) {
  if (t.is_leaf()) return 1;
  std::size_t n = 0;
  for (const auto& k : t.kids) n += leaf_count(k);
  return n;
}

std::vector<std::size_t> leaves(const PlanarTree& t) {
  if (t.is_leaf()) return {t.label};
  std::vector<std::size_t> out;
  for (const auto& k : t.kids) {
    auto sub = leaves(k);
    out.insert(out.end(), sub.begin(), sub.end());
  }
  return out;
}

std::size_t tree_height(const PlanarTree& t) {
  std::size_t h = 0;
  for (const auto& k : t.kids) h = std::max(h, tree_height(k));
  return h + 1;
}

PlanarTree graft(const PlanarTree& t, std::size_t leaf_index, const PlanarTree& subtree) {
  if (leaf_index >= leaf_count(t)) throw PreconditionError("graft: leaf index out of range");
  if (t.is_leaf()) return subtree;
  PlanarTree out;
  out.kids.reserve(t.kids.size());
  std::size_t offset = leaf_index;
  for (const auto& k : t.kids) {
    std::size_t n = leaf_count(k);
    if (offset < n) {
      out.kids.push_back(graft(k, offset, subtree));
      offset = static_cast<std::size_t>(-1);  // done; copy the rest verbatim
    } else {
      out.kids.push_back(k);
      if (offset != static_cast<std::size_t>(-1)) offset -= n;
    }
  }
  return out;
}

std::size_t count_operations(const Signature& sig, std::size_t n_leaves) {
  for (const auto& [op, arity] : sig)
    if (arity < 2)
      throw PreconditionError("count_operations: arities below 2 give infinite counts");
  // ways[n] = trees with exactly n leaves; internal node arities drawn from sig
  std::vector<std::size_t> ways(n_leaves + 1, 0);
  if (n_leaves == 0) return 0;
  ways[1] = 1;
  for (std::size_t n = 2; n <= n_leaves; ++n) {
    for (const auto& [op, arity] : sig) {
      // sum over compositions of n into `arity` positive parts
      std::function<std::size_t(std::size_t, std::size_t)> comp =
          [&](std::size_t rem, std::size_t parts) -> std::size_t {
        if (parts == 1) return ways[rem];
        std::size_t total = 0;
        for (std::size_t first = 1; first + (parts - 1) <= rem; ++first)
          total += ways[first] * comp(rem - first, parts - 1);
        return total;
      };
      ways[n] += comp(n, arity);
    }
  }
  return ways[n_leaves];
}

// ---------------------------------------------------------------------------
// Cartesianness suite
// ---------------------------------------------------------------------------

namespace {

using List = std::vector<std::size_t>;
using ListList = std::vector<List>;

// all lists over {0..n-1} of length <= max_len, deterministic order
std::vector<List> enum_lists(std::size_t n, std::size_t max_len) {
  std::vector<List> out{{}};
  std::size_t start = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = start; i < end; ++i)
      for (std::size_t x = 0; x < n; ++x) {
        List l = out[i];
        l.push_back(x);
        out.push_back(std::move(l));
      }
    start = end;
  }
  std::sort(out.begin(), out.end());
  return out;
}

// lists of lists with outer length <= max_len and total flattened length
// <= max_len (shape-closed truncation: mu lands inside the list bound)
std::vector<ListList> enum_list_lists(std::size_t n, std::size_t max_len) {
  std::vector<List> inner = enum_lists(n, max_len);
  std::vector<ListList> out;
  std::function<void(ListList&, std::size_t)> go = [&](ListList& acc, std::size_t used) {
    out.push_back(acc);
    if (acc.size() == max_len) return;
    for (const auto& l : inner) {
      if (used + l.size() > max_len) continue;
      acc.push_back(l);
      go(acc, used + l.size());
      acc.pop_back();
    }
  };
  ListList acc;
  go(acc, 0);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <class T>
std::map<T, std::size_t> index_of(const std::vector<T>& xs) {
  std::map<T, std::size_t> m;
  for (std::size_t i = 0; i < xs.size(); ++i) m.emplace(xs[i], i);
  return m;
}

// planar trees over labels {0..n-1}, height <= max_h, node arity 1 or 2
std::vector<PlanarTree> enum_trees(std::size_t n, std::size_t max_h) {
  if (max_h == 0) return {};
  std::vector<PlanarTree> prev = enum_trees(n, max_h - 1);
  std::vector<PlanarTree> out;
  for (std::size_t x = 0; x < n; ++x) {
    PlanarTree leaf;
    leaf.label = x;
    out.push_back(leaf);
  }
  for (const auto& a : prev) {
    PlanarTree one;
    one.kids = {a};
    out.push_back(one);
    for (const auto& b : prev) {
      PlanarTree two;
      two.kids = {a, b};
      out.push_back(two);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

PlanarTree map_tree(const PlanarTree& t, const FinFunction& u) {
  PlanarTree out = t;
  if (out.is_leaf()) {
    out.label = u(t.label);
    return out;
  }
  for (auto& k : out.kids) k = map_tree(k, u);
  return out;
}

}  // namespace

CartesianReport cartesianness_report(std::size_t max_set, std::size_t max_len,
                                     std::size_t tree_height_cap, std::size_t tree_set) {
  CartesianReport rep;
  auto record = [&](bool ok, const std::string& what) {
    ++rep.squares_checked;
    if (!ok) {
      ++rep.failures;
      rep.failed.push_back(what);
    }
  };

  // every function u between sets of size <= max_set
  for (std::size_t nx = 0; nx <= max_set; ++nx) {
    for (std::size_t ny = 0; ny <= max_set; ++ny) {
      if (nx > 0 && ny == 0) continue;  // no functions into the empty set
      std::vector<List> lx = enum_lists(nx, max_len);
      std::vector<List> ly = enum_lists(ny, max_len);
      std::vector<ListList> llx = enum_list_lists(nx, max_len);
      std::vector<ListList> lly = enum_list_lists(ny, max_len);
      auto lx_idx = index_of(lx);
      auto ly_idx = index_of(ly);
      auto lly_idx = index_of(lly);

      std::vector<std::size_t> u_map(nx, 0);
      bool more = true;
      while (more) {
        FinFunction u{nx, ny, u_map};
        auto apply_u = [&](const List& l) {
          List out = l;
          for (auto& x : out) x = u(x);
          return out;
        };
        // eta naturality square: X --eta--> LX, X --u--> Y, Lu, eta_Y
        FinFunction eta_x{nx, lx.size(), {}};
        for (std::size_t x = 0; x < nx; ++x) eta_x.map.push_back(lx_idx.at(List{x}));
        FinFunction eta_y{ny, ly.size(), {}};
        for (std::size_t y = 0; y < ny; ++y) eta_y.map.push_back(ly_idx.at(List{y}));
        FinFunction lu{lx.size(), ly.size(), {}};
        for (const auto& l : lx) lu.map.push_back(ly_idx.at(apply_u(l)));
        record(is_pullback_square(eta_x, u, lu, eta_y),
               "eta square |X|=" + std::to_string(nx) + " |Y|=" + std::to_string(ny));

        // mu naturality square: LLX --mu--> LX, LLX --LLu--> LLY, Lu, mu_Y
        FinFunction mu_x{llx.size(), lx.size(), {}};
        for (const auto& ll : llx) mu_x.map.push_back(lx_idx.at(list_mult(ll)));
        FinFunction mu_y{lly.size(), ly.size(), {}};
        for (const auto& ll : lly) mu_y.map.push_back(ly_idx.at(list_mult(ll)));
        FinFunction llu{llx.size(), lly.size(), {}};
        for (const auto& ll : llx) {
          ListList mapped = ll;
          for (auto& l : mapped) l = apply_u(l);
          llu.map.push_back(lly_idx.at(mapped));
        }
        record(is_pullback_square(mu_x, llu, lu, mu_y),
               "mu square |X|=" + std::to_string(nx) + " |Y|=" + std::to_string(ny));

        // next function
        more = false;
        for (std::size_t i = 0; i < nx; ++i) {
          if (++u_map[i] < ny) {
            more = true;
            break;
          }
          u_map[i] = 0;
        }
      }
    }
  }

  // leaf-list transformation squares over small sets of trees
  std::size_t tree_list_len = 1;
  for (std::size_t i = 1; i < tree_height_cap; ++i) tree_list_len *= 2;  // max leaves, arity 2
  for (std::size_t nx = 0; nx <= tree_set; ++nx) {
    for (std::size_t ny = 0; ny <= tree_set; ++ny) {
      if (nx > 0 && ny == 0) continue;
      std::vector<PlanarTree> tx = enum_trees(nx, tree_height_cap);
      std::vector<PlanarTree> ty = enum_trees(ny, tree_height_cap);
      std::vector<List> lx = enum_lists(nx, tree_list_len);
      std::vector<List> ly = enum_lists(ny, tree_list_len);
      auto lx_idx = index_of(lx);
      auto ly_idx = index_of(ly);
      auto ty_idx = index_of(ty);

      std::vector<std::size_t> u_map(nx, 0);
      bool more = true;
      while (more) {
        FinFunction u{nx, ny, u_map};
        FinFunction leaves_x{tx.size(), lx.size(), {}};
        for (const auto& t : tx) leaves_x.map.push_back(lx_idx.at(leaves(t)));
        FinFunction leaves_y{ty.size(), ly.size(), {}};
        for (const auto& t : ty) leaves_y.map.push_back(ly_idx.at(leaves(t)));
        FinFunction tu{tx.size(), ty.size(), {}};
        for (const auto& t : tx) tu.map.push_back(ty_idx.at(map_tree(t, u)));
        FinFunction lu{lx.size(), ly.size(), {}};
        for (const auto& l : lx) {
          List out = l;
          for (auto& x : out) x = u(x);
          lu.map.push_back(ly_idx.at(out));
        }
        record(is_pullback_square(leaves_x, tu, lu, leaves_y),
               "leaf square |X|=" + std::to_string(nx) + " |Y|=" + std::to_string(ny));

        more = false;
        for (std::size_t i = 0; i < nx; ++i) {
          if (++u_map[i] < ny) {
            more = true;
            break;
          }
          u_map[i] = 0;
        }
      }
    }
  }
  return rep;
}

}  // namespace omega::foundations
