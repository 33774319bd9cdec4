#include "omega/globular.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "json.hpp"

namespace omega::globular {

std::size_t FiniteGlobularSet::total_cells() const {
  return std::accumulate(card.begin(), card.end(), std::size_t{0});
}

bool FiniteGlobularSet::valid() const {
  std::size_t levels = card.empty() ? 0 : card.size() - 1;
  if (src.size() != levels || tgt.size() != levels) return false;
  for (std::size_t d = 1; d <= levels; ++d) {
    if (src[d - 1].size() != card[d] || tgt[d - 1].size() != card[d]) return false;
    for (std::size_t i = 0; i < card[d]; ++i)
      if (src[d - 1][i] >= card[d - 1] || tgt[d - 1][i] >= card[d - 1]) return false;
  }
  for (std::size_t d = 2; d <= levels; ++d) {
    for (std::size_t i = 0; i < card[d]; ++i) {
      std::size_t s = src[d - 1][i], t = tgt[d - 1][i];
      if (src[d - 2][s] != src[d - 2][t] || tgt[d - 2][s] != tgt[d - 2][t]) return false;
    }
  }
  return true;
}

bool map_valid(const FiniteGlobularSet& X, const FiniteGlobularSet& Y, const GlobularMap& f) {
  if (f.level.size() != X.card.size()) return false;
  for (std::size_t d = 0; d < X.card.size(); ++d) {
    if (f.level[d].size() != X.card[d]) return false;
    for (std::size_t i = 0; i < X.card[d]; ++i)
      if (f.level[d][i] >= Y.cells(d)) return false;
  }
  for (std::size_t d = 1; d < X.card.size(); ++d) {
    for (std::size_t i = 0; i < X.card[d]; ++i) {
      if (Y.src_of(d, f(d, i)) != f(d - 1, X.src_of(d, i))) return false;
      if (Y.tgt_of(d, f(d, i)) != f(d - 1, X.tgt_of(d, i))) return false;
    }
  }
  return true;
}

GlobularMap identity_map(const FiniteGlobularSet& X) {
  GlobularMap f;
  f.level.resize(X.card.size());
  for (std::size_t d = 0; d < X.card.size(); ++d) {
    f.level[d].resize(X.card[d]);
    std::iota(f.level[d].begin(), f.level[d].end(), 0);
  }
  return f;
}

GlobularMap compose_maps(const FiniteGlobularSet& X, const FiniteGlobularSet&,
                         const FiniteGlobularSet&, const GlobularMap& g, const GlobularMap& f) {
  GlobularMap h;
  h.level.resize(X.card.size());
  for (std::size_t d = 0; d < X.card.size(); ++d) {
    h.level[d].reserve(X.card[d]);
    for (std::size_t i = 0; i < X.card[d]; ++i) h.level[d].push_back(g(d, f(d, i)));
  }
  return h;
}

FiniteGlobularSet standard_globe(std::size_t n) {
  FiniteGlobularSet X;
  X.card.assign(n + 1, 2);
  X.card[n] = 1;
  X.src.resize(n);
  X.tgt.resize(n);
  for (std::size_t d = 1; d <= n; ++d) {
    std::size_t count = X.card[d];
    for (std::size_t i = 0; i < count; ++i) {
      X.src[d - 1].push_back(0);
      X.tgt[d - 1].push_back(1);
    }
  }
  return X;
}

FiniteGlobularSet boundary_sphere(std::size_t n) {
  FiniteGlobularSet X;
  if (n == 0) return X;  // empty globular set
  X.card.assign(n, 2);
  X.src.resize(n - 1);
  X.tgt.resize(n - 1);
  for (std::size_t d = 1; d < n; ++d) {
    X.src[d - 1] = {0, 0};
    X.tgt[d - 1] = {1, 1};
  }
  return X;
}

GlobularMap sphere_into_globe(std::size_t n) {
  GlobularMap f;
  f.level.assign(n, {0, 1});
  return f;
}

FiniteGlobularSet disjoint_union(const FiniteGlobularSet& X, const FiniteGlobularSet& Y,
                                 GlobularMap* inl, GlobularMap* inr) {
  FiniteGlobularSet U;
  std::size_t levels = std::max(X.card.size(), Y.card.size());
  U.card.resize(levels, 0);
  for (std::size_t d = 0; d < levels; ++d) U.card[d] = X.cells(d) + Y.cells(d);
  if (levels > 0) {
    U.src.resize(levels - 1);
    U.tgt.resize(levels - 1);
    for (std::size_t d = 1; d < levels; ++d) {
      for (std::size_t i = 0; i < X.cells(d); ++i) {
        U.src[d - 1].push_back(X.src_of(d, i));
        U.tgt[d - 1].push_back(X.tgt_of(d, i));
      }
      for (std::size_t i = 0; i < Y.cells(d); ++i) {
        U.src[d - 1].push_back(X.cells(d - 1) + Y.src_of(d, i));
        U.tgt[d - 1].push_back(X.cells(d - 1) + Y.tgt_of(d, i));
      }
    }
  }
  if (inl) {
    inl->level.resize(X.card.size());
    for (std::size_t d = 0; d < X.card.size(); ++d) {
      inl->level[d].resize(X.card[d]);
      std::iota(inl->level[d].begin(), inl->level[d].end(), 0);
    }
  }
  if (inr) {
    inr->level.resize(Y.card.size());
    for (std::size_t d = 0; d < Y.card.size(); ++d) {
      inr->level[d].resize(Y.card[d]);
      std::iota(inr->level[d].begin(), inr->level[d].end(), X.cells(d));
    }
  }
  return U;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);  // keep the smallest index as representative
    parent[b] = a;
  }
};

}  // namespace

FiniteGlobularSet glue(const FiniteGlobularSet& X, const FiniteGlobularSet& Y,
                       const FiniteGlobularSet& Z, const GlobularMap& f, const GlobularMap& g,
                       GlobularMap* inl, GlobularMap* inr) {
  if (!map_valid(Z, X, f) || !map_valid(Z, Y, g))
    throw PreconditionError("glue: span maps are not globular");
  std::size_t levels = std::max(X.card.size(), Y.card.size());
  // per-dimension quotient of the disjoint union (X cells first)
  std::vector<UnionFind> uf;
  uf.reserve(levels);
  for (std::size_t d = 0; d < levels; ++d) uf.emplace_back(X.cells(d) + Y.cells(d));
  for (std::size_t d = 0; d < Z.card.size(); ++d)
    for (std::size_t i = 0; i < Z.card[d]; ++i) uf[d].unite(f(d, i), X.cells(d) + g(d, i));

  // number the classes by smallest member
  std::vector<std::vector<std::size_t>> newid(levels);
  FiniteGlobularSet P;
  P.card.resize(levels, 0);
  for (std::size_t d = 0; d < levels; ++d) {
    std::size_t n = X.cells(d) + Y.cells(d);
    newid[d].assign(n, 0);
    for (std::size_t i = 0; i < n; ++i)
      if (uf[d].find(i) == i) newid[d][i] = P.card[d]++;
    for (std::size_t i = 0; i < n; ++i) newid[d][i] = newid[d][uf[d].find(i)];
  }
  if (levels > 0) {
    P.src.resize(levels - 1);
    P.tgt.resize(levels - 1);
    for (std::size_t d = 1; d < levels; ++d) {
      P.src[d - 1].assign(P.card[d], static_cast<std::size_t>(-1));
      P.tgt[d - 1].assign(P.card[d], static_cast<std::size_t>(-1));
      auto put = [&](std::size_t cell, std::size_t s, std::size_t t) {
        std::size_t c = newid[d][cell];
        if (P.src[d - 1][c] != static_cast<std::size_t>(-1) &&
            (P.src[d - 1][c] != s || P.tgt[d - 1][c] != t))
          throw PreconditionError("glue: inconsistent boundaries in pushout");
        P.src[d - 1][c] = s;
        P.tgt[d - 1][c] = t;
      };
      for (std::size_t i = 0; i < X.cells(d); ++i)
        put(i, newid[d - 1][X.src_of(d, i)], newid[d - 1][X.tgt_of(d, i)]);
      for (std::size_t i = 0; i < Y.cells(d); ++i)
        put(X.cells(d) + i, newid[d - 1][X.cells(d - 1) + Y.src_of(d, i)],
            newid[d - 1][X.cells(d - 1) + Y.tgt_of(d, i)]);
    }
  }
  if (inl) {
    inl->level.resize(X.card.size());
    for (std::size_t d = 0; d < X.card.size(); ++d) {
      inl->level[d].resize(X.card[d]);
      for (std::size_t i = 0; i < X.card[d]; ++i) inl->level[d][i] = newid[d][i];
    }
  }
  if (inr) {
    inr->level.resize(Y.card.size());
    for (std::size_t d = 0; d < Y.card.size(); ++d) {
      inr->level[d].resize(Y.card[d]);
      for (std::size_t i = 0; i < Y.card[d]; ++i) inr->level[d][i] = newid[d][X.cells(d) + i];
    }
  }
  return P;
}

namespace {

void enumerate_maps_rec(const FiniteGlobularSet& X, const FiniteGlobularSet& Y, std::size_t d,
                        std::size_t i, GlobularMap& acc, std::vector<GlobularMap>& out) {
  if (d == X.card.size()) {
    out.push_back(acc);
    return;
  }
  if (i == X.card[d]) {
    enumerate_maps_rec(X, Y, d + 1, 0, acc, out);
    return;
  }
  for (std::size_t y = 0; y < Y.cells(d); ++y) {
    if (d >= 1) {
      if (Y.src_of(d, y) != acc.level[d - 1][X.src_of(d, i)]) continue;
      if (Y.tgt_of(d, y) != acc.level[d - 1][X.tgt_of(d, i)]) continue;
    }
    acc.level[d].push_back(y);
    enumerate_maps_rec(X, Y, d, i + 1, acc, out);
    acc.level[d].pop_back();
  }
}

}  // namespace

std::vector<GlobularMap> enumerate_globular_maps(const FiniteGlobularSet& X,
                                                 const FiniteGlobularSet& Y) {
  std::vector<GlobularMap> out;
  GlobularMap acc;
  acc.level.resize(X.card.size());
  enumerate_maps_rec(X, Y, 0, 0, acc, out);
  return out;
}

std::size_t hom_count(const FiniteGlobularSet& X, const FiniteGlobularSet& Y) {
  return enumerate_globular_maps(X, Y).size();
}

std::vector<std::pair<std::size_t, std::size_t>> parallel_pairs(const FiniteGlobularSet& X,
                                                                std::size_t n) {
  if (n == 0) throw PreconditionError("parallel_pairs: n must be >= 1");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t d = n - 1;
  for (std::size_t a = 0; a < X.cells(d); ++a)
    for (std::size_t b = 0; b < X.cells(d); ++b) {
      if (d >= 1 && (X.src_of(d, a) != X.src_of(d, b) || X.tgt_of(d, a) != X.tgt_of(d, b)))
        continue;
      out.emplace_back(a, b);
    }
  return out;
}

bool check_representability(const FiniteGlobularSet& X, std::size_t n) {
  auto maps = enumerate_globular_maps(boundary_sphere(n), X);
  auto pairs = parallel_pairs(X, n);
  std::set<std::pair<std::size_t, std::size_t>> images;
  for (const auto& f : maps) {
    if (n >= 1 && !images.insert({f(n - 1, 0), f(n - 1, 1)}).second) return false;  // injective
  }
  if (images.size() != maps.size()) return false;
  std::set<std::pair<std::size_t, std::size_t>> want(pairs.begin(), pairs.end());
  return images == want;
}

namespace {

void enumerate_profiles(std::size_t max_total, std::size_t max_dim,
                        std::vector<std::size_t>& acc, std::size_t used,
                        std::vector<std::vector<std::size_t>>& out) {
  if (!acc.empty() && acc.back() > 0) out.push_back(acc);
  if (acc.size() > max_dim) return;
  for (std::size_t c = acc.empty() ? 1 : 0; used + c <= max_total; ++c) {
    acc.push_back(c);
    enumerate_profiles(max_total, max_dim, acc, used + c, out);
    acc.pop_back();
  }
}

void enumerate_boundaries(const std::vector<std::size_t>& profile, std::size_t d, std::size_t i,
                          FiniteGlobularSet& acc, std::vector<FiniteGlobularSet>& out) {
  if (d == profile.size()) {
    out.push_back(acc);
    return;
  }
  if (i == profile[d]) {
    enumerate_boundaries(profile, d + 1, 0, acc, out);
    return;
  }
  for (std::size_t s = 0; s < profile[d - 1]; ++s)
    for (std::size_t t = 0; t < profile[d - 1]; ++t) {
      if (d >= 2) {
        if (acc.src[d - 2][s] != acc.src[d - 2][t] || acc.tgt[d - 2][s] != acc.tgt[d - 2][t])
          continue;
      }
      acc.src[d - 1].push_back(s);
      acc.tgt[d - 1].push_back(t);
      enumerate_boundaries(profile, d, i + 1, acc, out);
      acc.src[d - 1].pop_back();
      acc.tgt[d - 1].pop_back();
    }
}

}  // namespace

std::vector<FiniteGlobularSet> enumerate_globular_sets(std::size_t max_total,
                                                       std::size_t max_dim) {
  std::vector<std::vector<std::size_t>> profiles;
  std::vector<std::size_t> acc;
  enumerate_profiles(max_total, max_dim, acc, 0, profiles);
  // include the empty globular set
  std::vector<FiniteGlobularSet> out;
  out.emplace_back();
  for (const auto& p : profiles) {
    FiniteGlobularSet base;
    base.card = p;
    base.src.resize(p.size() - 1);
    base.tgt.resize(p.size() - 1);
    enumerate_boundaries(p, 1, 0, base, out);
  }
  return out;
}

std::string to_json(const FiniteGlobularSet& X) {
  nlohmann::json j;
  j["dims"] = X.card;
  j["src"] = X.src;
  j["tgt"] = X.tgt;
  return j.dump();
}

FiniteGlobularSet globular_set_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("globular set JSON: ") + e.what());
  }
  FiniteGlobularSet X;
  try {
    X.card = j.at("dims").get<std::vector<std::size_t>>();
    X.src = j.at("src").get<std::vector<std::vector<std::size_t>>>();
    X.tgt = j.at("tgt").get<std::vector<std::vector<std::size_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("globular set JSON: ") + e.what());
  }
  if (!X.valid()) throw ParseError("globular set JSON: not a valid globular set");
  return X;
}

RepresentabilityReport run_representability_sweep(std::size_t max_total, std::size_t max_dim,
                                                  std::size_t max_n) {
  RepresentabilityReport rep;
  for (const auto& X : enumerate_globular_sets(max_total, max_dim)) {
    ++rep.sets_checked;
    for (std::size_t n = 1; n <= max_n; ++n) {
      ++rep.squares_checked;
      if (!check_representability(X, n)) ++rep.failures;
    }
  }
  return rep;
}

}  // namespace omega::globular
