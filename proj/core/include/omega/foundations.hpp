#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace omega {

// Error hierarchy shared by all modules.
struct KernelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// A construction was attempted whose declared precondition fails.
struct PreconditionError : KernelError {
  using KernelError::KernelError;
};
// An enumeration guard (height cap, size cap) was exceeded.
struct CapError : KernelError {
  using KernelError::KernelError;
};
// Malformed textual or JSON input.
struct ParseError : KernelError {
  using KernelError::KernelError;
};

namespace foundations {

// ---------------------------------------------------------------------------
// Signatures and first-order terms
// ---------------------------------------------------------------------------

// Operation symbol -> arity. Ordered so every enumeration is deterministic.
using Signature = std::map<std::string, std::size_t>;

struct Term {
  bool is_var = false;
  std::string head;         // variable name or operation symbol
  std::vector<Term> args;   // empty for variables and nullary operations

  friend bool operator==(const Term&, const Term&) = default;
};
bool operator<(const Term& a, const Term& b);

Term var(std::string name);
Term app(std::string op, std::vector<Term> args = {});
std::size_t term_height(const Term& t);
std::string show_term(const Term& t);

// Interpret a term in any algebra given by a variable assignment and an
// operation interpretation.
template <class T>
T fold_term(const Term& t,
            const std::function<T(const std::string&)>& on_var,
            const std::function<T(const std::string&, const std::vector<T>&)>& on_app) {
  if (t.is_var) return on_var(t.head);
  std::vector<T> sub;
  sub.reserve(t.args.size());
  for (const auto& a : t.args) sub.push_back(fold_term<T>(a, on_var, on_app));
  return on_app(t.head, sub);
}

inline constexpr std::size_t kDefaultHeightCap = 6;

// Free-algebra chain over the endofunctor F(S) = base + coproduct of S^arity:
// stage 0 is empty, stage k+1 = base variables plus operations applied to
// stage-k terms. Stage k is exactly the set of terms of height <= k.
// Throws CapError when stages exceeds height_cap.
std::vector<std::vector<Term>> adamek_chain(const Signature& sig,
                                            const std::vector<std::string>& base,
                                            std::size_t stages,
                                            std::size_t height_cap = kDefaultHeightCap);
std::vector<std::size_t> adamek_sizes(const Signature& sig,
                                      const std::vector<std::string>& base,
                                      std::size_t stages,
                                      std::size_t height_cap = kDefaultHeightCap);

// ---------------------------------------------------------------------------
// The list monad on finite sets, and pullback checking
// ---------------------------------------------------------------------------

template <class T>
std::vector<T> list_unit(const T& x) {
  return {x};
}

template <class T>
std::vector<T> list_mult(const std::vector<std::vector<T>>& xss) {
  std::vector<T> out;
  for (const auto& xs : xss) out.insert(out.end(), xs.begin(), xs.end());
  return out;
}

// A function between finite sets {0..dom-1} -> {0..cod-1}.
struct FinFunction {
  std::size_t dom = 0;
  std::size_t cod = 0;
  std::vector<std::size_t> map;  // size dom, entries < cod

  std::size_t operator()(std::size_t i) const { return map.at(i); }
  bool valid() const;
  friend bool operator==(const FinFunction&, const FinFunction&) = default;
};

FinFunction fin_identity(std::size_t n);
FinFunction fin_compose(const FinFunction& g, const FinFunction& f);  // g after f

// Square
//        f
//   P ------> A
//   |         |
// g |         | h
//   v         v
//   B ------> C
//        k
// Returns true when the square commutes and (f,g) maps P bijectively onto
// { (a,b) : h(a) = k(b) }. Brute force over all elements.
bool is_pullback_square(const FinFunction& f, const FinFunction& g,
                        const FinFunction& h, const FinFunction& k);

// ---------------------------------------------------------------------------
// Planar trees (free operad carrier) and operation counting
// ---------------------------------------------------------------------------

struct PlanarTree {
  std::size_t label = 0;                // meaningful at leaves only
  std::vector<PlanarTree> kids;         // empty means leaf

  bool is_leaf() const { return kids.empty(); }
  friend bool operator==(const PlanarTree&, const PlanarTree&) = default;
};
bool operator<(const PlanarTree& a, const PlanarTree& b);

std::size_t leaf_count(const PlanarTree& t);
std::vector<std::size_t> leaves(const PlanarTree& t);
std::size_t tree_height(const PlanarTree& t);  // leaf has height 1

// Replace the leaf with left-to-right index `leaf_index` by `subtree`
// (operadic substitution / grafting).
PlanarTree graft(const PlanarTree& t, std::size_t leaf_index, const PlanarTree& subtree);

// Number of planar trees with exactly n_leaves leaves whose internal nodes
// all have arities drawn from sig. For the single binary operation this is
// the Catalan sequence.
std::size_t count_operations(const Signature& sig, std::size_t n_leaves);

// ---------------------------------------------------------------------------
// Cartesianness suite
// ---------------------------------------------------------------------------

struct CartesianReport {
  std::size_t squares_checked = 0;
  std::size_t failures = 0;
  std::vector<std::string> failed;  // descriptions of failing squares
  bool ok() const { return failures == 0; }
};

// Checks, by brute force, that the naturality squares of the list-monad unit
// and multiplication are pullbacks for every function between sets of size
// <= max_set (lists truncated shape-consistently at length <= max_len), and
// that the leaf-list transformation from planar trees (height <= tree_height,
// node arity <= 2) to lists is cartesian over sets of size <= tree_set.
CartesianReport cartesianness_report(std::size_t max_set = 4, std::size_t max_len = 4,
                                     std::size_t tree_height = 3, std::size_t tree_set = 2);

}  // namespace foundations
}  // namespace omega
