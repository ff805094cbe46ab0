#pragma once

// Atomic decompositions of a partition: recognition, minimality, enumeration,
// the minimal-decomposition count N(pi), the maps that add an atom or relabel
// elements, and the distance built from N.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "partlat/big_count.hpp"
#include "partlat/detail/union_find.hpp"
#include "partlat/error.hpp"
#include "partlat/graph.hpp"
#include "partlat/lattice.hpp"
#include "partlat/limits.hpp"

namespace partlat {

/// A set of distinct atoms together with the partition they join to.
class AtomicDecomposition {
 public:
  /// Throws invalid_argument unless the atoms join to `target`.
  AtomicDecomposition(SetPartition target, std::vector<Atom> atoms)
      : target_(std::move(target)), atoms_(std::move(atoms)) {
    std::sort(atoms_.begin(), atoms_.end());
    atoms_.erase(std::unique(atoms_.begin(), atoms_.end()), atoms_.end());
    if (join_atoms(target_.ground_size(), atoms_) != target_) {
      throw Error(ErrorKind::invalid_argument,
                  "atoms do not join to " + to_string(target_));
    }
  }

  /// The decomposition of whatever the atoms join to.
  static AtomicDecomposition of_atoms(std::size_t n, std::vector<Atom> atoms) {
    SetPartition target = join_atoms(n, atoms);
    return AtomicDecomposition(std::move(target), std::move(atoms));
  }

  std::size_t ground_size() const { return target_.ground_size(); }
  const SetPartition& target() const { return target_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  friend bool operator==(const AtomicDecomposition& l, const AtomicDecomposition& r) {
    return l.target_ == r.target_ && l.atoms_ == r.atoms_;
  }
  friend auto operator<=>(const AtomicDecomposition& l, const AtomicDecomposition& r) {
    if (auto c = l.target_ <=> r.target_; c != 0) return c;
    return l.atoms_ <=> r.atoms_;
  }

 private:
  SetPartition target_;
  std::vector<Atom> atoms_;
};

inline bool is_atomic_decomposition(std::span<const Atom> atoms, const SetPartition& p) {
  return join_atoms(p.ground_size(), atoms) == p;
}

/// True when the atom graph is a forest, i.e. no atom is redundant.
inline bool is_acyclic(std::size_t n, std::span<const Atom> atoms) {
  detail::UnionFind uf(n);
  for (const Atom& a : atoms) {
    if (!uf.unite(a.a, a.b)) return false;
  }
  return true;
}

inline bool is_minimal(const AtomicDecomposition& d) { return is_acyclic(d.ground_size(), d.atoms()); }

struct MinimalEnumeration {
  /// finest(n) has exactly one spanning forest, the empty one. Counting
  /// treats it as "no decomposition" (N(m_X) = 0); enumeration emits it
  /// unless this is cleared.
  bool emit_empty_for_finest = true;
};

/// M(pi) via the spanning forests of G_pi, in lexicographic order.
inline void for_each_minimal_decomposition(
    const SetPartition& p, const std::function<bool(const AtomicDecomposition&)>& visit,
    MinimalEnumeration options = {}, const Limits& limits = {}) {
  if (rank(p) == 0 && !options.emit_empty_for_finest) return;
  for_each_spanning_forest(
      graph_of_partition(p),
      [&](const std::vector<Edge>& forest) { return visit(AtomicDecomposition(p, forest)); },
      limits);
}

inline std::vector<AtomicDecomposition> minimal_decompositions(const SetPartition& p,
                                                               MinimalEnumeration options = {},
                                                               const Limits& limits = {}) {
  std::vector<AtomicDecomposition> out;
  for_each_minimal_decomposition(
      p,
      [&](const AtomicDecomposition& d) {
        out.push_back(d);
        return true;
      },
      options, limits);
  return out;
}

/// Every atomic decomposition of p (minimal or not), ordered by size and then
/// lexicographically. Scans subsets of A(p); more than
/// limits.max_component_edges candidate atoms raises.
inline void for_each_atomic_decomposition(
    const SetPartition& p, const std::function<bool(const AtomicDecomposition&)>& visit,
    const Limits& limits = {}) {
  if (rank(p) == 0) return;
  const auto candidates = atoms_below(p);
  const std::size_t m = candidates.size();
  if (m > limits.max_component_edges) {
    throw Error(ErrorKind::resource_limit,
                std::to_string(m) + " candidate atoms exceed subset-scan ceiling " +
                    std::to_string(limits.max_component_edges));
  }
  std::vector<std::size_t> idx;
  std::vector<Atom> chosen;
  for (std::size_t k = rank(p); k <= m; ++k) {
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      chosen.clear();
      for (std::size_t i : idx) chosen.push_back(candidates[i]);
      if (is_atomic_decomposition(chosen, p)) {
        if (!visit(AtomicDecomposition(p, chosen))) return;
      }
      // next k-combination
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t r = i; r < k; ++r) idx[r] = idx[r - 1] + 1;
    }
  }
}

/// How N treats the finest partition. The empty product in the closed form
/// gives 1; the zero property of N requires 0. The library default is zero.
enum class FinestConvention { zero, empty_product };

/// N(pi) = product over non-singleton blocks of n_i^(n_i - 2).
inline BigCount nmin_closed_form(const SetPartition& p,
                                 FinestConvention convention = FinestConvention::zero) {
  if (rank(p) == 0) return convention == FinestConvention::zero ? 0 : 1;
  BigCount product = 1;
  for (std::size_t size : block_sizes(p)) {
    if (size >= 2) product *= ipow(size, size - 2);
  }
  return product;
}

/// N(pi) by counting spanning forests of G_pi; finest(n) maps to 0.
inline BigCount nmin_oracle(const SetPartition& p, const Limits& limits = {}) {
  if (rank(p) == 0) return 0;
  std::uint64_t count = 0;
  for_each_spanning_forest(
      graph_of_partition(p),
      [&](const std::vector<Edge>&) {
        ++count;
        return true;
      },
      limits);
  return count;
}

struct SizeBounds {
  std::size_t min;  // n - |pi|, the size of every minimal decomposition
  std::size_t max;  // |A(pi)|
};

inline SizeBounds decomposition_size_bounds(const SetPartition& p) {
  std::size_t max = 0;
  for (std::size_t size : block_sizes(p)) max += size * (size - 1) / 2;
  return {rank(p), max};
}

/// Psi_{x_i x_j}: adds an atom bridging two blocks of a minimal decomposition.
inline AtomicDecomposition extend_minimal(const AtomicDecomposition& d, const Atom& bridge) {
  check_atom(bridge, d.ground_size());
  if (!is_minimal(d)) throw Error(ErrorKind::invalid_argument, "decomposition is not minimal");
  if (d.target().same_block(bridge.a, bridge.b)) {
    throw Error(ErrorKind::invalid_bridge, "atom {" + std::to_string(bridge.a) + "," +
                                               std::to_string(bridge.b) +
                                               "} lies inside one block");
  }
  std::vector<Atom> atoms = d.atoms();
  atoms.push_back(bridge);
  return AtomicDecomposition::of_atoms(d.ground_size(), std::move(atoms));
}

namespace detail {

inline void require_permutation(std::span<const Label> sigma, std::size_t n) {
  if (sigma.size() != n) {
    throw Error(ErrorKind::invalid_permutation, "permutation has " + std::to_string(sigma.size()) +
                                                    " entries for n=" + std::to_string(n));
  }
  std::vector<bool> hit(n, false);
  for (Label v : sigma) {
    if (v >= n || hit[v]) throw Error(ErrorKind::invalid_permutation, "not a bijection");
    hit[v] = true;
  }
}

}  // namespace detail

/// The partition whose blocks are the images of p's blocks under sigma.
inline SetPartition relabel_partition(const SetPartition& p, std::span<const Label> sigma) {
  detail::require_permutation(sigma, p.ground_size());
  std::vector<Label> ids(p.ground_size());
  for (Label x = 0; x < p.ground_size(); ++x) ids[sigma[x]] = p.block_of(x);
  return SetPartition::from_labels(ids);
}

/// Psi_sigma: maps each atom {x,y} to {sigma(x), sigma(y)}.
inline AtomicDecomposition relabel(const AtomicDecomposition& d, std::span<const Label> sigma) {
  detail::require_permutation(sigma, d.ground_size());
  std::vector<Atom> atoms;
  atoms.reserve(d.size());
  for (const Atom& a : d.atoms()) atoms.emplace_back(sigma[a.a], sigma[a.b]);
  return AtomicDecomposition(relabel_partition(d.target(), sigma), std::move(atoms));
}

/// d(p, q) = N(p) + N(q) - 2 N(p meet q).
inline BigCount metric_d(const SetPartition& p, const SetPartition& q,
                         FinestConvention convention = FinestConvention::zero) {
  return nmin_closed_form(p, convention) + nmin_closed_form(q, convention) -
         2 * nmin_closed_form(meet(p, q), convention);
}

/// N(p meet q) + N(p join q) - N(p) - N(q). Supermodularity means this is
/// never negative.
inline BigCount supermodularity_gap(const SetPartition& p, const SetPartition& q,
                                    FinestConvention convention = FinestConvention::zero) {
  return nmin_closed_form(meet(p, q), convention) + nmin_closed_form(join(p, q), convention) -
         nmin_closed_form(p, convention) - nmin_closed_form(q, convention);
}

/// Removes one redundant atom: the lexicographically smallest atom outside
/// `protected_atoms` whose removal leaves the join unchanged. nullopt when the
/// atoms are already minimal or every redundant atom is protected.
inline std::optional<std::vector<Atom>> remove_redundant_atom(
    std::size_t n, std::vector<Atom> atoms, std::span<const Atom> protected_atoms) {
  std::sort(atoms.begin(), atoms.end());
  const SetPartition target = join_atoms(n, atoms);
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (std::find(protected_atoms.begin(), protected_atoms.end(), atoms[i]) !=
        protected_atoms.end()) {
      continue;
    }
    std::vector<Atom> rest = atoms;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (join_atoms(n, rest) == target) return rest;
  }
  return std::nullopt;
}

/// One step of the chain map used for supermodularity: add `atom`, and if that
/// closes a cycle drop the smallest redundant atom not in `protected_atoms`.
inline std::vector<Atom> add_and_reduce(std::size_t n, std::vector<Atom> atoms, const Atom& atom,
                                        std::span<const Atom> protected_atoms) {
  atoms.push_back(atom);
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  if (is_acyclic(n, atoms)) return atoms;
  if (auto reduced = remove_redundant_atom(n, atoms, protected_atoms)) return *reduced;
  return atoms;
}

/// "0-1,1-2,4-5"
inline std::string atom_list_to_string(std::span<const Atom> atoms) {
  return format_edge_list(std::vector<Atom>(atoms.begin(), atoms.end()), ',');
}

}  // namespace partlat
