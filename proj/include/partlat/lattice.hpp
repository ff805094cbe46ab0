#pragma once

// Set partitions of {0..n-1} and the refinement lattice they form.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "partlat/detail/union_find.hpp"
#include "partlat/error.hpp"
#include "partlat/limits.hpp"

namespace partlat {

using Label = std::uint32_t;

/// The atom whose only non-singleton block is {a, b}. Stored with a < b.
struct Atom {
  Label a = 0;
  Label b = 1;

  Atom() = default;
  Atom(Label x, Label y) : a(std::min(x, y)), b(std::max(x, y)) {
    if (x == y) throw Error(ErrorKind::invalid_atom, "atom endpoints must differ");
  }

  bool touches(Label v) const { return a == v || b == v; }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend auto operator<=>(const Atom&, const Atom&) = default;
};

inline void check_atom(const Atom& atom, std::size_t n) {
  if (atom.b >= n) {
    throw Error(ErrorKind::invalid_atom, "atom {" + std::to_string(atom.a) + "," +
                                             std::to_string(atom.b) + "} out of range for n=" +
                                             std::to_string(n));
  }
}

/// A partition in canonical form: blocks sorted by minimum element, elements
/// ascending. The restricted growth string (block index per element) is the
/// identity of the partition; equality, ordering and hashing all use it.
class SetPartition {
 public:
  /// Canonicalizes an arbitrary block labelling (element -> any block id).
  static SetPartition from_labels(std::span<const Label> block_of) {
    if (block_of.empty()) throw Error(ErrorKind::invalid_ground_set, "n must be at least 1");
    SetPartition p;
    p.rgs_.resize(block_of.size());
    std::vector<std::pair<Label, Label>> seen;  // (input id, canonical id)
    for (std::size_t x = 0; x < block_of.size(); ++x) {
      auto it = std::find_if(seen.begin(), seen.end(),
                             [&](const auto& s) { return s.first == block_of[x]; });
      Label id;
      if (it == seen.end()) {
        id = static_cast<Label>(seen.size());
        seen.emplace_back(block_of[x], id);
        p.blocks_.emplace_back();
      } else {
        id = it->second;
      }
      p.rgs_[x] = id;
      p.blocks_[id].push_back(static_cast<Label>(x));
    }
    return p;
  }

  /// Validates that `blocks` is a partition of {0..n-1} and canonicalizes it.
  static SetPartition from_blocks(std::size_t n, const std::vector<std::vector<Label>>& blocks) {
    if (n == 0) throw Error(ErrorKind::invalid_ground_set, "n must be at least 1");
    constexpr Label unset = ~Label{0};
    std::vector<Label> owner(n, unset);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      if (blocks[i].empty()) throw Error(ErrorKind::invalid_argument, "empty block");
      for (Label x : blocks[i]) {
        if (x >= n) {
          throw Error(ErrorKind::invalid_argument,
                      "element " + std::to_string(x) + " out of range for n=" + std::to_string(n));
        }
        if (owner[x] != unset) {
          throw Error(ErrorKind::invalid_argument, "element " + std::to_string(x) + " repeated");
        }
        owner[x] = static_cast<Label>(i);
      }
    }
    for (std::size_t x = 0; x < n; ++x) {
      if (owner[x] == unset) {
        throw Error(ErrorKind::invalid_argument, "element " + std::to_string(x) + " missing");
      }
    }
    return from_labels(owner);
  }

  std::size_t ground_size() const { return rgs_.size(); }
  std::size_t block_count() const { return blocks_.size(); }
  const std::vector<std::vector<Label>>& blocks() const { return blocks_; }
  std::span<const Label> rgs() const { return rgs_; }
  Label block_of(Label x) const { return rgs_[x]; }
  bool same_block(Label x, Label y) const { return rgs_[x] == rgs_[y]; }

  friend bool operator==(const SetPartition& l, const SetPartition& r) { return l.rgs_ == r.rgs_; }
  friend auto operator<=>(const SetPartition& l, const SetPartition& r) {
    if (auto c = l.rgs_.size() <=> r.rgs_.size(); c != 0) return c;
    return l.rgs_ <=> r.rgs_;
  }

 private:
  SetPartition() = default;

  std::vector<Label> rgs_;
  std::vector<std::vector<Label>> blocks_;
};

struct SetPartitionHash {
  std::size_t operator()(const SetPartition& p) const noexcept {
    std::size_t h = p.ground_size();
    for (Label v : p.rgs()) h = h * 1000003u ^ v;
    return h;
  }
};

namespace detail {

inline void require_ground_size(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_ground_set, "n must be at least 1");
}

inline void require_same_ground(const SetPartition& p, const SetPartition& q) {
  if (p.ground_size() != q.ground_size()) {
    throw Error(ErrorKind::ground_set_mismatch, "partitions of " + std::to_string(p.ground_size()) +
                                                    " and " + std::to_string(q.ground_size()) +
                                                    " elements");
  }
}

inline SetPartition partition_from_union_find(UnionFind& uf) {
  std::vector<Label> roots(uf.size());
  for (std::size_t x = 0; x < uf.size(); ++x) roots[x] = uf.find(static_cast<Label>(x));
  return SetPartition::from_labels(roots);
}

}  // namespace detail

/// m_X
inline SetPartition finest(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_ground_set, "n must be at least 1");
  std::vector<Label> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<Label>(i);
  return SetPartition::from_labels(ids);
}

/// g_X
inline SetPartition coarsest(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_ground_set, "n must be at least 1");
  std::vector<Label> ids(n, 0);
  return SetPartition::from_labels(ids);
}

/// The given blocks, with every element they leave out as a singleton.
inline SetPartition partition_with_blocks(std::size_t n,
                                          const std::vector<std::vector<Label>>& blocks) {
  std::vector<std::vector<Label>> all = blocks;
  std::vector<bool> used(n, false);
  for (const auto& b : blocks) {
    for (Label x : b) {
      if (x < n) used[x] = true;
    }
  }
  for (Label x = 0; x < n; ++x) {
    if (!used[x]) all.push_back({x});
  }
  return SetPartition::from_blocks(n, all);
}

inline std::size_t rank(const SetPartition& p) { return p.ground_size() - p.block_count(); }

/// p refines q: every block of p lies inside a block of q.
inline bool refines(const SetPartition& p, const SetPartition& q) {
  detail::require_same_ground(p, q);
  for (const auto& block : p.blocks()) {
    const Label target = q.block_of(block.front());
    for (Label x : block) {
      if (q.block_of(x) != target) return false;
    }
  }
  return true;
}

inline SetPartition meet(const SetPartition& p, const SetPartition& q) {
  detail::require_same_ground(p, q);
  const std::size_t n = p.ground_size();
  // Pair (block in p, block in q) packed into one id; from_labels canonicalizes.
  std::vector<Label> ids(n);
  for (std::size_t x = 0; x < n; ++x) {
    ids[x] = static_cast<Label>(p.block_of(static_cast<Label>(x)) * n +
                                q.block_of(static_cast<Label>(x)));
  }
  return SetPartition::from_labels(ids);
}

inline SetPartition join(const SetPartition& p, const SetPartition& q) {
  detail::require_same_ground(p, q);
  detail::UnionFind uf(p.ground_size());
  for (const auto* part : {&p, &q}) {
    for (const auto& block : part->blocks()) {
      for (Label x : block) uf.unite(block.front(), x);
    }
  }
  return detail::partition_from_union_find(uf);
}

/// q covers p: p < q and q merges exactly two blocks of p.
inline bool covers(const SetPartition& p, const SetPartition& q) {
  detail::require_same_ground(p, q);
  return q.block_count() + 1 == p.block_count() && refines(p, q);
}

inline SetPartition atom_to_partition(const Atom& atom, std::size_t n) {
  if (n == 0) throw Error(ErrorKind::invalid_ground_set, "n must be at least 1");
  check_atom(atom, n);
  std::vector<Label> ids(n);
  for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<Label>(i);
  ids[atom.b] = atom.a;
  return SetPartition::from_labels(ids);
}

/// Join of a set of atoms; the empty join is finest(n).
inline SetPartition join_atoms(std::size_t n, std::span<const Atom> atoms) {
  if (n == 0) throw Error(ErrorKind::invalid_ground_set, "n must be at least 1");
  detail::UnionFind uf(n);
  for (const Atom& atom : atoms) {
    check_atom(atom, n);
    uf.unite(atom.a, atom.b);
  }
  return detail::partition_from_union_find(uf);
}

/// A(p): atoms refining p, in lexicographic order.
inline std::vector<Atom> atoms_below(const SetPartition& p) {
  std::vector<Atom> out;
  for (const auto& block : p.blocks()) {
    for (std::size_t i = 0; i < block.size(); ++i) {
      for (std::size_t k = i + 1; k < block.size(); ++k) out.emplace_back(block[i], block[k]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// All atoms of Pi(n) in lexicographic order.
inline std::vector<Atom> all_atoms(std::size_t n) {
  std::vector<Atom> out;
  for (Label a = 0; a < n; ++a) {
    for (Label b = a + 1; b < n; ++b) out.emplace_back(a, b);
  }
  return out;
}

inline std::vector<std::size_t> block_sizes(const SetPartition& p) {
  std::vector<std::size_t> sizes;
  sizes.reserve(p.block_count());
  for (const auto& block : p.blocks()) sizes.push_back(block.size());
  return sizes;
}

/// Visits every partition of {0..n-1} once, in lexicographic order of the
/// restricted growth string. Stops early when `visit` returns false.
inline void for_each_partition(std::size_t n, const std::function<bool(const SetPartition&)>& visit,
                               const Limits& limits = {}) {
  if (n == 0) throw Error(ErrorKind::invalid_ground_set, "n must be at least 1");
  if (n > limits.max_partition_n) {
    throw Error(ErrorKind::resource_limit, "partition enumeration capped at n=" +
                                               std::to_string(limits.max_partition_n));
  }
  std::vector<Label> rgs(n, 0);
  std::vector<Label> prefix_max(n, 0);  // max of rgs[0..i]
  while (true) {
    if (!visit(SetPartition::from_labels(rgs))) return;
    // Rightmost position that can still grow.
    std::size_t i = n - 1;
    while (i > 0 && rgs[i] > prefix_max[i - 1]) --i;
    if (i == 0) return;
    ++rgs[i];
    prefix_max[i] = std::max(prefix_max[i - 1], rgs[i]);
    for (std::size_t k = i + 1; k < n; ++k) {
      rgs[k] = 0;
      prefix_max[k] = prefix_max[k - 1];
    }
  }
}

inline std::vector<SetPartition> all_partitions(std::size_t n, const Limits& limits = {}) {
  std::vector<SetPartition> out;
  for_each_partition(
      n,
      [&](const SetPartition& p) {
        out.push_back(p);
        return true;
      },
      limits);
  return out;
}

// ---------------------------------------------------------------------------
// Text form: blocks joined by '|', elements by ',' (e.g. "0,1|2,3|4").

inline std::string to_string(const SetPartition& p) {
  std::string out;
  for (std::size_t i = 0; i < p.block_count(); ++i) {
    if (i) out += '|';
    const auto& block = p.blocks()[i];
    for (std::size_t k = 0; k < block.size(); ++k) {
      if (k) out += ',';
      out += std::to_string(block[k]);
    }
  }
  return out;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\n' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

inline Label parse_label(std::string_view token) {
  token = trim(token);
  if (token.empty()) throw Error(ErrorKind::parse, "empty element");
  std::uint64_t v = 0;
  for (char c : token) {
    if (c < '0' || c > '9') throw Error(ErrorKind::parse, "bad element '" + std::string(token) + "'");
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
    if (v > 1'000'000) throw Error(ErrorKind::parse, "element too large");
  }
  return static_cast<Label>(v);
}

}  // namespace detail

/// Parses the text form. Blocks and elements may come in any order; the
/// elements must be exactly {0..n-1} where n is their count.
/// `resolve` maps a token to a label (defaults to decimal parsing).
inline SetPartition parse_partition(
    std::string_view text,
    const std::function<Label(std::string_view)>& resolve = detail::parse_label) {
  text = detail::trim(text);
  if (text.empty()) throw Error(ErrorKind::parse, "empty partition");
  std::vector<std::vector<Label>> blocks;
  std::size_t n = 0;
  for (auto block_text : detail::split(text, '|')) {
    auto& block = blocks.emplace_back();
    for (auto token : detail::split(block_text, ',')) {
      block.push_back(resolve(detail::trim(token)));
      ++n;
    }
  }
  try {
    return SetPartition::from_blocks(n, blocks);
  } catch (const Error& e) {
    throw Error(ErrorKind::parse, e.what());
  }
}

}  // namespace partlat
