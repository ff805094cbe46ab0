#pragma once

// Exhaustive and sampled checks of the properties of N and of the maps on
// minimal decompositions, one PropertyReport per property and ground size.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "partlat/big_count.hpp"
#include "partlat/decomposition.hpp"
#include "partlat/error.hpp"
#include "partlat/factorization.hpp"
#include "partlat/lattice.hpp"
#include "partlat/limits.hpp"
#include "partlat/report.hpp"

namespace partlat {

/// Per-property ceilings. Sizes above a ceiling produce a skipped report.
struct SuiteCeilings {
  std::size_t single_scan_n = 9;   // one pass over Pi(n)
  std::size_t pair_scan_n = 7;     // all ordered pairs
  std::size_t triple_scan_n = 4;   // all ordered triples
  std::size_t sampled_triple_n = 8;
  std::uint64_t sampled_triples = 10000;
  std::uint64_t seed = 20250101;
  std::size_t map_scan_n = 5;      // extend/relabel over every decomposition
  std::size_t monoid_scan_n = 6;   // FFM/BFM/HFRL scans count all decompositions
};

namespace detail {

struct Universe {
  std::vector<SetPartition> parts;
  std::vector<BigCount> nmin;
};

inline Universe universe(std::size_t n, const Limits& limits) {
  Universe u;
  u.parts = all_partitions(n, limits);
  u.nmin.reserve(u.parts.size());
  for (const auto& p : u.parts) u.nmin.push_back(nmin_closed_form(p));
  return u;
}

inline void record(PropertyReport& r, bool ok, Witness w) {
  ++r.checked;
  if (ok) return;
  ++r.violations;
  if (!r.witness) r.witness = std::move(w);
}

inline void finish(PropertyReport& r) { r.holds = r.violations == 0; }


inline bool all_blocks_at_most_two(const SetPartition& p) {
  return std::ranges::all_of(p.blocks(), [](const auto& b) { return b.size() <= 2; });
}

}  // namespace detail

/// N(pi) = 0 iff pi is finest.
inline PropertyReport check_zero(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("zero", n);
  const auto u = detail::universe(n, limits);
  for (std::size_t i = 0; i < u.parts.size(); ++i) {
    const bool ok = (u.nmin[i] == 0) == (rank(u.parts[i]) == 0);
    detail::record(r, ok, {{u.parts[i]}, {}, {u.nmin[i]}, "N = 0 disagrees with finest"});
  }
  detail::finish(r);
  return r;
}

/// N(pi) = 1 iff pi is not finest and no block has more than two elements.
inline PropertyReport check_one(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("one", n);
  const auto u = detail::universe(n, limits);
  for (std::size_t i = 0; i < u.parts.size(); ++i) {
    const auto& p = u.parts[i];
    const bool claim = rank(p) > 0 && detail::all_blocks_at_most_two(p);
    detail::record(r, (u.nmin[i] == 1) == claim, {{p}, {}, {u.nmin[i]}, "N = 1 disagrees"});
  }
  detail::finish(r);
  return r;
}

/// N(pi) = 1 implies at least ceil(n/2) blocks.
inline PropertyReport check_few_blocks(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("block-count", n);
  const auto u = detail::universe(n, limits);
  for (std::size_t i = 0; i < u.parts.size(); ++i) {
    const auto& p = u.parts[i];
    const bool ok = u.nmin[i] != 1 || p.block_count() >= (n + 1) / 2;
    detail::record(r, ok, {{p}, {}, {u.nmin[i]}, "N = 1 with fewer than ceil(n/2) blocks"});
  }
  detail::finish(r);
  return r;
}

/// Equal block-size multisets give equal N.
inline PropertyReport check_block_sizes(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("block-sizes", n);
  const auto u = detail::universe(n, limits);
  std::map<std::vector<std::size_t>, std::size_t> first;
  for (std::size_t i = 0; i < u.parts.size(); ++i) {
    auto sizes = block_sizes(u.parts[i]);
    std::sort(sizes.begin(), sizes.end());
    auto [it, inserted] = first.try_emplace(sizes, i);
    if (inserted) continue;
    const std::size_t j = it->second;
    detail::record(r, u.nmin[i] == u.nmin[j],
                   {{u.parts[j], u.parts[i]}, {}, {u.nmin[j], u.nmin[i]}, "same sizes, different N"});
  }
  detail::finish(r);
  return r;
}

/// Merging blocks of sizes a and b: N(pi') >= a*b*N(pi), with equality iff
/// a = b = 1. When pi is finest both sides of the equality clause are
/// degenerate (N(pi) = 0), so only the inequality is checked there.
inline PropertyReport check_cover(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("cover", n);
  const auto u = detail::universe(n, limits);
  std::uint64_t carved_out = 0;
  for (std::size_t i = 0; i < u.parts.size(); ++i) {
    const auto& p = u.parts[i];
    const auto& blocks = p.blocks();
    for (std::size_t a = 0; a < blocks.size(); ++a) {
      for (std::size_t b = a + 1; b < blocks.size(); ++b) {
        const auto q = join(p, atom_to_partition(Atom(blocks[a][0], blocks[b][0]), n));
        const BigCount nq = nmin_closed_form(q);
        const BigCount product = BigCount(blocks[a].size() * blocks[b].size()) * u.nmin[i];
        bool ok = nq >= product;
        if (rank(p) == 0) {
          ++carved_out;
        } else {
          const bool singletons = blocks[a].size() == 1 && blocks[b].size() == 1;
          ok = ok && ((nq == product) == singletons);
        }
        detail::record(r, ok, {{p, q}, {}, {u.nmin[i], nq}, "cover inequality or equality clause"});
      }
    }
  }
  r.note = std::to_string(carved_out) + " covers of the finest partition checked for the inequality only";
  detail::finish(r);
  return r;
}

/// pi refines pi' implies N(pi) <= N(pi').
inline PropertyReport check_isotone(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("isotone", n);
  const auto u = detail::universe(n, limits);
  for (std::size_t i = 0; i < u.parts.size(); ++i) {
    for (std::size_t j = 0; j < u.parts.size(); ++j) {
      if (i == j || !refines(u.parts[i], u.parts[j])) continue;
      detail::record(r, u.nmin[i] <= u.nmin[j],
                     {{u.parts[i], u.parts[j]}, {}, {u.nmin[i], u.nmin[j]}, "N decreases upward"});
    }
  }
  detail::finish(r);
  return r;
}

/// N(pi) = n^(n-2) iff pi is coarsest. Needs n >= 2.
inline PropertyReport check_cayley(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("cayley", n);
  if (n < 2) {
    r.skipped = "n^(n-2) is not an integer for n = 1";
    return r;
  }
  const BigCount top = ipow(n, n - 2);
  r.bound = top;
  const auto u = detail::universe(n, limits);
  for (std::size_t i = 0; i < u.parts.size(); ++i) {
    const bool ok = (u.nmin[i] == top) == (u.parts[i].block_count() == 1);
    detail::record(r, ok, {{u.parts[i]}, {}, {u.nmin[i]}, "N = n^(n-2) disagrees with coarsest"});
  }
  detail::finish(r);
  return r;
}

/// 0 <= N(pi) <= n^(n-2).
inline PropertyReport check_bounded(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("bounded", n);
  const BigCount top = n >= 2 ? ipow(n, n - 2) : BigCount(1);
  r.bound = top;
  const auto u = detail::universe(n, limits);
  for (std::size_t i = 0; i < u.parts.size(); ++i) {
    detail::record(r, u.nmin[i] >= 0 && u.nmin[i] <= top,
                   {{u.parts[i]}, {}, {u.nmin[i]}, "N outside [0, n^(n-2)]"});
  }
  detail::finish(r);
  return r;
}

/// N(pi) + N(pi') <= N(pi meet pi') + N(pi join pi') over all ordered pairs.
inline PropertyReport check_supermodularity(std::size_t n, const Limits& limits = {},
                                            FinestConvention convention = FinestConvention::zero) {
  PropertyReport r = make_report("supermodularity", n);
  const auto u = detail::universe(n, limits);
  std::uint64_t meet_is_finest = 0;
  for (std::size_t i = 0; i < u.parts.size(); ++i) {
    for (std::size_t j = 0; j < u.parts.size(); ++j) {
      const auto& p = u.parts[i];
      const auto& q = u.parts[j];
      const BigCount gap = supermodularity_gap(p, q, convention);
      if (gap < 0 && rank(meet(p, q)) == 0) ++meet_is_finest;
      detail::record(r, gap >= 0,
                     {{p, q, meet(p, q), join(p, q)}, {}, {gap}, "negative gap"});
    }
  }
  if (r.violations > 0) {
    r.note = std::to_string(meet_is_finest) + " of " + std::to_string(r.violations) +
             " violating pairs have meet = finest";
  }
  detail::finish(r);
  return r;
}

namespace detail {

inline void check_metric_triple(PropertyReport& r, const SetPartition& a, const SetPartition& b,
                                const SetPartition& c, std::uint64_t& identity,
                                std::uint64_t& triangle) {
  const BigCount ab = metric_d(a, b);
  const BigCount ba = metric_d(b, a);
  const BigCount bc = metric_d(b, c);
  const BigCount ac = metric_d(a, c);
  bool ok = true;
  std::string what;
  if (ab < 0 || ab != ba) {
    ok = false;
    what = "negative or asymmetric";
  } else if ((ab == 0) != (a == b)) {
    ok = false;
    what = "d = 0 for distinct partitions";
    ++identity;
  } else if (ac > ab + bc) {
    ok = false;
    what = "triangle inequality";
    ++triangle;
  }
  record(r, ok, {{a, b, c}, {}, {ab, bc, ac}, what});
}

}  // namespace detail

/// Metric axioms for d: exhaustive over triples up to ceilings.triple_scan_n,
/// then a seeded sample of ceilings.sampled_triples triples.
inline PropertyReport check_metric(std::size_t n, const SuiteCeilings& ceilings = {},
                                   const Limits& limits = {}) {
  PropertyReport r = make_report("metric", n);
  const auto parts = all_partitions(n, limits);
  std::uint64_t identity = 0;
  std::uint64_t triangle = 0;
  if (n <= ceilings.triple_scan_n) {
    for (const auto& a : parts) {
      for (const auto& b : parts) {
        for (const auto& c : parts) detail::check_metric_triple(r, a, b, c, identity, triangle);
      }
    }
  } else {
    std::mt19937_64 rng(ceilings.seed + n);
    for (std::uint64_t t = 0; t < ceilings.sampled_triples; ++t) {
      const auto& a = parts[rng() % parts.size()];
      const auto& b = parts[rng() % parts.size()];
      const auto& c = parts[rng() % parts.size()];
      detail::check_metric_triple(r, a, b, c, identity, triangle);
    }
    r.note = "sampled, seed " + std::to_string(ceilings.seed + n);
  }
  if (r.violations > 0) {
    if (!r.note.empty()) r.note += "; ";
    r.note += std::to_string(identity) + " identity and " + std::to_string(triangle) +
              " triangle violations";
  }
  detail::finish(r);
  return r;
}

/// Extending every minimal decomposition of pi by one bridge is injective, and
/// bridges between the same two blocks have disjoint images.
inline PropertyReport check_extend_maps(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("extend", n);
  for_each_partition(
      n,
      [&](const SetPartition& p) {
        const auto source = minimal_decompositions(p, {}, limits);
        const auto& blocks = p.blocks();
        for (std::size_t a = 0; a < blocks.size(); ++a) {
          for (std::size_t b = a + 1; b < blocks.size(); ++b) {
            std::set<std::vector<Atom>> seen;
            std::size_t produced = 0;
            bool minimal = true;
            for (Label x : blocks[a]) {
              for (Label y : blocks[b]) {
                for (const auto& d : source) {
                  const auto e = extend_minimal(d, Atom(x, y));
                  minimal = minimal && is_minimal(e) && e.size() == d.size() + 1;
                  seen.insert(e.atoms());
                  ++produced;
                }
              }
            }
            // Injective per bridge and disjoint across bridges together mean
            // no image is produced twice.
            detail::record(r, minimal && seen.size() == produced,
                           {{p}, {}, {BigCount(seen.size()), BigCount(produced)},
                            "images collide or are not minimal"});
          }
        }
        return true;
      },
      limits);
  detail::finish(r);
  return r;
}

/// Relabeling by every permutation maps M(pi) onto M(sigma(pi)) and the
/// inverse permutation undoes it.
inline PropertyReport check_relabel_maps(std::size_t n, const Limits& limits = {}) {
  PropertyReport r = make_report("relabel", n);
  std::vector<Label> sigma(n);
  for (Label i = 0; i < n; ++i) sigma[i] = i;
  const auto parts = all_partitions(n, limits);
  std::vector<std::vector<AtomicDecomposition>> minimal;
  for (const auto& p : parts) {
    minimal.push_back(minimal_decompositions(p, {}, limits));
    std::sort(minimal.back().begin(), minimal.back().end());
  }
  do {
    std::vector<Label> inverse(n);
    for (Label i = 0; i < n; ++i) inverse[sigma[i]] = i;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      const auto target = relabel_partition(parts[i], sigma);
      const auto& expected = minimal[static_cast<std::size_t>(
          std::lower_bound(parts.begin(), parts.end(), target) - parts.begin())];
      std::vector<AtomicDecomposition> image;
      bool round_trip = true;
      for (const auto& d : minimal[i]) {
        image.push_back(relabel(d, sigma));
        round_trip = round_trip && relabel(image.back(), inverse) == d;
      }
      std::sort(image.begin(), image.end());
      detail::record(r, round_trip && image == expected,
                     {{parts[i], target}, {}, {BigCount(image.size()), BigCount(expected.size())},
                      "relabel is not a bijection onto M(sigma(pi))"});
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  detail::finish(r);
  return r;
}

/// Names accepted by run_property, in canonical order.
inline const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names = {
      "zero",   "one",     "block-count", "block-sizes", "cover", "isotone", "cayley",
      "bounded", "supermodularity", "metric", "extend", "relabel", "ACCP", "FFM",
      "BFM",    "HFM",     "UFM",         "HFRL"};
  return names;
}

/// Maps roman-numeral aliases (i..x) and lower-case monoid names onto
/// canonical names; returns the input unchanged otherwise.
inline std::string canonical_property_name(std::string_view name) {
  static const std::map<std::string, std::string, std::less<>> aliases = {
      {"i", "zero"},        {"ii", "one"},        {"iii", "block-count"},
      {"iv", "block-sizes"}, {"v", "cover"},       {"vi", "isotone"},
      {"vii", "cayley"},    {"viii", "bounded"},  {"ix", "supermodularity"},
      {"x", "metric"},      {"accp", "ACCP"},     {"ffm", "FFM"},
      {"bfm", "BFM"},       {"hfm", "HFM"},       {"ufm", "UFM"},
      {"hfrl", "HFRL"}};
  if (auto it = aliases.find(name); it != aliases.end()) return it->second;
  return std::string(name);
}

/// Runs one named property at size n. Sizes above the property's ceiling
/// produce a skipped report; unknown names raise invalid_argument.
inline PropertyReport run_property(std::string_view requested, std::size_t n,
                                   const SuiteCeilings& ceilings = {}, const Limits& limits = {}) {
  detail::require_ground_size(n);
  const std::string name = canonical_property_name(requested);
  const auto& names = property_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw Error(ErrorKind::invalid_argument, "unknown property '" + std::string(requested) + "'");
  }
  auto guarded = [&](std::size_t ceiling, auto&& check) -> PropertyReport {
    if (n > ceiling) {
      return detail::skipped_report(name, n, "n=" + std::to_string(n) + " exceeds ceiling " +
                                                 std::to_string(ceiling));
    }
    return check();
  };
  const std::size_t single = ceilings.single_scan_n;
  const std::size_t pairs = ceilings.pair_scan_n;
  if (name == "zero") return guarded(single, [&] { return check_zero(n, limits); });
  if (name == "one") return guarded(single, [&] { return check_one(n, limits); });
  if (name == "block-count") return guarded(single, [&] { return check_few_blocks(n, limits); });
  if (name == "block-sizes") return guarded(single, [&] { return check_block_sizes(n, limits); });
  if (name == "cayley") return guarded(single, [&] { return check_cayley(n, limits); });
  if (name == "bounded") return guarded(single, [&] { return check_bounded(n, limits); });
  if (name == "cover") return guarded(pairs, [&] { return check_cover(n, limits); });
  if (name == "isotone") return guarded(pairs, [&] { return check_isotone(n, limits); });
  if (name == "supermodularity") {
    return guarded(pairs, [&] { return check_supermodularity(n, limits); });
  }
  if (name == "metric") {
    return guarded(ceilings.sampled_triple_n, [&] { return check_metric(n, ceilings, limits); });
  }
  if (name == "extend") return guarded(ceilings.map_scan_n, [&] { return check_extend_maps(n, limits); });
  if (name == "relabel") {
    return guarded(ceilings.map_scan_n, [&] { return check_relabel_maps(n, limits); });
  }
  if (name == "HFM") return hfm_counterexample(n);
  if (name == "UFM") return ufm_counterexample(n);
  if (name == "HFRL") {
    return guarded(ceilings.monoid_scan_n, [&] { return hfrl_counterexample(n, limits); });
  }
  return guarded(ceilings.monoid_scan_n, [&] {
    for (const auto& report : check_ffm_bfm_accp(n, limits)) {
      if (report.property == name) return report;
    }
    return detail::skipped_report(name, n, "unknown monoid property");
  });
}

}  // namespace partlat
