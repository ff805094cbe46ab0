#pragma once

#include <cstddef>
#include <cstdint>

namespace partlat {

/// Ceilings for the exhaustive routines. Anything above a ceiling raises
/// ErrorKind::resource_limit instead of running unbounded.
struct Limits {
  std::size_t max_partition_n = 12;            // all_partitions: B(12) = 4213597
  std::size_t max_component_edges = 24;        // subset scan per connected component
  std::uint64_t max_forests = 10'000'000;      // spanning-forest enumeration
  std::uint64_t max_paths = 1'000'000;         // simple path enumeration
  std::uint64_t max_oracle_subsets = 10'000'000;  // C(|R|, s) for the rank/size oracle
  std::uint64_t max_reachable = 1'000'000;     // |Pi(X,R)| closure size
  std::size_t max_class_edges = 24;            // brute force per cycle class
  std::uint64_t max_cut_sets = 100'000;        // U_alpha family size
  std::uint64_t max_connected_sets = 5'000'000;  // recursive engine work before fallback
};

}  // namespace partlat
