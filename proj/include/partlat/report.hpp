#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "partlat/big_count.hpp"
#include "partlat/lattice.hpp"

namespace partlat {

/// Concrete evidence for a report: the partitions involved, optional atom
/// sets (decompositions), the counts that were compared, and a short note.
struct Witness {
  std::vector<SetPartition> partitions;
  std::vector<std::vector<Atom>> atom_sets;
  std::vector<BigCount> counts;
  std::string note;
};

/// Outcome of checking one property at one ground-set size.
///
/// `holds` is what was measured. `expected` is what the literature claims at
/// this size (nullopt when it makes no claim). A report passes when it was not
/// skipped and the measurement agrees with the claim.
struct PropertyReport {
  std::string property;
  std::size_t n = 0;
  bool holds = true;
  std::optional<bool> expected = true;
  std::optional<Witness> witness;
  std::optional<BigCount> bound;
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::optional<std::string> skipped;
  std::string note;

  bool passed() const { return !skipped && (!expected || holds == *expected); }
};

inline PropertyReport make_report(std::string property, std::size_t n) {
  PropertyReport r;
  r.property = std::move(property);
  r.n = n;
  return r;
}

}  // namespace partlat
