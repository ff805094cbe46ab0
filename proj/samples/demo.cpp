// Small tour of the library: minimal decompositions of a partition, the
// distance between two partitions, and rank/size counts over red atoms.
#include <iostream>

#include "partlat/partlat.hpp"

using namespace partlat;

int main() {
  const auto p = parse_partition("0,1,2|3,4");
  std::cout << "partition " << to_string(p) << "\n";
  std::cout << "  N (closed form) = " << nmin_closed_form(p) << "\n";
  std::cout << "  N (forests)     = " << nmin_oracle(p) << "\n";
  for (const auto& d : minimal_decompositions(p)) {
    std::cout << "  {" << atom_list_to_string(d.atoms()) << "}\n";
  }

  const auto q = parse_partition("0,3|1,4|2");
  std::cout << "d(" << to_string(p) << ", " << to_string(q) << ") = " << metric_d(p, q) << "\n";
  std::cout << "  meet " << to_string(meet(p, q)) << ", join " << to_string(join(p, q)) << "\n";

  // Red atoms forming a 4-cycle with a pendant edge.
  const RedAtomSet reds(5, {Atom(0, 1), Atom(1, 2), Atom(2, 3), Atom(0, 3), Atom(3, 4)});
  std::cout << "reds " << format_edge_list(reds.atoms()) << "\n";
  for (std::size_t s = 0; s <= reds.size(); ++s) {
    std::cout << "  s=" << s << ":";
    for (std::size_t j = 0; j < 5; ++j) {
      const auto r = count_rank_size_recursive(CountQuery(reds, j, s));
      std::cout << ' ' << r.value;
    }
    std::cout << "\n";
  }
  std::cout << "  reachable joins: " << quotient_count_structured(reds) << "\n";
}
