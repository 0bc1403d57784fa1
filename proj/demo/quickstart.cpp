// Samples the 16-node builtin network, estimates the Markov boundary of X6
// with stepwise selection, then identifies its parents.

#include <iostream>

#include "dagfoci/dagfoci.hpp"

int main() {
  using namespace dagfoci;

  sem::DagSpec spec = sem::builtin_example1();
  Dataset data = sem::sample(spec, 10000, /*seed=*/1);
  std::size_t target = data.column_index("X6");

  MarkovBoundaryEstimate boundary =
      foci_select(data, select_all_but(data, target), /*seed=*/1);
  std::cout << "boundary of X6:";
  for (std::size_t c : boundary.selected) std::cout << " " << data.names[c];
  std::cout << "\n";

  ParentalSets parents =
      dag_foci(data, target, /*n_perms=*/100, /*alpha=*/0.05, /*seed=*/1);
  if (parents.verdict == Verdict::unique) {
    std::cout << "parents of X6:";
    for (std::size_t c : parents.sets[0]) std::cout << " " << data.names[c];
    std::cout << "\n";
  } else if (parents.verdict == Verdict::singletons) {
    std::cout << "no multi-variable parental set; candidates:";
    for (const auto& s : parents.sets) {
      std::cout << " {";
      for (std::size_t c : s) std::cout << " " << data.names[c];
      std::cout << " }";
    }
    std::cout << "\n";
  } else {
    std::cout << kUndetectableMessage << "\n";
  }
  return 0;
}
