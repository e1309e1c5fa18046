// Orbits of GL2 x GL3 on pairs of ternary quadratic forms over F_3.
#include <iostream>

#include "pvs/orbits.hpp"

using namespace pvs;

int main() {
  const auto table = label_orbits(decompose_orbits(3));
  write_orbit_table(std::cout, table);
  for (const auto& row : dimension_table()) {
    std::cout << "U" << row.dimension << ": " << table.group_cardinality(row.dimension) << '\n';
  }
}
