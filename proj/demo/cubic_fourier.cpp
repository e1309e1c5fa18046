// Fourier transform of {p | Disc} on binary cubic forms: brute force against
// the closed form per class, then multiplicativity at q = 15.
#include <iostream>

#include "pvs/fourier.hpp"

using namespace pvs;

int main() {
  for (i64 p : {3, 5, 7, 11}) {
    const auto r = verify_cubic(p, false);
    for (const auto& row : r.table.rows) {
      std::cout << "p=" << p << "  " << row.label << "  " << row.value << "  (" << row.source << ")\n";
    }
  }
  const CubicDualTransform t15(15), t3(3), t5(5);
  const CubicSpace::Coords w{1, 2, 0, 4};
  std::cout << "Psi_15(w) = " << t15(w) << ", Psi_3(w) Psi_5(w) = " << t3(w) * t5(w) << '\n';
}
