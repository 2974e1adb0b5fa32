// Weaves the Mercedes-Benz frame with a rotated copy of itself, certifies
// the pair, and prints the general weaving identity at a few lambdas.

#include <cmath>
#include <iostream>
#include <numbers>

#include "wfl/wfl.hpp"

int main() {
  const wfl::FrameFamily phi = wfl::gen_mercedes();
  const double t = std::numbers::pi / 7.0;
  wfl::ComplexMatrix rotation(2, 2);
  rotation << std::cos(t), -std::sin(t), std::sin(t), std::cos(t);
  const wfl::FrameFamily psi(rotation * phi.matrix());

  const wfl::WovenCertificate cert = wfl::woven_bounds_bruteforce(phi, psi);
  std::cout << "universal bounds: A=" << cert.lower << " B=" << cert.upper << " over "
            << cert.partitions_checked << " partitions\n";

  const wfl::WeavingContext ctx(phi, psi, wfl::PartitionMask::of(3, {0, 2}));
  wfl::ComplexVector f(2);
  f << 0.6, wfl::Complex(0.0, 0.8);
  for (double lambda : {0.0, 0.5, 1.0, 2.0}) {
    const wfl::IdentityRecord rec = wfl::thm_general_weaving(ctx, f, lambda);
    std::cout << "lambda=" << lambda << "  lhs=" << rec.real("lhs") << "  rhs=" << rec.real("rhs")
              << "  bound=" << rec.real("lower_bound") << "  " << (rec.pass ? "ok" : "FAIL") << "\n";
  }
  return 0;
}
