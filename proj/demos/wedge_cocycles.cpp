// Walk-through of the lattice layer: normal forms, fundamental sets, pair
// products over a wedge, and the closed triangle relation.
#include <cstdio>

#include "gerbe/checker.hpp"

using gerbe::Complex;
using gerbe::LatticeVector;

namespace {

const char* kind_name(gerbe::WedgeKind k) {
  switch (k) {
    case gerbe::WedgeKind::ParallelPlus: return "parallel";
    case gerbe::WedgeKind::ParallelMinus: return "opposite";
    default: return "independent";
  }
}

}  // namespace

int main() {
  const LatticeVector a{{1, 0, 0}};
  const LatticeVector b{{1, 2, 0}};
  const LatticeVector c{{0, 0, 1}};

  auto [gamma, modulus] = gerbe::direction_vector(a, b);
  std::printf("wedge a = (1,0,0), b = (1,2,0)\n");
  std::printf("  direction covector (%lld, %lld, %lld), modulus %lld\n", gamma[0], gamma[1],
              gamma[2], modulus);

  gerbe::NormalForm nf = gerbe::normal_form(a, b);
  std::printf("  normal form: kind %s, residue %lld, modulus %lld\n", kind_name(nf.kind), nf.r,
              nf.s);

  std::printf("  fundamental set (values against a and b):\n");
  for (const auto& d : gerbe::fundamental_set(a, b))
    std::printf("    delta = (%lld, %lld, %lld) with delta(a) = %lld, delta(b) = %lld\n", d[0],
                d[1], d[2], d(a), d(b));

  // A base point inside the common positivity domain of the wedges below.
  gerbe::SampleStream stream(7);
  auto uni = [&stream] { return stream.uniform(); };
  std::array<Complex, 3> x = gerbe::sample_triple_domain(a, b, c, uni);
  gerbe::HomPoint p{Complex{0.11, -0.07}, x};
  std::printf("\nbase point x = (%.3f%+.3fi, %.3f%+.3fi, %.3f%+.3fi)\n", x[0].real(), x[0].imag(),
              x[1].real(), x[1].imag(), x[2].real(), x[2].imag());

  Complex fwd = gerbe::wedge_gamma(a, b, p);
  Complex rev = gerbe::wedge_gamma(b, a, p);
  std::printf("  pair product    = %+.12f %+.12f i\n", fwd.real(), fwd.imag());
  std::printf("  reversed pair   = %+.12f %+.12f i\n", rev.real(), rev.imag());
  std::printf("  inversion residual %.2e\n", std::abs(fwd * rev - 1.0));

  Complex f1 = gerbe::wedge_gamma(a, b, p);
  Complex f2 = gerbe::wedge_gamma(b, c, p);
  Complex f3 = gerbe::wedge_gamma(c, a, p);
  Complex phi = gerbe::cocycle_phi_abc(a, b, c, p);
  std::printf("\ntriangle relation around (a, b, c)\n");
  std::printf("  product of the three pair products = %+.12f %+.12f i\n", (f1 * f2 * f3).real(),
              (f1 * f2 * f3).imag());
  std::printf("  closed exponential                 = %+.12f %+.12f i\n", phi.real(), phi.imag());
  std::printf("  residual %.2e\n", std::abs(f1 * f2 * f3 - phi));

  // Covariance ratio of the pair product under a unimodular element with a
  // translation part.
  gerbe::Mat3 m = gerbe::Mat3::identity();
  m.m[0] = {1, 1, 0};
  gerbe::GroupElement el{m, gerbe::CoVector{{0, 1, 0}}};
  Complex phi_ab = gerbe::cocycle_phi_ab(a, b, el, p);
  std::printf("\npair cocycle under a shear with translation: %+.9f %+.9f i (|.| = %.9f)\n",
              phi_ab.real(), phi_ab.imag(), std::abs(phi_ab));
  return 0;
}
