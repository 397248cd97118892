// Walk-through of the hermitian layer: weights compensating the modulus
// growth of theta and gamma, their curvature matrices, and the fibre
// integral of the normalized curvature form.
#include <cstdio>

#include "gerbe/hermitian.hpp"

using gerbe::Complex;

int main() {
  const Complex z{0.17, 0.23};
  const Complex tau{0.25, 0.70};
  const Complex sigma{-0.15, 0.55};

  std::printf("weights at z = %.2f%+.2fi\n", z.real(), z.imag());
  std::printf("  quadratic weight h2(z, tau)        = %.12f\n", gerbe::h2(z, tau));
  std::printf("  cubic weight    h3(z, tau, sigma)  = %.12f\n", gerbe::h3(z, tau, sigma));

  double lhs = gerbe::h3(z + tau, tau, sigma);
  double rhs = gerbe::h2(z, sigma) * gerbe::h3(z, tau, sigma);
  std::printf("  shift identity residual %.2e\n\n", std::abs(lhs - rhs) / rhs);

  double inv_before = gerbe::h2(z, tau) * std::norm(gerbe::theta0(z, tau));
  Complex zp = z / tau, taup = -1.0 / tau;
  double inv_after = gerbe::h2(zp, taup) * std::norm(gerbe::theta0(zp, taup));
  std::printf("weighted squared theta modulus under tau -> -1/tau\n");
  std::printf("  before %.12f, after %.12f, residual %.2e\n\n", inv_before, inv_after,
              std::abs(inv_before - inv_after) / inv_before);

  gerbe::TwoFormCoefficients c = gerbe::curvature_h2(z, tau);
  std::printf("curvature coefficients of the quadratic weight (z, tau block)\n");
  for (int i = 0; i < c.n; ++i) {
    std::printf(" ");
    for (int j = 0; j < c.n; ++j)
      std::printf("  %+.6f%+.6fi", c.m[i][j].real(), c.m[i][j].imag());
    std::printf("\n");
  }

  double fibre = gerbe::fibre_integral_h2(tau, 200);
  std::printf("\nfibre integral of the normalized curvature form: %.6f (expected 1)\n", fibre);
  return 0;
}
