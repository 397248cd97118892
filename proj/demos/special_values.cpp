// Walk-through of the scalar special functions: theta values with tail
// bounds, the gamma functional equations, and an exact polynomial table.
#include <cstdio>

#include "gerbe/bernoulli.hpp"
#include "gerbe/special.hpp"

using gerbe::Complex;

namespace {

void show(const char* label, Complex v) {
  std::printf("  %-34s = %+.12f %+.12f i\n", label, v.real(), v.imag());
}

}  // namespace

int main() {
  const Complex z{0.21, 0.13};
  const Complex tau{0.30, 0.60};
  const Complex sigma{-0.10, 0.45};

  std::printf("theta values at z = %.2f%+.2fi, tau = %.2f%+.2fi\n", z.real(), z.imag(),
              tau.real(), tau.imag());
  gerbe::EvalInfo info;
  Complex th = gerbe::theta0(z, tau, {}, &info);
  show("theta0(z, tau)", th);
  std::printf("  truncation used %lld terms, tail bound %.2e\n\n", info.terms, info.tail_bound);

  std::printf("functional equations (residuals should vanish)\n");
  Complex shifted = gerbe::theta0(z + tau, tau);
  Complex factor = -gerbe::e2pi(-z) * th;
  show("theta0(z+tau, tau)", shifted);
  show("-exp(-2 pi i z) theta0(z, tau)", factor);
  std::printf("  residual %.2e\n\n", std::abs(shifted - factor));

  std::printf("elliptic gamma at the same point\n");
  Complex g = gerbe::elliptic_gamma(z, tau, sigma);
  show("Gamma(z, tau, sigma)", g);
  Complex inv = gerbe::elliptic_gamma(-z, -sigma, -tau);
  show("Gamma(-z, -sigma, -tau)", inv);
  std::printf("  product deviates from one by %.2e\n\n", std::abs(g * inv - 1.0));

  Complex lhs = gerbe::elliptic_gamma(z, tau, sigma);
  Complex rhs = gerbe::elliptic_gamma(z, tau, tau + sigma) *
                gerbe::elliptic_gamma(z + sigma, tau + sigma, sigma);
  std::printf("modulus-sum composition residual %.2e\n\n", std::abs(lhs - rhs));

  std::printf("quadratic generalized Bernoulli polynomial (numerator over x1 x2):\n");
  gerbe::MultiBernoulli b = gerbe::multi_bernoulli(2, 2);
  for (const auto& [expo, coeff] : b.numerator.terms()) {
    std::printf("  coefficient %-6s for w^%d x1^%d x2^%d\n", gerbe::to_string(coeff).c_str(),
                expo[0], expo[1], expo[2]);
  }
  return 0;
}
