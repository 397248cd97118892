#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "gerbe/bernoulli.hpp"
#include "gerbe/truncation.hpp"

namespace gerbe {

using Complex = std::complex<double>;

inline constexpr double k_pi = std::numbers::pi_v<double>;

// exp(2*pi*i*z)
inline Complex e2pi(Complex z) {
  double mag = std::exp(-2.0 * k_pi * z.imag());
  return {mag * std::cos(2.0 * k_pi * z.real()), mag * std::sin(2.0 * k_pi * z.real())};
}

namespace detail {

// Multiplies `acc` by (1 - u) for a numerator factor at index (j, k):
// an exact hit on u = 1 makes the whole product zero, a near hit signals.
inline bool numerator_factor(Complex& acc, Complex u, long long j, long long k) {
  Complex f = 1.0 - u;
  double m = std::abs(f);
  if (m == 0.0) return false;  // exact zero of the function
  if (m < k_singular_tol) throw NearSingularity(SingularKind::Zero, j, k, m);
  acc *= f;
  return true;
}

// Divides `acc` by (1 - u) for a denominator factor at index (j, k).
inline void denominator_factor(Complex& acc, Complex u, long long j, long long k) {
  Complex f = 1.0 - u;
  double m = std::abs(f);
  if (m < k_singular_tol) throw NearSingularity(SingularKind::Pole, j, k, m);
  acc /= f;
}

// Tail of sum_{l > L} s_l where shell sums decay at least geometrically with
// ratio r from the last value s; factors enter logs with weight <= 2 once the
// individual magnitudes are below 1/2, folded in here.
inline double geometric_shell_tail(double s, double r, double shell_growth) {
  if (r >= 1.0) return HUGE_VAL;
  return 2.0 * s * shell_growth * r / ((1.0 - r) * (1.0 - r));
}

}  // namespace detail

// Primitive theta product for Im(tau) > 0:
//   theta0(z, tau) = prod_{j>=0} (1 - q^{j+1}/zeta)(1 - q^j zeta),
// with q = e^{2 pi i tau}, zeta = e^{2 pi i z}; extended to Im(tau) < 0 by
// theta0(z, -tau) = 1/theta0(-z, tau).  Periodic with period 1 in both
// arguments; vanishing exactly on z in Z + Z tau.
inline Complex theta0(Complex z, Complex tau, const TruncationPolicy& pol = {},
                      EvalInfo* info = nullptr) {
  if (tau.imag() == 0.0) throw DomainError("theta0: tau must have nonzero imaginary part");
  if (tau.imag() < 0.0) {
    Complex inner;
    try {
      inner = theta0(-z, -tau, pol, info);
    } catch (const NearSingularity& s) {
      throw s.flipped();
    }
    if (inner == 0.0)
      throw NearSingularity(SingularKind::Pole, 0, 0, 0.0);
    return 1.0 / inner;
  }

  // Shift z by the z- and tau-lattice to tame the factor magnitudes:
  // theta0(z0 + n tau) = (-1)^n e^{-2 pi i (n z0 + n(n-1) tau / 2)} theta0(z0).
  z -= std::floor(z.real() + 0.5);
  long long n = std::llround(z.imag() / tau.imag());
  Complex z0 = z - static_cast<double>(n) * tau;
  z0 -= std::floor(z0.real() + 0.5);
  Complex prefactor = 1.0;
  if (n != 0) {
    double dn = static_cast<double>(n);
    prefactor = e2pi(-(dn * z0 + dn * (dn - 1.0) / 2.0 * tau));
    if (n % 2 != 0) prefactor = -prefactor;
  }

  double r = std::exp(-2.0 * k_pi * tau.imag());
  Complex acc = 1.0;
  long long terms = 0;
  for (long long j = 0;; ++j) {
    Complex ua = e2pi((static_cast<double>(j) + 1.0) * tau - z0);
    Complex ub = e2pi(static_cast<double>(j) * tau + z0);
    if (!detail::numerator_factor(acc, ua, j, 0)) return 0.0;
    if (!detail::numerator_factor(acc, ub, j, 0)) return 0.0;
    terms += 2;
    if (terms > pol.max_terms) throw MaxTermsExceeded("theta0: factor budget exhausted");
    double s = std::abs(ua) + std::abs(ub);
    double tail = detail::geometric_shell_tail(s, r, 1.0);
    if (std::max(std::abs(ua), std::abs(ub)) < 0.5 && tail < pol.tol) {
      if (info) {
        info->tail_bound = tail;
        info->terms = terms;
      }
      break;
    }
  }
  return prefactor * acc;
}

// Elliptic gamma on the four chambers cut out by the signs of Im(tau) and
// Im(sigma).  For Im(tau), Im(sigma) > 0:
//   Gamma(z) = prod_{j,k>=0} (1 - e^{2 pi i ((j+1)tau + (k+1)sigma - z)})
//                          / (1 - e^{2 pi i (j tau + k sigma + z)});
// for Im(tau) < 0 < Im(sigma) the convergent mixed product
//   prod_{j,k>=0} (1 - e^{2 pi i (z - (j+1)tau + k sigma)})
//               / (1 - e^{2 pi i (-z - j tau + (k+1)sigma)});
// the remaining chambers reduce to these through
//   Gamma(z, tau, sigma) = 1/Gamma(z - sigma, tau, -sigma)
//                        = 1/Gamma(z - tau, -tau, sigma).
inline Complex elliptic_gamma(Complex z, Complex tau, Complex sigma,
                              const TruncationPolicy& pol = {}, EvalInfo* info = nullptr) {
  double it = tau.imag(), is = sigma.imag();
  if (it == 0.0 || is == 0.0)
    throw DomainError("elliptic_gamma: tau and sigma must have nonzero imaginary part");

  if (it > 0.0 && is < 0.0) {
    Complex inner;
    try {
      inner = elliptic_gamma(z - sigma, tau, -sigma, pol, info);
    } catch (const NearSingularity& s) {
      throw s.flipped();
    }
    if (inner == 0.0) throw NearSingularity(SingularKind::Pole, 0, 0, 0.0);
    return 1.0 / inner;
  }
  if (it < 0.0 && is < 0.0) {
    Complex inner;
    try {
      inner = elliptic_gamma(z - tau, -tau, sigma, pol, info);
    } catch (const NearSingularity& s) {
      throw s.flipped();
    }
    if (inner == 0.0) throw NearSingularity(SingularKind::Pole, 0, 0, 0.0);
    return 1.0 / inner;
  }

  const bool mixed = it < 0.0;  // Im tau < 0 < Im sigma
  double r = std::max(std::exp(-2.0 * k_pi * std::abs(it)), std::exp(-2.0 * k_pi * is));
  Complex acc = 1.0;
  long long terms = 0;
  bool zero_hit = false;
  for (long long l = 0;; ++l) {
    double shell_sum = 0.0, shell_max = 0.0;
    for (long long j = 0; j <= l; ++j) {
      long long k = l - j;
      double dj = static_cast<double>(j), dk = static_cast<double>(k);
      Complex ua, ub;
      if (!mixed) {
        ua = e2pi((dj + 1.0) * tau + (dk + 1.0) * sigma - z);
        ub = e2pi(dj * tau + dk * sigma + z);
      } else {
        ua = e2pi(z - (dj + 1.0) * tau + dk * sigma);
        ub = e2pi(-z - dj * tau + (dk + 1.0) * sigma);
      }
      if (!zero_hit && !detail::numerator_factor(acc, ua, j, k)) zero_hit = true;
      detail::denominator_factor(acc, ub, j, k);
      shell_sum += std::abs(ua) + std::abs(ub);
      shell_max = std::max({shell_max, std::abs(ua), std::abs(ub)});
      terms += 2;
      if (terms > pol.max_terms)
        throw MaxTermsExceeded("elliptic_gamma: factor budget exhausted");
    }
    double tail = detail::geometric_shell_tail(shell_sum, r, 2.0);
    if (shell_max < 0.5 && tail < pol.tol) {
      if (info) {
        info->tail_bound = tail;
        info->terms = terms;
      }
      break;
    }
  }
  if (zero_hit) return 0.0;
  return acc;
}

// The order-n member of the hierarchy: n+1 modular parameters, all in the
// upper half plane.  G_0 = theta0 and G_1 = elliptic gamma; in general
//   A = prod (1 - e^{2 pi i (sum (j_i+1) tau_i - z)}) over j in Z_{>=0}^{n+1},
//   B = prod (1 - e^{2 pi i (sum j_i tau_i + z)}),
//   G_n = A * B^{(-1)^n}.
inline Complex multiple_gamma(int n, Complex z, const std::vector<Complex>& taus,
                              const TruncationPolicy& pol = {}, EvalInfo* info = nullptr) {
  if (n < 0 || static_cast<int>(taus.size()) != n + 1)
    throw std::invalid_argument("multiple_gamma: expected n+1 modular parameters");
  double min_imag = HUGE_VAL;
  Complex tau_sum = 0.0;
  for (Complex t : taus) {
    if (t.imag() <= 0.0)
      throw DomainError("multiple_gamma: parameters must lie in the upper half plane");
    min_imag = std::min(min_imag, t.imag());
    tau_sum += t;
  }
  const bool reciprocal_b = (n % 2 != 0);
  double r = std::exp(-2.0 * k_pi * min_imag);

  Complex acc = 1.0;
  bool zero_hit = false;
  long long terms = 0;

  std::vector<long long> idx(n + 1, 0);
  for (long long l = 0;; ++l) {
    double shell_sum = 0.0, shell_max = 0.0;
    // Enumerate all j >= 0 with |j|_1 = l, starting from (l, 0, .., 0).
    std::fill(idx.begin(), idx.end(), 0);
    idx[0] = l;
    bool more = true;
    while (more) {
      Complex base = 0.0;
      for (int i = 0; i <= n; ++i) base += static_cast<double>(idx[i]) * taus[i];
      Complex ua = e2pi(base + tau_sum - z);
      Complex ub = e2pi(base + z);
      if (!zero_hit && !detail::numerator_factor(acc, ua, idx[0], l - idx[0])) zero_hit = true;
      if (reciprocal_b) {
        detail::denominator_factor(acc, ub, idx[0], l - idx[0]);
      } else {
        if (!zero_hit && !detail::numerator_factor(acc, ub, idx[0], l - idx[0])) zero_hit = true;
      }
      shell_sum += std::abs(ua) + std::abs(ub);
      shell_max = std::max({shell_max, std::abs(ua), std::abs(ub)});
      terms += 2;
      if (terms > pol.max_terms)
        throw MaxTermsExceeded("multiple_gamma: factor budget exhausted");
      // Successor: shift the leftmost nonzero weight one slot right,
      // returning its remainder to the front; stops once all weight sits in
      // the last slot.
      int p = 0;
      while (p <= n && idx[p] == 0) ++p;
      if (p >= n) {
        more = false;
      } else {
        long long v = idx[p];
        idx[p] = 0;
        idx[p + 1] += 1;
        idx[0] = v - 1;
      }
    }
    double tail = detail::geometric_shell_tail(shell_sum, r, static_cast<double>(n + 2));
    if (shell_max < 0.5 && tail < pol.tol) {
      if (info) {
        info->tail_bound = tail;
        info->terms = terms;
      }
      break;
    }
  }
  if (zero_hit) return 0.0;
  return acc;
}

// Product relation of order r in {2, 3}: the cyclic product of order-(r-2)
// gamma factors against the exponential of the degree-r polynomial,
//   prod_{k=1}^{r} G_{r-2}(w / x_k; x_1/x_k, .., x_r/x_k without k-th)
//     = exp(-(2 pi i / r!) B_{r,r}(w, x)).
inline DeviationReport narukawa_check(int r, Complex w, const std::vector<Complex>& x,
                                      const TruncationPolicy& pol = {}) {
  if (r != 2 && r != 3) throw std::invalid_argument("narukawa_check: order must be 2 or 3");
  if (static_cast<int>(x.size()) != r)
    throw std::invalid_argument("narukawa_check: expected r parameters");
  Complex lhs = 1.0;
  for (int k = 0; k < r; ++k) {
    std::vector<Complex> ratios;
    for (int i = 1; i < r; ++i) ratios.push_back(x[(k + i) % r] / x[k]);
    if (r == 2) {
      lhs *= theta0(w / x[k], ratios[0], pol);
    } else {
      lhs *= elliptic_gamma(w / x[k], ratios[0], ratios[1], pol);
    }
  }
  static const MultiBernoulli b22 = multi_bernoulli(2, 2);
  static const MultiBernoulli b33 = multi_bernoulli(3, 3);
  const MultiBernoulli& poly = (r == 2) ? b22 : b33;
  Complex bval = eval_numeric(poly, w, x);
  Complex rhs = std::exp(Complex(0.0, -2.0 * k_pi) * bval / to_double(factorial(r)));
  return make_deviation(lhs, rhs);
}

using Mat2 = std::array<std::array<long long, 2>, 2>;

// Word data for the modular multiplier: the group element together with its
// additive invariant N modulo 12, computed from a decomposition into the
// generators T = [[1,1],[0,1]] (N = 1) and S = [[0,-1],[1,0]] (N = -3).
struct ThetaMultiplierInput {
  Mat2 g{{{1, 0}, {0, 1}}};
  long long n_value = 0;  // reduced to [0, 12)
};

namespace detail {

inline long long floor_div(long long p, long long q) {
  long long d = p / q;
  if ((p % q != 0) && ((p < 0) != (q < 0))) --d;
  return d;
}

inline long long sl2_n_value(Mat2 g) {
  long long a = g[0][0], b = g[0][1], c = g[1][0], d = g[1][1];
  if (a * d - b * c != 1) throw std::invalid_argument("sl2_n_value: determinant must be 1");
  long long n = 0;
  while (c != 0) {
    // g = T^q S g'' with q the floored quotient, g'' having a smaller
    // lower-left entry; N(T) = 1, N(S) = -3 accumulate additively.
    long long q = floor_div(a, c);
    long long a1 = a - q * c, b1 = b - q * d;
    n += q - 3;
    a = c;
    b = d;
    c = -a1;
    d = -b1;
  }
  // Now c = 0, so a = d = 1 or a = d = -1.
  if (a == 1) {
    n += b;
  } else {
    // [[-1, b], [0, -1]] = S^2 T^{-b}: N = -6 - b.
    n += -6 - b;
  }
  return ((n % 12) + 12) % 12;
}

}  // namespace detail

inline ThetaMultiplierInput sl2_word(const Mat2& g) {
  return {g, detail::sl2_n_value(g)};
}

// The factor M(g; z, tau) in theta0(z, tau) = M * theta0(z', tau'), where
// (z', tau') = (z/(c tau + d), (a tau + b)/(c tau + d)) with
// [[a,b],[c,d]] = g^{-1}; M = exp(-pi i Q) with
//   Q = c z^2/(c tau + d) + z/(c tau + d) - z
//       - (a tau + b)/(6 (c tau + d)) + tau/6 - N(g)/6.
inline Complex theta_multiplier(const ThetaMultiplierInput& in, Complex z, Complex tau) {
  long long a = in.g[1][1], b = -in.g[0][1], c = -in.g[1][0], d = in.g[0][0];
  if (in.g[0][0] * in.g[1][1] - in.g[0][1] * in.g[1][0] != 1)
    throw std::invalid_argument("theta_multiplier: determinant must be 1");
  Complex denom = static_cast<double>(c) * tau + static_cast<double>(d);
  if (std::abs(denom) < k_singular_tol)
    throw NearSingularity(SingularKind::Pole, c, d, std::abs(denom));
  Complex q = static_cast<double>(c) * z * z / denom + z / denom - z -
              (static_cast<double>(a) * tau + static_cast<double>(b)) / (6.0 * denom) +
              tau / 6.0 - static_cast<double>(in.n_value) / 6.0;
  return std::exp(Complex(0.0, -k_pi) * q);
}

inline Complex theta_multiplier(const Mat2& g, Complex z, Complex tau) {
  return theta_multiplier(sl2_word(g), z, tau);
}

// Transformed arguments (z, tau) . g^{-1} used alongside theta_multiplier.
inline std::pair<Complex, Complex> sl2_transform(const Mat2& g, Complex z, Complex tau) {
  long long a = g[1][1], b = -g[0][1], c = -g[1][0], d = g[0][0];
  Complex denom = static_cast<double>(c) * tau + static_cast<double>(d);
  return {z / denom, (static_cast<double>(a) * tau + static_cast<double>(b)) / denom};
}

// Multiplier for the translation part:
//   theta0(w/x2, x1/x2) = phi * theta0((w + mu1 x1 + mu2 x2)/x2, x1/x2),
//   phi = exp(2 pi i mu1 w/x2 + pi i mu1 (mu1 - 1) x1/x2 + pi i mu1).
inline Complex theta_translation_multiplier(long long mu1, long long mu2, Complex w, Complex x1,
                                            Complex x2) {
  (void)mu2;
  double m = static_cast<double>(mu1);
  Complex arg = 2.0 * m * w / x2 + m * (m - 1.0) * x1 / x2 + m;
  return std::exp(Complex(0.0, k_pi) * arg);
}

}  // namespace gerbe
