#pragma once

#include <cmath>
#include <vector>

#include "gerbe/wedge.hpp"

namespace gerbe {

namespace detail {

// B_{1,2} and B_{2,3} as exact rational functions; cached together with all
// second partial derivatives for curvature evaluation.
inline const RationalFunction& b12_form() {
  static const RationalFunction rf = [] {
    MultiBernoulli mb = multi_bernoulli(1, 2);
    return RationalFunction(mb.numerator, Polynomial::variable(2, 1));
  }();
  return rf;
}

inline const RationalFunction& b23_form() {
  static const RationalFunction rf = [] {
    MultiBernoulli mb = multi_bernoulli(2, 3);
    Polynomial den = Polynomial::variable(3, 1) * Polynomial::variable(3, 2);
    return RationalFunction(mb.numerator, den);
  }();
  return rf;
}

template <int N>
const std::array<std::array<RationalFunction, N>, N>& bernoulli_hessian(
    const RationalFunction& form) {
  static const std::array<std::array<RationalFunction, N>, N> table = [&] {
    std::array<std::array<RationalFunction, N>, N> t;
    for (int i = 0; i < N; ++i) {
      RationalFunction di = form.derivative(i);
      for (int j = 0; j < N; ++j) t[i][j] = di.derivative(j);
    }
    return t;
  }();
  return table;
}

inline long double b12_value(long double y, long double t) {
  return b12_form().eval_numeric<long double>({y, t});
}

inline long double b23_value(long double y, long double t, long double s) {
  return b23_form().eval_numeric<long double>({y, t, s});
}

constexpr long double k_pi_l = 3.141592653589793238462643383279502884L;

}  // namespace detail

// Positive weight exp(-(4 pi / 2!) B_{1,2}(Im z; Im tau)).
inline double h2(Complex z, Complex tau) {
  if (tau.imag() == 0.0) throw DomainError("h2: second argument must not be real");
  long double e = detail::b12_value(z.imag(), tau.imag());
  return static_cast<double>(std::exp(-2.0L * detail::k_pi_l * e));
}

// Positive weight exp(-(4 pi / 3!) B_{2,3}(Im z; Im tau, Im sigma)).
inline double h3(Complex z, Complex tau, Complex sigma) {
  if (tau.imag() == 0.0 || sigma.imag() == 0.0)
    throw DomainError("h3: parameters must not be real");
  long double e = detail::b23_value(z.imag(), tau.imag(), sigma.imag());
  return static_cast<double>(std::exp(-(2.0L / 3.0L) * detail::k_pi_l * e));
}

// Pair weight: the product of h3 over the fundamental set of (a, b), with the
// same frame coordinates as the pair gamma product.
inline double h_ab(const LatticeVector& a, const LatticeVector& b, const HomPoint& p) {
  NormalForm nf = normal_form(a, b);
  if (nf.kind == WedgeKind::ParallelPlus) return 1.0;
  if (nf.kind == WedgeKind::ParallelMinus)
    throw DomainError("h_ab: no value assigned to an opposite pair");
  WedgeFrame f = wedge_frame(a, b);
  Complex gx = f.gamma(p.x);
  if (std::abs(gx) < k_singular_tol) throw DomainError("h_ab: direction covector vanishes at x");
  Complex tau = f.alpha(p.x) / gx;
  Complex sigma = f.beta(p.x) / gx;
  if (tau.imag() == 0.0 || sigma.imag() == 0.0)
    throw DomainError("h_ab: frame ratios must not be real");
  long double exponent = 0.0L;
  for (const CoVector& d : fundamental_set(a, b)) {
    Complex z = (p.w + d(p.x)) / gx;
    exponent += detail::b23_value(z.imag(), tau.imag(), sigma.imag());
  }
  return static_cast<double>(std::exp(-(2.0L / 3.0L) * detail::k_pi_l * exponent));
}

// Vertex weight: the product of h2 over the same shifted arguments as the
// theta product of (a, mu).
inline double h_a(const LatticeVector& a, const Framing& framing, const CoVector& mu,
                  const HomPoint& p) {
  FramingBasis f = framing(a);
  long long k = mu(a);
  if (k == 0) return 1.0;
  Complex a1 = f[0](p.x), a2 = f[1](p.x), a3 = f[2](p.x);
  if (std::abs(a3) < k_singular_tol)
    throw DomainError("h_a: third framing covector vanishes at x");
  Complex tau = a2 / a3;
  if (tau.imag() == 0.0) throw DomainError("h_a: framing ratio must not be real");
  long double exponent = 0.0L;
  long long lo = k > 0 ? 0 : k;
  long long hi = k > 0 ? k : 0;
  for (long long j = lo; j < hi; ++j) {
    Complex z = (p.w + static_cast<double>(j) * a1) / a3;
    exponent += detail::b12_value(z.imag(), tau.imag());
  }
  if (k < 0) exponent = -exponent;
  return static_cast<double>(std::exp(-2.0L * detail::k_pi_l * exponent));
}

// Vertex weight of an affine-linear group element (g, mu), through the
// twisted translation mu o g^{-1}.
inline double h_a_group(const LatticeVector& a, const Framing& framing, const GroupElement& el,
                        const HomPoint& p) {
  if (el.g.det() != 1) throw std::invalid_argument("h_a_group: matrix must have determinant 1");
  return h_a(a, framing, compose(el.mu, el.g.adjugate()), p);
}

// Invariant square norm of the pair product.
inline double norm_gamma(const LatticeVector& a, const LatticeVector& b, const HomPoint& p,
                         const TruncationPolicy& pol = {}) {
  Complex g = wedge_gamma(a, b, p, pol);
  return h_ab(a, b, p) * std::norm(g);
}

// Invariant square norm of the vertex theta product.
inline double norm_delta(const LatticeVector& a, const Framing& framing, const CoVector& mu,
                         const HomPoint& p, const TruncationPolicy& pol = {}) {
  Complex d = delta(a, framing, mu, p, pol);
  return h_a(a, framing, mu, p) * std::norm(d);
}

inline double norm_delta(const LatticeVector& a, const Framing& framing, const GroupElement& el,
                         const HomPoint& p, const TruncationPolicy& pol = {}) {
  Complex d = delta_group(a, framing, el, p, pol);
  return h_a_group(a, framing, el, p) * std::norm(d);
}

// Coefficients of a (1,1)-form sum_{i,j} m[i][j] dv_i ^ conj(dv_j) on up to
// four complex variables.
struct TwoFormCoefficients {
  int n = 0;
  std::array<std::array<Complex, 4>, 4> m{};
};

// A (1,1)-form equals its own conjugate exactly when the coefficient matrix
// is anti-hermitian.
inline bool is_real_form(const TwoFormCoefficients& c, double tol = 1e-12) {
  for (int i = 0; i < c.n; ++i)
    for (int j = 0; j < c.n; ++j)
      if (std::abs(c.m[i][j] + std::conj(c.m[j][i])) > tol) return false;
  return true;
}

// Complex Jacobian of a holomorphic map; jac[i][k] is the derivative of the
// i-th target coordinate in the k-th source coordinate.
using Jacobian = std::array<std::array<Complex, 4>, 4>;

inline TwoFormCoefficients pullback_two_form(const TwoFormCoefficients& c, const Jacobian& jac,
                                             int n_out) {
  TwoFormCoefficients out;
  out.n = n_out;
  for (int k = 0; k < n_out; ++k)
    for (int l = 0; l < n_out; ++l) {
      Complex acc = 0.0;
      for (int i = 0; i < c.n; ++i)
        for (int j = 0; j < c.n; ++j) acc += jac[i][k] * c.m[i][j] * std::conj(jac[j][l]);
      out.m[k][l] = acc;
    }
  return out;
}

// First Chern form of h2 in the variables (z, tau): the weight depends only
// on imaginary parts, so the coefficients reduce to (i/4) times the exact
// Hessian of B_{1,2}.
inline TwoFormCoefficients curvature_h2(Complex z, Complex tau) {
  if (tau.imag() == 0.0) throw DomainError("curvature_h2: second argument must not be real");
  const auto& hess = detail::bernoulli_hessian<2>(detail::b12_form());
  std::vector<long double> pt{static_cast<long double>(z.imag()),
                              static_cast<long double>(tau.imag())};
  TwoFormCoefficients out;
  out.n = 2;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      long double v = hess[i][j].eval_numeric<long double>(pt);
      out.m[i][j] = Complex(0.0, static_cast<double>(v) / 4.0);
    }
  return out;
}

// Unnormalized curvature of h3 in the variables (z, tau, sigma): the
// coefficients of the second logarithmic derivative form, i.e. (pi/6) times
// the exact Hessian of B_{2,3}.
inline TwoFormCoefficients curvature_h3(Complex z, Complex tau, Complex sigma) {
  if (tau.imag() == 0.0 || sigma.imag() == 0.0)
    throw DomainError("curvature_h3: parameters must not be real");
  const auto& hess = detail::bernoulli_hessian<3>(detail::b23_form());
  std::vector<long double> pt{static_cast<long double>(z.imag()),
                              static_cast<long double>(tau.imag()),
                              static_cast<long double>(sigma.imag())};
  TwoFormCoefficients out;
  out.n = 3;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      long double v = hess[i][j].eval_numeric<long double>(pt);
      out.m[i][j] = Complex(static_cast<double>(detail::k_pi_l / 6.0L * v), 0.0);
    }
  return out;
}

// Midpoint-rule integral of the first Chern form of h2 over the torus fibre
// {u + v tau : u, v in [0,1)} at fixed tau.
inline double fibre_integral_h2(Complex tau, int n_grid = 200) {
  if (tau.imag() == 0.0) throw DomainError("fibre_integral_h2: modulus must not be real");
  double total = 0.0;
  double cells = static_cast<double>(n_grid) * static_cast<double>(n_grid);
  for (int u = 0; u < n_grid; ++u) {
    for (int v = 0; v < n_grid; ++v) {
      Complex z = (u + 0.5) / n_grid + ((v + 0.5) / n_grid) * tau;
      TwoFormCoefficients c = curvature_h2(z, tau);
      // One cell carries measure -2i Im(tau) / n^2 in dz ^ dconj(z).
      total += (c.m[0][0] * Complex(0.0, -2.0 * tau.imag())).real() / cells;
    }
  }
  return total;
}

// Imaginary part of a product ratio as a sum of fully split terms:
//   Im(prod z_i / prod w_j)
//     = sum_j [prod_i Im(z_i / w_j)] / [prod_{i != j} Im(w_i / w_j)].
inline DeviationReport im_product_identity_check(const std::vector<Complex>& zs,
                                                 const std::vector<Complex>& ws) {
  if (zs.size() != ws.size())
    throw std::invalid_argument("im_product_identity_check: length mismatch");
  size_t n = ws.size();
  Complex ratio = 1.0;
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(ws[i]) < k_singular_tol)
      throw DomainError("im_product_identity_check: vanishing denominator entry");
    ratio *= zs[i] / ws[i];
  }
  double rhs = 0.0;
  for (size_t j = 0; j < n; ++j) {
    double num = 1.0;
    for (size_t i = 0; i < n; ++i) num *= (zs[i] / ws[j]).imag();
    double den = 1.0;
    for (size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      double f = (ws[i] / ws[j]).imag();
      if (std::abs(f) < k_singular_tol)
        throw NearSingularity(SingularKind::Zero, static_cast<long long>(i),
                              static_cast<long long>(j), std::abs(f));
      den *= f;
    }
    rhs += num / den;
  }
  return make_deviation(Complex(ratio.imag(), 0.0), Complex(rhs, 0.0));
}

namespace detail {

// Third derivative of a Chebyshev series at xi, through the derivative
// recurrences of the T_k; dxidt rescales to the original variable.
inline long double chebyshev_third_derivative(const std::vector<long double>& coeff,
                                              long double xi, long double dxidt) {
  size_t k_max = coeff.size();
  std::vector<long double> t0(k_max), t1(k_max), t2(k_max), t3(k_max);
  for (size_t k = 0; k < k_max; ++k) {
    if (k == 0) {
      t0[k] = 1.0L;
      t1[k] = t2[k] = t3[k] = 0.0L;
    } else if (k == 1) {
      t0[k] = xi;
      t1[k] = 1.0L;
      t2[k] = t3[k] = 0.0L;
    } else {
      t0[k] = 2.0L * xi * t0[k - 1] - t0[k - 2];
      t1[k] = 2.0L * t0[k - 1] + 2.0L * xi * t1[k - 1] - t1[k - 2];
      t2[k] = 4.0L * t1[k - 1] + 2.0L * xi * t2[k - 1] - t2[k - 2];
      t3[k] = 6.0L * t2[k - 1] + 2.0L * xi * t3[k - 1] - t3[k - 2];
    }
  }
  long double acc = 0.0L;
  for (size_t k = 0; k < k_max; ++k) acc += coeff[k] * t3[k];
  return acc * dxidt * dxidt * dxidt;
}

// Weighted least-squares Chebyshev fit: returns series coefficients.
inline std::vector<long double> chebyshev_fit(const std::vector<long double>& xi,
                                              const std::vector<long double>& values,
                                              const std::vector<long double>& weights,
                                              int degree) {
  int k_max = degree + 1;
  size_t rows = xi.size();
  std::vector<std::vector<long double>> basis(rows, std::vector<long double>(k_max));
  for (size_t r = 0; r < rows; ++r) {
    for (int k = 0; k < k_max; ++k) {
      if (k == 0)
        basis[r][k] = 1.0L;
      else if (k == 1)
        basis[r][k] = xi[r];
      else
        basis[r][k] = 2.0L * xi[r] * basis[r][k - 1] - basis[r][k - 2];
    }
  }
  std::vector<std::vector<long double>> ata(k_max, std::vector<long double>(k_max, 0.0L));
  std::vector<long double> atb(k_max, 0.0L);
  for (size_t r = 0; r < rows; ++r) {
    long double w2 = weights[r] * weights[r];
    for (int i = 0; i < k_max; ++i) {
      atb[i] += w2 * basis[r][i] * values[r];
      for (int j = 0; j < k_max; ++j) ata[i][j] += w2 * basis[r][i] * basis[r][j];
    }
  }
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < k_max; ++col) {
    int pivot = col;
    for (int r = col + 1; r < k_max; ++r)
      if (std::fabs(static_cast<double>(ata[r][col])) >
          std::fabs(static_cast<double>(ata[pivot][col])))
        pivot = r;
    std::swap(ata[col], ata[pivot]);
    std::swap(atb[col], atb[pivot]);
    if (ata[col][col] == 0.0L) throw std::runtime_error("chebyshev_fit: singular system");
    for (int r = col + 1; r < k_max; ++r) {
      long double factor = ata[r][col] / ata[col][col];
      for (int c = col; c < k_max; ++c) ata[r][c] -= factor * ata[col][c];
      atb[r] -= factor * atb[col];
    }
  }
  std::vector<long double> coeff(k_max);
  for (int r = k_max - 1; r >= 0; --r) {
    long double acc = atb[r];
    for (int c = r + 1; c < k_max; ++c) acc -= ata[r][c] * coeff[c];
    coeff[r] = acc / ata[r][r];
  }
  return coeff;
}

}  // namespace detail

// Independent evaluation of the pair weight through the heat-trace of the
// positive cone: fits S(t) = -t^2 sum_{cone} exp(t Im((w - delta(x))/gamma(x)))
// on a negative-t grid and reads off exp(-(2 pi / 3) S'''(0)).  Defined on
// the overlap domain of the pair.
inline double h_ab_series_oracle(const LatticeVector& a, const LatticeVector& b,
                                 const HomPoint& p, const TruncationPolicy& pol = {}) {
  NormalForm nf = normal_form(a, b);
  if (nf.kind == WedgeKind::ParallelPlus) return 1.0;
  if (nf.kind == WedgeKind::ParallelMinus)
    throw DomainError("h_ab_series_oracle: no value assigned to an opposite pair");
  WedgeFrame f = wedge_frame(a, b);
  Complex gx = f.gamma(p.x);
  if (std::abs(gx) < k_singular_tol)
    throw DomainError("h_ab_series_oracle: direction covector vanishes at x");
  long double itau = (f.alpha(p.x) / gx).imag();
  long double isig = (f.beta(p.x) / gx).imag();
  if (!(itau < 0.0L && isig > 0.0L))
    throw DomainError("h_ab_series_oracle: x outside the pair overlap domain");
  long double y_w = (p.w / gx).imag();
  long long r_res = detail::pair_class_residue(f);
  long double s_val = static_cast<long double>(f.s);

  const int n_grid = 48;
  const int degree = 12;
  long double scale = 1.0L / std::max<long double>(-itau, isig);
  long double t_lo = -scale, t_hi = -0.002L * scale;
  std::vector<long double> ts(n_grid), values(n_grid), weights(n_grid), xi(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    long double u = static_cast<long double>(i) / (n_grid - 1);
    ts[i] = -scale * std::pow(0.002L, u);
    // Row starting heights grow linearly, so the m-sum is rapidly convergent
    // for every t < 0.
    long double sum = 0.0L;
    long long terms = 0;
    for (long long m = 1;; ++m) {
      long long rho = ((r_res * m) % f.s + f.s) % f.s;
      long long n0 = (rho == 0) ? 0 : rho - f.s;
      long double y = y_w - (static_cast<long double>(m) / s_val) * itau -
                      (static_cast<long double>(n0) / s_val) * isig;
      long double term = std::exp(ts[i] * y);
      sum += term;
      if (++terms > pol.max_terms)
        throw MaxTermsExceeded("h_ab_series_oracle: term budget exhausted");
      if (term < 1e-24L && m > f.s) break;
    }
    values[i] = -ts[i] * ts[i] * sum / (1.0L - std::exp(ts[i] * isig));
    weights[i] = 1.0L / std::max<long double>(std::fabs(static_cast<double>(values[i])), 1e-30L);
    xi[i] = (2.0L * ts[i] - (t_lo + t_hi)) / (t_hi - t_lo);
  }
  std::vector<long double> coeff = detail::chebyshev_fit(xi, values, weights, degree);
  long double xi0 = (0.0L - (t_lo + t_hi) / 2.0L) / ((t_hi - t_lo) / 2.0L);
  long double dxidt = 2.0L / (t_hi - t_lo);
  long double third = detail::chebyshev_third_derivative(coeff, xi0, dxidt);
  return static_cast<double>(std::exp(-(2.0L / 3.0L) * detail::k_pi_l * third));
}

}  // namespace gerbe
