#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "gerbe/polynomial.hpp"

namespace gerbe {

inline Rational binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Rational r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

inline Rational factorial(int n) {
  Rational r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

// Bernoulli numbers with B_1 = -1/2.
inline const Rational& bernoulli_number(int k) {
  static std::vector<Rational> cache{Rational(1)};
  while (static_cast<int>(cache.size()) <= k) {
    int n = static_cast<int>(cache.size());
    Rational acc = 0;
    for (int j = 0; j < n; ++j) acc += binomial(n + 1, j) * cache[j];
    cache.push_back(-acc / (n + 1));
  }
  return cache[k];
}

// The degree-n polynomial B_{r,n}(w, x_1..x_r) defined by
//   e^{w t} * prod_j t/(e^{x_j t} - 1) = sum_n B_{r,n} t^n / n! .
// Each factor t/(e^{x t} - 1) contributes a single power of 1/x, so the
// product x_1...x_r * B_{r,n} is a genuine polynomial; we store that cleared
// numerator exactly and divide on evaluation.
struct MultiBernoulli {
  int r = 0;
  int n = 0;
  Polynomial numerator;  // variables: w, x_1, ..., x_r; homogeneous of degree n

  int nvars() const { return r + 1; }
};

inline MultiBernoulli multi_bernoulli(int r, int n) {
  if (r < 0 || n < 0) throw std::invalid_argument("multi_bernoulli: negative index");
  const int nv = r + 1;
  using Series = std::vector<Polynomial>;  // index = power of t, truncated past n
  auto mul = [&](const Series& a, const Series& b) {
    Series out(n + 1, Polynomial(nv));
    for (int i = 0; i <= n; ++i)
      for (int j = 0; i + j <= n; ++j) out[i + j] += a[i] * b[j];
    return out;
  };

  Series acc(n + 1, Polynomial(nv));
  for (int k = 0; k <= n; ++k) {
    // e^{w t}: coefficient of t^k is w^k / k!.
    acc[k] = Polynomial::variable(nv, 0).pow(k).scaled(1 / factorial(k));
  }
  for (int j = 1; j <= r; ++j) {
    Series f(n + 1, Polynomial(nv));
    for (int k = 0; k <= n; ++k) {
      // x * t/(e^{x t} - 1): coefficient of t^k is B_k x^k / k!.
      f[k] = Polynomial::variable(nv, j).pow(k).scaled(bernoulli_number(k) / factorial(k));
    }
    acc = mul(acc, f);
  }

  MultiBernoulli mb;
  mb.r = r;
  mb.n = n;
  mb.numerator = acc[n].scaled(factorial(n));
  return mb;
}

inline Rational eval(const MultiBernoulli& mb, const Rational& w,
                     const std::vector<Rational>& x) {
  if (static_cast<int>(x.size()) != mb.r)
    throw std::invalid_argument("multi-Bernoulli evaluation: wrong parameter count");
  std::vector<Rational> pt;
  pt.reserve(mb.nvars());
  pt.push_back(w);
  Rational div = 1;
  for (const auto& xi : x) {
    if (xi == 0) throw std::domain_error("multi-Bernoulli evaluation: zero parameter");
    pt.push_back(xi);
    div *= xi;
  }
  return mb.numerator.eval(pt) / div;
}

template <typename Scalar>
Scalar eval_numeric(const MultiBernoulli& mb, const Scalar& w, const std::vector<Scalar>& x) {
  if (static_cast<int>(x.size()) != mb.r)
    throw std::invalid_argument("multi-Bernoulli evaluation: wrong parameter count");
  std::vector<Scalar> pt;
  pt.reserve(mb.nvars());
  pt.push_back(w);
  Scalar div = Scalar(1);
  for (const auto& xi : x) {
    pt.push_back(xi);
    div *= xi;
  }
  return mb.numerator.eval_numeric(pt) / div;
}

// Exact polynomial identity
//   B_{r,n}(w + x_i) - B_{r,n}(w) = n * B_{r-1,n-1}(w, x with x_i removed),
// checked on cleared numerators (multiply through by x_1..x_r).  The factor n
// comes from the generating function: shifting w by x_i multiplies it by
// e^{x_i t} whose excess over 1 cancels one denominator and leaves a bare t.
inline bool check_difference(int r, int n, int i) {
  if (r < 1 || n < 1 || i < 1 || i > r)
    throw std::invalid_argument("check_difference: index out of range");
  const int nv = r + 1;
  MultiBernoulli big = multi_bernoulli(r, n);
  MultiBernoulli small = multi_bernoulli(r - 1, n - 1);

  std::vector<Polynomial> shift;
  shift.reserve(nv);
  shift.push_back(Polynomial::variable(nv, 0) + Polynomial::variable(nv, i));
  for (int j = 1; j < nv; ++j) shift.push_back(Polynomial::variable(nv, j));
  Polynomial lhs = big.numerator.compose(shift) - big.numerator;

  // Embed the (r-1)-parameter numerator into the full variable set, skipping x_i.
  std::vector<Polynomial> embed;
  embed.push_back(Polynomial::variable(nv, 0));
  for (int j = 1; j <= r; ++j)
    if (j != i) embed.push_back(Polynomial::variable(nv, j));
  Polynomial rhs = small.numerator.compose(embed).scaled(n) * Polynomial::variable(nv, i);

  return lhs == rhs;
}

// Exact polynomial identity
//   B_{r,n}(z, t_1, t_2, ..) = sum_{j=0}^{m-1} B_{r,n}(z + j t_1, m t_1, t_2, ..),
// checked on cleared numerators (multiply through by m t_1 .. t_r).
inline bool check_subdivision(int r, int n, int m) {
  if (r < 1 || n < 0 || m < 1) throw std::invalid_argument("check_subdivision: bad index");
  const int nv = r + 1;
  MultiBernoulli mb = multi_bernoulli(r, n);
  Polynomial lhs = mb.numerator.scaled(m);

  Polynomial rhs(nv);
  for (int j = 0; j < m; ++j) {
    std::vector<Polynomial> images;
    images.push_back(Polynomial::variable(nv, 0) +
                     Polynomial::variable(nv, 1).scaled(j));
    images.push_back(Polynomial::variable(nv, 1).scaled(m));
    for (int k = 2; k < nv; ++k) images.push_back(Polynomial::variable(nv, k));
    rhs += mb.numerator.compose(images);
  }
  return lhs == rhs;
}

}  // namespace gerbe
