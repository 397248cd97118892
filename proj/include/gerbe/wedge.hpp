#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "gerbe/bernoulli.hpp"
#include "gerbe/lattice.hpp"
#include "gerbe/special.hpp"

namespace gerbe {

namespace detail {

inline Complex frame_value(const CoVector& v, const HomPoint& p) { return v(p.x); }

// Linear form c1*x1 + c2*x2 + c3*x3 in the four-variable polynomial ring
// (w, x1, x2, x3).
inline Polynomial linear_form(const CoVector& v) {
  Polynomial p(4);
  for (int i = 0; i < 3; ++i)
    p += Polynomial::variable(4, i + 1).scaled(Rational(v[i]));
  return p;
}

inline Polynomial affine_w_plus(const CoVector& v) {
  return Polynomial::variable(4, 0) + linear_form(v);
}

}  // namespace detail

// Solves u(x) = U, v(x) = V, t(x) = W for x, given three independent
// covectors; used to construct points with prescribed frame coordinates.
inline std::array<Complex, 3> point_with_covector_values(const CoVector& u, const CoVector& v,
                                                         const CoVector& t, Complex U, Complex V,
                                                         Complex W) {
  Mat3 rows;
  rows.m[0] = u.e;
  rows.m[1] = v.e;
  rows.m[2] = t.e;
  long long d = rows.det();
  if (d == 0) throw std::invalid_argument("point_with_covector_values: dependent covectors");
  Mat3 adj = rows.adjugate();
  std::array<Complex, 3> x;
  for (int i = 0; i < 3; ++i) {
    Complex acc = 0.0;
    acc += static_cast<double>(adj.m[i][0]) * U;
    acc += static_cast<double>(adj.m[i][1]) * V;
    acc += static_cast<double>(adj.m[i][2]) * W;
    x[i] = acc / static_cast<double>(d);
  }
  return x;
}

// Rejection sampler for the overlap of the positivity domains of a and b:
// seeds the frame coordinates with Im(alpha) < 0 < Im(beta), gamma = 1, and
// keeps drawing until both membership tests hold.
template <typename Uniform>
std::array<Complex, 3> sample_pair_domain(const LatticeVector& a, const LatticeVector& b,
                                          Uniform&& uniform, int max_tries = 800) {
  WedgeFrame f = wedge_frame(a, b);
  for (int tries = 0; tries < max_tries; ++tries) {
    Complex tau{uniform() - 0.5, -0.2 - 0.6 * uniform()};
    Complex sigma{uniform() - 0.5, 0.2 + 0.6 * uniform()};
    auto x = point_with_covector_values(f.alpha, f.beta, f.gamma, tau, sigma, 1.0);
    if (tries >= max_tries / 2) {
      // Fallback: unconstrained draws, in case the seeded slice misses the
      // overlap region for this pair.
      for (auto& c : x) c = Complex{2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0};
    }
    if (in_domain(a, x) && in_domain(b, x)) return x;
  }
  throw std::runtime_error("sample_pair_domain: rejection budget exhausted");
}

// Rejection sampler for the overlap of three positivity domains: perturbs a
// seed whose pairwise-direction coordinates sit at the three cube roots of
// unity, shrinking the perturbation on repeated failure.
template <typename Uniform>
std::array<Complex, 3> sample_triple_domain(const LatticeVector& a, const LatticeVector& b,
                                            const LatticeVector& c, Uniform&& uniform,
                                            int max_tries = 800) {
  if (det3(a, b, c) == 0)
    throw std::invalid_argument("sample_triple_domain: dependent triple");
  auto [alpha, s_bc] = direction_vector(b, c);
  auto [beta, s_ca] = direction_vector(c, a);
  auto [gamma, s_ab] = direction_vector(a, b);
  (void)s_bc;
  (void)s_ca;
  (void)s_ab;
  const Complex omega = e2pi({1.0 / 3.0, 0.0});
  for (int tries = 0; tries < max_tries; ++tries) {
    std::array<Complex, 3> x;
    if (tries < max_tries / 2) {
      // Seed the pairwise-direction coordinates near the three cube roots of
      // unity, with growing jitter.
      double scale = 0.3 + 1.2 * static_cast<double>(tries) / max_tries;
      auto jitter = [&]() {
        return Complex{scale * (uniform() - 0.5), scale * (uniform() - 0.5)};
      };
      x = point_with_covector_values(alpha, beta, gamma, 1.0 + jitter(),
                                     std::conj(omega) + jitter(), omega + jitter());
    } else {
      // Fallback: unconstrained draws.
      for (auto& v : x) v = Complex{2.0 * uniform() - 1.0, 2.0 * uniform() - 1.0};
    }
    if (in_domain(a, x) && in_domain(b, x) && in_domain(c, x)) return x;
  }
  throw std::runtime_error("sample_triple_domain: rejection budget exhausted");
}

// Finite-product evaluator for the pair gamma function: over the fundamental
// set F of (a, b),
//   prod_{delta in F} Gamma((w + delta(x))/gamma(x); alpha(x)/gamma(x),
//                           beta(x)/gamma(x)).
// The parallel pair (a, a) gives 1; (a, -a) has no assigned value.
inline Complex wedge_gamma(const LatticeVector& a, const LatticeVector& b, const HomPoint& p,
                           const TruncationPolicy& pol = {}) {
  NormalForm nf = normal_form(a, b);
  if (nf.kind == WedgeKind::ParallelPlus) return 1.0;
  if (nf.kind == WedgeKind::ParallelMinus)
    throw DomainError("wedge_gamma: no value assigned to an opposite pair");
  WedgeFrame f = wedge_frame(a, b);
  Complex gx = f.gamma(p.x);
  if (std::abs(gx) < k_singular_tol)
    throw DomainError("wedge_gamma: direction covector vanishes at x");
  Complex tau = f.alpha(p.x) / gx;
  Complex sigma = f.beta(p.x) / gx;
  Complex acc = 1.0;
  for (const CoVector& d : fundamental_set(a, b))
    acc *= elliptic_gamma((p.w + d(p.x)) / gx, tau, sigma, pol);
  return acc;
}

namespace detail {

// Residue r such that the classes (delta(a), delta(b)) of integral covectors
// with delta(c) = 0 form the lattice n = r m (mod s).
inline long long pair_class_residue(const WedgeFrame& f) {
  for (long long n = 0; n < f.s; ++n)
    if (f.lift(1, n, 0)) return n;
  throw std::logic_error("pair_class_residue: class lattice has no unit column");
}

}  // namespace detail

// Direct cone-product evaluator on the overlap of the positivity domains of
// a and b, where Im(alpha(x)/gamma(x)) < 0 < Im(beta(x)/gamma(x)):
//   prod_{delta(a) > 0 >= delta(b)} (1 - e^{-2 pi i (delta(x) - w)/gamma(x)})
//   / prod_{delta(a) <= 0 < delta(b)} (1 - e^{2 pi i (delta(x) - w)/gamma(x)}),
// one factor per class modulo Z*gamma.  Serves as an independent oracle for
// the finite-product evaluator.
inline Complex wedge_gamma_direct(const LatticeVector& a, const LatticeVector& b,
                                  const HomPoint& p, const TruncationPolicy& pol = {}) {
  NormalForm nf = normal_form(a, b);
  if (nf.kind == WedgeKind::ParallelPlus) return 1.0;
  if (nf.kind == WedgeKind::ParallelMinus)
    throw DomainError("wedge_gamma_direct: no value assigned to an opposite pair");
  WedgeFrame f = wedge_frame(a, b);
  Complex gx = f.gamma(p.x);
  if (std::abs(gx) < k_singular_tol)
    throw DomainError("wedge_gamma_direct: direction covector vanishes at x");
  double itau = (f.alpha(p.x) / gx).imag();
  double isig = (f.beta(p.x) / gx).imag();
  if (!(itau < 0.0 && isig > 0.0))
    throw DomainError("wedge_gamma_direct: x outside the pair overlap domain");

  long long r_res = detail::pair_class_residue(f);

  const double y_w = (p.w / gx).imag();
  const double stop = pol.tol;
  long long terms = 0;
  Complex acc = 1.0;

  auto delta_of = [&](long long m, long long n) {
    auto d = f.lift(m, n, 0);
    if (!d) throw std::logic_error("wedge_gamma_direct: missing lift on class lattice");
    return (*d)(p.x);
  };

  // Leading-factor magnitudes within a row decay monotonically, but across
  // rows the starting class jitters with period s; a row is only declared
  // final after s consecutive negligible leads.
  // Cone with delta(a) > 0, delta(b) <= 0.
  for (long long m = 1, small_run = 0; small_run < f.s; ++m) {
    long long rho = ((r_res * m) % f.s + f.s) % f.s;
    long long n0 = (rho == 0) ? 0 : rho - f.s;
    double lead = std::exp(2.0 * k_pi * ((static_cast<double>(m) / f.s) * itau +
                                         (static_cast<double>(n0) / f.s) * isig - y_w));
    if (++terms > pol.max_terms)
      throw MaxTermsExceeded("wedge_gamma_direct: factor budget exhausted");
    if (lead < stop) {
      ++small_run;
      continue;
    }
    small_run = 0;
    for (long long n = n0;; n -= f.s) {
      Complex u = std::exp(Complex(0.0, -2.0 * k_pi) * ((delta_of(m, n) - p.w) / gx));
      if (std::abs(u) < stop && n != n0) break;
      if (!detail::numerator_factor(acc, u, m, n)) return 0.0;
      if (++terms > pol.max_terms)
        throw MaxTermsExceeded("wedge_gamma_direct: factor budget exhausted");
      if (std::abs(u) < stop) break;
    }
  }
  // Cone with delta(a) <= 0, delta(b) > 0.
  for (long long m = 0, small_run = 0; small_run < f.s; --m) {
    long long rho = ((r_res * m) % f.s + f.s) % f.s;
    long long n0 = (rho == 0) ? f.s : rho;
    double lead = std::exp(-2.0 * k_pi * ((static_cast<double>(m) / f.s) * itau +
                                          (static_cast<double>(n0) / f.s) * isig - y_w));
    if (++terms > pol.max_terms)
      throw MaxTermsExceeded("wedge_gamma_direct: factor budget exhausted");
    if (lead < stop) {
      ++small_run;
      continue;
    }
    small_run = 0;
    for (long long n = n0;; n += f.s) {
      Complex u = std::exp(Complex(0.0, 2.0 * k_pi) * ((delta_of(m, n) - p.w) / gx));
      if (std::abs(u) < stop && n != n0) break;
      detail::denominator_factor(acc, u, m, n);
      if (++terms > pol.max_terms)
        throw MaxTermsExceeded("wedge_gamma_direct: factor budget exhausted");
      if (std::abs(u) < stop) break;
    }
  }
  return acc;
}

// Theta product attached to a single primitive vector and a translation:
// with (a1, a2, a3) the framing of a and k = mu(a),
//   k > 0:  prod_{j=0}^{k-1} theta0((w + j a1(x))/a3(x), a2(x)/a3(x)),
//   k < 0:  prod_{j=k}^{-1} theta0(...)^{-1},    k = 0: 1.
inline Complex delta(const LatticeVector& a, const Framing& framing, const CoVector& mu,
                     const HomPoint& p, const TruncationPolicy& pol = {}) {
  FramingBasis f = framing(a);
  long long k = mu(a);
  if (k == 0) return 1.0;
  Complex a1 = f[0](p.x), a2 = f[1](p.x), a3 = f[2](p.x);
  if (std::abs(a3) < k_singular_tol)
    throw DomainError("delta: third framing covector vanishes at x");
  Complex acc = 1.0;
  if (k > 0) {
    for (long long j = 0; j < k; ++j)
      acc *= theta0((p.w + static_cast<double>(j) * a1) / a3, a2 / a3, pol);
  } else {
    for (long long j = k; j < 0; ++j) {
      Complex t = theta0((p.w + static_cast<double>(j) * a1) / a3, a2 / a3, pol);
      if (t == 0.0) throw NearSingularity(SingularKind::Pole, j, 0, 0.0);
      acc /= t;
    }
  }
  return acc;
}

// Extension to a full group element through its translation in the framing of
// the target: delta(a, g) = delta(a, mu . g^{-1}).
inline Complex delta_group(const LatticeVector& a, const Framing& framing, const GroupElement& el,
                           const HomPoint& p, const TruncationPolicy& pol = {}) {
  if (el.g.det() != 1) throw std::invalid_argument("delta_group: matrix must have determinant 1");
  return delta(a, framing, compose(el.mu, el.g.adjugate()), p, pol);
}

// The exact degree-three rational polynomial attached to an ordered triple:
// zero when dependent; for a positively oriented triple
//   P(w, x) = sum_{delta in F(a,b,c)} B_{3,3}(w + delta(x); alpha(x), beta(x),
//                                             gamma(x)),
// with (alpha, beta, gamma) the directions of (b,c), (c,a), (a,b); extended
// to negative orientation by P_{a,b,c} = -P_{c,b,a}.  Variables: w, x1, x2,
// x3.
inline RationalFunction poly_Pabc(const LatticeVector& a, const LatticeVector& b,
                                  const LatticeVector& c) {
  long long d = det3(a, b, c);
  if (d == 0) return RationalFunction::zero(4);
  if (d < 0) return -poly_Pabc(c, b, a);
  auto [alpha, s_bc] = direction_vector(b, c);
  auto [beta, s_ca] = direction_vector(c, a);
  auto [gamma, s_ab] = direction_vector(a, b);
  (void)s_bc;
  (void)s_ca;
  (void)s_ab;
  static const MultiBernoulli b33 = multi_bernoulli(3, 3);
  Polynomial la = detail::linear_form(alpha);
  Polynomial lb = detail::linear_form(beta);
  Polynomial lg = detail::linear_form(gamma);
  Polynomial num(4);
  for (const CoVector& dl : fundamental_set3(a, b, c)) {
    std::vector<Polynomial> images{detail::affine_w_plus(dl), la, lb, lg};
    num += b33.numerator.compose(images);
  }
  return RationalFunction(num, la * lb * lg);
}

// The exact degree-one rational polynomial attached to a primitive vector
// and two translations, in the coordinates induced by the framing of a:
// with m, n the coordinate triples of mu, nu,
//   P(w, x) = (n1 m2 / a3(x)) [w + ((2 m1 + n1 - 1)/2) a1(x)
//                                + ((m2 - 1)/2) a2(x) + (1/2) a3(x)].
inline RationalFunction poly_Pa(const LatticeVector& a, const Framing& framing,
                                const CoVector& mu, const CoVector& nu) {
  FramingBasis f = framing(a);
  Mat3 rows;
  for (int i = 0; i < 3; ++i) rows.m[i] = f[i].e;
  if (rows.det() != 1) throw std::invalid_argument("poly_Pa: framing must have determinant 1");
  Mat3 inv = rows.adjugate();
  // Coordinates of a covector in the framing basis: mu = sum m_i a_i.
  auto coords = [&](const CoVector& v) {
    CoVector m;
    for (int i = 0; i < 3; ++i) {
      long long acc = 0;
      for (int j = 0; j < 3; ++j) acc = checked_add(acc, checked_mul(v[j], inv.m[j][i]));
      m[i] = acc;
    }
    return m;
  };
  CoVector m = coords(mu), n = coords(nu);
  Rational lead = Rational(n[0]) * Rational(m[1]);
  Polynomial num = Polynomial::variable(4, 0).scaled(2) +
                   detail::linear_form(f[0]).scaled(2 * m[0] + n[0] - 1) +
                   detail::linear_form(f[1]).scaled(m[1] - 1) + detail::linear_form(f[2]);
  return RationalFunction(num.scaled(lead), detail::linear_form(f[2]).scaled(2));
}

// Exponential of the triple polynomial: exp(-(2 pi i / 3!) P_{a,b,c}(w, x)).
inline Complex cocycle_phi_abc(const LatticeVector& a, const LatticeVector& b,
                               const LatticeVector& c, const HomPoint& p) {
  RationalFunction P = poly_Pabc(a, b, c);
  if (P.is_zero()) return 1.0;
  std::vector<Complex> pt{p.w, p.x[0], p.x[1], p.x[2]};
  return std::exp(Complex(0.0, -2.0 * k_pi / 6.0) * P.eval_numeric(pt));
}

// Pair cocycle as the defining covariance ratio:
//   phi(a, b; g) = delta(a, g; y) Gamma_{a,b}(y)
//                  / (Gamma_{g^{-1}a, g^{-1}b}(g^{-1} y) delta(b, g; y)).
inline Complex cocycle_phi_ab(const LatticeVector& a, const LatticeVector& b,
                              const GroupElement& el, const HomPoint& p,
                              const TruncationPolicy& pol = {}) {
  Framing fr = Framing::canonical();
  Mat3 ginv = el.g.adjugate();
  HomPoint q = group_act(inverse(el), p);
  Complex num = delta_group(a, fr, el, p, pol) * wedge_gamma(a, b, p, pol);
  Complex den = wedge_gamma(ginv * a, ginv * b, q, pol) * delta_group(b, fr, el, p, pol);
  if (std::abs(den) == 0.0) throw NearSingularity(SingularKind::Pole, 0, 0, 0.0);
  return num / den;
}

// Vertex cocycle: the closed form exp(-2 pi i P_a(mu, nu)) for a pair of
// pure translations, and the defining ratio
//   phi(a; g, h) = delta(a, g; y) delta(g^{-1}a, h; g^{-1}y) / delta(a, gh; y)
// in general.
inline Complex cocycle_phi_a(const LatticeVector& a, const Framing& framing,
                             const GroupElement& el1, const GroupElement& el2, const HomPoint& p,
                             const TruncationPolicy& pol = {}) {
  if (el1.g == Mat3::identity() && el2.g == Mat3::identity()) {
    RationalFunction P = poly_Pa(a, framing, el1.mu, el2.mu);
    std::vector<Complex> pt{p.w, p.x[0], p.x[1], p.x[2]};
    return std::exp(Complex(0.0, -2.0 * k_pi) * P.eval_numeric(pt));
  }
  Mat3 ginv = el1.g.adjugate();
  HomPoint q = group_act(inverse(el1), p);
  Complex num = delta_group(a, framing, el1, p, pol) *
                delta_group(ginv * a, framing, el2, q, pol);
  Complex den = delta_group(a, framing, compose(el1, el2), p, pol);
  if (std::abs(den) == 0.0) throw NearSingularity(SingularKind::Pole, 0, 0, 0.0);
  return num / den;
}

}  // namespace gerbe
