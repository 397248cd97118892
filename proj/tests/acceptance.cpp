// Release gate: runs the eleven acceptance criteria end to end and prints one
// PASS/FAIL line per criterion.  Usage: acceptance <path-to-cli-binary>.
#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gerbe/checker.hpp"

using namespace gerbe;
namespace gd = gerbe::detail;

namespace {

// Repeats a draw until n admissible samples are collected; draws signalling a
// rejected configuration are skipped, with an overall attempt budget of 10 n.
template <typename Fn>
double worst_of(SampleStream& s, long long n, Fn&& draw) {
  double worst = 0.0;
  long long done = 0;
  for (long long attempts = 0; done < n; ++attempts) {
    if (attempts >= 10 * n) throw std::runtime_error("sampling budget exhausted");
    try {
      DeviationReport d = draw(s);
      if (!std::isfinite(d.rel_dev)) continue;
      worst = std::max(worst, d.rel_dev);
      ++done;
    } catch (const std::runtime_error&) {
    } catch (const DomainError&) {
    }
  }
  return worst;
}

std::string dev_note(const char* what, double dev, double tol) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%s: worst relative deviation %.3e exceeds %.0e", what, dev,
                tol);
  return buf;
}

// --- criterion 1: exact rational polynomial suite ---------------------------

bool criterion_bernoulli_exact(std::string& note) {
  auto var = [](int nv, int i) { return Polynomial::variable(nv, i); };
  {
    MultiBernoulli b = multi_bernoulli(2, 2);
    Polynomial w = var(3, 0), x1 = var(3, 1), x2 = var(3, 2);
    Polynomial expected =
        w * w - (x1 + x2) * w + (x1 * x1 + x2 * x2 + (x1 * x2).scaled(3)).scaled(Rational(1, 6));
    if (!(b.numerator == expected)) {
      note = "quadratic two-parameter numerator differs from its closed form";
      return false;
    }
  }
  {
    MultiBernoulli b = multi_bernoulli(3, 3);
    Polynomial w = var(4, 0), x1 = var(4, 1), x2 = var(4, 2), x3 = var(4, 3);
    Polynomial sum = x1 + x2 + x3;
    Polynomial sym2 = x1 * x2 + x2 * x3 + x3 * x1;
    Polynomial quad = x1 * x1 + x2 * x2 + x3 * x3 + sym2.scaled(3);
    Polynomial expected = w * w * w - (sum * w * w).scaled(Rational(3, 2)) +
                          (quad * w).scaled(Rational(1, 2)) - (sum * sym2).scaled(Rational(1, 4));
    if (!(b.numerator == expected)) {
      note = "cubic three-parameter numerator differs from its closed form";
      return false;
    }
  }
  {
    MultiBernoulli b = multi_bernoulli(2, 3);
    Polynomial z = var(3, 0), t = var(3, 1), u = var(3, 2);
    Polynomial expected =
        z * z * z - ((t + u) * z * z).scaled(Rational(3, 2)) +
        ((t * t + u * u).scaled(Rational(1, 2)) + (t * u).scaled(Rational(3, 2))) * z -
        ((t + u) * t * u).scaled(Rational(1, 4));
    if (!(b.numerator == expected)) {
      note = "cubic two-parameter numerator differs from its closed form";
      return false;
    }
  }
  for (int r = 1; r <= 4; ++r)
    for (int n = 1; n <= 5; ++n) {
      for (int i = 1; i <= r; ++i)
        if (!check_difference(r, n, i)) {
          char buf[96];
          std::snprintf(buf, sizeof(buf), "difference relation fails at r=%d n=%d i=%d", r, n, i);
          note = buf;
          return false;
        }
      for (int m = 2; m <= 4; ++m)
        if (!check_subdivision(r, n, m)) {
          char buf[96];
          std::snprintf(buf, sizeof(buf), "subdivision identity fails at r=%d n=%d m=%d", r, n, m);
          note = buf;
          return false;
        }
    }
  return true;
}

// --- criterion 2: theta functional equations --------------------------------

bool criterion_theta_functional(std::string& note) {
  const TruncationPolicy pol{};
  SampleStream s(2026);
  double worst = worst_of(s, 100, [&pol](SampleStream& t) {
    bool up = t.integer(0, 1) == 1;
    Complex tau = gd::half_plane(t, up);
    Complex z = gd::small_z(t);
    Complex base = theta0(z, tau, pol);
    gd::require_tame(base);
    DeviationReport d = make_deviation(theta0(z + 1.0, tau, pol), base);
    d = gd::worse(d, make_deviation(theta0(z, tau + 1.0, pol), base));
    d = gd::worse(d, make_deviation(theta0(z + tau, tau, pol), -e2pi(-z) * base));
    Complex reflected = theta0(-z, -tau, pol);
    gd::require_tame(reflected);
    return gd::worse(d, make_deviation(base * reflected, Complex{1.0, 0.0}));
  });
  note = dev_note("theta functional equations", worst, 1e-10);
  return worst < 1e-10;
}

// --- criterion 3: theta modular layer ---------------------------------------

bool criterion_theta_modular(std::string& note) {
  const TruncationPolicy pol{};
  SampleStream s(3001);
  double worst = worst_of(s, 50, [&pol](SampleStream& t) {
    Mat2 g = gd::draw_sl2(t);
    Complex tau = gd::half_plane(t, true, 0.4, 1.0);
    Complex z = gd::small_z(t);
    auto [zp, taup] = sl2_transform(g, z, tau);
    Complex m = theta_multiplier(g, z, tau);
    Complex before = theta0(z, tau, pol);
    Complex after = theta0(zp, taup, pol);
    gd::require_tame(before);
    gd::require_tame(after);
    gd::require_tame(m);
    DeviationReport d = make_deviation(before, m * after);
    Complex x1 = t.box(0.7, 1.3, 0.2, 0.6);
    Complex x2 = t.box(-1.3, -0.7, 0.2, 0.6);
    Complex w = t.box(-0.3, 0.3, -0.1, 0.1);
    return gd::worse(d, narukawa_check(2, w, {x1, x2}, pol));
  });
  note = dev_note("theta modular relations", worst, 1e-9);
  return worst < 1e-9;
}

// --- criterion 4: elliptic gamma equations ----------------------------------

bool criterion_gamma_equations(std::string& note) {
  const TruncationPolicy pol{};
  SampleStream s(4001);
  double worst = worst_of(s, 100, [&pol](SampleStream& t) {
    bool up_tau = t.integer(0, 1) == 1;
    bool up_sigma = t.integer(0, 1) == 1;
    Complex tau = gd::half_plane(t, up_tau, 0.25, 0.8);
    Complex sigma = gd::half_plane(t, up_sigma, 0.25, 0.8);
    Complex z = gd::small_z(t);
    Complex base = elliptic_gamma(z, tau, sigma, pol);
    Complex th_sigma = theta0(z, sigma, pol);
    Complex th_tau = theta0(z, tau, pol);
    gd::require_tame(base);
    gd::require_tame(th_sigma);
    gd::require_tame(th_tau);
    DeviationReport d =
        make_deviation(elliptic_gamma(z + tau, tau, sigma, pol), th_sigma * base);
    d = gd::worse(d, make_deviation(elliptic_gamma(z + sigma, tau, sigma, pol), th_tau * base));
    d = gd::worse(d, make_deviation(base, elliptic_gamma(z, sigma, tau, pol)));
    Complex inv = elliptic_gamma(-z, -sigma, -tau, pol);
    gd::require_tame(inv);
    return gd::worse(d, make_deviation(base * inv, Complex{1.0, 0.0}));
  });
  if (worst >= 1e-8) {
    note = dev_note("gamma difference, symmetry, inversion", worst, 1e-8);
    return false;
  }
  worst = worst_of(s, 100, [&pol](SampleStream& t) {
    Complex tau = gd::half_plane(t, true, 0.25, 0.7);
    Complex sigma = gd::half_plane(t, true, 0.25, 0.7);
    Complex z = gd::small_z(t);
    Complex lhs = elliptic_gamma(z, tau, sigma, pol);
    Complex rhs = elliptic_gamma(z, tau, tau + sigma, pol) *
                  elliptic_gamma(z + sigma, tau + sigma, sigma, pol);
    gd::require_tame(lhs);
    gd::require_tame(rhs);
    return make_deviation(lhs, rhs);
  });
  if (worst >= 1e-8) {
    note = dev_note("gamma modulus-sum composition", worst, 1e-8);
    return false;
  }
  worst = worst_of(s, 100, [&pol](SampleStream& t) {
    const Complex omega = e2pi({1.0 / 3.0, 0.0});
    auto twist = [&t]() { return e2pi({t.uniform(-0.01, 0.01), 0.0}); };
    std::vector<Complex> x{t.uniform(0.95, 1.1) * twist(),
                           t.uniform(1.0, 1.15) * std::conj(omega) * twist(),
                           t.uniform(0.85, 1.0) * omega * twist()};
    Complex w = t.box(-0.25, 0.25, -0.08, 0.08);
    return narukawa_check(3, w, x, pol);
  });
  if (worst >= 1e-8) {
    note = dev_note("gamma cyclic threefold product", worst, 1e-8);
    return false;
  }
  return true;
}

// --- criterion 5: cyclic product relations ----------------------------------

bool criterion_cyclic_products(std::string& note) {
  const TruncationPolicy pol{};
  SampleStream s(5001);
  double worst = worst_of(s, 50, [&pol](SampleStream& t) {
    Complex x1 = t.box(0.7, 1.3, 0.2, 0.6);
    Complex x2 = t.box(-1.3, -0.7, 0.2, 0.6);
    Complex w = t.box(-0.3, 0.3, -0.1, 0.1);
    return narukawa_check(2, w, {x1, x2}, pol);
  });
  worst = std::max(worst, worst_of(s, 25, [&pol](SampleStream& t) {
                     const Complex omega = e2pi({1.0 / 3.0, 0.0});
                     auto twist = [&t]() { return e2pi({t.uniform(-0.01, 0.01), 0.0}); };
                     std::vector<Complex> x{t.uniform(0.95, 1.1) * twist(),
                                            t.uniform(1.0, 1.15) * std::conj(omega) * twist(),
                                            t.uniform(0.85, 1.0) * omega * twist()};
                     Complex w = t.box(-0.25, 0.25, -0.08, 0.08);
                     return narukawa_check(3, w, x, pol);
                   }));
  note = dev_note("cyclic product relations", worst, 1e-8);
  return worst < 1e-8;
}

// --- criterion 6: pair products over wedges ---------------------------------

bool criterion_wedge_layer(std::string& note) {
  const TruncationPolicy pol{};
  const LatticeVector e1{{1, 0, 0}}, e2{{0, 1, 0}}, e3{{0, 0, 1}};
  SampleStream s(6001);
  const std::vector<std::array<LatticeVector, 3>> triples = {
      {e1, e2, e3},
      {e1, LatticeVector{{1, -1, 0}}, e2},
      {e1, LatticeVector{{1, 2, 0}}, e3},
  };
  double worst = 0.0;
  for (const auto& tri : triples) {
    worst = std::max(worst, worst_of(s, 10, [&pol, &tri](SampleStream& t) {
                       const LatticeVector &a = tri[0], &b = tri[1], &c = tri[2];
                       auto uni = [&t] { return t.uniform(); };
                       std::array<Complex, 3> x = det3(a, b, c) != 0
                                                      ? sample_triple_domain(a, b, c, uni)
                                                      : gd::planar_triple_point(a, b, c, t);
                       HomPoint p{t.box(-0.3, 0.3, -0.25, 0.25), x};
                       DeviationReport d{};
                       for (const auto& [u, v] :
                            {std::pair{a, b}, std::pair{b, c}, std::pair{c, a}}) {
                         Complex f = wedge_gamma(u, v, p, pol);
                         Complex r = wedge_gamma(v, u, p, pol);
                         gd::require_tame(f);
                         gd::require_tame(r);
                         d = gd::worse(d, make_deviation(f * r, Complex{1.0, 0.0}));
                       }
                       Complex f1 = wedge_gamma(a, b, p, pol);
                       Complex f2 = wedge_gamma(b, c, p, pol);
                       Complex f3 = wedge_gamma(c, a, p, pol);
                       gd::require_tame(f1);
                       gd::require_tame(f2);
                       gd::require_tame(f3);
                       return gd::worse(d,
                                        make_deviation(f1 * f2 * f3, cocycle_phi_abc(a, b, c, p)));
                     }));
  }
  if (worst >= 1e-8) {
    note = dev_note("triangle relations over wedges", worst, 1e-8);
    return false;
  }
  const std::vector<std::pair<LatticeVector, LatticeVector>> pairs = {
      {e1, e2},
      {e2, e3},
      {e1, LatticeVector{{1, 2, 0}}},
      {e1, LatticeVector{{2, 3, 0}}},
      {LatticeVector{{1, 1, 0}}, LatticeVector{{0, 1, 1}}},
      {e1, LatticeVector{{1, 3, 0}}},
  };
  worst = 0.0;
  for (const auto& [a, b] : pairs) {
    worst = std::max(worst, worst_of(s, 4, [&pol, &a, &b](SampleStream& t) {
                       auto uni = [&t] { return t.uniform(); };
                       WedgeFrame f = wedge_frame(a, b);
                       auto x = sample_pair_domain(a, b, uni);
                       Complex gx = f.gamma(x);
                       if (!((f.alpha(x) / gx).imag() < 0.0 && (f.beta(x) / gx).imag() > 0.0))
                         throw NearSingularity(SingularKind::Zero, 0, 0, 0.0);
                       HomPoint p{t.box(-0.35, 0.35, -0.3, 0.3), x};
                       Complex finite = wedge_gamma(a, b, p, pol);
                       Complex direct = wedge_gamma_direct(a, b, p, pol);
                       gd::require_tame(finite);
                       gd::require_tame(direct);
                       return make_deviation(finite, direct);
                     }));
  }
  note = dev_note("finite pair product vs direct cone sum", worst, 1e-8);
  return worst < 1e-8;
}

// --- criterion 7: cocycle identities ----------------------------------------

bool criterion_cocycles(std::string& note) {
  const TruncationPolicy pol{};
  const Framing fr = Framing::canonical();
  SampleStream s(7001);

  double worst = worst_of(s, 10, [&pol](SampleStream& t) {
    auto uni = [&t] { return t.uniform(); };
    auto [a, b] = gd::draw_independent_pair(t, 2);
    HomPoint p{t.box(-0.35, 0.35, -0.3, 0.3), sample_pair_domain(a, b, uni)};
    Complex f = wedge_gamma(a, b, p, pol);
    Complex r = wedge_gamma(b, a, p, pol);
    gd::require_tame(f);
    gd::require_tame(r);
    return make_deviation(f * r, Complex{1.0, 0.0});
  });
  if (worst >= 1e-8) {
    note = dev_note("pair product inversion", worst, 1e-8);
    return false;
  }

  worst = worst_of(s, 10, [&pol](SampleStream& t) {
    auto uni = [&t] { return t.uniform(); };
    LatticeVector a = gd::draw_primitive(t, 2);
    LatticeVector b = gd::draw_primitive(t, 2);
    LatticeVector c = gd::draw_primitive(t, 2);
    if (det3(a, b, c) == 0) throw NearSingularity(SingularKind::Zero, 0, 0, 0.0);
    HomPoint p{t.box(-0.3, 0.3, -0.25, 0.25), sample_triple_domain(a, b, c, uni)};
    Complex lhs = cocycle_phi_abc(a, b, c, p) * wedge_gamma(a, c, p, pol);
    Complex rhs = wedge_gamma(a, b, p, pol) * wedge_gamma(b, c, p, pol);
    gd::require_tame(lhs);
    gd::require_tame(rhs);
    return make_deviation(lhs, rhs);
  });
  if (worst >= 1e-8) {
    note = dev_note("triple relation with exact exponential", worst, 1e-8);
    return false;
  }

  worst = worst_of(s, 10, [&pol, &fr](SampleStream& t) {
    auto uni = [&t] { return t.uniform(); };
    auto [a, b] = gd::draw_independent_pair(t, 2);
    GroupElement g{gd::draw_unimodular(t, 3), gd::small_covector(t, 1)};
    Mat3 ginv = g.g.adjugate();
    if (direction_vector(ginv * a, ginv * b).second == 0)
      throw NearSingularity(SingularKind::Zero, 0, 0, 0.0);
    HomPoint p{t.box(-0.35, 0.35, -0.3, 0.3), sample_pair_domain(a, b, uni)};
    HomPoint q = group_act(inverse(g), p);
    Complex lhs = cocycle_phi_ab(a, b, g, p, pol) * wedge_gamma(ginv * a, ginv * b, q, pol) *
                  delta_group(b, fr, g, p, pol);
    Complex rhs = delta_group(a, fr, g, p, pol) * wedge_gamma(a, b, p, pol);
    gd::require_tame(lhs);
    gd::require_tame(rhs);
    return make_deviation(lhs, rhs);
  });
  if (worst >= 1e-8) {
    note = dev_note("pair covariance ratio", worst, 1e-8);
    return false;
  }

  worst = worst_of(s, 10, [&pol, &fr](SampleStream& t) {
    LatticeVector a = gd::draw_primitive(t, 2);
    CoVector mu = gd::small_covector(t, 2);
    CoVector nu = gd::small_covector(t, 2);
    auto x = gd::vertex_point(a, t);
    HomPoint p{t.box(-0.4, 0.4, -0.3, 0.3), x};
    GroupElement g{Mat3::identity(), mu};
    GroupElement h{Mat3::identity(), nu};
    HomPoint q = group_act(inverse(g), p);
    Complex phi = cocycle_phi_a(a, fr, g, h, p, pol);
    Complex lhs = phi * delta_group(a, fr, compose(g, h), p, pol);
    Complex rhs = delta_group(a, fr, g, p, pol) * delta_group(a, fr, h, q, pol);
    gd::require_tame(lhs);
    gd::require_tame(rhs);
    return make_deviation(lhs, rhs);
  });
  if (worst >= 1e-8) {
    note = dev_note("translation composition with exact exponent", worst, 1e-8);
    return false;
  }

  auto skew_x = [](SampleStream& t) {
    return std::array<Complex, 3>{t.box(-0.5, 0.5, 0.3, 0.8), t.box(-0.5, 0.5, 0.3, 0.8),
                                  t.box(-0.5, 0.5, -0.8, -0.3)};
  };
  worst = worst_of(s, 10, [&pol, &fr, &skew_x](SampleStream& t) {
    LatticeVector a = gd::draw_primitive(t, 2);
    auto element = [&t](bool with_matrix) {
      Mat3 g = with_matrix ? gd::draw_unimodular(t, 3) : Mat3();
      return GroupElement{g, gd::small_covector(t, 1)};
    };
    GroupElement g = element(t.integer(0, 1) == 0);
    GroupElement h = element(true);
    GroupElement k = element(t.integer(0, 2) != 0);
    HomPoint p{t.box(-0.4, 0.4, -0.3, 0.3), skew_x(t)};
    HomPoint q = group_act(inverse(g), p);
    Complex l1 = cocycle_phi_a(a, fr, g, h, p, pol);
    Complex l2 = cocycle_phi_a(a, fr, compose(g, h), k, p, pol);
    Complex r1 = cocycle_phi_a(a, fr, g, compose(h, k), p, pol);
    Complex r2 = cocycle_phi_a(g.g.adjugate() * a, fr, h, k, q, pol);
    gd::require_tame(l1);
    gd::require_tame(l2);
    gd::require_tame(r1);
    gd::require_tame(r2);
    return make_deviation(l1 * l2, r1 * r2);
  });
  if (worst >= 1e-8) {
    note = dev_note("vertex associativity across mixed elements", worst, 1e-8);
    return false;
  }

  SampleStream s2(7777);
  double exact_worst = worst_of(s2, 20, [&fr](SampleStream& t) {
    LatticeVector a = gd::draw_primitive(t, 3);
    CoVector lam = gd::small_covector(t, 3);
    CoVector mu = gd::small_covector(t, 3);
    CoVector nu = gd::small_covector(t, 3);
    RationalFunction p1 = poly_Pa(a, fr, mu, nu);
    RationalFunction p2 = poly_Pa(a, fr, lam + mu, nu);
    RationalFunction p3 = poly_Pa(a, fr, lam, mu + nu);
    RationalFunction p4 = poly_Pa(a, fr, lam, mu);
    for (int tries = 0; tries < 50; ++tries) {
      Rational w(t.integer(-3, 3), 7);
      std::array<Rational, 3> x{Rational(t.integer(1, 9), 2), Rational(t.integer(1, 9), 3),
                                Rational(t.integer(1, 9), 5)};
      std::vector<Rational> pt{w, x[0], x[1], x[2]};
      if (p1.den.eval(pt) == 0) continue;
      Rational lamx =
          Rational(lam[0]) * x[0] + Rational(lam[1]) * x[1] + Rational(lam[2]) * x[2];
      std::vector<Rational> shifted{w + lamx, x[0], x[1], x[2]};
      Rational dpsi = -p1.eval(shifted) + p2.eval(pt) - p3.eval(pt) + p4.eval(pt);
      CoVector cl = gd::framing_coordinates(fr, a, lam);
      CoVector cm = gd::framing_coordinates(fr, a, mu);
      CoVector cn = gd::framing_coordinates(fr, a, nu);
      Rational expected = -Rational(cn[0]) * Rational(cm[1]) * Rational(cl[2]);
      return gd::boolean_deviation(dpsi == expected);
    }
    throw std::runtime_error("no admissible rational point");
  });
  if (exact_worst != 0.0) {
    note = "translation coboundary is not the expected exact integer";
    return false;
  }
  note = dev_note("cocycle identities", worst, 1e-8);
  return true;
}

// --- criterion 8: lattice combinatorics -------------------------------------

std::vector<LatticeVector> primitive_vectors(long long bound) {
  std::vector<LatticeVector> out;
  for (long long i = -bound; i <= bound; ++i)
    for (long long j = -bound; j <= bound; ++j)
      for (long long k = -bound; k <= bound; ++k) {
        LatticeVector v{{i, j, k}};
        if (is_primitive(v)) out.push_back(v);
      }
  return out;
}

bool criterion_lattice_combinatorics(std::string& note) {
  {
    auto prim = primitive_vectors(4);
    for (const auto& a : prim)
      for (const auto& b : prim) {
        long long modulus = direction_vector(a, b).second;
        if (modulus == 0) continue;
        if (static_cast<long long>(fundamental_set(a, b).size()) != modulus) {
          char buf[128];
          std::snprintf(buf, sizeof(buf),
                        "fundamental set size differs from modulus %lld at a=(%lld,%lld,%lld)",
                        modulus, a[0], a[1], a[2]);
          note = buf;
          return false;
        }
      }
  }
  {
    auto prim = primitive_vectors(8);
    std::set<std::pair<long long, long long>> seen;
    for (const auto& a : prim)
      for (const auto& b : prim) {
        long long modulus = direction_vector(a, b).second;
        if (modulus == 0 || modulus > 6) continue;
        NormalForm nf = normal_form(a, b);
        if (nf.kind != WedgeKind::General || nf.s != modulus) {
          note = "normal form disagrees with the wedge modulus";
          return false;
        }
        seen.insert({nf.s, nf.r});
      }
    auto totient = [](long long n) {
      long long t = n;
      for (long long p = 2; p * p <= n; ++p)
        if (n % p == 0) {
          while (n % p == 0) n /= p;
          t -= t / p;
        }
      if (n > 1) t -= t / n;
      return t;
    };
    for (long long m = 1; m <= 6; ++m) {
      long long count = 0;
      for (const auto& [sm, r] : seen)
        if (sm == m) {
          ++count;
          if (r < 0 || r >= m || std::gcd(r, m) != 1) {
            note = "orbit representative outside the coprime residue range";
            return false;
          }
        }
      if (count != totient(m)) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "found %lld orbits at modulus %lld, expected %lld", count,
                      m, totient(m));
        note = buf;
        return false;
      }
    }
  }
  return true;
}

// --- criterion 9: hermitian weights -----------------------------------------

bool criterion_hermitian(std::string& note) {
  const TruncationPolicy pol{};
  const Framing fr = Framing::canonical();
  SampleStream s(9001);

  double worst = worst_of(s, 50, [&pol](SampleStream& t) {
    for (int tries = 0; tries < 200; ++tries) {
      Complex x1 = t.box(-1, 1, -1, 1);
      Complex x2 = t.box(-1, 1, -1, 1);
      Complex w = t.box(-0.7, 0.7, -0.7, 0.7);
      if (std::abs(x2) < 0.2 || std::abs((x1 / x2).imag()) < 0.1) continue;
      Mat2 g = gd::draw_sl2(t, 4);
      long long n1 = t.integer(-2, 2), n2 = t.integer(-2, 2);
      Complex y1 = static_cast<double>(g[0][0]) * x1 + static_cast<double>(g[0][1]) * x2;
      Complex y2 = static_cast<double>(g[1][0]) * x1 + static_cast<double>(g[1][1]) * x2;
      Complex wp = w - static_cast<double>(n1) * x1 - static_cast<double>(n2) * x2;
      if (std::abs(y2) < 0.1 || std::abs((y1 / y2).imag()) < 0.05) continue;
      Complex th_before = theta0(w / x2, x1 / x2, pol);
      Complex th_after = theta0(wp / y2, y1 / y2, pol);
      if (std::abs(th_before) < 1e-6 || std::abs(th_after) < 1e-6) continue;
      double before = h2(w / x2, x1 / x2) * std::norm(th_before);
      double after = h2(wp / y2, y1 / y2) * std::norm(th_after);
      gd::require_tame_positive(before);
      gd::require_tame_positive(after);
      return make_deviation(before, after);
    }
    throw std::runtime_error("rejection budget exhausted");
  });
  if (worst >= 1e-9) {
    note = dev_note("weighted theta invariance", worst, 1e-9);
    return false;
  }

  worst = worst_of(s, 15, [](SampleStream& t) {
    auto uni = [&t] { return t.uniform(); };
    LatticeVector a = gd::draw_primitive(t, 2);
    LatticeVector b = gd::draw_primitive(t, 2);
    LatticeVector c = gd::draw_primitive(t, 2);
    if (det3(a, b, c) == 0) throw NearSingularity(SingularKind::Zero, 0, 0, 0.0);
    HomPoint p{t.box(-0.3, 0.3, -0.25, 0.25), sample_triple_domain(a, b, c, uni)};
    double w1 = h_ab(a, b, p);
    double w2 = h_ab(b, c, p);
    double w3 = h_ab(c, a, p);
    gd::require_tame_positive(w1);
    gd::require_tame_positive(w2);
    gd::require_tame_positive(w3);
    Complex phi = cocycle_phi_abc(a, b, c, p);
    gd::require_tame(phi);
    return make_deviation(w1 * w2 * w3 * std::norm(phi), 1.0);
  });
  if (worst >= 1e-8) {
    note = dev_note("triangle weight compensation", worst, 1e-8);
    return false;
  }

  worst = worst_of(s, 12, [&pol, &fr](SampleStream& t) {
    auto uni = [&t] { return t.uniform(); };
    auto [a, b] = gd::draw_independent_pair(t, 2);
    CoVector mu = gd::small_covector(t, 1);
    std::array<Complex, 3> x = sample_pair_domain(a, b, uni);
    Complex w = t.box(-0.35, 0.35, -0.3, 0.3);
    HomPoint p{w, x};
    HomPoint shifted{w + mu(x), x};
    double lhs = norm_gamma(a, b, shifted, pol) * norm_delta(b, fr, mu, p, pol);
    double rhs = norm_gamma(a, b, p, pol) * norm_delta(a, fr, mu, p, pol);
    gd::require_tame_positive(lhs);
    gd::require_tame_positive(rhs);
    if (std::min(lhs, rhs) < 1e-12) throw NearSingularity(SingularKind::Zero, 0, 0, lhs);
    return make_deviation(lhs, rhs);
  });
  if (worst >= 1e-8) {
    note = dev_note("pair norm under base shift", worst, 1e-8);
    return false;
  }

  worst = worst_of(s, 12, [&pol, &fr](SampleStream& t) {
    LatticeVector a = gd::draw_primitive(t, 2);
    CoVector mu = gd::small_covector(t, 2);
    CoVector nu = gd::small_covector(t, 2);
    auto x = gd::vertex_point(a, t);
    Complex w = t.box(-0.4, 0.4, -0.3, 0.3);
    HomPoint p{w, x};
    HomPoint shifted{w + mu(x), x};
    double lhs = norm_delta(a, fr, mu + nu, p, pol);
    double rhs = norm_delta(a, fr, mu, p, pol) * norm_delta(a, fr, nu, shifted, pol);
    gd::require_tame_positive(lhs);
    gd::require_tame_positive(rhs);
    if (std::min(lhs, rhs) < 1e-12) throw NearSingularity(SingularKind::Zero, 0, 0, lhs);
    return make_deviation(lhs, rhs);
  });
  if (worst >= 1e-8) {
    note = dev_note("vertex norm under translation sums", worst, 1e-8);
    return false;
  }

  worst = worst_of(s, 12, [&pol, &fr](SampleStream& t) {
    LatticeVector a = gd::draw_primitive(t, 2);
    Mat3 g = gd::draw_unimodular(t);
    Mat3 ginv = g.adjugate();
    CoVector mu = gd::small_covector(t, 2);
    auto x = gd::vertex_point(a, t);
    Complex w = t.box(-0.4, 0.4, -0.3, 0.3);
    double lhs = norm_delta(a, fr, compose(mu, ginv), HomPoint{w, x}, pol);
    double rhs = norm_delta(ginv * a, fr, mu, HomPoint{w, ginv * x}, pol);
    gd::require_tame_positive(lhs);
    gd::require_tame_positive(rhs);
    if (std::min(lhs, rhs) < 1e-12) throw NearSingularity(SingularKind::Zero, 0, 0, lhs);
    return make_deviation(lhs, rhs);
  });
  if (worst >= 1e-8) {
    note = dev_note("vertex norm equivariance", worst, 1e-8);
    return false;
  }

  if (!check_difference(2, 3, 1)) {
    note = "cubic weight shift is not exact at the polynomial level";
    return false;
  }
  for (int m = 2; m <= 4; ++m)
    if (!check_subdivision(2, 3, m)) {
      note = "cubic weight subdivision is not exact at the polynomial level";
      return false;
    }
  worst = worst_of(s, 30, [](SampleStream& t) {
    Complex tau = gd::half_plane(t, t.integer(0, 1) == 1, 0.2, 0.8);
    Complex sigma = gd::half_plane(t, t.integer(0, 1) == 1, 0.2, 0.8);
    Complex z = t.box(-0.6, 0.6, -0.6, 0.6);
    double lhs = h3(z + tau, tau, sigma);
    double rhs = h2(z, sigma) * h3(z, tau, sigma);
    gd::require_tame_positive(lhs);
    gd::require_tame_positive(rhs);
    DeviationReport d = make_deviation(lhs, rhs);
    Complex tau2 = gd::half_plane(t, t.integer(0, 1) == 1, 0.15, 0.5);
    long long n = t.integer(2, 3);
    double prod = 1.0;
    for (long long j = 0; j < n; ++j)
      prod *= h3(z + static_cast<double>(j) * tau2, static_cast<double>(n) * tau2, sigma);
    double split = h3(z, tau2, sigma);
    gd::require_tame_positive(prod);
    gd::require_tame_positive(split);
    return gd::worse(d, make_deviation(split, prod));
  });
  if (worst >= 1e-12) {
    note = dev_note("cubic weight shift and subdivision", worst, 1e-12);
    return false;
  }

  worst = worst_of(s, 40, [](SampleStream& t) {
    std::size_t n = static_cast<std::size_t>(t.integer(2, 5));
    for (int tries = 0; tries < 300; ++tries) {
      std::vector<Complex> zs(n), ws(n);
      bool ok = true;
      for (auto& z : zs) {
        z = t.box(-1, 1, -1, 1);
        if (std::abs(z) < 0.2) ok = false;
      }
      for (auto& w : ws) {
        w = t.box(-1, 1, -1, 1);
        if (std::abs(w) < 0.25) ok = false;
      }
      if (!ok) continue;
      for (std::size_t i = 0; i < n && ok; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (std::abs((ws[i] / ws[j]).imag()) < 5e-2) {
            ok = false;
            break;
          }
      if (!ok) continue;
      DeviationReport rep = im_product_identity_check(zs, ws);
      if (std::abs(rep.lhs) < 1e-2) continue;
      return rep;
    }
    throw std::runtime_error("rejection budget exhausted");
  });
  if (worst >= 1e-10) {
    note = dev_note("imaginary-part product splitting", worst, 1e-10);
    return false;
  }

  const LatticeVector e1{{1, 0, 0}}, e2{{0, 1, 0}}, e3{{0, 0, 1}};
  const std::vector<std::pair<LatticeVector, LatticeVector>> oracle_pairs = {
      {e1, e2}, {e1, LatticeVector{{1, 2, 0}}}, {e2, e3}};
  worst = 0.0;
  for (const auto& [a, b] : oracle_pairs) {
    worst = std::max(worst, worst_of(s, 2, [&pol, &a, &b](SampleStream& t) {
                       auto uni = [&t] { return t.uniform(); };
                       HomPoint p{t.box(-0.4, 0.4, -0.3, 0.3), sample_pair_domain(a, b, uni)};
                       double series = h_ab_series_oracle(a, b, p, pol);
                       double closed = h_ab(a, b, p);
                       gd::require_tame_positive(series);
                       gd::require_tame_positive(closed);
                       return make_deviation(series, closed);
                     }));
  }
  if (worst >= 1e-6) {
    note = dev_note("pair weight series oracle", worst, 1e-6);
    return false;
  }
  return true;
}

// --- criterion 10: curvature ------------------------------------------------

bool criterion_curvature(std::string& note) {
  SampleStream s(10001);
  auto refined = [](auto&& f, const std::vector<Complex>& at, int k, int l) {
    Complex coarse = gd::fd_mixed(f, at, k, l, 2e-3);
    Complex fine = gd::fd_mixed(f, at, k, l, 1e-3);
    return (4.0 * fine - coarse) / 3.0;
  };
  double worst = worst_of(s, 12, [&refined](SampleStream& t) {
    Complex z = t.box(-0.5, 0.5, -0.5, 0.5);
    Complex tau = gd::half_plane(t, t.integer(0, 1) == 1, 0.25, 0.9);
    TwoFormCoefficients c = curvature_h2(z, tau);
    TwoFormCoefficients fd;
    fd.n = 2;
    auto logw = [](const std::vector<Complex>& q) { return std::log(h2(q[0], q[1])); };
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l)
        fd.m[k][l] = Complex(0.0, -1.0 / (2.0 * k_pi)) * refined(logw, {z, tau}, k, l);
    return gd::matrix_deviation(c, fd);
  });
  if (worst >= 1e-5) {
    note = dev_note("quadratic weight curvature vs finite differences", worst, 1e-5);
    return false;
  }
  worst = worst_of(s, 8, [&refined](SampleStream& t) {
    Complex z = t.box(-0.5, 0.5, -0.5, 0.5);
    Complex tau = gd::half_plane(t, t.integer(0, 1) == 1, 0.3, 0.9);
    Complex sigma = gd::half_plane(t, t.integer(0, 1) == 1, 0.3, 0.9);
    TwoFormCoefficients c = curvature_h3(z, tau, sigma);
    TwoFormCoefficients fd;
    fd.n = 3;
    auto logw = [](const std::vector<Complex>& q) { return std::log(h3(q[0], q[1], q[2])); };
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) fd.m[k][l] = -refined(logw, {z, tau, sigma}, k, l);
    return gd::matrix_deviation(c, fd);
  });
  if (worst >= 1e-5) {
    note = dev_note("cubic weight curvature vs finite differences", worst, 1e-5);
    return false;
  }
  auto start = std::chrono::steady_clock::now();
  double up = fibre_integral_h2(Complex(0.13, 0.62), 200);
  double down = fibre_integral_h2(Complex(-0.21, -0.55), 200);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (std::abs(up - 1.0) > 1e-3 || std::abs(down - 1.0) > 1e-3) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "fibre integrals %.6f and %.6f stray from one", up, down);
    note = buf;
    return false;
  }
  if (secs >= 10.0) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "grid integration took %.1f s", secs);
    note = buf;
    return false;
  }
  return true;
}

// --- criterion 11: reproducibility through the command line -----------------

bool criterion_reproducibility(const std::string& cli, std::string& note) {
  auto run = [&cli](std::string& out) {
    std::string cmd = "'" + cli + "' check-all --seed 42 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return -1;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  std::string first, second;
  int rc1 = run(first);
  int rc2 = run(second);
  if (rc1 != 0 || rc2 != 0) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "runner exit codes %d and %d", rc1, rc2);
    note = buf;
    return false;
  }
  nlohmann::json a = nlohmann::json::parse(first);
  nlohmann::json b = nlohmann::json::parse(second);
  for (auto& entry : a) entry.erase("wall_time_ms");
  for (auto& entry : b) entry.erase("wall_time_ms");
  if (a.empty()) {
    note = "no reports produced";
    return false;
  }
  if (a != b) {
    note = "reports differ between identically seeded runs";
    return false;
  }
  for (auto& entry : a)
    if (!entry.value("pass", false)) {
      note = "failing check in the full run: " + entry.value("identity", std::string{});
      return false;
    }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli-binary>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];
  struct Criterion {
    int id;
    const char* label;
    std::function<bool(std::string&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "exact rational polynomial tables and identities", criterion_bernoulli_exact},
      {2, "theta functional equations", criterion_theta_functional},
      {3, "theta modular multiplier and quadratic relation", criterion_theta_modular},
      {4, "elliptic gamma equation suite", criterion_gamma_equations},
      {5, "cyclic product relations of orders two and three", criterion_cyclic_products},
      {6, "pair products, triangle relations, cone oracle", criterion_wedge_layer},
      {7, "cocycle identities and integer coboundary", criterion_cocycles},
      {8, "fundamental set sizes and orbit counts", criterion_lattice_combinatorics},
      {9, "hermitian weight identity suite", criterion_hermitian},
      {10, "curvature matrices and fibre integral", criterion_curvature},
      {11, "identically seeded full runs agree", [&cli](std::string& n) {
         return criterion_reproducibility(cli, n);
       }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool ok = false;
    auto start = std::chrono::steady_clock::now();
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = e.what();
      ok = false;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2d/11  %-52s (%5.1f s)\n", ok ? "PASS" : "FAIL", c.id, c.label, secs);
    if (!ok) {
      ++failed;
      if (!detail.empty()) std::printf("          %s\n", detail.c_str());
    }
    std::fflush(stdout);
  }
  if (failed == 0) {
    std::printf("all 11 acceptance criteria satisfied\n");
    return 0;
  }
  std::printf("%d of 11 acceptance criteria failed\n", failed);
  return 1;
}
