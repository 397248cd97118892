#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gerbe {

// Integer arithmetic on lattice data uses 64-bit values with overflow checks;
// the quantities reachable from smallish inputs stay far below the limit, and
// any excursion past it throws instead of wrapping.
inline long long checked_add(long long a, long long b) {
  long long r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow in lattice arithmetic");
  return r;
}
inline long long checked_mul(long long a, long long b) {
  long long r;
  if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow in lattice arithmetic");
  return r;
}

struct LatticeVector {
  std::array<long long, 3> e{0, 0, 0};

  long long& operator[](int i) { return e[i]; }
  long long operator[](int i) const { return e[i]; }
  bool operator==(const LatticeVector&) const = default;

  friend LatticeVector operator+(const LatticeVector& a, const LatticeVector& b) {
    return {{checked_add(a[0], b[0]), checked_add(a[1], b[1]), checked_add(a[2], b[2])}};
  }
  friend LatticeVector operator-(const LatticeVector& a, const LatticeVector& b) {
    return {{checked_add(a[0], -b[0]), checked_add(a[1], -b[1]), checked_add(a[2], -b[2])}};
  }
  friend LatticeVector operator-(const LatticeVector& a) { return {{-a[0], -a[1], -a[2]}}; }
  friend LatticeVector operator*(long long k, const LatticeVector& a) {
    return {{checked_mul(k, a[0]), checked_mul(k, a[1]), checked_mul(k, a[2])}};
  }
};

struct CoVector {
  std::array<long long, 3> e{0, 0, 0};

  long long& operator[](int i) { return e[i]; }
  long long operator[](int i) const { return e[i]; }
  bool operator==(const CoVector&) const = default;

  long long operator()(const LatticeVector& v) const {
    return checked_add(checked_add(checked_mul(e[0], v[0]), checked_mul(e[1], v[1])),
                       checked_mul(e[2], v[2]));
  }
  std::complex<double> operator()(const std::array<std::complex<double>, 3>& x) const {
    return static_cast<double>(e[0]) * x[0] + static_cast<double>(e[1]) * x[1] +
           static_cast<double>(e[2]) * x[2];
  }

  friend CoVector operator+(const CoVector& a, const CoVector& b) {
    return {{checked_add(a[0], b[0]), checked_add(a[1], b[1]), checked_add(a[2], b[2])}};
  }
  friend CoVector operator-(const CoVector& a, const CoVector& b) {
    return {{checked_add(a[0], -b[0]), checked_add(a[1], -b[1]), checked_add(a[2], -b[2])}};
  }
  friend CoVector operator-(const CoVector& a) { return {{-a[0], -a[1], -a[2]}}; }
  friend CoVector operator*(long long k, const CoVector& a) {
    return {{checked_mul(k, a[0]), checked_mul(k, a[1]), checked_mul(k, a[2])}};
  }
};

struct Mat3 {
  // m[i][j] is the entry in row i, column j.
  std::array<std::array<long long, 3>, 3> m{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};

  bool operator==(const Mat3&) const = default;

  static Mat3 identity() { return Mat3{}; }

  static Mat3 from_columns(const LatticeVector& c0, const LatticeVector& c1,
                           const LatticeVector& c2) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      r.m[i][0] = c0[i];
      r.m[i][1] = c1[i];
      r.m[i][2] = c2[i];
    }
    return r;
  }

  friend Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        long long acc = 0;
        for (int k = 0; k < 3; ++k) acc = checked_add(acc, checked_mul(a.m[i][k], b.m[k][j]));
        r.m[i][j] = acc;
      }
    return r;
  }

  LatticeVector operator*(const LatticeVector& v) const {
    LatticeVector r;
    for (int i = 0; i < 3; ++i) {
      long long acc = 0;
      for (int k = 0; k < 3; ++k) acc = checked_add(acc, checked_mul(m[i][k], v[k]));
      r[i] = acc;
    }
    return r;
  }

  std::array<std::complex<double>, 3> operator*(const std::array<std::complex<double>, 3>& x) const {
    std::array<std::complex<double>, 3> r;
    for (int i = 0; i < 3; ++i) {
      std::complex<double> acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += static_cast<double>(m[i][k]) * x[k];
      r[i] = acc;
    }
    return r;
  }

  long long det() const {
    long long d = 0;
    d = checked_add(d, checked_mul(m[0][0], checked_add(checked_mul(m[1][1], m[2][2]),
                                                        -checked_mul(m[1][2], m[2][1]))));
    d = checked_add(d, -checked_mul(m[0][1], checked_add(checked_mul(m[1][0], m[2][2]),
                                                         -checked_mul(m[1][2], m[2][0]))));
    d = checked_add(d, checked_mul(m[0][2], checked_add(checked_mul(m[1][0], m[2][1]),
                                                        -checked_mul(m[1][1], m[2][0]))));
    return d;
  }

  // adj(M) satisfies M * adj(M) = adj(M) * M = det(M) * I.
  Mat3 adjugate() const {
    auto minor = [&](int i, int j) {
      int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      return checked_add(checked_mul(m[r0][c0], m[r1][c1]), -checked_mul(m[r0][c1], m[r1][c0]));
    };
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = minor(j, i);
    return r;
  }
};

// Composition of a covector with a matrix: (mu . g)(v) = mu(g v).
inline CoVector compose(const CoVector& mu, const Mat3& g) {
  CoVector r;
  for (int j = 0; j < 3; ++j) {
    long long acc = 0;
    for (int i = 0; i < 3; ++i) acc = checked_add(acc, checked_mul(mu[i], g.m[i][j]));
    r[j] = acc;
  }
  return r;
}

inline long long det3(const LatticeVector& a, const LatticeVector& b, const LatticeVector& c) {
  return Mat3::from_columns(a, b, c).det();
}

inline long long gcd3(long long a, long long b, long long c) {
  return std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c));
}

inline bool is_primitive(const LatticeVector& v) { return gcd3(v[0], v[1], v[2]) == 1; }

// Deterministic extended gcd: returns (g, u, v) with u*a + v*b = g = gcd(a,b) >= 0.
struct ExtGcd {
  long long g, u, v;
};
inline ExtGcd ext_gcd(long long a, long long b) {
  long long old_r = a, r = b;
  long long old_u = 1, u = 0;
  long long old_v = 0, v = 1;
  while (r != 0) {
    long long q = old_r / r;
    long long t;
    t = old_r - q * r; old_r = r; r = t;
    t = old_u - q * u; old_u = u; u = t;
    t = old_v - q * v; old_v = v; v = t;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_u = -old_u;
    old_v = -old_v;
  }
  return {old_r, old_u, old_v};
}

// Unimodular M (det +1) with M * a = e1, for primitive a.
inline Mat3 unimodular_to_e1(const LatticeVector& a) {
  if (!is_primitive(a)) throw std::invalid_argument("unimodular_to_e1: vector not primitive");
  Mat3 m1 = Mat3::identity();
  long long g1 = a[0];
  if (a[1] != 0 || a[0] != 0) {
    auto [g, u, v] = ext_gcd(a[0], a[1]);
    m1.m[0] = {u, v, 0};
    m1.m[1] = {-a[1] / g, a[0] / g, 0};
    m1.m[2] = {0, 0, 1};
    g1 = g;
  }
  // Now m1 * a = (g1, 0, a[2]) with g1 = gcd(a0, a1) >= 0.
  auto [g, u, v] = ext_gcd(g1, a[2]);
  Mat3 m2 = Mat3::identity();
  m2.m[0] = {u, 0, v};
  m2.m[1] = {0, 1, 0};
  m2.m[2] = {-a[2] / g, 0, g1 / g};
  Mat3 m = m2 * m1;
  if (m.det() != 1 || !(m * a == LatticeVector{{1, 0, 0}}))
    throw std::logic_error("unimodular_to_e1: construction failed");
  return m;
}

using FramingBasis = std::array<CoVector, 3>;

// Canonical framing: the rows of the unimodular matrix sending a to e1.
// The rows (a1, a2, a3) satisfy a1(a) = 1, a2(a) = a3(a) = 0, det = +1.
inline FramingBasis framing_of(const LatticeVector& a) {
  Mat3 m = unimodular_to_e1(a);
  return {CoVector{m.m[0]}, CoVector{m.m[1]}, CoVector{m.m[2]}};
}

// A framing assigns a basis of covectors to every primitive vector; the
// default is the deterministic construction above, and tests may substitute
// alternatives to probe framing independence.
struct Framing {
  std::function<FramingBasis(const LatticeVector&)> map;

  FramingBasis operator()(const LatticeVector& a) const { return map(a); }

  static Framing canonical() { return Framing{[](const LatticeVector& a) { return framing_of(a); }}; }
};

// The pairing direction of an ordered pair (a, b): the primitive covector g
// and the non-negative integer s with det(a, b, x) = s * g(x).  Dependent
// pairs give s = 0 and the zero covector.
inline std::pair<CoVector, long long> direction_vector(const LatticeVector& a,
                                                       const LatticeVector& b) {
  CoVector cross{{checked_add(checked_mul(a[1], b[2]), -checked_mul(a[2], b[1])),
                  checked_add(checked_mul(a[2], b[0]), -checked_mul(a[0], b[2])),
                  checked_add(checked_mul(a[0], b[1]), -checked_mul(a[1], b[0]))}};
  long long s = gcd3(cross[0], cross[1], cross[2]);
  if (s == 0) return {CoVector{}, 0};
  return {CoVector{{cross[0] / s, cross[1] / s, cross[2] / s}}, s};
}

enum class WedgeKind { ParallelPlus, ParallelMinus, General };

struct NormalForm {
  WedgeKind kind = WedgeKind::General;
  long long r = 0;  // meaningful for General, with 0 <= r < s, gcd(r, s) = 1
  long long s = 0;
  Mat3 g;           // g*a = e1 and g*b = the normal-form partner
  LatticeVector c;  // g^{-1} e3; completes (a, b) with gamma(c) = 1 when independent
};

// Reduces an ordered pair of primitive vectors to its orbit representative
// under the diagonal SL3(Z) action: (e1, e1) / (e1, -e1) for dependent
// pairs, (e1, r e1 + s e2) with 0 <= r < s, gcd(r,s) = 1 otherwise.
inline NormalForm normal_form(const LatticeVector& a, const LatticeVector& b) {
  if (!is_primitive(a) || !is_primitive(b))
    throw std::invalid_argument("normal_form: inputs must be primitive");
  NormalForm nf;
  Mat3 g1 = unimodular_to_e1(a);
  LatticeVector bp = g1 * b;
  if (b == a || b == -a) {
    nf.kind = (b == a) ? WedgeKind::ParallelPlus : WedgeKind::ParallelMinus;
    nf.g = g1;
    nf.c = g1.adjugate() * LatticeVector{{0, 0, 1}};
    return nf;
  }
  // Move (b2, b3) to (s, 0) with the SL2 block acting on rows 2 and 3.
  auto [s, u, v] = ext_gcd(bp[1], bp[2]);
  Mat3 g2 = Mat3::identity();
  g2.m[1] = {0, u, v};
  g2.m[2] = {0, -bp[2] / s, bp[1] / s};
  // Reduce the e1 component modulo s with a shear.
  long long b1 = bp[0];
  long long r = ((b1 % s) + s) % s;
  Mat3 g3 = Mat3::identity();
  g3.m[0] = {1, (r - b1) / s, 0};
  nf.kind = WedgeKind::General;
  nf.r = r;
  nf.s = s;
  nf.g = g3 * (g2 * g1);
  nf.c = nf.g.adjugate() * LatticeVector{{0, 0, 1}};
  if (nf.g.det() != 1 || !(nf.g * a == LatticeVector{{1, 0, 0}}) ||
      !(nf.g * b == LatticeVector{{r, s, 0}}))
    throw std::logic_error("normal_form: reduction failed");
  return nf;
}

// Covectors (alpha, beta) completing the direction gamma of an independent
// pair (a, b):
//   alpha(a) = s, alpha(b) = 0, beta(a) = 0, beta(b) = s,
// normalized by alpha(c) = beta(c) = 0 against the auxiliary vector c from
// the normal form (the unique representatives modulo Z*gamma).
inline std::pair<CoVector, CoVector> complement_covectors(const LatticeVector& a,
                                                          const LatticeVector& b) {
  NormalForm nf = normal_form(a, b);
  if (nf.kind != WedgeKind::General)
    throw std::invalid_argument("complement_covectors: pair is dependent");
  CoVector alpha = compose(CoVector{{nf.s, -nf.r, 0}}, nf.g);
  CoVector beta = compose(CoVector{{0, 1, 0}}, nf.g);
  auto [gamma, s] = direction_vector(a, b);
  (void)s;
  alpha = alpha - alpha(nf.c) * gamma;
  beta = beta - beta(nf.c) * gamma;
  return {alpha, beta};
}

// Geometry shared by the cone and fundamental-set constructions for an
// independent pair: the frame (alpha, beta, gamma), the auxiliary vector c,
// and the machinery to lift a class label (m, n) = (delta(a), delta(b)) to
// the unique integral covector with delta(c) = 0, when one exists.
struct WedgeFrame {
  LatticeVector a, b, c;
  CoVector alpha, beta, gamma;
  long long s = 0;
  Mat3 basis_adj;  // adjugate of the column matrix [a b c], det = s

  // The integral covector delta with delta(a) = m, delta(b) = n, delta(c) = p,
  // if the linear solve lands on the integer lattice.
  std::optional<CoVector> lift(long long m, long long n, long long p) const {
    CoVector row{{m, n, p}};
    CoVector scaled = compose(row, basis_adj);
    if (scaled[0] % s || scaled[1] % s || scaled[2] % s) return std::nullopt;
    return CoVector{{scaled[0] / s, scaled[1] / s, scaled[2] / s}};
  }
};

inline WedgeFrame wedge_frame(const LatticeVector& a, const LatticeVector& b) {
  NormalForm nf = normal_form(a, b);
  if (nf.kind != WedgeKind::General)
    throw std::invalid_argument("wedge_frame: pair is dependent");
  WedgeFrame f;
  f.a = a;
  f.b = b;
  f.c = nf.c;
  auto [gamma, s] = direction_vector(a, b);
  f.gamma = gamma;
  f.s = s;
  auto [alpha, beta] = complement_covectors(a, b);
  f.alpha = alpha;
  f.beta = beta;
  f.basis_adj = Mat3::from_columns(a, b, nf.c).adjugate();
  return f;
}

// All integral covectors with 0 <= delta(a) < s, 0 <= delta(b) < s,
// delta(c) = 0: a complete set of representatives for the classes modulo
// Z*gamma that are trapped between the two hyperplanes; exactly s of them.
inline std::vector<CoVector> fundamental_set(const LatticeVector& a, const LatticeVector& b) {
  WedgeFrame f = wedge_frame(a, b);
  std::vector<CoVector> out;
  for (long long m = 0; m < f.s; ++m)
    for (long long n = 0; n < f.s; ++n)
      if (auto d = f.lift(m, n, 0)) out.push_back(*d);
  if (static_cast<long long>(out.size()) != f.s)
    throw std::logic_error("fundamental_set: unexpected cardinality");
  return out;
}

// All integral covectors delta with
//   0 <= delta(a) < alpha(a), 0 <= delta(b) < beta(b), 0 <= delta(c) < gamma(c),
// where alpha, beta, gamma are the directions of (b,c), (c,a), (a,b); the
// triple must be positively oriented.  The count is det(alpha, beta, gamma).
inline std::vector<CoVector> fundamental_set3(const LatticeVector& a, const LatticeVector& b,
                                              const LatticeVector& c) {
  long long d = det3(a, b, c);
  if (d <= 0) throw std::invalid_argument("fundamental_set3: triple must be positively oriented");
  auto [alpha, s_bc] = direction_vector(b, c);
  auto [beta, s_ca] = direction_vector(c, a);
  auto [gamma, s_ab] = direction_vector(a, b);
  (void)s_bc;
  (void)s_ca;
  (void)s_ab;
  long long bound_a = alpha(a), bound_b = beta(b), bound_c = gamma(c);
  Mat3 adj = Mat3::from_columns(a, b, c).adjugate();
  std::vector<CoVector> out;
  for (long long m = 0; m < bound_a; ++m)
    for (long long n = 0; n < bound_b; ++n)
      for (long long p = 0; p < bound_c; ++p) {
        CoVector scaled = compose(CoVector{{m, n, p}}, adj);
        if (scaled[0] % d || scaled[1] % d || scaled[2] % d) continue;
        out.push_back(CoVector{{scaled[0] / d, scaled[1] / d, scaled[2] / d}});
      }
  Mat3 rows;
  rows.m[0] = alpha.e;
  rows.m[1] = beta.e;
  rows.m[2] = gamma.e;
  if (static_cast<long long>(out.size()) != rows.det())
    throw std::logic_error("fundamental_set3: unexpected cardinality");
  return out;
}

// Points of the complexified space on which the constructions live.
struct HomPoint {
  std::complex<double> w{0.0, 0.0};
  std::array<std::complex<double>, 3> x{};
};

// x lies in the positivity domain of a when the canonical oriented basis
// splits off a genuinely two-dimensional upper-half part:
// Im(a2(x) * conj(a3(x))) > 0.
inline bool in_domain(const LatticeVector& a, const std::array<std::complex<double>, 3>& x) {
  FramingBasis f = framing_of(a);
  return std::imag(f[1](x) * std::conj(f[2](x))) > 0;
}

// Affine-linear group element (g, mu) acting by (w, x) -> (w - mu(x), g x).
struct GroupElement {
  Mat3 g;
  CoVector mu;

  static GroupElement identity() { return {Mat3::identity(), CoVector{}}; }

  bool operator==(const GroupElement&) const = default;
};

inline GroupElement compose(const GroupElement& first, const GroupElement& second) {
  // Left action convention: (first*second).act(p) = first.act(second.act(p)).
  return {first.g * second.g, second.mu + compose(first.mu, second.g)};
}

inline GroupElement inverse(const GroupElement& el) {
  if (el.g.det() != 1) throw std::invalid_argument("inverse: matrix must have determinant 1");
  Mat3 ginv = el.g.adjugate();
  return {ginv, -compose(el.mu, ginv)};
}

inline HomPoint group_act(const GroupElement& el, const HomPoint& p) {
  HomPoint q;
  q.w = p.w - el.mu(p.x);
  q.x = el.g * p.x;
  return q;
}

}  // namespace gerbe
