#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gerbe/hermitian.hpp"

namespace gerbe {

// ---------------------------------------------------------------------------
// Deterministic sampling
//
// Every random quantity in a check run is a pure function of a 64-bit seed
// and a draw counter, so a report can be reproduced from (identity, seed,
// samples) alone, on any platform with IEEE doubles.
// ---------------------------------------------------------------------------

// SplitMix64 finalizer: bijective 64-bit mixing.
inline std::uint64_t mix_bits(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// FNV-1a over the bytes of a name.
inline std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Seed of the per-identity substream: identities draw from disjoint streams
// even when checked under one run seed.
inline std::uint64_t derive_stream_seed(std::uint64_t run_seed, std::string_view name) {
  return mix_bits(run_seed ^ hash_name(name));
}

// Counter-based generator: draw k returns mix_bits(seed + (k+1) * golden),
// with golden = 2^64 / phi rounded to odd. Uniform doubles take the top 53
// bits; complex normals use the Box-Muller map on two consecutive uniforms.
class SampleStream {
 public:
  explicit SampleStream(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t raw() { return mix_bits(seed_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

  double uniform() { return static_cast<double>(raw() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive integer range.
  long long integer(long long lo, long long hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long long>(raw() % span);
  }

  Complex box(double re_lo, double re_hi, double im_lo, double im_hi) {
    double re = uniform(re_lo, re_hi);
    double im = uniform(im_lo, im_hi);
    return {re, im};
  }

  // Complex number whose real and imaginary parts are independent standard
  // normals: u1, u2 consecutive uniforms (a zero u1 is replaced by 2^-53),
  // radius sqrt(-2 ln u1), angle 2 pi u2.
  Complex normal() {
    double u1 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double u2 = uniform();
    double rad = std::sqrt(-2.0 * std::log(u1));
    double ang = 2.0 * k_pi * u2;
    return {rad * std::cos(ang), rad * std::sin(ang)};
  }

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct CheckFailure {
  long long sample = 0;  // zero-based sample index, -1 for a run-level failure
  double rel_dev = 0.0;
  std::string reason;
};

struct CheckReport {
  std::string identity;
  long long samples = 0;
  std::uint64_t seed = 0;
  double max_abs_dev = 0.0;
  double max_rel_dev = 0.0;
  std::vector<CheckFailure> failures;
  bool pass = false;
  double wall_time_ms = 0.0;
};

inline nlohmann::ordered_json to_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["identity"] = r.identity;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["max_abs_dev"] = r.max_abs_dev;
  j["max_rel_dev"] = r.max_rel_dev;
  nlohmann::ordered_json fails = nlohmann::ordered_json::array();
  for (const CheckFailure& f : r.failures) {
    nlohmann::ordered_json jf;
    jf["sample"] = f.sample;
    jf["rel_dev"] = f.rel_dev;
    jf["reason"] = f.reason;
    fails.push_back(std::move(jf));
  }
  j["failures"] = std::move(fails);
  j["pass"] = r.pass;
  j["wall_time_ms"] = r.wall_time_ms;
  return j;
}

inline std::string format_summary_line(const CheckReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s %-28s samples=%-4lld max_rel_dev=%.3e",
                r.pass ? "PASS" : "FAIL", r.identity.c_str(), r.samples, r.max_rel_dev);
  return buf;
}

// One verifiable identity: a stable name, a plain-language description for
// listings, per-identity defaults, and a sampler that draws one random
// configuration from the stream and returns the observed deviation. The
// sampler signals an unusable draw by throwing a std::runtime_error (domain
// violations, near-singular configurations, truncation overruns); the runner
// then moves on to fresh draws from the same stream.
struct IdentitySpec {
  std::string name;
  std::string description;
  long long default_samples = 50;
  double default_tol = 1e-8;
  std::function<DeviationReport(SampleStream&, const TruncationPolicy&)> draw;
};

// ---------------------------------------------------------------------------
// Shared draw helpers
// ---------------------------------------------------------------------------

namespace detail {

inline DeviationReport worse(const DeviationReport& a, const DeviationReport& b) {
  return a.rel_dev >= b.rel_dev ? a : b;
}

inline void require_tame(Complex v) {
  double m = std::abs(v);
  if (!std::isfinite(m)) throw NearSingularity(SingularKind::Pole, 0, 0, m);
  if (m < 1e-40) throw NearSingularity(SingularKind::Zero, 0, 0, m);
  if (m > 1e40) throw NearSingularity(SingularKind::Pole, 0, 0, m);
}

inline void require_tame_positive(double v) {
  if (!std::isfinite(v) || v < 1e-60 || v > 1e60)
    throw NearSingularity(v < 1.0 ? SingularKind::Zero : SingularKind::Pole, 0, 0, v);
}

// Nonreal modulus with |Im| in [lo, hi].
inline Complex half_plane(SampleStream& s, bool upper, double lo = 0.2, double hi = 0.9) {
  double re = s.uniform(-0.45, 0.45);
  double im = s.uniform(lo, hi);
  return {re, upper ? im : -im};
}

inline Complex small_z(SampleStream& s) {
  for (int tries = 0; tries < 64; ++tries) {
    Complex z = 0.3 * s.normal();
    if (std::abs(z) <= 1.2) return z;
  }
  return {0.1, 0.1};
}

inline LatticeVector draw_primitive(SampleStream& s, long long bound) {
  for (int tries = 0; tries < 256; ++tries) {
    LatticeVector v{{s.integer(-bound, bound), s.integer(-bound, bound),
                     s.integer(-bound, bound)}};
    if (is_primitive(v)) return v;
  }
  throw std::runtime_error("draw_primitive: rejection budget exhausted");
}

inline std::pair<LatticeVector, LatticeVector> draw_independent_pair(SampleStream& s,
                                                                     long long bound) {
  for (int tries = 0; tries < 256; ++tries) {
    LatticeVector a = draw_primitive(s, bound);
    LatticeVector b = draw_primitive(s, bound);
    if (direction_vector(a, b).second != 0) return {a, b};
  }
  throw std::runtime_error("draw_independent_pair: rejection budget exhausted");
}

inline Mat3 draw_unimodular(SampleStream& s, int shears = 4) {
  Mat3 g;
  for (int k = 0; k < shears; ++k) {
    long long i = s.integer(0, 2);
    long long j = s.integer(0, 2);
    long long c = s.integer(-1, 1);
    if (i == j) continue;
    Mat3 h;
    h.m[i][j] = c;
    g = g * h;
  }
  return g;
}

inline Mat2 mul2(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

inline Mat2 draw_sl2(SampleStream& s, int shears = 3) {
  Mat2 g{{{1, 0}, {0, 1}}};
  for (int k = 0; k < shears; ++k) {
    long long c = s.integer(-2, 2);
    Mat2 h{{{1, 0}, {0, 1}}};
    if (s.integer(0, 1) == 0)
      h[0][1] = c;
    else
      h[1][0] = c;
    g = mul2(g, h);
  }
  return g;
}

inline CoVector small_covector(SampleStream& s, long long bound) {
  return CoVector{{s.integer(-bound, bound), s.integer(-bound, bound),
                   s.integer(-bound, bound)}};
}

// Point of the positivity domain of a single vector, by rejection.
inline std::array<Complex, 3> vertex_point(const LatticeVector& a, SampleStream& s) {
  for (int tries = 0; tries < 400; ++tries) {
    std::array<Complex, 3> x{s.box(-1, 1, -1, 1), s.box(-1, 1, -1, 1), s.box(-1, 1, -1, 1)};
    if (in_domain(a, x)) return x;
  }
  throw std::runtime_error("vertex_point: rejection budget exhausted");
}

// Overlap point for a planar (dependent) triple, by rejection.
inline std::array<Complex, 3> planar_triple_point(const LatticeVector& a, const LatticeVector& b,
                                                  const LatticeVector& c, SampleStream& s) {
  for (int tries = 0; tries < 600; ++tries) {
    std::array<Complex, 3> x{s.box(-1, 1, -1, 1), s.box(-1, 1, -1, 1), s.box(-1, 1, -1, 1)};
    if (in_domain(a, x) && in_domain(b, x) && in_domain(c, x)) return x;
  }
  throw std::runtime_error("planar_triple_point: rejection budget exhausted");
}

// Mixed Wirtinger second derivative d_k dbar_l of a real-valued function of
// several complex variables, by central differences on real coordinates.
template <typename F>
Complex fd_mixed(F&& f, const std::vector<Complex>& at, int k, int l, double h) {
  auto value = [&](int ck, double sk, int cl, double sl) {
    std::vector<Complex> q = at;
    q[k] += ck == 0 ? Complex(sk, 0.0) : Complex(0.0, sk);
    q[l] += cl == 0 ? Complex(sl, 0.0) : Complex(0.0, sl);
    return f(q);
  };
  auto cross = [&](int ck, int cl) {
    return (value(ck, h, cl, h) - value(ck, h, cl, -h) - value(ck, -h, cl, h) +
            value(ck, -h, cl, -h)) /
           (4.0 * h * h);
  };
  double dxx = cross(0, 0);
  double dyy = cross(1, 1);
  double dxy = cross(0, 1);
  double dyx = cross(1, 0);
  return 0.25 * Complex(dxx + dyy, dxy - dyx);
}

inline double matrix_scale(const TwoFormCoefficients& c) {
  double m = 0.0;
  for (int i = 0; i < c.n; ++i)
    for (int j = 0; j < c.n; ++j) m = std::max(m, std::abs(c.m[i][j]));
  return m;
}

// Worst-entry comparison of two coefficient matrices, relative to the larger
// entry scale of the first.
inline DeviationReport matrix_deviation(const TwoFormCoefficients& got,
                                        const TwoFormCoefficients& expected) {
  double scale = std::max(matrix_scale(got), 1e-30);
  DeviationReport rep;
  for (int i = 0; i < got.n; ++i) {
    for (int j = 0; j < got.n; ++j) {
      double diff = std::abs(got.m[i][j] - expected.m[i][j]);
      if (diff >= rep.abs_dev) {
        rep.lhs = got.m[i][j];
        rep.rhs = expected.m[i][j];
        rep.abs_dev = diff;
      }
    }
  }
  rep.rel_dev = rep.abs_dev / scale;
  return rep;
}

inline DeviationReport boolean_deviation(bool ok) {
  return make_deviation(Complex{1.0, 0.0}, Complex{ok ? 1.0 : 0.0, 0.0});
}

// Coordinates of a covector in the framing basis of a.
inline CoVector framing_coordinates(const Framing& fr, const LatticeVector& a,
                                    const CoVector& v) {
  FramingBasis f = fr(a);
  Mat3 rows;
  for (int i = 0; i < 3; ++i) rows.m[i] = f[i].e;
  Mat3 inv = rows.adjugate();
  CoVector out;
  for (int i = 0; i < 3; ++i) {
    long long acc = 0;
    for (int j = 0; j < 3; ++j) acc += v[j] * inv.m[j][i];
    out[i] = acc;
  }
  return out;
}

std::vector<IdentitySpec> build_registry();

}  // namespace detail

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

inline const std::vector<IdentitySpec>& identity_registry() {
  static const std::vector<IdentitySpec> registry = detail::build_registry();
  return registry;
}

inline const IdentitySpec& find_identity(const std::string& name) {
  for (const IdentitySpec& spec : identity_registry())
    if (spec.name == name) return spec;
  throw std::invalid_argument("unknown identity '" + name + "'");
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

inline CheckReport run_spec(const IdentitySpec& spec, std::optional<long long> samples_opt = {},
                            std::uint64_t seed = 42, std::optional<double> tol_opt = {},
                            const TruncationPolicy& pol = {}) {
  const long long samples = samples_opt.value_or(spec.default_samples);
  const double tol = tol_opt.value_or(spec.default_tol);
  if (samples < 1) throw std::invalid_argument("run_spec: sample count must be positive");

  auto t0 = std::chrono::steady_clock::now();
  CheckReport rep;
  rep.identity = spec.name;
  rep.samples = samples;
  rep.seed = seed;

  SampleStream stream(derive_stream_seed(seed, spec.name));
  const long long resample_cap = 10 * samples;
  long long resamples = 0;
  bool inconclusive = false;

  for (long long k = 0; k < samples && !inconclusive; ++k) {
    DeviationReport d;
    for (;;) {
      if (resamples > resample_cap) {
        inconclusive = true;
        break;
      }
      try {
        d = spec.draw(stream, pol);
      } catch (const std::runtime_error&) {
        ++resamples;
        continue;
      } catch (const DomainError&) {
        ++resamples;
        continue;
      }
      if (!std::isfinite(d.abs_dev) || !std::isfinite(d.rel_dev)) {
        ++resamples;
        continue;
      }
      break;
    }
    if (inconclusive) break;
    rep.max_abs_dev = std::max(rep.max_abs_dev, d.abs_dev);
    rep.max_rel_dev = std::max(rep.max_rel_dev, d.rel_dev);
    if (!(d.rel_dev < tol))
      rep.failures.push_back({k, d.rel_dev, "relative deviation at or above tolerance"});
  }

  if (inconclusive) rep.failures.push_back({-1, 0.0, "resample budget exhausted"});
  rep.pass = !inconclusive && rep.failures.empty() && rep.max_rel_dev < tol;
  rep.wall_time_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline CheckReport run_check(const std::string& name, std::optional<long long> samples_opt = {},
                             std::uint64_t seed = 42, std::optional<double> tol_opt = {},
                             const TruncationPolicy& pol = {}) {
  return run_spec(find_identity(name), samples_opt, seed, tol_opt, pol);
}

struct CheckOverride {
  std::optional<long long> samples;
  std::optional<double> tol;
};

inline std::vector<CheckReport> run_all(std::uint64_t seed = 42,
                                        const std::map<std::string, CheckOverride>& overrides = {},
                                        const TruncationPolicy& pol = {}) {
  std::vector<CheckReport> out;
  out.reserve(identity_registry().size());
  for (const IdentitySpec& spec : identity_registry()) {
    std::optional<long long> samples;
    std::optional<double> tol;
    auto it = overrides.find(spec.name);
    if (it != overrides.end()) {
      samples = it->second.samples;
      tol = it->second.tol;
    }
    out.push_back(run_check(spec.name, samples, seed, tol, pol));
  }
  return out;
}

// Per-identity overrides from a JSON object of the form
//   { "identity-name": { "samples": 40, "tol": 1e-9 }, ... }
// Unknown identities or fields are rejected.
inline std::map<std::string, CheckOverride> parse_overrides(const nlohmann::json& config) {
  if (!config.is_object())
    throw std::invalid_argument("check configuration must be a JSON object");
  std::map<std::string, CheckOverride> out;
  for (auto it = config.begin(); it != config.end(); ++it) {
    find_identity(it.key());
    const nlohmann::json& entry = it.value();
    if (!entry.is_object())
      throw std::invalid_argument("configuration entry for '" + it.key() +
                                  "' must be an object");
    CheckOverride ov;
    for (auto f = entry.begin(); f != entry.end(); ++f) {
      if (f.key() == "samples") {
        if (!f.value().is_number_integer() || f.value().get<long long>() < 1)
          throw std::invalid_argument("configuration field 'samples' must be a positive integer");
        ov.samples = f.value().get<long long>();
      } else if (f.key() == "tol") {
        if (!f.value().is_number())
          throw std::invalid_argument("configuration field 'tol' must be a number");
        ov.tol = f.value().get<double>();
      } else {
        throw std::invalid_argument("unknown configuration field '" + f.key() + "'");
      }
    }
    out[it.key()] = ov;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Identity definitions
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<IdentitySpec> build_registry() {
  std::vector<IdentitySpec> reg;
  auto add = [&reg](std::string name, std::string description, long long samples, double tol,
                    std::function<DeviationReport(SampleStream&, const TruncationPolicy&)> draw) {
    reg.push_back({std::move(name), std::move(description), samples, tol, std::move(draw)});
  };

  const LatticeVector e1{{1, 0, 0}};
  const LatticeVector e2{{0, 1, 0}};
  const LatticeVector e3{{0, 0, 1}};
  const Framing fr = Framing::canonical();

  // ---- theta function -----------------------------------------------------

  add("theta-periodicity", "theta is unchanged by unit shifts of its argument and modulus", 80,
      1e-10, [](SampleStream& s, const TruncationPolicy& pol) {
        bool up = s.integer(0, 1) == 1;
        Complex tau = half_plane(s, up);
        Complex z = small_z(s);
        Complex base = theta0(z, tau, pol);
        require_tame(base);
        return worse(make_deviation(theta0(z + 1.0, tau, pol), base),
                     make_deviation(theta0(z, tau + 1.0, pol), base));
      });

  add("theta-quasiperiodicity",
      "shifting the theta argument by the modulus multiplies by -exp(-2 pi i z)", 80, 1e-10,
      [](SampleStream& s, const TruncationPolicy& pol) {
        bool up = s.integer(0, 1) == 1;
        Complex tau = half_plane(s, up);
        Complex z = small_z(s);
        Complex base = theta0(z, tau, pol);
        require_tame(base);
        return make_deviation(theta0(z + tau, tau, pol), -e2pi(-z) * base);
      });

  add("theta-reflection", "theta at negated modulus is the reciprocal at negated argument", 80,
      1e-10, [](SampleStream& s, const TruncationPolicy& pol) {
        Complex tau = half_plane(s, true);
        Complex z = small_z(s);
        Complex a = theta0(z, -tau, pol);
        Complex b = theta0(-z, tau, pol);
        require_tame(a);
        require_tame(b);
        return make_deviation(a * b, Complex{1.0, 0.0});
      });

  add("theta-modular",
      "theta transforms under the modular group with the closed-form multiplier", 50, 1e-9,
      [](SampleStream& s, const TruncationPolicy& pol) {
        Mat2 g = draw_sl2(s);
        Complex tau = half_plane(s, true, 0.4, 1.0);
        Complex z = small_z(s);
        auto [zp, taup] = sl2_transform(g, z, tau);
        Complex m = theta_multiplier(g, z, tau);
        Complex before = theta0(z, tau, pol);
        Complex after = theta0(zp, taup, pol);
        require_tame(before);
        require_tame(after);
        require_tame(m);
        return make_deviation(before, m * after);
      });

  // ---- elliptic gamma -----------------------------------------------------

  auto gamma_moduli = [](SampleStream& s) {
    bool up_tau = s.integer(0, 1) == 1;
    bool up_sigma = s.integer(0, 1) == 1;
    return std::pair<Complex, Complex>{half_plane(s, up_tau, 0.25, 0.8),
                                       half_plane(s, up_sigma, 0.25, 0.8)};
  };

  add("gamma-shift-tau",
      "shifting the gamma argument by the first modulus multiplies by a theta factor", 60, 1e-8,
      [gamma_moduli](SampleStream& s, const TruncationPolicy& pol) {
        auto [tau, sigma] = gamma_moduli(s);
        Complex z = small_z(s);
        Complex base = elliptic_gamma(z, tau, sigma, pol);
        Complex factor = theta0(z, sigma, pol);
        require_tame(base);
        require_tame(factor);
        return make_deviation(elliptic_gamma(z + tau, tau, sigma, pol), factor * base);
      });

  add("gamma-shift-sigma",
      "shifting the gamma argument by the second modulus multiplies by a theta factor", 60, 1e-8,
      [gamma_moduli](SampleStream& s, const TruncationPolicy& pol) {
        auto [tau, sigma] = gamma_moduli(s);
        Complex z = small_z(s);
        Complex base = elliptic_gamma(z, tau, sigma, pol);
        Complex factor = theta0(z, tau, pol);
        require_tame(base);
        require_tame(factor);
        return make_deviation(elliptic_gamma(z + sigma, tau, sigma, pol), factor * base);
      });

  add("gamma-symmetry", "the elliptic gamma function is symmetric in its two moduli", 60, 1e-8,
      [gamma_moduli](SampleStream& s, const TruncationPolicy& pol) {
        auto [tau, sigma] = gamma_moduli(s);
        Complex z = small_z(s);
        Complex a = elliptic_gamma(z, tau, sigma, pol);
        require_tame(a);
        return make_deviation(a, elliptic_gamma(z, sigma, tau, pol));
      });

  add("gamma-periodicity", "the elliptic gamma function has period one in all three variables",
      60, 1e-8, [gamma_moduli](SampleStream& s, const TruncationPolicy& pol) {
        auto [tau, sigma] = gamma_moduli(s);
        Complex z = small_z(s);
        Complex base = elliptic_gamma(z, tau, sigma, pol);
        require_tame(base);
        DeviationReport d = make_deviation(elliptic_gamma(z + 1.0, tau, sigma, pol), base);
        d = worse(d, make_deviation(elliptic_gamma(z, tau + 1.0, sigma, pol), base));
        return worse(d, make_deviation(elliptic_gamma(z, tau, sigma + 1.0, pol), base));
      });

  add("inversion",
      "the elliptic gamma function times its value at negated argument and swapped, negated "
      "moduli is one",
      60, 1e-8, [gamma_moduli](SampleStream& s, const TruncationPolicy& pol) {
        auto [tau, sigma] = gamma_moduli(s);
        Complex z = small_z(s);
        Complex a = elliptic_gamma(z, tau, sigma, pol);
        Complex b = elliptic_gamma(-z, -sigma, -tau, pol);
        require_tame(a);
        require_tame(b);
        return make_deviation(a * b, Complex{1.0, 0.0});
      });

  add("gamma-composition",
      "the elliptic gamma function factors through the sum of its moduli", 40, 1e-8,
      [](SampleStream& s, const TruncationPolicy& pol) {
        Complex tau = half_plane(s, true, 0.25, 0.7);
        Complex sigma = half_plane(s, true, 0.25, 0.7);
        Complex z = small_z(s);
        Complex lhs = elliptic_gamma(z, tau, sigma, pol);
        Complex rhs = elliptic_gamma(z, tau, tau + sigma, pol) *
                      elliptic_gamma(z + sigma, tau + sigma, sigma, pol);
        require_tame(lhs);
        require_tame(rhs);
        return make_deviation(lhs, rhs);
      });

  add("narukawa-r2",
      "the cyclic theta product of order two equals the exponential of a quadratic polynomial",
      30, 1e-8, [](SampleStream& s, const TruncationPolicy& pol) {
        Complex x1 = s.box(0.7, 1.3, 0.2, 0.6);
        Complex x2 = s.box(-1.3, -0.7, 0.2, 0.6);
        Complex w = s.box(-0.3, 0.3, -0.1, 0.1);
        return narukawa_check(2, w, {x1, x2}, pol);
      });

  add("narukawa-r3",
      "the cyclic gamma product of order three equals the exponential of a cubic polynomial", 10,
      1e-8, [](SampleStream& s, const TruncationPolicy& pol) {
        const Complex omega = e2pi({1.0 / 3.0, 0.0});
        auto twist = [&s]() { return e2pi({s.uniform(-0.01, 0.01), 0.0}); };
        std::vector<Complex> x{s.uniform(0.95, 1.1) * twist(),
                               s.uniform(1.0, 1.15) * std::conj(omega) * twist(),
                               s.uniform(0.85, 1.0) * omega * twist()};
        Complex w = s.box(-0.25, 0.25, -0.08, 0.08);
        return narukawa_check(3, w, x, pol);
      });

  // ---- Bernoulli polynomials ----------------------------------------------

  add("bernoulli-difference",
      "parameter-direction differences of the Bernoulli polynomials drop to lower order exactly",
      20, 1e-12, [](SampleStream& s, const TruncationPolicy&) {
        int r = static_cast<int>(s.integer(1, 4));
        int n = static_cast<int>(s.integer(1, 5));
        int i = static_cast<int>(s.integer(1, r));
        return boolean_deviation(check_difference(r, n, i));
      });

  add("bernoulli-subdivision",
      "the Bernoulli polynomials satisfy the exact modulus-subdivision sum", 12, 1e-12,
      [](SampleStream& s, const TruncationPolicy&) {
        int r = static_cast<int>(s.integer(1, 4));
        int n = static_cast<int>(s.integer(1, 5));
        int m = static_cast<int>(s.integer(2, 4));
        return boolean_deviation(check_subdivision(r, n, m));
      });

  // ---- lattice combinatorics ----------------------------------------------

  add("fundamental-count",
      "the fundamental set of a lattice pair has exactly as many members as the pair modulus", 60,
      1e-12, [](SampleStream& s, const TruncationPolicy&) {
        auto [a, b] = draw_independent_pair(s, 3);
        long long modulus = direction_vector(a, b).second;
        long long count = static_cast<long long>(fundamental_set(a, b).size());
        return make_deviation(Complex(static_cast<double>(count), 0.0),
                              Complex(static_cast<double>(modulus), 0.0));
      });

  add("domain-equivariance",
      "membership in the positivity domain is preserved by the lattice group action", 60, 1e-12,
      [](SampleStream& s, const TruncationPolicy&) {
        LatticeVector a = draw_primitive(s, 2);
        Mat3 g = draw_unimodular(s, 3);
        std::array<Complex, 3> x{s.box(-1, 1, -1, 1), s.box(-1, 1, -1, 1), s.box(-1, 1, -1, 1)};
        std::array<Complex, 3> gx = g * x;
        auto margin = [](const LatticeVector& v, const std::array<Complex, 3>& pt) {
          FramingBasis f = framing_of(v);
          return std::imag(f[1](pt) * std::conj(f[2](pt)));
        };
        if (std::abs(margin(a, x)) < 1e-9 || std::abs(margin(g * a, gx)) < 1e-9)
          throw NearSingularity(SingularKind::Zero, 0, 0, 0.0);
        return boolean_deviation(in_domain(a, x) == in_domain(g * a, gx));
      });

  // ---- pair products over wedges ------------------------------------------

  auto uni_of = [](SampleStream& s) {
    return [&s] { return s.uniform(); };
  };

  add("wedge-inversion", "the pair product times the reversed pair product is one", 30, 1e-8,
      [uni_of](SampleStream& s, const TruncationPolicy& pol) {
        auto [a, b] = draw_independent_pair(s, 2);
        HomPoint p{s.box(-0.35, 0.35, -0.3, 0.3), sample_pair_domain(a, b, uni_of(s))};
        Complex f = wedge_gamma(a, b, p, pol);
        Complex r = wedge_gamma(b, a, p, pol);
        require_tame(f);
        require_tame(r);
        return make_deviation(f * r, Complex{1.0, 0.0});
      });

  add("wedge-cone-product",
      "the finite pair product agrees with direct summation over the cone between the pair", 20,
      1e-8, [uni_of, e1, e2, e3](SampleStream& s, const TruncationPolicy& pol) {
        static const std::vector<std::pair<LatticeVector, LatticeVector>> pairs = {
            {e1, e2},
            {e2, e3},
            {e1, LatticeVector{{1, 2, 0}}},
            {e1, LatticeVector{{2, 3, 0}}},
            {LatticeVector{{1, 1, 0}}, LatticeVector{{0, 1, 1}}},
            {e1, LatticeVector{{1, 3, 0}}},
        };
        const auto& [a, b] = pairs[static_cast<std::size_t>(s.integer(0, 5))];
        WedgeFrame f = wedge_frame(a, b);
        auto x = sample_pair_domain(a, b, uni_of(s));
        Complex gx = f.gamma(x);
        if (!((f.alpha(x) / gx).imag() < 0.0 && (f.beta(x) / gx).imag() > 0.0))
          throw NearSingularity(SingularKind::Zero, 0, 0, 0.0);
        HomPoint p{s.box(-0.35, 0.35, -0.3, 0.3), x};
        Complex finite = wedge_gamma(a, b, p, pol);
        Complex direct = wedge_gamma_direct(a, b, p, pol);
        require_tame(finite);
        require_tame(direct);
        return make_deviation(finite, direct);
      });

  auto triple_product = [uni_of](const LatticeVector& a, const LatticeVector& b,
                                 const LatticeVector& c, SampleStream& s,
                                 const TruncationPolicy& pol) {
    std::array<Complex, 3> x = det3(a, b, c) != 0 ? sample_triple_domain(a, b, c, uni_of(s))
                                                  : planar_triple_point(a, b, c, s);
    HomPoint p{s.box(-0.3, 0.3, -0.25, 0.25), x};
    Complex f1 = wedge_gamma(a, b, p, pol);
    Complex f2 = wedge_gamma(b, c, p, pol);
    Complex f3 = wedge_gamma(c, a, p, pol);
    require_tame(f1);
    require_tame(f2);
    require_tame(f3);
    return make_deviation(f1 * f2 * f3, cocycle_phi_abc(a, b, c, p));
  };

  add("three-term-e1e2e3",
      "the pair products around the coordinate basis triangle multiply to the closed exponential",
      30, 1e-8, [triple_product, e1, e2, e3](SampleStream& s, const TruncationPolicy& pol) {
        return triple_product(e1, e2, e3, s, pol);
      });

  add("three-term-planar",
      "the pair products around a triangle inside one plane multiply to one", 30, 1e-8,
      [triple_product, e1, e2](SampleStream& s, const TruncationPolicy& pol) {
        return triple_product(e1, LatticeVector{{1, -1, 0}}, e2, s, pol);
      });

  add("three-term-skew",
      "the pair products around a skew triangle with a modulus-two edge multiply to the closed "
      "exponential",
      25, 1e-8, [triple_product, e1, e3](SampleStream& s, const TruncationPolicy& pol) {
        return triple_product(e1, LatticeVector{{1, 2, 0}}, e3, s, pol);
      });

  add("wedge-equivariance",
      "the pair product at a transformed pair equals the pair product at the pulled-back point",
      25, 1e-8, [uni_of](SampleStream& s, const TruncationPolicy& pol) {
        auto [a, b] = draw_independent_pair(s, 2);
        Mat3 g = draw_unimodular(s);
        LatticeVector ga = g * a, gb = g * b;
        if (direction_vector(ga, gb).second == 0)
          throw NearSingularity(SingularKind::Zero, 0, 0, 0.0);
        HomPoint p{s.box(-0.35, 0.35, -0.3, 0.3), sample_pair_domain(ga, gb, uni_of(s))};
        GroupElement el{g, CoVector{{0, 0, 0}}};
        HomPoint q = group_act(inverse(el), p);
        Complex lhs = wedge_gamma(ga, gb, p, pol);
        Complex rhs = wedge_gamma(a, b, q, pol);
        require_tame(lhs);
        require_tame(rhs);
        return make_deviation(lhs, rhs);
      });

  // ---- cocycles -----------------------------------------------------------

  add("translation-cocycle",
      "the translation part of the vertex cocycle reduces to an exact integer coboundary", 25,
      1e-12, [fr](SampleStream& s, const TruncationPolicy&) {
        LatticeVector a = draw_primitive(s, 3);
        CoVector lam = small_covector(s, 3);
        CoVector mu = small_covector(s, 3);
        CoVector nu = small_covector(s, 3);

        RationalFunction p1 = poly_Pa(a, fr, mu, nu);
        RationalFunction p2 = poly_Pa(a, fr, lam + mu, nu);
        RationalFunction p3 = poly_Pa(a, fr, lam, mu + nu);
        RationalFunction p4 = poly_Pa(a, fr, lam, mu);

        for (int tries = 0; tries < 50; ++tries) {
          Rational w(s.integer(-3, 3), 7);
          std::array<Rational, 3> x{Rational(s.integer(1, 9), 2), Rational(s.integer(1, 9), 3),
                                    Rational(s.integer(1, 9), 5)};
          std::vector<Rational> pt{w, x[0], x[1], x[2]};
          if (p1.den.eval(pt) == 0) continue;
          Rational lamx = Rational(lam[0]) * x[0] + Rational(lam[1]) * x[1] +
                          Rational(lam[2]) * x[2];
          std::vector<Rational> shifted{w + lamx, x[0], x[1], x[2]};
          Rational dpsi = -p1.eval(shifted) + p2.eval(pt) - p3.eval(pt) + p4.eval(pt);
          CoVector cl = framing_coordinates(fr, a, lam);
          CoVector cm = framing_coordinates(fr, a, mu);
          CoVector cn = framing_coordinates(fr, a, nu);
          Rational expected = -Rational(cn[0]) * Rational(cm[1]) * Rational(cl[2]);
          DeviationReport rep;
          rep.lhs = to_double(dpsi);
          rep.rhs = to_double(expected);
          Rational diff = dpsi - expected;
          rep.abs_dev = diff == 0 ? 0.0 : std::abs(to_double(diff));
          rep.rel_dev = rep.abs_dev == 0.0
                            ? 0.0
                            : rep.abs_dev / std::max({1.0, std::abs(rep.lhs.real()),
                                                      std::abs(rep.rhs.real())});
          return rep;
        }
        throw std::runtime_error("translation-cocycle: no admissible rational point");
      });

  auto skew_x = [](SampleStream& s) {
    return std::array<Complex, 3>{s.box(-0.5, 0.5, 0.3, 0.8), s.box(-0.5, 0.5, 0.3, 0.8),
                                  s.box(-0.5, 0.5, -0.8, -0.3)};
  };

  add("cocycle-vertex", "the vertex cocycle satisfies the group associativity relation", 20, 1e-8,
      [fr, skew_x](SampleStream& s, const TruncationPolicy& pol) {
        LatticeVector a = draw_primitive(s, 2);
        auto element = [&s](bool with_matrix) {
          Mat3 g = with_matrix ? draw_unimodular(s, 3) : Mat3();
          return GroupElement{g, small_covector(s, 1)};
        };
        GroupElement g = element(s.integer(0, 1) == 0);
        GroupElement h = element(true);
        GroupElement k = element(s.integer(0, 2) != 0);
        HomPoint p{s.box(-0.4, 0.4, -0.3, 0.3), skew_x(s)};
        HomPoint q = group_act(inverse(g), p);
        Complex l1 = cocycle_phi_a(a, fr, g, h, p, pol);
        Complex l2 = cocycle_phi_a(a, fr, compose(g, h), k, p, pol);
        Complex r1 = cocycle_phi_a(a, fr, g, compose(h, k), p, pol);
        Complex r2 = cocycle_phi_a(g.g.adjugate() * a, fr, h, k, q, pol);
        require_tame(l1);
        require_tame(l2);
        require_tame(r1);
        require_tame(r2);
        return make_deviation(l1 * l2, r1 * r2);
      });

  add("cocycle-pair",
      "the pair cocycle at a product element factors through vertex corrections", 15, 1e-8,
      [fr, uni_of](SampleStream& s, const TruncationPolicy& pol) {
        auto [a, b] = draw_independent_pair(s, 2);
        auto element = [&s](bool with_matrix) {
          Mat3 g = with_matrix ? draw_unimodular(s, 3) : Mat3();
          return GroupElement{g, small_covector(s, 1)};
        };
        GroupElement g = element(true);
        GroupElement h = element(s.integer(0, 1) == 0);
        Mat3 ginv = g.g.adjugate();
        if (direction_vector(ginv * a, ginv * b).second == 0)
          throw NearSingularity(SingularKind::Zero, 0, 0, 0.0);
        HomPoint p{s.box(-0.35, 0.35, -0.3, 0.3), sample_pair_domain(a, b, uni_of(s))};
        HomPoint q = group_act(inverse(g), p);
        Complex lhs = cocycle_phi_ab(a, b, compose(g, h), p, pol);
        Complex f1 = cocycle_phi_ab(a, b, g, p, pol);
        Complex f2 = cocycle_phi_ab(ginv * a, ginv * b, h, q, pol);
        Complex v1 = cocycle_phi_a(b, fr, g, h, p, pol);
        Complex v2 = cocycle_phi_a(a, fr, g, h, p, pol);
        require_tame(lhs);
        require_tame(f1);
        require_tame(f2);
        require_tame(v1);
        require_tame(v2);
        return make_deviation(lhs, f1 * f2 * v1 / v2);
      });

  add("cocycle-edge-triple",
      "pair cocycles around a triangle reduce to a ratio of closed exponentials", 15, 1e-8,
      [uni_of](SampleStream& s, const TruncationPolicy& pol) {
        LatticeVector a = draw_primitive(s, 2);
        LatticeVector b = draw_primitive(s, 2);
        LatticeVector c = draw_primitive(s, 2);
        if (det3(a, b, c) == 0) throw NearSingularity(SingularKind::Zero, 0, 0, 0.0);
        Mat3 gm = s.integer(0, 1) == 0 ? draw_unimodular(s, 3) : Mat3();
        GroupElement g{gm, small_covector(s, 1)};
        Mat3 ginv = g.g.adjugate();
        HomPoint p{s.box(-0.3, 0.3, -0.25, 0.25), sample_triple_domain(a, b, c, uni_of(s))};
        HomPoint q = group_act(inverse(g), p);
        Complex f1 = cocycle_phi_ab(a, b, g, p, pol);
        Complex f2 = cocycle_phi_ab(b, c, g, p, pol);
        Complex f3 = cocycle_phi_ab(c, a, g, p, pol);
        Complex rA = cocycle_phi_abc(a, b, c, p);
        Complex rB = cocycle_phi_abc(ginv * a, ginv * b, ginv * c, q);
        require_tame(f1);
        require_tame(f2);
        require_tame(f3);
        require_tame(rA);
        require_tame(rB);
        return make_deviation(f1 * f2 * f3, rA / rB);
      });

  // ---- hermitian weights --------------------------------------------------

  add("hermitian-theta-invariance",
      "the weighted squared modulus of theta is invariant under the affine modular group", 50,
      1e-9, [](SampleStream& s, const TruncationPolicy& pol) {
        for (int tries = 0; tries < 200; ++tries) {
          Complex x1 = s.box(-1, 1, -1, 1);
          Complex x2 = s.box(-1, 1, -1, 1);
          Complex w = s.box(-0.7, 0.7, -0.7, 0.7);
          if (std::abs(x2) < 0.2 || std::abs((x1 / x2).imag()) < 0.1) continue;
          Mat2 g = draw_sl2(s, 4);
          long long n1 = s.integer(-2, 2), n2 = s.integer(-2, 2);
          Complex y1 = static_cast<double>(g[0][0]) * x1 + static_cast<double>(g[0][1]) * x2;
          Complex y2 = static_cast<double>(g[1][0]) * x1 + static_cast<double>(g[1][1]) * x2;
          Complex wp = w - static_cast<double>(n1) * x1 - static_cast<double>(n2) * x2;
          if (std::abs(y2) < 0.1 || std::abs((y1 / y2).imag()) < 0.05) continue;
          Complex th_before = theta0(w / x2, x1 / x2, pol);
          Complex th_after = theta0(wp / y2, y1 / y2, pol);
          if (std::abs(th_before) < 1e-6 || std::abs(th_after) < 1e-6) continue;
          double before = h2(w / x2, x1 / x2) * std::norm(th_before);
          double after = h2(wp / y2, y1 / y2) * std::norm(th_after);
          require_tame_positive(before);
          require_tame_positive(after);
          return make_deviation(before, after);
        }
        throw std::runtime_error("hermitian-theta-invariance: rejection budget exhausted");
      });

  add("hermitian-shift",
      "shifting the cubic weight argument by the first modulus splits off a quadratic weight",
      60, 1e-12, [](SampleStream& s, const TruncationPolicy&) {
        Complex tau = half_plane(s, s.integer(0, 1) == 1, 0.2, 0.8);
        Complex sigma = half_plane(s, s.integer(0, 1) == 1, 0.2, 0.8);
        Complex z = s.box(-0.6, 0.6, -0.6, 0.6);
        double lhs = h3(z + tau, tau, sigma);
        double rhs = h2(z, sigma) * h3(z, tau, sigma);
        require_tame_positive(lhs);
        require_tame_positive(rhs);
        return make_deviation(lhs, rhs);
      });

  add("hermitian-subdivision",
      "the cubic weight splits into a product over subdivision of its first modulus", 60, 1e-12,
      [](SampleStream& s, const TruncationPolicy&) {
        Complex tau = half_plane(s, s.integer(0, 1) == 1, 0.15, 0.5);
        Complex sigma = half_plane(s, s.integer(0, 1) == 1, 0.2, 0.8);
        Complex z = s.box(-0.5, 0.5, -0.5, 0.5);
        long long n = s.integer(2, 3);
        double prod = 1.0;
        for (long long j = 0; j < n; ++j)
          prod *= h3(z + static_cast<double>(j) * tau, static_cast<double>(n) * tau, sigma);
        double lhs = h3(z, tau, sigma);
        require_tame_positive(lhs);
        require_tame_positive(prod);
        return make_deviation(lhs, prod);
      });

  add("hermitian-pair-inverse", "the pair weight times the reversed pair weight is one", 40,
      1e-10, [uni_of](SampleStream& s, const TruncationPolicy&) {
        auto [a, b] = draw_independent_pair(s, 2);
        HomPoint p{s.box(-0.4, 0.4, -0.3, 0.3), sample_pair_domain(a, b, uni_of(s))};
        double f = h_ab(a, b, p);
        double r = h_ab(b, a, p);
        require_tame_positive(f);
        require_tame_positive(r);
        return make_deviation(f * r, 1.0);
      });

  add("hermitian-cocycle",
      "pair weights around a triangle compensate the squared modulus of the closed exponential",
      25, 1e-8, [uni_of, e1, e2, e3](SampleStream& s, const TruncationPolicy&) {
        static const std::vector<std::array<LatticeVector, 3>> named = {
            {e1, e2, e3},
            {e1, LatticeVector{{1, 2, 0}}, e3},
            {LatticeVector{{1, 0, 1}}, e2, e3},
        };
        std::array<LatticeVector, 3> t;
        if (s.integer(0, 1) == 0) {
          t = named[static_cast<std::size_t>(s.integer(0, 2))];
        } else {
          t = {draw_primitive(s, 2), draw_primitive(s, 2), draw_primitive(s, 2)};
          if (det3(t[0], t[1], t[2]) == 0) throw NearSingularity(SingularKind::Zero, 0, 0, 0.0);
        }
        const auto& [a, b, c] = t;
        HomPoint p{s.box(-0.3, 0.3, -0.25, 0.25), sample_triple_domain(a, b, c, uni_of(s))};
        double w1 = h_ab(a, b, p);
        double w2 = h_ab(b, c, p);
        double w3 = h_ab(c, a, p);
        require_tame_positive(w1);
        require_tame_positive(w2);
        require_tame_positive(w3);
        Complex phi = cocycle_phi_abc(a, b, c, p);
        require_tame(phi);
        return make_deviation(w1 * w2 * w3 * std::norm(phi), 1.0);
      });

  add("norm-pair-shift",
      "shifting the base point moves the pair norm by a ratio of vertex norms", 25, 1e-8,
      [fr, uni_of, e1, e2](SampleStream& s, const TruncationPolicy& pol) {
        static const std::vector<std::pair<LatticeVector, LatticeVector>> named = {
            {e1, e2}, {e1, LatticeVector{{1, 2, 0}}}};
        LatticeVector a, b;
        if (s.integer(0, 1) == 0) {
          std::tie(a, b) = named[static_cast<std::size_t>(s.integer(0, 1))];
        } else {
          std::tie(a, b) = draw_independent_pair(s, 2);
        }
        CoVector mu = small_covector(s, 1);
        std::array<Complex, 3> x = sample_pair_domain(a, b, uni_of(s));
        Complex w = s.box(-0.35, 0.35, -0.3, 0.3);
        HomPoint p{w, x};
        HomPoint shifted{w + mu(x), x};
        double lhs = norm_gamma(a, b, shifted, pol) * norm_delta(b, fr, mu, p, pol);
        double rhs = norm_gamma(a, b, p, pol) * norm_delta(a, fr, mu, p, pol);
        require_tame_positive(lhs);
        require_tame_positive(rhs);
        if (std::min(lhs, rhs) < 1e-12) throw NearSingularity(SingularKind::Zero, 0, 0, lhs);
        return make_deviation(lhs, rhs);
      });

  add("norm-vertex-product",
      "the vertex norm at a sum of translations factors through a shifted base point", 30, 1e-8,
      [fr](SampleStream& s, const TruncationPolicy& pol) {
        LatticeVector a = draw_primitive(s, 2);
        CoVector mu = small_covector(s, 2);
        CoVector nu = small_covector(s, 2);
        auto x = vertex_point(a, s);
        Complex w = s.box(-0.4, 0.4, -0.3, 0.3);
        HomPoint p{w, x};
        HomPoint shifted{w + mu(x), x};
        double lhs = norm_delta(a, fr, mu + nu, p, pol);
        double rhs = norm_delta(a, fr, mu, p, pol) * norm_delta(a, fr, nu, shifted, pol);
        require_tame_positive(lhs);
        require_tame_positive(rhs);
        if (std::min(lhs, rhs) < 1e-12) throw NearSingularity(SingularKind::Zero, 0, 0, lhs);
        return make_deviation(lhs, rhs);
      });

  add("norm-equivariance",
      "conjugating the anchor and pulling back the point preserves the vertex norm", 20, 1e-9,
      [fr](SampleStream& s, const TruncationPolicy& pol) {
        LatticeVector a = draw_primitive(s, 2);
        Mat3 g = draw_unimodular(s);
        Mat3 ginv = g.adjugate();
        CoVector mu = small_covector(s, 2);
        auto x = vertex_point(a, s);
        Complex w = s.box(-0.4, 0.4, -0.3, 0.3);
        double lhs = norm_delta(a, fr, compose(mu, ginv), HomPoint{w, x}, pol);
        double rhs = norm_delta(ginv * a, fr, mu, HomPoint{w, ginv * x}, pol);
        require_tame_positive(lhs);
        require_tame_positive(rhs);
        if (std::min(lhs, rhs) < 1e-12) throw NearSingularity(SingularKind::Zero, 0, 0, lhs);
        return make_deviation(lhs, rhs);
      });

  add("im-product-split",
      "the imaginary part of a product ratio splits into a sum over denominator factors", 50,
      1e-10, [](SampleStream& s, const TruncationPolicy&) {
        std::size_t n = static_cast<std::size_t>(s.integer(2, 4));
        for (int tries = 0; tries < 300; ++tries) {
          std::vector<Complex> zs(n), ws(n);
          bool ok = true;
          for (auto& z : zs) {
            z = s.box(-1, 1, -1, 1);
            if (std::abs(z) < 0.2) ok = false;
          }
          for (auto& w : ws) {
            w = s.box(-1, 1, -1, 1);
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
        throw std::runtime_error("im-product-split: rejection budget exhausted");
      });

  add("series-pair-weight",
      "the pair weight agrees with third-derivative extraction from a lattice exponential sum",
      6, 1e-6, [uni_of, e1, e2, e3](SampleStream& s, const TruncationPolicy& pol) {
        static const std::vector<std::pair<LatticeVector, LatticeVector>> pairs = {
            {e1, e2}, {e1, LatticeVector{{1, 2, 0}}}, {e2, e3}};
        const auto& [a, b] = pairs[static_cast<std::size_t>(s.integer(0, 2))];
        HomPoint p{s.box(-0.4, 0.4, -0.3, 0.3), sample_pair_domain(a, b, uni_of(s))};
        double series = h_ab_series_oracle(a, b, p, pol);
        double closed = h_ab(a, b, p);
        require_tame_positive(series);
        require_tame_positive(closed);
        return make_deviation(series, closed);
      });

  // ---- curvature ----------------------------------------------------------

  add("curvature-h2-consistency",
      "the quadratic weight curvature matrix matches finite differences of its logarithm", 15,
      1e-4, [](SampleStream& s, const TruncationPolicy&) {
        Complex z = s.box(-0.5, 0.5, -0.5, 0.5);
        Complex tau = half_plane(s, s.integer(0, 1) == 1, 0.25, 0.9);
        TwoFormCoefficients c = curvature_h2(z, tau);
        TwoFormCoefficients fd;
        fd.n = 2;
        auto logw = [](const std::vector<Complex>& q) { return std::log(h2(q[0], q[1])); };
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l)
            fd.m[k][l] = Complex(0.0, -1.0 / (2.0 * k_pi)) *
                         fd_mixed(logw, {z, tau}, k, l, 1e-3);
        return matrix_deviation(c, fd);
      });

  add("curvature-h3-consistency",
      "the cubic weight curvature matrix matches finite differences of its logarithm", 10, 1e-4,
      [](SampleStream& s, const TruncationPolicy&) {
        Complex z = s.box(-0.5, 0.5, -0.5, 0.5);
        Complex tau = half_plane(s, s.integer(0, 1) == 1, 0.3, 0.9);
        Complex sigma = half_plane(s, s.integer(0, 1) == 1, 0.3, 0.9);
        TwoFormCoefficients c = curvature_h3(z, tau, sigma);
        TwoFormCoefficients fd;
        fd.n = 3;
        auto logw = [](const std::vector<Complex>& q) {
          return std::log(h3(q[0], q[1], q[2]));
        };
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            fd.m[k][l] = -fd_mixed(logw, {z, tau, sigma}, k, l, 1e-3);
        return matrix_deviation(c, fd);
      });

  add("curvature-fibre", "the normalized curvature integrates to one over a lattice fibre", 5,
      1e-9, [](SampleStream& s, const TruncationPolicy&) {
        Complex tau = half_plane(s, s.integer(0, 1) == 1, 0.3, 1.0);
        return make_deviation(fibre_integral_h2(tau, 80), 1.0);
      });

  return reg;
}

}  // namespace detail

}  // namespace gerbe
