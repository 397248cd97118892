#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace gerbe {

// Controls infinite-product truncation: `tol` bounds the log of the neglected
// tail, `max_terms` caps the number of factors before giving up.
struct TruncationPolicy {
  double tol = 1e-14;
  long long max_terms = 4'000'000;
};

// Filled on request by evaluators: the tail bound actually achieved and the
// number of factors consumed.
struct EvalInfo {
  double tail_bound = 0.0;
  long long terms = 0;
};

class MaxTermsExceeded : public std::runtime_error {
 public:
  explicit MaxTermsExceeded(const std::string& what) : std::runtime_error(what) {}
};

class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

enum class SingularKind { Zero, Pole };

// Raised when an evaluation point sits within 1e-13 of the zero or pole set:
// a product factor |1 - u| fell below the threshold without vanishing
// exactly, or a factor of a denominator vanished.
class NearSingularity : public std::runtime_error {
 public:
  NearSingularity(SingularKind kind, long long j, long long k, double magnitude)
      : std::runtime_error(std::string(kind == SingularKind::Zero ? "zero" : "pole") +
                           " factor at index (" + std::to_string(j) + "," + std::to_string(k) +
                           "), |1-u| = " + std::to_string(magnitude)),
        kind(kind),
        j(j),
        k(k),
        magnitude(magnitude) {}

  SingularKind kind;
  long long j, k;
  double magnitude;

  NearSingularity flipped() const {
    return NearSingularity(kind == SingularKind::Zero ? SingularKind::Pole : SingularKind::Zero, j,
                           k, magnitude);
  }
};

inline constexpr double k_singular_tol = 1e-13;

// Two sides of an identity with their absolute and relative deviation; the
// relative deviation is normalized by the larger magnitude.
struct DeviationReport {
  std::complex<double> lhs{0.0, 0.0};
  std::complex<double> rhs{0.0, 0.0};
  double abs_dev = 0.0;
  double rel_dev = 0.0;
};

inline DeviationReport make_deviation(std::complex<double> lhs, std::complex<double> rhs) {
  DeviationReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_dev = std::abs(lhs - rhs);
  double scale = std::max(std::abs(lhs), std::abs(rhs));
  r.rel_dev = scale > 0 ? r.abs_dev / scale : r.abs_dev;
  return r;
}

}  // namespace gerbe
