#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "gerbe/rational.hpp"

namespace gerbe {

// Sparse multivariate polynomial with exact rational coefficients.  Terms are
// keyed by exponent vectors of fixed length `nvars`.
class Polynomial {
 public:
  using Exponents = std::vector<int>;
  using TermMap = std::map<Exponents, Rational>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c) {
    Polynomial p(nvars);
    if (c != 0) p.terms_[Exponents(nvars, 0)] = c;
    return p;
  }

  static Polynomial variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::invalid_argument("variable index out of range");
    Polynomial p(nvars);
    Exponents e(nvars, 0);
    e[index] = 1;
    p.terms_[e] = 1;
    return p;
  }

  int nvars() const { return nvars_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  bool operator==(const Polynomial& o) const {
    return nvars_ == o.nvars_ && terms_ == o.terms_;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial& operator+=(const Polynomial& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    check_same(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(const Polynomial& a) {
    Polynomial r(a.nvars_);
    for (const auto& [e, c] : a.terms_) r.terms_[e] = -c;
    return r;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.check_same(b);
    Polynomial r(a.nvars_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.nvars_);
        for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
        r.add_term(e, ca * cb);
      }
    }
    return r;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  Polynomial scaled(const Rational& c) const {
    Polynomial r(nvars_);
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_[e] = k * c;
    return r;
  }

  Polynomial pow(int n) const {
    if (n < 0) throw std::invalid_argument("negative polynomial power");
    Polynomial r = constant(nvars_, 1);
    Polynomial base = *this;
    while (n > 0) {
      if (n & 1) r = r * base;
      base = base * base;
      n >>= 1;
    }
    return r;
  }

  Polynomial derivative(int var) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] == 0) continue;
      Exponents d = e;
      d[var] -= 1;
      r.add_term(d, c * e[var]);
    }
    return r;
  }

  // Substitutes images[i] for variable i; the images all share a common
  // variable set, which becomes the variable set of the result.
  Polynomial compose(const std::vector<Polynomial>& images) const {
    if (static_cast<int>(images.size()) != nvars_)
      throw std::invalid_argument("compose: expected one image per variable");
    int out_vars = images.empty() ? 0 : images[0].nvars_;
    for (const auto& im : images)
      if (im.nvars_ != out_vars) throw std::invalid_argument("compose: mismatched image arity");
    Polynomial result(out_vars);
    for (const auto& [e, c] : terms_) {
      Polynomial term = Polynomial::constant(out_vars, c);
      for (int i = 0; i < nvars_; ++i)
        if (e[i] > 0) term = term * images[i].pow(e[i]);
      result += term;
    }
    return result;
  }

  // Collects the coefficient of var^k as a polynomial in the same variable
  // set (with exponent 0 in `var`).
  Polynomial coefficient_of(int var, int k) const {
    Polynomial r(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e[var] != k) continue;
      Exponents d = e;
      d[var] = 0;
      r.add_term(d, c);
    }
    return r;
  }

  int degree(int var) const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      (void)c;
      d = std::max(d, e[var]);
    }
    return d;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
      (void)c;
      int t = 0;
      for (int x : e) t += x;
      d = std::max(d, t);
    }
    return d;
  }

  bool is_homogeneous(int deg) const {
    for (const auto& [e, c] : terms_) {
      (void)c;
      int t = 0;
      for (int x : e) t += x;
      if (t != deg) return false;
    }
    return true;
  }

  Rational eval(const std::vector<Rational>& point) const {
    check_point(point.size());
    Rational acc = 0;
    for (const auto& [e, c] : terms_) {
      Rational t = c;
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < e[i]; ++k) t *= point[i];
      acc += t;
    }
    return acc;
  }

  template <typename Scalar>
  Scalar eval_numeric(const std::vector<Scalar>& point) const {
    check_point(point.size());
    Scalar acc = Scalar(0);
    for (const auto& [e, c] : terms_) {
      Scalar t = coeff_as<Scalar>(c);
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < e[i]; ++k) t *= point[i];
      acc += t;
    }
    return acc;
  }

  void add_term(const Exponents& e, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(e, c);
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

 private:
  template <typename Scalar>
  static Scalar coeff_as(const Rational& c) {
    if constexpr (std::is_same_v<Scalar, std::complex<double>>) {
      return Scalar(to_double(c), 0.0);
    } else if constexpr (std::is_same_v<Scalar, std::complex<long double>>) {
      return Scalar(to_long_double(c), 0.0L);
    } else if constexpr (std::is_same_v<Scalar, long double>) {
      return to_long_double(c);
    } else {
      return static_cast<Scalar>(to_double(c));
    }
  }

  void check_same(const Polynomial& o) const {
    if (nvars_ != o.nvars_) throw std::invalid_argument("polynomial arity mismatch");
  }
  void check_point(size_t n) const {
    if (static_cast<int>(n) != nvars_) throw std::invalid_argument("evaluation point arity mismatch");
  }

  int nvars_;
  TermMap terms_;
};

// Quotient of two polynomials, kept unreduced; supports exact evaluation and
// formal differentiation by the quotient rule.
struct RationalFunction {
  Polynomial num;
  Polynomial den;

  RationalFunction() : num(0), den(0) {}
  RationalFunction(Polynomial n, Polynomial d) : num(std::move(n)), den(std::move(d)) {
    if (num.nvars() != den.nvars()) throw std::invalid_argument("rational function arity mismatch");
    if (den.is_zero()) throw std::invalid_argument("zero denominator");
  }

  static RationalFunction zero(int nvars) {
    return RationalFunction(Polynomial(nvars), Polynomial::constant(nvars, 1));
  }

  int nvars() const { return num.nvars(); }
  bool is_zero() const { return num.is_zero(); }

  RationalFunction derivative(int var) const {
    Polynomial n = num.derivative(var) * den - num * den.derivative(var);
    return RationalFunction(std::move(n), den * den);
  }

  RationalFunction operator+(const RationalFunction& o) const {
    return RationalFunction(num * o.den + o.num * den, den * o.den);
  }
  RationalFunction operator-(const RationalFunction& o) const {
    return RationalFunction(num * o.den - o.num * den, den * o.den);
  }
  RationalFunction operator-() const { return RationalFunction(-num, den); }

  Rational eval(const std::vector<Rational>& point) const {
    Rational d = den.eval(point);
    if (d == 0) throw std::domain_error("rational function evaluated on denominator zero set");
    return num.eval(point) / d;
  }

  template <typename Scalar>
  Scalar eval_numeric(const std::vector<Scalar>& point) const {
    return num.eval_numeric(point) / den.eval_numeric(point);
  }
};

}  // namespace gerbe
