#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "dwork/arith.hpp"

namespace dwork {

// Truncated power series c_0 + c_1 t + ... + c_D t^D.
template <class T>
class Series {
 public:
  Series() : c_(1) {}
  Series(std::size_t degree, const T& zero) : c_(degree + 1, zero) {}
  explicit Series(std::vector<T> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) throw ConfigError("series needs at least one coefficient");
  }

  std::size_t degree() const { return c_.size() - 1; }
  T& operator[](std::size_t i) { return c_[i]; }
  const T& operator[](std::size_t i) const { return c_[i]; }
  const std::vector<T>& coeffs() const { return c_; }
  T zero() const { return zero_like(c_[0]); }
  T coeff_or_zero(std::size_t i) const { return i < c_.size() ? c_[i] : zero(); }

  // Set when an operation combined operands of different degree and truncated.
  bool degree_reduced() const { return degree_reduced_; }
  void mark_degree_reduced() { degree_reduced_ = true; }

  // Lowest index with a nonzero coefficient; degree()+1 for the zero series.
  std::size_t valuation() const {
    for (std::size_t i = 0; i < c_.size(); ++i)
      if (!is_zero(c_[i])) return i;
    return c_.size();
  }
  bool is_zero_series() const { return valuation() == c_.size(); }

  friend bool operator==(const Series& a, const Series& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

 private:
  std::vector<T> c_;
  bool degree_reduced_ = false;
};

using RationalSeries = Series<BigRational>;
using PadicSeries = Series<PadicInt>;

// Series act as coefficients of Laurent polynomials in t-dependent families.
template <class T>
bool is_zero(const Series<T>& s) { return s.is_zero_series(); }
template <class T>
Series<T> zero_like(const Series<T>& s) { return Series<T>(s.degree(), s.zero()); }
template <class T>
Series<T> one_like(const Series<T>& s) {
  Series<T> r(s.degree(), s.zero());
  r[0] = one_like(s[0]);
  return r;
}

template <class T>
Series<T> series_constant(const T& c, std::size_t degree) {
  Series<T> s(degree, zero_like(c));
  s[0] = c;
  return s;
}

template <class T>
Series<T> series_monomial(const T& c, std::size_t power, std::size_t degree) {
  Series<T> s(degree, zero_like(c));
  if (power <= degree) s[power] = c;
  return s;
}

inline RationalSeries rational_series(std::size_t degree) {
  return RationalSeries(degree, BigRational(0));
}
inline PadicSeries padic_series(const PadicContext& ctx, std::size_t degree) {
  return PadicSeries(degree, PadicInt(ctx, std::int64_t{0}));
}

template <class T>
Series<T> truncate(const Series<T>& a, std::size_t degree) {
  if (degree >= a.degree()) return a;
  std::vector<T> c(a.coeffs().begin(), a.coeffs().begin() + degree + 1);
  return Series<T>(std::move(c));
}

namespace detail {
inline void check_same_context(const PadicSeries& a, const PadicSeries& b) {
  if (a[0].bound() && b[0].bound() && !(a[0].context() == b[0].context()))
    throw ConfigError("p-adic series with different contexts");
}
inline void check_same_context(const RationalSeries&, const RationalSeries&) {}

template <class T>
void convolve(const std::vector<T>& a, const std::vector<T>& b, std::vector<T>& out) {
  const std::size_t D = out.size() - 1;
  for (std::size_t i = 0; i < a.size() && i <= D; ++i) {
    if (is_zero(a[i])) continue;
    const std::size_t jmax = std::min(b.size() - 1, D - i);
    for (std::size_t j = 0; j <= jmax; ++j) {
      if (is_zero(b[j])) continue;
      out[i + j] += a[i] * b[j];
    }
  }
}

void convolve(const std::vector<PadicInt>& a, const std::vector<PadicInt>& b,
              std::vector<PadicInt>& out);
}  // namespace detail

// Operators truncate to the smaller degree and record the loss.
template <class T>
Series<T> operator+(const Series<T>& a, const Series<T>& b) {
  detail::check_same_context(a, b);
  const std::size_t D = std::min(a.degree(), b.degree());
  Series<T> r(D, a.zero());
  for (std::size_t i = 0; i <= D; ++i) r[i] = a[i] + b[i];
  if (a.degree() != b.degree() || a.degree_reduced() || b.degree_reduced())
    r.mark_degree_reduced();
  return r;
}

template <class T>
Series<T> operator-(const Series<T>& a, const Series<T>& b) {
  detail::check_same_context(a, b);
  const std::size_t D = std::min(a.degree(), b.degree());
  Series<T> r(D, a.zero());
  for (std::size_t i = 0; i <= D; ++i) r[i] = a[i] - b[i];
  if (a.degree() != b.degree() || a.degree_reduced() || b.degree_reduced())
    r.mark_degree_reduced();
  return r;
}

template <class T>
Series<T> operator-(const Series<T>& a) {
  Series<T> r(a.degree(), a.zero());
  for (std::size_t i = 0; i <= a.degree(); ++i) r[i] = -a[i];
  return r;
}

template <class T>
Series<T> operator*(const Series<T>& a, const Series<T>& b) {
  detail::check_same_context(a, b);
  const std::size_t D = std::min(a.degree(), b.degree());
  std::vector<T> out(D + 1, a.zero());
  detail::convolve(a.coeffs(), b.coeffs(), out);
  Series<T> r(std::move(out));
  if (a.degree() != b.degree() || a.degree_reduced() || b.degree_reduced())
    r.mark_degree_reduced();
  return r;
}

template <class T>
Series<T> operator*(const T& c, const Series<T>& a) {
  Series<T> r(a.degree(), a.zero());
  for (std::size_t i = 0; i <= a.degree(); ++i) r[i] = c * a[i];
  return r;
}

// Strict product: operands must share degree and context.
template <class T>
Series<T> series_mul(const Series<T>& a, const Series<T>& b) {
  if (a.degree() != b.degree()) throw ConfigError("series_mul: truncation degrees differ");
  detail::check_same_context(a, b);
  return a * b;
}

template <class T>
Series<T> series_invert(const Series<T>& a) {
  if (!is_invertible(a[0])) throw InvertError("series_invert: constant term is not a unit");
  const std::size_t D = a.degree();
  Series<T> r(D, a.zero());
  const T inv0 = inverse_of(a[0]);
  r[0] = inv0;
  for (std::size_t k = 1; k <= D; ++k) {
    T acc = a.zero();
    for (std::size_t j = 1; j <= k; ++j)
      if (!is_zero(a[j])) acc += a[j] * r[k - j];
    r[k] = -(acc * inv0);
  }
  return r;
}

template <class T>
bool is_invertible(const Series<T>& s) { return is_invertible(s[0]); }
template <class T>
Series<T> inverse_of(const Series<T>& s) { return series_invert(s); }
template <class T>
Series<T> scalar_from(const Series<T>& like, const BigRational& v) {
  Series<T> r(like.degree(), like.zero());
  r[0] = scalar_from(like[0], v);
  return r;
}

// Multiplies by t^k keeping the degree.
template <class T>
Series<T> shift_up(const Series<T>& a, std::size_t k) {
  Series<T> r(a.degree(), a.zero());
  for (std::size_t i = 0; i + k <= a.degree(); ++i) r[i + k] = a[i];
  return r;
}

// Divides by t^k; the degree drops by k. DomainError if t^k does not divide a.
template <class T>
Series<T> shift_down(const Series<T>& a, std::size_t k) {
  if (k > a.degree()) throw DomainError("shift_down beyond truncation degree");
  for (std::size_t i = 0; i < k; ++i)
    if (!is_zero(a[i])) throw DomainError("shift_down: series not divisible by t^k");
  std::vector<T> c(a.coeffs().begin() + k, a.coeffs().end());
  return Series<T>(std::move(c));
}

// theta = t d/dt.
template <class T>
Series<T> theta(const Series<T>& a) {
  Series<T> r(a.degree(), a.zero());
  for (std::size_t i = 1; i <= a.degree(); ++i) r[i] = T(static_cast<long>(i)) * a[i];
  return r;
}

// a(t^e) truncated at the degree of a.
template <class T>
Series<T> substitute_power(const Series<T>& a, std::size_t e) {
  Series<T> r(a.degree(), a.zero());
  for (std::size_t i = 0; i * e <= a.degree(); ++i) r[i * e] = a[i];
  return r;
}

// outer(inner). With a nonzero constant term in inner the outer series must be
// an exact polynomial (flagged by the caller), otherwise DivergenceError.
template <class T>
Series<T> series_compose(const Series<T>& outer, const Series<T>& inner,
                         bool outer_is_polynomial = false) {
  const std::size_t v = inner.valuation();
  std::size_t D = inner.degree();
  std::size_t top = outer.degree();
  if (v == 0) {
    if (!outer_is_polynomial)
      throw DivergenceError("series_compose: inner series has a nonzero constant term");
  } else {
    // Terms of outer beyond its degree would contribute from t^{(deg+1) v} on.
    const std::size_t reach = (outer.degree() + 1) * v;
    if (!outer_is_polynomial && reach <= D) D = reach - 1;
    top = std::min(top, D / v);
  }
  Series<T> in = truncate(inner, D);
  Series<T> r = series_constant(outer[top], D);
  for (std::size_t i = top; i-- > 0;) {
    r = r * in;
    r[0] += outer[i];
  }
  return r;
}

// Compositional inverse of a = a_1 t + a_2 t^2 + ... with a_1 a unit.
template <class T>
Series<T> series_reverse(const Series<T>& a) {
  const std::size_t D = a.degree();
  if (!is_zero(a[0])) throw ReversionError("series_reverse: nonzero constant term");
  if (D == 0) return a;
  if (!is_invertible(a[1])) throw ReversionError("series_reverse: linear coefficient is not a unit");
  const T inv1 = inverse_of(a[1]);
  // pw[j][k] = [t^k] r^j
  std::vector<std::vector<T>> pw(D + 1, std::vector<T>(D + 1, a.zero()));
  Series<T> r(D, a.zero());
  r[1] = inv1;
  pw[1][1] = inv1;
  for (std::size_t k = 2; k <= D; ++k) {
    T acc = a.zero();
    for (std::size_t j = 2; j <= k; ++j) {
      T s = a.zero();
      for (std::size_t i = 1; i + (j - 1) <= k; ++i)
        if (!is_zero(r[i]) && !is_zero(pw[j - 1][k - i])) s += r[i] * pw[j - 1][k - i];
      pw[j][k] = s;
      if (!is_zero(a[j])) acc += a[j] * s;
    }
    r[k] = -(acc * inv1);
    pw[1][k] = r[k];
  }
  return r;
}

// Rational-mode logarithm: a = 1 + e with e(0) = 0.
RationalSeries series_log(const RationalSeries& a);
// p-adic mode: every coefficient of a - 1 divisible by p.
PadicSeries series_log(const PadicSeries& a);
RationalSeries series_exp(const RationalSeries& e);
PadicSeries series_exp(const PadicSeries& e);

// Coefficient-wise residues. ReductionError carries the offending degree.
PadicSeries reduce_mod(const RationalSeries& a, const PadicContext& ctx);
// Integer lift of residues (representatives in [0, p^N)).
RationalSeries lift_rational(const PadicSeries& a);
PadicSeries change_precision(const PadicSeries& a, const PadicContext& ctx);

// Minimum p-adic valuation over the coefficients (kInfiniteValuation if zero).
int min_valuation(const RationalSeries& a, std::int64_t p);
int min_valuation(const PadicSeries& a);

// Reversion of P(z) = sum r_m z^m/m!, returned in the same divided-power form.
// Input index 0 is ignored; r[1] must be 1.
std::vector<BigRational> divided_power_reverse(const std::vector<BigRational>& r);

// (g - g(t^sigma)/p integral to degree D, exp(g) integral to degree D).
std::pair<bool, bool> dieudonne_dwork_check(const RationalSeries& g, const PadicSeries& sigma,
                                            const PadicContext& ctx, std::size_t D);

// Line-oriented text forms: "deg:num/den ..." and "deg:residue ... (mod p^N)".
std::string to_text(const RationalSeries& a);
std::string to_text(const PadicSeries& a);
RationalSeries rational_series_from_text(const std::string& text, std::size_t degree);

}  // namespace dwork
