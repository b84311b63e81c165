#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dwork/errors.hpp"

namespace dwork {

using BigInt = mpz_class;
using BigRational = mpq_class;

inline constexpr int kDefaultGuard = 4;

bool is_prime(std::int64_t n);

// p-adic valuation; returns kInfiniteValuation for zero.
inline constexpr int kInfiniteValuation = 1 << 28;
int p_valuation(const BigInt& x, std::int64_t p);
int p_valuation(const BigRational& x, std::int64_t p);

BigInt factorial(unsigned long n);
BigInt binomial(long n, long k);

// Z/p^N with p an odd prime. p^N must stay below 2^62 so products fit in 128 bits.
struct PadicContext {
  std::int64_t p = 0;
  int N = 0;
  std::int64_t modulus = 0;

  PadicContext() = default;
  PadicContext(std::int64_t prime, int precision);

  // Context able to decide congruences mod p^target after `guard` digits of loss.
  static PadicContext for_target(std::int64_t prime, int target, int guard = kDefaultGuard);

  PadicContext with_precision(int precision) const { return PadicContext(p, precision); }
  bool valid() const { return modulus != 0; }

  friend bool operator==(const PadicContext& a, const PadicContext& b) {
    return a.p == b.p && a.N == b.N;
  }
};

// Residue in [0, p^N). A default-constructed or integer-constructed value is
// "unbound": it carries a small integer and adopts the context of the first
// bound operand it meets.
class PadicInt {
 public:
  PadicInt() = default;
  PadicInt(long v) : r_(v) {}  // NOLINT: literals act as ring constants
  PadicInt(const PadicContext& ctx, std::int64_t v);
  PadicInt(const PadicContext& ctx, const BigInt& v);

  // Throws ReductionError (degree -1) when p divides the denominator.
  static PadicInt from_rational(const PadicContext& ctx, const BigRational& q);

  bool bound() const { return ctx_.valid(); }
  const PadicContext& context() const { return ctx_; }
  std::int64_t residue() const { return r_; }
  // Representative in (-p^N/2, p^N/2].
  std::int64_t signed_residue() const;
  BigInt to_bigint() const { return BigInt(static_cast<long>(r_)); }

  int valuation() const;  // N for zero
  bool is_zero() const { return r_ == 0; }
  bool is_unit() const;
  PadicInt inverse() const;  // InvertError for non-units
  PadicInt pow(unsigned long e) const;

  // Same residue read in another precision of the same prime.
  PadicInt with_context(const PadicContext& ctx) const;
  // Exact division by p^k; result lives at precision N-k. PrecisionError if not divisible.
  PadicInt divide_by_p_power(int k) const;

  PadicInt operator-() const;
  PadicInt& operator+=(const PadicInt& o);
  PadicInt& operator-=(const PadicInt& o);
  PadicInt& operator*=(const PadicInt& o);
  friend PadicInt operator+(PadicInt a, const PadicInt& b) { return a += b; }
  friend PadicInt operator-(PadicInt a, const PadicInt& b) { return a -= b; }
  friend PadicInt operator*(PadicInt a, const PadicInt& b) { return a *= b; }
  friend bool operator==(const PadicInt& a, const PadicInt& b);
  friend bool operator!=(const PadicInt& a, const PadicInt& b) { return !(a == b); }

 private:
  void unify(PadicInt& o);
  PadicContext ctx_;
  std::int64_t r_ = 0;
};

std::string to_string(const PadicInt& x);

// Scalar helpers shared by the series and polynomial templates.
inline bool is_zero(const BigRational& x) { return sgn(x) == 0; }
inline bool is_zero(const BigInt& x) { return sgn(x) == 0; }
inline bool is_zero(const PadicInt& x) { return x.is_zero(); }
inline bool is_invertible(const BigRational& x) { return sgn(x) != 0; }
inline bool is_invertible(const PadicInt& x) { return x.is_unit(); }
inline BigRational inverse_of(const BigRational& x) { return 1 / x; }
inline PadicInt inverse_of(const PadicInt& x) { return x.inverse(); }
inline BigRational scalar_from(const BigRational&, const BigRational& v) { return v; }
inline BigRational zero_like(const BigRational&) { return BigRational(0); }
inline PadicInt zero_like(const PadicInt& x) {
  return x.bound() ? PadicInt(x.context(), std::int64_t{0}) : PadicInt();
}
inline BigRational one_like(const BigRational&) { return BigRational(1); }
inline PadicInt one_like(const PadicInt& x) {
  return x.bound() ? PadicInt(x.context(), std::int64_t{1}) : PadicInt(1);
}
PadicInt scalar_from(const PadicInt& like, const BigRational& v);

// p-adic logarithm of a unit congruent to 1 mod p.
PadicInt padic_log(const PadicInt& x);

}  // namespace dwork
