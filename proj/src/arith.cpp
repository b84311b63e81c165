#include "dwork/arith.hpp"

#include <sstream>

#include "dwork/series.hpp"

namespace dwork {

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

std::int64_t normalize(long long v, std::int64_t m) {
  long long r = v % m;
  return r < 0 ? r + m : r;
}

std::int64_t reduce_big(const BigInt& v, std::int64_t m) {
  BigInt r;
  BigInt mod(static_cast<long>(m));
  mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
  return r.get_si();
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

int p_valuation(const BigInt& x, std::int64_t p) {
  if (sgn(x) == 0) return kInfiniteValuation;
  BigInt pp(static_cast<long>(p));
  BigInt rest;
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t()));
}

int p_valuation(const BigRational& x, std::int64_t p) {
  if (sgn(x) == 0) return kInfiniteValuation;
  return p_valuation(x.get_num(), p) - p_valuation(x.get_den(), p);
}

BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

BigInt binomial(long n, long k) {
  if (k < 0) return 0;
  if (n >= 0 && k > n) return 0;
  BigInt r;
  BigInt nn(n);
  mpz_bin_ui(r.get_mpz_t(), nn.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

PadicContext::PadicContext(std::int64_t prime, int precision) : p(prime), N(precision) {
  if (prime < 3 || !is_prime(prime)) throw ConfigError("p must be an odd prime");
  if (precision < 1) throw ConfigError("precision must be at least 1");
  __int128 m = 1;
  for (int i = 0; i < precision; ++i) {
    m *= prime;
    if (m >= (static_cast<__int128>(1) << 62))
      throw ConfigError("p^N exceeds the supported modulus range (2^62)");
  }
  modulus = static_cast<std::int64_t>(m);
}

PadicContext PadicContext::for_target(std::int64_t prime, int target, int guard) {
  return PadicContext(prime, target + guard);
}

PadicInt::PadicInt(const PadicContext& ctx, std::int64_t v) : ctx_(ctx) {
  if (!ctx.valid()) throw ConfigError("invalid p-adic context");
  r_ = normalize(v, ctx.modulus);
}

PadicInt::PadicInt(const PadicContext& ctx, const BigInt& v) : ctx_(ctx) {
  if (!ctx.valid()) throw ConfigError("invalid p-adic context");
  r_ = reduce_big(v, ctx.modulus);
}

PadicInt PadicInt::from_rational(const PadicContext& ctx, const BigRational& q) {
  BigInt den = q.get_den();
  BigInt mod(static_cast<long>(ctx.modulus));
  if (mpz_divisible_ui_p(den.get_mpz_t(), static_cast<unsigned long>(ctx.p)))
    throw ReductionError("p divides a denominator", -1);
  BigInt inv;
  mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
  BigInt v = q.get_num() * inv;
  return PadicInt(ctx, v);
}

std::int64_t PadicInt::signed_residue() const {
  if (!bound()) return r_;
  return r_ > ctx_.modulus / 2 ? r_ - ctx_.modulus : r_;
}

int PadicInt::valuation() const {
  if (!bound()) {
    if (r_ == 0) return kInfiniteValuation;
    throw ConfigError("valuation of an unbound nonzero constant");
  }
  if (r_ == 0) return ctx_.N;
  int v = 0;
  std::int64_t x = r_;
  while (x % ctx_.p == 0) {
    x /= ctx_.p;
    ++v;
  }
  return v;
}

bool PadicInt::is_unit() const {
  if (!bound()) return r_ == 1 || r_ == -1;
  return r_ % ctx_.p != 0;
}

PadicInt PadicInt::inverse() const {
  if (!is_unit()) throw InvertError("element is not a p-adic unit");
  if (!bound()) return *this;
  BigInt inv;
  BigInt a(static_cast<long>(r_));
  BigInt mod(static_cast<long>(ctx_.modulus));
  mpz_invert(inv.get_mpz_t(), a.get_mpz_t(), mod.get_mpz_t());
  return PadicInt(ctx_, inv);
}

PadicInt PadicInt::pow(unsigned long e) const {
  PadicInt result = one_like(*this);
  PadicInt base = *this;
  while (e) {
    if (e & 1) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

PadicInt PadicInt::with_context(const PadicContext& ctx) const {
  if (!bound()) return PadicInt(ctx, r_);
  if (ctx.p != ctx_.p) throw ConfigError("with_context: prime changes");
  return PadicInt(ctx, r_);
}

PadicInt PadicInt::divide_by_p_power(int k) const {
  if (k == 0) return *this;
  if (!bound()) throw ConfigError("divide_by_p_power on an unbound constant");
  if (k >= ctx_.N) throw PrecisionError("division by p^k leaves no precision");
  if (valuation() < k) throw PrecisionError("residue not divisible by p^k");
  std::int64_t x = r_;
  for (int i = 0; i < k; ++i) x /= ctx_.p;
  return PadicInt(ctx_.with_precision(ctx_.N - k), x);
}

PadicInt PadicInt::operator-() const {
  PadicInt r = *this;
  if (bound())
    r.r_ = r_ == 0 ? 0 : ctx_.modulus - r_;
  else
    r.r_ = -r_;
  return r;
}

void PadicInt::unify(PadicInt& o) {
  if (bound() && o.bound()) {
    if (!(ctx_ == o.ctx_)) throw ConfigError("p-adic operands with different contexts");
    return;
  }
  if (bound()) {
    o = PadicInt(ctx_, o.r_);
  } else if (o.bound()) {
    *this = PadicInt(o.ctx_, r_);
  }
}

PadicInt& PadicInt::operator+=(const PadicInt& o) {
  PadicInt b = o;
  unify(b);
  if (bound()) {
    r_ += b.r_;
    if (r_ >= ctx_.modulus) r_ -= ctx_.modulus;
  } else {
    r_ += b.r_;
  }
  return *this;
}

PadicInt& PadicInt::operator-=(const PadicInt& o) {
  PadicInt b = o;
  unify(b);
  if (bound()) {
    r_ -= b.r_;
    if (r_ < 0) r_ += ctx_.modulus;
  } else {
    r_ -= b.r_;
  }
  return *this;
}

PadicInt& PadicInt::operator*=(const PadicInt& o) {
  PadicInt b = o;
  unify(b);
  if (bound())
    r_ = mulmod(r_, b.r_, ctx_.modulus);
  else
    r_ *= b.r_;
  return *this;
}

bool operator==(const PadicInt& a, const PadicInt& b) {
  if (a.bound() && b.bound()) return a.ctx_ == b.ctx_ && a.r_ == b.r_;
  PadicInt x = a, y = b;
  x.unify(y);
  return x.r_ == y.r_;
}

std::string to_string(const PadicInt& x) { return std::to_string(x.residue()); }

PadicInt scalar_from(const PadicInt& like, const BigRational& v) {
  if (like.bound()) return PadicInt::from_rational(like.context(), v);
  if (v.get_den() != 1 || !v.get_num().fits_slong_p())
    throw ConfigError("unbound p-adic constant must be a small integer");
  return PadicInt(v.get_num().get_si());
}

PadicInt padic_log(const PadicInt& x) {
  if (!x.bound()) throw ConfigError("padic_log needs a bound value");
  const PadicContext& ctx = x.context();
  PadicInt e = x - PadicInt(1);
  if (e.valuation() < 1) throw DomainError("padic_log: argument is not 1 mod p");
  BigRational sum = 0;
  BigInt ev = e.to_bigint();
  BigInt power = 1;
  for (long m = 1;; ++m) {
    power *= ev;
    long logp = 0;
    for (long q = m; q >= ctx.p; q /= ctx.p) ++logp;
    if (m - logp >= ctx.N) break;
    BigRational term(power, BigInt(m));
    term.canonicalize();
    if (m % 2 == 0) term = -term;
    sum += term;
  }
  return PadicInt::from_rational(ctx, sum);
}

namespace detail {

void convolve(const std::vector<PadicInt>& a, const std::vector<PadicInt>& b,
              std::vector<PadicInt>& out) {
  // Fast path needs every nonzero operand bound to one context.
  const PadicContext* ctx = nullptr;
  bool raw = true;
  for (const std::vector<PadicInt>* v : {&a, &b, static_cast<const std::vector<PadicInt>*>(&out)})
    for (const PadicInt& x : *v) {
      if (x.bound()) {
        if (!ctx) ctx = &x.context();
      } else if (!x.is_zero()) {
        raw = false;
      }
    }
  if (!raw || !ctx) {
    for (std::size_t i = 0; i < a.size() && i < out.size(); ++i) {
      if (is_zero(a[i])) continue;
      for (std::size_t j = 0; j < b.size() && i + j < out.size(); ++j)
        if (!is_zero(b[j])) out[i + j] += a[i] * b[j];
    }
    return;
  }
  const std::int64_t m = ctx->modulus;
  const std::size_t D = out.size() - 1;
  std::vector<std::int64_t> acc(D + 1);
  for (std::size_t i = 0; i <= D; ++i) acc[i] = out[i].residue();
  for (std::size_t i = 0; i < a.size() && i <= D; ++i) {
    const std::int64_t ai = a[i].residue();
    if (ai == 0) continue;
    const std::size_t jmax = std::min(b.size() - 1, D - i);
    for (std::size_t j = 0; j <= jmax; ++j) {
      const std::int64_t bj = b[j].residue();
      if (bj == 0) continue;
      std::int64_t s = acc[i + j] + mulmod(ai, bj, m);
      acc[i + j] = s >= m ? s - m : s;
    }
  }
  const PadicContext c = *ctx;
  for (std::size_t i = 0; i <= D; ++i) out[i] = PadicInt(c, acc[i]);
}

}  // namespace detail

// ---- series analytic operations ----

RationalSeries series_log(const RationalSeries& a) {
  if (a[0] != 1) throw DomainError("series_log: constant term must be 1");
  // theta(log a) = theta(a) / a
  RationalSeries q = theta(a) * series_invert(a);
  RationalSeries r = rational_series(a.degree());
  for (std::size_t k = 1; k <= a.degree(); ++k) r[k] = q[k] / BigRational(static_cast<long>(k));
  return r;
}

RationalSeries series_exp(const RationalSeries& e) {
  if (!is_zero(e[0])) throw DomainError("series_exp: constant term must be 0");
  const std::size_t D = e.degree();
  RationalSeries r = rational_series(D);
  r[0] = 1;
  // theta(E) = E theta(e)
  for (std::size_t k = 1; k <= D; ++k) {
    BigRational acc = 0;
    for (std::size_t j = 1; j <= k; ++j)
      if (!is_zero(e[j])) acc += BigRational(static_cast<long>(j)) * e[j] * r[k - j];
    r[k] = acc / BigRational(static_cast<long>(k));
  }
  return r;
}

namespace {

const PadicContext& series_context(const PadicSeries& a) {
  if (!a[0].bound()) throw ConfigError("p-adic series without a context");
  return a[0].context();
}

}  // namespace

PadicSeries series_log(const PadicSeries& a) {
  const PadicContext& ctx = series_context(a);
  PadicSeries e = a;
  e[0] -= PadicInt(1);
  if (min_valuation(e) < 1) throw DomainError("series_log: argument is not 1 mod p");
  // Exact sum over Q of the integer lift; each term e^m/m is p-integral.
  RationalSeries el = lift_rational(e);
  RationalSeries power = series_constant(BigRational(1), a.degree());
  RationalSeries sum = rational_series(a.degree());
  for (long m = 1;; ++m) {
    long logp = 0;
    for (long q = m; q >= ctx.p; q /= ctx.p) ++logp;
    if (m - logp >= ctx.N) break;
    power = power * el;
    BigRational c(1, m);
    if (m % 2 == 0) c = -c;
    sum = sum + c * power;
  }
  return reduce_mod(sum, ctx);
}

PadicSeries series_exp(const PadicSeries& e) {
  const PadicContext& ctx = series_context(e);
  if (min_valuation(e) < 1) throw DomainError("series_exp: coefficients must be divisible by p");
  RationalSeries el = lift_rational(e);
  RationalSeries power = series_constant(BigRational(1), e.degree());
  RationalSeries sum = power;
  BigInt fact = 1;
  for (long m = 1;; ++m) {
    fact *= m;
    // ord(e^m/m!) >= m - ord(m!)
    if (m - p_valuation(fact, ctx.p) >= ctx.N) break;
    power = power * el;
    sum = sum + BigRational(BigInt(1), fact) * power;
  }
  return reduce_mod(sum, ctx);
}

PadicSeries reduce_mod(const RationalSeries& a, const PadicContext& ctx) {
  PadicSeries r = padic_series(ctx, a.degree());
  for (std::size_t k = 0; k <= a.degree(); ++k) {
    try {
      r[k] = PadicInt::from_rational(ctx, a[k]);
    } catch (const ReductionError&) {
      throw ReductionError("reduce_mod: p divides a denominator", static_cast<long>(k));
    }
  }
  return r;
}

RationalSeries lift_rational(const PadicSeries& a) {
  RationalSeries r = rational_series(a.degree());
  for (std::size_t k = 0; k <= a.degree(); ++k)
    r[k] = BigRational(BigInt(static_cast<long>(a[k].residue())));
  return r;
}

PadicSeries change_precision(const PadicSeries& a, const PadicContext& ctx) {
  PadicSeries r = padic_series(ctx, a.degree());
  for (std::size_t k = 0; k <= a.degree(); ++k) r[k] = a[k].with_context(ctx);
  return r;
}

int min_valuation(const RationalSeries& a, std::int64_t p) {
  int v = kInfiniteValuation;
  for (const BigRational& c : a.coeffs()) v = std::min(v, p_valuation(c, p));
  return v;
}

int min_valuation(const PadicSeries& a) {
  int v = kInfiniteValuation;
  for (const PadicInt& c : a.coeffs())
    if (!c.is_zero()) v = std::min(v, c.valuation());
  return v;
}

std::vector<BigRational> divided_power_reverse(const std::vector<BigRational>& r) {
  if (r.size() < 2 || r[1] != 1) throw ReversionError("divided_power_reverse: r_1 must be 1");
  const std::size_t D = r.size() - 1;
  RationalSeries a = rational_series(D);
  for (std::size_t m = 1; m <= D; ++m) a[m] = r[m] / BigRational(factorial(m));
  RationalSeries b = series_reverse(a);
  std::vector<BigRational> s(D + 1, BigRational(0));
  for (std::size_t m = 1; m <= D; ++m) s[m] = b[m] * BigRational(factorial(m));
  return s;
}

std::pair<bool, bool> dieudonne_dwork_check(const RationalSeries& g, const PadicSeries& sigma,
                                            const PadicContext& ctx, std::size_t D) {
  if (!is_zero(g[0])) throw DomainError("dieudonne_dwork_check: g must vanish at 0");
  RationalSeries gt = truncate(g, D);
  int e = 0;
  for (const BigRational& c : gt.coeffs())
    if (!is_zero(c)) e = std::max(e, -p_valuation(c, ctx.p));
  // p^{e+1} (g - g(sigma)/p) = p h - h(sigma) with h = p^e g integral.
  if (ctx.N < e + 1) throw PrecisionError("lift precision too small to decide integrality");
  const PadicContext work(ctx.p, e + 1);
  BigRational scale(BigInt(1));
  for (int i = 0; i < e; ++i) scale *= ctx.p;
  RationalSeries h = scale * gt;
  PadicSeries hp = reduce_mod(h, work);
  PadicSeries sig = change_precision(truncate(sigma, D), work);
  if (sigma.degree() < D) throw PrecisionError("sigma truncated below the requested degree");
  PadicSeries comp = series_compose(hp, sig, true);
  PadicSeries lhs = PadicInt(work, ctx.p) * hp - comp;
  bool lhs_ok = lhs.is_zero_series();

  bool rhs_ok = true;
  RationalSeries ex = series_exp(gt);
  for (const BigRational& c : ex.coeffs())
    if (p_valuation(c, ctx.p) < 0) rhs_ok = false;
  return {lhs_ok, rhs_ok};
}

std::string to_text(const RationalSeries& a) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k <= a.degree(); ++k) {
    if (is_zero(a[k])) continue;
    if (!first) os << ' ';
    first = false;
    os << k << ':' << a[k].get_str();
  }
  if (first) os << "0:0";
  return os.str();
}

std::string to_text(const PadicSeries& a) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k <= a.degree(); ++k) {
    if (a[k].is_zero()) continue;
    if (!first) os << ' ';
    first = false;
    os << k << ':' << a[k].residue();
  }
  if (first) os << "0:0";
  if (a[0].bound()) os << " (mod " << a[0].context().p << '^' << a[0].context().N << ')';
  return os.str();
}

RationalSeries rational_series_from_text(const std::string& text, std::size_t degree) {
  RationalSeries r = rational_series(degree);
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    if (tok == "(mod") break;
    auto colon = tok.find(':');
    if (colon == std::string::npos) throw ConfigError("malformed series token: " + tok);
    std::size_t k = std::stoul(tok.substr(0, colon));
    BigRational c;
    if (c.set_str(tok.substr(colon + 1), 10) != 0) throw ConfigError("malformed coefficient: " + tok);
    c.canonicalize();
    if (k <= degree) r[k] = c;
  }
  return r;
}

}  // namespace dwork
