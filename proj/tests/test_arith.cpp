#include <random>

#include "doctest.h"
#include "dwork/series.hpp"

using namespace dwork;

namespace {

RationalSeries rs(std::initializer_list<long> c) {
  std::vector<BigRational> v;
  for (long x : c) v.emplace_back(x);
  return RationalSeries(v);
}

RationalSeries random_series(std::mt19937_64& rng, std::size_t D, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  RationalSeries r = rational_series(D);
  for (std::size_t k = 0; k <= D; ++k) r[k] = BigRational(d(rng), 1 + (d(rng) & 3));
  for (std::size_t k = 0; k <= D; ++k) r[k].canonicalize();
  return r;
}

PadicSeries random_padic(std::mt19937_64& rng, const PadicContext& ctx, std::size_t D) {
  std::uniform_int_distribution<std::int64_t> d(0, ctx.modulus - 1);
  PadicSeries r = padic_series(ctx, D);
  for (std::size_t k = 0; k <= D; ++k) r[k] = PadicInt(ctx, d(rng));
  return r;
}

}  // namespace

TEST_SUITE("arith") {
  TEST_CASE("scalar helpers") {
    CHECK(is_prime(3));
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(91));
    CHECK(p_valuation(BigInt(54), 3) == 3);
    CHECK(p_valuation(BigRational(2, 27), 3) == -3);
    CHECK(factorial(5) == 120);
    CHECK(binomial(4, 2) == 6);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(-1, 3) == -1);
  }

  TEST_CASE("context validation") {
    CHECK_THROWS_AS(PadicContext(2, 3), ConfigError);
    CHECK_THROWS_AS(PadicContext(9, 3), ConfigError);
    CHECK_THROWS_AS(PadicContext(3, 0), ConfigError);
    CHECK_THROWS_AS(PadicContext(3, 60), ConfigError);
    CHECK(PadicContext::for_target(5, 2).N == 6);
  }

  TEST_CASE("padic int arithmetic") {
    PadicContext ctx(5, 2);
    PadicInt two(ctx, std::int64_t{2});
    CHECK(two.inverse().residue() == 13);
    CHECK((two * two.inverse()) == PadicInt(ctx, std::int64_t{1}));
    CHECK(PadicInt(ctx, std::int64_t{-1}).residue() == 24);
    CHECK(PadicInt(ctx, std::int64_t{10}).valuation() == 1);
    CHECK(PadicInt(ctx, std::int64_t{0}).valuation() == 2);
    CHECK_THROWS_AS(PadicInt(ctx, std::int64_t{5}).inverse(), InvertError);
    CHECK(PadicInt(ctx, std::int64_t{15}).divide_by_p_power(1).residue() == 3);
    CHECK(PadicInt(ctx, std::int64_t{15}).divide_by_p_power(1).context().N == 1);
    CHECK_THROWS_AS(PadicInt(ctx, std::int64_t{3}).divide_by_p_power(1), PrecisionError);
    PadicContext other(5, 3);
    CHECK_THROWS_AS(two + PadicInt(other, std::int64_t{1}), ConfigError);
    // unbound literals adopt the context of the bound operand
    CHECK((PadicInt(3) * two).residue() == 6);
    CHECK(PadicInt::from_rational(ctx, BigRational(1, 2)).residue() == 13);
    CHECK_THROWS_AS(PadicInt::from_rational(ctx, BigRational(1, 5)), ReductionError);
  }

  TEST_CASE("series_mul") {
    CHECK(series_mul(rs({1, 1, 0}), rs({1, -1, 0})) == rs({1, 0, -1}));
    RationalSeries a = rs({3, -2, 7});
    CHECK(series_mul(a, rs({1, 0, 0})) == a);
    CHECK(series_mul(rs({1, 1, 1, 1, 1, 1}), rs({1, -1, 0, 0, 0, 0})) == rs({1, 0, 0, 0, 0, 0}));
    CHECK_THROWS_AS(series_mul(rs({1, 1}), rs({1, 1, 1})), ConfigError);
    PadicSeries x = padic_series(PadicContext(3, 2), 2);
    PadicSeries y = padic_series(PadicContext(3, 3), 2);
    CHECK_THROWS_AS(series_mul(x, y), ConfigError);
  }

  TEST_CASE("mixed degrees truncate and record the loss") {
    RationalSeries r = rs({1, 1}) * rs({1, 1, 1});
    CHECK(r.degree() == 1);
    CHECK(r.degree_reduced());
    CHECK_FALSE((rs({1, 1}) * rs({1, 1})).degree_reduced());
  }

  TEST_CASE("series_invert") {
    CHECK(series_invert(rs({1, -1, 0, 0, 0})) == rs({1, 1, 1, 1, 1}));
    PadicContext c5(5, 2);
    PadicSeries two = series_constant(PadicInt(c5, std::int64_t{2}), 0);
    CHECK(series_invert(two)[0].residue() == 13);
    PadicContext c3(3, 2);
    PadicSeries a = padic_series(c3, 3);
    a[0] = PadicInt(c3, std::int64_t{1});
    a[1] = PadicInt(c3, std::int64_t{3});
    PadicSeries inv = series_invert(a);
    CHECK(inv[0].residue() == 1);
    CHECK(inv[1].residue() == 6);
    CHECK(inv[2].residue() == 0);
    CHECK(inv[3].residue() == 0);
    CHECK_THROWS_AS(series_invert(rs({0, 1})), InvertError);
    a[0] = PadicInt(c3, std::int64_t{3});
    CHECK_THROWS_AS(series_invert(a), InvertError);
  }

  TEST_CASE("series_compose") {
    CHECK(series_compose(rs({0, 0, 1, 0, 0}), rs({0, 1, 1, 0, 0})) == rs({0, 0, 1, 2, 1}));
    RationalSeries F = rs({1, 4, 0, 36, 5});
    CHECK(series_compose(F, rs({0, 1, 0, 0, 0})) == F);
    CHECK(series_compose(rs({1, 2, 0, 0, 0, 0, 0}), rs({0, 0, 0, 1, 0, 0, 0})) ==
          rs({1, 0, 0, 2, 0, 0, 0}));
    CHECK_THROWS_AS(series_compose(F, rs({1, 1, 0, 0, 0})), DivergenceError);
    // polynomial outer tolerates a constant term
    CHECK(series_compose(rs({0, 0, 1}), rs({1, 1, 0}), true) == rs({1, 2, 1}));
  }

  TEST_CASE("series_reverse against Lagrange inversion") {
    const std::size_t D = 10;
    RationalSeries a = rational_series(D);
    a[1] = 1;
    a[2] = 1;
    RationalSeries r = series_reverse(a);
    for (std::size_t n = 1; n <= D; ++n) {
      BigInt cat = binomial(2 * n - 2, n - 1);
      BigRational expect(cat, BigInt(static_cast<long>(n)));
      expect.canonicalize();
      if (n % 2 == 0) expect = -expect;
      CHECK(r[n] == expect);
    }
    CHECK(r[4] == -5);
    CHECK(series_reverse(rs({0, 1, 0, 0})) == rs({0, 1, 0, 0}));
    CHECK_THROWS_AS(series_reverse(rs({1, 1, 0})), ReversionError);
    CHECK_THROWS_AS(series_reverse(rs({0, 0, 1})), ReversionError);
  }

  TEST_CASE("divided_power_reverse") {
    std::vector<BigRational> id(9, BigRational(0));
    id[1] = 1;
    CHECK(divided_power_reverse(id) == id);
    std::vector<BigRational> ones(9, BigRational(1));
    auto s = divided_power_reverse(ones);
    // m! [z^m] log(1+z) = (-1)^{m-1} (m-1)!
    for (std::size_t m = 1; m <= 8; ++m) {
      BigRational expect(factorial(m - 1));
      if (m % 2 == 0) expect = -expect;
      CHECK(s[m] == expect);
    }
    std::vector<BigRational> bad(4, BigRational(2));
    CHECK_THROWS_AS(divided_power_reverse(bad), ReversionError);
  }

  TEST_CASE("divided_power_reverse preserves integrality") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<BigRational> r(9, BigRational(0));
      r[1] = 1;
      for (std::size_t m = 2; m <= 8; ++m) r[m] = d(rng);
      for (const BigRational& s : divided_power_reverse(r)) CHECK(s.get_den() == 1);
    }
  }

  TEST_CASE("log and exp, rational mode") {
    CHECK(series_log(rs({1, 0, 0})).is_zero_series());
    CHECK(series_exp(rs({0, 0, 0})) == rs({1, 0, 0}));
    RationalSeries e = series_exp(rs({0, 1, 0, 0}));
    CHECK(e[2] == BigRational(1, 2));
    CHECK(e[3] == BigRational(1, 6));
    RationalSeries g = rs({0, 1, 1, 0, 0, 0, 0});
    CHECK(series_log(series_exp(g)) == g);
    CHECK(series_exp(series_log(rs({1, 1, 0, 0, 0, 0, 0, 0, 0}))) == rs({1, 1, 0, 0, 0, 0, 0, 0, 0}));
    CHECK_THROWS_AS(series_log(rs({2, 1})), DomainError);
    CHECK_THROWS_AS(series_exp(rs({1, 1})), DomainError);
  }

  TEST_CASE("p-adic log of a unit") {
    PadicContext ctx(3, 3);
    // direct alternating sum of 3^m/m, far past the truncation point
    BigRational sum = 0;
    BigInt pw = 1;
    for (long m = 1; m <= 40; ++m) {
      pw *= 3;
      BigRational term(pw, BigInt(m));
      term.canonicalize();
      sum += (m % 2 ? term : BigRational(-term));
    }
    CHECK(padic_log(PadicInt(ctx, std::int64_t{4})) == PadicInt::from_rational(ctx, sum));
    CHECK(padic_log(PadicInt(ctx, std::int64_t{1})).is_zero());
    CHECK_THROWS_AS(padic_log(PadicInt(ctx, std::int64_t{2})), DomainError);
  }

  TEST_CASE("log and exp, p-adic mode round trip") {
    PadicContext ctx(5, 4);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
      PadicSeries e = random_padic(rng, ctx, 6);
      for (std::size_t k = 0; k <= 6; ++k) e[k] = e[k] * PadicInt(ctx, std::int64_t{5});
      PadicSeries ex = series_exp(e);
      CHECK(series_log(ex) == e);
    }
    PadicSeries bad = padic_series(ctx, 2);
    bad[1] = PadicInt(ctx, std::int64_t{1});
    CHECK_THROWS_AS(series_exp(bad), DomainError);
  }

  TEST_CASE("reduce_mod") {
    PadicContext ctx(3, 2);
    PadicSeries r = reduce_mod(RationalSeries({BigRational(0), BigRational(1, 2)}), ctx);
    CHECK(r[1].residue() == 5);
    PadicSeries ints = reduce_mod(rs({4, -1, 10}), ctx);
    CHECK(ints[0].residue() == 4);
    CHECK(ints[1].residue() == 8);
    CHECK(ints[2].residue() == 1);
    try {
      reduce_mod(RationalSeries({BigRational(0), BigRational(1, 3)}), ctx);
      FAIL("expected ReductionError");
    } catch (const ReductionError& e) {
      CHECK(e.degree() == 1);
    }
  }

  TEST_CASE("dieudonne_dwork_check basics") {
    PadicContext ctx(3, 6);
    const std::size_t D = 9;
    PadicSeries sigma = padic_series(ctx, D);
    sigma[3] = PadicInt(ctx, std::int64_t{1});
    auto zero = dieudonne_dwork_check(rational_series(D), sigma, ctx, D);
    CHECK(zero.first);
    CHECK(zero.second);
    RationalSeries g = rational_series(D);
    g[1] = BigRational(1, 3);
    auto bad = dieudonne_dwork_check(g, sigma, ctx, D);
    CHECK_FALSE(bad.first);
    CHECK_FALSE(bad.second);
    // log(1/(1-t)) = sum t^k/k has exp integral and satisfies the lemma
    RationalSeries lg = series_log(series_invert(rs({1, -1, 0, 0, 0, 0, 0, 0, 0, 0})));
    auto good = dieudonne_dwork_check(lg, sigma, ctx, D);
    CHECK(good.first);
    CHECK(good.second);
  }

  TEST_CASE("text form") {
    CHECK(to_text(rs({1, 0, 4, 0, 36})) == "0:1 2:4 4:36");
    RationalSeries h({BigRational(0), BigRational(5, 6)});
    CHECK(to_text(h) == "1:5/6");
    CHECK(rational_series_from_text(to_text(h), 1) == h);
    PadicContext ctx(3, 2);
    CHECK(to_text(reduce_mod(rs({1, 0, 8}), ctx)) == "0:1 2:8 (mod 3^2)");
  }

  TEST_CASE("ring axioms on random series") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
      RationalSeries a = random_series(rng, 6, -5, 5);
      RationalSeries b = random_series(rng, 6, -5, 5);
      RationalSeries c = random_series(rng, 6, -5, 5);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a * b == b * a);
    }
    PadicContext ctx(5, 3);
    for (int trial = 0; trial < 20; ++trial) {
      PadicSeries a = random_padic(rng, ctx, 6);
      PadicSeries b = random_padic(rng, ctx, 6);
      PadicSeries c = random_padic(rng, ctx, 6);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
    }
  }

  TEST_CASE("invert and reverse round trips") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
      RationalSeries a = random_series(rng, 7, -4, 4);
      if (is_zero(a[0])) a[0] = 1;
      CHECK(a * series_invert(a) == series_constant(BigRational(1), 7));
      RationalSeries b = random_series(rng, 7, -4, 4);
      b[0] = 0;
      if (is_zero(b[1])) b[1] = 3;
      RationalSeries r = series_reverse(b);
      RationalSeries t = series_monomial(BigRational(1), 1, 7);
      CHECK(series_compose(b, r) == t);
      CHECK(series_compose(r, b) == t);
    }
    PadicContext ctx(3, 4);
    for (int trial = 0; trial < 10; ++trial) {
      PadicSeries a = random_padic(rng, ctx, 7);
      a[0] = PadicInt(ctx, std::int64_t{0});
      if (!a[1].is_unit()) a[1] = PadicInt(ctx, std::int64_t{2});
      PadicSeries r = series_reverse(a);
      CHECK(series_compose(a, r) == series_monomial(PadicInt(ctx, std::int64_t{1}), 1, 7));
    }
  }

  TEST_CASE("reduce_mod is a ring homomorphism") {
    std::mt19937_64 rng(5);
    PadicContext ctx(5, 3);
    for (int trial = 0; trial < 20; ++trial) {
      RationalSeries a = random_series(rng, 6, -9, 9);
      RationalSeries b = random_series(rng, 6, -9, 9);
      CHECK(reduce_mod(a * b, ctx) == reduce_mod(a, ctx) * reduce_mod(b, ctx));
      CHECK(reduce_mod(a + b, ctx) == reduce_mod(a, ctx) + reduce_mod(b, ctx));
    }
  }
}
