#include "doctest.h"
#include "dwork/cyfam.hpp"

using namespace dwork;

namespace {

RationalSeries from_ints(std::initializer_list<long> c) {
  RationalSeries s = rational_series(c.size() - 1);
  std::size_t i = 0;
  for (long x : c) s[i++] = x;
  return s;
}

// (sum_k q^(2k^2))^e to degree D.
RationalSeries theta_power(int e, std::size_t D) {
  RationalSeries th = rational_series(D);
  for (long k = -static_cast<long>(D); k <= static_cast<long>(D); ++k)
    if (2 * k * k <= static_cast<long>(D)) th[2 * k * k] += 1;
  RationalSeries r = series_constant(BigRational(1), D);
  for (int i = 0; i < e; ++i) r = r * th;
  return r;
}

// q prod_k (1 + q^(4k))^ea / (1 + q^(2k))^eb to degree D.
RationalSeries eta_quotient(int ea, int eb, std::size_t D) {
  RationalSeries r = series_constant(BigRational(1), D);
  for (std::size_t k = 1; 2 * k <= D; ++k) {
    const RationalSeries a = series_constant(BigRational(1), D) + series_monomial(BigRational(1), 4 * k, D);
    const RationalSeries b = series_constant(BigRational(1), D) + series_monomial(BigRational(1), 2 * k, D);
    const RationalSeries binv = series_invert(b);
    for (int i = 0; i < ea; ++i) r = r * a;
    for (int i = 0; i < eb; ++i) r = r * binv;
  }
  return shift_up(r, 1);
}

PadicSeries reduce(const RationalSeries& a, const PadicContext& ctx) { return reduce_mod(a, ctx); }

}  // namespace

TEST_SUITE("cyfam") {
  TEST_CASE("constant terms by sparse powers") {
    const auto simp = constant_terms(make_family(FamilyKind::Simplicial, 2), 6);
    CHECK(simp == std::vector<BigInt>{1, 0, 0, 6, 0, 0, 90});
    const auto an = constant_terms(make_family(FamilyKind::An, 2), 1);
    CHECK(an[1] == 3);
    CHECK(constant_terms(make_family(FamilyKind::Hypercubic, 1), 0) == std::vector<BigInt>{1});
  }

  TEST_CASE("family metadata") {
    const FamilySpec s = make_family(FamilyKind::Simplicial, 2);
    CHECK(s.vertices.size() == 3);
    CHECK(s.alpha == 0);
    CHECK(s.gamma == 1);
    CHECK(s.symmetry_order == 6);
    const FamilySpec a = make_family(FamilyKind::An, 2);
    CHECK(a.alpha == 3);
    CHECK(a.vertices.size() == 6);
    CHECK(make_family(FamilyKind::Hypercubic, 3).vertices.size() == 8);
    CHECK(support_lattice_index(make_family(FamilyKind::Hypercubic, 2).g) == 2);
    CHECK(excellent_hypothesis_holds(make_family(FamilyKind::Hypercubic, 2), 3));
    CHECK_FALSE(excellent_hypothesis_holds(make_family(FamilyKind::Simplicial, 2), 3));
    CHECK(catalog(3).size() == 12);
    CHECK(parse_family_kind("Hypercubic") == FamilyKind::Hypercubic);
    CHECK_FALSE(parse_family_kind("cubic").has_value());
  }

  TEST_CASE("custom families are validated") {
    CHECK_THROWS_AS(custom_family(parse_int_poly("1 : 2; -1 : 1")), DomainError);
    CHECK_THROWS_AS(custom_family(parse_int_poly("2 : 1; -1 : 1")), DomainError);
    const FamilySpec c = custom_family(make_family(FamilyKind::Hyperoctahedral, 2).g, 8);
    CHECK(c.kind == FamilyKind::Custom);
    CHECK(period_F(c, 8) == period_F(make_family(FamilyKind::Hyperoctahedral, 2), 8));
  }

  TEST_CASE("closed forms agree with the relation enumeration") {
    for (const FamilySpec& fam : catalog(3)) {
      CAPTURE(fam.name());
      const RationalSeries Fc = period_F(fam, 12);
      CHECK(Fc == period_F(fam, 12, PeriodPath::Generic));
      CHECK(period_G(fam, 12) == period_G(fam, 12, PeriodPath::Generic));
      const auto g = constant_terms(fam, 12);
      for (std::size_t k = 0; k <= 12; ++k) CHECK(Fc[k] == BigRational(g[k]));
    }
  }

  TEST_CASE("period values") {
    CHECK(period_F(make_family(FamilyKind::Hypercubic, 2), 4) == from_ints({1, 0, 4, 0, 36}));
    CHECK(period_F(make_family(FamilyKind::Hyperoctahedral, 2), 2)[2] == 4);
    const RationalSeries G = period_G(make_family(FamilyKind::Simplicial, 2), 6);
    CHECK(G[0] == 0);
    CHECK(G[3] == 5);
    for (const FamilySpec& fam : catalog(2)) {
      const PeriodData P = periods(fam, 10);
      CHECK(P.F[0] == 1);
      CHECK(P.G[0] == 0);
      CHECK(P.W[0] == 1);
      CHECK(min_valuation(P.W, 3) >= 0);
    }
  }

  TEST_CASE("relation bound") {
    const FamilySpec h3 = make_family(FamilyKind::Hypercubic, 3);
    CHECK(relation_bound(h3, h3.vertices.front()) == BigRational(3, 2));
    const FamilySpec h1 = make_family(FamilyKind::Hypercubic, 1);
    CHECK(relation_bound(h1, h1.vertices.front()) == 1);
    const FamilySpec s2 = make_family(FamilyKind::Simplicial, 2);
    CHECK(relation_bound(s2, s2.vertices.front()) == 1);
  }

  TEST_CASE("second-order equation coefficients") {
    for (const FamilySpec& fam : catalog(3)) {
      CAPTURE(fam.name());
      const auto [A, B] = ab_coefficients(periods(fam, 14));
      CHECK(A[0] == 0);
      CHECK(B[0] == 0);
    }
    // theta((1 - 4t^2) theta - 4t^2) = (1 - 4t^2) theta^2 - 12t^2 theta - 8t^2
    const auto [A, B] = ab_coefficients(periods(make_family(FamilyKind::Hypercubic, 1), 12));
    const RationalSeries inv = series_invert(from_ints({1, 0, -4, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
    CHECK(B == BigRational(12) * series_monomial(BigRational(1), 2, 12) * inv);
    CHECK(A == BigRational(8) * series_monomial(BigRational(1), 2, 12) * inv);
  }

  TEST_CASE("mirror maps") {
    const std::size_t D = 16;
    const RationalSeries t1 = mirror_map(canonical_q(periods(make_family(FamilyKind::Hypercubic, 1), D)));
    RationalSeries expect = rational_series(D);
    for (std::size_t k = 0; 2 * k + 1 <= D; ++k) expect[2 * k + 1] = k % 2 ? -1 : 1;
    CHECK(t1 == expect);

    const PeriodData P2 = periods(make_family(FamilyKind::Hypercubic, 2), D);
    const RationalSeries t2 = mirror_map(canonical_q(P2));
    CHECK(t2[1] == 1);
    CHECK(t2[3] == -4);
    CHECK(t2[5] == 14);
    CHECK(t2[7] == -40);
    CHECK(t2[8] == 0);
    CHECK(t2[9] == 101);
    CHECK(t2 == eta_quotient(8, 4, D));
    CHECK(series_compose(P2.F, t2) == theta_power(2, D));

    const PeriodData P3 = periods(make_family(FamilyKind::Hypercubic, 3), D);
    const RationalSeries t3 = mirror_map(canonical_q(P3));
    CHECK(truncate(t3, 7) == from_ints({0, 1, 0, -12, 0, 78, 0, -376}));
    CHECK(series_compose(P3.F, t3) == theta_power(4, D));
    CHECK(t3 == eta_quotient(12, 12, D));
  }

  TEST_CASE("truncated_F") {
    const RationalSeries F = period_F(make_family(FamilyKind::Simplicial, 2), 10);
    CHECK(truncated_F(F, 1) == series_constant(BigRational(1), 10));
    CHECK(truncated_F(F, 5) == BigRational(1) * (series_constant(BigRational(1), 10) +
                                                 BigRational(6) * series_monomial(BigRational(1), 3, 10)));
    CHECK_THROWS_AS(truncated_F(F, 0), DomainError);
  }

  TEST_CASE("excellent lift for n = 1 matches the closed form") {
    const PadicContext ctx(3, 6);
    const std::size_t D = 29;
    const FamilySpec fam = make_family(FamilyKind::Hypercubic, 1);
    const FrobeniusData d = excellent_lift(fam, ctx, D);
    // q^3 / (1 + q^6) composed with q(t)
    const RationalSeries q = canonical_q(periods(fam, D));
    RationalSeries q3 = q * q * q;
    const RationalSeries oracle = q3 * series_invert(series_constant(BigRational(1), D) + q3 * q3);
    CHECK(d.t_sigma == reduce(oracle, ctx));
    for (std::size_t i = 0; i <= D; ++i) CHECK(d.lambda1[i].is_zero());
    CHECK(d.lambda0[0] == PadicInt(ctx, 1));
  }

  TEST_CASE("frobenius data identities") {
    const FamilySpec fam = make_family(FamilyKind::Hypercubic, 2);
    const PadicContext ctx(3, 6);
    const std::size_t D = 18;
    RationalSeries v = series_constant(BigRational(4), D);
    v[1] = 3;
    for (const LiftSpec& lift : {LiftSpec{LiftKind::Tp, {}}, LiftSpec{LiftKind::Excellent, {}},
                                 LiftSpec{LiftKind::Explicit, v}}) {
      CAPTURE(lift_name(lift.kind));
      const FrobeniusData d = frobenius_data(fam, lift, ctx, D);
      CHECK(d.lambda0[0] == PadicInt(ctx, 1));
      CHECK(min_valuation(d.lambda1) >= 1);
      const PadicInt v0 = PadicInt::from_rational(ctx, d.t_sigma_rational[3]);
      CHECK(d.lambda1[0] == padic_log(v0.inverse()));

      const Matrix2& L = d.Lambda;
      const PadicSeries det = L[0][0] * L[1][1] - L[0][1] * L[1][0];
      CHECK(det * d.W_sigma == PadicInt(ctx, 3) * d.W);

      const PadicSeries Fs = reduce(series_compose(period_F(fam, D), d.t_sigma_rational), ctx);
      const PadicSeries tFs = reduce(series_compose(theta(period_F(fam, D)), d.t_sigma_rational), ctx);
      CHECK(d.lambda0 * Fs + d.lambda1 * tFs == reduce(period_F(fam, D), ctx));

      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          PadicSeries r = theta(L[i][j]);
          for (int k = 0; k < 2; ++k) r = r - d.N_theta[i][k] * L[k][j] + L[i][k] * d.N_theta_sigma[k][j];
          CHECK(is_zero(truncate(r, D - 3)));
        }
      CHECK(min_valuation(L[1][1]) >= 1);
    }
  }

  TEST_CASE("excellent lift hypotheses") {
    const PadicContext ctx(3, 4);
    CHECK_THROWS_AS(excellent_lift(make_family(FamilyKind::Simplicial, 2), ctx, 6), DomainError);
    RationalSeries bad = series_constant(BigRational(2), 10);
    CHECK_THROWS_AS(frobenius_data(make_family(FamilyKind::Hypercubic, 1), {LiftKind::Explicit, bad}, ctx, 6),
                    DomainError);
  }

  TEST_CASE("expansion coefficients along a vertex") {
    const FamilySpec fam = make_family(FamilyKind::Hypercubic, 2);
    const RationalSeries a = expand_CY_coefficient(fam, 1, ExponentVector{1, 1}, 11);
    for (long k = 0; k <= 11; ++k) {
      const BigRational expect = k % 2 ? BigRational(binomial(k, (k + 1) / 2) * binomial(k, (k + 1) / 2)) : 0;
      CHECK(a[k] == expect);
    }
    CHECK(expand_CY_coefficient(fam, 0, ExponentVector{1, 1}, 12) == period_F(fam, 12));
    const FamilySpec s = make_family(FamilyKind::Simplicial, 2);
    CHECK(expand_CY_coefficient(s, 0, s.vertices.front(), 9) == period_F(s, 9));
    CHECK_THROWS_AS(expand_CY_coefficient(fam, 1, ExponentVector{1, 0}, 5), DomainError);
  }

  TEST_CASE("P_Q polynomials") {
    CHECK(pq_polynomial(2, 1) == std::map<long, BigRational>{{-1, 1}});
    CHECK(pq_polynomial(2, 3) == std::map<long, BigRational>{{-3, 1}, {-1, 1}});
    CHECK(pq_polynomial(2, 3, PqConvention::InclusiveRange) == std::map<long, BigRational>{{-3, 36}, {-1, 1}});
    CHECK_THROWS_AS(pq_polynomial(2, 4), DomainError);
    // -P_Q is the coefficient of (x_1...x_n)^Q in X s / (X s - prod(1 + x_i^2)), s = 1/t:
    // sum_a -[(-1)^a binom(Q-a-1, a)]^n t^(2a-Q).
    for (int n = 1; n <= 3; ++n)
      for (long Q = 1; Q <= 9; Q += 2) {
        std::map<long, BigRational> expect;
        for (long a = 0; 2 * a < Q; ++a) {
          BigInt b = binomial(Q - a - 1, a);
          if (a % 2) b = -b;
          BigInt c = 1;
          for (int i = 0; i < n; ++i) c *= b;
          expect[2 * a - Q] = BigRational(c);
        }
        CHECK(pq_polynomial(n, Q) == expect);
      }
  }
}
