#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dwork/lattice.hpp"

namespace dwork {

enum class FamilyKind { Simplicial, Hypercubic, Hyperoctahedral, An, Custom };

std::string family_name(FamilyKind kind);
std::optional<FamilyKind> parse_family_kind(const std::string& name);

// f = 1 - t g with g completely symmetric: every nonconstant coefficient equals gamma.
struct FamilySpec {
  FamilyKind kind = FamilyKind::Custom;
  int n = 0;
  IntPoly g;
  BigInt alpha;  // constant term of g
  BigInt gamma;  // common vertex coefficient
  long symmetry_order = 1;
  Polytope delta;
  std::vector<ExponentVector> vertices;  // nonconstant support of g, sorted
  std::string name() const;
};

FamilySpec make_family(FamilyKind kind, int n);
// Rejects a non-reflexive Newton polytope or unequal nonconstant coefficients.
FamilySpec custom_family(const IntPoly& g, long symmetry_order = 1);
// The four named families for n = 1..max_n.
std::vector<FamilySpec> catalog(int max_n = 3);

// gamma * #G * [Z^n : support lattice]; an odd prime dividing it has no excellent lift here.
BigInt excluded_product(const FamilySpec& fam);
bool excellent_hypothesis_holds(const FamilySpec& fam, std::int64_t p);

// Constant terms of g^k, k <= D, by sparse powers.
std::vector<BigInt> constant_terms(const FamilySpec& fam, std::size_t D);

enum class PeriodPath { ClosedForm, Generic };

// F = sum_k g_k t^k and the log-partner G of F log t + G. Named families default to closed
// forms; custom families always use the lattice-relation enumeration.
RationalSeries period_F(const FamilySpec& fam, std::size_t D, PeriodPath path = PeriodPath::ClosedForm);
RationalSeries period_G(const FamilySpec& fam, std::size_t D, PeriodPath path = PeriodPath::ClosedForm);

// lambda = 1/(1 - mu), mu = max{m : m v_1 in conv(v_2, ..., v_N)} clamped below at 0; bounds the
// relation enumeration, where only mu > 0 matters.
BigRational relation_bound(const FamilySpec& fam, const ExponentVector& v1);

struct PeriodData {
  RationalSeries F, G, W;
};

RationalSeries wronskian(const RationalSeries& F, const RationalSeries& G);
PeriodData periods(const FamilySpec& fam, std::size_t D);

// a + b log t.
struct LogPairSeries {
  RationalSeries a, b;
  LogPairSeries theta() const;
  bool is_zero() const { return a.is_zero_series() && b.is_zero_series(); }
  friend LogPairSeries operator+(const LogPairSeries& x, const LogPairSeries& y) { return {x.a + y.a, x.b + y.b}; }
  friend LogPairSeries operator-(const LogPairSeries& x, const LogPairSeries& y) { return {x.a - y.a, x.b - y.b}; }
  friend LogPairSeries operator*(const RationalSeries& s, const LogPairSeries& x) { return {s * x.a, s * x.b}; }
};

// A, B with theta^2 y = B theta y + A y for y = F and y = F log t + G.
// Throws InternalError if either residual is nonzero.
std::pair<RationalSeries, RationalSeries> ab_coefficients(const PeriodData& P);

// q = t exp(G/F).
RationalSeries canonical_q(const PeriodData& P);
// t(q), the compositional inverse of q(t).
RationalSeries mirror_map(const RationalSeries& q);

// F_Nt = sum_{k < Nt} g_k t^k, at the degree of F.
RationalSeries truncated_F(const RationalSeries& F, std::size_t Nt);

enum class LiftKind { Tp, Explicit, Excellent };
std::string lift_name(LiftKind kind);

struct LiftSpec {
  LiftKind kind = LiftKind::Tp;
  RationalSeries v;  // t^sigma = t^p v for explicit lifts
};

// t^sigma over Q to degree D. The excellent lift solves q(t^sigma) = gamma^(p-1) q(t)^p.
RationalSeries frobenius_image(const FamilySpec& fam, const LiftSpec& lift, std::int64_t p, std::size_t D);

using Matrix2 = std::array<std::array<PadicSeries, 2>, 2>;

struct FrobeniusData {
  PadicContext ctx;
  LiftKind lift = LiftKind::Tp;
  std::size_t degree = 0;
  RationalSeries t_sigma_rational;
  PadicSeries t_sigma;
  PadicSeries q;
  PadicSeries mirror;
  PadicSeries lambda0, lambda1;
  Matrix2 Lambda;
  std::array<std::array<PadicInt, 2>, 2> Lambda0;  // [[1, log(gamma^(p-1)/v(0))], [0, p]]
  RationalSeries A, B;
  Matrix2 N_theta, N_theta_sigma;
  PadicSeries W, W_sigma;
};

// Full Frobenius data at degree D: Lambda = Y [[1, c], [0, p]] adj(Y^sigma) / W^sigma with
// Y = [[F, G], [theta F, F + theta G]] and c = log(gamma^(p-1)) - log(t^sigma/t^p).
// Requires t^sigma = t^p v with v(0) = 1 mod p. Throws InternalError if the top row of Lambda
// differs from (lambda0, lambda1).
FrobeniusData frobenius_data(const FamilySpec& fam, const LiftSpec& lift, const PadicContext& ctx,
                             std::size_t D);
// Checks the divisibility hypothesis first (DomainError naming the factor).
FrobeniusData excellent_lift(const FamilySpec& fam, const PadicContext& ctx, std::size_t D);
std::pair<PadicSeries, PadicSeries> lambda_pair(const FamilySpec& fam, const LiftSpec& lift,
                                                const PadicContext& ctx, std::size_t D);
Matrix2 frobenius_matrix(const FamilySpec& fam, const LiftSpec& lift, const PadicContext& ctx, std::size_t D);

// Coefficient of x^(Q v) in the t-adic expansion of 1/(1 - t g), to t-degree Dt.
RationalSeries expand_CY_coefficient(const FamilySpec& fam, long Q, const ExponentVector& v, std::size_t Dt);

// Reading of the descending product (2k-Q)...(k+1-Q) in P_Q.
enum class PqConvention {
  FallingFactors,  // k factors 2k-Q, 2k-Q-1, ..., k+1-Q; empty (= 1) at k = 0
  InclusiveRange,  // every integer between the two endpoints, in either direction
};
std::string pq_convention_name(PqConvention c);

// P_Q(t) = t^-Q sum_k (prod / k!)^n t^2k as exponent -> coefficient.
std::map<long, BigRational> pq_polynomial(int n, long Q, PqConvention conv = PqConvention::FallingFactors);

}  // namespace dwork
