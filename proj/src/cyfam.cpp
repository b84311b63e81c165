#include "dwork/cyfam.hpp"

#include <algorithm>
#include <functional>

namespace dwork {

std::string family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Simplicial: return "simplicial";
    case FamilyKind::Hypercubic: return "hypercubic";
    case FamilyKind::Hyperoctahedral: return "hyperoctahedral";
    case FamilyKind::An: return "An";
    case FamilyKind::Custom: return "custom";
  }
  return "custom";
}

std::optional<FamilyKind> parse_family_kind(const std::string& name) {
  std::string s;
  for (char c : name) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "simplicial") return FamilyKind::Simplicial;
  if (s == "hypercubic") return FamilyKind::Hypercubic;
  if (s == "hyperoctahedral") return FamilyKind::Hyperoctahedral;
  if (s == "an" || s == "a_n") return FamilyKind::An;
  if (s == "custom") return FamilyKind::Custom;
  return std::nullopt;
}

std::string FamilySpec::name() const { return family_name(kind) + " n=" + std::to_string(n); }

namespace {

void finalize(FamilySpec& fam) {
  const IntPoly& g = fam.g;
  if (g.is_zero()) throw DomainError("g is zero");
  fam.n = g.dim();
  fam.alpha = g.coeff_or(ExponentVector(fam.n), BigInt(0));
  fam.vertices.clear();
  std::optional<BigInt> gamma;
  for (const auto& [u, c] : g.terms()) {
    if (u.is_zero()) continue;
    if (gamma && *gamma != c)
      throw DomainError("nonconstant coefficients of g differ: " + c.get_str() + " vs " + gamma->get_str());
    gamma = c;
    fam.vertices.push_back(u);
  }
  if (!gamma) throw DomainError("g has no nonconstant term");
  fam.gamma = *gamma;
  fam.delta = newton_polytope(g);
  if (!fam.delta.full_dimensional() || !is_reflexive(fam.delta))
    throw DomainError("Newton polytope of g is not reflexive");
  for (const auto& v : fam.vertices)
    if (std::find(fam.delta.vertices().begin(), fam.delta.vertices().end(), v) == fam.delta.vertices().end())
      throw DomainError("nonconstant monomial " + v.to_string() + " is not a vertex");
}

ExponentVector unit(int n, int i, int s = 1) {
  ExponentVector e(n);
  e[i] = s;
  return e;
}

std::vector<BigInt> factorials(std::size_t m) {
  std::vector<BigInt> f(m + 1);
  f[0] = 1;
  for (std::size_t i = 1; i <= m; ++i) f[i] = f[i - 1] * static_cast<unsigned long>(i);
  return f;
}

std::vector<BigRational> harmonics(std::size_t m) {
  std::vector<BigRational> h(m + 1);
  h[0] = 0;
  for (std::size_t i = 1; i <= m; ++i) h[i] = h[i - 1] + BigRational(1, static_cast<unsigned long>(i));
  return h;
}

// sum_j w_j x^j / (j!)^2 to degree K.
RationalSeries inverse_square_factorials(std::size_t K, const std::vector<BigRational>* weights = nullptr) {
  const auto fact = factorials(K);
  RationalSeries s = rational_series(K);
  for (std::size_t j = 0; j <= K; ++j) {
    s[j] = BigRational(1) / BigRational(fact[j] * fact[j]);
    if (weights) s[j] *= (*weights)[j];
  }
  return s;
}

RationalSeries series_power(const RationalSeries& a, int e) {
  RationalSeries r = series_constant(BigRational(1), a.degree());
  for (int i = 0; i < e; ++i) r = r * a;
  return r;
}

// Calls cb(l1, rest, R) for every relation l1 v1 + sum rest_i w_i = 0 with rest >= 0, R = |rest| <= Rmax.
void enumerate_relations(const ExponentVector& v1, const std::vector<ExponentVector>& others, long Rmax,
                         const std::function<void(long, const std::vector<int>&, long)>& cb) {
  const int n = v1.dim();
  int pivot = 0;
  while (pivot < n && v1[pivot] == 0) ++pivot;
  std::vector<int> rest(others.size(), 0);
  std::function<void(std::size_t, long, const ExponentVector&)> rec =
      [&](std::size_t i, long budget, const ExponentVector& S) {
        if (i == others.size()) {
          if (S[pivot] % v1[pivot] != 0) return;
          const long l1 = -S[pivot] / v1[pivot];
          for (int j = 0; j < n; ++j)
            if (static_cast<long>(v1[j]) * l1 != -S[j]) return;
          cb(l1, rest, Rmax - budget);
          return;
        }
        ExponentVector T = S;
        for (long c = 0; c <= budget; ++c) {
          rest[i] = static_cast<int>(c);
          rec(i + 1, budget - c, T);
          T += others[i];
        }
        rest[i] = 0;
      };
  rec(0, Rmax, ExponentVector(n));
}

std::vector<ExponentVector> others_than(const FamilySpec& fam, const ExponentVector& v1) {
  std::vector<ExponentVector> o;
  for (const auto& v : fam.vertices)
    if (v != v1) o.push_back(v);
  return o;
}

long relation_budget(const FamilySpec& fam, const ExponentVector& v1, long total) {
  BigRational lam = relation_bound(fam, v1);
  if (lam < 1) lam = 1;
  BigRational b = lam * total;
  BigInt fl = b.get_num() / b.get_den();
  return fl.get_si();
}

BigRational ratio(long a, long b) {
  BigRational r(a, 1);
  r /= b;
  return r;
}

BigInt ipow(const BigInt& b, long e) {
  BigInt r = 1;
  for (long i = 0; i < e; ++i) r *= b;
  return r;
}

RationalSeries canonical(RationalSeries s) {
  for (std::size_t k = 0; k <= s.degree(); ++k) s[k].canonicalize();
  return s;
}

RationalSeries generic_F(const FamilySpec& fam, std::size_t D) {
  const ExponentVector v1 = fam.vertices.front();
  const auto others = others_than(fam, v1);
  const auto fact = factorials(D);
  RationalSeries F = rational_series(D);
  enumerate_relations(v1, others, static_cast<long>(D), [&](long l1, const std::vector<int>& rest, long R) {
    if (l1 < 0 || l1 + R > static_cast<long>(D)) return;
    const long L = l1 + R;
    BigInt den = fact[l1];
    for (int r : rest) den *= fact[r];
    const long mmax = sgn(fam.alpha) == 0 ? 0 : static_cast<long>(D) - L;
    for (long m = 0; m <= mmax; ++m)
      F[m + L] += BigRational(ipow(fam.alpha, m) * ipow(fam.gamma, L) * fact[m + L], fact[m] * den);
  });
  for (std::size_t k = 0; k <= D; ++k) F[k].canonicalize();
  return F;
}

RationalSeries generic_G(const FamilySpec& fam, std::size_t D) {
  const ExponentVector v1 = fam.vertices.front();
  const auto others = others_than(fam, v1);
  const long Rmax = relation_budget(fam, v1, static_cast<long>(D));
  const auto fact = factorials(static_cast<std::size_t>(std::max<long>(Rmax, static_cast<long>(D)) + 1));
  const auto H = harmonics(D);
  RationalSeries G = rational_series(D);
  enumerate_relations(v1, others, Rmax, [&](long l1, const std::vector<int>& rest, long R) {
    const long L = l1 + R;
    if (L < 0 || L > static_cast<long>(D)) return;
    BigInt den = 1;
    for (int r : rest) den *= fact[r];
    const long mmax = sgn(fam.alpha) == 0 ? 0 : static_cast<long>(D) - L;
    for (long m = 0; m <= mmax; ++m) {
      const BigInt common = ipow(fam.alpha, m) * ipow(fam.gamma, L);
      if (l1 >= 0) {
        G[m + L] += BigRational(common * fact[m + L], fact[m] * fact[l1] * den) * (H[m + L] - H[l1]);
      } else {
        BigInt num = common * fact[m + L] * fact[-1 - l1];
        if ((l1 + 1) % 2 != 0) num = -num;
        G[m + L] += BigRational(num, fact[m] * den);
      }
    }
  });
  for (std::size_t k = 0; k <= D; ++k) G[k].canonicalize();
  return G;
}

RationalSeries closed_F(const FamilySpec& fam, std::size_t D) {
  const int n = fam.n;
  const auto fact = factorials(D);
  RationalSeries F = rational_series(D);
  switch (fam.kind) {
    case FamilyKind::Simplicial:
      for (std::size_t k = 0; (n + 1) * k <= D; ++k) F[(n + 1) * k] = BigRational(fact[(n + 1) * k], ipow(fact[k], n + 1));
      break;
    case FamilyKind::Hypercubic:
      for (std::size_t k = 0; 2 * k <= D; ++k) F[2 * k] = BigRational(ipow(binomial(2 * k, k), n));
      break;
    case FamilyKind::Hyperoctahedral: {
      const RationalSeries En = series_power(inverse_square_factorials(D / 2), n);
      for (std::size_t k = 0; 2 * k <= D; ++k) F[2 * k] = BigRational(fact[2 * k]) * En[k];
      break;
    }
    case FamilyKind::An: {
      const RationalSeries En = series_power(inverse_square_factorials(D), n + 1);
      for (std::size_t k = 0; k <= D; ++k) F[k] = BigRational(fact[k] * fact[k]) * En[k];
      break;
    }
    case FamilyKind::Custom: return generic_F(fam, D);
  }
  return canonical(F);
}

RationalSeries closed_G(const FamilySpec& fam, std::size_t D) {
  const int n = fam.n;
  const auto fact = factorials(D);
  const auto H = harmonics(D);
  const RationalSeries F = closed_F(fam, D);
  RationalSeries G = rational_series(D);
  switch (fam.kind) {
    case FamilyKind::Simplicial:
      for (std::size_t k = 0; (n + 1) * k <= D; ++k)
        G[(n + 1) * k] = F[(n + 1) * k] * (H[(n + 1) * k] - H[k]);
      break;
    case FamilyKind::Hypercubic:
      for (std::size_t k = 0; 2 * k <= D; ++k) G[2 * k] = F[2 * k] * BigRational(n) * (H[2 * k] - H[k]);
      break;
    case FamilyKind::Hyperoctahedral: {
      const std::size_t K = D / 2;
      const RationalSeries mixed =
          inverse_square_factorials(K, &H) * series_power(inverse_square_factorials(K), n - 1);
      for (std::size_t k = 0; k <= K; ++k)
        G[2 * k] = H[2 * k] * F[2 * k] - BigRational(fact[2 * k]) * mixed[k];
      break;
    }
    case FamilyKind::An: {
      const RationalSeries mixed = inverse_square_factorials(D, &H) * series_power(inverse_square_factorials(D), n);
      for (std::size_t k = 0; k <= D; ++k)
        G[k] = BigRational(2) * (H[k] * F[k] - BigRational(fact[k] * fact[k]) * mixed[k]);
      break;
    }
    case FamilyKind::Custom: return generic_G(fam, D);
  }
  return canonical(G);
}

PadicSeries reduce_to(const RationalSeries& a, const PadicContext& ctx, std::size_t D) {
  return reduce_mod(truncate(a, D), ctx);
}

}  // namespace

FamilySpec make_family(FamilyKind kind, int n) {
  if (n < 1 || n > kMaxDim - 1) throw ConfigError("family dimension must be in 1..5");
  FamilySpec fam;
  fam.kind = kind;
  IntPoly g(n);
  switch (kind) {
    case FamilyKind::Simplicial: {
      ExponentVector all(n);
      for (int i = 0; i < n; ++i) {
        g.add_term(unit(n, i), BigInt(1));
        all[i] = -1;
      }
      g.add_term(all, BigInt(1));
      fam.symmetry_order = factorial(n + 1).get_si();
      break;
    }
    case FamilyKind::Hypercubic: {
      for (int mask = 0; mask < (1 << n); ++mask) {
        ExponentVector u(n);
        for (int i = 0; i < n; ++i) u[i] = (mask >> i & 1) ? -1 : 1;
        g.add_term(u, BigInt(1));
      }
      fam.symmetry_order = (1L << n) * factorial(n).get_si();
      break;
    }
    case FamilyKind::Hyperoctahedral: {
      for (int i = 0; i < n; ++i) {
        g.add_term(unit(n, i), BigInt(1));
        g.add_term(unit(n, i, -1), BigInt(1));
      }
      fam.symmetry_order = (1L << n) * factorial(n).get_si();
      break;
    }
    case FamilyKind::An: {
      IntPoly a = IntPoly::constant(n, BigInt(1));
      IntPoly b = IntPoly::constant(n, BigInt(1));
      for (int i = 0; i < n; ++i) {
        a.add_term(unit(n, i), BigInt(1));
        b.add_term(unit(n, i, -1), BigInt(1));
      }
      g = a * b;
      fam.symmetry_order = n == 1 ? 2 : 2 * factorial(n + 1).get_si();
      break;
    }
    case FamilyKind::Custom: throw ConfigError("custom families need an explicit g");
  }
  fam.g = g;
  finalize(fam);
  return fam;
}

FamilySpec custom_family(const IntPoly& g, long symmetry_order) {
  if (symmetry_order < 1) throw ConfigError("symmetry order must be positive");
  FamilySpec fam;
  fam.kind = FamilyKind::Custom;
  fam.g = g;
  fam.symmetry_order = symmetry_order;
  finalize(fam);
  return fam;
}

std::vector<FamilySpec> catalog(int max_n) {
  std::vector<FamilySpec> out;
  for (FamilyKind k : {FamilyKind::Simplicial, FamilyKind::Hypercubic, FamilyKind::Hyperoctahedral, FamilyKind::An})
    for (int n = 1; n <= max_n; ++n) out.push_back(make_family(k, n));
  return out;
}

BigInt excluded_product(const FamilySpec& fam) {
  return abs(fam.gamma) * fam.symmetry_order * support_lattice_index(fam.g);
}

bool excellent_hypothesis_holds(const FamilySpec& fam, std::int64_t p) {
  return excluded_product(fam) % BigInt(static_cast<long>(p)) != 0;
}

std::vector<BigInt> constant_terms(const FamilySpec& fam, std::size_t D) {
  std::vector<BigInt> out;
  IntPoly gp = IntPoly::constant(fam.n, BigInt(1));
  for (std::size_t k = 0; k <= D; ++k) {
    out.push_back(gp.coeff_or(ExponentVector(fam.n), BigInt(0)));
    if (k < D) gp = gp * fam.g;
  }
  return out;
}

RationalSeries period_F(const FamilySpec& fam, std::size_t D, PeriodPath path) {
  return path == PeriodPath::Generic ? generic_F(fam, D) : closed_F(fam, D);
}

RationalSeries period_G(const FamilySpec& fam, std::size_t D, PeriodPath path) {
  return path == PeriodPath::Generic ? generic_G(fam, D) : closed_G(fam, D);
}

BigRational relation_bound(const FamilySpec& fam, const ExponentVector& v1) {
  auto pts = others_than(fam, v1);
  if (pts.empty()) throw DomainError("relation bound needs at least two vertices");
  // Adjoining the origin turns max(mu, 0) into a facet computation: a positive hit on the ray
  // lies on a facet away from 0, all of whose vertices are other vertices.
  pts.push_back(ExponentVector(fam.n));
  const Polytope hull = Polytope::hull(fam.n, pts);
  if (!hull.full_dimensional()) throw DomainError("relation bound: the other vertices do not span");
  BigRational mu = 0;
  bool first = true;
  for (const auto& F : hull.facets()) {
    const long d = dot(F.normal, v1);
    if (d <= 0) continue;
    const BigRational cand = ratio(F.offset, d);
    if (first || cand < mu) mu = cand;
    first = false;
  }
  if (first || mu >= 1) throw DomainError("relation bound: direction is not a vertex");
  return BigRational(1) / (BigRational(1) - mu);
}

RationalSeries wronskian(const RationalSeries& F, const RationalSeries& G) {
  return F * F + F * theta(G) - theta(F) * G;
}

PeriodData periods(const FamilySpec& fam, std::size_t D) {
  PeriodData P{period_F(fam, D), period_G(fam, D), rational_series(D)};
  P.W = wronskian(P.F, P.G);
  return P;
}

LogPairSeries LogPairSeries::theta() const { return {dwork::theta(a) + b, dwork::theta(b)}; }

std::pair<RationalSeries, RationalSeries> ab_coefficients(const PeriodData& P) {
  const RationalSeries &F = P.F, &G = P.G;
  const RationalSeries tF = theta(F), ttF = theta(tF), tG = theta(G), ttG = theta(tG);
  const RationalSeries Winv = series_invert(P.W);
  const RationalSeries rhs2 = BigRational(2) * tF + ttG;
  RationalSeries B = (F * rhs2 - G * ttF) * Winv;
  RationalSeries A = ((F + tG) * ttF - tF * rhs2) * Winv;
  const RationalSeries zero = rational_series(F.degree());
  for (const LogPairSeries& y : {LogPairSeries{F, zero}, LogPairSeries{G, F}}) {
    const LogPairSeries ty = y.theta();
    if (!(ty.theta() - B * ty - A * y).is_zero())
      throw InternalError("second-order equation residual is nonzero");
  }
  return {A, B};
}

RationalSeries canonical_q(const PeriodData& P) {
  return shift_up(series_exp(P.G * series_invert(P.F)), 1);
}

RationalSeries mirror_map(const RationalSeries& q) { return series_reverse(q); }

RationalSeries truncated_F(const RationalSeries& F, std::size_t Nt) {
  if (Nt < 1) throw DomainError("truncation length must be positive");
  RationalSeries r = F;
  for (std::size_t k = Nt; k <= r.degree(); ++k) r[k] = 0;
  return r;
}

std::string lift_name(LiftKind kind) {
  switch (kind) {
    case LiftKind::Tp: return "tp";
    case LiftKind::Explicit: return "explicit";
    case LiftKind::Excellent: return "excellent";
  }
  return "tp";
}

RationalSeries frobenius_image(const FamilySpec& fam, const LiftSpec& lift, std::int64_t p, std::size_t D) {
  const std::size_t pp = static_cast<std::size_t>(p);
  switch (lift.kind) {
    case LiftKind::Tp: return series_monomial(BigRational(1), pp, D);
    case LiftKind::Explicit: {
      RationalSeries ts = rational_series(D);
      if (D >= pp && lift.v.degree() < D - pp) throw PrecisionError("explicit lift series is too short");
      for (std::size_t i = pp; i <= D; ++i) ts[i] = lift.v[i - pp];
      return ts;
    }
    case LiftKind::Excellent: {
      const PeriodData P = periods(fam, D);
      const RationalSeries q = canonical_q(P);
      RationalSeries inner = series_constant(BigRational(ipow(fam.gamma, p - 1)), D);
      for (std::int64_t i = 0; i < p; ++i) inner = inner * q;
      return series_compose(mirror_map(q), inner);
    }
  }
  throw ConfigError("unknown lift");
}

FrobeniusData frobenius_data(const FamilySpec& fam, const LiftSpec& lift, const PadicContext& ctx,
                             std::size_t D) {
  const std::int64_t p = ctx.p;
  const std::size_t Dw = D + static_cast<std::size_t>(p);
  const PeriodData P = periods(fam, Dw);
  const RationalSeries ts = frobenius_image(fam, lift, p, Dw);
  const RationalSeries tp = series_monomial(BigRational(1), static_cast<std::size_t>(p), Dw);
  if (min_valuation(ts - tp, p) < 1) throw DomainError("t^sigma is not congruent to t^p mod p");
  const RationalSeries v = shift_down(ts, static_cast<std::size_t>(p));
  const BigRational v0 = v[0];

  FrobeniusData out;
  out.ctx = ctx;
  out.lift = lift.kind;
  out.degree = D;
  out.t_sigma_rational = truncate(ts, D);
  out.t_sigma = reduce_to(ts, ctx, D);
  const RationalSeries q = canonical_q(P);
  out.q = reduce_to(q, ctx, D);
  out.mirror = reduce_to(mirror_map(q), ctx, D);

  const PadicInt alpha1 =
      padic_log(PadicInt::from_rational(ctx, BigRational(ipow(fam.gamma, p - 1)) / v0));
  const RationalSeries &F = P.F, &G = P.G;
  const RationalSeries tF = theta(F), tG = theta(G);
  const RationalSeries Fs = series_compose(F, ts), Gs = series_compose(G, ts);
  const RationalSeries tFs = series_compose(tF, ts), tGs = series_compose(tG, ts);
  const RationalSeries Ws = series_compose(P.W, ts);
  const RationalSeries Wsinv = series_invert(Ws);
  const RationalSeries c = -series_log(BigRational(BigRational(1) / v0) * v);
  const BigRational pq(static_cast<long>(p));

  // Y [[1, c], [0, p]] adj(Y^sigma) / W^sigma, plus alpha1 Y [[0, 1], [0, 0]] adj(Y^sigma) / W^sigma
  const RationalSeries y00 = F, y01 = c * F + pq * G, y10 = tF, y11 = c * tF + pq * (F + tG);
  const RationalSeries a00 = Fs + tGs, a01 = -Gs, a10 = -tFs, a11 = Fs;
  const std::array<std::array<RationalSeries, 2>, 2> rat = {{
      {(y00 * a00 + y01 * a10) * Wsinv, (y00 * a01 + y01 * a11) * Wsinv},
      {(y10 * a00 + y11 * a10) * Wsinv, (y10 * a01 + y11 * a11) * Wsinv},
  }};
  const std::array<std::array<RationalSeries, 2>, 2> extra = {{
      {-(F * tFs) * Wsinv, F * Fs * Wsinv},
      {-(tF * tFs) * Wsinv, tF * Fs * Wsinv},
  }};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.Lambda[i][j] = reduce_to(rat[i][j], ctx, D) + alpha1 * reduce_to(extra[i][j], ctx, D);
  out.Lambda0 = {{{PadicInt(ctx, 1), alpha1}, {PadicInt(ctx, 0), PadicInt(ctx, p)}}};

  out.lambda1 = reduce_to((F * Fs * c + pq * G * Fs - F * Gs) * Wsinv, ctx, D) +
                alpha1 * reduce_to(F * Fs * Wsinv, ctx, D);
  const RationalSeries Fsinv = series_invert(Fs);
  out.lambda0 = reduce_to(F * Fsinv, ctx, D) - reduce_to(tFs * Fsinv, ctx, D) * out.lambda1;
  if (out.lambda0 != out.Lambda[0][0] || out.lambda1 != out.Lambda[0][1])
    throw InternalError("top row of Lambda differs from (lambda0, lambda1)");

  auto [A, B] = ab_coefficients(P);
  out.A = truncate(A, D);
  out.B = truncate(B, D);
  const PadicSeries one = one_like(padic_series(ctx, D));
  const PadicSeries zero = padic_series(ctx, D);
  out.N_theta = {{{zero, one}, {reduce_to(A, ctx, D), reduce_to(B, ctx, D)}}};
  const RationalSeries factor = series_constant(pq, D) + theta(v) * series_invert(v);
  const RationalSeries As = series_compose(A, ts), Bs = series_compose(B, ts);
  out.N_theta_sigma = {{{zero, reduce_to(factor, ctx, D)},
                        {reduce_to(factor * As, ctx, D), reduce_to(factor * Bs, ctx, D)}}};
  out.W = reduce_to(P.W, ctx, D);
  out.W_sigma = reduce_to(Ws, ctx, D);
  return out;
}

FrobeniusData excellent_lift(const FamilySpec& fam, const PadicContext& ctx, std::size_t D) {
  if (!excellent_hypothesis_holds(fam, ctx.p))
    throw DomainError("p = " + std::to_string(ctx.p) + " divides gamma * #G * [Z^n:Gamma] = " +
                      excluded_product(fam).get_str());
  return frobenius_data(fam, {LiftKind::Excellent, {}}, ctx, D);
}

std::pair<PadicSeries, PadicSeries> lambda_pair(const FamilySpec& fam, const LiftSpec& lift,
                                                const PadicContext& ctx, std::size_t D) {
  FrobeniusData d = frobenius_data(fam, lift, ctx, D);
  return {d.lambda0, d.lambda1};
}

Matrix2 frobenius_matrix(const FamilySpec& fam, const LiftSpec& lift, const PadicContext& ctx, std::size_t D) {
  return frobenius_data(fam, lift, ctx, D).Lambda;
}

RationalSeries expand_CY_coefficient(const FamilySpec& fam, long Q, const ExponentVector& v, std::size_t Dt) {
  if (Q < 0) throw DomainError("Q must be non-negative");
  if (std::find(fam.vertices.begin(), fam.vertices.end(), v) == fam.vertices.end())
    throw DomainError("direction " + v.to_string() + " is not a vertex of g");
  RationalSeries out = rational_series(Dt);
  if (Q > static_cast<long>(Dt)) return out;
  const auto others = others_than(fam, v);
  const long room = static_cast<long>(Dt) - Q;
  const long Rmax = relation_budget(fam, v, room);
  const auto fact = factorials(static_cast<std::size_t>(Dt + Rmax + 1));
  enumerate_relations(v, others, Rmax, [&](long l1, const std::vector<int>& rest, long R) {
    const long L = l1 + R;
    if (Q + l1 < 0 || L < 0 || L > room) return;
    BigInt den = fact[Q + l1];
    for (int r : rest) den *= fact[r];
    const long mmax = sgn(fam.alpha) == 0 ? 0 : room - L;
    for (long m = 0; m <= mmax; ++m)
      out[Q + m + L] += BigRational(ipow(fam.alpha, m) * ipow(fam.gamma, Q + L) * fact[Q + m + L], fact[m] * den);
  });
  for (std::size_t k = 0; k <= Dt; ++k) out[k].canonicalize();
  return out;
}

std::string pq_convention_name(PqConvention c) {
  return c == PqConvention::FallingFactors ? "falling-factors" : "inclusive-range";
}

std::map<long, BigRational> pq_polynomial(int n, long Q, PqConvention conv) {
  if (Q <= 0 || Q % 2 == 0) throw DomainError("P_Q needs a positive odd Q");
  std::map<long, BigRational> out;
  for (long k = 0; k <= (Q - 1) / 2; ++k) {
    const long hi = 2 * k - Q, lo = k + 1 - Q;
    BigInt prod = 1;
    if (conv == PqConvention::FallingFactors) {
      for (long x = hi; x >= lo; --x) prod *= x;
    } else {
      for (long x = std::min(hi, lo); x <= std::max(hi, lo); ++x) prod *= x;
    }
    BigRational term = BigRational(prod, factorial(static_cast<unsigned long>(k)));
    term.canonicalize();
    BigRational c = 1;
    for (int i = 0; i < n; ++i) c *= term;
    if (c != 0) out[2 * k - Q] = c;
  }
  return out;
}

}  // namespace dwork
