#include "dwork/harness.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <sstream>

namespace dwork {

namespace {

using json = nlohmann::json;

class Stopwatch {
 public:
  explicit Stopwatch(CongruenceReport& r) : r_(r), start_(std::chrono::steady_clock::now()) {}
  ~Stopwatch() { stop(); }
  // Writes the elapsed time; call before copying the report out of scope.
  void stop() {
    if (done_) return;
    done_ = true;
    r_.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  CongruenceReport& r_;
  std::chrono::steady_clock::time_point start_;
  bool done_ = false;
};

std::int64_t ipow(std::int64_t p, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= p;
  return r;
}

void record_series(CongruenceReport& r, const PadicSeries& d, std::size_t upto, const std::string& label = "") {
  const std::size_t top = std::min(upto, d.degree());
  for (std::size_t i = 0; i <= top; ++i)
    if (!d[i].is_zero()) r.record(d[i].valuation(), label + "t^" + std::to_string(i));
}

void record_exact(CongruenceReport& r, const BigInt& d, std::int64_t p, const std::string& at) {
  if (d != 0) r.record(p_valuation(d, p), at);
}

json family_params(const FamilySpec& fam) {
  return {{"family", family_name(fam.kind)}, {"n", fam.n}};
}

PadicSeries padic_t(const PadicContext& ctx, std::size_t D) {
  return series_monomial(PadicInt(ctx, 1), 1, D);
}

// Same residues read at the precision of `like`.
PadicSeries at_context_of(const PadicSeries& a, const PadicSeries& like) {
  return change_precision(a, like[0].context());
}

PadicSeries power(const PadicSeries& a, long e) {
  PadicSeries r = one_like(a);
  for (long i = 0; i < e; ++i) r = r * a;
  return r;
}

void require_excellent(const FamilySpec& fam, std::int64_t p) {
  if (!excellent_hypothesis_holds(fam, p))
    throw DomainError("no excellent lift: p = " + std::to_string(p) + " divides gamma * #G * index = " +
                      excluded_product(fam).get_str());
}

SeriesPoly cy_series_poly(const IntPoly& g, const PadicSeries& t) {
  SeriesPoly f = SeriesPoly::constant(g.dim(), one_like(t));
  const PadicContext& ctx = t[0].context();
  for (const auto& [u, c] : g.terms()) f.add_term(u, -(PadicInt(ctx, c) * t));
  return f;
}

std::string xml_escape(const std::string& s) {
  std::string r;
  for (char c : s) {
    switch (c) {
      case '&': r += "&amp;"; break;
      case '<': r += "&lt;"; break;
      case '>': r += "&gt;"; break;
      case '"': r += "&quot;"; break;
      default: r += c;
    }
  }
  return r;
}

}  // namespace

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "PASS";
    case CheckStatus::Fail: return "FAIL";
    case CheckStatus::PrecisionLimited: return "PRECISION_LIMITED";
  }
  return "?";
}

std::optional<int> CongruenceReport::excess() const {
  const int cap = precision ? *precision : kInfiniteValuation;
  if (observed >= cap) return std::nullopt;
  return observed - target;
}

void CongruenceReport::record(int valuation, const std::string& at) {
  if (valuation < observed) {
    observed = valuation;
    where = at;
  }
}

void CongruenceReport::finish() {
  if (status == CheckStatus::PrecisionLimited) return;
  if (precision && *precision < target)
    status = observed >= *precision ? CheckStatus::PrecisionLimited : CheckStatus::Fail;
  else
    status = observed >= target ? CheckStatus::Pass : CheckStatus::Fail;
}

json to_json(const CongruenceReport& r, bool with_runtime) {
  json j;
  j["id"] = r.id;
  j["params"] = r.params;
  j["target"] = r.target;
  j["precision"] = r.precision ? json(*r.precision) : json(nullptr);
  const bool vanished = r.observed >= (r.precision ? *r.precision : kInfiniteValuation);
  j["observed"] = vanished ? json(nullptr) : json(r.observed);
  const auto ex = r.excess();
  j["excess"] = ex ? json(*ex) : json(nullptr);
  j["where"] = r.where;
  j["status"] = status_name(r.status);
  j["conjecture"] = r.conjecture;
  j["gating"] = r.gating;
  j["note"] = r.note;
  if (with_runtime) j["runtime_ms"] = r.runtime_ms;
  return j;
}

std::string reports_to_json(const std::vector<CongruenceReport>& reports, bool with_runtime) {
  std::vector<json> items;
  for (const auto& r : reports) items.push_back(to_json(r, with_runtime));
  std::stable_sort(items.begin(), items.end(), [](const json& a, const json& b) {
    return a["id"].get<std::string>() < b["id"].get<std::string>();
  });
  return json(items).dump(2);
}

std::string reports_to_junit(const std::vector<CongruenceReport>& reports) {
  std::size_t failures = 0, skipped = 0;
  for (const auto& r : reports) {
    if (r.status == CheckStatus::Fail) ++failures;
    if (r.status == CheckStatus::PrecisionLimited) ++skipped;
  }
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<testsuite name=\"dwork\" tests=\"" << reports.size() << "\" failures=\"" << failures
      << "\" skipped=\"" << skipped << "\">\n";
  for (const auto& r : reports) {
    out << "  <testcase classname=\"dwork." << xml_escape(r.id) << "\" name=\""
        << xml_escape(r.id + " " + r.params.dump()) << "\">\n";
    const std::string msg = "target " + std::to_string(r.target) + ", observed " +
                            (r.excess() ? std::to_string(r.observed) : std::string("vanished")) +
                            (r.where.empty() ? "" : " at " + r.where);
    if (r.status == CheckStatus::Fail)
      out << "    <failure message=\"" << xml_escape(msg) << "\"/>\n";
    else if (r.status == CheckStatus::PrecisionLimited)
      out << "    <skipped message=\"" << xml_escape("precision limited: " + msg) << "\"/>\n";
    if (r.conjecture || !r.gating)
      out << "    <properties><property name=\"gating\" value=\"false\"/></properties>\n";
    out << "  </testcase>\n";
  }
  out << "</testsuite>\n";
  return out.str();
}

bool all_gating_pass(const std::vector<CongruenceReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CongruenceReport& r) {
    return r.conjecture || !r.gating || r.status == CheckStatus::Pass;
  });
}

bool any_precision_limited(const std::vector<CongruenceReport>& reports) {
  return std::any_of(reports.begin(), reports.end(),
                     [](const CongruenceReport& r) { return r.status == CheckStatus::PrecisionLimited; });
}

std::size_t min_dwork_degree(std::int64_t p, int s, int m) {
  return static_cast<std::size_t>(m * ipow(p, s));
}

namespace {

CongruenceReport dwork_check(const std::string& id, const FamilySpec& fam, std::int64_t p, int s, int m,
                             const LiftSpec& lift, std::size_t Dt, int target, int shift) {
  if (s < 1) throw DomainError("s must be at least 1");
  if (m < 1) throw DomainError("m must be at least 1");
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = id;
  r.params = family_params(fam);
  r.params.update({{"p", p}, {"s", s}, {"m", m}, {"lift", lift_name(lift.kind)}, {"degree", Dt}});
  if (shift != 0) r.params["truncation_shift"] = shift;
  r.target = target;
  const PadicContext ctx(p, target + kDefaultGuard);
  r.precision = ctx.N;
  const long big = m * ipow(p, s), small = m * ipow(p, s - 1);
  if (Dt < min_dwork_degree(p, s, m)) {
    r.status = CheckStatus::PrecisionLimited;
    r.note = "t-degree " + std::to_string(Dt) + " does not reach t^" + std::to_string(big);
    return r;
  }
  const RationalSeries F = period_F(fam, Dt);
  const PadicSeries Fp = reduce_mod(F, ctx);
  const PadicSeries ts = reduce_mod(frobenius_image(fam, lift, p, Dt), ctx);
  const PadicSeries F_sigma = series_compose(Fp, ts);
  const PadicSeries Fsmall_sigma = series_compose(reduce_mod(truncated_F(F, small), ctx), ts);
  const PadicSeries Fbig = reduce_mod(truncated_F(F, static_cast<std::size_t>(big + shift)), ctx);
  record_series(r, Fp * Fsmall_sigma - Fbig * F_sigma, Dt);
  r.finish();
  return r;
}

}  // namespace

CongruenceReport verify_dwork(const FamilySpec& fam, std::int64_t p, int s, int m, const LiftSpec& lift,
                              std::size_t Dt, int truncation_shift) {
  return dwork_check("dwork", fam, p, s, m, lift, Dt, s, truncation_shift);
}

CongruenceReport verify_super_conjecture(const FamilySpec& fam, std::int64_t p, int s, int m, std::size_t Dt,
                                         const LiftSpec& lift) {
  if (lift.kind == LiftKind::Excellent) require_excellent(fam, p);
  CongruenceReport r = dwork_check("dwork-super-conjecture", fam, p, s, m, lift, Dt, 2 * s, 0);
  r.conjecture = true;
  r.gating = false;
  return r;
}

namespace {

PadicPoly padic_poly(const IntPoly& a, const PadicContext& ctx) {
  return map_coefficients<PadicInt>(a, [&](const BigInt& c) { return PadicInt(ctx, c); });
}

PadicPoly padic_poly(const RationalPoly& a, const PadicContext& ctx) {
  return map_coefficients<PadicInt>(a, [&](const BigRational& c) { return PadicInt::from_rational(ctx, c); });
}

RationalPoly rational_poly(const IntPoly& a) {
  return map_coefficients<BigRational>(a, [](const BigInt& c) { return BigRational(c); });
}

}  // namespace

CongruenceReport verify_cartier_oracle(std::int64_t p, int N, long bound, int trials, std::uint64_t seed) {
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = "cartier-oracle";
  r.params = {{"p", p}, {"bound", bound}, {"trials", trials}, {"seed", seed}};
  r.target = N;
  r.precision = N;
  const PadicContext ctx(p, N);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(-3, 3);
  for (int trial = 0; trial < trials; ++trial) {
    // 1 + c x - y keeps the origin a vertex with a unit coefficient.
    IntPoly f(2);
    f.add_term({0, 0}, BigInt(1));
    f.add_term({1, 0}, BigInt(1 + std::abs(coef(rng))));
    f.add_term({0, 1}, BigInt(-1));
    for (int i = 0; i <= 2; ++i)
      for (int j = 0; j <= 2; ++j)
        if (i + j >= 2 && rng() % 2) f.add_term({i, j}, BigInt(coef(rng)));
    const long m = 1 + static_cast<long>(rng() % 3);
    IntPoly A(2);
    for (const auto& u : poly_pow(f, static_cast<unsigned>(m), BigInt(1)).support())
      if (rng() % 2) A.add_term(u, BigInt(coef(rng)));
    if (A.is_zero()) A.add_term({0, 0}, BigInt(1));

    const PadicPoly fp = padic_poly(f, ctx);
    const auto direct = cartier_series(
        expand_at_vertex(standard_element(m, padic_poly(A, ctx), fp), ExponentVector{0, 0}, p * bound),
        static_cast<int>(p));
    const RationalPoly fq = rational_poly(f);
    PadicPoly closed(2);
    for (const auto& term : cartier_rational(standard_element(m, rational_poly(A), fq), fq, static_cast<int>(p), N)) {
      const RationalElement<PadicInt> t{term.m, padic_poly(term.A, ctx), fp, term.prefactor};
      closed += expand_at_vertex(t, ExponentVector{0, 0}, bound).terms;
    }
    const PadicPoly diff = closed - direct.terms;
    for (const auto& [u, c] : diff.terms())
      if (!c.is_zero()) r.record(c.valuation(), "trial " + std::to_string(trial) + " x^" + u.to_string());
  }
  r.finish();
  return r;
}

RegionSpec half_open_square(int levels) {
  RegionSpec r;
  r.kind = RegionKind::Custom;
  for (int k = 1; k <= levels; ++k) {
    std::vector<ExponentVector> pts;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) pts.push_back({i, j});
    r.custom[k] = pts;
  }
  return r;
}

HasseWittResult square_hasse_witt(std::int64_t p, int k, int N, std::size_t Dt) {
  const PadicContext ctx(p, N);
  const PadicSeries t = padic_t(ctx, Dt);
  const PadicSeries one = one_like(t);
  const auto family = [&](const PadicSeries& s) {
    SeriesPoly f(2);
    f.add_term({0, 0}, one);
    f.add_term({1, 0}, -one);
    f.add_term({0, 1}, -one);
    f.add_term({1, 1}, one - s);
    return f;
  };
  const PadicSeries ts = substitute_power(t, static_cast<std::size_t>(p));
  const SeriesPoly f = family(t);
  const RegionSpec mu = half_open_square(k);
  return hasse_witt(f, family(ts), ts, k, monomial_basis(newton_polytope(f), k, mu), ctx, Dt);
}

std::vector<CongruenceReport> verify_square_hasse_witt(std::int64_t p, std::size_t Dt) {
  const int N = 3 + 1 + kDefaultGuard;
  const PadicContext ctx(p, N);
  const json params = {{"p", p}, {"degree", Dt}, {"lift", "tp"}};
  std::vector<CongruenceReport> out;
  {
    CongruenceReport r;
    Stopwatch sw(r);
    r.id = "square-hw1";
    r.params = params;
    r.target = N;
    r.precision = N;
    const HasseWittResult hw1 = square_hasse_witt(p, 1, N, Dt);
    if (hw1.entries.size() != 1) r.record(0, "size");
    else record_series(r, hw1.entries[0][0] - one_like(hw1.entries[0][0]), Dt);
    r.finish();
    sw.stop();
    out.push_back(r);
  }
  const HasseWittResult hw2 = square_hasse_witt(p, 2, N, Dt);
  const BigInt C = binomial(2 * p - 2, p - 1);
  {
    CongruenceReport r;
    Stopwatch sw(r);
    r.id = "square-hw2-triangular";
    r.params = params;
    r.target = N;
    r.precision = N;
    if (hw2.entries.size() != 4) {
      r.record(0, "size");
    } else {
      RationalSeries last = rational_series(Dt);
      RationalSeries base = series_constant(BigRational(1), Dt);
      base[1] = -1;
      RationalSeries pw = series_constant(BigRational(1), Dt);
      for (long m = 0; m <= p - 1; ++m) {
        last = last + BigRational(binomial(p - 1, m) * binomial(p - 1, m)) * pw;
        pw = pw * base;
      }
      const RationalSeries diag[4] = {series_constant(BigRational(1), Dt), series_constant(BigRational(-C), Dt),
                                      series_constant(BigRational(-C), Dt), BigRational(-C) * last};
      for (int i = 0; i < 4; ++i) {
        record_series(r, hw2.entries[i][i] - reduce_mod(diag[i], ctx), Dt,
                      "diag " + std::to_string(i) + " ");
        for (int j = 0; j < i; ++j)
          record_series(r, hw2.entries[i][j], Dt, "[" + std::to_string(i) + "][" + std::to_string(j) + "] ");
      }
    }
    r.finish();
    sw.stop();
    out.push_back(r);
  }
  {
    // det = p^L hw with L = 3 and hw = -(C/p)^3 t^(p-1) mod p, a unit multiple: divisibility is exact.
    CongruenceReport r;
    Stopwatch sw(r);
    r.id = "square-hw2-determinant";
    r.params = params;
    r.params["L"] = hw2.L;
    r.target = 1;
    if (hw2.L != 3) r.record(0, "L");
    const PadicContext mod_p(p, 1);
    PadicSeries want = padic_series(mod_p, Dt);
    const BigInt c = C / p;
    if (static_cast<std::size_t>(p - 1) <= Dt) want[p - 1] = PadicInt(mod_p, BigInt(-c * c * c));
    const PadicSeries got = change_precision(hw2.hw, mod_p);
    const PadicSeries d = got - want;
    for (std::size_t i = 0; i <= Dt; ++i)
      if (!d[i].is_zero()) r.record(0, "hw t^" + std::to_string(i));
    if (got.is_zero_series()) r.record(0, "hw vanishes mod p");
    r.precision = hw2.hw[0].context().N;
    r.finish();
    sw.stop();
    out.push_back(r);
  }
  return out;
}

std::vector<std::vector<PadicInt>> square_coefficients(const PadicContext& ctx, long A, long B) {
  // (1 - x - y + 2xy) alpha = 1 gives the recurrence below.
  std::vector<std::vector<PadicInt>> a(A + 1, std::vector<PadicInt>(B + 1, PadicInt(ctx, 0)));
  for (long i = 0; i <= A; ++i)
    for (long j = 0; j <= B; ++j) {
      if (i == 0 && j == 0) {
        a[i][j] = PadicInt(ctx, 1);
        continue;
      }
      PadicInt v(ctx, 0);
      if (i > 0) v += a[i - 1][j];
      if (j > 0) v += a[i][j - 1];
      if (i > 0 && j > 0) v -= PadicInt(ctx, 2) * a[i - 1][j - 1];
      a[i][j] = v;
    }
  return a;
}

std::vector<BigInt> square_coefficient_poly(long a, long b) {
  // a_{a,b} = sum_j (a+b-j)!/((a-j)!(b-j)!j!) (t-1)^j, expanded in powers of t.
  const long top = std::min(a, b);
  std::vector<BigInt> c(top + 1, 0);
  for (long j = 0; j <= top; ++j) {
    const BigInt M = factorial(a + b - j) / (factorial(a - j) * factorial(b - j) * factorial(j));
    for (long i = 0; i <= j; ++i) {
      const BigInt term = M * binomial(j, i);
      if ((j - i) % 2) c[i] -= term;
      else c[i] += term;
    }
  }
  return c;
}

std::vector<CongruenceReport> verify_simple_example(std::int64_t p, int s, long k, long l) {
  if (p < 3 || !is_prime(p)) throw DomainError("simple example needs an odd prime");
  if (s < 1 || k < 1 || l < 1) throw DomainError("simple example needs s, k, l >= 1");
  const PadicContext ctx(p, 2 * s + kDefaultGuard);
  const long Q = ipow(p, s), Qm = ipow(p, s - 1);
  const json params = {{"p", p}, {"s", s}, {"k", k}, {"l", l}};
  std::vector<CongruenceReport> out;

  {
    CongruenceReport r;
    Stopwatch sw(r);
    r.id = "simple-example-t=-1";
    r.params = params;
    r.target = 2 * s;
    r.precision = ctx.N;
    const auto a = square_coefficients(ctx, k * Q, l * Q);
    const PadicInt d = a[k * Q][l * Q] - a[k * Qm][l * Qm];
    if (!d.is_zero()) r.record(d.valuation(), "alpha");
    r.finish();
    sw.stop();
    out.push_back(r);
  }

  const auto to_series = [&](const std::vector<BigInt>& c, std::size_t D) {
    PadicSeries s(D, PadicInt(ctx, 0));
    for (std::size_t i = 0; i < c.size() && i <= D; ++i) s[i] = PadicInt(ctx, c[i]);
    return s;
  };

  {
    CongruenceReport r;
    Stopwatch sw(r);
    r.id = "simple-example-generic-t";
    r.params = params;
    r.params["lift"] = "tp";
    r.target = 2 * s;
    r.precision = ctx.N;
    const std::size_t D = static_cast<std::size_t>(std::min(k, l) * Q);
    const PadicSeries big = to_series(square_coefficient_poly(k * Q, l * Q), D);
    const PadicSeries small = to_series(square_coefficient_poly(k * Qm, l * Qm), D);
    record_series(r, big - substitute_power(small, p), D);
    r.finish();
    sw.stop();
    out.push_back(r);
  }

  if (s == 1) {
    // t^sigma = (1+p) t^p: a_{kp,lp}(t) = a_{k,l}(t^sigma) + log(t^p/t^sigma) (theta a_{k,l})(t^sigma) mod p^2.
    const std::size_t D = static_cast<std::size_t>(std::min(k, l) * p);
    const PadicSeries big = to_series(square_coefficient_poly(k * p, l * p), D);
    const PadicSeries small = to_series(square_coefficient_poly(k, l), D);
    const PadicSeries ts = series_monomial(PadicInt(ctx, 1 + p), static_cast<std::size_t>(p), D);
    const PadicSeries a_s = series_compose(small, ts, true);
    const PadicSeries ta_s = series_compose(theta(small), ts, true);
    const PadicInt L = -padic_log(PadicInt(ctx, 1 + p));
    for (int sign : {1, -1}) {
      CongruenceReport r;
      Stopwatch sw(r);
      r.id = sign > 0 ? "simple-example-general-lift" : "simple-example-general-lift-flipped-sign";
      r.params = params;
      r.params["lift"] = "(1+p)t^p";
      r.target = 2;
      r.precision = ctx.N;
      const PadicInt c = sign > 0 ? L : -L;
      record_series(r, big - a_s - c * ta_s, D);
      r.finish();
      if (sign < 0) {
        r.gating = false;
        r.note = "negative control: the correction with log(t^sigma/t^p) is expected to fail";
      }
      sw.stop();
      out.push_back(r);
    }
  }
  return out;
}

CongruenceReport verify_cy_supercongruence(const FamilySpec& fam, std::int64_t p, int s, long Q,
                                           const LiftSpec& lift, std::size_t Dt, int k) {
  if (s < 1 || Q < 1) throw DomainError("cy supercongruence needs s, Q >= 1");
  if (k != 1 && k != 2) throw DomainError("cy supercongruence level must be 1 or 2");
  if (lift.kind == LiftKind::Excellent) require_excellent(fam, p);
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = k == 2 ? "cy-supercongruence" : "cy-congruence-level-one";
  r.params = family_params(fam);
  r.params.update({{"p", p}, {"s", s}, {"Q", Q}, {"lift", lift_name(lift.kind)}, {"degree", Dt}});
  r.target = k * s;
  const PadicContext ctx(p, r.target + kDefaultGuard);
  r.precision = ctx.N;
  const long big = Q * ipow(p, s), small = Q * ipow(p, s - 1);
  if (Dt < static_cast<std::size_t>(big)) {
    r.status = CheckStatus::PrecisionLimited;
    r.note = "t-degree does not reach t^" + std::to_string(big);
    return r;
  }
  const ExponentVector& v = fam.vertices.front();
  r.params["vertex"] = v.to_string();
  const PadicSeries aB = reduce_mod(expand_CY_coefficient(fam, big, v, Dt), ctx);
  const PadicSeries aS = reduce_mod(expand_CY_coefficient(fam, small, v, Dt), ctx);
  if (k == 2) {
    const FrobeniusData fd = frobenius_data(fam, lift, ctx, Dt);
    const PadicSeries& ts = fd.t_sigma;
    record_series(r, aB - fd.lambda0 * series_compose(aS, ts) - fd.lambda1 * series_compose(theta(aS), ts), Dt);
  } else {
    const PadicSeries F = reduce_mod(period_F(fam, Dt), ctx);
    const PadicSeries ts = reduce_mod(frobenius_image(fam, lift, p, Dt), ctx);
    record_series(r, series_compose(F, ts) * aB - F * series_compose(aS, ts), Dt);
  }
  r.finish();
  return r;
}

BigInt straub_diagonal(long N) {
  if (N < 0) throw DomainError("diagonal index must be non-negative");
  BigInt sum = 0;
  for (long k = 0; k <= N; ++k) {
    const BigInt c = factorial(2 * N - k) / (factorial(k) * factorial(N - k) * factorial(N - k));
    sum += c * c;
  }
  return sum;
}

CongruenceReport verify_straub(std::int64_t p, int s, long n) {
  if (s < 1 || n < 1) throw DomainError("straub check needs s, n >= 1");
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = "straub";
  r.params = {{"p", p}, {"s", s}, {"n", n}};
  r.target = 3 * s;
  record_exact(r, straub_diagonal(n * ipow(p, s)) - straub_diagonal(n * ipow(p, s - 1)), p, "diagonal");
  r.finish();
  if (p < 5) {
    r.gating = false;
    r.note = "observation outside p >= 5";
  }
  return r;
}

CyHasseWitt cy_hasse_witt(const FamilySpec& fam, const PadicContext& ctx, const RationalSeries& t_sigma,
                          std::size_t Dt) {
  const std::vector<BasisElement> basis = cy_symmetric_basis(fam.g);
  const std::size_t Dw = hw_working_degree(basis, static_cast<int>(ctx.p), Dt);
  if (t_sigma.degree() < Dw) throw PrecisionError("t^sigma is shorter than the working degree");
  const PadicSeries t = padic_t(ctx, Dw);
  const PadicSeries ts = reduce_mod(truncate(t_sigma, Dw), ctx);
  const SeriesPoly f = cy_series_poly(fam.g, t);
  const SeriesPoly fs = cy_series_poly(fam.g, ts);
  CyHasseWitt out;
  out.hw1 = hasse_witt(f, fs, ts, 1, {basis.front()}, ctx, Dt);
  out.hw2 = hasse_witt(f, fs, ts, 2, basis, ctx, Dt);
  return out;
}

std::vector<CongruenceReport> verify_hw_congruences(const FamilySpec& fam, std::int64_t p, std::size_t Dt) {
  const PadicContext ctx(p, 1 + kDefaultGuard);
  const std::size_t Dw = hw_working_degree(cy_symmetric_basis(fam.g), static_cast<int>(p), Dt);
  const RationalSeries tp = series_monomial(BigRational(1), static_cast<std::size_t>(p), Dw);
  const CyHasseWitt hw = cy_hasse_witt(fam, ctx, tp, Dt);

  const PeriodData P = periods(fam, Dt);
  const PadicSeries F = reduce_mod(P.F, ctx);
  const PadicSeries Fp = reduce_mod(truncated_F(P.F, static_cast<std::size_t>(p)), ctx);
  const PadicSeries W = reduce_mod(P.W, ctx);
  const PadicSeries F1p = power(series_invert(F), p - 1);
  const PadicSeries W1p = power(series_invert(W), p - 1);
  const PadicSeries Wp = reduce_mod(truncated_F(P.W, static_cast<std::size_t>(p)), ctx);

  json params = family_params(fam);
  params.update({{"p", p}, {"degree", Dt}, {"lift", "tp"}});
  std::vector<CongruenceReport> out;
  const auto check = [&](const std::string& id, const PadicSeries& a, const PadicSeries& b) {
    CongruenceReport r;
    Stopwatch sw(r);
    r.id = id;
    r.params = params;
    r.target = 1;
    record_series(r, a - at_context_of(b, a), Dt);
    r.precision = a[0].context().N;
    r.finish();
    sw.stop();
    return r;
  };
  out.push_back(check("hw1-truncated-F", hw.hw1.hw, Fp));
  out.push_back(check("hw1-F-power", hw.hw1.hw, F1p));
  out.push_back(check("hw2-W-power", hw.hw2.hw, W1p));
  CongruenceReport obs = check("hw2-W-truncation", hw.hw2.hw, Wp);
  obs.conjecture = true;
  obs.gating = false;
  obs.note = "observation: hw2 against the p-truncation of W";
  out.push_back(obs);
  {
    // W^(1-p) mod p is a polynomial: nothing above degree (p-1) * deg survives for t-degree Dt large.
    CongruenceReport r;
    Stopwatch sw(r);
    r.id = "W-power-polynomial";
    r.params = params;
    r.target = 1;
    r.precision = ctx.N;
    std::size_t last = 0;
    for (std::size_t i = 0; i <= W1p.degree(); ++i)
      if (W1p[i].valuation() < 1) last = i;
    r.params["degree_mod_p"] = last;
    // The polynomial claim is only testable when the tail is visible.
    if (2 * last + 2 > Dt) {
      r.status = CheckStatus::PrecisionLimited;
      r.note = "t-degree too small to see a vanishing tail";
    } else {
      r.note = "W^(1-p) mod p has degree " + std::to_string(last);
    }
    r.finish();
    sw.stop();
    out.push_back(r);
  }
  return out;
}

CongruenceReport verify_lambda_hw(const FamilySpec& fam, std::int64_t p, const LiftSpec& lift, std::size_t Dt) {
  if (lift.kind == LiftKind::Excellent) require_excellent(fam, p);
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = "lambda-hw2";
  r.params = family_params(fam);
  r.params.update({{"p", p}, {"degree", Dt}, {"lift", lift_name(lift.kind)}});
  r.target = 2;
  const PadicContext ctx(p, 2 + kDefaultGuard);
  const std::size_t Dw = hw_working_degree(cy_symmetric_basis(fam.g), static_cast<int>(p), Dt);
  const RationalSeries ts = frobenius_image(fam, lift, p, Dw);
  const CyHasseWitt hw = cy_hasse_witt(fam, ctx, ts, Dt);
  const FrobeniusData fd = frobenius_data(fam, lift, ctx, Dt);
  const auto& H = hw.hw2.entries;
  const PadicSeries a = H[0][0] - H[1][0], b = H[0][1] - H[1][1];
  const PadicSeries& c = H[1][0];
  const PadicSeries& d = H[1][1];
  const PadicSeries M[2][2] = {{a, a + b}, {c, c + d}};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      record_series(r, M[i][j] - at_context_of(fd.Lambda[i][j], M[i][j]), Dt,
                    "Lambda[" + std::to_string(i) + "][" + std::to_string(j) + "] ");
  r.precision = H[0][0][0].context().N;
  r.finish();
  return r;
}

std::vector<std::array<long, 3>> modular_polynomial(std::int64_t p) {
  if (p == 3)
    return {{4, 0, 1}, {1, 1, -1}, {3, 1, 12}, {2, 2, 6}, {1, 3, 12}, {3, 3, -256}, {0, 4, 1}};
  if (p == 5)
    return {{6, 0, 1},    {1, 1, -1},   {3, 1, 20},    {5, 1, -70},    {2, 2, -40},
            {4, 2, 655},  {1, 3, 20},   {3, 3, -660},  {5, 3, 5120},   {2, 4, 655},
            {4, 4, -10240}, {1, 5, -70}, {3, 5, 5120}, {5, 5, -65536}, {0, 6, 1}};
  throw DomainError("modular polynomial is only tabulated for p = 3, 5");
}

CongruenceReport verify_modular_polynomial(std::int64_t p, std::size_t Dt, int N, bool naive_lift) {
  const auto terms = modular_polynomial(p);
  if (Dt < 1) throw DomainError("t-degree must be positive");
  const FamilySpec fam = make_family(FamilyKind::Hypercubic, 2);
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = naive_lift ? "modular-polynomial-naive-lift" : "modular-polynomial";
  r.params = {{"p", p}, {"degree", Dt}, {"lift", naive_lift ? "tp" : "excellent"}};
  r.target = N;
  r.precision = N;
  const PadicContext ctx(p, N);
  const std::size_t D = Dt - 1;
  const LiftSpec lift{naive_lift ? LiftKind::Tp : LiftKind::Excellent, {}};
  const PadicSeries X = reduce_mod(frobenius_image(fam, lift, p, D), ctx);
  const PadicSeries Y = padic_t(ctx, D);
  std::vector<PadicSeries> Xp{one_like(X)}, Yp{one_like(Y)};
  for (int i = 1; i <= 6; ++i) {
    Xp.push_back(Xp.back() * X);
    Yp.push_back(Yp.back() * Y);
  }
  PadicSeries sum = zero_like(X);
  for (const auto& [i, j, c] : terms) sum = sum + PadicInt(ctx, std::int64_t{c}) * (Xp[i] * Yp[j]);
  record_series(r, sum, D);
  r.finish();
  if (naive_lift) {
    r.gating = false;
    r.note = "negative control: t^sigma = t^p is not the modular lift";
  }
  return r;
}

std::vector<CongruenceReport> verify_fixed_point_n1(std::int64_t p) {
  // t = q/(1+q^2) = t0 means q^2 - q/t0 + 1 = 0; work in Q[q]/(q^2 - c q + 1), c = 1/t0.
  struct Elem {
    BigRational a0, a1;
  };
  std::vector<CongruenceReport> out;
  for (const BigRational& t0 : {BigRational(1, 2), BigRational(1), BigRational(-1)}) {
    const BigRational c = 1 / t0;
    const auto mul = [&](const Elem& x, const Elem& y) {
      const BigRational q2 = x.a1 * y.a1;
      return Elem{x.a0 * y.a0 - q2, x.a0 * y.a1 + x.a1 * y.a0 + c * q2};
    };
    Elem base{0, 1}, qp{1, 0};
    for (std::int64_t e = p; e > 0; e >>= 1) {
      if (e & 1) qp = mul(qp, base);
      base = mul(base, base);
    }
    const Elem q2p = mul(qp, qp);
    // q^p - t0 (1 + q^(2p)) must vanish.
    const Elem d{qp.a0 - t0 * (1 + q2p.a0), qp.a1 - t0 * q2p.a1};
    CongruenceReport r;
    Stopwatch sw(r);
    r.id = "fixed-point-n1";
    r.params = {{"p", p}, {"t0", t0.get_str()}};
    r.target = 1;
    if (d.a0 != 0 || d.a1 != 0) r.record(0, "q^p - t0 (1 + q^(2p))");
    r.finish();
    if (p % 3 == 0 && t0 != BigRational(1, 2)) {
      r.gating = false;
      r.note = "excluded: q is a primitive 6th or 3rd root of unity and p = 3 sends it to +-1";
    }
    sw.stop();
    out.push_back(r);
  }
  return out;
}

CongruenceReport verify_frobenius_structure(const FamilySpec& fam, std::int64_t p, const LiftSpec& lift,
                                            std::size_t D, int N, bool perturb) {
  if (lift.kind == LiftKind::Excellent) require_excellent(fam, p);
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = perturb ? "frobenius-structure-perturbed" : "frobenius-structure";
  r.params = family_params(fam);
  r.params.update({{"p", p}, {"degree", D}, {"lift", lift_name(lift.kind)}});
  r.target = N;
  r.precision = N;
  if (D <= static_cast<std::size_t>(p)) {
    r.status = CheckStatus::PrecisionLimited;
    r.note = "degree must exceed p";
    return r;
  }
  const PadicContext ctx(p, N);
  FrobeniusData fd = frobenius_data(fam, lift, ctx, D);
  if (perturb) fd.Lambda[0][0][1] += PadicInt(ctx, ipow(p, N - 1));
  const std::size_t top = D - static_cast<std::size_t>(p);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      PadicSeries e = -theta(fd.Lambda[i][j]);
      for (int k = 0; k < 2; ++k)
        e = e + fd.N_theta[i][k] * fd.Lambda[k][j] - fd.Lambda[i][k] * fd.N_theta_sigma[k][j];
      record_series(r, e, top, "[" + std::to_string(i) + "][" + std::to_string(j) + "] ");
    }
  r.finish();
  if (perturb) {
    r.gating = false;
    r.note = "negative control: p^(N-1) added to Lambda[0][0] at t^1";
  }
  return r;
}

CongruenceReport verify_pq(std::int64_t p, int s, int n, std::size_t Dt, PqConvention conv) {
  if (s < 1) throw DomainError("s must be at least 1");
  const FamilySpec fam = make_family(FamilyKind::Hypercubic, n);
  require_excellent(fam, p);
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = "pq";
  r.params = {{"p", p}, {"s", s}, {"n", n}, {"degree", Dt}, {"convention", pq_convention_name(conv)}};
  r.target = 2 * s;
  const PadicContext ctx(p, r.target + kDefaultGuard);
  r.precision = ctx.N;
  const long Q = ipow(p, s), Qm = ipow(p, s - 1);
  if (Dt < static_cast<std::size_t>(Q)) {
    r.status = CheckStatus::PrecisionLimited;
    r.note = "t-degree does not reach t^" + std::to_string(Q);
    return r;
  }
  const RationalSeries tsr = frobenius_image(fam, {LiftKind::Excellent, {}}, p, Dt + p);
  const PadicSeries ts = reduce_mod(truncate(tsr, Dt), ctx);
  const PadicSeries v = reduce_mod(shift_down(tsr, static_cast<std::size_t>(p)), ctx);
  const PadicSeries F = reduce_mod(period_F(fam, Dt), ctx);
  const PadicSeries Fs = series_compose(F, ts);
  const auto big = pq_polynomial(n, Q, conv);
  const auto small = pq_polynomial(n, Qm, conv);

  // t^Q P_Q(t) F(t^sigma) v^Q' = F(t) sum_e c'_e t^(p(e+Q')) v^(e+Q'), with t^sigma = t^p v.
  PadicSeries Pb = zero_like(F);
  for (const auto& [e, c] : big) {
    const long d = e + Q;
    if (d >= 0 && static_cast<std::size_t>(d) <= Dt) Pb[d] += PadicInt::from_rational(ctx, c);
  }
  std::vector<PadicSeries> vp{one_like(v)};
  PadicSeries rhs_sum = zero_like(F);
  for (const auto& [e, c] : small) {
    const long d = e + Qm;
    while (static_cast<long>(vp.size()) <= d) vp.push_back(vp.back() * v);
    const std::size_t sh = static_cast<std::size_t>(p * d);
    if (sh <= Dt) rhs_sum = rhs_sum + PadicInt::from_rational(ctx, c) * shift_up(vp[d], sh);
  }
  while (static_cast<long>(vp.size()) <= Qm) vp.push_back(vp.back() * v);
  record_series(r, Pb * Fs * vp[Qm] - F * rhs_sum, Dt);
  r.finish();
  return r;
}

CongruenceReport verify_mirror_integrality(const FamilySpec& fam, std::int64_t p, std::size_t D, int N) {
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = "mirror-integrality";
  r.params = family_params(fam);
  r.params.update({{"p", p}, {"degree", D}});
  r.target = 0;
  const PadicContext ctx(p, N);
  const PeriodData P = periods(fam, D);
  const RationalSeries q = canonical_q(P);
  const RationalSeries t = mirror_map(q);
  // Exact rationals: the p-order of every coefficient must be non-negative.
  r.record(min_valuation(q, p), "q(t)");
  r.record(min_valuation(t, p), "t(q)");
  try {
    reduce_mod(q, ctx);
  } catch (const ReductionError& e) {
    r.record(-1, std::string("reduce q: ") + e.what());
  }
  RationalSeries GF = P.G * series_invert(P.F);
  const PadicSeries tp = series_monomial(PadicInt(ctx, 1), static_cast<std::size_t>(p), D);
  const auto [first, second] = dieudonne_dwork_check(GF, tp, ctx, D);
  r.params["dieudonne_dwork"] = {first, second};
  if (!first) r.record(-1, "G/F - (G/F)^sigma/p not integral");
  if (!second) r.record(-1, "exp(G/F) not integral");
  r.finish();
  return r;
}

CongruenceReport verify_excellent_n1_closed_form(std::int64_t p, std::size_t D, int N) {
  const FamilySpec fam = make_family(FamilyKind::Hypercubic, 1);
  require_excellent(fam, p);
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = "excellent-n1-closed-form";
  r.params = {{"p", p}, {"degree", D}};
  r.target = N;
  r.precision = N;
  const PadicContext ctx(p, N);
  const RationalSeries ts = frobenius_image(fam, {LiftKind::Excellent, {}}, p, D);
  const RationalSeries q = canonical_q(periods(fam, D));
  const RationalSeries qp = series_compose(series_monomial(BigRational(1), static_cast<std::size_t>(p), D), q);
  const RationalSeries oracle = qp * series_invert(series_constant(BigRational(1), D) + qp * qp);
  record_series(r, reduce_mod(ts, ctx) - reduce_mod(oracle, ctx), D);
  r.finish();
  return r;
}

CongruenceReport verify_excellent_lift(const FamilySpec& fam, std::int64_t p, std::size_t D, int N) {
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = "excellent-lift";
  r.params = family_params(fam);
  r.params.update({{"p", p}, {"degree", D}});
  r.target = N;
  r.precision = N;
  const PadicContext ctx(p, N);
  const FrobeniusData fd = excellent_lift(fam, ctx, D);
  record_series(r, fd.lambda1, D, "lambda1 ");
  if (fd.lambda0[0] != PadicInt(ctx, 1)) r.record(0, "lambda0(0)");
  if (fd.A[0] != 0) r.record(0, "A(0)");
  if (fd.B[0] != 0) r.record(0, "B(0)");
  if (fd.W[0] != PadicInt(ctx, 1)) r.record(0, "W(0)");
  r.finish();
  return r;
}

CongruenceReport verify_square_filtration(std::int64_t p, int N, long bound, int theta_power) {
  if (theta_power < 0) throw DomainError("theta power must be non-negative");
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = theta_power == 2 ? "filtration-square" : "filtration-square-theta" + std::to_string(theta_power);
  r.params = {{"p", p}, {"bound", bound}, {"theta_power", theta_power}};
  r.target = 0;
  r.precision = N;
  const PadicContext ctx(p, N);
  // Coefficients of x^u have t-degree at most min(u) <= bound / 2.
  const std::size_t Dt = static_cast<std::size_t>(bound);
  const PadicSeries t = padic_t(ctx, Dt);
  const PadicSeries one = one_like(t);
  SeriesPoly f(2);
  f.add_term({0, 0}, one);
  f.add_term({1, 0}, -one);
  f.add_term({0, 1}, -one);
  f.add_term({1, 1}, one - t);
  SeriesPoly E = expand_at_vertex(standard_element(1, SeriesPoly::constant(2, one), f), {0, 0}, bound).terms;
  for (int i = 0; i < theta_power; ++i) E = theta_t(E);
  const MembershipReport m = fk_membership_defect(E, 2, p, N);
  if (!m.pass) r.record(-m.deficit, m.where.to_string());
  r.finish();
  if (theta_power != 2) {
    r.gating = false;
    r.note = "negative control: only the second derivative lies in F_2";
  }
  return r;
}

CongruenceReport verify_picard_fuchs_filtration(const FamilySpec& fam, std::int64_t p, int N, std::size_t Dt,
                                                int box, bool raw) {
  CongruenceReport r;
  Stopwatch sw(r);
  r.id = raw ? "filtration-picard-fuchs-raw" : "filtration-picard-fuchs";
  r.params = family_params(fam);
  r.params.update({{"p", p}, {"degree", Dt}, {"box", box}});
  r.target = 0;
  r.precision = N;
  const PadicContext ctx(p, N);
  const auto E = expand_cy(fam.g, Dt, box, PadicInt(ctx, 0));
  const auto [A, B] = ab_coefficients(periods(fam, Dt));
  const PadicSeries Ap = reduce_mod(A, ctx), Bp = reduce_mod(B, ctx);
  SeriesPoly res(fam.n);
  for (const auto& [u, c] : E.terms()) {
    const PadicSeries tc = theta(c);
    res.add_term(u, raw ? theta(tc) : theta(tc) - Bp * tc - Ap * c);
  }
  const MembershipReport m = fk_membership_defect(res, 2, p, N);
  if (!m.pass) r.record(-m.deficit, m.where.to_string());
  r.finish();
  if (raw) {
    r.gating = false;
    r.note = "negative control: theta^2(1/f) alone is not in F_2";
  }
  return r;
}

std::vector<CongruenceReport> run_grid(const std::string& grid) {
  if (grid != "smoke" && grid != "desk") throw ConfigError("unknown grid: " + grid);
  std::vector<CongruenceReport> out;
  const auto append = [&](std::vector<CongruenceReport> v) { out.insert(out.end(), v.begin(), v.end()); };
  const LiftSpec tp{LiftKind::Tp, {}}, excellent{LiftKind::Excellent, {}};
  const FamilySpec hc2 = make_family(FamilyKind::Hypercubic, 2);
  const FamilySpec ho2 = make_family(FamilyKind::Hyperoctahedral, 2);

  if (grid == "smoke") {
    out.push_back(verify_dwork(make_family(FamilyKind::Simplicial, 2), 5, 1, 1, tp, 30));
    out.push_back(verify_dwork(make_family(FamilyKind::Hyperoctahedral, 4), 3, 1, 1, tp, 27));
    out.push_back(verify_straub(5, 1, 1));
    append(verify_simple_example(3, 1, 1, 1));
    out.push_back(verify_cy_supercongruence(hc2, 3, 1, 1, excellent, 12));
    out.push_back(verify_frobenius_structure(hc2, 3, excellent, 18, 6));
    out.push_back(verify_modular_polynomial(3, 20, 4));
    append(verify_fixed_point_n1(5));
    out.push_back(verify_pq(3, 1, 2, 12));
    append(verify_hw_congruences(ho2, 3, 12));
    out.push_back(verify_square_filtration(3, 4, 9));
    return out;
  }

  for (std::int64_t p : {3, 5, 7})
    for (const FamilySpec& fam : catalog(3)) {
      for (int s : {1, 2})
        for (int m : {1, 2})
          out.push_back(verify_dwork(fam, p, s, m, tp, static_cast<std::size_t>(3 * p * p)));
      out.push_back(verify_mirror_integrality(fam, p, static_cast<std::size_t>(3 * p * p), 6));
      if (excellent_hypothesis_holds(fam, p)) out.push_back(verify_excellent_lift(fam, p, 30, 6));
    }
  out.push_back(verify_dwork(make_family(FamilyKind::Hyperoctahedral, 4), 3, 1, 1, tp, 27));
  out.push_back(verify_straub(5, 1, 1));
  out.push_back(verify_straub(3, 1, 1));
  for (std::int64_t p : {3, 5})
    for (int s : {1, 2})
      for (long k : {1, 2})
        for (long l : {1, 2}) append(verify_simple_example(p, s, k, l));
  out.push_back(verify_cy_supercongruence(hc2, 3, 1, 1, excellent, 27));
  out.push_back(verify_cy_supercongruence(hc2, 3, 1, 1, tp, 27, 1));
  out.push_back(verify_excellent_n1_closed_form(3, 29, 6));
  for (const LiftSpec& lift : {tp, excellent}) {
    out.push_back(verify_frobenius_structure(hc2, 3, lift, 30, 6));
  }
  out.push_back(verify_frobenius_structure(hc2, 3, excellent, 30, 6, true));
  for (std::int64_t p : {3, 5})
    for (const FamilySpec* fam : {&hc2, &ho2}) {
      append(verify_hw_congruences(*fam, p, static_cast<std::size_t>(5 * p)));
      out.push_back(verify_lambda_hw(*fam, p, tp, static_cast<std::size_t>(3 * p)));
    }
  out.push_back(verify_modular_polynomial(3, 40, 5));
  out.push_back(verify_modular_polynomial(5, 60, 4));
  out.push_back(verify_modular_polynomial(3, 40, 5, true));
  for (std::int64_t p : {3, 5, 7}) append(verify_fixed_point_n1(p));
  for (std::int64_t p : {3, 5}) out.push_back(verify_pq(p, 1, 2, static_cast<std::size_t>(3 * p * p)));
  out.push_back(verify_super_conjecture(hc2, 5, 1, 2, 75));
  out.push_back(verify_super_conjecture(make_family(FamilyKind::Simplicial, 2), 5, 1, 3, 75));
  // Open question: whether the naive lift breaks the conjecture is reported, not asserted.
  out.push_back(verify_super_conjecture(hc2, 5, 1, 2, 75, tp));
  out.push_back(verify_square_filtration(3, 4, 15));
  out.push_back(verify_square_filtration(3, 4, 15, 1));
  out.push_back(verify_picard_fuchs_filtration(hc2, 3, 4, 20, 9));
  out.push_back(verify_picard_fuchs_filtration(hc2, 3, 4, 20, 9, true));
  return out;
}

}  // namespace dwork
