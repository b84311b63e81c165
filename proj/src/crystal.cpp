#include "dwork/crystal.hpp"

#include "json.hpp"

namespace dwork {

std::vector<RationalElement<BigRational>> cartier_rational(const RationalElement<BigRational>& elem,
                                                           const RationalPoly& f_sigma, int p, int K) {
  if (elem.m < 1) throw DomainError("cartier_rational: m must be positive");
  if (K < 1) throw ConfigError("cartier_rational: target precision must be positive");
  const long m = elem.m;
  const long c = (m + p - 1) / p;
  const RationalPoly& f = elem.f;
  const BigRational one(1);
  RationalPoly G = frobenius_exponents(f_sigma, p) - poly_pow(f, static_cast<unsigned>(p), one);
  G = BigRational(1, p) * G;

  // ord_p of the r-th coefficient is at least r - r/(p-1) + c - 1.
  auto kept = [&](long r) { return r * (p - 2) < (K - c + 1) * static_cast<long>(p - 1); };
  const BigRational base_scale =
      elem.prefactor / BigRational(factorial(static_cast<unsigned long>(m - 1)));
  std::vector<RationalElement<BigRational>> out;
  RationalPoly body = elem.A * poly_pow(f, static_cast<unsigned>(p * c - m), one);
  BigInt pr = 1;
  for (long r = 0; kept(r); ++r) {
    BigRational coef = base_scale * BigRational(pr) *
                       BigRational(factorial(static_cast<unsigned long>(m - 1)) *
                                   factorial(static_cast<unsigned long>(r + c - 1))) /
                       BigRational(factorial(static_cast<unsigned long>(r)) *
                                   factorial(static_cast<unsigned long>(c - 1)));
    coef.canonicalize();
    out.push_back({r + c, cartier_poly(body, p), f_sigma, coef});
    body = body * G;
    pr *= p;
  }
  return out;
}

namespace {

std::vector<BasisElement> levelled_monomials(const Polytope& P, int k, const RegionSpec& region,
                                             bool twisted) {
  if (k < 1) throw DomainError("basis level must be positive");
  std::vector<std::set<ExponentVector>> levels;
  for (int l = 1; l <= k; ++l) {
    auto pts = lattice_points(P, l, region);
    levels.emplace_back(pts.begin(), pts.end());
  }
  std::vector<BasisElement> out;
  for (int l = 1; l <= k; ++l) {
    for (const auto& u : levels[l - 1]) {
      if (l > 1 && levels[l - 2].count(u)) continue;
      BasisElement e;
      e.shape = IntPoly::monomial(u, BigInt(1));
      e.pivot = u;
      e.tdeg = twisted ? degree_of_point(P, u) : 0;
      e.level = l;
      out.push_back(e);
    }
  }
  return out;
}

PadicSeries truncated_to(const PadicSeries& a, std::size_t D, const char* what) {
  if (a.degree() < D)
    throw PrecisionError(std::string(what) + " has t-degree " + std::to_string(a.degree()) +
                         ", need " + std::to_string(D));
  return truncate(a, D);
}

SeriesPoly truncated_poly(const SeriesPoly& a, std::size_t D, const char* what) {
  SeriesPoly r(a.dim());
  for (const auto& [u, c] : a.terms()) r.add_term(u, truncated_to(c, D, what));
  return r;
}

}  // namespace

std::vector<BasisElement> monomial_basis(const Polytope& P, int k, const RegionSpec& region) {
  return levelled_monomials(P, k, region, false);
}

std::vector<BasisElement> cy_monomial_basis(const Polytope& P, int k, const RegionSpec& region) {
  if (!is_reflexive(P)) throw DomainError("twisted basis needs a reflexive polytope");
  return levelled_monomials(P, k, region, true);
}

std::vector<BasisElement> cy_symmetric_basis(const IntPoly& g) {
  BasisElement one;
  one.shape = IntPoly::constant(g.dim(), BigInt(1));
  one.pivot = ExponentVector(g.dim());
  one.level = 1;
  BasisElement tg;
  tg.shape = g;
  tg.tdeg = 1;
  tg.level = 2;
  bool found = false;
  for (const auto& u : g.support())
    if (!u.is_zero()) {
      tg.pivot = u;
      found = true;
      break;
    }
  if (!found) throw DomainError("g has no nonconstant monomial");
  return {one, tg};
}

std::size_t hw_working_degree(const std::vector<BasisElement>& basis, int p, std::size_t Dt) {
  long dmax = 0;
  for (const auto& e : basis) dmax = std::max(dmax, e.tdeg);
  return Dt + static_cast<std::size_t>(p * dmax);
}

HasseWittResult hasse_witt(const SeriesPoly& f, const SeriesPoly& f_sigma, const PadicSeries& t_sigma,
                           int k, const std::vector<BasisElement>& basis, const PadicContext& ctx,
                           std::size_t Dt) {
  const int p = static_cast<int>(ctx.p);
  const std::size_t n = basis.size();
  if (n == 0) throw DomainError("empty basis");
  for (const auto& e : basis)
    if (e.level < 1 || e.level > k) throw DomainError("basis element outside levels 1..k");
  const std::size_t Dw = hw_working_degree(basis, p, Dt);
  const SeriesPoly fw = truncated_poly(f, Dw, "f");
  const SeriesPoly fsw = truncated_poly(f_sigma, Dw, "f^sigma");
  const PadicSeries zero = padic_series(ctx, Dw);
  const PadicSeries one = one_like(zero);
  const SeriesPoly F = F_k_polynomial(fw, fsw, k, p, one);

  long dmax = 0;
  for (const auto& e : basis) dmax = std::max(dmax, e.tdeg);
  std::vector<PadicSeries> tsig_pow{one};
  PadicSeries w_inv = one;
  if (dmax > 0) {
    const PadicSeries ts = truncated_to(t_sigma, Dw, "t^sigma");
    if (ts.valuation() != static_cast<std::size_t>(p) || !ts[p].is_unit())
      throw DomainError("t^sigma must be t^p times a unit");
    w_inv = series_invert(shift_down(ts, p));
    for (long d = 1; d <= dmax; ++d) tsig_pow.push_back(tsig_pow.back() * ts);
  }

  std::vector<PadicInt> gamma_inv;
  for (const auto& e : basis) {
    const BigInt* g = e.shape.find(e.pivot);
    if (!g) throw DomainError("basis pivot outside its shape");
    PadicInt gi(ctx, *g);
    if (!gi.is_unit()) throw DomainError("basis pivot coefficient is not a p-adic unit");
    gamma_inv.push_back(gi.inverse());
  }

  HasseWittResult out;
  out.level = k;
  out.p = ctx.p;
  out.precision = ctx.N;
  out.basis = basis;
  out.entries.assign(n, std::vector<PadicSeries>(n, padic_series(ctx, Dt)));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<PadicSeries> c(n, zero);
    for (std::size_t jj = n; jj-- > 0;) {
      const BasisElement& bj = basis[jj];
      PadicSeries x = zero;
      for (const auto& [w, s] : basis[i].shape.terms())
        if (const PadicSeries* fc = F.find(p * bj.pivot - w)) x = x + PadicInt(ctx, s) * *fc;
      x = shift_up(x, static_cast<std::size_t>(basis[i].tdeg));
      for (std::size_t jp = jj + 1; jp < n; ++jp) {
        const BigInt* s = basis[jp].shape.find(bj.pivot);
        if (s && !is_zero(c[jp]))
          x = x - PadicInt(ctx, *s) * (c[jp] * tsig_pow[basis[jp].tdeg]);
      }
      if (bj.tdeg > 0) {
        try {
          x = shift_down(x, static_cast<std::size_t>(p * bj.tdeg));
        } catch (const DomainError&) {
          throw TheoremViolation("entry (" + std::to_string(i) + "," + std::to_string(jj) +
                                 ") is not divisible by (t^sigma)^" + std::to_string(bj.tdeg));
        }
        for (long d = 0; d < bj.tdeg; ++d) x = x * w_inv;
      }
      c[jj] = gamma_inv[jj] * x;
    }
    for (std::size_t jj = 0; jj < n; ++jj) out.entries[i][jj] = truncate(c[jj], Dt);
  }

  for (int l = 1; l <= k; ++l) {
    long m = 0;
    for (const auto& e : basis) m += e.level <= l;
    out.level_sizes.push_back(m);
  }
  for (int l = 1; l < k; ++l) out.L += out.level_sizes[k - 1] - out.level_sizes[l - 1];

  const PadicSeries dzero = padic_series(ctx, Dt);
  out.det = berkowitz_det(out.entries, dzero, one_like(dzero));
  if (out.L >= ctx.N)
    throw PrecisionError("hw needs precision above p^" + std::to_string(out.L));
  const PadicContext hctx = ctx.with_precision(ctx.N - static_cast<int>(out.L));
  out.hw = padic_series(hctx, Dt);
  for (std::size_t d = 0; d <= Dt; ++d) {
    const PadicInt& v = out.det[d];
    if (v.is_zero()) continue;
    if (v.valuation() < out.L)
      throw TheoremViolation("det HW^(" + std::to_string(k) + ") coefficient t^" + std::to_string(d) +
                             " has p-order " + std::to_string(v.valuation()) + " < " +
                             std::to_string(out.L));
    out.hw[d] = v.divide_by_p_power(static_cast<int>(out.L));
  }
  return out;
}

std::string to_json(const HasseWittResult& hw) {
  nlohmann::json j;
  j["level"] = hw.level;
  j["p"] = hw.p;
  j["precision"] = hw.precision;
  j["L"] = hw.L;
  j["level_sizes"] = hw.level_sizes;
  auto& b = j["basis"] = nlohmann::json::array();
  for (const auto& e : hw.basis)
    b.push_back({{"pivot", e.pivot.to_vector()}, {"tdeg", e.tdeg}, {"level", e.level}});
  auto& m = j["entries"] = nlohmann::json::array();
  for (const auto& row : hw.entries) {
    auto r = nlohmann::json::array();
    for (const auto& e : row) r.push_back(to_text(e));
    m.push_back(r);
  }
  j["det"] = to_text(hw.det);
  j["hw"] = to_text(hw.hw);
  return j.dump(2);
}

}  // namespace dwork
