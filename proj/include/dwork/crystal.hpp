#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dwork/lattice.hpp"

namespace dwork {

// prefactor * A / f^m. The conventional element (m-1)! A / f^m uses prefactor (m-1)!.
template <class C>
struct RationalElement {
  long m = 1;
  LaurentPoly<C> A;
  LaurentPoly<C> f;
  BigRational prefactor = 1;
};

template <class C>
RationalElement<C> standard_element(long m, const LaurentPoly<C>& A, const LaurentPoly<C>& f) {
  return {m, A, f, BigRational(factorial(static_cast<unsigned long>(m - 1)))};
}

// Laurent expansion supported in a cone; exactly the exponents with ell(u) <= bound are valid.
template <class C>
struct ConeExpansion {
  ExponentVector vertex;
  ExponentVector ell;
  long bound = 0;
  LaurentPoly<C> terms;
};

namespace detail {
template <class C>
LaurentPoly<C> mul_truncated(const LaurentPoly<C>& a, const LaurentPoly<C>& b,
                             const ExponentVector& ell, long bound) {
  LaurentPoly<C> r(a.dim());
  for (const auto& [u, c] : a.terms()) {
    const long lu = dot(ell, u);
    for (const auto& [v, d] : b.terms())
      if (lu + dot(ell, v) <= bound) r.add_term(u + v, c * d);
  }
  return r;
}
}  // namespace detail

// Expansion of prefactor * A / f^m at the vertex b of the Newton polytope of f.
// Writes f = f_b x^b (1 - h) and sums binom(m+j-1, j) h^j. Exponents are absolute.
template <class C>
ConeExpansion<C> expand_at_vertex(const RationalElement<C>& elem, const ExponentVector& b, long bound) {
  const LaurentPoly<C>& f = elem.f;
  const C* fb = f.find(b);
  if (!fb || !is_invertible(*fb)) throw ExpansionError("vertex coefficient of f is not a unit");
  const Polytope P = newton_polytope(f);
  if (!P.full_dimensional()) throw ExpansionError("Newton polytope of f is not full-dimensional");
  if (std::find(P.vertices().begin(), P.vertices().end(), b) == P.vertices().end())
    throw ExpansionError("expansion point " + b.to_string() + " is not a vertex");

  ConeExpansion<C> E;
  E.vertex = b;
  E.ell = grading_functional(P, b);
  E.bound = bound;
  E.terms = LaurentPoly<C>(f.dim());

  const C inv = inverse_of(*fb);
  const C one = one_like(*fb);
  LaurentPoly<C> h(f.dim());
  for (const auto& [w, c] : f.terms())
    if (w != b) h.add_term(w - b, -(inv * c));

  C scale = scalar_from(*fb, elem.prefactor);
  for (long i = 0; i < elem.m; ++i) scale = scale * inv;
  LaurentPoly<C> A(f.dim());
  for (const auto& [u, c] : elem.A.terms()) A.add_term(u - elem.m * b, scale * c);
  if (A.is_zero()) return E;
  long lmin = dot(E.ell, A.terms().begin()->first);
  for (const auto& [u, c] : A.terms()) lmin = std::min(lmin, dot(E.ell, u));
  if (lmin > bound) return E;
  const long room = bound - lmin;

  // Every term of h has ell >= 1, so h^j is only needed for j <= room.
  LaurentPoly<C> hp = LaurentPoly<C>::constant(f.dim(), one);
  LaurentPoly<C> S(f.dim());
  for (long j = 0; j <= room && !hp.is_zero(); ++j) {
    S += scalar_from(one, BigRational(binomial(elem.m + j - 1, j))) * hp;
    hp = detail::mul_truncated(hp, h, E.ell, room);
  }
  E.terms = detail::mul_truncated(A, S, E.ell, bound);
  return E;
}

// Cartier operator on an expansion with constant (Frobenius-fixed) coefficients:
// keeps exponents divisible by p and divides them by p.
template <class C>
ConeExpansion<C> cartier_series(const ConeExpansion<C>& E, int p) {
  ConeExpansion<C> r = E;
  r.terms = cartier_poly(E.terms, p);
  r.bound = E.bound >= 0 ? E.bound / p : -((-E.bound + p - 1) / p);
  return r;
}

// Closed formula for the Cartier image of (m-1)! A / f^m over Q with Frobenius-fixed
// coefficients: sum_r (p^r/r!) (m-1)!/(c-1)! (r+c-1)! Q_r / (f^sigma)^(r+c) with
// c = ceil(m/p), Q_r = Cartier(A f^(pc-m) G^r) and p G = f^sigma(x^p) - f^p.
// Terms whose coefficient has p-order >= K are dropped; the result is exact mod p^K.
std::vector<RationalElement<BigRational>> cartier_rational(const RationalElement<BigRational>& elem,
                                                           const RationalPoly& f_sigma, int p, int K);

// F^(k) = f^(p-k) sum_{r<k} (f^sigma(x^p) - f^p)^r f^sigma(x^p)^(k-r-1).
template <class C>
LaurentPoly<C> F_k_polynomial(const LaurentPoly<C>& f, const LaurentPoly<C>& f_sigma, int k, int p,
                              const C& one) {
  if (k < 1 || k >= p) throw DomainError("F_k needs 1 <= k < p");
  const LaurentPoly<C> S = frobenius_exponents(f_sigma, p);
  const LaurentPoly<C> D = S - poly_pow(f, static_cast<unsigned>(p), one);
  LaurentPoly<C> sum(f.dim());
  LaurentPoly<C> Dr = LaurentPoly<C>::constant(f.dim(), one);
  for (int r = 0; r < k; ++r) {
    sum += Dr * poly_pow(S, static_cast<unsigned>(k - r - 1), one);
    Dr = Dr * D;
  }
  return poly_pow(f, static_cast<unsigned>(p - k), one) * sum;
}

// Division-free determinant (Berkowitz); valid over any commutative ring.
template <class R>
R berkowitz_det(const std::vector<std::vector<R>>& M, const R& zero, const R& one) {
  const std::size_t n = M.size();
  if (n == 0) return one;
  std::vector<R> poly = {one, -M[0][0]};
  for (std::size_t r = 1; r < n; ++r) {
    std::vector<R> col(r + 2, zero);
    col[0] = one;
    col[1] = -M[r][r];
    std::vector<R> v(r, zero);
    for (std::size_t i = 0; i < r; ++i) v[i] = M[i][r];
    for (std::size_t k = 2; k < r + 2; ++k) {
      R s = zero;
      for (std::size_t i = 0; i < r; ++i) s = s + M[r][i] * v[i];
      col[k] = -s;
      std::vector<R> w(r, zero);
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) w[i] = w[i] + M[i][j] * v[j];
      v = std::move(w);
    }
    std::vector<R> next(r + 2, zero);
    for (std::size_t i = 0; i < r + 2; ++i)
      for (std::size_t j = 0; j <= std::min(i, r); ++j) next[i] = next[i] + col[i - j] * poly[j];
    poly = std::move(next);
  }
  return n % 2 ? -poly[n] : poly[n];
}

// A basis element t^tdeg * shape / f^k. The pivot is a monomial of shape that no earlier
// basis element uses; coefficients are read off at pivots and solved back to front.
struct BasisElement {
  IntPoly shape;
  ExponentVector pivot;
  long tdeg = 0;
  int level = 1;
};

// Monomials of (k mu)_Z, ordered by first level then lexicographically.
std::vector<BasisElement> monomial_basis(const Polytope& P, int k, const RegionSpec& region);
// Monomial basis with t-twist t^deg(u), deg taken on the reflexive polytope P.
std::vector<BasisElement> cy_monomial_basis(const Polytope& P, int k, const RegionSpec& region);
// Basis 1, t g of the symmetric level-2 part for f = 1 - t g.
std::vector<BasisElement> cy_symmetric_basis(const IntPoly& g);

struct HasseWittResult {
  int level = 0;
  std::int64_t p = 0;
  int precision = 0;  // entries and det are known mod p^precision
  std::vector<BasisElement> basis;
  std::vector<std::vector<PadicSeries>> entries;
  std::vector<long> level_sizes;  // m_1, ..., m_k
  long L = 0;                     // sum_{l<k} (m_k - m_l)
  PadicSeries det;
  PadicSeries hw;  // det / p^L, known mod p^(precision - L)
};

// t-degree at which f, f^sigma and t^sigma must be supplied for output degree Dt.
std::size_t hw_working_degree(const std::vector<BasisElement>& basis, int p, std::size_t Dt);

// Matrix of the Cartier image of b_i F^(k) / (f^sigma)^(pk) in the basis b_j^sigma.
// t_sigma is only used when some basis element has tdeg > 0. Throws TheoremViolation if
// det is not divisible by p^L or a twisted entry is not divisible by t^sigma.
HasseWittResult hasse_witt(const SeriesPoly& f, const SeriesPoly& f_sigma, const PadicSeries& t_sigma,
                           int k, const std::vector<BasisElement>& basis, const PadicContext& ctx,
                           std::size_t Dt);

std::string to_json(const HasseWittResult& hw);

template <class C>
struct DivisionResult {
  LaurentPoly<C> P;  // supported in (k-1) mu
  LaurentPoly<C> Q;  // supported in k mu minus b + (k-1) mu
};

// A = P f + Q by eliminating, in increasing ell order, every monomial of the form u + b.
// Increasing ell visits maximal elements first for the order v <= u iff v in u + cone.
template <class C>
DivisionResult<C> extended_basis_division(const LaurentPoly<C>& A, const LaurentPoly<C>& f,
                                          const ExponentVector& b, int k, const RegionSpec& region) {
  if (k < 1) throw DomainError("division level must be positive");
  const Polytope P = newton_polytope(f);
  const C* fb = f.find(b);
  if (!fb || !is_invertible(*fb)) throw ExpansionError("vertex coefficient of f is not a unit");
  const ExponentVector ell = grading_functional(P, b);
  const std::vector<ExponentVector> top = lattice_points(P, k, region);
  const std::set<ExponentVector> top_set(top.begin(), top.end());
  std::set<ExponentVector> lower;
  if (k > 1) {
    auto pts = lattice_points(P, k - 1, region);
    lower.insert(pts.begin(), pts.end());
  }
  for (const auto& u : A.support())
    if (!top_set.count(u)) throw DomainError("A is not supported in k mu: " + u.to_string());

  std::vector<ExponentVector> order = top;
  std::stable_sort(order.begin(), order.end(), [&](const ExponentVector& x, const ExponentVector& y) {
    return dot(ell, x) < dot(ell, y);
  });
  const C inv = inverse_of(*fb);
  DivisionResult<C> out{LaurentPoly<C>(f.dim()), A};
  for (const auto& w : order) {
    const C* q = out.Q.find(w);
    if (!q || !lower.count(w - b)) continue;
    const C c = *q * inv;
    const LaurentPoly<C> mono = LaurentPoly<C>::monomial(w - b, c);
    out.P += mono;
    out.Q -= mono * f;
  }
  for (const auto& u : out.Q.support()) {
    if (!top_set.count(u)) throw InternalError("division left k mu at " + u.to_string());
    if (lower.count(u - b)) throw InternalError("division left a reducible monomial " + u.to_string());
  }
  return out;
}

// theta_{x_i} on a Laurent polynomial: multiplies the coefficient of x^u by u_i.
template <class C>
LaurentPoly<C> theta_x(const LaurentPoly<C>& a, int i) {
  LaurentPoly<C> r(a.dim());
  for (const auto& [u, c] : a.terms()) r.add_term(u, scalar_from(c, BigRational(u[i])) * c);
  return r;
}

// theta_t on every coefficient.
inline SeriesPoly theta_t(const SeriesPoly& a) {
  SeriesPoly r(a.dim());
  for (const auto& [u, c] : a.terms()) r.add_term(u, theta(c));
  return r;
}

struct MembershipReport {
  bool pass = true;
  int deficit = 0;  // largest (required - actual) p-order seen
  ExponentVector where;
};

inline int coefficient_order(const PadicInt& c) { return c.valuation(); }
inline int coefficient_order(const PadicSeries& c) { return min_valuation(c); }

// Checks the filtration condition ord_p(a_u) >= min(N, k * ord_p(gcd u)) for u != 0.
// With strict set, a requirement above N is undecidable and raises PrecisionError.
template <class C>
MembershipReport fk_membership_defect(const LaurentPoly<C>& terms, int k, std::int64_t p, int N,
                                      bool strict = false) {
  MembershipReport rep;
  for (const auto& [u, c] : terms.terms()) {
    if (u.is_zero()) continue;
    const long required_full = static_cast<long>(k) * p_valuation(BigInt(gcd_of(u)), p);
    if (strict && required_full > N)
      throw PrecisionError("membership at " + u.to_string() + " needs more than p^" + std::to_string(N));
    const int required = static_cast<int>(std::min<long>(N, required_full));
    const int have = coefficient_order(c);
    if (have < required && required - have > rep.deficit) {
      rep.pass = false;
      rep.deficit = required - have;
      rep.where = u;
    }
  }
  return rep;
}

// Coefficients of 1/(1 - t g) = sum_j t^j g^j as series in t of degree Dt, for
// exponents with |u_i| <= box. like fixes the coefficient ring.
template <class T>
LaurentPoly<Series<T>> expand_cy(const IntPoly& g, std::size_t Dt, int box, const T& like) {
  const int n = g.dim();
  std::map<ExponentVector, std::vector<T>> acc;
  IntPoly gp = IntPoly::constant(n, BigInt(1));
  for (std::size_t j = 0; j <= Dt; ++j) {
    for (const auto& [u, c] : gp.terms()) {
      bool inside = true;
      for (int i = 0; i < n; ++i) inside = inside && std::abs(u[i]) <= box;
      if (!inside) continue;
      auto& v = acc[u];
      if (v.empty()) v.assign(Dt + 1, zero_like(like));
      v[j] = scalar_from(like, BigRational(c));
    }
    if (j < Dt) gp = gp * g;
  }
  LaurentPoly<Series<T>> r(n);
  for (auto& [u, v] : acc) r.add_term(u, Series<T>(std::move(v)));
  return r;
}

}  // namespace dwork
