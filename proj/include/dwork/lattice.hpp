#pragma once

#include <array>
#include <compare>
#include <functional>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

#include "dwork/series.hpp"

namespace dwork {

inline constexpr int kMaxDim = 6;

class ExponentVector {
 public:
  ExponentVector() = default;
  explicit ExponentVector(int n);
  ExponentVector(std::initializer_list<int> e);
  static ExponentVector from(const std::vector<int>& e);

  int dim() const { return n_; }
  int& operator[](int i) { return e_[i]; }
  int operator[](int i) const { return e_[i]; }
  bool is_zero() const;
  std::vector<int> to_vector() const { return {e_.begin(), e_.begin() + n_}; }
  std::string to_string() const;

  ExponentVector& operator+=(const ExponentVector& o);
  ExponentVector& operator-=(const ExponentVector& o);
  friend ExponentVector operator+(ExponentVector a, const ExponentVector& b) { return a += b; }
  friend ExponentVector operator-(ExponentVector a, const ExponentVector& b) { return a -= b; }
  friend ExponentVector operator*(int s, ExponentVector a) {
    for (int i = 0; i < a.n_; ++i) a.e_[i] *= s;
    return a;
  }
  ExponentVector operator-() const { return (-1) * *this; }
  // Lexicographic; unused trailing slots stay zero so array order is exact.
  friend auto operator<=>(const ExponentVector&, const ExponentVector&) = default;

 private:
  int n_ = 0;
  std::array<int, kMaxDim> e_{};
};

long dot(const ExponentVector& a, const ExponentVector& b);
// gcd of |entries|; 0 for the zero vector.
long gcd_of(const ExponentVector& u);

// Sparse Laurent polynomial; zero coefficients are never stored.
template <class C>
class LaurentPoly {
 public:
  using Map = std::map<ExponentVector, C>;

  explicit LaurentPoly(int n = 0) : n_(n) {}
  static LaurentPoly monomial(const ExponentVector& u, const C& c) {
    LaurentPoly r(u.dim());
    r.add_term(u, c);
    return r;
  }
  static LaurentPoly constant(int n, const C& c) { return monomial(ExponentVector(n), c); }

  int dim() const { return n_; }
  const Map& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  const C* find(const ExponentVector& u) const {
    auto it = terms_.find(u);
    return it == terms_.end() ? nullptr : &it->second;
  }
  C coeff_or(const ExponentVector& u, const C& zero) const {
    const C* c = find(u);
    return c ? *c : zero;
  }
  std::vector<ExponentVector> support() const {
    std::vector<ExponentVector> s;
    for (const auto& [u, c] : terms_) s.push_back(u);
    return s;
  }

  void add_term(const ExponentVector& u, const C& c) {
    using dwork::is_zero;
    if (u.dim() != n_) throw ConfigError("exponent dimension mismatch");
    if (is_zero(c)) return;
    auto it = terms_.find(u);
    if (it == terms_.end()) {
      terms_.emplace(u, c);
    } else {
      it->second = it->second + c;
      if (is_zero(it->second)) terms_.erase(it);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    for (const auto& [u, c] : o.terms_) add_term(u, c);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    for (const auto& [u, c] : o.terms_) add_term(u, -c);
    return *this;
  }
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
  friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
  LaurentPoly operator-() const {
    LaurentPoly r(n_);
    for (const auto& [u, c] : terms_) r.terms_.emplace(u, -c);
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r(a.n_);
    for (const auto& [u, c] : a.terms_)
      for (const auto& [v, d] : b.terms_) r.add_term(u + v, c * d);
    return r;
  }
  friend LaurentPoly operator*(const C& s, const LaurentPoly& a) {
    LaurentPoly r(a.n_);
    for (const auto& [u, c] : a.terms_) r.add_term(u, s * c);
    return r;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

 private:
  int n_;
  Map terms_;
};

using IntPoly = LaurentPoly<BigInt>;
using RationalPoly = LaurentPoly<BigRational>;
using PadicPoly = LaurentPoly<PadicInt>;
using SeriesPoly = LaurentPoly<PadicSeries>;

template <class D, class C, class Fn>
LaurentPoly<D> map_coefficients(const LaurentPoly<C>& a, Fn fn) {
  LaurentPoly<D> r(a.dim());
  for (const auto& [u, c] : a.terms()) r.add_term(u, fn(c));
  return r;
}

// f^e by repeated multiplication with the sparse base; one is the unit of C.
template <class C>
LaurentPoly<C> poly_pow(const LaurentPoly<C>& f, unsigned e, const C& one) {
  LaurentPoly<C> r = LaurentPoly<C>::constant(f.dim(), one);
  if (e == 0) return r;
  // Binary powering squares large intermediates; for the sparse bases used here
  // multiplying by f each step is cheaper and gives the identical exact result.
  for (unsigned i = 0; i < e; ++i) r = r * f;
  return r;
}

// Keeps the terms whose exponents are all divisible by p, dividing them by p.
template <class C>
LaurentPoly<C> cartier_poly(const LaurentPoly<C>& a, int p) {
  LaurentPoly<C> r(a.dim());
  for (const auto& [u, c] : a.terms()) {
    bool ok = true;
    ExponentVector v(u.dim());
    for (int i = 0; i < u.dim() && ok; ++i) {
      if (u[i] % p != 0) ok = false;
      v[i] = u[i] / p;
    }
    if (ok) r.add_term(v, c);
  }
  return r;
}

// A(x^p).
template <class C>
LaurentPoly<C> frobenius_exponents(const LaurentPoly<C>& a, int p) {
  LaurentPoly<C> r(a.dim());
  for (const auto& [u, c] : a.terms()) r.add_term(p * u, c);
  return r;
}

// Lines "e1,e2,...,en : coefficient".
std::string poly_to_text(const IntPoly& a);
std::string poly_to_text(const RationalPoly& a);
// Terms separated by ';' or newlines, each "e1,...,en : coefficient".
IntPoly parse_int_poly(const std::string& text);

struct Facet {
  ExponentVector normal;  // primitive
  long offset;            // polytope lies in <normal, x> <= offset
};

class Polytope {
 public:
  Polytope() = default;
  // Convex hull of the given lattice points.
  static Polytope hull(int n, const std::vector<ExponentVector>& points);

  int dim() const { return n_; }
  bool full_dimensional() const { return full_; }
  const std::vector<ExponentVector>& vertices() const { return vertices_; }
  const std::vector<Facet>& facets() const { return facets_; }
  bool contains(const ExponentVector& u, long scale = 1, bool strict = false) const;
  // Facets passing through the point.
  std::vector<Facet> facets_through(const ExponentVector& u) const;

 private:
  int n_ = 0;
  bool full_ = false;
  std::vector<ExponentVector> vertices_;
  std::vector<Facet> facets_;
};

template <class C>
Polytope newton_polytope(const LaurentPoly<C>& f) {
  if (f.is_zero()) throw DomainError("newton polytope of the zero polynomial");
  return Polytope::hull(f.dim(), f.support());
}

bool is_reflexive(const Polytope& P);

// deg(u) = max_i <a_i, u>, clamped at 0 (facet offsets are 1 for reflexive P).
long degree_of_point(const Polytope& P, const ExponentVector& u);

// [Z^n : lattice generated by the points], via integer row echelon form.
BigInt lattice_index(int n, const std::vector<ExponentVector>& generators);
template <class C>
BigInt support_lattice_index(const LaurentPoly<C>& g) {
  std::vector<ExponentVector> gens;
  for (const auto& u : g.support())
    if (!u.is_zero()) gens.push_back(u);
  return lattice_index(g.dim(), gens);
}

enum class RegionKind { Interior, Full, Custom };

struct RegionSpec {
  RegionKind kind = RegionKind::Interior;
  std::map<long, std::vector<ExponentVector>> custom;  // level k -> points of (k mu)
  static RegionSpec interior() { return {RegionKind::Interior, {}}; }
  static RegionSpec full() { return {RegionKind::Full, {}}; }
};

// Lattice points of k*mu, sorted lexicographically.
std::vector<ExponentVector> lattice_points(const Polytope& P, long k, const RegionSpec& region);

// Grading functional at vertex b: sum of the inward facet normals through b.
// Strictly positive on the tangent cone of P at b minus the origin.
ExponentVector grading_functional(const Polytope& P, const ExponentVector& b);

// Rank of a list of integer vectors.
int rank_of(int n, const std::vector<ExponentVector>& vectors);

}  // namespace dwork
