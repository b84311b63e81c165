#include "dwork/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace dwork {

ExponentVector::ExponentVector(int n) : n_(n) {
  if (n < 0 || n > kMaxDim) throw ConfigError("dimension out of range");
}

ExponentVector::ExponentVector(std::initializer_list<int> e) : n_(static_cast<int>(e.size())) {
  if (n_ > kMaxDim) throw ConfigError("dimension out of range");
  std::copy(e.begin(), e.end(), e_.begin());
}

ExponentVector ExponentVector::from(const std::vector<int>& e) {
  ExponentVector v(static_cast<int>(e.size()));
  for (int i = 0; i < v.n_; ++i) v.e_[i] = e[i];
  return v;
}

bool ExponentVector::is_zero() const {
  for (int i = 0; i < n_; ++i)
    if (e_[i] != 0) return false;
  return true;
}

std::string ExponentVector::to_string() const {
  std::string s = "(";
  for (int i = 0; i < n_; ++i) {
    if (i) s += ',';
    s += std::to_string(e_[i]);
  }
  return s + ")";
}

ExponentVector& ExponentVector::operator+=(const ExponentVector& o) {
  if (o.n_ != n_) throw ConfigError("exponent dimension mismatch");
  for (int i = 0; i < n_; ++i) e_[i] += o.e_[i];
  return *this;
}

ExponentVector& ExponentVector::operator-=(const ExponentVector& o) {
  if (o.n_ != n_) throw ConfigError("exponent dimension mismatch");
  for (int i = 0; i < n_; ++i) e_[i] -= o.e_[i];
  return *this;
}

long dot(const ExponentVector& a, const ExponentVector& b) {
  long s = 0;
  for (int i = 0; i < a.dim(); ++i) s += static_cast<long>(a[i]) * b[i];
  return s;
}

long gcd_of(const ExponentVector& u) {
  long g = 0;
  for (int i = 0; i < u.dim(); ++i) g = std::gcd(g, static_cast<long>(std::abs(u[i])));
  return g;
}

namespace {

template <class C>
std::string poly_text(const LaurentPoly<C>& a) {
  std::ostringstream os;
  for (const auto& [u, c] : a.terms()) {
    for (int i = 0; i < u.dim(); ++i) os << (i ? "," : "") << u[i];
    os << " : " << c.get_str() << '\n';
  }
  return os.str();
}

// Determinant of a small integer matrix by cofactor expansion.
long small_det(std::vector<std::vector<long>> m) {
  const std::size_t n = m.size();
  if (n == 0) return 1;
  if (n == 1) return m[0][0];
  long det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c] == 0) continue;
    std::vector<std::vector<long>> minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<long> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    long term = m[0][c] * small_det(minor);
    det += (c % 2 == 0) ? term : -term;
  }
  return det;
}

// Normal to the hyperplane spanned by n-1 difference vectors in Z^n.
ExponentVector cross_normal(int n, const std::vector<ExponentVector>& diffs) {
  ExponentVector a(n);
  for (int j = 0; j < n; ++j) {
    std::vector<std::vector<long>> m;
    for (const auto& d : diffs) {
      std::vector<long> row;
      for (int k = 0; k < n; ++k)
        if (k != j) row.push_back(d[k]);
      m.push_back(row);
    }
    long det = small_det(m);
    a[j] = static_cast<int>(j % 2 == 0 ? det : -det);
  }
  long g = gcd_of(a);
  if (g > 1)
    for (int j = 0; j < n; ++j) a[j] = static_cast<int>(a[j] / g);
  return a;
}

void for_each_subset(int total, int size, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(size);
  std::iota(idx.begin(), idx.end(), 0);
  if (size > total) return;
  while (true) {
    fn(idx);
    int i = size - 1;
    while (i >= 0 && idx[i] == total - size + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

std::string poly_to_text(const IntPoly& a) { return poly_text(a); }
std::string poly_to_text(const RationalPoly& a) { return poly_text(a); }

IntPoly parse_int_poly(const std::string& text) {
  std::string norm = text;
  std::replace(norm.begin(), norm.end(), '\n', ';');
  std::vector<std::pair<std::vector<int>, BigInt>> raw;
  std::stringstream ss(norm);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("polynomial term needs ':' : " + item);
    std::vector<int> e;
    std::stringstream es(item.substr(0, colon));
    std::string tok;
    while (std::getline(es, tok, ',')) {
      try {
        e.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        throw ConfigError("bad exponent in term: " + item);
      }
    }
    std::string cs = item.substr(colon + 1);
    cs.erase(0, cs.find_first_not_of(" \t"));
    cs.erase(cs.find_last_not_of(" \t\r") + 1);
    BigInt c;
    if (c.set_str(cs, 10) != 0) throw ConfigError("bad coefficient in term: " + item);
    raw.emplace_back(e, c);
  }
  if (raw.empty()) throw ConfigError("empty polynomial literal");
  const int n = static_cast<int>(raw.front().first.size());
  IntPoly r(n);
  for (const auto& [e, c] : raw) {
    if (static_cast<int>(e.size()) != n) throw ConfigError("terms of different dimension");
    r.add_term(ExponentVector::from(e), c);
  }
  return r;
}

int rank_of(int n, const std::vector<ExponentVector>& vectors) {
  std::vector<std::vector<BigRational>> m;
  for (const auto& v : vectors) {
    std::vector<BigRational> row(n);
    for (int i = 0; i < n; ++i) row[i] = v[i];
    m.push_back(row);
  }
  int rank = 0;
  for (int col = 0; col < n && rank < static_cast<int>(m.size()); ++col) {
    int piv = -1;
    for (int r = rank; r < static_cast<int>(m.size()); ++r)
      if (sgn(m[r][col]) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[rank], m[piv]);
    for (int r = rank + 1; r < static_cast<int>(m.size()); ++r) {
      if (sgn(m[r][col]) == 0) continue;
      BigRational f = m[r][col] / m[rank][col];
      for (int k = col; k < n; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

Polytope Polytope::hull(int n, const std::vector<ExponentVector>& input) {
  if (input.empty()) throw DomainError("hull of an empty point set");
  std::vector<ExponentVector> pts(input);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  Polytope P;
  P.n_ = n;

  std::vector<ExponentVector> diffs;
  for (const auto& x : pts) diffs.push_back(x - pts[0]);
  const int d = rank_of(n, diffs);
  if (d < n) {
    // Project onto coordinates spanning the affine hull; projection is injective there.
    if (d == 0) {
      P.vertices_ = {pts[0]};
      return P;
    }
    std::vector<int> coords;
    for_each_subset(n, d, [&](const std::vector<int>& idx) {
      if (!coords.empty()) return;
      std::vector<ExponentVector> proj;
      for (const auto& v : diffs) {
        ExponentVector w(d);
        for (int i = 0; i < d; ++i) w[i] = v[idx[i]];
        proj.push_back(w);
      }
      if (rank_of(d, proj) == d) coords = idx;
    });
    std::vector<ExponentVector> proj;
    for (const auto& v : pts) {
      ExponentVector w(d);
      for (int i = 0; i < d; ++i) w[i] = v[coords[i]];
      proj.push_back(w);
    }
    Polytope low = hull(d, proj);
    for (const auto& v : pts) {
      ExponentVector w(d);
      for (int i = 0; i < d; ++i) w[i] = v[coords[i]];
      if (std::find(low.vertices_.begin(), low.vertices_.end(), w) != low.vertices_.end())
        P.vertices_.push_back(v);
    }
    return P;
  }

  P.full_ = true;
  std::set<std::pair<ExponentVector, long>> seen;
  const int total = static_cast<int>(pts.size());
  for_each_subset(total, n, [&](const std::vector<int>& idx) {
    std::vector<ExponentVector> ds;
    for (int i = 1; i < n; ++i) ds.push_back(pts[idx[i]] - pts[idx[0]]);
    ExponentVector a = cross_normal(n, ds);
    if (a.is_zero()) return;
    const long c = dot(a, pts[idx[0]]);
    bool le = true, ge = true;
    for (const auto& y : pts) {
      long v = dot(a, y);
      if (v > c) le = false;
      if (v < c) ge = false;
    }
    if (le && !seen.count({a, c})) {
      seen.insert({a, c});
      P.facets_.push_back({a, c});
    }
    if (ge) {
      ExponentVector na = -a;
      if (!seen.count({na, -c})) {
        seen.insert({na, -c});
        P.facets_.push_back({na, -c});
      }
    }
  });
  std::sort(P.facets_.begin(), P.facets_.end(),
            [](const Facet& x, const Facet& y) { return x.normal < y.normal; });
  for (const auto& x : pts) {
    std::vector<ExponentVector> normals;
    for (const auto& f : P.facets_)
      if (dot(f.normal, x) == f.offset) normals.push_back(f.normal);
    if (rank_of(n, normals) == n) P.vertices_.push_back(x);
  }
  return P;
}

bool Polytope::contains(const ExponentVector& u, long scale, bool strict) const {
  if (!full_) throw DomainError("membership test on a lower-dimensional polytope");
  for (const auto& f : facets_) {
    long v = dot(f.normal, u);
    if (strict ? v >= scale * f.offset : v > scale * f.offset) return false;
  }
  return true;
}

std::vector<Facet> Polytope::facets_through(const ExponentVector& u) const {
  std::vector<Facet> r;
  for (const auto& f : facets_)
    if (dot(f.normal, u) == f.offset) r.push_back(f);
  return r;
}

bool is_reflexive(const Polytope& P) {
  if (!P.full_dimensional()) throw DomainError("reflexivity needs a full-dimensional polytope");
  for (const auto& f : P.facets())
    if (f.offset != 1) return false;
  return true;
}

long degree_of_point(const Polytope& P, const ExponentVector& u) {
  long best = 0;
  for (const auto& f : P.facets()) {
    if (f.offset <= 0) throw DomainError("degree function needs the origin in the interior");
    long v = dot(f.normal, u);
    // smallest k with v <= k * offset
    long k = v <= 0 ? 0 : (v + f.offset - 1) / f.offset;
    best = std::max(best, k);
  }
  return best;
}

BigInt lattice_index(int n, const std::vector<ExponentVector>& generators) {
  std::vector<std::vector<BigInt>> m;
  for (const auto& g : generators) {
    std::vector<BigInt> row(n);
    for (int i = 0; i < n; ++i) row[i] = g[i];
    m.push_back(row);
  }
  // Integer row echelon form by Euclidean row operations; |det| of the pivots.
  BigInt index = 1;
  std::size_t rank = 0;
  for (int col = 0; col < n; ++col) {
    while (true) {
      std::size_t piv = m.size();
      for (std::size_t r = rank; r < m.size(); ++r)
        if (sgn(m[r][col]) != 0 && (piv == m.size() || abs(m[r][col]) < abs(m[piv][col]))) piv = r;
      if (piv == m.size()) throw InfiniteIndexError("support spans a lattice of lower rank");
      std::swap(m[rank], m[piv]);
      bool done = true;
      for (std::size_t r = rank + 1; r < m.size(); ++r) {
        if (sgn(m[r][col]) == 0) continue;
        BigInt q;
        mpz_tdiv_q(q.get_mpz_t(), m[r][col].get_mpz_t(), m[rank][col].get_mpz_t());
        for (int k = col; k < n; ++k) m[r][k] -= q * m[rank][k];
        if (sgn(m[r][col]) != 0) done = false;
      }
      if (done) break;
    }
    index *= abs(m[rank][col]);
    ++rank;
  }
  return index;
}

std::vector<ExponentVector> lattice_points(const Polytope& P, long k, const RegionSpec& region) {
  if (k < 1) throw ConfigError("lattice_points needs k >= 1");
  if (region.kind == RegionKind::Custom) {
    auto it = region.custom.find(k);
    if (it == region.custom.end())
      throw ConfigError("custom region has no point list for level " + std::to_string(k));
    std::vector<ExponentVector> pts = it->second;
    std::sort(pts.begin(), pts.end());
    return pts;
  }
  const int n = P.dim();
  ExponentVector lo(n), hi(n);
  for (int i = 0; i < n; ++i) {
    int mn = P.vertices()[0][i], mx = mn;
    for (const auto& v : P.vertices()) {
      mn = std::min(mn, v[i]);
      mx = std::max(mx, v[i]);
    }
    lo[i] = static_cast<int>(k * mn);
    hi[i] = static_cast<int>(k * mx);
  }
  const bool strict = region.kind == RegionKind::Interior;
  std::vector<ExponentVector> out;
  ExponentVector u = lo;
  while (true) {
    if (P.contains(u, k, strict)) out.push_back(u);
    int i = n - 1;
    while (i >= 0 && u[i] == hi[i]) {
      u[i] = lo[i];
      --i;
    }
    if (i < 0) break;
    ++u[i];
  }
  return out;  // odometer order with the last coordinate fastest is lexicographic
}

ExponentVector grading_functional(const Polytope& P, const ExponentVector& b) {
  ExponentVector ell(P.dim());
  auto fs = P.facets_through(b);
  std::vector<ExponentVector> normals;
  for (const auto& f : fs) {
    ell -= f.normal;
    normals.push_back(f.normal);
  }
  if (rank_of(P.dim(), normals) != P.dim()) throw DomainError("grading functional needs a vertex");
  return ell;
}

}  // namespace dwork
