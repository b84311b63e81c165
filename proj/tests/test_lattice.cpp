#include <algorithm>
#include <numeric>
#include <random>

#include "doctest.h"
#include "dwork/lattice.hpp"

using namespace dwork;

namespace {

IntPoly poly(std::initializer_list<std::pair<ExponentVector, long>> terms) {
  IntPoly r(terms.begin()->first.dim());
  for (const auto& [u, c] : terms) r.add_term(u, BigInt(c));
  return r;
}

IntPoly hyperoctahedral2() { return poly({{{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, 1}, {{0, -1}, 1}}); }
IntPoly hypercubic2() { return poly({{{1, 1}, 1}, {{1, -1}, 1}, {{-1, 1}, 1}, {{-1, -1}, 1}}); }
IntPoly simplicial2() { return poly({{{1, 0}, 1}, {{0, 1}, 1}, {{-1, -1}, 1}}); }
IntPoly square_f() { return poly({{{0, 0}, 1}, {{1, 0}, -1}, {{0, 1}, -1}, {{1, 1}, 1}}); }

// Andrew's monotone chain; returns the strict hull vertices sorted.
std::vector<ExponentVector> chain_hull(std::vector<ExponentVector> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return p;
  auto cross = [](const ExponentVector& o, const ExponentVector& a, const ExponentVector& b) {
    return static_cast<long>(a[0] - o[0]) * (b[1] - o[1]) -
           static_cast<long>(a[1] - o[1]) * (b[0] - o[0]);
  };
  std::vector<ExponentVector> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  h.resize(k - 1);
  std::sort(h.begin(), h.end());
  return h;
}

std::vector<ExponentVector> sorted(std::vector<ExponentVector> v) {
  std::sort(v.begin(), v.end());
  return v;
}

long gcd_of_minors(const std::vector<ExponentVector>& g) {
  long r = 0;
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      r = std::gcd(r, std::abs(static_cast<long>(g[i][0]) * g[j][1] -
                               static_cast<long>(g[i][1]) * g[j][0]));
  return r;
}

}  // namespace

TEST_SUITE("lattice") {
  TEST_CASE("exponent vectors") {
    ExponentVector a{1, -2};
    ExponentVector b{0, 3};
    CHECK((a + b) == ExponentVector{1, 1});
    CHECK((3 * a) == ExponentVector{3, -6});
    CHECK(dot(a, b) == -6);
    CHECK(gcd_of(ExponentVector{6, -9}) == 3);
    CHECK(ExponentVector{0, 5} < ExponentVector{1, -5});
  }

  TEST_CASE("newton_polytope") {
    IntPoly seg = poly({{{0}, 1}, {{1}, -1}, {{-1}, -1}});
    CHECK(sorted(newton_polytope(seg).vertices()) == std::vector<ExponentVector>{{-1}, {1}});
    Polytope oct = newton_polytope(hyperoctahedral2());
    CHECK(oct.vertices().size() == 4);
    CHECK(oct.facets().size() == 4);
    for (const auto& f : oct.facets()) {
      CHECK(f.offset == 1);
      CHECK(std::abs(f.normal[0]) == 1);
      CHECK(std::abs(f.normal[1]) == 1);
    }
    CHECK(sorted(newton_polytope(square_f()).vertices()) ==
          std::vector<ExponentVector>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK_THROWS_AS(newton_polytope(IntPoly(2)), DomainError);
  }

  TEST_CASE("lower-dimensional hull keeps its extreme points") {
    Polytope P = Polytope::hull(2, {{0, 0}, {1, 1}, {2, 2}, {3, 3}});
    CHECK_FALSE(P.full_dimensional());
    CHECK(sorted(P.vertices()) == std::vector<ExponentVector>{{0, 0}, {3, 3}});
    CHECK_THROWS_AS(is_reflexive(P), DomainError);
  }

  TEST_CASE("is_reflexive") {
    CHECK(is_reflexive(newton_polytope(hyperoctahedral2())));
    CHECK(is_reflexive(newton_polytope(simplicial2())));
    CHECK(is_reflexive(newton_polytope(hypercubic2())));
    CHECK_FALSE(is_reflexive(Polytope::hull(1, {{0}, {2}})));
  }

  TEST_CASE("degree_of_point") {
    Polytope oct = newton_polytope(hyperoctahedral2());
    CHECK(degree_of_point(oct, ExponentVector{0, 0}) == 0);
    CHECK(degree_of_point(oct, ExponentVector{2, 1}) == 3);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> d(-6, 6);
    for (int trial = 0; trial < 200; ++trial) {
      ExponentVector u{d(rng), d(rng)};
      // brute force: least k with u in k * cross-polytope
      long k = 0;
      while (std::abs(u[0]) + std::abs(u[1]) > k) ++k;
      CHECK(degree_of_point(oct, u) == k);
      int s = 1 + (d(rng) + 6) % 5;
      CHECK(degree_of_point(oct, s * u) == s * degree_of_point(oct, u));
    }
  }

  TEST_CASE("degree is subadditive and homogeneous on reflexive polytopes") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> d(-5, 5);
    for (const IntPoly& g : {hyperoctahedral2(), hypercubic2(), simplicial2()}) {
      Polytope P = newton_polytope(g);
      for (int trial = 0; trial < 100; ++trial) {
        ExponentVector u{d(rng), d(rng)}, v{d(rng), d(rng)};
        CHECK(degree_of_point(P, u + v) <= degree_of_point(P, u) + degree_of_point(P, v));
        CHECK(degree_of_point(P, 3 * u) == 3 * degree_of_point(P, u));
      }
    }
  }

  TEST_CASE("support_lattice_index") {
    CHECK(support_lattice_index(hyperoctahedral2()) == 1);
    CHECK(support_lattice_index(hypercubic2()) == 2);
    // e1 and e2 lie in the support, so the generated lattice is all of Z^2.
    CHECK(support_lattice_index(simplicial2()) == 1);
    CHECK(gcd_of_minors(simplicial2().support()) == 1);
    CHECK(lattice_index(2, {{2, 0}, {0, 3}}) == 6);
    CHECK_THROWS_AS(lattice_index(2, {{1, 1}, {2, 2}}), InfiniteIndexError);
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> d(-7, 7);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<ExponentVector> g;
      for (int i = 0; i < 3; ++i) g.push_back({d(rng), d(rng)});
      long oracle = gcd_of_minors(g);
      if (oracle == 0) {
        CHECK_THROWS_AS(lattice_index(2, g), InfiniteIndexError);
      } else {
        CHECK(lattice_index(2, g) == oracle);
      }
    }
  }

  TEST_CASE("lattice_points") {
    for (const IntPoly& g : {hyperoctahedral2(), hypercubic2(), simplicial2()}) {
      auto pts = lattice_points(newton_polytope(g), 1, RegionSpec::interior());
      CHECK(pts == std::vector<ExponentVector>{{0, 0}});
    }
    RegionSpec mu;
    mu.kind = RegionKind::Custom;
    mu.custom[2] = {{1, 1}, {0, 0}, {1, 0}, {0, 1}};
    auto sq = lattice_points(newton_polytope(square_f()), 2, mu);
    CHECK(sq == std::vector<ExponentVector>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    CHECK_THROWS_AS(lattice_points(newton_polytope(square_f()), 3, mu), ConfigError);
    auto oct2 = lattice_points(newton_polytope(hyperoctahedral2()), 2, RegionSpec::interior());
    std::vector<ExponentVector> oracle;
    for (int x = -2; x <= 2; ++x)
      for (int y = -2; y <= 2; ++y)
        if (std::abs(x) + std::abs(y) < 2) oracle.push_back({x, y});
    CHECK(oct2 == oracle);
    CHECK(oct2.size() == 5);
    auto full = lattice_points(newton_polytope(hyperoctahedral2()), 1, RegionSpec::full());
    CHECK(full.size() == 5);
  }

  TEST_CASE("poly_pow and cartier_poly") {
    IntPoly x1 = poly({{{1}, 1}, {{-1}, 1}});
    CHECK(poly_pow(x1, 0, BigInt(1)) == IntPoly::constant(1, BigInt(1)));
    CHECK(poly_pow(x1, 2, BigInt(1)) == poly({{{2}, 1}, {{0}, 2}, {{-2}, 1}}));
    for (int p : {3, 5}) {
      IntPoly fp = poly_pow(square_f(), p - 1, BigInt(1));
      CHECK(fp.coeff_or(ExponentVector{0, 0}, BigInt(0)) == 1);
    }
    CHECK(cartier_poly(poly({{{3}, 1}}), 3) == poly({{{1}, 1}}));
    CHECK(cartier_poly(poly({{{1}, 1}, {{2}, 1}}), 3).is_zero());
    CHECK(cartier_poly(poly({{{0}, 1}, {{3}, 2}, {{4}, 5}}), 3) == poly({{{0}, 1}, {{1}, 2}}));
  }

  TEST_CASE("cartier commutes with multiplication by p-th power substitutions") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> e(-4, 4), c(-3, 3);
    for (int trial = 0; trial < 30; ++trial) {
      IntPoly A(2), B(2);
      for (int i = 0; i < 6; ++i) A.add_term({e(rng), e(rng)}, BigInt(c(rng)));
      for (int i = 0; i < 4; ++i) B.add_term({e(rng), e(rng)}, BigInt(c(rng)));
      for (int p : {3, 5})
        CHECK(cartier_poly(A * frobenius_exponents(B, p), p) == cartier_poly(A, p) * B);
    }
  }

  TEST_CASE("newton polytope of a product is the Minkowski sum") {
    std::mt19937_64 rng(12);
    std::uniform_int_distribution<int> e(-3, 3), c(1, 4);
    for (int trial = 0; trial < 30; ++trial) {
      IntPoly f(2), g(2);
      for (int i = 0; i < 4; ++i) f.add_term({e(rng), e(rng)}, BigInt(c(rng)));
      for (int i = 0; i < 4; ++i) g.add_term({e(rng), e(rng)}, BigInt(c(rng)));
      // positive coefficients: no cancellation at the vertices of the sum
      std::vector<ExponentVector> sums;
      for (const auto& u : f.support())
        for (const auto& v : g.support()) sums.push_back(u + v);
      auto oracle = chain_hull(sums);
      Polytope P = newton_polytope(f * g);
      if (P.full_dimensional()) CHECK(sorted(P.vertices()) == oracle);
    }
  }

  TEST_CASE("polynomial text round trip") {
    IntPoly g = parse_int_poly("1,0 : 1; -1,0 : 1\n0,1 : 1; 0,-1 : 1");
    CHECK(g == hyperoctahedral2());
    CHECK(parse_int_poly(poly_to_text(g)) == g);
    CHECK_THROWS_AS(parse_int_poly("1,0 1"), ConfigError);
  }

  TEST_CASE("grading functional is positive on the tangent cone") {
    Polytope sq = newton_polytope(square_f());
    ExponentVector ell = grading_functional(sq, ExponentVector{0, 0});
    CHECK(ell == ExponentVector{1, 1});
    ExponentVector ell11 = grading_functional(sq, ExponentVector{1, 1});
    CHECK(ell11 == ExponentVector{-1, -1});
    CHECK_THROWS_AS(grading_functional(newton_polytope(hyperoctahedral2()), ExponentVector{0, 0}),
                    DomainError);
  }
}
