#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "dimlab/abelian.hpp"

using namespace dimlab;

namespace {

IntMatrix mat(int r, int c, std::vector<long> v) {
  IntMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = v[size_t(i) * c + j];
  return m;
}

std::vector<Int> ints(std::vector<long> v) {
  return std::vector<Int>(v.begin(), v.end());
}

// Independent SNF oracle: d_k = gcd(k-minors)/gcd((k-1)-minors).
std::vector<Int> snf_by_minors(const IntMatrix& m) {
  int n = std::min(m.rows, m.cols);
  std::vector<Int> g(n + 1);
  g[0] = 1;
  for (int k = 1; k <= n; ++k) {
    Int gk = 0;
    std::vector<int> ri(k), ci(k);
    std::iota(ri.begin(), ri.end(), 0);
    for (;;) {
      std::iota(ci.begin(), ci.end(), 0);
      for (;;) {
        IntMatrix sub(k, k);
        for (int a = 0; a < k; ++a)
          for (int b = 0; b < k; ++b) sub(a, b) = m(ri[a], ci[b]);
        Int d = sub.det();
        mpz_gcd(gk.get_mpz_t(), gk.get_mpz_t(), d.get_mpz_t());
        int p = k - 1;
        while (p >= 0 && ci[p] == m.cols - k + p) --p;
        if (p < 0) break;
        ++ci[p];
        for (int q = p + 1; q < k; ++q) ci[q] = ci[q - 1] + 1;
      }
      int p = k - 1;
      while (p >= 0 && ri[p] == m.rows - k + p) --p;
      if (p < 0) break;
      ++ri[p];
      for (int q = p + 1; q < k; ++q) ri[q] = ri[q - 1] + 1;
    }
    g[k] = gk;
  }
  std::vector<Int> d(n);
  for (int k = 1; k <= n; ++k) {
    if (g[k] == 0)
      d[k - 1] = 0;
    else
      d[k - 1] = g[k] / g[k - 1];
  }
  return d;
}

IntMatrix random_matrix(std::mt19937& rng, int r, int c, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  IntMatrix m(r, c);
  for (auto& x : m.e) x = dist(rng);
  return m;
}

FgAbelian random_group(std::mt19937& rng, int max_gens, int max_factor) {
  std::uniform_int_distribution<int> ng(0, max_gens);
  int n = ng(rng);
  std::uniform_int_distribution<int> f(0, max_factor);
  std::vector<Int> inv;
  for (int i = 0; i < n; ++i) inv.push_back(f(rng));
  return FgAbelian::from_invariants(inv);
}

}  // namespace

TEST_CASE("smith normal form on pinned examples") {
  {
    auto s = smith_normal_form(mat(2, 2, {2, 0, 0, 3}));
    CHECK(s.d == mat(2, 2, {1, 0, 0, 6}));
  }
  {
    auto s = smith_normal_form(IntMatrix::identity(3));
    CHECK(s.d == IntMatrix::identity(3));
    CHECK(s.u == IntMatrix::identity(3));
    CHECK(s.v == IntMatrix::identity(3));
  }
  {
    auto s = smith_normal_form(mat(2, 2, {0, 2, 2, 0}));
    CHECK(s.d == mat(2, 2, {2, 0, 0, 2}));
  }
}

TEST_CASE("smith normal form properties vs minors oracle") {
  std::mt19937 rng(20240817);
  for (int trial = 0; trial < 60; ++trial) {
    int r = 1 + int(rng() % 4), c = 1 + int(rng() % 4);
    IntMatrix m = random_matrix(rng, r, c, -9, 9);
    auto s = smith_normal_form(m);
    CHECK(s.u * m * s.v == s.d);
    Int du = s.u.det(), dv = s.v.det();
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    CHECK(s.u * s.u_inv == IntMatrix::identity(r));
    CHECK(s.v * s.v_inv == IntMatrix::identity(c));
    int n = std::min(r, c);
    for (int i = 0; i + 1 < n; ++i) {
      if (s.d(i, i) == 0) {
        CHECK(s.d(i + 1, i + 1) == 0);
      } else {
        CHECK(s.d(i + 1, i + 1) % s.d(i, i) == 0);
      }
    }
    auto oracle = snf_by_minors(m);
    for (int i = 0; i < n; ++i) CHECK(s.d(i, i) == oracle[i]);
  }
}

TEST_CASE("lattice canonicalization") {
  Lattice l = lattice_canonicalize({ints({2, 0}), ints({0, 2}), ints({1, 1})}, 2);
  CHECK(l.rank() == 2);
  CHECK(l.basis.col(0) == ints({1, 1}));
  CHECK(l.basis.col(1) == ints({0, 2}));

  CHECK(lattice_canonicalize({}, 3) == Lattice::zero(3));
  CHECK(lattice_canonicalize({ints({1, 0}), ints({0, 1})}, 2) == Lattice::full(2));
}

TEST_CASE("lattice canonicalization idempotent and order-insensitive") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int ambient = 1 + int(rng() % 4);
    int nv = int(rng() % 6);
    std::vector<std::vector<Int>> vs;
    for (int i = 0; i < nv; ++i) {
      std::vector<Int> v(ambient);
      for (auto& x : v) x = int(rng() % 13) - 6;
      vs.push_back(v);
    }
    Lattice a = lattice_canonicalize(vs, ambient);
    std::shuffle(vs.begin(), vs.end(), rng);
    Lattice b = lattice_canonicalize(vs, ambient);
    CHECK(a == b);
    std::vector<std::vector<Int>> basis_vs;
    for (int j = 0; j < a.rank(); ++j) basis_vs.push_back(a.basis.col(j));
    CHECK(lattice_canonicalize(basis_vs, ambient) == a);
  }
}

TEST_CASE("lattice intersection") {
  Lattice two = lattice_canonicalize({ints({2, 0}), ints({0, 2})}, 2);
  Lattice three = lattice_canonicalize({ints({3, 0}), ints({0, 3})}, 2);
  Lattice six = lattice_canonicalize({ints({6, 0}), ints({0, 6})}, 2);
  CHECK(lattice_intersect(two, three) == six);
  CHECK(lattice_intersect(two, two) == two);

  Lattice d1 = lattice_canonicalize({ints({1, 1})}, 2);
  Lattice d2 = lattice_canonicalize({ints({1, -1})}, 2);
  CHECK(lattice_intersect(d1, d2) == Lattice::zero(2));
}

TEST_CASE("lattice quotient invariants") {
  Lattice z2 = Lattice::full(2);
  CHECK(lattice_quotient_invariants(
            z2, lattice_canonicalize({ints({4, 0}), ints({0, 2})}, 2)) ==
        ints({2, 4}));
  CHECK(lattice_quotient_invariants(z2, z2).empty());
  CHECK(lattice_quotient_invariants(
            z2, lattice_canonicalize({ints({2, 2}), ints({0, 4})}, 2)) ==
        ints({2, 4}));
  CHECK_THROWS_AS(lattice_quotient_invariants(
                      lattice_canonicalize({ints({2, 0}), ints({0, 2})}, 2),
                      Lattice::full(2)),
                  NotSublattice);
}

TEST_CASE("kernel and preimage lattices") {
  // kernel of (1 1) in Z^2
  Lattice k = kernel_lattice(mat(1, 2, {1, 1}));
  CHECK(k.rank() == 1);
  CHECK((k.basis.col(0) == ints({1, -1}) || k.basis.col(0) == ints({-1, 1})));

  // preimage of 3Z under x -> 2x is 3Z
  Lattice l3 = lattice_canonicalize({ints({3})}, 1);
  Lattice pre = preimage_lattice(mat(1, 1, {2}), l3);
  CHECK(pre == l3);
}

TEST_CASE("invariant factors of presentations") {
  FgAbelian a(2, mat(2, 2, {2, 0, 0, 3}));
  CHECK(a.invariant_factors() == ints({6}));
  CHECK(a.order() == 6);

  FgAbelian z = FgAbelian::free_of_rank(1);
  CHECK(z.invariant_factors() == ints({0}));
  CHECK(z.order() == 0);

  FgAbelian t = FgAbelian::from_invariants(ints({2, 4, 0}));
  CHECK(t.invariant_factors() == ints({2, 4, 0}));
  CHECK(invariants_str(t.invariant_factors()) == "2,4,0");
}

TEST_CASE("tensor products") {
  FgAbelian z4 = FgAbelian::cyclic(4), z6 = FgAbelian::cyclic(6);
  CHECK(ab_tensor(z4, z6).invariant_factors() == ints({2}));

  FgAbelian z = FgAbelian::free_of_rank(1);
  FgAbelian a = FgAbelian::from_invariants(ints({2, 6, 0}));
  CHECK(ab_iso(ab_tensor(z, a), a));

  FgAbelian b = FgAbelian::from_invariants(ints({2, 0}));
  CHECK(ab_tensor(b, FgAbelian::cyclic(4)).invariant_factors() == ints({2, 4}));
}

TEST_CASE("tor") {
  CHECK(ab_tor(FgAbelian::cyclic(4), FgAbelian::cyclic(6)).invariant_factors() ==
        ints({2}));
  FgAbelian a = FgAbelian::from_invariants(ints({3, 9, 0}));
  CHECK(ab_tor(FgAbelian::free_of_rank(2), a).is_trivial());
  FgAbelian v = FgAbelian::from_invariants(ints({2, 2}));
  CHECK(ab_tor(v, v).invariant_factors() == ints({2, 2, 2, 2}));
}

TEST_CASE("tensor and tor are symmetric and match the cyclic rule") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    FgAbelian a = random_group(rng, 3, 12), b = random_group(rng, 3, 12);
    CHECK(ab_iso(ab_tensor(a, b), ab_tensor(b, a)));
    CHECK(ab_iso(ab_tor(a, b), ab_tor(b, a)));
  }
  for (long m : {2, 3, 4, 6, 9})
    for (long n : {2, 3, 4, 6, 9}) {
      Int g;
      Int mm = m, nn = n;
      mpz_gcd(g.get_mpz_t(), mm.get_mpz_t(), nn.get_mpz_t());
      auto inv = ab_tor(FgAbelian::cyclic(m), FgAbelian::cyclic(n)).invariant_factors();
      if (g == 1) {
        CHECK(inv.empty());
      } else {
        CHECK(inv == std::vector<Int>{g});
      }
    }
}

TEST_CASE("kernel and cokernel of maps") {
  {
    AbMap f{FgAbelian::free_of_rank(1), FgAbelian::free_of_rank(1), mat(1, 1, {2})};
    auto kc = map_kernel_cokernel(f);
    CHECK(kc.kernel.is_trivial());
    CHECK(kc.cokernel.invariant_factors() == ints({2}));
  }
  {
    FgAbelian z6 = FgAbelian::cyclic(6);
    auto kc = map_kernel_cokernel(AbMap::zero(z6, z6));
    CHECK(kc.kernel.invariant_factors() == ints({6}));
    CHECK(kc.cokernel.invariant_factors() == ints({6}));
  }
  {
    // (a,b) in Z/2 + Z/4 -> 2b in Z/4
    FgAbelian src = FgAbelian::from_invariants(ints({2, 4}));
    FgAbelian dst = FgAbelian::cyclic(4);
    AbMap f{src, dst, mat(1, 2, {0, 2})};
    auto kc = map_kernel_cokernel(f);

    // oracle: enumerate the 8 elements
    int kernel_count = 0;
    bool all_exponent_two = true;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 4; ++b)
        if ((2 * b) % 4 == 0) {
          ++kernel_count;
          if ((2 * (a + a)) % 2 != 0 || (2 * b) % 4 != 0) all_exponent_two = false;
        }
    CHECK(kernel_count == 4);
    CHECK(all_exponent_two);
    CHECK(kc.kernel.invariant_factors() == ints({2, 2}));
    CHECK(kc.cokernel.invariant_factors() == ints({2}));
  }
}

TEST_CASE("rank additivity on torsion-free instances") {
  std::mt19937 rng(5150);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + int(rng() % 3), m = 1 + int(rng() % 3);
    AbMap f{FgAbelian::free_of_rank(n), FgAbelian::free_of_rank(m),
            random_matrix(rng, m, n, -4, 4)};
    auto kc = map_kernel_cokernel(f);
    auto rank_of = [](const FgAbelian& g) {
      int r = 0;
      for (const auto& d : g.invariant_factors())
        if (d == 0) ++r;
      return r;
    };
    int image_rank = smith_normal_form(f.matrix).rank;
    CHECK(rank_of(f.source) == rank_of(kc.kernel) + image_rank);
  }
}

TEST_CASE("complex exactness") {
  FgAbelian z = FgAbelian::free_of_rank(1), z2 = FgAbelian::cyclic(2);
  AbMap two{z, z, mat(1, 1, {2})};
  AbMap proj{z, z2, mat(1, 1, {1})};
  AbComplex c{{z, z, z2}, {two, proj}};
  c.validate();
  for (int i = 0; i < 3; ++i) CHECK(c.is_exact_at(i));

  AbMap zero_map = AbMap::zero(z, z);
  AbComplex bad{{z, z}, {zero_map}};
  CHECK(!bad.is_exact_at(0));
  CHECK(!bad.is_exact_at(1));
}

TEST_CASE("minimize is an isomorphism pair") {
  std::mt19937 rng(321);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + int(rng() % 4), k = int(rng() % 5);
    FgAbelian a(n, random_matrix(rng, n, k, -6, 6));
    auto m = minimize(a);
    m.to_min.require_well_defined();
    m.from_min.require_well_defined();
    CHECK(ab_iso(a, m.group));
    CHECK(maps_equal(compose(m.to_min, m.from_min), AbMap::identity(m.group)));
    CHECK(maps_equal(compose(m.from_min, m.to_min), AbMap::identity(a)));
  }
}

TEST_CASE("subquotient presentation") {
  Lattice z = Lattice::full(2);
  Lattice b = lattice_canonicalize({ints({2, 0}), ints({0, 4})}, 2);
  CHECK(subquotient(z, b).invariant_factors() == ints({2, 4}));
}

TEST_CASE("map well-definedness detects bad matrices") {
  FgAbelian z2 = FgAbelian::cyclic(2), z4 = FgAbelian::cyclic(4);
  AbMap bad{z2, z4, mat(1, 1, {1})};  // 1 maps 2*gen to 2 != 0 in Z/4
  CHECK(!bad.well_defined());
  AbMap good{z2, z4, mat(1, 1, {2})};
  CHECK(good.well_defined());
  CHECK_THROWS_AS(map_kernel_cokernel(bad), IllFormedMap);
}
