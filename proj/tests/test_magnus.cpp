#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dimlab/magnus.hpp"

using namespace dimlab;

namespace {

TruncSeries mono(int rank, int n, std::vector<int> letters, long c = 1) {
  TruncSeries s = series_const(rank, n, 0);
  Monomial m(letters.begin(), letters.end());
  s.coeff.emplace(m, c);
  return s;
}

FreeWord random_word(std::mt19937& rng, int rank, int len) {
  FreeWord w = word_identity(rank);
  for (int i = 0; i < len; ++i) {
    int g = 1 + int(rng() % rank);
    long e = long(rng() % 5) - 2;
    w = word_mul(w, word_gen(rank, g, e == 0 ? 1 : e));
  }
  return w;
}

}  // namespace

TEST_CASE("word arithmetic") {
  FreeWord x1 = word_gen(2, 1), x2 = word_gen(2, 2);
  CHECK(word_mul(x1, word_inv(x1)).is_identity());

  FreeWord c = word_comm(x1, x2);
  CHECK(c.syllables == std::vector<std::pair<int, long>>{{1, -1}, {2, -1}, {1, 1}, {2, 1}});

  CHECK(word_length(word_pow(c, 3)) == 12);
  CHECK(word_pow(c, 0).is_identity());
  CHECK(word_mul(word_pow(c, 3), word_pow(c, -3)).is_identity());
}

TEST_CASE("word parser") {
  FreeWord w = parse_word("[x1,x2]^2 (x1^2 x2)^-1", 2);
  FreeWord x1 = word_gen(2, 1), x2 = word_gen(2, 2);
  FreeWord expect = word_mul(word_pow(word_comm(x1, x2), 2),
                             word_inv(word_mul(word_pow(x1, 2), x2)));
  CHECK(w == expect);
  CHECK(parse_word("", 2).is_identity());
  CHECK(parse_word("x1 x1^-1", 2).is_identity());
  CHECK_THROWS_AS(parse_word("x3", 2), Error);
}

TEST_CASE("magnus expansion pinned values") {
  FreeWord x1 = word_gen(2, 1), x2 = word_gen(2, 2);
  CHECK(expand(x1, 2) ==
        series_add(series_const(2, 2, 1), mono(2, 2, {1})));

  TruncSeries c = expand(word_comm(x1, x2), 2);
  TruncSeries want = series_const(2, 2, 1);
  want = series_add(want, mono(2, 2, {1, 2}));
  want = series_sub(want, mono(2, 2, {2, 1}));
  CHECK(c == want);

  TruncSeries inv = expand(word_inv(word_gen(1, 1)), 3);
  TruncSeries w2 = series_const(1, 3, 1);
  w2 = series_sub(w2, mono(1, 3, {1}));
  w2 = series_add(w2, mono(1, 3, {1, 1}));
  w2 = series_sub(w2, mono(1, 3, {1, 1, 1}));
  CHECK(inv == w2);
}

TEST_CASE("expansion is a homomorphism into units") {
  std::mt19937 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    int rank = 1 + int(rng() % 3);
    int n = 1 + int(rng() % 4);
    FreeWord u = random_word(rng, rank, int(rng() % 6));
    FreeWord v = random_word(rng, rank, int(rng() % 6));
    CHECK(expand(word_mul(u, v), n) == series_mul(expand(u, n), expand(v, n)));
  }
}

TEST_CASE("series inverse matches word inverse") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    FreeWord u = random_word(rng, 2, 5);
    CHECK(series_inv(expand(u, 4)) == expand(word_inv(u), 4));
  }
}

TEST_CASE("hall basis counts match witt numbers") {
  HallBasis h2 = hall_basis(2, 4);
  CHECK(h2.stratum(1).size() == 2);
  CHECK(h2.stratum(2).size() == 1);
  CHECK(h2.stratum(3).size() == 2);
  CHECK(h2.stratum(4).size() == 3);

  CHECK(hall_basis(1, 2).stratum(2).empty());
  CHECK(hall_basis(3, 2).stratum(2).size() == 3);

  for (int rank = 1; rank <= 4; ++rank) {
    HallBasis h = hall_basis(rank, 4);
    for (int w = 1; w <= 4; ++w)
      CHECK(long(h.stratum(w).size()) == witt_number(rank, w));
  }
}

TEST_CASE("hall admissibility rejects repeated arguments") {
  HallBasis h = hall_basis(2, 4);
  for (int i : h.stratum(4)) CHECK(h.items[size_t(i)].left != h.items[size_t(i)].right);
  // weight-3 items are the two left-normed paper generators
  CHECK(commutator_str(h, h.stratum(3)[0]) == "[[x2,x1],x1]");
  CHECK(commutator_str(h, h.stratum(3)[1]) == "[[x2,x1],x2]");
}

TEST_CASE("lie elements") {
  HallBasis h = hall_basis(2, 3);
  int c21 = h.stratum(2)[0];
  TruncSeries l = lie_element(h, c21, 3);
  TruncSeries want = series_sub(mono(2, 3, {2, 1}), mono(2, 3, {1, 2}));
  CHECK(l == want);

  // [[x2,x1],x1] expands to the Lie bracket [A,x1] with A = x2x1 - x1x2
  int c211 = h.stratum(3)[0];
  TruncSeries a = lie_element(h, c21, 3);
  TruncSeries x1 = mono(2, 3, {1});
  TruncSeries bracket = series_sub(series_mul(a, x1), series_mul(x1, a));
  CHECK(lie_element(h, c211, 3) == bracket);

  // the degree-2 part of the word commutator [x1,x2]
  TruncSeries e = expand(word_comm(word_gen(2, 1), word_gen(2, 2)), 2);
  e.constant -= 1;
  CHECK(series_component(e, 2) ==
        series_sub(mono(2, 2, {1, 2}), mono(2, 2, {2, 1})));
}

TEST_CASE("weight strata have linearly independent lie elements") {
  for (int rank = 2; rank <= 3; ++rank) {
    HallBasis h = hall_basis(rank, 3);
    for (int w = 2; w <= 3; ++w) {
      MonomialModule mm(rank, w);
      std::vector<std::vector<Int>> cols;
      for (int item : h.stratum(w)) cols.push_back(mm.coords(lie_element(h, item, w)));
      IntMatrix b = IntMatrix::from_cols(mm.dim(), cols);
      CHECK(kernel_lattice(b).rank() == 0);
    }
  }
}

TEST_CASE("stratum faithfulness of the expansion") {
  std::mt19937 rng(77);
  HallBasis h = hall_basis(2, 4);
  for (int w = 2; w <= 4; ++w) {
    for (int trial = 0; trial < 10; ++trial) {
      // random product of weight-w basic commutator powers
      std::vector<Int> coeffs;
      FreeWord prod = word_identity(2);
      for (int item : h.stratum(w)) {
        long a = long(rng() % 7) - 3;
        coeffs.push_back(a);
        prod = word_mul(prod, word_pow(commutator_word(h, item), a));
      }
      TruncSeries e = expand(prod, w);
      e.constant -= 1;
      for (int d = 1; d < w; ++d) CHECK(series_component(e, d).is_zero());
      TruncSeries want = series_const(2, w, 0);
      int k = 0;
      for (int item : h.stratum(w))
        want = series_add(want, series_scale(lie_element(h, item, w), coeffs[size_t(k++)]));
      CHECK(series_component(e, w) == want);
    }
  }
}

TEST_CASE("dimension subgroup property of free groups, spot checks") {
  HallBasis h = hall_basis(2, 4);
  FreeWord w3 = commutator_word(h, h.stratum(3)[0]);
  CHECK(expand(w3, 2).is_one());   // weight 3 dies in F/gamma_3 coordinates
  CHECK(!expand(w3, 3).is_one());  // but not in F/gamma_4

  FreeWord w2 = commutator_word(h, h.stratum(2)[0]);
  CHECK(expand(w2, 1).is_one());
  CHECK(!expand(w2, 2).is_one());

  FreeWord w4 = word_comm(w3, word_gen(2, 1));  // weight 4
  CHECK(expand(w4, 3).is_one());
  CHECK(!expand(w4, 4).is_one());
}

TEST_CASE("left letter quotient") {
  TruncSeries s = series_add(mono(2, 2, {1, 2}), mono(2, 2, {2}));
  CHECK(left_letter_quotient(s, 1) == mono(2, 2, {2}));

  CHECK(left_letter_quotient(series_const(2, 2, 1), 1).is_zero());

  // reconstruction: s = constant + sum_i x_i * llq(s, i)
  std::mt19937 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    FreeWord u = random_word(rng, 3, 5);
    TruncSeries s2 = expand(u, 3);
    TruncSeries rebuilt = series_const(3, 3, s2.constant);
    for (int i = 1; i <= 3; ++i)
      rebuilt = series_add(rebuilt, series_mul(mono(3, 3, {i}), left_letter_quotient(s2, i)));
    CHECK(rebuilt == s2);
  }
}

TEST_CASE("monomial module indexing round-trips") {
  MonomialModule mm(3, 4);
  CHECK(mm.dim() == 3 + 9 + 27 + 81);
  for (int i = 0; i < mm.dim(); ++i) CHECK(mm.index(mm.monomial(i)) == i);

  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    FreeWord u = random_word(rng, 3, 4);
    TruncSeries s = expand(u, 4);
    s.constant -= 1;
    CHECK(mm.series(mm.coords(s)) == s);
  }
}
