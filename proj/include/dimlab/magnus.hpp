#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "dimlab/abelian.hpp"

namespace dimlab {

// Freely reduced word in a free group of given rank. Commutator convention
// [u,v] = u^-1 v^-1 u v throughout.
struct FreeWord {
  int rank = 0;
  std::vector<std::pair<int, long>> syllables;  // (generator 1..rank, exponent)

  bool is_identity() const { return syllables.empty(); }
  bool operator==(const FreeWord&) const = default;
};

FreeWord word_identity(int rank);
FreeWord word_gen(int rank, int i, long exp = 1);
FreeWord word_mul(const FreeWord& u, const FreeWord& v);
FreeWord word_inv(const FreeWord& u);
FreeWord word_pow(const FreeWord& u, long n);
FreeWord word_comm(const FreeWord& u, const FreeWord& v);
// number of letters after free reduction
long word_length(const FreeWord& u);
std::string word_str(const FreeWord& u);
// grammar: `x3` generators, `^-2` exponents, juxtaposition, `[u,v]`, parens
FreeWord parse_word(const std::string& text, int rank);
// substitute images[i-1] for x_i
FreeWord word_substitute(const FreeWord& u, const std::vector<FreeWord>& images);

using Monomial = std::vector<unsigned char>;  // letters 1..rank, length >= 1

// Element of the free associative ring on rank letters, truncated above
// degree max_degree.
struct TruncSeries {
  int rank = 0;
  int max_degree = 0;
  Int constant;
  std::map<Monomial, Int> coeff;  // zero coefficients never stored

  bool operator==(const TruncSeries&) const = default;
  bool is_one() const { return constant == 1 && coeff.empty(); }
  bool is_zero() const { return constant == 0 && coeff.empty(); }
  int lowest_degree() const;  // of series - constant; max_degree+1 if none
};

TruncSeries series_const(int rank, int max_degree, const Int& c);
TruncSeries series_add(const TruncSeries& a, const TruncSeries& b);
TruncSeries series_sub(const TruncSeries& a, const TruncSeries& b);
TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b);
TruncSeries series_scale(const TruncSeries& a, const Int& c);
// multiplicative inverse of a unit (constant term +-1)
TruncSeries series_inv(const TruncSeries& a);
// the degree-d homogeneous part
TruncSeries series_component(const TruncSeries& a, int degree);
std::string series_str(const TruncSeries& a);

// Magnus expansion x_i -> 1 + x_i, truncated at degree N.
TruncSeries expand(const FreeWord& w, int max_degree);

// sum of monomials of s beginning with x_i, with that letter stripped
TruncSeries left_letter_quotient(const TruncSeries& s, int i);

// Flat coordinates over the monomial module of degrees 1..N (constant term
// dropped): degree blocks in increasing order, base-rank order inside.
struct MonomialModule {
  int rank = 0;
  int max_degree = 0;
  std::vector<int> degree_offset;  // degree_offset[d] = start of degree-d block

  MonomialModule() = default;
  MonomialModule(int r, int n);
  int dim() const;
  int index(const Monomial& m) const;
  Monomial monomial(int idx) const;
  std::vector<Int> coords(const TruncSeries& s) const;  // requires constant 0
  TruncSeries series(const std::vector<Int>& v) const;
};

struct BasicCommutator {
  int weight = 0;
  int gen = 0;  // leaf generator when weight == 1
  int left = -1, right = -1;  // Hall-table indices when weight > 1
};

// Hall basis of basic commutators up to max_weight, in the canonical order
// x1 < x2 < ... , then by weight and construction.
struct HallBasis {
  int rank = 0;
  int max_weight = 0;
  std::vector<BasicCommutator> items;
  std::vector<std::vector<int>> by_weight;  // [w] = item indices of weight w

  const std::vector<int>& stratum(int w) const { return by_weight[w]; }
};

HallBasis hall_basis(int rank, int max_weight);
FreeWord commutator_word(const HallBasis& h, int item);
std::string commutator_str(const HallBasis& h, int item);
// per-weight counts from the Witt formula
long witt_number(int rank, int weight);

// degree-weight(c) homogeneous component of expand(c) - 1
TruncSeries lie_element(const HallBasis& h, int item, int max_degree);

}  // namespace dimlab
