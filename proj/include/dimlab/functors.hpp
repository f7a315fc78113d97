#pragma once

#include "dimlab/abelian.hpp"
#include "dimlab/report.hpp"

namespace dimlab {

enum class QuadTag { TENSOR2, SP2, LAMBDA2, TILDE2 };

std::string to_string(QuadTag tag);
QuadTag quad_tag_from_string(const std::string& s);

// Quadratic functor on a presented group: n^2 generator pairs with induced
// relations plus the defining symmetry relators.
FgAbelian quad_apply(QuadTag tag, const FgAbelian& a);
AbMap quad_apply_map(QuadTag tag, const AbMap& f);

enum class DerivedPath { CLOSED_FORM, KOSZUL, DOLD_KAN };
std::string to_string(DerivedPath p);

struct DerivedResult {
  FgAbelian value;
  DerivedPath path = DerivedPath::DOLD_KAN;
  std::vector<std::string> witnesses;
};

// Dold-Kan model of the two-term complex d : Z^n1 -> Z^n0, simplicial
// levels 0..3. Level n carries one copy of C0 and n copies of C1.
struct DoldKan {
  IntMatrix d;
  int n0 = 0, n1 = 0;

  explicit DoldKan(IntMatrix d_) : d(std::move(d_)), n0(d.rows), n1(d.cols) {}
  int level_rank(int n) const { return n0 + n * n1; }
  IntMatrix face(int n, int i) const;        // K_n -> K_{n-1}
  IntMatrix degeneracy(int n, int i) const;  // K_n -> K_{n+1}
};

// pi_1 of the quadratic functor applied degreewise, by Moore normalization.
struct DerivedData {
  QuadTag tag = QuadTag::SP2;
  Minimized min;        // minimization of the input group
  IntMatrix res;        // resolution map of the minimized group
  Lattice cycles;       // in the generator space of F(K_1)
  Lattice boundaries;
  FgAbelian value;      // subquotient presentation of pi_1
};

DerivedData derived_l1_data(QuadTag tag, const FgAbelian& a);
DerivedResult derived_l1(QuadTag tag, const FgAbelian& a);
// induced map on pi_1 along f, between precomputed ends
AbMap derived_l1_map(const AbMap& f, const DerivedData& da, const DerivedData& db);

// L1SP^2 by the cyclic-decomposition closed form.
DerivedResult l1sp2_closed(const FgAbelian& a);

struct KoszulResult {
  AbComplex complex;  // 0 -> l1 -> Lambda^2(I)/Lambda^2(J) -> I(x)I/J -> SP^2(I/J) -> 0
  FgAbelian l1;
  FgAbelian sp2_of_quotient;
  std::vector<std::string> witnesses;
};
// Koszul-route L1SP^2(I/J) for free I = Z^i_rank and a sublattice J.
KoszulResult koszul_lsp2(int i_rank, const Lattice& j);

// Exactness of the natural sequences relating the four quadratic functors
// and their first derived functors, for a single input group.
CheckReport natural_sequences_check(const FgAbelian& a);

}  // namespace dimlab
