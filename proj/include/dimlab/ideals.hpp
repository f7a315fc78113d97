#pragma once

#include <map>

#include "dimlab/nilpotent.hpp"

namespace dimlab {

// Expression tree over two-sided ideals of the truncated free group ring.
struct IdealExpr {
  enum class Kind { F_AUG, REL, DELTA, PRODUCT, SUM, INTERSECT, POWER };
  Kind kind = Kind::F_AUG;
  std::string delta_name;
  std::vector<IdealExpr> children;
  int exponent = 0;  // POWER only, >= 1

  static IdealExpr f_aug();
  static IdealExpr rel();
  static IdealExpr delta(std::string name);
  static IdealExpr product(std::vector<IdealExpr> xs);
  static IdealExpr sum(std::vector<IdealExpr> xs);
  static IdealExpr intersect(std::vector<IdealExpr> xs);
  static IdealExpr power(IdealExpr x, int k);
};

// grammar: atoms `f`, `r`, `delta(name)`; operators `*`, `+`, `^k`, `&`
IdealExpr parse_ideal(const std::string& text);
std::string ideal_str(const IdealExpr& e);

struct TruncIdealLattice {
  int rank = 0;
  int max_degree = 0;
  Lattice lattice;  // coordinates over MonomialModule(rank, max_degree)

  bool operator==(const TruncIdealLattice&) const = default;
  bool contains(const TruncIdealLattice& other) const {
    return lattice.contains(other.lattice);
  }
};

// atom bindings for REL and DELTA
struct IdealEnv {
  std::vector<FreeWord> relators;
  std::map<std::string, const NilSubgroup*> subgroups;
};

TruncIdealLattice ideal_lattice(const IdealExpr& expr, const IdealEnv& env,
                                int rank, int max_degree);
// w - 1 in the lattice, i.e. w in 1 + expr + f^{max_degree+1}
bool ideal_membership(const FreeWord& w, const IdealExpr& expr,
                      const IdealEnv& env, int rank, int max_degree);
// monomial reversal, the truncated shadow of the inversion anti-automorphism
TruncIdealLattice ideal_reverse(const TruncIdealLattice& l);

// D(n, a) = F meet (1 + a + f^n) as a canonical subgroup of F/gamma_n.
// Supported window: a inside f^{k_low} with 2*k_low >= n; the context class
// must be n-1.
NilSubgroup gen_dim_subgroup(const IdealExpr& expr, const IdealEnv& env,
                             const NilContext& ctx, int n, int k_low);

}  // namespace dimlab
