#pragma once

#include <memory>
#include <optional>

#include "dimlab/magnus.hpp"

namespace dimlab {

// Free nilpotent quotient F/gamma_{cls+1}(F) in truncated-series coordinates.
// Elements compare equal iff their expansions at degree cls agree, which is
// faithful by Magnus' theorem.
struct NilContext {
  int rank = 0;
  int cls = 0;  // nilpotency class, <= 4
  HallBasis hall;
  MonomialModule module;
  std::vector<IntMatrix> lie_basis;        // [w]: rank^w x witt_w lie columns
  std::vector<SmithResult> lie_basis_snf;  // cached solvers per weight

  NilContext(int rank_, int cls_);

  // degree-w block coordinates of a series' homogeneous component
  std::vector<Int> block_coords(const TruncSeries& s, int w) const;
  // coordinates in the weight-w Hall stratum; the component must be Lie
  std::vector<Int> lie_coords(int w, const std::vector<Int>& block) const;
  bool same_shape(const NilContext& o) const {
    return rank == o.rank && cls == o.cls;
  }
};

struct NilElement {
  const NilContext* ctx = nullptr;
  TruncSeries series;  // constant term 1
  FreeWord word;       // witness

  bool is_identity() const { return series.is_one(); }
  // lowest nonzero degree of series - 1; cls+1 for the identity
  int leading_weight() const { return series.lowest_degree(); }
  bool operator==(const NilElement& o) const { return series == o.series; }
};

NilElement nil_embed(const NilContext& ctx, const FreeWord& w);
NilElement nil_mul(const NilElement& a, const NilElement& b);
NilElement nil_inv(const NilElement& a);
NilElement nil_pow(const NilElement& a, long n);
NilElement nil_comm(const NilElement& a, const NilElement& b);

// Canonical generating sequence: per-weight leading Lie coordinate vectors
// form HNF pivot rows, tails reduced against deeper strata. Two subgroups are
// equal iff their canonical sequences are identical.
struct NilSubgroup {
  const NilContext* ctx = nullptr;
  std::vector<NilElement> gens;  // weight-ascending canonical order

  bool contains(const NilElement& g) const;
  bool contains_subgroup(const NilSubgroup& t) const;
  // exponents of the canonical factorization g = prod gens[i]^{e_i}
  std::optional<std::vector<Int>> factorize(const NilElement& g) const;
  bool operator==(const NilSubgroup& o) const;
  bool is_trivial() const { return gens.empty(); }
};

NilSubgroup subgroup_close(const NilContext& ctx,
                           const std::vector<NilElement>& gens);
NilSubgroup normal_closure(const NilContext& ctx,
                           const std::vector<NilElement>& gens);
NilSubgroup commutator_subgroup(const NilSubgroup& s, const NilSubgroup& t);
NilSubgroup meet_gamma(const NilSubgroup& s, int k);
NilSubgroup subgroup_join(const NilSubgroup& s, const NilSubgroup& t);
NilSubgroup full_group(const NilContext& ctx);
// image of gamma_k(F), generated by the basic commutators of weight >= k
NilSubgroup gamma_subgroup(const NilContext& ctx, int k);

// Abelian section S/T presented on S's canonical generators.
struct Section {
  FgAbelian group;
  std::vector<NilElement> witnesses;  // generator i of `group` is witnesses[i]
};
// requires T <= S and [S,S] <= T
Section section_invariants(const NilSubgroup& s, const NilSubgroup& t);

// Homomorphism induced by x_i -> images[i-1], applied through word witnesses.
struct NilHom {
  const NilContext* src = nullptr;
  const NilContext* dst = nullptr;
  std::vector<FreeWord> images;

  NilElement apply(const NilElement& g) const;
};
NilHom induced_hom(const NilContext& src, const NilContext& dst,
                   std::vector<FreeWord> images);

}  // namespace dimlab
