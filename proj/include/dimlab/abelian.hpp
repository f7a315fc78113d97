#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dimlab {

using Int = mpz_class;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : Error { using Error::Error; };
struct NotSublattice : Error { using Error::Error; };
struct IllFormedMap : Error { using Error::Error; };
struct NotAComplex : Error { using Error::Error; };
struct NotSubgroup : Error { using Error::Error; };
struct SectionNotAbelian : Error { using Error::Error; };
struct NotAGroup : Error { using Error::Error; };
struct ResourceBound : Error { using Error::Error; };
struct PreconditionViolated : Error { using Error::Error; };
struct UnsupportedWindow : Error { using Error::Error; };

// Dense arbitrary-precision integer matrix, row-major.
struct IntMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Int> e;

  IntMatrix() = default;
  IntMatrix(int r, int c) : rows(r), cols(c), e(size_t(r) * size_t(c)) {}

  Int& operator()(int i, int j) { return e[size_t(i) * cols + j]; }
  const Int& operator()(int i, int j) const { return e[size_t(i) * cols + j]; }

  bool operator==(const IntMatrix&) const = default;

  static IntMatrix identity(int n);
  static IntMatrix zero(int r, int c) { return IntMatrix(r, c); }

  IntMatrix operator*(const IntMatrix& o) const;
  IntMatrix operator+(const IntMatrix& o) const;
  IntMatrix operator-(const IntMatrix& o) const;
  IntMatrix transpose() const;
  bool is_zero() const;

  std::vector<Int> col(int j) const;
  std::vector<Int> apply(const std::vector<Int>& v) const;  // M*v
  static IntMatrix from_cols(int rows, const std::vector<std::vector<Int>>& cs);
  static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b);
  Int det() const;  // square only, by fraction-free elimination on a copy
  std::string str() const;
};

struct SmithResult {
  IntMatrix u, d, v;       // u*m*v == d
  IntMatrix u_inv, v_inv;  // tracked alongside
  int rank = 0;            // number of nonzero diagonal entries
};

// U*M*V = D, U and V unimodular, D diagonal with d1 | d2 | ..., entries >= 0.
SmithResult smith_normal_form(const IntMatrix& m);

// Sublattice of Z^ambient_dim. Basis columns in canonical column HNF:
// pivot rows strictly increasing, pivots positive, entries of earlier
// columns at a pivot row reduced into [0, pivot).
struct Lattice {
  int ambient_dim = 0;
  IntMatrix basis;  // ambient_dim x rank

  int rank() const { return basis.cols; }
  bool operator==(const Lattice&) const = default;

  static Lattice zero(int ambient);
  static Lattice full(int ambient);

  bool contains(const std::vector<Int>& v) const;
  bool contains(const Lattice& other) const;
  // solve basis * x = v exactly
  std::optional<std::vector<Int>> coords(const std::vector<Int>& v) const;
};

Lattice lattice_canonicalize(const std::vector<std::vector<Int>>& vectors,
                             int ambient_dim);
Lattice lattice_from_cols(const IntMatrix& m);
Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_intersect(const Lattice& a, const Lattice& b);
// invariant factors of big/small; throws NotSublattice
std::vector<Int> lattice_quotient_invariants(const Lattice& big,
                                             const Lattice& small);

// exact integer solution of M x = v, if one exists
std::optional<std::vector<Int>> solve_integer(const IntMatrix& m,
                                              const std::vector<Int>& v);
std::optional<std::vector<Int>> solve_integer(const SmithResult& s,
                                              const std::vector<Int>& v);

// {x : M x = 0}
Lattice kernel_lattice(const IntMatrix& m);
// {x : M x in L}, L in Z^m.rows
Lattice preimage_lattice(const IntMatrix& m, const Lattice& l);

// Finitely generated abelian group presented as coker(relations).
struct FgAbelian {
  int n_gens = 0;
  IntMatrix relations;  // n_gens x k

  FgAbelian() = default;
  FgAbelian(int n, IntMatrix rel) : n_gens(n), relations(std::move(rel)) {}

  static FgAbelian free_of_rank(int n);
  static FgAbelian cyclic(const Int& m);
  static FgAbelian from_invariants(const std::vector<Int>& inv);
  static FgAbelian direct_sum(const FgAbelian& a, const FgAbelian& b);

  std::vector<Int> invariant_factors() const;
  bool is_trivial() const { return invariant_factors().empty(); }
  Int order() const;  // 0 when infinite
  Lattice relation_lattice() const;
};

bool ab_iso(const FgAbelian& a, const FgAbelian& b);
std::string invariants_str(const std::vector<Int>& inv);

// Group homomorphism between presented groups, as a matrix on generators.
struct AbMap {
  FgAbelian source, target;
  IntMatrix matrix;  // target.n_gens x source.n_gens

  bool well_defined() const;
  void require_well_defined(const char* what = "AbMap") const;

  static AbMap identity(const FgAbelian& a);
  static AbMap zero(const FgAbelian& src, const FgAbelian& dst);
};

AbMap compose(const AbMap& g, const AbMap& f);
// equal as maps of presented groups (same presentations assumed)
bool maps_equal(const AbMap& f, const AbMap& g);

struct KernelCokernel {
  FgAbelian kernel;
  AbMap inclusion;
  FgAbelian cokernel;
  AbMap projection;
};
KernelCokernel map_kernel_cokernel(const AbMap& f);

// Presents Z/B for lattices B <= Z in the same ambient space:
// generators = basis of Z, relations = coordinates of B's basis.
FgAbelian subquotient(const Lattice& z, const Lattice& b);

// homology at the joint of f then g; throws NotAComplex if g∘f != 0
std::vector<Int> homology_invariants(const AbMap& f, const AbMap& g);

struct AbComplex {
  std::vector<FgAbelian> groups;
  std::vector<AbMap> maps;  // maps[i] : groups[i] -> groups[i+1]

  void validate() const;  // endpoints line up, composites are complexes
  // position 0..groups.size()-1; ends use synthetic zero maps
  bool is_exact_at(int position) const;
  bool is_exact() const;
};

FgAbelian ab_tensor(const FgAbelian& a, const FgAbelian& b);
AbMap ab_tensor_map(const AbMap& f, const AbMap& g);
FgAbelian ab_tor(const FgAbelian& a, const FgAbelian& b);

// Two-term free resolution 0 -> Z^r -d-> Z^n -> A -> 0 with d the canonical
// HNF basis of the relation lattice.
IntMatrix free_resolution_map(const FgAbelian& a);

struct Minimized {
  FgAbelian group;  // diagonal presentation, units dropped
  AbMap to_min;     // A -> group
  AbMap from_min;   // group -> A
};
Minimized minimize(const FgAbelian& a);

}  // namespace dimlab
