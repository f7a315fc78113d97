#include "dimlab/abelian.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace dimlab {

IntMatrix IntMatrix::identity(int n) {
  IntMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
  if (cols != o.rows) throw DimensionMismatch("matrix product shape");
  IntMatrix r(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      const Int& a = (*this)(i, k);
      if (a == 0) continue;
      for (int j = 0; j < o.cols; ++j) {
        const Int& b = o(k, j);
        if (b != 0) r(i, j) += a * b;
      }
    }
  return r;
}

IntMatrix IntMatrix::operator+(const IntMatrix& o) const {
  if (rows != o.rows || cols != o.cols) throw DimensionMismatch("matrix sum shape");
  IntMatrix r(rows, cols);
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] + o.e[i];
  return r;
}

IntMatrix IntMatrix::operator-(const IntMatrix& o) const {
  if (rows != o.rows || cols != o.cols) throw DimensionMismatch("matrix diff shape");
  IntMatrix r(rows, cols);
  for (size_t i = 0; i < e.size(); ++i) r.e[i] = e[i] - o.e[i];
  return r;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix r(cols, rows);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) r(j, i) = (*this)(i, j);
  return r;
}

bool IntMatrix::is_zero() const {
  for (const auto& x : e)
    if (x != 0) return false;
  return true;
}

std::vector<Int> IntMatrix::col(int j) const {
  std::vector<Int> v(rows);
  for (int i = 0; i < rows; ++i) v[i] = (*this)(i, j);
  return v;
}

std::vector<Int> IntMatrix::apply(const std::vector<Int>& v) const {
  if (int(v.size()) != cols) throw DimensionMismatch("matrix apply shape");
  std::vector<Int> r(rows);
  for (int i = 0; i < rows; ++i) {
    Int s = 0;
    for (int j = 0; j < cols; ++j)
      if ((*this)(i, j) != 0 && v[j] != 0) s += (*this)(i, j) * v[j];
    r[i] = s;
  }
  return r;
}

IntMatrix IntMatrix::from_cols(int rows, const std::vector<std::vector<Int>>& cs) {
  IntMatrix m(rows, int(cs.size()));
  for (int j = 0; j < int(cs.size()); ++j) {
    if (int(cs[j].size()) != rows) throw DimensionMismatch("from_cols shape");
    for (int i = 0; i < rows; ++i) m(i, j) = cs[j][i];
  }
  return m;
}

IntMatrix IntMatrix::hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows != b.rows) throw DimensionMismatch("hstack shape");
  IntMatrix m(a.rows, a.cols + b.cols);
  for (int i = 0; i < a.rows; ++i) {
    for (int j = 0; j < a.cols; ++j) m(i, j) = a(i, j);
    for (int j = 0; j < b.cols; ++j) m(i, a.cols + j) = b(i, j);
  }
  return m;
}

Int IntMatrix::det() const {
  if (rows != cols) throw DimensionMismatch("det of non-square");
  int n = rows;
  if (n == 0) return 1;
  // Bareiss fraction-free elimination
  IntMatrix a = *this;
  Int sign = 1, prev = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int p = -1;
      for (int i = k + 1; i < n; ++i)
        if (a(i, k) != 0) { p = i; break; }
      if (p < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j) {
        Int t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::string IntMatrix::str() const {
  std::ostringstream os;
  for (int i = 0; i < rows; ++i) {
    os << (i == 0 ? "[" : " ");
    for (int j = 0; j < cols; ++j) os << (*this)(i, j) << (j + 1 < cols ? " " : "");
    os << (i + 1 < rows ? ";\n" : "]");
  }
  return os.str();
}

namespace {

using Rows = std::vector<std::vector<Int>>;

void row_sub(std::vector<Int>& a, const Int& q, const std::vector<Int>& b) {
  if (q == 0) return;
  for (size_t j = 0; j < a.size(); ++j)
    if (b[j] != 0) a[j] -= q * b[j];
}

void row_neg(std::vector<Int>& a) {
  for (auto& x : a) x = -x;
}

// In-place row Hermite normal form. Companion rows in u get the same row
// operations. Returns pivot column per echelon row; zero rows sink to the
// bottom and are kept (their u-rows span the left kernel).
std::vector<int> row_hnf(Rows& rows, Rows* u = nullptr) {
  std::vector<int> pivots;
  if (rows.empty()) return pivots;
  int ambient = int(rows[0].size());
  int r = 0;
  auto do_swap = [&](int a, int b) {
    if (a == b) return;
    std::swap(rows[a], rows[b]);
    if (u) std::swap((*u)[a], (*u)[b]);
  };
  for (int c = 0; c < ambient && r < int(rows.size()); ++c) {
    // shrink column c below r to a single entry
    for (;;) {
      int best = -1;
      for (int i = r; i < int(rows.size()); ++i)
        if (rows[i][c] != 0 &&
            (best < 0 ||
             mpz_cmpabs(rows[i][c].get_mpz_t(), rows[best][c].get_mpz_t()) < 0))
          best = i;
      if (best < 0) break;
      do_swap(r, best);
      bool clean = true;
      for (int i = r + 1; i < int(rows.size()); ++i) {
        if (rows[i][c] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
        row_sub(rows[i], q, rows[r]);
        if (u) row_sub((*u)[i], q, (*u)[r]);
        if (rows[i][c] != 0) clean = false;
      }
      if (clean) break;
    }
    if (rows[r][c] == 0) continue;
    if (rows[r][c] < 0) {
      row_neg(rows[r]);
      if (u) row_neg((*u)[r]);
    }
    for (int i = 0; i < r; ++i) {
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
      row_sub(rows[i], q, rows[r]);
      if (u) row_sub((*u)[i], q, (*u)[r]);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

bool row_is_zero(const std::vector<Int>& v) {
  return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

Lattice lattice_from_hnf_rows(Rows rows, int ambient) {
  rows.erase(std::remove_if(rows.begin(), rows.end(), row_is_zero), rows.end());
  Lattice l;
  l.ambient_dim = ambient;
  l.basis = IntMatrix(ambient, int(rows.size()));
  for (int j = 0; j < int(rows.size()); ++j)
    for (int i = 0; i < ambient; ++i) l.basis(i, j) = rows[j][i];
  return l;
}

}  // namespace

Lattice lattice_canonicalize(const std::vector<std::vector<Int>>& vectors,
                             int ambient_dim) {
  Rows rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (int(v.size()) != ambient_dim)
      throw DimensionMismatch("lattice vector length != ambient_dim");
    rows.push_back(v);
  }
  row_hnf(rows);
  return lattice_from_hnf_rows(std::move(rows), ambient_dim);
}

Lattice lattice_from_cols(const IntMatrix& m) {
  std::vector<std::vector<Int>> vs;
  vs.reserve(m.cols);
  for (int j = 0; j < m.cols; ++j) vs.push_back(m.col(j));
  return lattice_canonicalize(vs, m.rows);
}

Lattice Lattice::zero(int ambient) {
  Lattice l;
  l.ambient_dim = ambient;
  l.basis = IntMatrix(ambient, 0);
  return l;
}

Lattice Lattice::full(int ambient) {
  Lattice l;
  l.ambient_dim = ambient;
  l.basis = IntMatrix::identity(ambient);
  return l;
}

std::optional<std::vector<Int>> Lattice::coords(const std::vector<Int>& v) const {
  if (int(v.size()) != ambient_dim)
    throw DimensionMismatch("coords vector length != ambient_dim");
  std::vector<Int> w = v, x(rank());
  for (int k = 0; k < rank(); ++k) {
    // pivot row of column k = first nonzero entry
    int p = -1;
    for (int i = 0; i < ambient_dim; ++i)
      if (basis(i, k) != 0) { p = i; break; }
    assert(p >= 0);
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), w[p].get_mpz_t(), basis(p, k).get_mpz_t());
    if (r != 0) return std::nullopt;
    x[k] = q;
    if (q != 0)
      for (int i = p; i < ambient_dim; ++i)
        if (basis(i, k) != 0) w[i] -= q * basis(i, k);
  }
  for (const auto& t : w)
    if (t != 0) return std::nullopt;
  return x;
}

bool Lattice::contains(const std::vector<Int>& v) const {
  return coords(v).has_value();
}

bool Lattice::contains(const Lattice& other) const {
  if (ambient_dim != other.ambient_dim)
    throw DimensionMismatch("lattice containment: ambient mismatch");
  for (int j = 0; j < other.rank(); ++j)
    if (!contains(other.basis.col(j))) return false;
  return true;
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  if (a.ambient_dim != b.ambient_dim)
    throw DimensionMismatch("lattice sum: ambient mismatch");
  std::vector<std::vector<Int>> vs;
  for (int j = 0; j < a.rank(); ++j) vs.push_back(a.basis.col(j));
  for (int j = 0; j < b.rank(); ++j) vs.push_back(b.basis.col(j));
  return lattice_canonicalize(vs, a.ambient_dim);
}

std::optional<std::vector<Int>> solve_integer(const SmithResult& s,
                                              const std::vector<Int>& v) {
  // m = u_inv d v_inv, so m x = v iff d (v_inv x) = u v
  std::vector<Int> y = s.u.apply(v);
  int rows = s.d.rows, cols = s.d.cols;
  std::vector<Int> x0;
  x0.resize(size_t(cols));
  int dmin = std::min(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (i < dmin && s.d(i, i) != 0) {
      Int q, r;
      mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), y[size_t(i)].get_mpz_t(),
                  s.d(i, i).get_mpz_t());
      if (r != 0) return std::nullopt;
      x0[size_t(i)] = q;
    } else if (y[size_t(i)] != 0) {
      return std::nullopt;
    }
  }
  return s.v.apply(x0);
}

std::optional<std::vector<Int>> solve_integer(const IntMatrix& m,
                                              const std::vector<Int>& v) {
  return solve_integer(smith_normal_form(m), v);
}

Lattice kernel_lattice(const IntMatrix& m) {
  // rows of m^T, tracked against identity; zero rows' companions span ker m
  Rows rows(m.cols), u(m.cols);
  for (int i = 0; i < m.cols; ++i) {
    rows[i].resize(m.rows);
    for (int j = 0; j < m.rows; ++j) rows[i][j] = m(j, i);
    u[i].assign(m.cols, 0);
    u[i][i] = 1;
  }
  row_hnf(rows, &u);
  std::vector<std::vector<Int>> ker;
  for (size_t i = 0; i < rows.size(); ++i)
    if (row_is_zero(rows[i])) ker.push_back(u[i]);
  return lattice_canonicalize(ker, m.cols);
}

Lattice preimage_lattice(const IntMatrix& m, const Lattice& l) {
  if (m.rows != l.ambient_dim)
    throw DimensionMismatch("preimage: codomain mismatch");
  IntMatrix stacked = IntMatrix::hstack(m, l.basis);
  Lattice k = kernel_lattice(stacked);
  std::vector<std::vector<Int>> xs;
  for (int j = 0; j < k.rank(); ++j) {
    std::vector<Int> x(m.cols);
    for (int i = 0; i < m.cols; ++i) x[i] = k.basis(i, j);
    xs.push_back(std::move(x));
  }
  return lattice_canonicalize(xs, m.cols);
}

Lattice lattice_intersect(const Lattice& a, const Lattice& b) {
  if (a.ambient_dim != b.ambient_dim)
    throw DimensionMismatch("lattice intersect: ambient mismatch");
  IntMatrix stacked = IntMatrix::hstack(a.basis, b.basis);
  Lattice k = kernel_lattice(stacked);
  std::vector<std::vector<Int>> vs;
  for (int j = 0; j < k.rank(); ++j) {
    std::vector<Int> alpha(a.rank());
    for (int i = 0; i < a.rank(); ++i) alpha[i] = k.basis(i, j);
    vs.push_back(a.basis.apply(alpha));
  }
  return lattice_canonicalize(vs, a.ambient_dim);
}

namespace {

std::vector<Int> invariants_of_cokernel(const IntMatrix& m, int n_gens) {
  SmithResult s = smith_normal_form(m);
  std::vector<Int> torsion;
  int nonzero = 0;
  int dmin = std::min(s.d.rows, s.d.cols);
  for (int i = 0; i < dmin; ++i) {
    const Int& d = s.d(i, i);
    if (d == 0) continue;
    ++nonzero;
    if (d != 1) torsion.push_back(d);
  }
  std::vector<Int> out = torsion;
  for (int i = 0; i < n_gens - nonzero; ++i) out.push_back(0);
  return out;
}

}  // namespace

std::vector<Int> lattice_quotient_invariants(const Lattice& big,
                                             const Lattice& small) {
  if (big.ambient_dim != small.ambient_dim)
    throw DimensionMismatch("quotient: ambient mismatch");
  IntMatrix x(big.rank(), small.rank());
  for (int j = 0; j < small.rank(); ++j) {
    auto c = big.coords(small.basis.col(j));
    if (!c) throw NotSublattice("lattice_quotient_invariants: not a sublattice");
    for (int i = 0; i < big.rank(); ++i) x(i, j) = (*c)[i];
  }
  return invariants_of_cokernel(x, big.rank());
}

SmithResult smith_normal_form(const IntMatrix& m) {
  SmithResult s;
  s.d = m;
  s.u = IntMatrix::identity(m.rows);
  s.u_inv = IntMatrix::identity(m.rows);
  s.v = IntMatrix::identity(m.cols);
  s.v_inv = IntMatrix::identity(m.cols);
  IntMatrix& d = s.d;

  auto row_op = [&](int i, const Int& q, int t) {  // row_i -= q*row_t
    for (int j = 0; j < d.cols; ++j) d(i, j) -= q * d(t, j);
    for (int j = 0; j < m.rows; ++j) s.u(i, j) -= q * s.u(t, j);
    for (int j = 0; j < m.rows; ++j) s.u_inv(j, t) += q * s.u_inv(j, i);
  };
  auto col_op = [&](int j, const Int& q, int t) {  // col_j -= q*col_t
    for (int i = 0; i < d.rows; ++i) d(i, j) -= q * d(i, t);
    for (int i = 0; i < m.cols; ++i) s.v(i, j) -= q * s.v(i, t);
    for (int i = 0; i < m.cols; ++i) s.v_inv(t, i) += q * s.v_inv(j, i);
  };
  auto row_swap = [&](int a, int b) {
    if (a == b) return;
    for (int j = 0; j < d.cols; ++j) std::swap(d(a, j), d(b, j));
    for (int j = 0; j < m.rows; ++j) std::swap(s.u(a, j), s.u(b, j));
    for (int j = 0; j < m.rows; ++j) std::swap(s.u_inv(j, a), s.u_inv(j, b));
  };
  auto col_swap = [&](int a, int b) {
    if (a == b) return;
    for (int i = 0; i < d.rows; ++i) std::swap(d(i, a), d(i, b));
    for (int i = 0; i < m.cols; ++i) std::swap(s.v(i, a), s.v(i, b));
    for (int i = 0; i < m.cols; ++i) std::swap(s.v_inv(a, i), s.v_inv(b, i));
  };
  auto row_negate = [&](int i) {
    for (int j = 0; j < d.cols; ++j) d(i, j) = -d(i, j);
    for (int j = 0; j < m.rows; ++j) s.u(i, j) = -s.u(i, j);
    for (int j = 0; j < m.rows; ++j) s.u_inv(j, i) = -s.u_inv(j, i);
  };

  int t = 0;
  int nmin = std::min(d.rows, d.cols);
  while (t < nmin) {
    // minimal |entry| pivot in the trailing block
    int pi = -1, pj = -1;
    for (int i = t; i < d.rows; ++i)
      for (int j = t; j < d.cols; ++j)
        if (d(i, j) != 0 &&
            (pi < 0 || mpz_cmpabs(d(i, j).get_mpz_t(), d(pi, pj).get_mpz_t()) < 0)) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);

    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (int i = t + 1; i < d.rows; ++i) {
        if (d(i, t) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), d(i, t).get_mpz_t(), d(t, t).get_mpz_t());
        row_op(i, q, t);
        if (d(i, t) != 0) {
          row_swap(t, i);  // strictly smaller pivot
          dirty = true;
        }
      }
      for (int j = t + 1; j < d.cols; ++j) {
        if (d(t, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), d(t, j).get_mpz_t(), d(t, t).get_mpz_t());
        col_op(j, q, t);
        if (d(t, j) != 0) {
          col_swap(t, j);
          dirty = true;
        }
      }
      if (dirty) continue;
      // enforce the divisibility chain before moving on
      for (int i = t + 1; i < d.rows && !dirty; ++i)
        for (int j = t + 1; j < d.cols && !dirty; ++j)
          if (d(i, j) % d(t, t) != 0) {
            row_op(t, Int(-1), i);  // row_t += row_i
            dirty = true;
          }
    }
    ++t;
  }
  for (int i = 0; i < nmin; ++i)
    if (d(i, i) < 0) row_negate(i);
  s.rank = 0;
  for (int i = 0; i < nmin; ++i)
    if (d(i, i) != 0) ++s.rank;
  return s;
}

FgAbelian FgAbelian::free_of_rank(int n) { return FgAbelian(n, IntMatrix(n, 0)); }

FgAbelian FgAbelian::cyclic(const Int& m) {
  IntMatrix rel(1, 1);
  rel(0, 0) = m;
  return FgAbelian(1, rel);
}

FgAbelian FgAbelian::from_invariants(const std::vector<Int>& inv) {
  IntMatrix rel(int(inv.size()), int(inv.size()));
  for (int i = 0; i < int(inv.size()); ++i) rel(i, i) = inv[i];
  return FgAbelian(int(inv.size()), rel);
}

FgAbelian FgAbelian::direct_sum(const FgAbelian& a, const FgAbelian& b) {
  IntMatrix rel(a.n_gens + b.n_gens, a.relations.cols + b.relations.cols);
  for (int i = 0; i < a.n_gens; ++i)
    for (int j = 0; j < a.relations.cols; ++j) rel(i, j) = a.relations(i, j);
  for (int i = 0; i < b.n_gens; ++i)
    for (int j = 0; j < b.relations.cols; ++j)
      rel(a.n_gens + i, a.relations.cols + j) = b.relations(i, j);
  return FgAbelian(a.n_gens + b.n_gens, rel);
}

std::vector<Int> FgAbelian::invariant_factors() const {
  return invariants_of_cokernel(relations, n_gens);
}

Int FgAbelian::order() const {
  Int o = 1;
  for (const auto& d : invariant_factors()) {
    if (d == 0) return 0;
    o *= d;
  }
  return o;
}

Lattice FgAbelian::relation_lattice() const { return lattice_from_cols(relations); }

bool ab_iso(const FgAbelian& a, const FgAbelian& b) {
  return a.invariant_factors() == b.invariant_factors();
}

std::string invariants_str(const std::vector<Int>& inv) {
  std::ostringstream os;
  for (size_t i = 0; i < inv.size(); ++i) os << (i ? "," : "") << inv[i];
  return os.str();
}

bool AbMap::well_defined() const {
  if (matrix.rows != target.n_gens || matrix.cols != source.n_gens) return false;
  Lattice tl = target.relation_lattice();
  for (int j = 0; j < source.relations.cols; ++j)
    if (!tl.contains(matrix.apply(source.relations.col(j)))) return false;
  return true;
}

void AbMap::require_well_defined(const char* what) const {
  if (!well_defined()) throw IllFormedMap(std::string(what) + ": not well-defined");
}

AbMap AbMap::identity(const FgAbelian& a) {
  return AbMap{a, a, IntMatrix::identity(a.n_gens)};
}

AbMap AbMap::zero(const FgAbelian& src, const FgAbelian& dst) {
  return AbMap{src, dst, IntMatrix(dst.n_gens, src.n_gens)};
}

AbMap compose(const AbMap& g, const AbMap& f) {
  if (g.source.n_gens != f.target.n_gens)
    throw DimensionMismatch("compose: endpoint mismatch");
  return AbMap{f.source, g.target, g.matrix * f.matrix};
}

bool maps_equal(const AbMap& f, const AbMap& g) {
  if (f.source.n_gens != g.source.n_gens || f.target.n_gens != g.target.n_gens)
    return false;
  IntMatrix diff = f.matrix - g.matrix;
  Lattice tl = f.target.relation_lattice();
  for (int j = 0; j < diff.cols; ++j)
    if (!tl.contains(diff.col(j))) return false;
  return true;
}

FgAbelian subquotient(const Lattice& z, const Lattice& b) {
  IntMatrix rel(z.rank(), b.rank());
  for (int j = 0; j < b.rank(); ++j) {
    auto c = z.coords(b.basis.col(j));
    if (!c) throw NotSublattice("subquotient: B not inside Z");
    for (int i = 0; i < z.rank(); ++i) rel(i, j) = (*c)[i];
  }
  return FgAbelian(z.rank(), rel);
}

KernelCokernel map_kernel_cokernel(const AbMap& f) {
  f.require_well_defined("map_kernel_cokernel");
  Lattice target_rel = f.target.relation_lattice();
  Lattice pre = preimage_lattice(f.matrix, target_rel);
  Lattice source_rel = f.source.relation_lattice();

  KernelCokernel r;
  r.kernel = subquotient(pre, source_rel);
  r.inclusion = AbMap{r.kernel, f.source, pre.basis};
  r.cokernel =
      FgAbelian(f.target.n_gens, IntMatrix::hstack(f.matrix, f.target.relations));
  r.projection = AbMap{f.target, r.cokernel, IntMatrix::identity(f.target.n_gens)};

  // internal exactness audit of 0 -> ker -> src -> tgt -> coker -> 0
  AbMap z_in = AbMap::zero(FgAbelian::free_of_rank(0), r.kernel);
  AbMap z_out = AbMap::zero(r.cokernel, FgAbelian::free_of_rank(0));
  if (!homology_invariants(z_in, r.inclusion).empty() ||
      !homology_invariants(r.inclusion, f).empty() ||
      !homology_invariants(f, r.projection).empty() ||
      !homology_invariants(r.projection, z_out).empty())
    throw Error("map_kernel_cokernel: internal exactness audit failed");
  return r;
}

std::vector<Int> homology_invariants(const AbMap& f, const AbMap& g) {
  if (f.target.n_gens != g.source.n_gens)
    throw DimensionMismatch("homology: endpoint mismatch");
  // composite must vanish as a map of presented groups
  IntMatrix comp = g.matrix * f.matrix;
  Lattice zl = g.target.relation_lattice();
  for (int j = 0; j < comp.cols; ++j)
    if (!zl.contains(comp.col(j)))
      throw NotAComplex("homology: composite is nonzero");
  Lattice cycles = preimage_lattice(g.matrix, zl);
  Lattice boundaries =
      lattice_sum(lattice_from_cols(f.matrix), f.target.relation_lattice());
  return lattice_quotient_invariants(cycles, boundaries);
}

void AbComplex::validate() const {
  if (maps.size() + 1 != groups.size() && !(groups.empty() && maps.empty()))
    throw DimensionMismatch("complex: maps/groups count");
  for (size_t i = 0; i < maps.size(); ++i) {
    if (maps[i].source.n_gens != groups[i].n_gens ||
        maps[i].target.n_gens != groups[i + 1].n_gens)
      throw DimensionMismatch("complex: endpoints");
    maps[i].require_well_defined("complex map");
  }
  for (size_t i = 0; i + 1 < maps.size(); ++i)
    homology_invariants(maps[i], maps[i + 1]);  // throws NotAComplex
}

bool AbComplex::is_exact_at(int position) const {
  FgAbelian zero_grp = FgAbelian::free_of_rank(0);
  AbMap in = position == 0 ? AbMap::zero(zero_grp, groups.front())
                           : maps[position - 1];
  AbMap out = position + 1 == int(groups.size())
                  ? AbMap::zero(groups.back(), zero_grp)
                  : maps[position];
  return homology_invariants(in, out).empty();
}

bool AbComplex::is_exact() const {
  for (int i = 0; i < int(groups.size()); ++i)
    if (!is_exact_at(i)) return false;
  return true;
}

FgAbelian ab_tensor(const FgAbelian& a, const FgAbelian& b) {
  int n = a.n_gens, m = b.n_gens;
  int cols = a.relations.cols * m + n * b.relations.cols;
  IntMatrix rel(n * m, cols);
  int c = 0;
  for (int j = 0; j < a.relations.cols; ++j)
    for (int t = 0; t < m; ++t, ++c)
      for (int i = 0; i < n; ++i) rel(i * m + t, c) = a.relations(i, j);
  for (int s = 0; s < n; ++s)
    for (int j = 0; j < b.relations.cols; ++j, ++c)
      for (int t = 0; t < m; ++t) rel(s * m + t, c) = b.relations(t, j);
  return FgAbelian(n * m, rel);
}

AbMap ab_tensor_map(const AbMap& f, const AbMap& g) {
  FgAbelian src = ab_tensor(f.source, g.source);
  FgAbelian dst = ab_tensor(f.target, g.target);
  int n = f.target.n_gens, m = g.target.n_gens;
  int p = f.source.n_gens, q = g.source.n_gens;
  IntMatrix mat(n * m, p * q);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j)
      for (int s = 0; s < p; ++s)
        for (int t = 0; t < q; ++t) mat(i * m + j, s * q + t) = f.matrix(i, s) * g.matrix(j, t);
  return AbMap{src, dst, mat};
}

IntMatrix free_resolution_map(const FgAbelian& a) {
  return a.relation_lattice().basis;
}

FgAbelian ab_tor(const FgAbelian& a, const FgAbelian& b) {
  IntMatrix d = free_resolution_map(a);  // n_gens x r, injective columns
  FgAbelian p1b = ab_tensor(FgAbelian::free_of_rank(d.cols), b);
  FgAbelian p0b = ab_tensor(FgAbelian::free_of_rank(d.rows), b);
  AbMap f{p1b, p0b,
          ab_tensor_map(AbMap{FgAbelian::free_of_rank(d.cols),
                              FgAbelian::free_of_rank(d.rows), d},
                        AbMap::identity(b))
              .matrix};
  return map_kernel_cokernel(f).kernel;
}

Minimized minimize(const FgAbelian& a) {
  SmithResult s = smith_normal_form(a.relations);
  int dmin = std::min(a.relations.rows, a.relations.cols);
  // generator i of coker(D) survives unless d_i == 1
  std::vector<int> keep;
  std::vector<Int> diag;
  for (int i = 0; i < a.n_gens; ++i) {
    Int d = i < dmin ? s.d(i, i) : Int(0);
    if (d == 1) continue;
    keep.push_back(i);
    diag.push_back(d);
  }
  Minimized r;
  int k = int(keep.size());
  IntMatrix rel(k, 0);
  std::vector<std::vector<Int>> relcols;
  for (int i = 0; i < k; ++i)
    if (diag[i] != 0) {
      std::vector<Int> c(k, 0);
      c[i] = diag[i];
      relcols.push_back(c);
    }
  r.group = FgAbelian(k, IntMatrix::from_cols(k, relcols));
  IntMatrix to(k, a.n_gens), from(a.n_gens, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < a.n_gens; ++j) to(i, j) = s.u(keep[i], j);
  for (int i = 0; i < a.n_gens; ++i)
    for (int j = 0; j < k; ++j) from(i, j) = s.u_inv(i, keep[j]);
  r.to_min = AbMap{a, r.group, to};
  r.from_min = AbMap{r.group, a, from};
  return r;
}

}  // namespace dimlab
