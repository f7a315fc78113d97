#include "dimlab/nilpotent.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace dimlab {

NilContext::NilContext(int rank_, int cls_)
    : rank(rank_), cls(cls_), hall(hall_basis(rank_, cls_)), module(rank_, cls_) {
  if (cls < 1 || cls > 4) throw ResourceBound("NilContext: class must be 1..4");
  lie_basis.resize(size_t(cls) + 1);
  lie_basis_snf.resize(size_t(cls) + 1);
  for (int w = 1; w <= cls; ++w) {
    long dim = 1;
    for (int i = 0; i < w; ++i) dim *= rank;
    const auto& stratum = hall.stratum(w);
    IntMatrix b(int(dim), int(stratum.size()));
    for (int j = 0; j < int(stratum.size()); ++j) {
      TruncSeries l = lie_element(hall, stratum[size_t(j)], w);
      for (const auto& [m, c] : l.coeff) {
        long local = 0;
        for (unsigned char letter : m) local = local * rank + (letter - 1);
        b(int(local), j) = c;
      }
    }
    lie_basis[size_t(w)] = b;
    lie_basis_snf[size_t(w)] = smith_normal_form(b);
  }
}

std::vector<Int> NilContext::block_coords(const TruncSeries& s, int w) const {
  long dim = 1;
  for (int i = 0; i < w; ++i) dim *= rank;
  std::vector<Int> v;
  v.resize(size_t(dim));
  for (const auto& [m, c] : s.coeff) {
    if (int(m.size()) != w) continue;
    long local = 0;
    for (unsigned char letter : m) local = local * rank + (letter - 1);
    v[size_t(local)] = c;
  }
  return v;
}

std::vector<Int> NilContext::lie_coords(int w, const std::vector<Int>& block) const {
  auto x = solve_integer(lie_basis_snf[size_t(w)], block);
  if (!x) throw Error("lie_coords: component is not a Lie element");
  return *x;
}

namespace {

long checked_long(const Int& q) {
  if (!q.fits_slong_p()) throw ResourceBound("reduction exponent exceeds long");
  return q.get_si();
}

}  // namespace

NilElement nil_embed(const NilContext& ctx, const FreeWord& w) {
  if (w.rank != ctx.rank) throw DimensionMismatch("nil_embed: rank mismatch");
  return NilElement{&ctx, expand(w, ctx.cls), w};
}

NilElement nil_mul(const NilElement& a, const NilElement& b) {
  if (a.ctx != b.ctx && !a.ctx->same_shape(*b.ctx))
    throw DimensionMismatch("nil_mul: context mismatch");
  return NilElement{a.ctx, series_mul(a.series, b.series), word_mul(a.word, b.word)};
}

NilElement nil_inv(const NilElement& a) {
  return NilElement{a.ctx, series_inv(a.series), word_inv(a.word)};
}

NilElement nil_pow(const NilElement& a, long n) {
  NilElement base = n < 0 ? nil_inv(a) : a;
  unsigned long k = n < 0 ? (unsigned long)(-n) : (unsigned long)n;
  TruncSeries acc = series_const(a.ctx->rank, a.ctx->cls, 1);
  TruncSeries sq = base.series;
  while (k) {
    if (k & 1) acc = series_mul(acc, sq);
    sq = series_mul(sq, sq);
    k >>= 1;
  }
  return NilElement{a.ctx, acc, word_pow(a.word, n)};
}

NilElement nil_comm(const NilElement& a, const NilElement& b) {
  return nil_mul(nil_mul(nil_inv(a), nil_inv(b)), nil_mul(a, b));
}

namespace {

int pivot_col(const std::vector<Int>& row) {
  for (int i = 0; i < int(row.size()); ++i)
    if (row[size_t(i)] != 0) return i;
  return -1;
}

// normal form as a product of basic commutator powers; a short witness word
// for any truncated series arising from a group element
FreeWord collected_word(const NilContext& ctx, const TruncSeries& s) {
  FreeWord w = word_identity(ctx.rank);
  TruncSeries h = s;
  for (;;) {
    int lv = h.lowest_degree();
    if (lv > ctx.cls) return w;
    std::vector<Int> lam = ctx.lie_coords(lv, ctx.block_coords(h, lv));
    FreeWord step = word_identity(ctx.rank);
    TruncSeries step_series = series_const(ctx.rank, ctx.cls, 1);
    const auto& stratum = ctx.hall.stratum(lv);
    for (size_t i = 0; i < stratum.size(); ++i) {
      if (lam[i] == 0) continue;
      FreeWord cw = commutator_word(ctx.hall, stratum[i]);
      step = word_mul(step, word_pow(cw, checked_long(lam[i])));
    }
    step_series = expand(step, ctx.cls);
    h = series_mul(series_inv(step_series), h);
    w = word_mul(w, step);
    if (!(h.lowest_degree() > lv))
      throw Error("collected_word: collection failed to advance");
  }
}

// One weight stratum of pivots: leading Lie coordinate rows in strict HNF,
// each carrying its group element.
struct Stratum {
  std::vector<std::vector<Int>> rows;
  std::vector<NilElement> elts;
};

struct SubgroupBuilder {
  const NilContext& ctx;
  std::vector<Stratum> strata;  // by weight 1..cls
  std::deque<NilElement> pending;

  explicit SubgroupBuilder(const NilContext& c) : ctx(c) {
    strata.resize(size_t(c.cls) + 1);
  }

  // strict HNF maintenance with group-element mirroring; displaced elements
  // (rows reduced to zero) go back to pending
  void reechelon(int w) {
    Stratum& st = strata[size_t(w)];
    int n = int(st.rows.size());
    int dim = n ? int(st.rows[0].size()) : 0;
    int r = 0;
    auto row_sub = [&](int i, const Int& q, int t) {
      if (q == 0) return;
      for (int c = 0; c < dim; ++c)
        if (st.rows[size_t(t)][size_t(c)] != 0)
          st.rows[size_t(i)][size_t(c)] -= q * st.rows[size_t(t)][size_t(c)];
      st.elts[size_t(i)] =
          nil_mul(nil_pow(st.elts[size_t(t)], -checked_long(q)), st.elts[size_t(i)]);
    };
    for (int c = 0; c < dim && r < n; ++c) {
      for (;;) {
        int best = -1;
        for (int i = r; i < n; ++i)
          if (st.rows[size_t(i)][size_t(c)] != 0 &&
              (best < 0 || mpz_cmpabs(st.rows[size_t(i)][size_t(c)].get_mpz_t(),
                                      st.rows[size_t(best)][size_t(c)].get_mpz_t()) < 0))
            best = i;
        if (best < 0) break;
        std::swap(st.rows[size_t(r)], st.rows[size_t(best)]);
        std::swap(st.elts[size_t(r)], st.elts[size_t(best)]);
        bool clean = true;
        for (int i = r + 1; i < n; ++i) {
          if (st.rows[size_t(i)][size_t(c)] == 0) continue;
          Int q;
          mpz_fdiv_q(q.get_mpz_t(), st.rows[size_t(i)][size_t(c)].get_mpz_t(),
                     st.rows[size_t(r)][size_t(c)].get_mpz_t());
          row_sub(i, q, r);
          if (st.rows[size_t(i)][size_t(c)] != 0) clean = false;
        }
        if (clean) break;
      }
      if (st.rows[size_t(r)][size_t(c)] == 0) continue;
      if (st.rows[size_t(r)][size_t(c)] < 0) {
        for (auto& x : st.rows[size_t(r)]) x = -x;
        st.elts[size_t(r)] = nil_inv(st.elts[size_t(r)]);
      }
      for (int i = 0; i < r; ++i) {
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), st.rows[size_t(i)][size_t(c)].get_mpz_t(),
                   st.rows[size_t(r)][size_t(c)].get_mpz_t());
        row_sub(i, q, r);
      }
      ++r;
    }
    while (int(st.rows.size()) > r) {
      NilElement displaced = st.elts.back();
      st.rows.pop_back();
      st.elts.pop_back();
      if (!displaced.is_identity()) pending.push_back(displaced);
    }
  }

  // reduce h against existing pivots; stops at the first weight with a
  // nonzero residue (or at the identity)
  NilElement reduce(const NilElement& g) const {
    NilElement h = g;
    for (;;) {
      int w = h.leading_weight();
      if (w > ctx.cls) return h;  // identity
      std::vector<Int> lam = ctx.lie_coords(w, ctx.block_coords(h.series, w));
      const Stratum& st = strata[size_t(w)];
      for (size_t j = 0; j < st.rows.size(); ++j) {
        int p = pivot_col(st.rows[j]);
        if (lam[size_t(p)] == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), lam[size_t(p)].get_mpz_t(),
                   st.rows[j][size_t(p)].get_mpz_t());
        if (q == 0) continue;
        for (size_t c = 0; c < lam.size(); ++c) lam[c] -= q * st.rows[j][c];
        h = nil_mul(nil_pow(st.elts[j], -checked_long(q)), h);
      }
      bool zero = std::all_of(lam.begin(), lam.end(),
                              [](const Int& x) { return x == 0; });
      if (!zero) return h;  // genuinely new at this weight
      if (!h.is_identity() && h.leading_weight() <= w)
        throw Error("subgroup reduction failed to increase weight");
    }
  }

  // returns true if the pivot lattices changed
  bool add(const NilElement& g) {
    // witness words are rebuilt by collection in finish(); carrying the
    // operation history here makes word lengths blow up
    NilElement stripped = g;
    stripped.word = word_identity(ctx.rank);
    NilElement h = reduce(stripped);
    int w = h.leading_weight();
    if (w > ctx.cls) return false;
    Stratum& st = strata[size_t(w)];
    st.rows.push_back(ctx.lie_coords(w, ctx.block_coords(h.series, w)));
    st.elts.push_back(h);
    reechelon(w);
    return true;
  }

  bool drain() {
    bool changed = false;
    while (!pending.empty()) {
      NilElement h = pending.front();
      pending.pop_front();
      if (add(h)) changed = true;
    }
    return changed;
  }

  std::vector<NilElement> all_pivots() const {
    std::vector<NilElement> out;
    for (int w = 1; w <= ctx.cls; ++w)
      for (const auto& e : strata[size_t(w)].elts) out.push_back(e);
    return out;
  }

  // confluence: pairwise commutators of pivots must reduce to the identity
  void close_commutators() {
    for (;;) {
      bool changed = false;
      std::vector<NilElement> pivots = all_pivots();
      for (size_t i = 0; i < pivots.size() && !changed; ++i)
        for (size_t j = i + 1; j < pivots.size() && !changed; ++j) {
          pending.push_back(nil_comm(pivots[i], pivots[j]));
          changed = drain();
        }
      if (!changed) break;
    }
  }

  NilSubgroup finish() {
    // canonical tails: weight-descending, reduce each pivot's deeper
    // components to the HNF residue of the deeper pivot lattice
    for (int w = ctx.cls; w >= 1; --w) {
      Stratum& st = strata[size_t(w)];
      for (auto& e : st.elts) {
        for (int w2 = w + 1; w2 <= ctx.cls; ++w2) {
          const Stratum& deep = strata[size_t(w2)];
          if (deep.rows.empty()) continue;
          std::vector<std::vector<Int>> embedded;
          for (const auto& row : deep.rows)
            embedded.push_back(ctx.lie_basis[size_t(w2)].apply(row));
          Lattice lat = lattice_canonicalize(embedded, int(embedded[0].size()));
          std::vector<Int> v = ctx.block_coords(e.series, w2);
          std::vector<Int> residue = v;
          for (int k = 0; k < lat.rank(); ++k) {
            int p = -1;
            for (int i = 0; i < lat.ambient_dim; ++i)
              if (lat.basis(i, k) != 0) { p = i; break; }
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), residue[size_t(p)].get_mpz_t(),
                       lat.basis(p, k).get_mpz_t());
            if (q == 0) continue;
            for (int i = 0; i < lat.ambient_dim; ++i)
              residue[size_t(i)] -= q * lat.basis(i, k);
          }
          std::vector<Int> diff;
          diff.resize(v.size());
          for (size_t i = 0; i < v.size(); ++i) diff[i] = v[i] - residue[i];
          IntMatrix m = IntMatrix::from_cols(int(v.size()), embedded);
          auto x = solve_integer(m, diff);
          if (!x) throw Error("tail reduction: inconsistent pivot lattice");
          for (size_t j = 0; j < deep.elts.size(); ++j)
            if ((*x)[j] != 0)
              e = nil_mul(e, nil_pow(deep.elts[j], -checked_long((*x)[j])));
        }
      }
    }
    NilSubgroup s;
    s.ctx = &ctx;
    for (int w = 1; w <= ctx.cls; ++w)
      for (const auto& e : strata[size_t(w)].elts) {
        NilElement g = e;
        g.word = collected_word(ctx, g.series);
        s.gens.push_back(g);
      }
    return s;
  }
};

}  // namespace

NilSubgroup subgroup_close(const NilContext& ctx,
                           const std::vector<NilElement>& gens) {
  SubgroupBuilder b(ctx);
  for (const auto& g : gens) b.pending.push_back(g);
  b.drain();
  b.close_commutators();
  return b.finish();
}

NilSubgroup normal_closure(const NilContext& ctx,
                           const std::vector<NilElement>& gens) {
  SubgroupBuilder b(ctx);
  for (const auto& g : gens) b.pending.push_back(g);
  b.drain();
  std::vector<NilElement> ambient;
  for (int i = 1; i <= ctx.rank; ++i)
    ambient.push_back(nil_embed(ctx, word_gen(ctx.rank, i)));
  for (;;) {
    b.close_commutators();
    std::vector<NilElement> pivots = b.all_pivots();
    for (const auto& p : pivots)
      for (const auto& x : ambient) {
        b.pending.push_back(nil_comm(p, x));
        b.pending.push_back(nil_comm(p, nil_inv(x)));
      }
    if (!b.drain()) break;
  }
  return b.finish();
}

NilSubgroup commutator_subgroup(const NilSubgroup& s, const NilSubgroup& t) {
  const NilContext& ctx = *s.ctx;
  SubgroupBuilder b(ctx);
  for (const auto& a : s.gens)
    for (const auto& c : t.gens) b.pending.push_back(nil_comm(a, c));
  b.drain();
  std::vector<NilElement> conjugators = s.gens;
  conjugators.insert(conjugators.end(), t.gens.begin(), t.gens.end());
  for (;;) {
    b.close_commutators();
    std::vector<NilElement> pivots = b.all_pivots();
    for (const auto& p : pivots)
      for (const auto& g : conjugators) {
        b.pending.push_back(nil_comm(p, g));
        b.pending.push_back(nil_comm(p, nil_inv(g)));
      }
    if (!b.drain()) break;
  }
  return b.finish();
}

NilSubgroup meet_gamma(const NilSubgroup& s, int k) {
  NilSubgroup out;
  out.ctx = s.ctx;
  for (const auto& g : s.gens)
    if (g.leading_weight() >= k) out.gens.push_back(g);
  return out;
}

NilSubgroup subgroup_join(const NilSubgroup& s, const NilSubgroup& t) {
  std::vector<NilElement> gens = s.gens;
  gens.insert(gens.end(), t.gens.begin(), t.gens.end());
  return subgroup_close(*s.ctx, gens);
}

NilSubgroup full_group(const NilContext& ctx) {
  std::vector<NilElement> gens;
  for (int i = 1; i <= ctx.rank; ++i)
    gens.push_back(nil_embed(ctx, word_gen(ctx.rank, i)));
  return subgroup_close(ctx, gens);
}

NilSubgroup gamma_subgroup(const NilContext& ctx, int k) {
  std::vector<NilElement> gens;
  for (int w = k; w <= ctx.cls; ++w)
    for (int item : ctx.hall.stratum(w))
      gens.push_back(nil_embed(ctx, commutator_word(ctx.hall, item)));
  return subgroup_close(ctx, gens);
}

std::optional<std::vector<Int>> NilSubgroup::factorize(const NilElement& g) const {
  std::vector<Int> exps;
  exps.resize(gens.size());
  NilElement h = g;
  for (;;) {
    int w = h.leading_weight();
    if (w > ctx->cls) return exps;
    std::vector<Int> lam = ctx->lie_coords(w, ctx->block_coords(h.series, w));
    for (size_t i = 0; i < gens.size(); ++i) {
      if (gens[i].leading_weight() != w) continue;
      std::vector<Int> row =
          ctx->lie_coords(w, ctx->block_coords(gens[i].series, w));
      int p = pivot_col(row);
      if (lam[size_t(p)] == 0) continue;
      Int q;
      mpz_fdiv_q(q.get_mpz_t(), lam[size_t(p)].get_mpz_t(), row[size_t(p)].get_mpz_t());
      if (q == 0) continue;
      for (size_t c = 0; c < lam.size(); ++c) lam[c] -= q * row[c];
      exps[i] += q;
      h = nil_mul(nil_pow(gens[i], -checked_long(q)), h);
    }
    bool zero =
        std::all_of(lam.begin(), lam.end(), [](const Int& x) { return x == 0; });
    if (!zero) return std::nullopt;
    if (!h.is_identity() && h.leading_weight() <= w) return std::nullopt;
  }
}

bool NilSubgroup::contains(const NilElement& g) const {
  return factorize(g).has_value();
}

bool NilSubgroup::contains_subgroup(const NilSubgroup& t) const {
  for (const auto& g : t.gens)
    if (!contains(g)) return false;
  return true;
}

bool NilSubgroup::operator==(const NilSubgroup& o) const {
  if (gens.size() != o.gens.size()) return false;
  for (size_t i = 0; i < gens.size(); ++i)
    if (!(gens[i].series == o.gens[i].series)) return false;
  return true;
}

Section section_invariants(const NilSubgroup& s, const NilSubgroup& t) {
  if (!s.contains_subgroup(t))
    throw NotSubgroup("section_invariants: T is not inside S");
  NilSubgroup cs = commutator_subgroup(s, s);
  if (!t.contains_subgroup(cs))
    throw SectionNotAbelian("section_invariants: [S,S] not inside T");
  std::vector<std::vector<Int>> cols;
  for (const auto& g : t.gens) {
    auto e = s.factorize(g);
    if (!e) throw NotSubgroup("section_invariants: factorization failed");
    cols.push_back(*e);
  }
  for (const auto& g : cs.gens) {
    auto e = s.factorize(g);
    if (!e) throw NotSubgroup("section_invariants: commutator factorization failed");
    cols.push_back(*e);
  }
  Section sec;
  sec.group = FgAbelian(int(s.gens.size()),
                        IntMatrix::from_cols(int(s.gens.size()), cols));
  sec.witnesses = s.gens;
  return sec;
}

NilElement NilHom::apply(const NilElement& g) const {
  return nil_embed(*dst, word_substitute(g.word, images));
}

NilHom induced_hom(const NilContext& src, const NilContext& dst,
                   std::vector<FreeWord> images) {
  if (int(images.size()) != src.rank)
    throw DimensionMismatch("induced_hom: image count mismatch");
  for (const auto& w : images)
    if (w.rank != dst.rank) throw DimensionMismatch("induced_hom: image rank");
  return NilHom{&src, &dst, std::move(images)};
}

}  // namespace dimlab
