#include "dimlab/ideals.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace dimlab {

IdealExpr IdealExpr::f_aug() { return IdealExpr{Kind::F_AUG, "", {}, 0}; }
IdealExpr IdealExpr::rel() { return IdealExpr{Kind::REL, "", {}, 0}; }
IdealExpr IdealExpr::delta(std::string name) {
  return IdealExpr{Kind::DELTA, std::move(name), {}, 0};
}
IdealExpr IdealExpr::product(std::vector<IdealExpr> xs) {
  return IdealExpr{Kind::PRODUCT, "", std::move(xs), 0};
}
IdealExpr IdealExpr::sum(std::vector<IdealExpr> xs) {
  return IdealExpr{Kind::SUM, "", std::move(xs), 0};
}
IdealExpr IdealExpr::intersect(std::vector<IdealExpr> xs) {
  return IdealExpr{Kind::INTERSECT, "", std::move(xs), 0};
}
IdealExpr IdealExpr::power(IdealExpr x, int k) {
  if (k < 1) throw Error("ideal power must be >= 1");
  return IdealExpr{Kind::POWER, "", {std::move(x)}, k};
}

std::string ideal_str(const IdealExpr& e) {
  auto join = [](const std::vector<IdealExpr>& xs, const char* op) {
    std::string s;
    for (size_t i = 0; i < xs.size(); ++i) {
      if (i) s += op;
      s += "(" + ideal_str(xs[i]) + ")";
    }
    return s;
  };
  switch (e.kind) {
    case IdealExpr::Kind::F_AUG: return "f";
    case IdealExpr::Kind::REL: return "r";
    case IdealExpr::Kind::DELTA: return "delta(" + e.delta_name + ")";
    case IdealExpr::Kind::PRODUCT: return join(e.children, "*");
    case IdealExpr::Kind::SUM: return join(e.children, "+");
    case IdealExpr::Kind::INTERSECT: return join(e.children, "&");
    case IdealExpr::Kind::POWER:
      return "(" + ideal_str(e.children[0]) + ")^" + std::to_string(e.exponent);
  }
  return "?";
}

namespace {

struct IdealParser {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  int parse_int() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
    if (pos == start) throw Error("ideal parse: expected integer");
    return std::stoi(text.substr(start, pos - start));
  }
  IdealExpr parse_primary() {
    skip_ws();
    if (eat('(')) {
      IdealExpr e = parse_sum();
      if (!eat(')')) throw Error("ideal parse: expected ')'");
      return e;
    }
    if (text.compare(pos, 6, "delta(") == 0) {
      pos += 6;
      size_t start = pos;
      while (pos < text.size() && text[pos] != ')') ++pos;
      if (pos == text.size()) throw Error("ideal parse: unterminated delta");
      std::string name = text.substr(start, pos - start);
      ++pos;
      return IdealExpr::delta(name);
    }
    if (eat('f')) return IdealExpr::f_aug();
    if (eat('r')) return IdealExpr::rel();
    throw Error("ideal parse: expected atom");
  }
  IdealExpr parse_power() {
    IdealExpr e = parse_primary();
    if (eat('^')) return IdealExpr::power(std::move(e), parse_int());
    return e;
  }
  IdealExpr parse_product() {
    std::vector<IdealExpr> xs{parse_power()};
    while (eat('*')) xs.push_back(parse_power());
    return xs.size() == 1 ? xs[0] : IdealExpr::product(std::move(xs));
  }
  IdealExpr parse_meet() {
    std::vector<IdealExpr> xs{parse_product()};
    while (eat('&')) xs.push_back(parse_product());
    return xs.size() == 1 ? xs[0] : IdealExpr::intersect(std::move(xs));
  }
  IdealExpr parse_sum() {
    std::vector<IdealExpr> xs{parse_meet()};
    while (eat('+')) xs.push_back(parse_meet());
    return xs.size() == 1 ? xs[0] : IdealExpr::sum(std::move(xs));
  }
};

}  // namespace

IdealExpr parse_ideal(const std::string& text) {
  IdealParser p{text, 0};
  IdealExpr e = p.parse_sum();
  p.skip_ws();
  if (p.pos != text.size()) throw Error("ideal parse: trailing input");
  return e;
}

namespace {

// incremental span builder with batched HNF reduction
struct LatticeAccumulator {
  int dim;
  std::vector<std::vector<Int>> rows;
  size_t basis_rows = 0;

  explicit LatticeAccumulator(int d) : dim(d) {}
  void reduce() {
    Lattice l = lattice_canonicalize(rows, dim);
    rows.clear();
    for (int j = 0; j < l.rank(); ++j) rows.push_back(l.basis.col(j));
    basis_rows = rows.size();
  }
  void push(std::vector<Int> v) {
    rows.push_back(std::move(v));
    if (rows.size() - basis_rows >= 256) reduce();
  }
  Lattice finish() {
    reduce();
    return lattice_canonicalize(rows, dim);
  }
};

std::vector<Monomial> monomials_up_to(int rank, int max_degree) {
  std::vector<Monomial> out{Monomial{}};
  std::vector<Monomial> prev{Monomial{}};
  for (int d = 1; d <= max_degree; ++d) {
    std::vector<Monomial> next;
    for (const auto& m : prev)
      for (int l = 1; l <= rank; ++l) {
        Monomial mm = m;
        mm.push_back((unsigned char)l);
        next.push_back(mm);
      }
    out.insert(out.end(), next.begin(), next.end());
    prev = std::move(next);
  }
  return out;
}

TruncSeries monomial_series(int rank, int n, const Monomial& m) {
  TruncSeries s = series_const(rank, n, m.empty() ? 1 : 0);
  if (!m.empty()) s.coeff.emplace(m, 1);
  return s;
}

Lattice rel_lattice(const IdealEnv& env, int rank, int n,
                    const MonomialModule& mm) {
  LatticeAccumulator acc(mm.dim());
  for (const auto& rho : env.relators)
    if (rho.rank != rank) throw DimensionMismatch("relator rank mismatch");
  std::vector<Monomial> monos = monomials_up_to(rank, n - 1);
  for (const auto& rho : env.relators) {
    TruncSeries s = expand(rho, n);
    s.constant -= 1;
    if (s.is_zero()) continue;
    int lo = s.lowest_degree();
    for (const auto& m1 : monos) {
      if (int(m1.size()) + lo > n) continue;
      TruncSeries left = series_mul(monomial_series(rank, n, m1), s);
      if (left.is_zero()) continue;
      int llo = left.lowest_degree();
      for (const auto& m2 : monos) {
        if (int(m2.size()) + llo > n) continue;
        TruncSeries v = series_mul(left, monomial_series(rank, n, m2));
        if (!v.is_zero()) acc.push(mm.coords(v));
      }
    }
  }
  return acc.finish();
}

Lattice delta_lattice(const NilSubgroup& h, int rank, int n,
                      const MonomialModule& mm) {
  if (h.ctx->rank != rank)
    throw Error("delta atom: subgroup rank mismatch");
  if (h.ctx->cls < n)
    throw Error("delta atom: subgroup context class below truncation degree");
  LatticeAccumulator acc(mm.dim());
  // factors g - 1 and g^-1 - 1 over canonical generators, re-truncated
  std::vector<TruncSeries> factors;
  for (const auto& g : h.gens) {
    for (const TruncSeries& s : {g.series, series_inv(g.series)}) {
      TruncSeries t = series_const(rank, n, 0);
      for (const auto& [m, c] : s.coeff)
        if (int(m.size()) <= n) t.coeff.emplace(m, c);
      if (!t.is_zero()) factors.push_back(t);
    }
  }
  size_t budget = 500000;
  // depth-first products of factor chains
  struct Frame {
    TruncSeries acc;
    size_t next = 0;
  };
  std::vector<Frame> frames;
  frames.push_back({series_const(rank, n, 1), 0});
  while (!frames.empty()) {
    Frame& f = frames.back();
    if (f.next >= factors.size()) {
      frames.pop_back();
      continue;
    }
    const TruncSeries& factor = factors[f.next++];
    TruncSeries prod = series_mul(f.acc, factor);
    if (prod.is_zero()) continue;
    if (budget-- == 0) throw ResourceBound("delta atom: span too large");
    acc.push(mm.coords(prod));
    if (prod.lowest_degree() < n) frames.push_back({prod, 0});
  }
  return acc.finish();
}

Lattice product_lattice(const Lattice& a, const Lattice& b, int rank, int n,
                        const MonomialModule& mm) {
  LatticeAccumulator acc(mm.dim());
  for (int i = 0; i < a.rank(); ++i) {
    TruncSeries sa = mm.series(a.basis.col(i));
    for (int j = 0; j < b.rank(); ++j) {
      TruncSeries v = series_mul(sa, mm.series(b.basis.col(j)));
      if (!v.is_zero()) acc.push(mm.coords(v));
    }
  }
  return acc.finish();
}

Lattice f_power_lattice(int k, int n, const MonomialModule& mm) {
  std::vector<std::vector<Int>> units;
  for (int i = 0; i < mm.dim(); ++i)
    if (int(mm.monomial(i).size()) >= k) {
      std::vector<Int> v;
      v.resize(size_t(mm.dim()));
      v[size_t(i)] = 1;
      units.push_back(std::move(v));
    }
  return lattice_canonicalize(units, mm.dim());
}

Lattice eval_lattice(const IdealExpr& e, const IdealEnv& env, int rank, int n,
                     const MonomialModule& mm) {
  switch (e.kind) {
    case IdealExpr::Kind::F_AUG:
      return f_power_lattice(1, n, mm);
    case IdealExpr::Kind::REL:
      return rel_lattice(env, rank, n, mm);
    case IdealExpr::Kind::DELTA: {
      auto it = env.subgroups.find(e.delta_name);
      if (it == env.subgroups.end())
        throw Error("unresolved delta atom: " + e.delta_name);
      return delta_lattice(*it->second, rank, n, mm);
    }
    case IdealExpr::Kind::PRODUCT: {
      Lattice acc = eval_lattice(e.children[0], env, rank, n, mm);
      for (size_t i = 1; i < e.children.size(); ++i)
        acc = product_lattice(acc, eval_lattice(e.children[i], env, rank, n, mm),
                              rank, n, mm);
      return acc;
    }
    case IdealExpr::Kind::SUM: {
      Lattice acc = eval_lattice(e.children[0], env, rank, n, mm);
      for (size_t i = 1; i < e.children.size(); ++i)
        acc = lattice_sum(acc, eval_lattice(e.children[i], env, rank, n, mm));
      return acc;
    }
    case IdealExpr::Kind::INTERSECT: {
      Lattice acc = eval_lattice(e.children[0], env, rank, n, mm);
      for (size_t i = 1; i < e.children.size(); ++i)
        acc = lattice_intersect(acc,
                                eval_lattice(e.children[i], env, rank, n, mm));
      return acc;
    }
    case IdealExpr::Kind::POWER: {
      if (e.children[0].kind == IdealExpr::Kind::F_AUG)
        return f_power_lattice(e.exponent, n, mm);
      Lattice base = eval_lattice(e.children[0], env, rank, n, mm);
      Lattice acc = base;
      for (int i = 1; i < e.exponent; ++i)
        acc = product_lattice(acc, base, rank, n, mm);
      return acc;
    }
  }
  throw Error("eval_lattice: bad expression");
}

}  // namespace

TruncIdealLattice ideal_lattice(const IdealExpr& expr, const IdealEnv& env,
                                int rank, int max_degree) {
  MonomialModule mm(rank, max_degree);
  return TruncIdealLattice{rank, max_degree,
                           eval_lattice(expr, env, rank, max_degree, mm)};
}

bool ideal_membership(const FreeWord& w, const IdealExpr& expr,
                      const IdealEnv& env, int rank, int max_degree) {
  if (w.rank != rank) throw DimensionMismatch("ideal_membership: rank");
  MonomialModule mm(rank, max_degree);
  TruncIdealLattice l = ideal_lattice(expr, env, rank, max_degree);
  TruncSeries s = expand(w, max_degree);
  s.constant -= 1;
  return l.lattice.contains(mm.coords(s));
}

TruncIdealLattice ideal_reverse(const TruncIdealLattice& l) {
  MonomialModule mm(l.rank, l.max_degree);
  std::vector<std::vector<Int>> rows;
  for (int j = 0; j < l.lattice.rank(); ++j) {
    TruncSeries s = mm.series(l.lattice.basis.col(j));
    TruncSeries r = series_const(l.rank, l.max_degree, 0);
    for (const auto& [m, c] : s.coeff) {
      Monomial rev(m.rbegin(), m.rend());
      r.coeff.emplace(rev, c);
    }
    rows.push_back(mm.coords(r));
  }
  return TruncIdealLattice{l.rank, l.max_degree,
                           lattice_canonicalize(rows, mm.dim())};
}

NilSubgroup gen_dim_subgroup(const IdealExpr& expr, const IdealEnv& env,
                             const NilContext& ctx, int n, int k_low) {
  if (ctx.cls != n - 1)
    throw UnsupportedWindow("gen_dim_subgroup: context class must be n-1");
  if (2 * k_low < n || k_low < 1 || k_low > n - 1)
    throw UnsupportedWindow("gen_dim_subgroup: window not linear");
  MonomialModule mm(ctx.rank, n - 1);
  Lattice l = eval_lattice(expr, env, ctx.rank, n - 1, mm);
  // the expr lattice must sit inside f^{k_low}
  for (int j = 0; j < l.rank(); ++j) {
    TruncSeries s = mm.series(l.basis.col(j));
    if (!s.is_zero() && s.lowest_degree() < k_low)
      throw UnsupportedWindow("gen_dim_subgroup: ideal not inside f^k_low");
  }
  // commutator coordinates -> monomial module, linear on the window
  std::vector<int> items;
  for (int w = k_low; w <= n - 1; ++w)
    for (int item : ctx.hall.stratum(w)) items.push_back(item);
  std::vector<std::vector<Int>> cols;
  for (int item : items) {
    TruncSeries s = expand(commutator_word(ctx.hall, item), n - 1);
    s.constant -= 1;
    cols.push_back(mm.coords(s));
  }
  IntMatrix e = IntMatrix::from_cols(mm.dim(), cols);
  Lattice pre = preimage_lattice(e, l);
  std::vector<NilElement> gens;
  for (int j = 0; j < pre.rank(); ++j) {
    NilElement g = nil_embed(ctx, word_identity(ctx.rank));
    for (size_t i = 0; i < items.size(); ++i) {
      const Int& a = pre.basis(int(i), j);
      if (a == 0) continue;
      if (!a.fits_slong_p()) throw ResourceBound("gen_dim_subgroup exponent");
      g = nil_mul(g, nil_pow(nil_embed(ctx, commutator_word(ctx.hall, items[i])),
                             a.get_si()));
    }
    gens.push_back(g);
  }
  return subgroup_close(ctx, gens);
}

}  // namespace dimlab
