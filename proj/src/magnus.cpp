#include "dimlab/magnus.hpp"

#include <cassert>
#include <cctype>
#include <sstream>

namespace dimlab {

FreeWord word_identity(int rank) { return FreeWord{rank, {}}; }

FreeWord word_gen(int rank, int i, long exp) {
  if (i < 1 || i > rank) throw Error("generator index out of range");
  FreeWord w{rank, {}};
  if (exp != 0) w.syllables.push_back({i, exp});
  return w;
}

static void push_reduced(std::vector<std::pair<int, long>>& s, int g, long e) {
  if (e == 0) return;
  if (!s.empty() && s.back().first == g) {
    s.back().second += e;
    if (s.back().second == 0) s.pop_back();
  } else {
    s.push_back({g, e});
  }
}

FreeWord word_mul(const FreeWord& u, const FreeWord& v) {
  if (u.rank != v.rank) throw DimensionMismatch("word_mul: rank mismatch");
  FreeWord w{u.rank, u.syllables};
  for (const auto& [g, e] : v.syllables) push_reduced(w.syllables, g, e);
  return w;
}

FreeWord word_inv(const FreeWord& u) {
  FreeWord w{u.rank, {}};
  for (auto it = u.syllables.rbegin(); it != u.syllables.rend(); ++it)
    w.syllables.push_back({it->first, -it->second});
  return w;
}

FreeWord word_pow(const FreeWord& u, long n) {
  FreeWord base = n < 0 ? word_inv(u) : u;
  long k = n < 0 ? -n : n;
  FreeWord w = word_identity(u.rank);
  for (long i = 0; i < k; ++i) w = word_mul(w, base);
  return w;
}

FreeWord word_comm(const FreeWord& u, const FreeWord& v) {
  return word_mul(word_mul(word_inv(u), word_inv(v)), word_mul(u, v));
}

long word_length(const FreeWord& u) {
  long n = 0;
  for (const auto& [g, e] : u.syllables) n += e < 0 ? -e : e;
  return n;
}

std::string word_str(const FreeWord& u) {
  if (u.is_identity()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, e] : u.syllables) {
    if (!first) os << " ";
    first = false;
    os << "x" << g;
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

namespace {

struct WordParser {
  const std::string& text;
  size_t pos = 0;
  int rank;

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
  }
  bool peek(char c) {
    skip_ws();
    return pos < text.size() && text[pos] == c;
  }
  void expect(char c) {
    if (!peek(c)) throw Error("word parse: expected '" + std::string(1, c) + "'");
    ++pos;
  }
  long parse_int() {
    skip_ws();
    size_t start = pos;
    if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) ++pos;
    while (pos < text.size() && std::isdigit((unsigned char)text[pos])) ++pos;
    if (pos == start) throw Error("word parse: expected integer");
    return std::stol(text.substr(start, pos - start));
  }
  FreeWord parse_atom() {
    skip_ws();
    if (peek('x')) {
      ++pos;
      long i = parse_int();
      return word_gen(rank, int(i));
    }
    if (peek('[')) {
      ++pos;
      FreeWord u = parse_word_inner();
      expect(',');
      FreeWord v = parse_word_inner();
      expect(']');
      return word_comm(u, v);
    }
    if (peek('(')) {
      ++pos;
      FreeWord u = parse_word_inner();
      expect(')');
      return u;
    }
    throw Error("word parse: unexpected character");
  }
  FreeWord parse_factor() {
    FreeWord a = parse_atom();
    if (peek('^')) {
      ++pos;
      long e = parse_int();
      a = word_pow(a, e);
    }
    return a;
  }
  bool at_factor_start() {
    skip_ws();
    if (pos >= text.size()) return false;
    char c = text[pos];
    return c == 'x' || c == '[' || c == '(';
  }
  FreeWord parse_word_inner() {
    FreeWord w = word_identity(rank);
    while (at_factor_start()) w = word_mul(w, parse_factor());
    return w;
  }
};

}  // namespace

FreeWord parse_word(const std::string& text, int rank) {
  WordParser p{text, 0, rank};
  FreeWord w = p.parse_word_inner();
  p.skip_ws();
  if (p.pos != text.size()) throw Error("word parse: trailing input");
  return w;
}

FreeWord word_substitute(const FreeWord& u, const std::vector<FreeWord>& images) {
  if (int(images.size()) != u.rank)
    throw DimensionMismatch("word_substitute: image count");
  int dst_rank = images.empty() ? 0 : images[0].rank;
  FreeWord w = word_identity(dst_rank);
  for (const auto& [g, e] : u.syllables)
    w = word_mul(w, word_pow(images[size_t(g) - 1], e));
  return w;
}

int TruncSeries::lowest_degree() const {
  int lo = max_degree + 1;
  for (const auto& [m, c] : coeff)
    if (int(m.size()) < lo) lo = int(m.size());
  return lo;
}

TruncSeries series_const(int rank, int max_degree, const Int& c) {
  TruncSeries s;
  s.rank = rank;
  s.max_degree = max_degree;
  s.constant = c;
  return s;
}

static void add_term(TruncSeries& s, const Monomial& m, const Int& c) {
  if (c == 0) return;
  auto it = s.coeff.find(m);
  if (it == s.coeff.end()) {
    s.coeff.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) s.coeff.erase(it);
  }
}

TruncSeries series_add(const TruncSeries& a, const TruncSeries& b) {
  TruncSeries s = a;
  s.constant += b.constant;
  for (const auto& [m, c] : b.coeff) add_term(s, m, c);
  return s;
}

TruncSeries series_sub(const TruncSeries& a, const TruncSeries& b) {
  TruncSeries s = a;
  s.constant -= b.constant;
  for (const auto& [m, c] : b.coeff) add_term(s, m, -c);
  return s;
}

TruncSeries series_scale(const TruncSeries& a, const Int& c) {
  TruncSeries s;
  s.rank = a.rank;
  s.max_degree = a.max_degree;
  s.constant = a.constant * c;
  if (c != 0)
    for (const auto& [m, x] : a.coeff) s.coeff.emplace(m, x * c);
  return s;
}

TruncSeries series_mul(const TruncSeries& a, const TruncSeries& b) {
  if (a.rank != b.rank || a.max_degree != b.max_degree)
    throw DimensionMismatch("series_mul: shape mismatch");
  TruncSeries s = series_const(a.rank, a.max_degree, a.constant * b.constant);
  if (b.constant != 0)
    for (const auto& [m, c] : a.coeff) add_term(s, m, c * b.constant);
  if (a.constant != 0)
    for (const auto& [m, c] : b.coeff) add_term(s, m, c * a.constant);
  for (const auto& [ma, ca] : a.coeff)
    for (const auto& [mb, cb] : b.coeff) {
      if (int(ma.size() + mb.size()) > a.max_degree) continue;
      Monomial m = ma;
      m.insert(m.end(), mb.begin(), mb.end());
      add_term(s, m, ca * cb);
    }
  return s;
}

TruncSeries series_inv(const TruncSeries& a) {
  if (a.constant != 1 && a.constant != -1)
    throw Error("series_inv: not a unit");
  // write a = c(1 + t), invert by geometric series
  TruncSeries t = series_scale(a, a.constant);  // constant 1 now
  t.constant = 0;
  TruncSeries acc = series_const(a.rank, a.max_degree, 1);
  TruncSeries pw = series_const(a.rank, a.max_degree, 1);
  for (int k = 1; k <= a.max_degree; ++k) {
    pw = series_mul(pw, t);
    if (pw.is_zero()) break;
    acc = (k % 2) ? series_sub(acc, pw) : series_add(acc, pw);
  }
  return series_scale(acc, a.constant);
}

TruncSeries series_component(const TruncSeries& a, int degree) {
  TruncSeries s = series_const(a.rank, a.max_degree, degree == 0 ? a.constant : Int(0));
  for (const auto& [m, c] : a.coeff)
    if (int(m.size()) == degree) s.coeff.emplace(m, c);
  return s;
}

std::string series_str(const TruncSeries& a) {
  std::ostringstream os;
  bool first = true;
  if (a.constant != 0 || a.coeff.empty()) {
    os << a.constant;
    first = false;
  }
  for (const auto& [m, c] : a.coeff) {
    if (!first) os << (c > 0 ? " + " : " - ");
    else if (c < 0) os << "-";
    first = false;
    Int ac = abs(c);
    if (ac != 1) os << ac << "*";
    for (size_t i = 0; i < m.size(); ++i) os << (i ? "." : "") << "x" << int(m[i]);
  }
  return os.str();
}

TruncSeries expand(const FreeWord& w, int max_degree) {
  TruncSeries s = series_const(w.rank, max_degree, 1);
  for (const auto& [g, e] : w.syllables) {
    // (1 + x_g)^e truncated; generalized binomial handles e < 0
    TruncSeries p = series_const(w.rank, max_degree, 1);
    Monomial m;
    Int exp_val = e;
    for (int k = 1; k <= max_degree; ++k) {
      m.push_back((unsigned char)g);
      Int b;
      if (e >= 0) {
        if (k > e) break;
        mpz_bin_uiui(b.get_mpz_t(), (unsigned long)e, (unsigned long)k);
      } else {
        mpz_bin_ui(b.get_mpz_t(), exp_val.get_mpz_t(), (unsigned long)k);
      }
      p.coeff.emplace(m, b);
    }
    s = series_mul(s, p);
  }
  return s;
}

TruncSeries left_letter_quotient(const TruncSeries& s, int i) {
  TruncSeries r = series_const(s.rank, s.max_degree, 0);
  for (const auto& [m, c] : s.coeff) {
    if (int(m[0]) != i) continue;
    if (m.size() == 1) {
      r.constant += c;
    } else {
      Monomial tail(m.begin() + 1, m.end());
      add_term(r, tail, c);
    }
  }
  return r;
}

MonomialModule::MonomialModule(int r, int n) : rank(r), max_degree(n) {
  degree_offset.assign(size_t(n) + 2, 0);
  int off = 0;
  long pw = 1;
  for (int d = 1; d <= n; ++d) {
    degree_offset[size_t(d)] = off;
    pw *= rank;
    off += int(pw);
  }
  degree_offset[size_t(n) + 1] = off;
}

int MonomialModule::dim() const { return degree_offset[size_t(max_degree) + 1]; }

int MonomialModule::index(const Monomial& m) const {
  int d = int(m.size());
  assert(d >= 1 && d <= max_degree);
  long local = 0;
  for (unsigned char l : m) local = local * rank + (l - 1);
  return degree_offset[size_t(d)] + int(local);
}

Monomial MonomialModule::monomial(int idx) const {
  int d = 1;
  while (idx >= degree_offset[size_t(d) + 1]) ++d;
  long local = idx - degree_offset[size_t(d)];
  Monomial m;
  m.resize(size_t(d));
  for (int k = d - 1; k >= 0; --k) {
    m[size_t(k)] = (unsigned char)(local % rank + 1);
    local /= rank;
  }
  return m;
}

std::vector<Int> MonomialModule::coords(const TruncSeries& s) const {
  if (s.rank != rank || s.max_degree != max_degree || s.constant != 0)
    throw DimensionMismatch("MonomialModule::coords: incompatible series");
  std::vector<Int> v;
  v.resize(size_t(dim()));
  for (const auto& [m, c] : s.coeff) v[size_t(index(m))] = c;
  return v;
}

TruncSeries MonomialModule::series(const std::vector<Int>& v) const {
  TruncSeries s = series_const(rank, max_degree, 0);
  for (int i = 0; i < dim(); ++i)
    if (v[size_t(i)] != 0) s.coeff.emplace(monomial(i), v[size_t(i)]);
  return s;
}

long witt_number(int rank, int weight) {
  // (1/k) sum_{d | k} mu(d) rank^{k/d}
  auto mobius = [](int n) {
    int m = 1;
    for (int p = 2; p * p <= n; ++p)
      if (n % p == 0) {
        n /= p;
        if (n % p == 0) return 0;
        m = -m;
      }
    if (n > 1) m = -m;
    return m;
  };
  long total = 0;
  for (int d = 1; d <= weight; ++d) {
    if (weight % d != 0) continue;
    long pw = 1;
    for (int i = 0; i < weight / d; ++i) pw *= rank;
    total += mobius(d) * pw;
  }
  return total / weight;
}

HallBasis hall_basis(int rank, int max_weight) {
  HallBasis h;
  h.rank = rank;
  h.max_weight = max_weight;
  h.by_weight.assign(size_t(max_weight) + 1, {});
  for (int i = 1; i <= rank; ++i) {
    h.items.push_back(BasicCommutator{1, i, -1, -1});
    h.by_weight[1].push_back(int(h.items.size()) - 1);
  }
  for (int w = 2; w <= max_weight; ++w) {
    // [u, v]: wt u + wt v = w, u > v, and if u = [u1,u2] then u2 <= v
    for (int wu = 1; wu < w; ++wu) {
      int wv = w - wu;
      for (int u : h.by_weight[size_t(wu)])
        for (int v : h.by_weight[size_t(wv)]) {
          if (u <= v) continue;
          if (h.items[size_t(u)].weight > 1 && h.items[size_t(u)].right > v) continue;
          h.items.push_back(BasicCommutator{w, 0, u, v});
          h.by_weight[size_t(w)].push_back(int(h.items.size()) - 1);
        }
    }
  }
  return h;
}

FreeWord commutator_word(const HallBasis& h, int item) {
  const BasicCommutator& c = h.items[size_t(item)];
  if (c.weight == 1) return word_gen(h.rank, c.gen);
  return word_comm(commutator_word(h, c.left), commutator_word(h, c.right));
}

std::string commutator_str(const HallBasis& h, int item) {
  const BasicCommutator& c = h.items[size_t(item)];
  if (c.weight == 1) return "x" + std::to_string(c.gen);
  return "[" + commutator_str(h, c.left) + "," + commutator_str(h, c.right) + "]";
}

TruncSeries lie_element(const HallBasis& h, int item, int max_degree) {
  const BasicCommutator& c = h.items[size_t(item)];
  if (c.weight > max_degree) throw Error("lie_element: weight exceeds degree bound");
  TruncSeries e = expand(commutator_word(h, item), max_degree);
  e.constant -= 1;
  return series_component(e, c.weight);
}

}  // namespace dimlab
