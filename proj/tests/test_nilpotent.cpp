#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dimlab/nilpotent.hpp"

using namespace dimlab;

namespace {

NilElement emb(const NilContext& ctx, const std::string& w) {
  return nil_embed(ctx, parse_word(w, ctx.rank));
}

std::vector<NilElement> gamma2_gens(const NilContext& ctx) {
  std::vector<NilElement> out;
  for (int w = 2; w <= ctx.cls; ++w)
    for (int item : ctx.hall.stratum(w))
      out.push_back(nil_embed(ctx, commutator_word(ctx.hall, item)));
  return out;
}

long as_long(const Int& x) {
  REQUIRE(x.fits_slong_p());
  return x.get_si();
}

}  // namespace

TEST_CASE("embedding and leading weights") {
  NilContext c3(2, 3);
  CHECK(nil_embed(c3, word_identity(2)).is_identity());
  CHECK(nil_embed(c3, word_identity(2)).leading_weight() == 4);
  CHECK(emb(c3, "[x1,x2]").leading_weight() == 2);

  NilContext c2(2, 2);
  CHECK(emb(c2, "[[x1,x2],x1]").is_identity());
}

TEST_CASE("element arithmetic is faithful through words") {
  std::mt19937 rng(17);
  NilContext ctx(2, 3);
  for (int trial = 0; trial < 30; ++trial) {
    FreeWord u = word_identity(2), v = word_identity(2);
    for (int i = 0; i < 4; ++i) {
      u = word_mul(u, word_gen(2, 1 + int(rng() % 2), long(rng() % 3) - 1));
      v = word_mul(v, word_gen(2, 1 + int(rng() % 2), long(rng() % 3) - 1));
    }
    NilElement a = nil_embed(ctx, u), b = nil_embed(ctx, v);
    CHECK(nil_mul(a, b).series == expand(word_mul(u, v), 3));
    CHECK(nil_inv(a).series == expand(word_inv(u), 3));
    CHECK(nil_pow(b, 5).series == expand(word_pow(v, 5), 3));
  }
}

TEST_CASE("subgroup_close on cyclic overlaps") {
  NilContext ctx(1, 2);
  NilSubgroup s = subgroup_close(ctx, {emb(ctx, "x1^2"), emb(ctx, "x1^3")});
  CHECK(s.gens.size() == 1);
  CHECK(s.contains(emb(ctx, "x1")));

  CHECK(subgroup_close(ctx, {}).is_trivial());
}

TEST_CASE("subgroup_close echelon pivots") {
  NilContext ctx(2, 2);
  NilSubgroup s = subgroup_close(ctx, {emb(ctx, "x1^2"), emb(ctx, "[x1,x2]")});
  REQUIRE(s.gens.size() == 2);
  CHECK(s.gens[0].leading_weight() == 1);
  CHECK(s.gens[1].leading_weight() == 2);

  // membership oracle on a window of exponent pairs
  for (long a = -2; a <= 2; ++a)
    for (long b = -2; b <= 2; ++b) {
      NilElement g = nil_mul(nil_pow(emb(ctx, "x1"), 2 * a),
                             nil_pow(emb(ctx, "[x1,x2]"), b));
      CHECK(s.contains(g));
      NilElement odd = nil_mul(nil_pow(emb(ctx, "x1"), 2 * a + 1),
                               nil_pow(emb(ctx, "[x1,x2]"), b));
      CHECK(!s.contains(odd));
    }
  CHECK(!s.contains(emb(ctx, "x2")));
}

TEST_CASE("subgroup_close is idempotent and order independent") {
  std::mt19937 rng(23);
  NilContext ctx(2, 3);
  std::vector<std::string> words = {"x1^2", "x2^2", "[x1,x2]", "x1^4 [x1,x2]",
                                    "[[x1,x2],x2]"};
  std::vector<NilElement> base;
  for (const auto& w : words) base.push_back(emb(ctx, w));
  NilSubgroup reference = subgroup_close(ctx, base);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<NilElement> gens = base;
    std::shuffle(gens.begin(), gens.end(), rng);
    NilSubgroup s = subgroup_close(ctx, gens);
    NilSubgroup again = subgroup_close(ctx, s.gens);
    CHECK(s == reference);
    CHECK(again == s);
  }
}

TEST_CASE("membership holds for random products of generators") {
  std::mt19937 rng(31);
  NilContext ctx(2, 3);
  std::vector<NilElement> gens = {emb(ctx, "x1^2"), emb(ctx, "[x1,x2]"),
                                  emb(ctx, "x2^4")};
  NilSubgroup s = subgroup_close(ctx, gens);
  for (const auto& g : gens) CHECK(s.contains(g));
  for (int trial = 0; trial < 100; ++trial) {
    NilElement g = nil_embed(ctx, word_identity(2));
    for (int i = 0; i < 4; ++i) {
      const NilElement& pick = gens[rng() % gens.size()];
      g = nil_mul(g, nil_pow(pick, long(rng() % 5) - 2));
    }
    CHECK(s.contains(g));
  }
  // factorization reproduces the element
  for (int trial = 0; trial < 20; ++trial) {
    NilElement g = nil_mul(nil_pow(gens[0], long(rng() % 3)),
                           nil_mul(nil_pow(gens[1], long(rng() % 3)),
                                   nil_pow(gens[2], long(rng() % 3) - 1)));
    auto e = s.factorize(g);
    REQUIRE(e.has_value());
    NilElement rebuilt = nil_embed(ctx, word_identity(2));
    for (size_t i = 0; i < s.gens.size(); ++i)
      rebuilt = nil_mul(rebuilt, nil_pow(s.gens[i], as_long((*e)[i])));
    CHECK(rebuilt.series == g.series);
  }
}

TEST_CASE("normal closure") {
  NilContext ctx(2, 2);
  NilSubgroup n = normal_closure(ctx, {emb(ctx, "x1")});
  CHECK(n.contains(emb(ctx, "[x1,x2]")));
  CHECK(!n.contains(emb(ctx, "x2")));

  NilContext c1(1, 2);
  NilSubgroup m = normal_closure(c1, {emb(c1, "x1^2")});
  CHECK(m.contains(emb(c1, "x1^2")));
  CHECK(!m.contains(emb(c1, "x1")));

  // S = <x1^2, x2^2, gamma_2> is already stable under conjugation
  NilContext c3(2, 3);
  std::vector<NilElement> sg = {emb(c3, "x1^2"), emb(c3, "x2^2")};
  for (auto& g : gamma2_gens(c3)) sg.push_back(g);
  NilSubgroup s_sub = subgroup_close(c3, sg);
  NilSubgroup s_norm = normal_closure(c3, sg);
  CHECK(s_sub == s_norm);
  CHECK(s_sub.contains(nil_comm(emb(c3, "x1^2"), emb(c3, "x2"))));
}

TEST_CASE("commutator subgroups") {
  NilContext ctx(2, 3);
  NilSubgroup f = full_group(ctx);
  NilSubgroup der = commutator_subgroup(f, f);
  CHECK(der == gamma_subgroup(ctx, 2));

  NilSubgroup trivial = subgroup_close(ctx, {});
  CHECK(commutator_subgroup(f, trivial).is_trivial());
}

TEST_CASE("gamma strata and meet_gamma") {
  NilContext ctx(2, 3);
  NilSubgroup f = full_group(ctx);
  CHECK(meet_gamma(f, 2) == gamma_subgroup(ctx, 2));
  CHECK(meet_gamma(subgroup_close(ctx, {}), 2).is_trivial());

  // relator-derived weight-2 parts: R = <<x1^2, x2^4>> in class 2
  NilContext c2(2, 2);
  NilSubgroup r = normal_closure(c2, {emb(c2, "x1^2"), emb(c2, "x2^4")});
  NilSubgroup r2 = meet_gamma(r, 2);
  CHECK(r2.contains(emb(c2, "[x1,x2]^2")));  // [x1^2,x2] = [x1,x2]^2 mod gamma_3
  for (long a : {0L, 2L})
    for (long b : {0L, 4L}) {
      NilElement g = nil_mul(nil_pow(emb(c2, "x1"), a), nil_pow(emb(c2, "x2"), b));
      CHECK(r.contains(g));
    }
  CHECK(!r.contains(emb(c2, "x1")));
  CHECK(!r.contains(emb(c2, "x2^2")));
}

TEST_CASE("identity: gamma_2(R) meet gamma_3 equals [R meet gamma_2, R]") {
  NilContext ctx(2, 3);
  std::vector<std::vector<std::string>> relator_sets = {
      {"x1^2", "x2^2"}, {"x1^2", "x2^4"}, {"x1^4"},         {"x1^3", "x2^3"},
      {"x1^2 [x1,x2]"}, {"x1^6", "x2^2"}, {"[x1,x2]"},      {"x1^2", "x2^8"},
      {"x1^5", "x2^5"}, {"x1^4", "x2^2"}};
  for (const auto& rs : relator_sets) {
    std::vector<NilElement> rel;
    for (const auto& w : rs) rel.push_back(emb(ctx, w));
    NilSubgroup r = normal_closure(ctx, rel);
    NilSubgroup lhs = meet_gamma(commutator_subgroup(r, r), 3);
    NilSubgroup rhs = commutator_subgroup(meet_gamma(r, 2), r);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("section invariants") {
  NilContext c2(2, 2);
  NilSubgroup f = full_group(c2);
  NilSubgroup g2 = gamma_subgroup(c2, 2);
  Section fab = section_invariants(f, g2);
  CHECK(fab.group.invariant_factors() == std::vector<Int>{0, 0});

  Section trivial = section_invariants(g2, g2);
  CHECK(trivial.group.is_trivial());

  // K = (R meet gamma_2)/gamma_2(R) for R = <<x1^2, x2^2, gamma_2 F>>:
  // by bilinearity of commutators mod gamma_3, the weight-2 part of
  // gamma_2(R) is generated by [x1^2,x2^2] = [x1,x2]^4, so K = Z/4.
  std::vector<NilElement> rel = {emb(c2, "x1^2"), emb(c2, "x2^2")};
  for (auto& g : gamma2_gens(c2)) rel.push_back(g);
  NilSubgroup r = normal_closure(c2, rel);
  NilSubgroup num = meet_gamma(r, 2);
  NilSubgroup den = commutator_subgroup(r, r);
  Section k = section_invariants(num, den);
  CHECK(k.group.invariant_factors() == std::vector<Int>{4});

  CHECK_THROWS_AS(section_invariants(g2, f), NotSubgroup);
}

TEST_CASE("induced homomorphisms satisfy coproduct laws") {
  NilContext c2(2, 2), c4(4, 2);
  std::vector<FreeWord> i1 = {parse_word("x1", 4), parse_word("x2", 4)};
  std::vector<FreeWord> i2 = {parse_word("x3", 4), parse_word("x4", 4)};
  std::vector<FreeWord> fold = {parse_word("x1", 2), parse_word("x2", 2),
                                parse_word("x1", 2), parse_word("x2", 2)};
  NilHom h1 = induced_hom(c2, c4, i1);
  NilHom h2 = induced_hom(c2, c4, i2);
  NilHom hf = induced_hom(c4, c2, fold);

  NilElement g = emb(c2, "[x1,x2] x1^3");
  CHECK(h1.apply(g).leading_weight() == g.leading_weight());
  CHECK(hf.apply(h1.apply(g)).series == g.series);
  CHECK(hf.apply(h2.apply(g)).series == g.series);

  std::vector<FreeWord> ids = {parse_word("x1", 2), parse_word("x2", 2)};
  NilHom hid = induced_hom(c2, c2, ids);
  CHECK(hid.apply(g).series == g.series);
}
