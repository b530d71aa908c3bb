#include <gtest/gtest.h>

#include <random>
#include <set>

#include "edl/error.hpp"
#include "edl/galois.hpp"

using namespace edl;

namespace {

Group grp(GroupKind k, unsigned p, unsigned m, int r, int e = 1, int n = 2) {
  return Group(k, Ring::make(Field::make(p, 1, m), r, e), n);
}

Mat random_element(const Group& G, std::mt19937_64& rng) {
  const Ring& R = G.ring();
  Mat u = G.identity();
  for (int s = 0; s < 10; ++s) {
    int i = static_cast<int>(rng() % G.n()), j = static_cast<int>(rng() % G.n());
    if (i != j) u = G.mul(u, G.elementary(i, j, R.element(rng() % R.size())));
  }
  if (G.kind() == GroupKind::GL) {
    auto units = R.units();
    std::vector<RingElem> d(G.n(), R.one());
    d[0] = units[rng() % units.size()];
    u = G.mul(u, G.diag(d));
  }
  return u;
}

}  // namespace

TEST(Galois, LangExamples) {
  auto G = grp(GroupKind::SL, 3, 2, 2);
  const Ring& R = G.ring();
  const Field& F = G.field();
  RingElem c = R.add(R.scalar(F.gen_pow(1)), R.z_pow(1, F.gen_pow(5)));
  Mat g = G.from_rows({{R.one(), R.zero()}, {c, R.one()}});
  Mat want = G.from_rows({{R.one(), R.zero()}, {R.sub(R.phi(c, 1), c), R.one()}});
  EXPECT_EQ(lang(G, g, {1, 0}), want);
  Mat fixed = G.from_rows({{R.one(), R.from_int(1)}, {R.zero(), R.one()}});
  EXPECT_TRUE(G.is_identity(lang(G, fixed, {1, 0})));
}

TEST(Galois, LangLeftInvariance) {
  std::mt19937_64 rng(7);
  auto G = grp(GroupKind::GL, 3, 2, 3);
  auto G3 = grp(GroupKind::GL, 3, 1, 3);
  auto fixed = G3.elements();
  for (int t = 0; t < 200; ++t) {
    Mat h = random_element(G, rng);
    Mat g = embed(G3, G, fixed[rng() % fixed.size()]);
    EXPECT_EQ(lang(G, G.mul(g, h), {1, 0}), lang(G, h, {1, 0}));
  }
}

TEST(Galois, FixedGroups) {
  // phi and sigma together cut out the group over the unramified ring of length 2
  auto G = grp(GroupKind::SL, 3, 1, 3, 2);
  auto H = fixed_group({{1, 0}, {0, 1}});
  auto elems = H->elements(G);
  EXPECT_EQ(elems.size(), 648u);
  auto sub = G.ring().fixed_subring({{1, 0}, {0, 1}});
  std::set<std::uint64_t> ok;
  for (const auto& a : sub) ok.insert(G.ring().index(a));
  EXPECT_EQ(sub.size(), 9u);
  for (const auto& x : elems)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) EXPECT_TRUE(ok.count(G.ring().index(x.at(i, j))));

  auto G2 = grp(GroupKind::SL, 3, 1, 2, 2);
  EXPECT_EQ(fixed_group({{0, 1}})->order(G2), 24u);
  // phi alone over F_9: the F_3 points
  auto G9 = grp(GroupKind::SL, 3, 2, 2);
  EXPECT_EQ(fixed_group({{1, 0}})->order(G9), 648u);
}

TEST(Galois, LangSectionsAcrossTwists) {
  auto G = grp(GroupKind::SL, 3, 1, 2);
  for (const auto& g : G.elements()) {
    if (G.is_identity(g)) continue;
    std::uint64_t t = G.element_order(g);
    if (t > 6) continue;
    auto s = lang_section(G, {g, {1, 0}, 1});
    EXPECT_EQ(s.level(), t);
    const ExtGroup& X = *s.group;
    EXPECT_TRUE(X.equal(X.mul(s.lambda, X.inv(X.apply({1, 0}, s.lambda))), X.up(g)));
    Mat eps = lang_twist(s, {1, 0});
    EXPECT_TRUE(G.contains(eps));
    EXPECT_EQ(G.trace(eps), G.trace(G.inv(g)));
  }
}

TEST(Galois, LangSectionGL) {
  auto G = grp(GroupKind::GL, 3, 1, 2);
  const Ring& R = G.ring();
  Mat g = G.diag({R.from_int(2), R.one()});
  auto s = lang_section(G, {g, {1, 0}, 1}, {.residue_borel = true});
  const ExtGroup& X = *s.group;
  EXPECT_TRUE(X.equal(X.mul(s.lambda, X.inv(X.apply({1, 0}, s.lambda))), X.up(g)));
  EXPECT_TRUE(X.ring().field().is_zero(s.lambda.at(1, 0)[0]));
}

TEST(Galois, TwistedCountCentralTwist) {
  // {x : -phi(x) = x} counted at level 2 directly, against the section route
  auto G = grp(GroupKind::SL, 3, 1, 2);
  const Ring& R = G.ring();
  Mat g = G.scalar(R.from_int(-1));
  Group G9 = at_coefficient_level(G, 2);
  Mat g9 = embed(G, G9, g);
  std::uint64_t direct = 0;
  G9.enumerate([&](const Mat& x) {
    if (G9.mul(g9, G9.apply({1, 0}, x)) == x) ++direct;
  });
  EXPECT_EQ(direct, 648u);
  auto s = lang_section(G, {g, {1, 0}, 1});
  std::uint64_t routed = 0;
  const ExtGroup& X = *s.group;
  twisted_fixed_enumerate(G, s, [&](const Mat& w) {
    ExtMat x = X.mul(s.lambda, X.up(w));
    if (X.equal(X.mul(X.up(g), X.apply({1, 0}, x)), x)) ++routed;
  });
  EXPECT_EQ(routed, 648u);
}

TEST(Galois, TrivialTwist) {
  auto G = grp(GroupKind::SL, 3, 1, 2);
  auto s = lang_section(G, {G.identity(), {1, 0}, 1});
  EXPECT_TRUE(s.trivial);
  EXPECT_TRUE(G.is_identity(lang_twist(s, {1, 0})));
  std::uint64_t n = 0;
  twisted_fixed_enumerate(G, s, [&](const Mat&) { ++n; });
  EXPECT_EQ(n, 648u);
}

TEST(Galois, RestrictedSections) {
  auto G = grp(GroupKind::SL, 3, 1, 2);
  const Ring& R = G.ring();
  // Artin-Schreier: c^3 - c = 1 first has roots over F_27
  Mat y = G.from_rows({{R.one(), R.zero()}, {R.z_pow(1), R.one()}});
  auto s = restricted_lang_section(G, y, LangShape::LowerUnipotent1, 1);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(s->k, 3u);
  const Group& H = *s->group;
  EXPECT_EQ(lang(H, s->lambda, {1, 0}), embed(G, H, y));
  EXPECT_FALSE(restricted_lang_section(G, y, LangShape::LowerUnipotent1, 1, 2).has_value());

  Mat t = G.diag({R.from_int(-1), R.from_int(-1)});
  auto st = restricted_lang_section(G, t, LangShape::Torus, 1);
  ASSERT_TRUE(st.has_value());
  EXPECT_EQ(st->k, 2u);
  EXPECT_EQ(lang(*st->group, st->lambda, {1, 0}), embed(G, *st->group, t));

  auto s1 = restricted_lang_section(G, G.identity(), LangShape::Torus, 1);
  ASSERT_TRUE(s1.has_value());
  EXPECT_EQ(s1->k, 1u);
}

TEST(Galois, SectionBudget) {
  auto G = grp(GroupKind::SL, 3, 1, 2);
  const Ring& R = G.ring();
  Mat g = G.from_rows({{R.one(), R.one()}, {R.zero(), R.one()}});
  EXPECT_THROW(lang_section(G, {g, {1, 0}, 1}, {.level_cap = 2}), Error);
}
