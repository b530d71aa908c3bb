#include <gtest/gtest.h>

#include <random>
#include <set>
#include <unordered_set>

#include "edl/claims.hpp"
#include "edl/classfn.hpp"
#include "edl/error.hpp"
#include "edl/galois.hpp"
#include "edl/matgrp.hpp"

using namespace edl;

namespace {

Group grp(GroupKind k, unsigned p, int r, int e = 1, unsigned m = 1) {
  return Group(k, Ring::make(Field::make(p, 1, m), r, e), 2);
}

Mat lower(const Group& G, int val, Elem c = 1) {
  const Ring& R = G.ring();
  return G.from_rows({{R.one(), R.zero()}, {R.z_pow(val, c), R.one()}});
}

using KeySet = std::unordered_set<MatKey, MatKeyHash>;

// Direct evaluation of a descriptor's conditions on a point of Gm (the ambient group at some coefficient level).
bool satisfies(const VarietyDescriptor& V, const Group& Gm, const Mat& w) {
  for (const auto& c : V.conditions) {
    Mat left = embed(V.ambient, Gm, c.left);
    Mat y = Gm.mul(Gm.inv(w), Gm.apply(c.endo, w));
    if (c.double_coset) {
      if (!in_bruhat_cell(Gm, y, left)) return false;
    } else if (!lift_subgroup(c.target, V.ambient, Gm)->contains(Gm, Gm.mul(Gm.inv(left), y))) {
      return false;
    }
  }
  return true;
}

std::vector<Mat> solutions(const VarietyDescriptor& V, const Group& Gm) {
  std::vector<Mat> out;
  Gm.enumerate([&](const Mat& w) {
    if (satisfies(V, Gm, w)) out.push_back(w);
  });
  return out;
}

std::vector<Mat> fixed_points(const Group& G, const std::vector<RingEndo>& endos) {
  std::vector<Mat> out;
  G.enumerate([&](const Mat& g) {
    for (const auto& s : endos)
      if (!(G.apply(s, g) == g)) return;
    out.push_back(g);
  });
  return out;
}

}  // namespace

// ---- coset canonical forms ----

TEST(CosetCanonical, InvariantUnderRightMultiplication) {
  auto G = grp(GroupKind::SL, 3, 2);
  auto all = G.elements();
  std::mt19937_64 rng(11);
  for (auto H : {Subgroup::pattern(Shape::B), Subgroup::pattern(Shape::U), Subgroup::pattern(Shape::U, 1),
                 Subgroup::conjugate(Subgroup::pattern(Shape::B), G.weyl())}) {
    CosetCanonicalizer canon(G, H);
    auto hs = H->elements(G);
    for (int t = 0; t < 10000; ++t) {
      const Mat& g = all[rng() % all.size()];
      const Mat& h = hs[rng() % hs.size()];
      ASSERT_EQ(canon(g), canon(G.mul(g, h))) << H->describe();
    }
  }
}

TEST(CosetCanonical, CountsCosets) {
  auto G = grp(GroupKind::SL, 3, 2);
  for (auto H : {Subgroup::pattern(Shape::B), Subgroup::pattern(Shape::U), Subgroup::pattern(Shape::U, 1),
                 Subgroup::conjugate(Subgroup::pattern(Shape::B), G.weyl())}) {
    CosetCanonicalizer canon(G, H);
    KeySet keys;
    G.enumerate([&](const Mat& g) { keys.insert(canon.key(g)); });
    EXPECT_EQ(keys.size(), G.order() / H->order(G)) << H->describe();
  }
  EXPECT_TRUE(CosetCanonicalizer(G, Subgroup::pattern(Shape::B)).structured());
  EXPECT_FALSE(CosetCanonicalizer(G, Subgroup::conjugate(Subgroup::pattern(Shape::B), G.weyl())).structured());
}

TEST(CosetCanonical, UpperTriangularReducesToDiagonal) {
  auto G = grp(GroupKind::GL, 3, 2);
  auto U = Subgroup::pattern(Shape::U);
  Subgroup::pattern(Shape::B)->enumerate(G, [&](const Mat& b) {
    Mat c = coset_canonical_form(G, b, U);
    EXPECT_TRUE(G.ring().is_zero(c.at(0, 1)));
    EXPECT_EQ(c.at(0, 0), b.at(0, 0));
  });
}

TEST(CosetCanonical, OrbitFallbackBudget) {
  auto G = grp(GroupKind::SL, 3, 2);
  auto H = Subgroup::conjugate(Subgroup::pattern(Shape::B), G.weyl());
  EXPECT_THROW(CosetCanonicalizer(G, H, 10), Error);
}

// ---- Bruhat cells and descriptors ----

TEST(Varieties, BruhatCellsAreUnionsOfDoubleCosets) {
  for (unsigned m : {1u, 2u}) {
    auto G = grp(GroupKind::SL, 3, 2, 1, m);
    auto t = double_cosets(G, Subgroup::pattern(Shape::B), Subgroup::pattern(Shape::B));
    EXPECT_EQ(t.cosets.size(), 4u);
    const std::vector<Mat> cells{G.identity(), G.weyl(), lower(G, 1)};
    std::vector<std::set<std::size_t>> members(cells.size());
    G.enumerate([&](const Mat& g) {
      int hits = 0;
      for (std::size_t c = 0; c < cells.size(); ++c)
        if (in_bruhat_cell(G, g, cells[c])) ++hits, members[c].insert(t.which(G, g));
      EXPECT_EQ(hits, 1);
    });
    // each finite double coset lies in one cell; the cell of e holds two of them
    EXPECT_EQ(members[0].size(), 1u);
    EXPECT_EQ(members[1].size(), 1u);
    EXPECT_EQ(members[2].size(), 2u);
  }
}

TEST(Varieties, UnipotentIntersections) {
  auto G = grp(GroupKind::SL, 3, 2);
  EXPECT_EQ(unipotent_intersection(G, G.identity())->order(G), 9u);
  EXPECT_EQ(unipotent_intersection(G, G.weyl())->order(G), 1u);
  EXPECT_EQ(unipotent_intersection(G, lower(G, 1))->describe(), Subgroup::pattern(Shape::U, 1)->describe());
}

TEST(Varieties, HashIsStable) {
  auto G = grp(GroupKind::SL, 3, 2);
  auto a = build_classical(G, G.identity(), ClassicalFlavor::Quotiented);
  auto b = build_classical(grp(GroupKind::SL, 3, 2), G.identity(), ClassicalFlavor::Quotiented);
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_EQ(a.hash(), "f2db8398f05d9922");
  EXPECT_EQ(a.hash().size(), 16u);
  EXPECT_NE(a.hash(), build_classical(G, G.weyl(), ClassicalFlavor::Quotiented).hash());
  EXPECT_NE(a.hash(), build_classical(G, G.identity(), ClassicalFlavor::LangPreimage).hash());
}

// ---- twisted counts ----

TEST(TwistedCount, FlagSpace) {
  auto G = grp(GroupKind::SL, 3, 2);
  VarietyDescriptor V(G);
  V.conditions.push_back({{1, 0}, G.identity(), Subgroup::whole(), false});
  V.support = Subgroup::whole();
  V.quotient = Subgroup::pattern(Shape::B);
  for (unsigned m : {1u, 2u}) {
    Group Gm = at_coefficient_level(G, m);
    EXPECT_EQ(twisted_count(V, G.identity(), m), Gm.order() / Subgroup::pattern(Shape::B)->order(Gm));
  }
}

TEST(TwistedCount, LangSteinberg) {
  // every twist g phi^m has exactly |G(F_{q^m})| fixed points on the ambient group
  for (int r : {1, 2, 3}) {
    auto G = grp(GroupKind::SL, 3, r);
    VarietyDescriptor V(G);
    V.conditions.push_back({{1, 0}, G.identity(), Subgroup::whole(), false});
    auto t = ClassTable::build(G);
    std::vector<unsigned> ms{1};
    if (r <= 2) ms.push_back(2);
    for (unsigned m : ms) {
      std::uint64_t want = at_coefficient_level(G, m).order();
      for (std::size_t i = 0; i < t->size(); ++i) {
        if (m == 2 && i % 4) continue;  // a spread of classes at the larger level
        EXPECT_EQ(twisted_count(V, (*t)[i].rep, m), want) << "r=" << r << " m=" << m << " class " << i;
      }
    }
  }
}

TEST(TwistedCount, CoverOfOneIsPermutationCharacter) {
  auto G = grp(GroupKind::SL, 3, 2);
  auto V = build_classical(G, G.identity(), ClassicalFlavor::Quotiented);
  auto t = ClassTable::build(G);
  auto chi = permutation_character(t, Subgroup::pattern(Shape::U)->elements(G));
  LangCache cache;
  CountOptions opt;
  opt.cache = &cache;
  for (unsigned m : {1u, 2u})
    for (std::size_t i = 0; i < t->size(); ++i)
      EXPECT_EQ(static_cast<long long>(twisted_count(V, (*t)[i].rep, m, opt)), chi[i].to_integer())
          << "m=" << m << " class " << i;
}

TEST(TwistedCount, RationalPointsOfLangPreimageOffU) {
  // a phi-fixed point has trivial Lang image, which never lies in yU for y outside U
  auto G = grp(GroupKind::SL, 3, 2);
  auto V = build_classical(G, lower(G, 1), ClassicalFlavor::LangPreimage);
  EXPECT_EQ(twisted_count(V, G.identity(), 1), 0u);
  EXPECT_EQ(twisted_count(V, G.identity(), 2), 0u);
}

TEST(TwistedCount, ClassInvariance) {
  auto G = grp(GroupKind::SL, 3, 2);
  auto V = build_classical(G, lower(G, 1), ClassicalFlavor::Quotiented);
  auto t = ClassTable::build(G);
  std::mt19937_64 rng(3);
  auto all = G.elements();
  for (std::size_t i = 0; i < t->size(); ++i) {
    auto base = twisted_count(V, (*t)[i].rep, 1);
    for (int s = 0; s < 3; ++s) {
      const Mat& h = all[rng() % all.size()];
      EXPECT_EQ(twisted_count(V, G.conj(h, (*t)[i].rep), 1), base) << "class " << i;
    }
  }
}

TEST(TwistedCount, ThreadsAgree) {
  auto G = grp(GroupKind::SL, 3, 2);
  auto V = build_classical(G, G.weyl(), ClassicalFlavor::X);
  auto t = ClassTable::build(G);
  CountOptions par;
  par.threads = 4;
  for (std::size_t i = 0; i < t->size(); i += 3)
    EXPECT_EQ(twisted_count(V, (*t)[i].rep, 2), twisted_count(V, (*t)[i].rep, 2, par));
}

TEST(TwistedCount, RejectsBadInput) {
  auto G = grp(GroupKind::SL, 3, 2);
  auto V = build_classical(G, G.identity(), ClassicalFlavor::Quotiented);
  CountOptions tiny;
  tiny.budget = 100;
  try {
    twisted_count(V, G.identity(), 1, tiny);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
  VarietyDescriptor empty(G);
  EXPECT_THROW(twisted_count(empty, G.identity(), 1), Error);
}

TEST(Equiv, IdenticalDescriptorsAgree) {
  auto G = grp(GroupKind::SL, 3, 2);
  auto V = build_classical(G, lower(G, 1), ClassicalFlavor::Quotiented);
  auto t = ClassTable::build(G);
  std::vector<Mat> reps;
  for (const auto& c : t->classes()) reps.push_back(c.rep);
  auto rep = equiv_test(V, V, reps, {1, 2}, 0);
  EXPECT_TRUE(rep.consistent);
  EXPECT_EQ(rep.rows.size(), 2 * reps.size());
}

// ---- stability of solution sets ----

TEST(Varieties, SolutionSetsAreStable) {
  std::mt19937_64 rng(5);
  auto check = [&](const VarietyDescriptor& V, const Group& Gm, const std::vector<RingEndo>& sigma) {
    auto sol = solutions(V, Gm);
    ASSERT_FALSE(sol.empty()) << V.label;
    auto fixed = fixed_points(V.ambient, sigma);
    std::vector<Mat> H;
    if (V.quotient) H = lift_subgroup(V.quotient, V.ambient, Gm)->elements(Gm);
    for (int t = 0; t < 1000; ++t) {
      const Mat& x = sol[rng() % sol.size()];
      Mat h = embed(V.ambient, Gm, fixed[rng() % fixed.size()]);
      EXPECT_TRUE(satisfies(V, Gm, Gm.mul(h, x))) << V.label;
      if (!H.empty()) EXPECT_TRUE(satisfies(V, Gm, Gm.mul(x, H[rng() % H.size()]))) << V.label;
    }
  };
  auto G = grp(GroupKind::SL, 3, 2);
  Group G9 = at_coefficient_level(G, 2);
  check(build_classical(G, G.identity(), ClassicalFlavor::Quotiented), G9, {{1, 0}});
  // L^-1(yU) for y = [[1, 0], [z, 1]] has no F_9-points: the z-entry of y u phi(y u) is 2z
  EXPECT_TRUE(solutions(build_classical(G, lower(G, 1), ClassicalFlavor::Quotiented), G9).empty());
  check(build_classical(G, G.weyl(), ClassicalFlavor::X), G9, {{1, 0}});

  auto R = grp(GroupKind::SL, 3, 3, 2);
  auto d = build_edl(R, R, lower(R, 1), {{1, 0}, {0, 1}});
  check(d.X, R, d.sigma);
  check(d.Xt, R, d.sigma);
}

TEST(Varieties, NormalisationIndependence) {
  // {g : g^-1 s(g) in b eps_s B for all s and one b in B}/B against {g : g^-1 s(g) in eps_s B}/B(lambda),
  // compared as sets of cosets gB
  auto B = Subgroup::pattern(Shape::B);
  auto compare = [&](const Group& Gm, const std::vector<RingEndo>& sigma, const std::vector<Mat>& eps) {
    CosetCanonicalizer canon(Gm, B);
    auto Bel = B->elements(Gm);
    KeySet before, after;
    Gm.enumerate([&](const Mat& g) {
      std::vector<Mat> L;
      for (const auto& s : sigma) L.push_back(Gm.mul(Gm.inv(g), Gm.apply(s, g)));
      bool normalised = true;
      for (std::size_t i = 0; i < sigma.size(); ++i)
        normalised = normalised && B->contains(Gm, Gm.mul(Gm.inv(eps[i]), L[i]));
      if (normalised) after.insert(canon.key(g));
      for (const auto& b : Bel) {
        bool all = true;
        for (std::size_t i = 0; i < sigma.size() && all; ++i)
          all = B->contains(Gm, Gm.mul(Gm.inv(Gm.mul(b, eps[i])), L[i]));
        if (all) {
          before.insert(canon.key(g));
          break;
        }
      }
    });
    EXPECT_FALSE(after.empty());
    EXPECT_EQ(before, after);
  };
  // ramified: Sigma = {phi, sigma} for lambda = [[1, 0], [z, 1]]
  auto R = grp(GroupKind::SL, 3, 3, 2);
  auto d = build_edl(R, R, lower(R, 1), {{1, 0}, {0, 1}});
  compare(R, d.sigma, d.eps);

  // unramified: "g^-1 phi(g) in b x B for some b" is membership in the finite double coset of x
  auto G = grp(GroupKind::SL, 3, 2);
  for (unsigned m : {1u, 2u}) {
    Group Gm = at_coefficient_level(G, m);
    auto t = double_cosets(Gm, B, B);
    CosetCanonicalizer canon(Gm, B);
    for (const Mat& x : {G.weyl(), lower(G, 1)}) {
      Mat xm = embed(G, Gm, x);
      KeySet before, after;
      Gm.enumerate([&](const Mat& g) {
        Mat L = Gm.mul(Gm.inv(g), Gm.apply({1, 0}, g));
        if (t.which(Gm, L) == t.which(Gm, xm)) before.insert(canon.key(g));
        if (B->contains(Gm, Gm.mul(Gm.inv(xm), L))) after.insert(canon.key(g));
      });
      if (m > 1) EXPECT_FALSE(after.empty());  // phi is trivial on F_q-points
      EXPECT_EQ(before, after) << "m=" << m;
    }
  }
}

// ---- extended varieties ----

TEST(Edl, RamifiedData) {
  auto R = grp(GroupKind::SL, 3, 3, 2);
  auto d = build_edl(R, R, lower(R, 1), {{1, 0}, {0, 1}});
  EXPECT_TRUE(R.is_identity(d.eps_phi));
  EXPECT_EQ(d.S0->describe(), Subgroup::pattern(Shape::U, 1)->describe());
  auto Sl = d.S_lambda->elements(R);
  auto Bl = d.B_lambda->elements(R);
  KeySet bl;
  for (const auto& b : Bl) bl.insert(R.key(b));
  for (const auto& s : Sl) EXPECT_TRUE(bl.count(R.key(s)));
  EXPECT_EQ(Sl.size() % d.S0->order(R), 0u);
  EXPECT_FALSE(a_set(d, 1).empty());
}

TEST(Edl, UnramifiedMatchesClassical) {
  auto G = grp(GroupKind::SL, 3, 2);
  auto t = ClassTable::build(G);
  for (const Mat& w : {G.identity(), G.weyl()}) {
    auto lp = small_lang_preimage(G, w);
    auto d = build_edl(G, lp.group, lp.lambda, {{1, 0}});
    auto X = build_classical(G, w, ClassicalFlavor::X);
    auto Xt = build_classical(G, w, ClassicalFlavor::Quotiented);
    for (std::size_t i = 0; i < t->size(); i += 2) {
      EXPECT_EQ(twisted_count(d.X, (*t)[i].rep, 1), twisted_count(X, (*t)[i].rep, 1));
      EXPECT_EQ(twisted_count(d.Xt, (*t)[i].rep, 1), twisted_count(Xt, (*t)[i].rep, 1));
    }
  }
}

TEST(Edl, UncertifiedComponentsAreRejected) {
  auto G = grp(GroupKind::SL, 3, 2);
  auto lp = small_lang_preimage(G, lower(G, 1));
  try {
    build_edl(G, lp.group, lp.lambda, {{1, 0}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedConnectedComponent);
  }
  // a quotient by a disconnected group is refused when counting
  auto R = grp(GroupKind::SL, 3, 3, 2);
  auto d = build_edl(R, R, lower(R, 1), {{1, 0}, {0, 1}});
  VarietyDescriptor V = d.Xt;
  V.quotient = d.S_lambda;
  V.connected_because.clear();
  try {
    twisted_count(V, R.identity(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedConnectedComponent);
  }
}

// ---- claim drivers at small sizes ----

TEST(Claims, UnramifiedSpecialisation) {
  VerifyOptions o;
  o.ms = {1};
  auto rep = verify_unramified(3, 2, o);
  for (const auto& c : rep.checks) EXPECT_TRUE(c.ok || !c.required) << c.name << " " << c.detail;
}

TEST(Claims, Thm41AtThree) {
  auto rep = verify_thm41(3, GroupKind::SL, 1, {});
  for (const auto& c : rep.checks) EXPECT_TRUE(c.ok) << c.name << " " << c.detail;
}
