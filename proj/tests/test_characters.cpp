#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "edl/clifford.hpp"
#include "edl/error.hpp"

using namespace edl;

namespace {

Group sl2(unsigned p, int r, unsigned m = 1) { return Group(GroupKind::SL, Ring::make(Field::make(p, 1, m), r), 2); }

Mat upper(const Group& G, Elem c) {
  Mat b = G.zero();
  b.at(0, 1) = G.ring().scalar(c);
  return b;
}

LieMode mode_for(const Group& G) { return G.field().p() == 2 ? LieMode::ModCenter : LieMode::TraceZero; }

}  // namespace

// ---- cyclotomic values ----

TEST(Cyclo, RootRelations) {
  for (unsigned N : {1u, 2u, 3u, 4u, 12u, 36u, 60u}) {
    auto K = CycloField::get(N);
    EXPECT_EQ(Cyclo::root(K, N), Cyclo(K, 1));
    Cyclo s(K);
    for (unsigned k = 0; k < N; ++k) s += Cyclo::root(K, k);
    EXPECT_EQ(s, Cyclo(K, N == 1 ? 1 : 0)) << N;
    for (unsigned k = 0; k < N; ++k) {
      EXPECT_EQ(Cyclo::root(K, k) * Cyclo::root(K, N - k), Cyclo(K, 1));
      EXPECT_EQ(Cyclo::root(K, k).conj(), Cyclo::root(K, N - k));
    }
  }
  EXPECT_EQ(CycloField::get(12)->degree(), 4u);
  EXPECT_EQ(CycloField::get(60)->degree(), 16u);
}

TEST(Cyclo, MatchesFloatingPoint) {
  std::mt19937_64 rng(3);
  auto K = CycloField::get(60);
  for (int t = 0; t < 200; ++t) {
    Cyclo a(K), b(K);
    for (int i = 0; i < 4; ++i) {
      a += Cyclo::root(K, static_cast<long long>(rng() % 60)) * static_cast<long long>(rng() % 7 - 3);
      b += Cyclo::root(K, static_cast<long long>(rng() % 60)) * static_cast<long long>(rng() % 7 - 3);
    }
    auto want = a.to_complex() * b.to_complex() + std::conj(a.to_complex()) - b.to_complex();
    auto got = (a * b + a.conj() - b).to_complex();
    EXPECT_NEAR(std::abs(want - got), 0.0, 1e-9);
  }
}

TEST(Cyclo, SerializeAndLift) {
  auto K = CycloField::get(12), M = CycloField::get(36);
  Cyclo a = Cyclo::root(K, 5) * 3 - Cyclo::root(K, 2);
  EXPECT_EQ(Cyclo::parse(K, a.str()), a);
  EXPECT_EQ(Cyclo::parse(K, "0"), Cyclo(K));
  EXPECT_EQ(a.lift(M), Cyclo::root(M, 15) * 3 - Cyclo::root(M, 6));
  EXPECT_THROW(Cyclo::root(K, 1).to_integer(), Error);
  EXPECT_THROW((Cyclo(K, 3)).div_exact(2), Error);
  EXPECT_EQ(rational_str(Rational(6, 4)), "3/2");
}

// ---- class functions ----

TEST(ClassFn, ConjugacyClasses) {
  auto t = ClassTable::build(sl2(3, 1));
  EXPECT_EQ(t->size(), 7u);
  std::uint64_t total = 0;
  for (const auto& c : t->classes()) total += c.size;
  EXPECT_EQ(total, 24u);
  auto G = sl2(3, 2);
  auto U = ClassTable::build(G, Subgroup::pattern(Shape::U)->elements(G));
  EXPECT_EQ(U->size(), U->order());
  auto c2 = build_census(sl2(2, 2));
  EXPECT_EQ(c2.table->size(), c2.all().size());
}

TEST(ClassFn, InnerProductsAndInduction) {
  auto G = sl2(3, 2);
  auto t = ClassTable::build(G);
  auto one = ClassFunction::trivial(t);
  EXPECT_EQ(inner_product(one, one), Rational(1));
  auto Uel = Subgroup::pattern(Shape::U)->elements(G);
  auto Bel = Subgroup::pattern(Shape::B)->elements(G);
  auto tU = ClassTable::build(G, Uel, t->exponent());
  auto tB = ClassTable::build(G, Bel, t->exponent());
  auto indU = induce(ClassFunction::trivial(tU), t);
  EXPECT_EQ(inner_product(indU, one), Rational(1));
  EXPECT_EQ(indU.degree(), 648 / 9);
  EXPECT_EQ(permutation_character(t, Uel), indU);
  EXPECT_EQ(induce(one, t), one);
  EXPECT_EQ(permutation_character(t, t->elements()), one);
  // transitivity U < B < G
  auto step = induce(induce(ClassFunction::trivial(tU), tB), t);
  EXPECT_EQ(step, indU);
}

TEST(ClassFn, ModularTableMatchesCensus) {
  auto G = sl2(3, 2);
  auto c = build_census(G, 2);
  auto all = c.all();
  auto chk = check_table(all, 2);
  EXPECT_TRUE(chk.rows_orthonormal);
  EXPECT_TRUE(chk.columns_orthogonal);
  EXPECT_EQ(chk.sum_dim2, 648u);
  for (const auto& chi : all) EXPECT_EQ(inner_product(chi, chi), Rational(1));
  auto dix = character_table(c.table);
  ASSERT_EQ(dix.size(), all.size());
  for (const auto& chi : all)
    EXPECT_EQ(std::count(dix.begin(), dix.end(), chi), 1) << chi.label();
}

TEST(ClassFn, FrobeniusReciprocity) {
  std::mt19937_64 rng(11);
  auto G = sl2(3, 2);
  auto c = build_census(G);
  auto all = c.all();
  auto tB = ClassTable::build(G, Subgroup::pattern(Shape::B)->elements(G), c.table->exponent());
  auto irrB = character_table(tB);
  for (int k = 0; k < 100; ++k) {
    const auto& chi = irrB[rng() % irrB.size()];
    const auto& psi = all[rng() % all.size()];
    EXPECT_EQ(inner_product(induce(chi, c.table), psi), inner_product(chi, restrict_to(psi, tB)));
  }
}

TEST(ClassFn, Decompose) {
  auto G = sl2(3, 2);
  auto c = build_census(G);
  auto all = c.all();
  auto d = decompose(all[3], all);
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(d[i], i == 3 ? 1 : 0);
  auto virt = all[1] * 2 - all[4];
  auto dv = decompose(virt, all);
  EXPECT_EQ(dv[1], 2);
  EXPECT_EQ(dv[4], -1);
  // delta at the identity has multiplicities chi(1)/|G|
  std::vector<Cyclo> delta(c.table->size(), Cyclo(c.table->field()));
  delta[c.table->identity_class()] = Cyclo(c.table->field(), 1);
  EXPECT_THROW(decompose(ClassFunction(c.table, delta), all), Error);
}

// ---- orbits ----

TEST(Orbits, NilpotentRepresentatives) {
  auto G = sl2(3, 1);
  auto orbits = classify_orbits(G, LieMode::TraceZero);
  std::vector<Orbit> nil;
  for (const auto& o : orbits)
    if (o.kind == OrbitKind::Nilpotent) nil.push_back(o);
  ASSERT_EQ(nil.size(), 2u);
  auto a = orbit_of(G, make_lie(G, upper(G, 1), LieMode::TraceZero));
  auto b = orbit_of(G, make_lie(G, upper(G, G.field().base_nonsquare()), LieMode::TraceZero));
  EXPECT_FALSE(a.rep == b.rep);
  EXPECT_TRUE(a.rep == nil[0].rep || a.rep == nil[1].rep);
  EXPECT_TRUE(b.rep == nil[0].rep || b.rep == nil[1].rep);

  auto G2 = sl2(2, 1);
  std::size_t n2 = 0;
  for (const auto& o : classify_orbits(G2, LieMode::ModCenter))
    if (o.kind == OrbitKind::Nilpotent) {
      ++n2;
      EXPECT_TRUE(orbit_of(G2, make_lie(G2, upper(G2, 1), LieMode::ModCenter)).rep == o.rep);
    }
  EXPECT_EQ(n2, 1u);
}

TEST(Orbits, PartitionAgainstBruteForce) {
  for (unsigned p : {2u, 3u, 5u}) {
    auto G = sl2(p, 1);
    LieMode mode = mode_for(G);
    auto orbits = classify_orbits(G, mode);
    // oracle: act with every group element
    auto elems = G.elements();
    std::set<std::vector<MatKey>> parts;
    std::uint64_t outside = 0;
    for (const auto& b : lie_elements(G, mode)) {
      if (orbit_kind(G, b) == OrbitKind::Imprimitive) continue;
      ++outside;
      std::set<MatKey> orb;
      for (const auto& g : elems) orb.insert(G.key(adjoint(G, g, b).x));
      parts.insert(std::vector<MatKey>(orb.begin(), orb.end()));
    }
    EXPECT_EQ(parts.size(), orbits.size()) << p;
    std::uint64_t total = 0;
    std::size_t split = 0;
    for (const auto& o : orbits) {
      total += o.size;
      EXPECT_EQ(G.order() % o.size, 0u);
      if (o.kind == OrbitKind::Split) ++split;
    }
    EXPECT_EQ(total, outside);
    if (p != 2) EXPECT_EQ(split, (p - 1) / 2);
  }
}

TEST(Orbits, KindsAndInvariance) {
  auto G = sl2(3, 1);
  const Ring& R = G.ring();
  auto tz = [&](const Mat& x) { return make_lie(G, x, LieMode::TraceZero); };
  EXPECT_EQ(orbit_of(G, tz(G.zero())).kind, OrbitKind::Imprimitive);
  Mat c = G.from_rows({{R.zero(), R.one()}, {R.scalar(G.field().base_nonsquare()), R.zero()}});
  EXPECT_EQ(orbit_kind(G, tz(c)), OrbitKind::Cuspidal);
  EXPECT_EQ(orbit_kind(G, tz(G.diag({R.one(), R.neg(R.one())}))), OrbitKind::Split);

  std::mt19937_64 rng(5);
  auto G3 = sl2(3, 2);
  auto lie = lie_elements(G3, LieMode::TraceZero);
  auto elems = G3.elements();
  for (int t = 0; t < 1000; ++t) {
    const auto& b = lie[rng() % lie.size()];
    const auto& g = elems[rng() % elems.size()];
    auto o1 = orbit_of(G3, b), o2 = orbit_of(G3, adjoint(G3, g, b));
    EXPECT_TRUE(o1.rep == o2.rep);
    EXPECT_EQ(o1.kind, o2.kind);
  }
}

TEST(Orbits, TraceZeroToModCenterIsEquivariantBijection) {
  for (unsigned p : {3u, 5u}) {
    auto G = sl2(p, 1);
    std::set<MatKey> image;
    auto elems = G.elements();
    for (const auto& b : lie_elements(G, LieMode::TraceZero)) {
      auto m = make_lie(G, b.x, LieMode::ModCenter);
      image.insert(G.key(m.x));
      for (std::size_t k = 0; k < elems.size(); k += 7)
        EXPECT_TRUE(adjoint(G, elems[k], m) == make_lie(G, adjoint(G, elems[k], b).x, LieMode::ModCenter));
    }
    EXPECT_EQ(image.size(), lie_elements(G, LieMode::ModCenter).size());
  }
}

// ---- Clifford construction ----

TEST(Clifford, PsiBeta) {
  auto G = sl2(3, 2);
  auto G1 = G.at_level(1);
  const Ring& R = G.ring();
  auto zero = psi_beta(G, make_lie(G1, G1.zero(), LieMode::TraceZero), 1);
  auto K1 = Subgroup::kernel(1)->elements(G);
  for (const auto& x : K1) EXPECT_EQ(zero.exponent(x), 0u);
  auto psi = psi_beta(G, make_lie(G1, upper(G1, 1), LieMode::TraceZero), 1);
  for (long long c = 0; c < 3; ++c) {
    Mat x = G.from_rows({{R.one(), R.zero()}, {R.z_pow(1, G.field().from_int(c)), R.one()}});
    EXPECT_EQ(psi.exponent(x), static_cast<unsigned>(c));
  }
  for (std::size_t i = 0; i < K1.size(); i += 3)
    for (std::size_t j = 0; j < K1.size(); j += 5)
      EXPECT_EQ(psi.exponent(G.mul(K1[i], K1[j])), (psi.exponent(K1[i]) + psi.exponent(K1[j])) % 3);
  EXPECT_THROW(psi_beta(sl2(3, 3), make_lie(sl2(3, 2), sl2(3, 2).zero(), LieMode::TraceZero), 1), Error);
}

TEST(Clifford, PsiBetaIsBijectionOntoDualOfK1) {
  for (unsigned p : {2u, 3u}) {
    auto G = sl2(p, 2);
    auto G1 = G.at_level(1);
    auto K1 = Subgroup::kernel(1)->elements(G);
    std::set<std::vector<unsigned>> chars;
    auto lie = lie_elements(G1, mode_for(G));
    for (const auto& b : lie) {
      auto psi = psi_beta(G, b, 1);
      std::vector<unsigned> v;
      for (const auto& x : K1) v.push_back(psi.exponent(x));
      chars.insert(v);
    }
    EXPECT_EQ(chars.size(), lie.size());
    EXPECT_EQ(chars.size(), K1.size());
  }
}

TEST(Clifford, StabilizersAndExtensions) {
  for (unsigned p : {2u, 3u}) {
    auto G = sl2(p, 2);
    auto G1 = G.at_level(1);
    auto t = ClassTable::build(G);
    auto f = build_family(G, t, make_lie(G1, upper(G1, 1), mode_for(G)));
    std::uint64_t index = t->order() / f.stabilizer->order();
    EXPECT_EQ(index, p == 2 ? 3u : 4u);
    auto K1 = Subgroup::kernel(1)->order(G);
    EXPECT_EQ(f.extensions.size(), f.stabilizer->order() / K1);
    const auto& S = *f.stabilizer;
    const auto& rho = f.extensions.back();
    for (std::size_t i = 0; i < S.order(); i += 3)
      for (std::size_t j = 0; j < S.order(); j += 7)
        EXPECT_EQ(rho.at(G.mul(S.elements()[i], S.elements()[j])),
                  (rho.exponent[i] + rho.exponent[j]) % S.exponent());
    auto D = derived_subgroup(S);
    auto B1 = Subgroup::pattern(Shape::B, 1);
    for (const auto& d : D) EXPECT_TRUE(B1->contains(G, d));
    // equality with B^1 fails only at q = 2
    EXPECT_EQ(D.size() == B1->order(G), p != 2);
  }
  auto G = sl2(3, 2);
  auto whole = ClassTable::build(G);
  auto psi = psi_beta(G, make_lie(G.at_level(1), upper(G.at_level(1), 1), LieMode::TraceZero), 1);
  EXPECT_THROW(extensions_over(psi, whole), Error);
}

TEST(Clifford, Census) {
  struct Want {
    unsigned p;
    std::size_t nil;
    long long dim;
    std::uint64_t order;
  };
  for (auto w : {Want{2, 2, 3, 48}, Want{3, 12, 4, 648}, Want{5, 20, 12, 15000}}) {
    auto G = sl2(w.p, 2);
    auto c = build_census(G, 4);
    EXPECT_EQ(c.count(OrbitKind::Nilpotent), w.nil) << w.p;
    auto all = c.all();
    auto chk = check_table(all, 4);
    EXPECT_TRUE(chk.complete);
    EXPECT_TRUE(chk.rows_orthonormal);
    EXPECT_TRUE(chk.columns_orthogonal);
    EXPECT_EQ(chk.sum_dim2, w.order);
    auto K1 = Subgroup::kernel(1)->elements(G);
    for (const auto& f : c.families)
      for (const auto& chi : f.irreps) {
        if (f.orbit.kind == OrbitKind::Nilpotent) EXPECT_EQ(chi.degree(), w.dim);
        bool trivial_on_k1 = true;
        for (const auto& x : K1)
          if (!(chi.at(x) == Cyclo(c.table->field(), chi.degree()))) trivial_on_k1 = false;
        EXPECT_FALSE(trivial_on_k1);
      }
    for (const auto& chi : c.inflated)
      for (const auto& x : K1) EXPECT_EQ(chi.at(x), Cyclo(c.table->field(), chi.degree()));
  }
}

TEST(Clifford, MackeyAtThree) {
  auto G = sl2(3, 2);
  auto G1 = G.at_level(1);
  auto t = ClassTable::build(G);
  auto census = build_census(G);
  auto all = census.all();
  auto indU = permutation_character(t, Subgroup::pattern(Shape::U)->elements(G));
  for (Elem z : {G.field().one(), G.field().base_nonsquare()}) {
    auto f = build_family(G, t, make_lie(G1, upper(G1, z), LieMode::TraceZero));
    std::size_t failing = 0;
    for (const auto& rho : f.extensions) {
      auto m = mackey_nilpotent_test(t, rho);
      EXPECT_EQ(m.direct, m.mackey);
      EXPECT_EQ(m.weyl_term, Rational(0));
      EXPECT_EQ(m.contained, m.restricted_to_u == Rational(1));
      if (!m.contained) ++failing;
      auto chi = induce(rho.as_class_function(), t);
      EXPECT_EQ(inner_product(chi, chi), Rational(1));
      EXPECT_EQ(std::count(all.begin(), all.end(), chi), 1);
      EXPECT_EQ(inner_product(indU, chi) > Rational(0), m.contained);
    }
    EXPECT_GT(failing, 0u);
  }
}
