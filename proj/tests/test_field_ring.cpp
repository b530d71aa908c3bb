#include <gtest/gtest.h>

#include <random>

#include "edl/bigfield.hpp"
#include "edl/error.hpp"
#include "edl/ring.hpp"

using namespace edl;

namespace {

RingPtr ring(unsigned p, unsigned f, unsigned m, int r, int e = 1) { return Ring::make(Field::make(p, f, m), r, e); }

RingElem poly(const Ring& R, std::vector<long long> c) {
  RingElem a;
  for (std::size_t i = 0; i < c.size(); ++i) a.c[i] = R.field().from_int(c[i]);
  return a;
}

}  // namespace

TEST(Field, TablesAreConsistent) {
  for (auto [p, f, m] : std::vector<std::array<unsigned, 3>>{{2, 1, 1}, {3, 1, 2}, {5, 1, 1}, {2, 2, 3}, {7, 1, 2}}) {
    auto F = Field::make(p, f, m);
    std::uint64_t Q = F->order();
    EXPECT_EQ(Q, ipow(p, f * m));
    for (Elem a = 0; a < Q; ++a) {
      EXPECT_EQ(F->add(a, F->neg(a)), 0u);
      if (a) EXPECT_EQ(F->mul(a, F->inv(a)), 1u);
      EXPECT_EQ(F->frob(a, m), a);
      // additive structure agrees with coordinates
      auto ca = F->coords(a);
      EXPECT_EQ(F->from_coords(ca), a);
    }
    std::mt19937 rng(7);
    for (int t = 0; t < 500; ++t) {
      Elem a = rng() % Q, b = rng() % Q, c = rng() % Q;
      EXPECT_EQ(F->mul(a, F->add(b, c)), F->add(F->mul(a, b), F->mul(a, c)));
      EXPECT_EQ(F->frob(F->add(a, b), 1), F->add(F->frob(a, 1), F->frob(b, 1)));
    }
  }
}

TEST(Field, StringRoundTrip) {
  auto F = Field::make(3, 1, 2);
  for (Elem a = 0; a < F->order(); ++a) EXPECT_EQ(F->parse(F->str(a)), a);
  EXPECT_EQ(F->str(0), "0");
  EXPECT_EQ(F->str(1), "g^0");
}

TEST(Field, SquaresAndRoots) {
  auto F = Field::make(3, 1, 2);
  Elem zeta = F->base_nonsquare();
  EXPECT_TRUE(F->in_base(zeta));
  EXPECT_TRUE(F->is_square(zeta));  // every element of F_3 is a square in F_9
  auto F3 = Field::make(3, 1, 1);
  EXPECT_FALSE(F3->is_square(F3->base_nonsquare()));
  EXPECT_EQ(F3->base_nonsquare(), F3->from_int(2));
  auto s = F->sqrt(zeta);
  ASSERT_TRUE(s.has_value());
  EXPECT_EQ(F->mul(*s, *s), zeta);
}

TEST(Ring, ArithmeticExamples) {
  auto R = ring(3, 1, 1, 3);
  RingElem x = poly(*R, {0, 1, 1});
  EXPECT_EQ(R->mul(x, R->z_pow(1)), R->z_pow(2));
  EXPECT_EQ(R->arith(x, R->one(), "mul"), x);
  auto R2 = ring(3, 1, 1, 2);
  EXPECT_TRUE(R2->is_one(R2->mul(poly(*R2, {1, 1}), poly(*R2, {1, 2}))));
  EXPECT_THROW(R2->arith(x, x, "div"), Error);
}

TEST(Ring, InverseExamples) {
  auto R2 = ring(3, 1, 1, 2);
  EXPECT_EQ(R2->inv(R2->one()), R2->one());
  EXPECT_EQ(R2->inv(poly(*R2, {1, 1})), poly(*R2, {1, -1}));
  auto R3 = ring(3, 1, 1, 3);
  EXPECT_EQ(R3->inv(poly(*R3, {2, 1})), poly(*R3, {2, 2, 2}));
  try {
    R3->inv(R3->z_pow(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NonUnit);
  }
}

TEST(Ring, InverseExhaustive) {
  for (auto R : {ring(3, 1, 1, 3), ring(2, 1, 2, 3), ring(5, 1, 1, 2), ring(3, 1, 2, 2)}) {
    ASSERT_LE(R->size(), 10000u);
    for (const auto& a : R->units()) EXPECT_TRUE(R->is_one(R->mul(a, R->inv(a))));
  }
}

TEST(Ring, RingAxiomsRandom) {
  std::mt19937_64 rng(11);
  for (auto R : {ring(3, 1, 2, 3, 2), ring(2, 1, 3, 4), ring(7, 1, 1, 3, 3)}) {
    for (int t = 0; t < 1000; ++t) {
      auto a = R->element(rng() % R->size()), b = R->element(rng() % R->size()), c = R->element(rng() % R->size());
      EXPECT_EQ(R->mul(a, R->mul(b, c)), R->mul(R->mul(a, b), c));
      EXPECT_EQ(R->mul(a, R->add(b, c)), R->add(R->mul(a, b), R->mul(a, c)));
      EXPECT_EQ(R->mul(a, b), R->mul(b, a));
      EXPECT_EQ(R->add(a, R->add(b, c)), R->add(R->add(a, b), c));
      EXPECT_TRUE(R->is_zero(R->add(a, R->neg(a))));
    }
  }
}

TEST(Ring, Frobenius) {
  auto R = ring(3, 1, 2, 2);
  const Field& F = R->field();
  RingElem a = R->scalar(F.gen_pow(1));
  EXPECT_EQ(R->phi(a, 1), R->scalar(F.pow(F.gen_pow(1), 3)));
  for (const auto& x : R->elements()) {
    EXPECT_EQ(R->phi(x, 2), x);
    bool base = F.in_base(x.c[0]) && F.in_base(x.c[1]);
    if (base) EXPECT_EQ(R->phi(x, 1), x);
  }
}

TEST(Ring, SigmaExamples) {
  auto R = ring(3, 1, 1, 3, 2);
  RingElem a = poly(*R, {1, 2, 1});
  EXPECT_EQ(R->sigma(a, 1), poly(*R, {1, -2, 1}));
  EXPECT_EQ(R->sigma(R->z_pow(2), 1), R->z_pow(2));
  for (const auto& x : R->elements()) EXPECT_EQ(R->sigma(x, 2), x);
}

TEST(Ring, PhiSigmaCommute) {
  for (auto R : {ring(3, 1, 2, 3, 2), ring(7, 1, 1, 3, 3), ring(2, 2, 1, 4, 3)}) {
    if (R->size() > 10000) continue;
    for (const auto& x : R->elements()) EXPECT_EQ(R->phi(R->sigma(x, 1), 1), R->sigma(R->phi(x, 1), 1));
  }
}

TEST(Ring, Hilbert90Exhaustive) {
  for (int r = 1; r <= 3; ++r) {
    auto R = ring(3, 1, 1, r, 2);
    int checked = 0;
    for (const auto& y : R->elements()) {
      if (!R->is_zero(R->trace_sigma(y))) {
        EXPECT_THROW(R->solve_hilbert90(y), Error);
        continue;
      }
      RingElem x = R->solve_hilbert90(y);
      EXPECT_EQ(R->sub(x, R->sigma(x, 1)), y);
      EXPECT_GE(R->valuation(x), R->valuation(y));
      ++checked;
    }
    EXPECT_GT(checked, 0);
  }
  auto R = ring(3, 1, 1, 3, 2);
  EXPECT_TRUE(R->is_zero(R->solve_hilbert90(R->zero())));
}

TEST(Ring, Hilbert90CubicExtension) {
  auto R = ring(7, 1, 1, 3, 3);
  for (const auto& y : R->elements()) {
    if (!R->is_zero(R->trace_sigma(y))) continue;
    RingElem x = R->solve_hilbert90(y);
    EXPECT_EQ(R->sub(x, R->sigma(x, 1)), y);
  }
}

TEST(Ring, FixedSubring) {
  RingEndo phi{1, 0}, sigma{0, 1};
  EXPECT_EQ(ring(3, 1, 2, 2)->fixed_subring({phi}).size(), 9u);
  auto R = ring(3, 1, 2, 3, 2);
  auto fx = R->fixed_subring({phi, sigma});
  EXPECT_EQ(fx.size(), 9u);
  EXPECT_EQ(R->base_r_prime(), 2);
  EXPECT_EQ(ring(3, 1, 1, 2, 2)->fixed_subring({phi, sigma}).size(), 3u);
  auto R34 = ring(7, 1, 1, 4, 3);
  EXPECT_EQ(R34->base_r_prime(), 2);
  EXPECT_EQ(R34->fixed_subring({phi, sigma}).size(), 49u);
  // closure under the ring operations
  for (const auto& a : fx)
    for (const auto& b : fx) {
      EXPECT_TRUE(R->is_fixed(R->mul(a, b), {phi, sigma}));
      EXPECT_TRUE(R->is_fixed(R->add(a, b), {phi, sigma}));
    }
}

TEST(Ring, StringRoundTrip) {
  auto R = ring(3, 1, 2, 3, 2);
  for (std::uint64_t i = 0; i < R->size(); i += 37) {
    auto a = R->element(i);
    EXPECT_EQ(R->parse(R->str(a)), a);
    EXPECT_EQ(R->index(a), i);
  }
  EXPECT_EQ(R->str(R->z_pow(1)), "0+g^0*z+0*z^2");
}

TEST(Ring, RejectsBadParameters) {
  auto F = Field::make(3, 1, 1);
  EXPECT_THROW(Ring::make(F, 0), Error);
  EXPECT_THROW(Ring::make(F, 2, 3), Error);  // wild
  EXPECT_THROW(Ring::make(F, 2, 4), Error);  // 4 does not divide 2
  EXPECT_THROW(Ring::make(F, 2, 2, Elem{1}), Error);
}

TEST(Ring, Embedding) {
  auto small = ring(3, 1, 1, 2, 2);
  auto big = ring(3, 1, 2, 2, 2);
  auto emb = make_embedding(*small, *big);
  for (const auto& a : small->elements())
    for (const auto& b : small->elements()) {
      EXPECT_EQ(emb(small->mul(a, b)), big->mul(emb(a), emb(b)));
      EXPECT_EQ(emb(small->add(a, b)), big->add(emb(a), emb(b)));
    }
}

TEST(BigField, MatchesTableField) {
  auto F = Field::make(3, 1, 2);
  auto B = BigField::make(3, 6);
  SubfieldEmbedding emb(F, B);
  for (Elem a = 0; a < F->order(); ++a)
    for (Elem b = 0; b < F->order(); ++b) {
      EXPECT_EQ(emb.up(F->mul(a, b)), B->mul(emb.up(a), emb.up(b)));
      EXPECT_EQ(emb.up(F->add(a, b)), B->add(emb.up(a), emb.up(b)));
    }
  for (Elem a = 0; a < F->order(); ++a) {
    EXPECT_EQ(emb.down(emb.up(a)), a);
    EXPECT_EQ(B->frob_p(emb.up(a), 1), emb.up(F->frob_p(a, 1)));
  }
  EXPECT_FALSE(emb.contains(B->gen()));
  auto x = B->gen();
  EXPECT_EQ(B->mul(x, B->inv(x)), B->one());
  EXPECT_EQ(B->frob_p(x, 6), x);
  EXPECT_EQ(B->pow(x, B->order() - 1), B->one());
}

TEST(BigField, LargeDegree) {
  auto B = BigField::make(3, 24);
  auto F = Field::make(3, 1, 2);
  SubfieldEmbedding emb(F, B);
  auto x = B->add(B->gen(), B->one());
  EXPECT_EQ(B->frob_p(x, 24), x);
  EXPECT_NE(B->frob_p(x, 2), x);
  EXPECT_EQ(emb.down(emb.up(F->gen_pow(5))), F->gen_pow(5));
}
