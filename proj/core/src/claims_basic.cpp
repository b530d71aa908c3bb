#include <random>
#include <set>
#include <sstream>

#include "edl/claims.hpp"
#include "edl/clifford.hpp"
#include "edl/error.hpp"
#include "edl/galois.hpp"
#include "edl/matgrp.hpp"

namespace edl {

namespace {

FieldPtr base_field(std::uint64_t q) {
  auto pp = prime_power(q);
  if (!pp) throw Error(ErrorCode::InvalidArgument, std::to_string(q) + " is not a prime power");
  return Field::make(pp->first, pp->second, 1);
}

Group sl2(std::uint64_t q, int r, int e = 1, GroupKind kind = GroupKind::SL, int n = 2) {
  return Group(kind, Ring::make(base_field(q), r, e), n);
}

Mat upper_nilpotent(const Group& G, Elem c) {
  Mat b = G.zero();
  b.at(0, 1) = G.ring().scalar(c);
  return b;
}

LieMode mode_for(const Group& G) { return G.field().p() == 2 ? LieMode::ModCenter : LieMode::TraceZero; }

std::string num(std::uint64_t v) { return std::to_string(v); }

}  // namespace

ClaimReport verify_group_orders(std::uint64_t q) {
  ClaimReport rep;
  rep.claim = "group-orders";
  Group G = sl2(q, 2);
  std::uint64_t n = 0;
  G.enumerate([&](const Mat&) { ++n; });
  // smooth lift: q^{dim} per kernel level on top of |SL_2(F_q)|
  std::uint64_t formula = ipow(q, 3) * q * (q * q - 1);
  rep.add("|" + G.name() + "| by enumeration", n == formula, num(n) + " vs " + num(formula));
  return rep;
}

ClaimReport verify_census(std::uint64_t q, int threads) {
  ClaimReport rep;
  rep.claim = "census";
  Group G = sl2(q, 2);
  auto c = build_census(G, threads);
  bool odd = q % 2 == 1;
  std::size_t want_count = odd ? 4 * q : q;
  long long want_dim = static_cast<long long>(odd ? (q * q - 1) / 2 : q * q - 1);
  std::size_t nil = c.count(OrbitKind::Nilpotent);
  rep.add("nilpotent irreducibles", nil == want_count, num(nil) + " vs " + num(want_count));
  std::set<long long> dims;
  for (const auto& f : c.families)
    if (f.orbit.kind == OrbitKind::Nilpotent)
      for (const auto& chi : f.irreps) dims.insert(chi.degree());
  rep.add("nilpotent dimension", dims == std::set<long long>{want_dim}, "want " + std::to_string(want_dim));
  auto all = c.all();
  auto chk = check_table(all, threads);
  rep.add("complete table", chk.complete, num(all.size()) + " characters, " + num(c.table->size()) + " classes");
  rep.add("rows orthonormal", chk.rows_orthonormal);
  rep.add("columns orthogonal", chk.columns_orthogonal);
  rep.add("sum of squared dimensions = |G|", chk.sum_dim2 == G.order(), num(chk.sum_dim2) + " vs " + num(G.order()));
  return rep;
}

ClaimReport verify_stabilizer(std::uint64_t q) {
  ClaimReport rep;
  rep.claim = "stabilizer";
  Group G = sl2(q, 2);
  Group G1 = G.at_level(1);
  auto t = ClassTable::build(G);
  auto f = build_family(G, t, make_lie(G1, upper_nilpotent(G1, G1.field().one()), mode_for(G)));
  std::uint64_t index = t->order() / f.stabilizer->order();
  std::uint64_t want = q % 2 == 1 ? (q * q - 1) / 2 : q * q - 1;
  rep.add("[G:S]", index == want, num(index) + " vs " + num(want));
  auto D = derived_subgroup(*f.stabilizer);
  auto B1 = Subgroup::pattern(Shape::B, 1);
  bool inside = true;
  for (const auto& d : D) inside = inside && B1->contains(G, d);
  rep.add("[S,S] = B^1", inside && D.size() == B1->order(G),
          "|[S,S]| = " + num(D.size()) + ", |B^1| = " + num(B1->order(G)) + (inside ? "" : ", not contained"));
  std::uint64_t K1 = Subgroup::kernel(1)->order(G);
  std::uint64_t quotient = f.stabilizer->order() / K1;
  rep.add("extensions = |S/K_1|", f.extensions.size() == quotient,
          num(f.extensions.size()) + " vs " + num(quotient));
  return rep;
}

ClaimReport verify_mackey(std::uint64_t q) {
  ClaimReport rep;
  rep.claim = "mackey";
  Group G = sl2(q, 2);
  Group G1 = G.at_level(1);
  auto t = ClassTable::build(G);
  std::vector<Elem> betas{G.field().one()};
  if (q % 2 == 1) betas.push_back(G.field().base_nonsquare());
  std::size_t failing = 0, total = 0;
  bool same = true, criterion = true;
  for (Elem b : betas) {
    auto f = build_family(G, t, make_lie(G1, upper_nilpotent(G1, b), mode_for(G)));
    for (const auto& rho : f.extensions) {
      auto m = mackey_nilpotent_test(t, rho);
      ++total;
      same = same && m.direct == m.mackey;
      criterion = criterion && m.contained == (m.restricted_to_u == Rational(1));
      if (!m.contained) ++failing;
    }
  }
  rep.add("Mackey sum = direct inner product", same, num(total) + " extensions");
  rep.add("contained iff <rho|_U, 1> = 1", criterion);
  rep.add("some extension is not contained", failing > 0, num(failing) + " of " + num(total));
  return rep;
}

ClaimReport verify_double_cosets(std::uint64_t q, const VerifyOptions& opt) {
  ClaimReport rep;
  rep.claim = "double-cosets";
  Group G = sl2(q, 2);
  auto B = Subgroup::pattern(Shape::B);
  for (unsigned m : opt.ms) {
    Group Gm = at_coefficient_level(G, m);
    Group G2m = at_coefficient_level(G, 2 * m);
    const Ring& R = Gm.ring();
    auto t = double_cosets(Gm, B, B);
    std::uint64_t total = 0;
    for (const auto& c : t.cosets) total += c.size;
    std::ostringstream det;
    det << t.cosets.size() << " double cosets, sizes";
    for (const auto& c : t.cosets) det << ' ' << c.size;
    rep.add("partition of " + Gm.name(), total == Gm.order(), det.str());

    // e and nu e with nu the non-square of F_q: merged exactly when nu becomes a square
    Elem nu = Gm.field().gen_pow(static_cast<std::int64_t>(G.field().embedding_into(Gm.field()) *
                                                             G.field().log(G.field().base_nonsquare())));
    Mat e = Gm.from_rows({{R.one(), R.zero()}, {R.z_pow(1), R.one()}});
    Mat ne = Gm.from_rows({{R.one(), R.zero()}, {R.z_pow(1, nu), R.one()}});
    bool merged = t.which(Gm, e) == t.which(Gm, ne);
    rep.add("e ~ nu e at m = " + num(m), merged == (m % 2 == 0), merged ? "merged" : "distinct");

    // Witnesses y = b1 x b2 over F_{q^{2m}} with x in {1, w, e}; every residue unit is a square there.
    const Ring& S = G2m.ring();
    const Field& F2 = G2m.field();
    bool reach = true;
    std::ostringstream how;
    for (const auto& c : t.cosets) {
      Mat y = embed(Gm, G2m, c.rep);
      const auto &a = y.at(0, 0), &b = y.at(0, 1), &cc = y.at(1, 0), &d = y.at(1, 1);
      Mat b1 = G2m.identity(), x = G2m.identity();
      const char* name = "1";
      if (S.is_unit(cc)) {
        b1 = G2m.from_rows({{S.one(), S.mul(a, S.inv(cc))}, {S.zero(), S.one()}});
        x = G2m.weyl();
        name = "w";
      } else if (!S.is_zero(cc)) {
        // y = [[1, b/d], [0, 1]] [[1, 0], [c d, 1]] diag(1/d, d), and t e t^-1 = [[1, 0], [s^-2 z, 1]]
        Elem s = *F2.sqrt(F2.inv(S.mul(cc, d).c[1]));
        Mat ts = G2m.diag({S.scalar(s), S.scalar(F2.inv(s))});
        b1 = G2m.mul(G2m.from_rows({{S.one(), S.mul(b, S.inv(d))}, {S.zero(), S.one()}}), ts);
        x = G2m.from_rows({{S.one(), S.zero()}, {S.z_pow(1), S.one()}});
        name = "e";
      }
      Mat b2 = G2m.mul(G2m.inv(x), G2m.mul(G2m.inv(b1), y));
      bool ok = is_upper_triangular(G2m, b1) && is_upper_triangular(G2m, b2);
      reach = reach && ok;
      how << name << (ok ? " " : "! ");
    }
    rep.add("representatives reachable from {1, w, e} over F_{q^2m}, m = " + num(m), reach, how.str());
  }
  return rep;
}

ClaimReport verify_galois_layer() {
  ClaimReport rep;
  rep.claim = "galois";
  const RingEndo phi{1, 0}, sigma{0, 1};
  struct Case {
    std::uint64_t q;
    int e, r;
  };
  for (auto c : {Case{3, 2, 2}, Case{3, 2, 3}, Case{7, 3, 4}}) {
    auto R = Ring::make(base_field(c.q), c.r, c.e);
    int rp = (c.r + c.e - 1) / c.e;
    auto fx = R->fixed_subring({phi, sigma});
    std::uint64_t want = ipow(c.q, static_cast<unsigned>(rp));
    rep.add("fixed subring, q = " + num(c.q) + ", e = " + num(c.e) + ", r = " + num(c.r),
            fx.size() == want && R->base_r_prime() == rp, num(fx.size()) + " vs " + num(want));
  }
  for (int r = 1; r <= 3; ++r) {
    auto R = Ring::make(base_field(3), r, 2);
    std::uint64_t solved = 0, rejected = 0;
    bool ok = true;
    for (const auto& y : R->elements()) {
      if (!R->is_zero(R->trace_sigma(y))) {
        try {
          R->solve_hilbert90(y);
          ok = false;
        } catch (const Error&) {
          ++rejected;
        }
        continue;
      }
      RingElem x = R->solve_hilbert90(y);
      ok = ok && R->sub(x, R->sigma(x, 1)) == y && R->valuation(x) >= R->valuation(y);
      ++solved;
    }
    rep.add("x - sigma(x) = y for all trace-zero y, q = 3, e = 2, r = " + num(r), ok && solved > 0,
            num(solved) + " solved, " + num(rejected) + " rejected");
  }
  return rep;
}

ClaimReport verify_triangularize(std::uint64_t q, int instances, std::uint64_t seed) {
  ClaimReport rep;
  rep.claim = "triangularize";
  std::mt19937_64 rng(seed);
  for (int n : {2, 3})
    for (auto G : {sl2(q, 2, 1, GroupKind::SL, n), sl2(q, 3, 2, GroupKind::SL, n)}) {
      const Ring& R = G.ring();
      int good = 0;
      for (int t = 0; t < instances; ++t) {
        Mat u = G.identity();
        for (int s = 0; s < 12; ++s) {
          int i = static_cast<int>(rng() % n), j = static_cast<int>(rng() % n);
          if (i != j) u = G.mul(u, G.elementary(i, j, R.element(rng() % R.size())));
        }
        Mat tri = G.zero();
        for (int i = 0; i < n; ++i)
          for (int j = i; j < n; ++j) tri.at(i, j) = R.element(rng() % R.size());
        Mat x = G.mul(u, G.mul(tri, G.inv(u)));
        Mat lam = triangularize(G, x);
        if (R.is_one(G.det(lam)) && is_upper_triangular(G, G.mul(G.inv(lam), G.mul(x, lam)))) ++good;
      }
      rep.add(G.name() + ", e = " + num(R.e()), good == instances, num(good) + "/" + num(instances));
    }
  return rep;
}

ClaimReport verify_borel_normalizer(std::uint64_t q, const VerifyOptions& opt) {
  ClaimReport rep;
  rep.claim = "borel-normalizer";
  auto run = [&](unsigned m, bool required) {
    for (GroupKind k : {GroupKind::SL, GroupKind::GL}) {
      Group G = at_coefficient_level(sl2(q, 2, 1, k), m);
      auto r = normalizer_check_B(G, opt.count.threads);
      rep.add(std::string(required ? "" : "[prime field] ") + "N(B) = B in " + G.name(), r.self_normalizing,
              num(r.normalizer_size) + " vs " + num(r.borel_size), required);
    }
  };
  for (unsigned m : opt.ms) run(m, true);
  for (unsigned m : opt.adapted_ms) run(m, false);
  return rep;
}

ClaimReport verify_quasi_cartan(std::uint64_t q) {
  ClaimReport rep;
  rep.claim = "quasi-cartan";
  Group G = sl2(q, 2);
  auto classes = quasi_cartan_classes(G);
  std::ostringstream labels;
  for (const auto& c : classes) labels << c.label << '(' << c.order << ") ";
  rep.add("four classes", classes.size() == 4, labels.str());
  auto gens = standard_quasi_cartan_generators(G);
  std::set<std::size_t> hit;
  bool unique = true;
  for (const auto& x : gens) {
    auto C = centralizer(G, x);
    std::size_t matches = 0;
    for (std::size_t i = 0; i < classes.size(); ++i)
      if (conjugating_element(G, C, classes[i].group)) hit.insert(i), ++matches;
    unique = unique && matches == 1;
  }
  rep.add("listed representatives hit every class once", hit.size() == classes.size() && unique,
          num(hit.size()) + " classes hit");

  Group Gq2 = at_coefficient_level(G, 2);
  Group R2(GroupKind::SL, Ring::make(Gq2.ring().field_ptr(), 2 * G.r(), 2), 2);
  bool split = find_triangularizer(G, gens[0]).has_value();
  bool unram = !find_triangularizer(G, gens[1]).has_value() &&
               find_triangularizer(Gq2, embed(G, Gq2, gens[1])).has_value();
  rep.add("split class triangular over the base", split);
  rep.add("unramified class triangular after the quadratic residue extension", unram);
  std::uint64_t j = G.field().embedding_into(R2.field());
  for (int i : {2, 3}) {
    bool stuck = !find_triangularizer(G, gens[i]).has_value() &&
                 !find_triangularizer(Gq2, embed(G, Gq2, gens[i])).has_value();
    // z -> z'^2 into the e = 2 ring over the quadratic residue field
    Mat x = R2.zero();
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int c = 0; c < G.r(); ++c) {
          Elem v = gens[i].at(a, b).c[c];
          x.at(a, b).c[2 * c] = v == 0 ? 0 : R2.field().gen_pow(static_cast<std::int64_t>(j * G.field().log(v)));
        }
    bool tri = false;
    try {
      Mat lam = triangularize(R2, x);
      tri = is_upper_triangular(R2, R2.mul(R2.inv(lam), R2.mul(x, lam)));
    } catch (const Error&) {
    }
    rep.add("ramified generator " + num(i - 1) + " needs e = 2", stuck && tri, std::string(stuck ? "no triangulariser without ramification" : "triangular too early") +
                              (tri ? ", triangular over e = 2" : ", not triangular over e = 2"));
  }
  return rep;
}

}  // namespace edl
