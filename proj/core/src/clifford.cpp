#include "edl/clifford.hpp"

#include <numeric>
#include <optional>
#include <unordered_set>

#include "edl/error.hpp"
#include "edl/matgrp.hpp"

namespace edl {

unsigned additive_exponent(const Ring& R, const RingElem& a) {
  return R.field().trace_to_prime(a.c[R.r() - 1], R.field().degree());
}

unsigned KernelCharacter::exponent(const Mat& x) const {
  const Ring& R = G.ring();
  Mat d = G.sub(x, G.identity());
  Mat b = G.zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) b.at(i, j) = beta.x.at(i, j);  // coefficients beyond r - i are zero
  return additive_exponent(R, G.trace(G.mul(b, d)));
}

KernelCharacter psi_beta(const Group& G, const LieElem& beta, int i) {
  if (2 * i < G.r()) throw Error(ErrorCode::LevelTooLow, "psi_beta needs 2i >= r");
  if (G.n() != 2) throw Error(ErrorCode::InvalidArgument, "psi_beta needs n = 2");
  return {G, beta, i, G.field().p()};
}

std::vector<Mat> stabilizer_of_character(const KernelCharacter& psi) {
  const Group& G = psi.G;
  auto gens = Subgroup::kernel(psi.level)->generators(G);
  std::vector<unsigned> base;
  for (const auto& x : gens) base.push_back(psi.exponent(x));
  std::vector<Mat> out;
  G.enumerate([&](const Mat& g) {
    Mat gi = G.inv(g);
    for (std::size_t k = 0; k < gens.size(); ++k)
      if (psi.exponent(G.mul(g, G.mul(gens[k], gi))) != base[k]) return;
    out.push_back(g);
  });
  return out;
}

std::vector<Mat> derived_subgroup(const ClassTable& S) {
  const Group& G = S.group();
  std::vector<Mat> comm;
  std::unordered_set<MatKey, MatKeyHash> seen;
  for (const auto& a : S.generators()) {
    Mat ai = G.inv(a);
    for (const auto& b : S.elements()) {
      Mat c = G.mul(G.mul(ai, G.inv(b)), G.mul(a, b));
      if (seen.insert(G.key(c)).second) comm.push_back(c);
    }
  }
  if (comm.empty()) comm.push_back(G.identity());
  // normal closure: close, then add conjugates by generators until stable
  auto D = closure(G, comm);
  while (true) {
    std::unordered_set<MatKey, MatKeyHash> keys;
    for (const auto& d : D) keys.insert(G.key(d));
    std::vector<Mat> extra;
    for (const auto& s : S.generators())
      for (const auto& d : D) {
        Mat c = G.conj(s, d);
        if (!keys.count(G.key(c))) extra.push_back(c);
      }
    if (extra.empty()) return D;
    extra.insert(extra.end(), D.begin(), D.end());
    D = closure(G, extract_generators(G, extra));
  }
}

ClassFunction LinearCharacter::as_class_function() const {
  std::vector<Cyclo> v;
  for (std::size_t c = 0; c < table->size(); ++c)
    v.push_back(Cyclo::root(table->field(), exponent[table->members(c).front()]));
  return ClassFunction(table, std::move(v));
}

std::vector<LinearCharacter> extensions_over(const KernelCharacter& psi, const ClassTablePtr& Sp) {
  const ClassTable& S = *Sp;
  const Group& G = S.group();
  const unsigned N = S.exponent();
  if (N % psi.p) throw Error(ErrorCode::InvalidArgument, "cyclotomic order must be divisible by p");
  auto K = Subgroup::kernel(psi.level);
  auto D = derived_subgroup(S);
  for (const auto& d : D)
    if (K->contains(G, d) && psi.exponent(d) != 0)
      throw Error(ErrorCode::NotExtendable, "psi_beta is non-trivial on [S,S] cap K");

  // A = S / D, cosets labelled in element order
  constexpr std::uint32_t kNone = ~0u;
  std::vector<std::uint32_t> coset(S.order(), kNone);
  std::vector<std::size_t> rep;
  for (std::size_t i = 0; i < S.order(); ++i) {
    if (coset[i] != kNone) continue;
    auto id = static_cast<std::uint32_t>(rep.size());
    rep.push_back(i);
    for (const auto& d : D) coset[*S.element_index(G.mul(S.elements()[i], d))] = id;
  }
  const std::size_t na = rep.size();
  auto amul = [&](std::size_t a, std::size_t b) {
    return coset[*S.element_index(G.mul(S.elements()[rep[a]], S.elements()[rep[b]]))];
  };
  const std::size_t aid = coset[*S.element_index(G.identity())];

  // characters of A built one cyclic generator at a time
  std::vector<std::size_t> H{aid};
  std::vector<char> inH(na, 0);
  inH[aid] = 1;
  std::vector<std::vector<long long>> chars{std::vector<long long>(na, -1)};
  chars[0][aid] = 0;
  for (const auto& g : S.generators()) {
    std::size_t a = coset[*S.element_index(g)];
    if (inH[a]) continue;
    std::vector<std::size_t> powers{aid};
    std::size_t cur = a;
    while (!inH[cur]) {
      powers.push_back(cur);
      cur = amul(cur, a);
    }
    const std::size_t d = powers.size();  // a^d = cur lies in H
    std::vector<std::size_t> H2;
    std::vector<std::vector<std::size_t>> prod(H.size(), std::vector<std::size_t>(d));
    for (std::size_t hi = 0; hi < H.size(); ++hi)
      for (std::size_t k = 0; k < d; ++k) {
        prod[hi][k] = k == 0 ? H[hi] : amul(H[hi], powers[k]);
        H2.push_back(prod[hi][k]);
      }
    std::vector<std::vector<long long>> next;
    for (const auto& chi : chars) {
      long long e0 = chi[cur];
      if (e0 % static_cast<long long>(d)) throw Error(ErrorCode::CheckFailed, "character extension step failed");
      for (std::size_t j = 0; j < d; ++j) {
        long long lam = e0 / static_cast<long long>(d) + static_cast<long long>(j * (N / d));
        std::vector<long long> nc(na, -1);
        for (std::size_t hi = 0; hi < H.size(); ++hi)
          for (std::size_t k = 0; k < d; ++k)
            nc[prod[hi][k]] = (chi[H[hi]] + static_cast<long long>(k) * lam) % N;
        next.push_back(std::move(nc));
      }
    }
    chars = std::move(next);
    H = std::move(H2);
    for (auto x : H) inH[x] = 1;
  }
  if (H.size() != na) throw Error(ErrorCode::CheckFailed, "generators do not cover S/[S,S]");

  std::vector<std::size_t> kidx;
  for (std::size_t i = 0; i < S.order(); ++i)
    if (K->contains(G, S.elements()[i])) kidx.push_back(i);
  const unsigned step = N / psi.p;
  std::vector<LinearCharacter> out;
  for (const auto& chi : chars) {
    bool ok = true;
    for (auto i : kidx)
      if (static_cast<unsigned>(chi[coset[i]]) != psi.exponent(S.elements()[i]) * step) {
        ok = false;
        break;
      }
    if (!ok) continue;
    LinearCharacter lc{Sp, std::vector<std::uint32_t>(S.order())};
    for (std::size_t i = 0; i < S.order(); ++i) lc.exponent[i] = static_cast<std::uint32_t>(chi[coset[i]]);
    out.push_back(std::move(lc));
  }
  return out;
}

std::vector<ClassFunction> Census::all() const {
  std::vector<ClassFunction> out = inflated;
  for (const auto& f : families) out.insert(out.end(), f.irreps.begin(), f.irreps.end());
  return out;
}

std::size_t Census::count(OrbitKind k) const {
  std::size_t n = 0;
  for (const auto& f : families)
    if (f.orbit.kind == k) n += f.irreps.size();
  return n;
}

PrimitiveFamily build_family(const Group& G, const ClassTablePtr& table, const LieElem& beta) {
  Group G1 = G.at_level(1);
  PrimitiveFamily f{orbit_of(G1, beta), psi_beta(G, beta, 1), {}, {}, {}};
  f.stabilizer = ClassTable::build(G, stabilizer_of_character(f.psi), table->exponent());
  f.extensions = extensions_over(f.psi, f.stabilizer);
  if (f.extensions.empty()) throw Error(ErrorCode::NotExtendable, "psi_beta has no extension to its stabiliser");
  // Irreducibles of S over psi_beta: one extension times the irreducibles of S / K_1.
  std::unordered_set<MatKey, MatKeyHash> seen;
  std::vector<Mat> quotient;
  for (const auto& g : f.stabilizer->elements()) {
    Mat gb = G.reduce(g, 1);
    if (seen.insert(G1.key(gb)).second) quotient.push_back(gb);
  }
  auto qt = ClassTable::build(G1, quotient, table->exponent());
  auto ext0 = f.extensions.front().as_class_function();
  auto taus = character_table(qt);
  for (std::size_t e = 0; e < taus.size(); ++e) {
    auto tau = inflate(taus[e], f.stabilizer, [&](const Mat& g) { return G.reduce(g, 1); });
    auto chi = induce(ext0 * tau, table);
    chi.set_label(std::string(orbit_kind_name(f.orbit.kind)) + ":" + G1.str(beta.x) + "#" + std::to_string(e));
    f.irreps.push_back(std::move(chi));
  }
  return f;
}

namespace {

std::vector<PrimitiveFamily> families_of(const Group& G, const ClassTablePtr& table, int threads) {
  if (G.r() != 2 || G.n() != 2) throw Error(ErrorCode::InvalidArgument, "the census is certified for n = 2, r = 2");
  Group G1 = G.at_level(1);
  LieMode mode = G.field().p() == 2 ? LieMode::ModCenter : LieMode::TraceZero;
  auto orbits = classify_orbits(G1, mode);
  std::vector<std::optional<PrimitiveFamily>> slots(orbits.size());
  parallel_for(orbits.size(), threads, [&](std::size_t k) { slots[k] = build_family(G, table, orbits[k].rep); });
  std::vector<PrimitiveFamily> fams;
  for (auto& f : slots) fams.push_back(std::move(*f));
  return fams;
}

}  // namespace

std::vector<ClassFunction> build_primitive_irreps(const Group& G, const ClassTablePtr& table) {
  std::vector<ClassFunction> out;
  for (auto& f : families_of(G, table, 1)) out.insert(out.end(), f.irreps.begin(), f.irreps.end());
  return out;
}

Census build_census(const Group& G, int threads) {
  Census c;
  c.table = ClassTable::build(G);
  Group G1 = G.at_level(1);
  auto t1 = ClassTable::build(G1);
  auto chars1 = character_table(t1);
  for (std::size_t k = 0; k < chars1.size(); ++k) {
    auto chi = inflate(chars1[k], c.table, [&](const Mat& g) { return G.reduce(g, 1); });
    chi.set_label("level1#" + std::to_string(k));
    c.inflated.push_back(std::move(chi));
  }
  c.families = families_of(G, c.table, threads);
  return c;
}

MackeyResult mackey_nilpotent_test(const ClassTablePtr& Gt, const LinearCharacter& rho) {
  const Group& G = Gt->group();
  const ClassTable& S = *rho.table;
  MackeyResult res;
  auto Uelems = Subgroup::pattern(Shape::U)->elements(G);
  auto indU = permutation_character(Gt, Uelems);
  auto indS = induce(rho.as_class_function(), Gt);
  res.direct = inner_product(indS, indU);

  auto K = rho.table->field();
  auto avg = [&](const std::vector<Mat>& I) {
    std::vector<long long> counts(S.exponent(), 0);
    for (const auto& s : I) counts[rho.at(s)] += 1;
    Cyclo v = Cyclo::from_exponent_counts(K, counts);
    return Rational(v.to_integer(), static_cast<long long>(I.size()));
  };
  auto term = [&](const Mat& x) {
    Mat xi = G.inv(x);
    std::vector<Mat> I;
    for (const auto& s : S.elements())
      if (Subgroup::pattern(Shape::U)->contains(G, G.mul(xi, G.mul(s, x)))) I.push_back(s);
    return avg(I);
  };
  auto Ssub = Subgroup::explicit_set(G, S.elements(), "S");
  auto dc = double_cosets(G, Ssub, Subgroup::pattern(Shape::U));
  res.double_cosets = dc.cosets.size();
  res.mackey = 0;
  for (const auto& c : dc.cosets) res.mackey += term(c.rep);
  res.weyl_term = term(G.weyl());
  std::vector<Mat> inU;
  for (const auto& u : Uelems)
    if (S.contains(u)) inU.push_back(u);
  res.restricted_to_u = avg(inU);
  res.contained = res.direct > Rational(0);
  return res;
}

}  // namespace edl
