#include "edl/matgrp.hpp"

#include <algorithm>
#include <atomic>
#include <set>

#include "edl/error.hpp"

namespace edl {

CharpolyData charpoly_data(const Group& G, const Mat& g) {
  const Ring& R = G.ring();
  CharpolyData d{G.trace(g), G.det(g), R.zero()};
  if (G.n() == 2) d.disc = R.sub(R.mul(d.trace, d.trace), R.mul(R.from_int(4), d.det));
  return d;
}

bool is_separable(const Group& G, const Mat& g) {
  if (G.n() != 2) throw Error(ErrorCode::InvalidArgument, "separability test needs n = 2");
  return !G.ring().is_zero(charpoly_data(G, g).disc);
}

SubgroupPtr centralizer(const Group& G, const Mat& g, std::uint64_t budget) {
  std::vector<Mat> out;
  auto prune = [&](int k, const Mat& h) {
    Group Gk = G.at_level(k);
    Mat gk = G.reduce(g, k), hk = G.reduce(h, k);
    return Gk.mul(hk, gk) == Gk.mul(gk, hk);
  };
  G.enumerate(G.full_domain(), prune, [&](const Mat& h) {
    if (out.size() >= budget) throw Error(ErrorCode::BudgetExceeded, "centralizer too large");
    out.push_back(h);
  });
  return Subgroup::explicit_set(G, std::move(out), "C(" + G.str(g) + ")");
}

SubgroupPtr poly_span_centralizer(const Group& G, const Mat& g) {
  const Ring& R = G.ring();
  auto elems = R.elements();
  std::vector<Mat> powers{G.identity()};
  for (int i = 1; i < G.n(); ++i) powers.push_back(G.mul(powers.back(), g));
  std::vector<Mat> out;
  std::vector<std::size_t> idx(G.n(), 0);
  while (true) {
    Mat s = G.zero();
    for (int i = 0; i < G.n(); ++i) s = G.add(s, G.mul_scalar(powers[i], elems[idx[i]]));
    if (G.contains(s)) out.push_back(s);
    int i = 0;
    while (i < G.n() && ++idx[i] == elems.size()) idx[i++] = 0;
    if (i == G.n()) break;
  }
  return Subgroup::explicit_set(G, std::move(out), "O[" + G.str(g) + "]");
}

bool is_regular(const Group& G, const Mat& g, std::uint64_t budget) {
  return centralizer(G, g, budget)->order(G) == poly_span_centralizer(G, g)->order(G);
}

bool is_upper_triangular(const Group& G, const Mat& x) {
  for (int i = 1; i < G.n(); ++i)
    for (int j = 0; j < i; ++j)
      if (!G.ring().is_zero(x.at(i, j))) return false;
  return true;
}

namespace {

std::optional<Mat> triangularize_rec(const Group& G, const Mat& x, const std::vector<RingElem>& ring_elems) {
  int n = G.n();
  const Ring& R = G.ring();
  if (n == 1 || is_upper_triangular(G, x)) return G.identity();
  Group Gm(GroupKind::GL, G.ring_ptr(), n);
  Group Gsub(GroupKind::SL, G.ring_ptr(), n - 1);
  for (const auto& mu : ring_elems) {
    Mat M = Gm.sub(x, Gm.scalar(mu));
    if (!R.is_zero(Gm.det(M))) continue;
    for (int piv = 0; piv < n; ++piv) {
      // v normalised: v[piv] = 1, earlier entries non-units, later entries free.
      std::vector<int> slots;
      for (int j = 0; j < n; ++j)
        if (j != piv) slots.push_back(j);
      std::vector<std::size_t> pos(slots.size(), 0);
      while (true) {
        std::vector<RingElem> v(n);
        v[piv] = R.one();
        bool ok = true;
        for (std::size_t t = 0; t < slots.size(); ++t) {
          v[slots[t]] = ring_elems[pos[t]];
          if (slots[t] < piv && R.is_unit(v[slots[t]])) ok = false;
        }
        if (ok) {
          for (int i = 0; i < n && ok; ++i) {
            RingElem s = R.zero();
            for (int j = 0; j < n; ++j) s = R.add(s, R.mul(M.at(i, j), v[j]));
            ok = R.is_zero(s);
          }
        }
        if (ok) {
          Mat P = Gm.zero();
          for (int i = 0; i < n; ++i) P.at(i, 0) = v[i];
          for (std::size_t t = 0; t < slots.size(); ++t) P.at(slots[t], static_cast<int>(t) + 1) = R.one();
          RingElem d = Gm.det(P);
          RingElem di = R.inv(d);
          for (int i = 0; i < n; ++i) P.at(i, 1) = R.mul(P.at(i, 1), di);
          Mat y = Gm.mul(Gm.inv(P), Gm.mul(x, P));
          Mat block = Gsub.zero();
          for (int i = 1; i < n; ++i)
            for (int j = 1; j < n; ++j) block.at(i - 1, j - 1) = y.at(i, j);
          if (auto sub = triangularize_rec(Gsub, block, ring_elems)) {
            Mat D = Gm.identity();
            for (int i = 1; i < n; ++i)
              for (int j = 1; j < n; ++j) D.at(i, j) = sub->at(i - 1, j - 1);
            Mat lam = Gm.mul(P, D);
            lam.n = n;
            if (is_upper_triangular(G, Gm.mul(Gm.inv(lam), Gm.mul(x, lam)))) return lam;
          }
        }
        std::size_t t = 0;
        for (; t < slots.size(); ++t) {
          if (++pos[t] < ring_elems.size()) break;
          pos[t] = 0;
        }
        if (t == slots.size()) break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Mat triangularize(const Group& G, const Mat& x) {
  auto elems = G.ring().elements();
  auto lam = triangularize_rec(G, x, elems);
  if (!lam) throw Error(ErrorCode::NonSplit, "no triangularising element over " + G.ring().str(G.ring().one()));
  return *lam;
}

std::optional<Mat> find_triangularizer(const Group& G, const Mat& x) {
  std::optional<Mat> found;
  auto lower_zero = [&](int k, const Mat& lam) {
    if (found) return false;
    Group Gk = G.at_level(k);
    Mat y = Gk.mul(Gk.inv(G.reduce(lam, k)), Gk.mul(G.reduce(x, k), G.reduce(lam, k)));
    return is_upper_triangular(Gk, y);
  };
  G.enumerate(G.full_domain(), lower_zero, [&](const Mat& lam) {
    if (!found) found = lam;
  });
  return found;
}

NormalizerReport normalizer_check_B(const Group& G, int threads) {
  auto B = Subgroup::pattern(Shape::B);
  auto gens = B->generators(G);
  NormalizerReport rep;
  rep.borel_size = B->order(G);
  auto prune = [&](int k, const Mat& g) {
    Group Gk = G.at_level(k);
    Mat gk = G.reduce(g, k), gi = Gk.inv(gk);
    for (const auto& b : gens)
      if (!is_upper_triangular(Gk, Gk.mul(gk, Gk.mul(G.reduce(b, k), gi)))) return false;
    return true;
  };
  std::atomic<std::uint64_t> outside{0};
  rep.normalizer_size = G.count(G.full_domain(), prune, [&](const Mat& g) {
    if (!B->contains(G, g)) outside.fetch_add(1);
    return true;
  }, threads);
  rep.self_normalizing = outside.load() == 0 && rep.normalizer_size == rep.borel_size;
  return rep;
}

DoubleCosetTable double_cosets(const Group& G, const SubgroupPtr& H, const SubgroupPtr& K, std::uint64_t budget) {
  if (G.order() > budget) throw Error(ErrorCode::BudgetExceeded, "ambient group too large for double cosets");
  auto hg = H->generators(G);
  auto kg = K->generators(G);
  std::vector<Mat> elems = G.elements();
  DoubleCosetTable t;
  t.index.reserve(elems.size() * 2);
  constexpr std::uint32_t kNone = ~0u;
  for (const auto& g : elems) t.index.emplace(G.key(g), kNone);
  std::vector<Mat> stack;
  for (const auto& g : elems) {
    auto& slot = t.index[G.key(g)];
    if (slot != kNone) continue;
    auto id = static_cast<std::uint32_t>(t.cosets.size());
    t.cosets.push_back({g, 0});
    slot = id;
    stack.push_back(g);
    std::uint64_t size = 0;
    while (!stack.empty()) {
      Mat x = stack.back();
      stack.pop_back();
      ++size;
      auto visit = [&](const Mat& y) {
        auto& s = t.index.at(G.key(y));
        if (s == kNone) {
          s = id;
          stack.push_back(y);
        }
      };
      for (const auto& h : hg) visit(G.mul(h, x));
      for (const auto& k : kg) visit(G.mul(x, k));
    }
    t.cosets.back().size = size;
  }
  return t;
}

std::optional<Mat> conjugating_element(const Group& G, const SubgroupPtr& H1, const SubgroupPtr& H2) {
  if (H1->order(G) != H2->order(G)) return std::nullopt;
  auto gens = H1->generators(G);
  std::optional<Mat> found;
  G.enumerate([&](const Mat& x) {
    if (found) return;
    Mat xi = G.inv(x);
    for (const auto& h : gens)
      if (!H2->contains(G, G.mul(x, G.mul(h, xi)))) return;
    found = x;
  });
  return found;
}

std::vector<Mat> standard_quasi_cartan_generators(const Group& G) {
  const Ring& R = G.ring();
  const Field& F = G.field();
  Elem zeta = F.base_nonsquare();
  RingElem w = R.z_pow(R.e());
  auto off = [&](const RingElem& c) { return G.from_rows({{R.zero(), R.one()}, {c, R.zero()}}); };
  return {G.from_rows({{R.one(), R.zero()}, {R.zero(), R.neg(R.one())}}), off(R.scalar(zeta)), off(w),
          off(R.mul_scalar(w, zeta))};
}

namespace {

std::string disc_label(const Group& G, const Mat& x) {
  const Ring& R = G.ring();
  const Field& F = G.field();
  RingElem d = charpoly_data(G, x).disc;
  int v = R.valuation(d);
  if (v == 0) return F.is_square(d.c[0]) ? "split" : "unramified";
  if (v == 1) return F.is_square(d.c[1]) ? "ramified" : "ramified-nonsquare";
  return "degenerate";
}

}  // namespace

std::vector<QuasiCartan> quasi_cartan_classes(const Group& G, std::uint64_t budget) {
  if (G.n() != 2 || G.field().p() == 2) throw Error(ErrorCode::InvalidArgument, "quasi-Cartan classes need n = 2, p odd");
  const Ring& R = G.ring();
  auto elems = R.elements();
  if (elems.size() * elems.size() * elems.size() * G.order() > budget * 64)
    throw Error(ErrorCode::BudgetExceeded, "quasi-Cartan search too large");
  std::set<std::vector<MatKey>> seen;
  std::vector<QuasiCartan> classes;
  // Centralisers are unchanged by adding scalars, so the (0,0) entry can be taken as 0.
  for (const auto& b : elems)
    for (const auto& c : elems)
      for (const auto& d : elems) {
        Mat x = G.from_rows({{R.zero(), b}, {c, d}});
        if (!is_separable(G, x)) continue;
        auto C = centralizer(G, x, budget);
        auto els = C->elements(G);
        std::vector<MatKey> keys;
        for (const auto& h : els) keys.push_back(G.key(h));
        std::sort(keys.begin(), keys.end());
        if (!seen.insert(keys).second) continue;
        if (C->order(G) != poly_span_centralizer(G, x)->order(G)) continue;
        bool known = false;
        for (const auto& q : classes)
          if (conjugating_element(G, C, q.group)) {
            known = true;
            break;
          }
        if (!known) classes.push_back({x, C, C->order(G), disc_label(G, x)});
      }
  return classes;
}

}  // namespace edl
