#include "edl/galois.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

#include "edl/error.hpp"

namespace edl {

Mat lang(const Group& G, const Mat& g, const RingEndo& endo) { return G.mul(G.inv(g), G.apply(endo, g)); }

SubgroupPtr fixed_group(const std::vector<RingEndo>& endos) { return Subgroup::fixed(Subgroup::whole(), endos); }

namespace {

FieldPtr cached_field(unsigned p, unsigned f, unsigned m) {
  static std::mutex mu;
  static std::map<std::tuple<unsigned, unsigned, unsigned>, FieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, f, m}];
  if (!slot) slot = Field::make(p, f, m);
  return slot;
}

}  // namespace

Group at_coefficient_level(const Group& G, unsigned m) {
  if (m == 1) return G;
  const Ring& R = G.ring();
  const Field& F = R.field();
  FieldPtr top = cached_field(F.p(), F.f(), F.m() * m);
  std::uint64_t j = F.embedding_into(*top);
  Elem zeta = R.zeta() == 0 ? 0 : top->gen_pow(static_cast<std::int64_t>(j * (R.zeta() - 1)));
  auto ring = Ring::make(top, R.r(), R.e(), R.e() > 1 ? std::optional<Elem>(zeta) : std::nullopt);
  return G.over(ring);
}

Mat embed(const Group& from, const Group& to, const Mat& a) {
  if (from.ring().same_as(to.ring())) return a;
  auto emb = make_embedding(from.ring(), to.ring());
  Mat m = to.zero();
  for (int i = 0; i < from.n(); ++i)
    for (int j = 0; j < from.n(); ++j) m.at(i, j) = emb(a.at(i, j));
  return m;
}

// ---- extension ring ----

ExtRing::ExtRing(RingPtr base, unsigned t) : base_(std::move(base)), t_(t) {
  const Field& F = base_->field();
  unsigned D = F.degree() * t;
  big_ = BigField::make(F.p(), D);
  emb_ = std::make_unique<SubfieldEmbedding>(base_->field_ptr(), big_);
  zeta_ = emb_->up(base_->zeta());
}

ExtElem ExtRing::zero() const { return ExtElem(static_cast<std::size_t>(r()), big_->zero()); }

ExtElem ExtRing::one() const {
  ExtElem a = zero();
  a[0] = big_->one();
  return a;
}

ExtElem ExtRing::up(const RingElem& a) const {
  ExtElem s(static_cast<std::size_t>(r()));
  for (int i = 0; i < r(); ++i) s[i] = emb_->up(a.c[i]);
  return s;
}

RingElem ExtRing::down(const ExtElem& a) const {
  RingElem s;
  for (int i = 0; i < r(); ++i) s.c[i] = emb_->down(a[i]);
  return s;
}

bool ExtRing::descends(const ExtElem& a) const {
  for (const auto& c : a)
    if (!emb_->contains(c)) return false;
  return true;
}

ExtElem ExtRing::add(const ExtElem& a, const ExtElem& b) const {
  ExtElem s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = big_->add(a[i], b[i]);
  return s;
}

ExtElem ExtRing::sub(const ExtElem& a, const ExtElem& b) const {
  ExtElem s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = big_->sub(a[i], b[i]);
  return s;
}

ExtElem ExtRing::mul(const ExtElem& a, const ExtElem& b) const {
  ExtElem s = zero();
  for (int i = 0; i < r(); ++i) {
    if (big_->is_zero(a[i])) continue;
    for (int j = 0; i + j < r(); ++j) s[i + j] = big_->add(s[i + j], big_->mul(a[i], b[j]));
  }
  return s;
}

ExtElem ExtRing::inv(const ExtElem& a) const {
  if (big_->is_zero(a[0])) throw Error(ErrorCode::NonUnit, "non-unit in extension ring");
  ExtElem b = zero();
  BigElem i0 = big_->inv(a[0]);
  b[0] = i0;
  for (int k = 1; k < r(); ++k) {
    BigElem s = big_->zero();
    for (int i = 1; i <= k; ++i) s = big_->add(s, big_->mul(a[i], b[k - i]));
    b[k] = big_->neg(big_->mul(i0, s));
  }
  return b;
}

bool ExtRing::is_zero(const ExtElem& a) const {
  for (const auto& c : a)
    if (!big_->is_zero(c)) return false;
  return true;
}

ExtElem ExtRing::phi(const ExtElem& a, std::int64_t k) const {
  if (k == 0) return a;
  std::uint64_t D = big_->degree();
  std::uint64_t f = base_->field().f();
  std::uint64_t steps = (static_cast<std::uint64_t>(((k % static_cast<std::int64_t>(D)) + static_cast<std::int64_t>(D))) * f) % D;
  ExtElem s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = big_->frob_p(a[i], steps);
  return s;
}

ExtElem ExtRing::sigma(const ExtElem& a, std::int64_t k) const {
  int e = base_->e();
  if (e == 1 || k % e == 0) return a;
  std::int64_t kk = ((k % e) + e) % e;
  ExtElem s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    s[i] = big_->mul(a[i], big_->pow(zeta_, static_cast<std::uint64_t>((static_cast<std::int64_t>(i) * kk) % e)));
  return s;
}

ExtElem ExtRing::random(std::mt19937_64& rng, int min_val) const {
  ExtElem s = zero();
  std::uniform_int_distribution<unsigned> dist(0, big_->p() - 1);
  for (int i = min_val; i < r(); ++i)
    for (auto& c : s[i]) c = static_cast<std::uint8_t>(dist(rng));
  return s;
}

ExtMat ExtGroup::identity() const {
  ExtMat m;
  m.n = G_.n();
  m.e.assign(static_cast<std::size_t>(m.n * m.n), R_->zero());
  for (int i = 0; i < m.n; ++i) m.at(i, i) = R_->one();
  return m;
}

ExtMat ExtGroup::up(const Mat& a) const {
  ExtMat m = identity();
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) m.at(i, j) = R_->up(a.at(i, j));
  return m;
}

Mat ExtGroup::down(const ExtMat& a) const {
  Mat m = G_.zero();
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) m.at(i, j) = R_->down(a.at(i, j));
  return m;
}

ExtMat ExtGroup::mul(const ExtMat& a, const ExtMat& b) const {
  ExtMat m = identity();
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) {
      ExtElem s = R_->zero();
      for (int k = 0; k < m.n; ++k) s = R_->add(s, R_->mul(a.at(i, k), b.at(k, j)));
      m.at(i, j) = s;
    }
  return m;
}

ExtElem ExtGroup::det(const ExtMat& a) const {
  const ExtRing& R = *R_;
  int n = a.n;
  if (n == 1) return a.at(0, 0);
  auto m2 = [&](int r0, int r1, int c0, int c1) {
    return R.sub(R.mul(a.at(r0, c0), a.at(r1, c1)), R.mul(a.at(r0, c1), a.at(r1, c0)));
  };
  if (n == 2) return m2(0, 1, 0, 1);
  ExtElem d = R.mul(a.at(0, 0), m2(1, 2, 1, 2));
  d = R.sub(d, R.mul(a.at(0, 1), m2(1, 2, 0, 2)));
  return R.add(d, R.mul(a.at(0, 2), m2(1, 2, 0, 1)));
}

ExtMat ExtGroup::inv(const ExtMat& a) const {
  const ExtRing& R = *R_;
  ExtElem di = R.inv(det(a));
  ExtMat m = identity();
  int n = a.n;
  if (n == 1) {
    m.at(0, 0) = di;
    return m;
  }
  if (n == 2) {
    m.at(0, 0) = R.mul(a.at(1, 1), di);
    m.at(0, 1) = R.sub(R.zero(), R.mul(a.at(0, 1), di));
    m.at(1, 0) = R.sub(R.zero(), R.mul(a.at(1, 0), di));
    m.at(1, 1) = R.mul(a.at(0, 0), di);
    return m;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      ExtElem c = R.sub(R.mul(a.at(r0, c0), a.at(r1, c1)), R.mul(a.at(r0, c1), a.at(r1, c0)));
      m.at(i, j) = R.mul(c, di);
    }
  return m;
}

ExtMat ExtGroup::apply(const RingEndo& en, const ExtMat& a) const {
  ExtMat m = a;
  for (auto& x : m.e) x = R_->apply(en, x);
  return m;
}

bool ExtGroup::equal(const ExtMat& a, const ExtMat& b) const {
  for (std::size_t i = 0; i < a.e.size(); ++i)
    if (!R_->is_zero(R_->sub(a.e[i], b.e[i]))) return false;
  return true;
}

// ---- Lang sections ----

LangSection lang_section(const Group& G, const TwistedFrobenius& tw, const LangSectionOptions& opt) {
  LangSection s;
  s.tw = tw;
  if (G.is_identity(tw.g)) {
    s.trivial = true;
    return s;
  }
  RingEndo fm{tw.endo.phi * tw.m, tw.endo.sigma * tw.m};
  if (!(G.apply(fm, tw.g) == tw.g)) throw Error(ErrorCode::InvalidArgument, "twist is not fixed by endo^m");
  if (fm.sigma % std::max(1, G.ring().e()) != 0 || fm.phi == 0)
    throw Error(ErrorCode::InvalidArgument, "Lang sections need a pure Frobenius power");
  std::uint64_t t = G.element_order(tw.g);
  unsigned cap = opt.level_cap ? opt.level_cap : static_cast<unsigned>(t * static_cast<std::uint64_t>(tw.m));
  if (t * static_cast<std::uint64_t>(tw.m) > cap)
    throw Error(ErrorCode::BudgetExceeded, "Lang section level " + std::to_string(t * tw.m) + " above cap");
  // Lambda lives over F_{q^{m t}}; phi^m has order t on that field relative to F_{q^m}, and
  // T(v) = g phi^m(v) satisfies T^t = 1, so averaging T over a random matrix gives fixed points.
  {
    double bits = std::log2(static_cast<double>(G.field().p())) * G.field().degree() * static_cast<double>(t);
    if (bits >= 62) throw Error(ErrorCode::BudgetExceeded, "extension field for the Lang section too large");
  }
  auto ring = std::make_shared<const ExtRing>(G.ring_ptr(), static_cast<unsigned>(t));
  auto XG = std::make_shared<const ExtGroup>(G, ring);
  s.ring = ring;
  s.group = XG;
  ExtMat g = XG->up(tw.g);
  std::mt19937_64 rng(opt.seed);
  int n = G.n();
  for (int attempt = 0; attempt < 200; ++attempt) {
    ExtMat W = XG->identity();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) W.at(i, j) = ring->random(rng, (opt.residue_borel && i > j) ? 1 : 0);
    ExtMat acc = W, cur = W;
    for (std::uint64_t k = 1; k < t; ++k) {
      cur = XG->mul(g, XG->apply(fm, cur));
      for (std::size_t i = 0; i < acc.e.size(); ++i) acc.e[i] = ring->add(acc.e[i], cur.e[i]);
    }
    ExtElem d = XG->det(acc);
    if (!ring->is_unit(d)) continue;
    if (opt.residue_borel) {
      bool ok = true;
      for (int i = 0; i < n; ++i)
        if (!ring->is_unit(acc.at(i, i))) ok = false;
      if (!ok) continue;
    }
    if (G.kind() == GroupKind::SL) {
      // det is fixed by endo^m, so rescaling column 0 keeps the section property.
      ExtElem di = ring->inv(d);
      for (int i = 0; i < n; ++i) acc.at(i, 0) = ring->mul(acc.at(i, 0), di);
    }
    ExtMat check = XG->mul(acc, XG->inv(XG->apply(fm, acc)));
    if (!XG->equal(check, g)) throw Error(ErrorCode::CheckFailed, "Lang section verification failed");
    s.lambda = acc;
    s.lambda_inv = XG->inv(acc);
    return s;
  }
  throw Error(ErrorCode::CheckFailed, "no invertible Lang section found");
}

Mat lang_twist(const LangSection& s, const RingEndo& endo) {
  if (s.trivial) {
    Mat id = s.tw.g;
    // identity of the same shape
    for (int i = 0; i < id.n; ++i)
      for (int j = 0; j < id.n; ++j) {
        id.at(i, j) = RingElem{};
        if (i == j) id.at(i, j).c[0] = 1;
      }
    return id;
  }
  const ExtGroup& XG = *s.group;
  ExtMat eps = XG.mul(s.lambda_inv, XG.apply(endo, s.lambda));
  return XG.down(eps);
}

void twisted_fixed_enumerate(const Group& G, const LangSection& s, const std::function<void(const Mat&)>& visit) {
  (void)s;
  G.enumerate(visit);
}

std::optional<RestrictedSection> restricted_lang_section(const Group& G, const Mat& target, LangShape shape, int m,
                                                         unsigned cap) {
  const int n = G.n();
  for (unsigned k = 1; k <= cap; ++k) {
    Group H = at_coefficient_level(G, k);
    const Ring& R = H.ring();
    const Field& F = H.field();
    Mat y = embed(G, H, target);
    std::int64_t qm = m;  // Frobenius exponent in units of q-powers
    auto fr = [&](Elem c) { return F.frob(c, qm); };
    RestrictedSection out;
    out.k = k;
    out.lambda = H.identity();
    bool ok = true;
    if (shape == LangShape::LowerUnipotent1) {
      // [[1,0],[x,1]]: phi^m(x) - x = y_{10}, solved coefficientwise
      if (n != 2) throw Error(ErrorCode::InvalidArgument, "unipotent section needs n = 2");
      RingElem x = R.zero();
      for (int c = 1; c < R.r() && ok; ++c) {
        Elem want = y.at(1, 0).c[c];
        bool found = false;
        for (std::uint64_t v = 0; v < F.order(); ++v) {
          Elem cv = static_cast<Elem>(v);
          if (F.sub(fr(cv), cv) == want) {
            x.c[c] = cv;
            found = true;
            break;
          }
        }
        ok = found;
      }
      if (!ok || y.at(1, 0).c[0] != 0) continue;
      out.lambda.at(1, 0) = x;
    } else {
      // diagonal: a^-1 phi^m(a) = t, i.e. phi^m(a) = a t, solved coefficient by coefficient
      int count = (H.kind() == GroupKind::SL && n == 2) ? 1 : n;
      for (int i = 0; i < count && ok; ++i) {
        const RingElem& t = y.at(i, i);
        RingElem a = R.zero();
        for (int c = 0; c < R.r() && ok; ++c) {
          bool found = false;
          for (std::uint64_t v = (c == 0 ? 1 : 0); v < F.order(); ++v) {
            a.c[c] = static_cast<Elem>(v);
            RingElem lhs = R.phi(a, qm), rhs = R.mul(a, t);
            bool match = true;
            for (int d = 0; d <= c; ++d)
              if (lhs.c[d] != rhs.c[d]) match = false;
            if (match) {
              found = true;
              break;
            }
          }
          ok = found;
        }
        if (ok) out.lambda.at(i, i) = a;
      }
      if (ok && count == 1) out.lambda.at(1, 1) = R.inv(out.lambda.at(0, 0));
    }
    if (!ok) continue;
    if (!(H.mul(H.inv(out.lambda), H.apply({static_cast<int>(qm), 0}, out.lambda)) == y)) continue;
    out.group = H;
    return out;
  }
  return std::nullopt;
}

}  // namespace edl
