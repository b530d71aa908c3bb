#include "edl/varieties.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <random>
#include <set>
#include <unordered_set>

#include "edl/error.hpp"

namespace edl {

std::string fnv1a_hex(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {


std::string endo_tag(const RingEndo& e) { return "phi^" + std::to_string(e.phi) + "sigma^" + std::to_string(e.sigma); }

std::string key_hex(MatKey k) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%016llx%016llx", static_cast<unsigned long long>(k >> 64),
                static_cast<unsigned long long>(k));
  return buf;
}

bool is_trivial_pattern(const Group& G, const Subgroup& H) {
  return H.kind() == Subgroup::Kind::Pattern && H.endos().empty() && H.depth() >= G.r();
}

bool is_pattern(const Subgroup& H, Shape s, int level = -1) {
  return H.kind() == Subgroup::Kind::Pattern && H.shape() == s && H.endos().empty() && H.level() == level;
}

bool is_monomial(const Group& G, const Mat& x) {
  if (G.n() != 2) return false;
  const Ring& R = G.ring();
  bool diag = R.is_zero(x.at(0, 1)) && R.is_zero(x.at(1, 0));
  bool anti = R.is_zero(x.at(0, 0)) && R.is_zero(x.at(1, 1));
  return diag || anti;
}

}  // namespace

Mat descend(const Group& from, const Group& to, const Mat& a) {
  if (from.ring().same_as(to.ring())) return a;
  const Field& top = from.field();
  const Field& bot = to.field();
  std::uint64_t j = bot.embedding_into(top);
  Mat out = to.zero();
  for (int i = 0; i < from.n(); ++i)
    for (int k = 0; k < from.n(); ++k)
      for (int c = 0; c < from.r(); ++c) {
        Elem v = a.at(i, k).c[c];
        if (v == 0) continue;
        std::uint64_t s = top.log(v);
        if (s % j != 0) throw Error(ErrorCode::CheckFailed, "matrix is not defined over the base field");
        out.at(i, k).c[c] = bot.gen_pow(static_cast<std::int64_t>(s / j));
      }
  return out;
}

// ---- descriptors ----

std::string subgroup_canonical(const Group& G, const SubgroupPtr& H) {
  if (!H) return "none";
  switch (H->kind()) {
    case Subgroup::Kind::Pattern: return H->describe();
    case Subgroup::Kind::Conjugate:
      return "conj(" + subgroup_canonical(G, H->base()) + ";" + G.str(H->lambda()) + ")";
    case Subgroup::Kind::Intersection: {
      std::string s = "meet(";
      for (std::size_t i = 0; i < H->parts().size(); ++i) s += (i ? ";" : "") + subgroup_canonical(G, H->parts()[i]);
      return s + ")";
    }
    case Subgroup::Kind::Explicit: {
      std::vector<MatKey> keys;
      for (const auto& g : H->explicit_elements()) keys.push_back(G.key(g));
      std::sort(keys.begin(), keys.end());
      std::string s = "set{";
      for (auto k : keys) s += key_hex(k) + ",";
      return s + "}";
    }
    case Subgroup::Kind::Twisted:
      return "twist(" + subgroup_canonical(G, H->base()) + ";" + endo_tag(H->endo()) + ";" + G.str(H->eps()) + ";" +
             subgroup_canonical(G, H->target()) + ")";
  }
  return "?";
}

std::string VarietyDescriptor::canonical() const {
  const Ring& R = ambient.ring();
  std::string s = "variety/1|" + ambient.name() + "|p=" + std::to_string(R.field().p()) +
                  "|f=" + std::to_string(R.field().f()) + "|zeta=" + std::to_string(R.zeta());
  for (const auto& c : conditions)
    s += "|L[" + endo_tag(c.endo) + "]in" + (c.double_coset ? "BxB(" : "x*(") + ambient.str(c.left) + ";" +
         subgroup_canonical(ambient, c.target) + ")";
  s += "|support=" + subgroup_canonical(ambient, support);
  s += "|quotient=" + subgroup_canonical(ambient, quotient);
  s += "|sigma=";
  for (const auto& e : sigma) s += endo_tag(e) + ",";
  return s;
}

std::string VarietyDescriptor::hash() const { return fnv1a_hex(canonical()); }

SubgroupPtr lift_subgroup(const SubgroupPtr& H, const Group& from, const Group& to) {
  if (!H || from.ring().same_as(to.ring())) return H;
  switch (H->kind()) {
    case Subgroup::Kind::Pattern: return H;
    case Subgroup::Kind::Conjugate:
      return Subgroup::conjugate(lift_subgroup(H->base(), from, to), embed(from, to, H->lambda()));
    case Subgroup::Kind::Intersection: {
      std::vector<SubgroupPtr> parts;
      for (const auto& p : H->parts()) parts.push_back(lift_subgroup(p, from, to));
      return Subgroup::intersection(std::move(parts));
    }
    case Subgroup::Kind::Explicit:
      if (H->explicit_elements().size() == 1 && from.is_identity(H->explicit_elements()[0]))
        return Subgroup::explicit_set(to, {to.identity()}, "trivial");
      throw Error(ErrorCode::InvalidArgument, "explicit subgroups cannot change coefficient level");
    case Subgroup::Kind::Twisted:
      return Subgroup::twisted(lift_subgroup(H->base(), from, to), H->endo(), embed(from, to, H->eps()),
                               lift_subgroup(H->target(), from, to));
  }
  return H;
}

bool in_bruhat_cell(const Group& G, const Mat& y, const Mat& x, int level) {
  if (G.n() != 2) throw Error(ErrorCode::InvalidArgument, "Bruhat cells are implemented for n = 2");
  int L = level < 0 ? G.r() : std::min(level, G.r());
  auto val = [&](const RingElem& a) {
    for (int c = 0; c < L; ++c)
      if (a.c[c]) return c;
    return L;
  };
  return val(y.at(1, 0)) == val(x.at(1, 0));
}

// ---- coset canonical forms ----

CosetCanonicalizer::CosetCanonicalizer(const Group& G, SubgroupPtr H, std::uint64_t budget) : G_(G), H_(std::move(H)) {
  if (!H_ || is_trivial_pattern(G_, *H_) ||
      (H_->kind() == Subgroup::Kind::Explicit && H_->explicit_elements().size() == 1)) {
    mode_ = Mode::Trivial;
  } else if (H_->kind() == Subgroup::Kind::Pattern && H_->shape() == Shape::Whole && H_->depth() == 0 &&
             H_->endos().empty()) {
    mode_ = Mode::Whole;
  } else if (G_.n() == 2 && is_pattern(*H_, Shape::U)) {
    mode_ = Mode::U;
    depth_ = H_->depth();
  } else if (G_.n() == 2 && is_pattern(*H_, Shape::B) && H_->depth() == 0) {
    mode_ = Mode::B;
  } else {
    mode_ = Mode::Orbit;
    elems_ = H_->elements(G_, budget);
  }
}

std::uint64_t CosetCanonicalizer::subgroup_order() const {
  if (order_) return order_;
  switch (mode_) {
    case Mode::Trivial: order_ = 1; break;
    case Mode::Orbit: order_ = elems_.size(); break;
    case Mode::Whole: order_ = G_.order(); break;
    case Mode::U: order_ = ipow(G_.field().order(), static_cast<unsigned>(G_.r() - depth_)); break;
    case Mode::B: {
      std::uint64_t Q = G_.field().order(), units = (Q - 1) * ipow(Q, static_cast<unsigned>(G_.r() - 1));
      std::uint64_t full = ipow(Q, static_cast<unsigned>(G_.r()));
      order_ = (G_.kind() == GroupKind::SL ? units : units * units) * full;
      break;
    }
  }
  return order_;
}

Mat CosetCanonicalizer::operator()(const Mat& g) const {
  const Ring& R = G_.ring();
  switch (mode_) {
    case Mode::Trivial: return g;
    case Mode::Whole: return G_.identity();
    case Mode::U: {
      int i = R.is_unit(g.at(0, 0)) ? 0 : 1;
      RingElem hi = g.at(i, 1);
      for (int c = 0; c < depth_ && c < R.r(); ++c) hi.c[c] = 0;
      RingElem u = R.neg(R.div(hi, g.at(i, 0)));
      return G_.mul(g, G_.elementary(0, 1, u));
    }
    case Mode::B: {
      int i = R.is_unit(g.at(0, 0)) ? 0 : 1, j = 1 - i;
      RingElem a = R.inv(g.at(i, 0));
      Mat h = G_.kind() == GroupKind::SL ? G_.diag({a, R.inv(a)}) : G_.diag({a, R.one()});
      Mat x = G_.mul(g, h);
      x = G_.mul(x, G_.elementary(0, 1, R.neg(x.at(i, 1))));
      if (G_.kind() == GroupKind::GL) x = G_.mul(x, G_.diag({R.one(), R.inv(x.at(j, 1))}));
      return x;
    }
    case Mode::Orbit: {
      Mat best = g;
      MatKey bk = G_.key(g);
      for (const auto& h : elems_) {
        Mat x = G_.mul(g, h);
        MatKey k = G_.key(x);
        if (k < bk) {
          bk = k;
          best = x;
        }
      }
      return best;
    }
  }
  return g;
}

Mat coset_canonical_form(const Group& G, const Mat& g, const SubgroupPtr& H, std::uint64_t budget) {
  return CosetCanonicalizer(G, H, budget)(g);
}

// ---- classical varieties ----

const char* flavor_name(ClassicalFlavor f) {
  switch (f) {
    case ClassicalFlavor::X: return "X";
    case ClassicalFlavor::LangPreimage: return "lang-preimage";
    case ClassicalFlavor::Quotiented: return "quotiented";
  }
  return "?";
}

ClassicalFlavor parse_flavor(const std::string& s) {
  if (s == "X" || s == "x") return ClassicalFlavor::X;
  if (s == "lang-preimage" || s == "cover_Langpreimage") return ClassicalFlavor::LangPreimage;
  if (s == "quotiented" || s == "cover_quotiented") return ClassicalFlavor::Quotiented;
  throw Error(ErrorCode::InvalidArgument, "unknown variety flavor '" + s + "'");
}

SubgroupPtr unipotent_intersection(const Group& G, const Mat& x) {
  auto U = Subgroup::pattern(Shape::U);
  std::vector<bool> match(static_cast<std::size_t>(G.r()) + 1, true);
  for (unsigned m : {1u, 2u}) {
    Group Gm = at_coefficient_level(G, m);
    Mat xm = embed(G, Gm, x), xi = Gm.inv(xm);
    std::set<MatKey> meet;
    U->enumerate(Gm, [&](const Mat& u) {
      if (U->contains(Gm, Gm.mul(xi, Gm.mul(u, xm)))) meet.insert(Gm.key(u));
    });
    for (int d = 0; d <= G.r(); ++d) {
      if (!match[d]) continue;
      std::set<MatKey> ud;
      Subgroup::pattern(Shape::U, d)->enumerate(Gm, [&](const Mat& u) { ud.insert(Gm.key(u)); });
      match[d] = ud == meet;
    }
  }
  for (int d = 0; d <= G.r(); ++d)
    if (match[d]) return Subgroup::pattern(Shape::U, d);
  throw Error(ErrorCode::InvalidArgument, "U cap xUx^-1 is not of the form U^d");
}

VarietyDescriptor build_classical(const Group& G, const Mat& x, ClassicalFlavor flavor) {
  if (!G.contains(x)) throw Error(ErrorCode::InvalidArgument, "x is not in the group");
  VarietyDescriptor V(G);
  V.support = Subgroup::whole();
  switch (flavor) {
    case ClassicalFlavor::X:
      V.conditions.push_back({{1, 0}, x, Subgroup::pattern(Shape::B), true});
      V.quotient = Subgroup::pattern(Shape::B);
      V.label = "X(" + G.str(x) + ")";
      break;
    case ClassicalFlavor::LangPreimage:
      V.conditions.push_back({{1, 0}, x, Subgroup::pattern(Shape::U), false});
      V.label = "L^-1(" + G.str(x) + " U)";
      break;
    case ClassicalFlavor::Quotiented:
      V.conditions.push_back({{1, 0}, x, Subgroup::pattern(Shape::U), false});
      V.quotient = unipotent_intersection(G, x);
      V.label = "L^-1(" + G.str(x) + " U)/(U cap xUx^-1)";
      break;
  }
  return V;
}

// ---- extended varieties ----

EDLData build_edl(const Group& G, const Group& lambda_group, const Mat& lambda, std::vector<RingEndo> sigma) {
  if (sigma.empty()) throw Error(ErrorCode::InvalidArgument, "empty endomorphism set");
  const RingEndo phi{1, 0};
  if (std::find(sigma.begin(), sigma.end(), phi) == sigma.end())
    throw Error(ErrorCode::InvalidArgument, "the endomorphism set must contain phi");
  const Group& LG = lambda_group;
  if (!LG.contains(lambda)) throw Error(ErrorCode::InvalidArgument, "lambda is not in its group");
  EDLData d{G, LG, lambda, sigma, {}, G.identity(), nullptr, nullptr, nullptr, {}, VarietyDescriptor(G),
            VarietyDescriptor(G)};
  Mat li = LG.inv(lambda);
  auto B = Subgroup::pattern(Shape::B), U = Subgroup::pattern(Shape::U);
  std::vector<SubgroupPtr> parts{B};
  for (const auto& s : sigma) {
    Mat e = descend(LG, G, LG.mul(li, LG.apply(s, lambda)));
    d.eps.push_back(e);
    if (s == phi) d.eps_phi = e;
    // conjugates of B by elements of B are B itself
    if (!B->contains(G, e)) parts.push_back(Subgroup::conjugate(B, e));
  }
  d.B_lambda = Subgroup::intersection(parts);
  d.S_lambda = Subgroup::twisted(d.B_lambda, phi, d.eps_phi, U);

  std::string b_reason;
  const Ring& R = G.ring();
  bool unramified = R.e() == 1 && sigma.size() == 1 && is_monomial(G, d.eps_phi);
  bool lower_unipotent = G.n() == 2 && R.is_one(lambda.at(0, 0)) && R.is_one(lambda.at(1, 1)) &&
                         R.is_zero(lambda.at(0, 1)) && LG.ring().valuation(lambda.at(1, 0)) == 1;
  bool ramified = R.e() == 2 && R.r() == 3 && G.n() == 2 && sigma.size() == 2 &&
                  std::find(sigma.begin(), sigma.end(), RingEndo{0, 1}) != sigma.end() &&
                  G.is_identity(d.eps_phi) && lower_unipotent;
  if (unramified) {
    Mat w = d.eps_phi;
    d.S0 = R.is_zero(w.at(1, 0)) ? Subgroup::pattern(Shape::U) : Subgroup::pattern(Shape::U, G.r());
    d.s0_rule = "unramified: S(lambda)^0 = U cap eps U eps^-1";
    b_reason = R.is_zero(w.at(1, 0)) ? "B(lambda) = B" : "B(lambda) = B cap wBw^-1 = T, a torus";
  } else if (ramified) {
    d.S0 = Subgroup::pattern(Shape::U, 1);
    d.s0_rule = "ramified e = 2, r = 3: S(lambda)^0 = U^1";
    b_reason = "B(lambda) = B cap eBe^-1 is a split torus times an affine space";
  } else {
    throw Error(ErrorCode::UnsupportedConnectedComponent,
                "no certified rule for S(lambda)^0 (e = " + std::to_string(R.e()) + ", |Sigma| = " +
                    std::to_string(sigma.size()) + ")");
  }

  d.X.sigma = sigma;
  d.X.support = Subgroup::whole();
  for (std::size_t i = 0; i < sigma.size(); ++i) d.X.conditions.push_back({sigma[i], d.eps[i], B, false});
  d.X.quotient = d.B_lambda;
  d.X.connected_because = b_reason;
  d.X.label = "X^Sigma(lambda)";

  d.Xt.sigma = sigma;
  d.Xt.support = Subgroup::whole();
  d.Xt.conditions.push_back({phi, d.eps_phi, U, false});
  for (std::size_t i = 0; i < sigma.size(); ++i)
    if (!(sigma[i] == phi)) d.Xt.conditions.push_back({sigma[i], d.eps[i], B, false});
  d.Xt.quotient = d.S0;
  d.Xt.label = "X~^Sigma(lambda)";
  return d;
}

std::vector<Mat> a_set(const EDLData& d, unsigned m) {
  Group Gm = at_coefficient_level(d.group, m);
  Mat e = embed(d.group, Gm, d.eps_phi), ei = Gm.inv(e);
  auto Bl = lift_subgroup(d.B_lambda, d.group, Gm);
  std::unordered_set<MatKey, MatKeyHash> seen;
  std::vector<Mat> out;
  Bl->enumerate(Gm, [&](const Mat& b) {
    Mat a = Gm.mul(Gm.mul(ei, Gm.mul(b, e)), Gm.inv(Gm.apply({1, 0}, b)));
    if (seen.insert(Gm.key(a)).second) out.push_back(a);
  });
  return out;
}

SmallLangPreimage small_lang_preimage(const Group& G, const Mat& g, std::uint64_t seed) {
  if (!(G.apply({1, 0}, g) == g)) throw Error(ErrorCode::InvalidArgument, "g is not phi-fixed");
  if (G.is_identity(g)) return {G, G.identity()};
  std::uint64_t t = G.element_order(g);
  Group Gt = at_coefficient_level(G, static_cast<unsigned>(t));
  const Ring& R = Gt.ring();
  Mat gt = embed(G, Gt, g);
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Mat W = Gt.zero();
    for (int i = 0; i < G.n(); ++i)
      for (int j = 0; j < G.n(); ++j) W.at(i, j) = R.element(rng() % R.size());
    Mat acc = W, cur = W;
    for (std::uint64_t k = 1; k < t; ++k) {
      cur = Gt.mul(gt, Gt.apply({1, 0}, cur));
      acc = Gt.add(acc, cur);
    }
    RingElem det = Gt.det(acc);
    if (!R.is_unit(det)) continue;
    if (Gt.kind() == GroupKind::SL) {
      RingElem di = R.inv(det);
      for (int i = 0; i < G.n(); ++i) acc.at(i, 0) = R.mul(acc.at(i, 0), di);
    }
    Mat lambda = Gt.inv(acc);
    if (!(Gt.mul(acc, Gt.inv(Gt.apply({1, 0}, acc))) == gt))
      throw Error(ErrorCode::CheckFailed, "Lang preimage verification failed");
    return {Gt, lambda};
  }
  throw Error(ErrorCode::CheckFailed, "no invertible Lang preimage found");
}

// ---- counting ----

std::shared_ptr<const LangSection> LangCache::get(const Group& Gm, const Mat& g, unsigned m, bool residue_borel) {
  std::string key = Gm.name() + "|" + std::to_string(Gm.field().p()) + "|" + Gm.str(g) + "|" + std::to_string(m) +
                    (residue_borel ? "|rb" : "");
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  LangSectionOptions o;
  o.residue_borel = residue_borel;
  auto s = std::make_shared<const LangSection>(lang_section(Gm, {g, {1, 0}, static_cast<int>(m)}, o));
  std::lock_guard<std::mutex> lock(mu_);
  return map_.emplace(key, s).first->second;
}

namespace {

struct PreparedCondition {
  RingEndo endo;
  Mat left, left_inv, eps;
  SubgroupPtr target;
  bool double_coset;
  std::vector<Mat> left_inv_k, eps_k;  // reduced to each level
};

}  // namespace

std::uint64_t twisted_count(const VarietyDescriptor& V, const Mat& g, unsigned m, const CountOptions& opt) {
  if (V.conditions.empty()) throw Error(ErrorCode::InvalidArgument, "variety without conditions");
  if (m == 0) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  const Group& G = V.ambient;
  if (!G.contains(g)) throw Error(ErrorCode::InvalidArgument, "twist is not in the group");
  for (const auto& s : V.sigma)
    if (!(G.apply(s, g) == g)) throw Error(ErrorCode::InvalidArgument, "twist is not fixed by " + endo_tag(s));
  for (const auto& c : V.conditions)
    if (!(G.apply(c.endo, g) == g)) throw Error(ErrorCode::InvalidArgument, "twist is not fixed by " + endo_tag(c.endo));
  if (V.quotient && !V.quotient->is_connected(G) && V.connected_because.empty())
    throw Error(ErrorCode::UnsupportedConnectedComponent,
                "quotient " + V.quotient->describe() + " is not known to be connected");

  bool rb = false;
  if (V.support && !is_pattern(*V.support, Shape::Whole)) {
    if (!is_pattern(*V.support, Shape::B, 1) || V.support->depth() != 0)
      throw Error(ErrorCode::InvalidArgument, "supported restrictions are G and preimage(B, 1)");
    // x = g phi^m(x) with x in BG^1 forces g in BG^1
    if (!V.support->contains(G, g)) return 0;
    rb = true;
  }

  Group Gm = at_coefficient_level(G, m);
  if (Gm.order() > opt.budget)
    throw Error(ErrorCode::BudgetExceeded, Gm.name() + " has " + std::to_string(Gm.order()) + " elements");
  Mat gm = embed(G, Gm, g);

  std::shared_ptr<const LangSection> sec;
  if (opt.cache) sec = opt.cache->get(Gm, gm, m, rb);
  else {
    LangSectionOptions o;
    o.residue_borel = rb;
    sec = std::make_shared<const LangSection>(lang_section(Gm, {gm, {1, 0}, static_cast<int>(m)}, o));
  }

  const int r = Gm.r();
  std::vector<Group> lev;
  for (int k = 0; k <= r; ++k) lev.push_back(k == r ? Gm : Gm.at_level(std::max(k, 1)));
  std::vector<PreparedCondition> conds;
  for (const auto& c : V.conditions) {
    PreparedCondition p;
    p.endo = c.endo;
    p.left = embed(G, Gm, c.left);
    p.left_inv = Gm.inv(p.left);
    p.eps = lang_twist(*sec, c.endo);
    p.target = lift_subgroup(c.target, G, Gm);
    p.double_coset = c.double_coset;
    if (p.double_coset && !is_pattern(*c.target, Shape::B))
      throw Error(ErrorCode::InvalidArgument, "double coset conditions need target B");
    for (int k = 0; k <= r; ++k) {
      p.left_inv_k.push_back(Gm.reduce(p.left_inv, k));
      p.eps_k.push_back(Gm.reduce(p.eps, k));
    }
    conds.push_back(std::move(p));
  }
  SubgroupPtr support = V.support ? V.support : Subgroup::whole();

  auto holds = [&](const PreparedCondition& c, const Group& Gk, int k, const Mat& w) {
    Mat y = Gk.mul(Gk.inv(w), Gk.mul(c.eps_k[k], Gk.apply(c.endo, w)));
    if (c.double_coset) return in_bruhat_cell(Gm, y, c.left, k);
    Mat t = Gk.mul(c.left_inv_k[k], y);
    return k == r ? c.target->contains(Gm, t) : c.target->contains_mod(Gm, t, k);
  };
  auto prune = [&](int k, const Mat& w) {
    if (!support->contains_mod(Gm, w, k)) return false;
    for (const auto& c : conds)
      if (!holds(c, lev[k], k, w)) return false;
    return true;
  };

  Domain dom = support->domain(Gm);
  auto residues = Gm.residues(dom, prune);
  std::unique_ptr<CosetCanonicalizer> canon;
  if (V.quotient) canon = std::make_unique<CosetCanonicalizer>(Gm, lift_subgroup(V.quotient, G, Gm));

  std::atomic<std::uint64_t> points{0};
  std::mutex mu;
  std::unordered_set<MatKey, MatKeyHash> cosets;
  parallel_for(residues.size(), opt.threads, [&](std::size_t i) {
    std::uint64_t local = 0;
    std::vector<MatKey> keys;
    // prune at level r is exact, so every visited w is a solution
    Gm.lift(residues[i], dom, prune, [&](const Mat& w) {
      ++local;
      if (canon) keys.push_back(canon->key(w));
    });
    points += local;
    if (canon) {
      std::lock_guard<std::mutex> lock(mu);
      cosets.insert(keys.begin(), keys.end());
    }
  });
  if (!canon) return points.load();
  std::uint64_t h = canon->subgroup_order();
  if (cosets.size() * h != points.load())
    throw Error(ErrorCode::CheckFailed, "solution set of " + V.label + " is not stable under the quotient: " +
                                            std::to_string(points.load()) + " points, " +
                                            std::to_string(cosets.size()) + " cosets, |H| = " + std::to_string(h));
  return cosets.size();
}

EquivReport equiv_test(const VarietyDescriptor& V1, const VarietyDescriptor& V2, const std::vector<Mat>& class_reps,
                       const std::vector<unsigned>& ms, int d, const CountOptions& opt) {
  EquivReport rep;
  rep.d = d;
  std::uint64_t q = V1.ambient.field().order();
  for (unsigned m : ms)
    for (std::size_t i = 0; i < class_reps.size(); ++i) {
      EquivRow row;
      row.twist = i;
      row.m = m;
      row.left = twisted_count(V1, class_reps[i], m, opt);
      row.right = twisted_count(V2, class_reps[i], m, opt);
      row.agree = row.left == row.right * ipow(q, static_cast<unsigned>(static_cast<int>(m) * d));
      rep.consistent = rep.consistent && row.agree;
      rep.rows.push_back(row);
    }
  return rep;
}

}  // namespace edl
