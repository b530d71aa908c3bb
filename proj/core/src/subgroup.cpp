#include "edl/subgroup.hpp"

#include <algorithm>
#include <deque>

#include "edl/error.hpp"

namespace edl {

const char* shape_name(Shape s) {
  switch (s) {
    case Shape::Whole: return "G";
    case Shape::T: return "T";
    case Shape::B: return "B";
    case Shape::U: return "U";
    case Shape::Uminus: return "U-";
    case Shape::Z: return "Z";
    case Shape::ZU: return "ZU";
  }
  return "?";
}

namespace {

struct BudgetGuard {
  std::uint64_t left;
  void tick() {
    if (left == 0) throw Error(ErrorCode::BudgetExceeded, "subgroup enumeration budget exhausted");
    --left;
  }
};

std::string endo_str(const std::vector<RingEndo>& endos) {
  std::string s;
  for (const auto& e : endos) {
    if (!s.empty()) s += ",";
    s += "phi^" + std::to_string(e.phi) + "sigma^" + std::to_string(e.sigma);
  }
  return s;
}

}  // namespace

SubgroupPtr Subgroup::pattern(Shape s, int depth, int level, std::vector<RingEndo> endos) {
  if (depth < 0) throw Error(ErrorCode::InvalidArgument, "negative depth");
  auto p = std::shared_ptr<Subgroup>(new Subgroup());
  p->kind_ = Kind::Pattern;
  p->shape_ = s;
  p->depth_ = depth;
  p->level_ = level;
  p->endos_ = std::move(endos);
  return p;
}

SubgroupPtr Subgroup::fixed(const SubgroupPtr& base, std::vector<RingEndo> endos) {
  if (base->kind_ == Kind::Pattern) {
    auto all = base->endos_;
    all.insert(all.end(), endos.begin(), endos.end());
    return pattern(base->shape_, base->depth_, base->level_, std::move(all));
  }
  auto fx = pattern(Shape::Whole, 0, -1, std::move(endos));
  return intersection({base, fx});
}

SubgroupPtr Subgroup::conjugate(const SubgroupPtr& base, const Mat& lambda) {
  auto p = std::shared_ptr<Subgroup>(new Subgroup());
  p->kind_ = Kind::Conjugate;
  p->base_ = base;
  p->lambda_ = lambda;
  return p;
}

SubgroupPtr Subgroup::intersection(std::vector<SubgroupPtr> parts) {
  if (parts.empty()) return whole();
  if (parts.size() == 1) return parts[0];
  auto p = std::shared_ptr<Subgroup>(new Subgroup());
  p->kind_ = Kind::Intersection;
  p->parts_ = std::move(parts);
  return p;
}

SubgroupPtr Subgroup::explicit_set(const Group& G, std::vector<Mat> elems, std::string label) {
  auto p = std::shared_ptr<Subgroup>(new Subgroup());
  p->kind_ = Kind::Explicit;
  for (const auto& g : elems)
    if (p->keys_.insert(G.key(g)).second) p->elems_.push_back(g);
  p->label_ = std::move(label);
  return p;
}

SubgroupPtr Subgroup::twisted(const SubgroupPtr& base, RingEndo endo, const Mat& eps, const SubgroupPtr& target) {
  auto p = std::shared_ptr<Subgroup>(new Subgroup());
  p->kind_ = Kind::Twisted;
  p->base_ = base;
  p->endo_ = endo;
  p->eps_ = eps;
  p->target_ = target;
  return p;
}

std::string Subgroup::describe() const {
  switch (kind_) {
    case Kind::Pattern: {
      std::string s = shape_name(shape_);
      if (depth_ > 0) s += "^" + std::to_string(depth_);
      if (level_ >= 0) s = "pre_" + std::to_string(level_) + "(" + s + ")";
      if (!endos_.empty()) s += "[fix " + endo_str(endos_) + "]";
      return s;
    }
    case Kind::Conjugate: return "conj(" + base_->describe() + ")";
    case Kind::Intersection: {
      std::string s = "meet(";
      for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "," : "") + parts_[i]->describe();
      return s + ")";
    }
    case Kind::Explicit: return label_ + "#" + std::to_string(elems_.size());
    case Kind::Twisted:
      return "twist(" + base_->describe() + "->" + target_->describe() + ",phi^" + std::to_string(endo_.phi) +
             "sigma^" + std::to_string(endo_.sigma) + ")";
  }
  return "?";
}

int Subgroup::bound(const Group& G, int i, int j) const {
  int r = G.r();
  int L = level_ < 0 ? r : std::min(level_, r);
  bool constrained = false;
  switch (shape_) {
    case Shape::Whole: break;
    case Shape::T:
    case Shape::Z: constrained = i != j; break;
    case Shape::B:
    case Shape::ZU: constrained = i > j; break;
    case Shape::U: constrained = i >= j; break;
    case Shape::Uminus: constrained = i <= j; break;
  }
  return std::min(r, constrained ? std::max(depth_, L) : depth_);
}

bool Subgroup::pattern_ok(const Group& G, const Mat& g, int k) const {
  const Ring& R = G.ring();
  int n = G.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      int b = std::min(bound(G, i, j), k);
      const RingElem& x = g.at(i, j);
      for (int c = 0; c < b; ++c) {
        Elem want = (i == j && c == 0) ? 1 : 0;
        if (x.c[c] != want) return false;
      }
    }
  if (shape_ == Shape::Z || shape_ == Shape::ZU) {
    int L = std::min(k, level_ < 0 ? G.r() : std::min(level_, G.r()));
    for (int i = 1; i < n; ++i)
      for (int c = 0; c < L; ++c)
        if (g.at(i, i).c[c] != g.at(0, 0).c[c]) return false;
  }
  for (const auto& en : endos_)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        RingElem y = R.apply(en, g.at(i, j));
        for (int c = 0; c < k; ++c)
          if (y.c[c] != g.at(i, j).c[c]) return false;
      }
  return true;
}

bool Subgroup::contains_mod(const Group& G, const Mat& g, int k) const {
  switch (kind_) {
    case Kind::Pattern: return pattern_ok(G, g, k);
    case Kind::Conjugate: {
      Group Gk = G.at_level(k);
      Mat gk = G.reduce(g, k), lk = G.reduce(lambda_, k);
      return base_->contains_mod(Gk, Gk.mul(Gk.inv(lk), Gk.mul(gk, lk)), k);
    }
    case Kind::Intersection:
      for (const auto& p : parts_)
        if (!p->contains_mod(G, g, k)) return false;
      return true;
    case Kind::Explicit:
      if (k >= G.r()) return keys_.count(G.key(g)) > 0;
      return true;
    case Kind::Twisted: {
      if (!base_->contains_mod(G, g, k)) return false;
      Group Gk = G.at_level(k);
      Mat gk = G.reduce(g, k), ek = G.reduce(eps_, k);
      Mat t = Gk.mul(Gk.mul(Gk.inv(ek), Gk.inv(gk)), Gk.mul(ek, Gk.apply(endo_, gk)));
      return target_->contains_mod(Gk, t, k);
    }
  }
  return false;
}

bool Subgroup::contains(const Group& G, const Mat& g) const {
  if (!G.contains(g)) return false;
  switch (kind_) {
    case Kind::Pattern: return pattern_ok(G, g, G.r());
    case Kind::Conjugate: return base_->contains(G, G.mul(G.inv(lambda_), G.mul(g, lambda_)));
    case Kind::Intersection:
      for (const auto& p : parts_)
        if (!p->contains(G, g)) return false;
      return true;
    case Kind::Explicit: return keys_.count(G.key(g)) > 0;
    case Kind::Twisted: {
      if (!base_->contains(G, g)) return false;
      Mat t = G.mul(G.mul(G.inv(eps_), G.inv(g)), G.mul(eps_, G.apply(endo_, g)));
      return target_->contains(G, t);
    }
  }
  return false;
}

Domain Subgroup::domain(const Group& G) const {
  Domain d = G.full_domain();
  const Field& F = G.field();
  std::uint64_t Q = F.order();
  auto add_list = [&](std::vector<Elem> L) {
    std::vector<bool> mem(Q, false);
    for (auto v : L) mem[v] = true;
    d.lists.push_back(std::move(L));
    d.member.push_back(std::move(mem));
    return static_cast<int>(d.lists.size()) - 1;
  };
  auto intersect = [&](int a, int b) {
    std::vector<Elem> L;
    for (auto v : d.lists[a])
      if (d.member[b][v]) L.push_back(v);
    return add_list(std::move(L));
  };
  switch (kind_) {
    case Kind::Pattern: {
      int only0 = add_list({0}), only1 = add_list({1});
      const Ring& R = G.ring();
      std::vector<int> fixed_idx(G.r(), 0);
      if (!endos_.empty()) {
        for (int c = 0; c < G.r(); ++c) {
          std::vector<Elem> L;
          for (std::uint64_t v = 0; v < Q; ++v) {
            RingElem x = R.zero();
            x.c[c] = static_cast<Elem>(v);
            bool ok = true;
            for (const auto& en : endos_)
              if (!(R.apply(en, x) == x)) ok = false;
            if (ok) L.push_back(static_cast<Elem>(v));
          }
          fixed_idx[c] = add_list(std::move(L));
        }
      }
      for (int i = 0; i < G.n(); ++i)
        for (int j = 0; j < G.n(); ++j) {
          int b = bound(G, i, j);
          for (int c = 0; c < G.r(); ++c)
            d.which[i * kMaxN + j][c] = c < b ? ((i == j && c == 0) ? only1 : only0) : fixed_idx[c];
        }
      return d;
    }
    case Kind::Intersection: {
      for (const auto& p : parts_) {
        Domain e = p->domain(G);
        for (int i = 0; i < G.n(); ++i)
          for (int j = 0; j < G.n(); ++j)
            for (int c = 0; c < G.r(); ++c) {
              int ent = i * kMaxN + j;
              int a = d.which[ent][c];
              const auto& L = e.lists[e.which[ent][c]];
              if (L.size() == Q) continue;
              int bidx = add_list(L);
              d.which[ent][c] = intersect(a, bidx);
            }
      }
      return d;
    }
    case Kind::Twisted: return base_->domain(G);
    default: return d;
  }
}

void Subgroup::enumerate(const Group& G, const Group::Visit& visit, std::uint64_t budget) const {
  BudgetGuard guard{budget};
  switch (kind_) {
    case Kind::Explicit:
      for (const auto& g : elems_) {
        guard.tick();
        visit(g);
      }
      return;
    case Kind::Conjugate:
      base_->enumerate(
          G,
          [&](const Mat& b) {
            guard.tick();
            visit(G.mul(lambda_, G.mul(b, G.inv(lambda_))));
          },
          budget);
      return;
    default: break;
  }
  Domain dom = domain(G);
  auto prune = [&](int k, const Mat& g) { return contains_mod(G, g, k); };
  G.enumerate(dom, prune, [&](const Mat& g) {
    if (kind_ != Kind::Pattern && !contains(G, g)) return;
    guard.tick();
    visit(g);
  });
}

std::vector<Mat> Subgroup::elements(const Group& G, std::uint64_t budget) const {
  std::vector<Mat> out;
  enumerate(G, [&](const Mat& g) { out.push_back(g); }, budget);
  return out;
}

std::uint64_t Subgroup::order(const Group& G, std::uint64_t budget) const {
  if (kind_ == Kind::Explicit) return elems_.size();
  if (kind_ == Kind::Pattern && shape_ == Shape::Whole && depth_ == 0 && endos_.empty()) return G.order();
  std::uint64_t n = 0;
  enumerate(G, [&](const Mat&) { ++n; }, budget);
  return n;
}

std::vector<Mat> Subgroup::generators(const Group& G, std::uint64_t budget) const {
  if (kind_ == Kind::Pattern && shape_ == Shape::Whole && depth_ == 0 && endos_.empty()) return G.generators();
  return extract_generators(G, elements(G, budget));
}

bool Subgroup::is_connected(const Group& G) const {
  switch (kind_) {
    case Kind::Pattern:
      if (!endos_.empty()) return false;
      if ((shape_ == Shape::Z || shape_ == Shape::ZU) && G.kind() == GroupKind::SL && depth_ == 0 &&
          G.n() % static_cast<int>(G.field().p()) != 0)
        return false;
      return true;
    case Kind::Conjugate: return base_->is_connected(G);
    case Kind::Explicit: return elems_.size() == 1;
    default: return false;
  }
}

std::vector<Mat> closure(const Group& G, const std::vector<Mat>& gens, std::uint64_t budget) {
  std::unordered_set<MatKey, MatKeyHash> seen;
  std::vector<Mat> out;
  Mat id = G.identity();
  seen.insert(G.key(id));
  out.push_back(id);
  for (std::size_t i = 0; i < out.size(); ++i)
    for (const auto& s : gens) {
      Mat x = G.mul(out[i], s);
      if (seen.insert(G.key(x)).second) {
        if (out.size() >= budget) throw Error(ErrorCode::BudgetExceeded, "closure budget exhausted");
        out.push_back(x);
      }
    }
  return out;
}

std::vector<Mat> extract_generators(const Group& G, const std::vector<Mat>& elems) {
  std::vector<Mat> gens;
  std::unordered_set<MatKey, MatKeyHash> seen;
  std::vector<Mat> span;
  Mat id = G.identity();
  seen.insert(G.key(id));
  span.push_back(id);
  for (const auto& x : elems) {
    if (seen.count(G.key(x))) continue;
    gens.push_back(x);
    // The span is closed under the old generators; multiplying everything by the new
    // one and then closing the new elements under all generators gives the new span.
    std::size_t start = span.size();
    std::size_t old = span.size();
    for (std::size_t i = 0; i < old; ++i) {
      Mat y = G.mul(span[i], x);
      if (seen.insert(G.key(y)).second) span.push_back(y);
    }
    for (std::size_t i = start; i < span.size(); ++i)
      for (const auto& s : gens) {
        Mat y = G.mul(span[i], s);
        if (seen.insert(G.key(y)).second) span.push_back(y);
      }
  }
  return gens;
}

}  // namespace edl
