#include "edl/orbits.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "edl/error.hpp"

namespace edl {

const char* lie_mode_name(LieMode m) { return m == LieMode::TraceZero ? "traceZero" : "modCenter"; }

const char* orbit_kind_name(OrbitKind k) {
  switch (k) {
    case OrbitKind::Split: return "split";
    case OrbitKind::Cuspidal: return "cuspidal";
    case OrbitKind::Nilpotent: return "nilpotent";
    case OrbitKind::Imprimitive: return "imprimitive";
  }
  return "?";
}

LieMode parse_lie_mode(const std::string& s) {
  if (s == "traceZero") return LieMode::TraceZero;
  if (s == "modCenter") return LieMode::ModCenter;
  throw Error(ErrorCode::InvalidArgument, "unknown Lie mode '" + s + "'");
}

LieElem make_lie(const Group& G, const Mat& x, LieMode mode) {
  if (G.n() != 2) throw Error(ErrorCode::InvalidArgument, "Lie algebra elements need n = 2");
  const Ring& R = G.ring();
  LieElem b{x, mode};
  b.x.n = 2;
  if (mode == LieMode::TraceZero) {
    if (!R.is_zero(G.trace(x))) throw Error(ErrorCode::InvalidArgument, "trace-zero element has non-zero trace");
  } else {
    RingElem a = x.at(0, 0);
    b.x.at(0, 0) = R.zero();
    b.x.at(1, 1) = R.sub(x.at(1, 1), a);
  }
  return b;
}

LieElem adjoint(const Group& G, const Mat& g, const LieElem& b) {
  Mat gr = g;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int c = G.r(); c < kMaxR; ++c) gr.at(i, j).c[c] = 0;
  return make_lie(G, G.mul(gr, G.mul(b.x, G.inv(gr))), b.mode);
}

std::vector<LieElem> lie_elements(const Group& G, LieMode mode) {
  const Ring& R = G.ring();
  auto els = R.elements();
  std::vector<LieElem> out;
  for (const auto& a : els)
    for (const auto& b : els)
      for (const auto& c : els) {
        Mat x = G.zero();
        if (mode == LieMode::TraceZero) {
          x.at(0, 0) = a;
          x.at(1, 1) = R.neg(a);
        } else {
          x.at(1, 1) = a;
        }
        x.at(0, 1) = b;
        x.at(1, 0) = c;
        out.push_back({x, mode});
      }
  std::sort(out.begin(), out.end(), [&](const LieElem& u, const LieElem& v) { return G.key(u.x) < G.key(v.x); });
  return out;
}

OrbitKind orbit_kind(const Group& G, const LieElem& b) {
  const Field& F = G.field();
  Elem x00 = b.x.at(0, 0).c[0], x01 = b.x.at(0, 1).c[0], x10 = b.x.at(1, 0).c[0], x11 = b.x.at(1, 1).c[0];
  bool zero = x01 == 0 && x10 == 0 && (b.mode == LieMode::ModCenter ? x11 == 0 : x00 == 0);
  if (zero) return OrbitKind::Imprimitive;
  Elem s = F.add(x00, x11);
  Elem det = F.sub(F.mul(x00, x11), F.mul(x01, x10));
  if (F.p() == 2) {
    if (s == 0) return OrbitKind::Nilpotent;
    for (std::uint64_t v = 0; v < F.order(); ++v) {
      Elem t = static_cast<Elem>(v);
      if (F.add(F.sub(F.mul(t, t), F.mul(s, t)), det) == 0) return OrbitKind::Split;
    }
    return OrbitKind::Cuspidal;
  }
  Elem disc = F.sub(F.mul(s, s), F.mul(F.from_int(4), det));
  if (disc == 0) return OrbitKind::Nilpotent;
  return F.is_square(disc) ? OrbitKind::Split : OrbitKind::Cuspidal;
}

namespace {

std::vector<LieElem> orbit_members(const Group& G, const LieElem& b, const std::vector<Mat>& gens) {
  std::unordered_set<MatKey, MatKeyHash> seen{G.key(b.x)};
  std::vector<LieElem> out{b}, stack{b};
  while (!stack.empty()) {
    LieElem x = stack.back();
    stack.pop_back();
    for (const auto& g : gens) {
      LieElem y = adjoint(G, g, x);
      if (seen.insert(G.key(y.x)).second) {
        out.push_back(y);
        stack.push_back(y);
      }
    }
  }
  return out;
}

}  // namespace

Orbit orbit_of(const Group& G, const LieElem& b) {
  auto members = orbit_members(G, b, G.generators());
  Orbit o;
  o.kind = orbit_kind(G, b);
  o.size = members.size();
  o.rep = *std::min_element(members.begin(), members.end(),
                            [&](const LieElem& u, const LieElem& v) { return G.key(u.x) < G.key(v.x); });
  return o;
}

std::vector<Orbit> classify_orbits(const Group& G, LieMode mode, std::uint64_t budget) {
  std::uint64_t total = 1;
  for (int i = 0; i < 3; ++i) total *= G.ring().size();
  if (total > budget) throw Error(ErrorCode::BudgetExceeded, "Lie algebra too large to partition");
  auto gens = G.generators();
  std::unordered_set<MatKey, MatKeyHash> done;
  std::vector<Orbit> out;
  for (const auto& b : lie_elements(G, mode)) {
    if (done.count(G.key(b.x)) || orbit_kind(G, b) == OrbitKind::Imprimitive) continue;
    auto members = orbit_members(G, b, gens);
    for (const auto& m : members) done.insert(G.key(m.x));
    // elements arrive in key order, so b is the orbit minimum
    out.push_back({orbit_kind(G, b), b, members.size()});
  }
  return out;
}

}  // namespace edl
