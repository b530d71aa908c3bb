#include "edl/ring.hpp"

#include <numeric>

#include "edl/error.hpp"

namespace edl {

Ring::Ring(FieldPtr field, int r, int e, Elem zeta) : field_(std::move(field)), r_(r), e_(e), zeta_(zeta) {}

RingPtr Ring::make(FieldPtr field, int r, int e, std::optional<Elem> zeta) {
  if (!field) throw Error(ErrorCode::InvalidArgument, "null field");
  if (r < 1 || r > kMaxR) throw Error(ErrorCode::InvalidArgument, "r out of range [1, " + std::to_string(kMaxR) + "]");
  if (e < 1) throw Error(ErrorCode::InvalidArgument, "e must be positive");
  if (e % static_cast<int>(field->p()) == 0) throw Error(ErrorCode::InvalidArgument, "wild ramification (p | e) is not supported");
  Elem zt = 1;
  if (e > 1) {
    if ((field->order() - 1) % static_cast<std::uint64_t>(e) != 0)
      throw Error(ErrorCode::InvalidArgument, "e does not divide q^m - 1; no zeta_e in the working field");
    zt = zeta ? *zeta : field->root_of_unity(static_cast<std::uint64_t>(e));
    if (zt == 0 || field->mult_order(zt) != static_cast<std::uint64_t>(e))
      throw Error(ErrorCode::InvalidArgument, "zeta must have exact order e");
  } else if (zeta && *zeta != 1) {
    throw Error(ErrorCode::InvalidArgument, "zeta must be 1 when e = 1");
  }
  std::vector<std::shared_ptr<Ring>> rings;
  for (int k = 1; k <= r; ++k) {
    auto rk = std::shared_ptr<Ring>(new Ring(field, k, e, zt));
    for (int j = 1; j < k; ++j) rk->levels_[j] = rings[j - 1];
    rk->self_ = rk;
    rings.push_back(rk);
  }
  return rings.back();
}

std::uint64_t Ring::size() const { return ipow(field_->order(), static_cast<unsigned>(r_)); }

const Ring& Ring::level(int k) const {
  if (k == r_) return *this;
  if (k < 1 || k > r_) throw Error(ErrorCode::InvalidArgument, "level out of range");
  return *levels_[k];
}

RingPtr Ring::level_ptr(int k) const {
  if (k == r_) return self_.lock();
  if (k < 1 || k > r_) throw Error(ErrorCode::InvalidArgument, "level out of range");
  return levels_[k];
}

bool Ring::same_as(const Ring& o) const {
  return this == &o || (field_->same_as(*o.field_) && r_ == o.r_ && e_ == o.e_ && zeta_ == o.zeta_);
}

RingElem Ring::z_pow(int i, Elem coeff) const {
  RingElem a;
  if (i < r_) a.c[i] = coeff;
  return a;
}

RingElem Ring::inv(const RingElem& a) const {
  if (a.c[0] == 0) throw Error(ErrorCode::NonUnit, "element " + str(a) + " has positive valuation");
  const Field& f = F();
  RingElem b;
  Elem i0 = f.inv(a.c[0]);
  b.c[0] = i0;
  for (int k = 1; k < r_; ++k) {
    Elem s = 0;
    for (int i = 1; i <= k; ++i) s = f.add(s, f.mul(a.c[i], b.c[k - i]));
    b.c[k] = f.neg(f.mul(i0, s));
  }
  return b;
}

RingElem Ring::pow(const RingElem& a, std::uint64_t e) const {
  RingElem r = one(), b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

RingElem Ring::truncate(const RingElem& a, int k) const {
  RingElem s = a;
  for (int i = k; i < kMaxR; ++i) s.c[i] = 0;
  return s;
}

RingElem Ring::arith(const RingElem& a, const RingElem& b, const std::string& op) const {
  if (op == "add") return add(a, b);
  if (op == "sub") return sub(a, b);
  if (op == "mul") return mul(a, b);
  throw Error(ErrorCode::InvalidArgument, "unknown ring operation " + op);
}

RingElem Ring::sigma(const RingElem& a, std::int64_t power) const {
  if (e_ == 1) return a;
  RingElem s;
  for (int i = 0; i < r_; ++i) s.c[i] = F().mul(a.c[i], F().pow(zeta_, static_cast<std::int64_t>(i) * power));
  return s;
}

RingElem Ring::trace_sigma(const RingElem& y) const {
  RingElem t;
  for (int i = 0; i < e_; ++i) t = add(t, sigma(y, i));
  return t;
}

RingElem Ring::solve_hilbert90(const RingElem& y) const {
  if (!is_zero(trace_sigma(y))) throw Error(ErrorCode::NonzeroTrace, "sigma-trace of " + str(y) + " is nonzero");
  RingElem inv_e = inv(from_int(e_));
  RingElem x, partial;
  for (int n = 1; n < e_; ++n) {
    partial = add(partial, sigma(y, n - 1));
    x = add(x, mul(sigma(inv_e, n), partial));
  }
  return x;
}

bool Ring::is_fixed(const RingElem& a, const std::vector<RingEndo>& endos) const {
  for (const auto& g : endos)
    if (!(apply(g, a) == a)) return false;
  return true;
}

std::vector<RingElem> Ring::fixed_subring(const std::vector<RingEndo>& endos) const {
  // Both phi and sigma act coefficientwise, so the fixed ring is a product of
  // per-coefficient fixed sets.
  std::vector<std::vector<Elem>> allowed(r_);
  for (int i = 0; i < r_; ++i) {
    for (std::uint64_t v = 0; v < field_->order(); ++v) {
      RingElem a = z_pow(i, static_cast<Elem>(v));
      if (is_fixed(a, endos)) allowed[i].push_back(static_cast<Elem>(v));
    }
  }
  std::vector<RingElem> out;
  std::vector<std::size_t> pos(r_, 0);
  while (true) {
    RingElem a;
    for (int i = 0; i < r_; ++i) a.c[i] = allowed[i][pos[i]];
    out.push_back(a);
    int i = 0;
    while (i < r_ && ++pos[i] == allowed[i].size()) pos[i++] = 0;
    if (i == r_) break;
  }
  return out;
}

RingElem Ring::element(std::uint64_t idx) const {
  RingElem a;
  std::uint64_t Q = field_->order();
  for (int i = 0; i < r_; ++i) {
    a.c[i] = static_cast<Elem>(idx % Q);
    idx /= Q;
  }
  return a;
}

std::uint64_t Ring::index(const RingElem& a) const {
  std::uint64_t idx = 0, Q = field_->order();
  for (int i = r_; i-- > 0;) idx = idx * Q + a.c[i];
  return idx;
}

std::vector<RingElem> Ring::elements() const {
  std::vector<RingElem> out;
  std::uint64_t n = size();
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(element(i));
  return out;
}

std::vector<RingElem> Ring::units() const {
  std::vector<RingElem> out;
  std::uint64_t n = size();
  for (std::uint64_t i = 0; i < n; ++i) {
    RingElem a = element(i);
    if (a.c[0]) out.push_back(a);
  }
  return out;
}

std::string Ring::str(const RingElem& a) const {
  std::string s = field_->str(a.c[0]);
  for (int i = 1; i < r_; ++i) {
    s += "+" + field_->str(a.c[i]) + "*z";
    if (i > 1) s += "^" + std::to_string(i);
  }
  return s;
}

RingElem Ring::parse(const std::string& s) const {
  RingElem a;
  std::size_t start = 0;
  int i = 0;
  while (start <= s.size()) {
    std::size_t end = s.find('+', start);
    std::string term = s.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (i >= r_) throw Error(ErrorCode::InvalidArgument, "too many terms in " + s);
    std::string coeff = term;
    if (i > 0) {
      std::string suffix = (i == 1) ? "*z" : "*z^" + std::to_string(i);
      if (term.size() < suffix.size() || term.compare(term.size() - suffix.size(), suffix.size(), suffix) != 0)
        throw Error(ErrorCode::InvalidArgument, "malformed term '" + term + "' in " + s);
      coeff = term.substr(0, term.size() - suffix.size());
    }
    a.c[i++] = field_->parse(coeff);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  if (i != r_) throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(r_) + " terms in " + s);
  return a;
}

RingEmbedding make_embedding(const Ring& from, const Ring& to) {
  if (from.r() != to.r() || from.e() != to.e())
    throw Error(ErrorCode::ParameterMismatch, "rings differ in r or e");
  RingEmbedding emb{&from, &to, from.field().embedding_into(to.field())};
  if (from.e() > 1 && emb(from.zeta()) != to.zeta())
    throw Error(ErrorCode::ParameterMismatch, "zeta_e is not compatible with the embedding");
  return emb;
}

}  // namespace edl
