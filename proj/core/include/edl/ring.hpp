#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "edl/field.hpp"

namespace edl {

constexpr int kMaxR = 6;

// Coefficient of z^i at index i; entries at index >= r are always zero.
struct RingElem {
  std::array<Elem, kMaxR> c{};
  bool operator==(const RingElem&) const = default;
};

// Semilinear endomorphism phi^phi_power * sigma^sigma_power.
struct RingEndo {
  int phi = 0;
  int sigma = 0;
  RingEndo then(const RingEndo& o) const { return {phi + o.phi, sigma + o.sigma}; }
  bool is_identity() const { return phi == 0 && sigma == 0; }
  bool operator==(const RingEndo&) const = default;
};

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

// O = F_{q^m}[z]/z^r, viewed as a totally tamely ramified degree e extension of
// F_{q^m}[w]/w^{r'} via w = z^e.
class Ring {
 public:
  // zeta defaults to alpha^((Q-1)/e). When given explicitly it must have exact order e.
  static RingPtr make(FieldPtr field, int r, int e = 1, std::optional<Elem> zeta = std::nullopt);

  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  int r() const { return r_; }
  int e() const { return e_; }
  Elem zeta() const { return zeta_; }
  // [(r-1)/e] + 1
  int base_r_prime() const { return (r_ - 1) / e_ + 1; }
  std::uint64_t size() const;
  // Same ring truncated to level k (1 <= k <= r); cached.
  const Ring& level(int k) const;
  RingPtr level_ptr(int k) const;
  bool same_as(const Ring& o) const;

  RingElem zero() const { return {}; }
  RingElem one() const {
    RingElem a;
    a.c[0] = 1;
    return a;
  }
  RingElem scalar(Elem x) const {
    RingElem a;
    a.c[0] = x;
    return a;
  }
  RingElem from_int(long long k) const { return scalar(field_->from_int(k)); }
  RingElem z_pow(int i, Elem coeff = 1) const;

  RingElem add(const RingElem& a, const RingElem& b) const {
    RingElem s;
    for (int i = 0; i < r_; ++i) s.c[i] = F().add(a.c[i], b.c[i]);
    return s;
  }
  RingElem sub(const RingElem& a, const RingElem& b) const {
    RingElem s;
    for (int i = 0; i < r_; ++i) s.c[i] = F().sub(a.c[i], b.c[i]);
    return s;
  }
  RingElem neg(const RingElem& a) const {
    RingElem s;
    for (int i = 0; i < r_; ++i) s.c[i] = F().neg(a.c[i]);
    return s;
  }
  RingElem mul(const RingElem& a, const RingElem& b) const {
    RingElem s;
    const Field& f = F();
    for (int i = 0; i < r_; ++i) {
      if (a.c[i] == 0) continue;
      for (int j = 0; i + j < r_; ++j) s.c[i + j] = f.add(s.c[i + j], f.mul(a.c[i], b.c[j]));
    }
    return s;
  }
  RingElem mul_scalar(const RingElem& a, Elem x) const {
    RingElem s;
    for (int i = 0; i < r_; ++i) s.c[i] = F().mul(a.c[i], x);
    return s;
  }
  bool is_zero(const RingElem& a) const {
    for (int i = 0; i < r_; ++i)
      if (a.c[i]) return false;
    return true;
  }
  bool is_one(const RingElem& a) const {
    if (a.c[0] != 1) return false;
    for (int i = 1; i < r_; ++i)
      if (a.c[i]) return false;
    return true;
  }
  bool is_unit(const RingElem& a) const { return a.c[0] != 0; }
  int valuation(const RingElem& a) const {
    for (int i = 0; i < r_; ++i)
      if (a.c[i]) return i;
    return r_;
  }
  RingElem inv(const RingElem& a) const;  // throws NonUnit
  RingElem div(const RingElem& a, const RingElem& b) const { return mul(a, inv(b)); }
  RingElem pow(const RingElem& a, std::uint64_t e) const;
  RingElem truncate(const RingElem& a, int k) const;

  // (op in {"add","sub","mul"})
  RingElem arith(const RingElem& a, const RingElem& b, const std::string& op) const;

  RingElem phi(const RingElem& a, std::int64_t power) const {
    RingElem s;
    for (int i = 0; i < r_; ++i) s.c[i] = F().frob(a.c[i], power);
    return s;
  }
  RingElem sigma(const RingElem& a, std::int64_t power) const;
  RingElem apply(const RingEndo& g, const RingElem& a) const {
    RingElem x = g.phi ? phi(a, g.phi) : a;
    return g.sigma ? sigma(x, g.sigma) : x;
  }
  RingElem trace_sigma(const RingElem& y) const;
  // x with x - sigma(x) = y; throws NonzeroTrace.
  RingElem solve_hilbert90(const RingElem& y) const;
  // All elements fixed by every endomorphism in the list, in enumeration order.
  std::vector<RingElem> fixed_subring(const std::vector<RingEndo>& endos) const;
  bool is_fixed(const RingElem& a, const std::vector<RingEndo>& endos) const;

  // Enumeration: index <-> element, coefficient 0 least significant.
  RingElem element(std::uint64_t idx) const;
  std::uint64_t index(const RingElem& a) const;
  std::vector<RingElem> elements() const;
  std::vector<RingElem> units() const;

  std::string str(const RingElem& a) const;
  RingElem parse(const std::string& s) const;

 private:
  Ring(FieldPtr field, int r, int e, Elem zeta);
  const Field& F() const { return *field_; }

  FieldPtr field_;
  int r_, e_;
  Elem zeta_;
  std::array<std::shared_ptr<const Ring>, kMaxR + 1> levels_{};  // k < r only
  std::weak_ptr<const Ring> self_;
};

// Coefficientwise embedding of a ring over a subfield into one over a larger field
// (same r; the target's zeta must be the image of the source's).
struct RingEmbedding {
  const Ring* from = nullptr;
  const Ring* to = nullptr;
  std::uint64_t j = 1;
  Elem operator()(Elem a) const { return a == 0 ? 0 : to->field().gen_pow(static_cast<std::int64_t>(j * (a - 1))); }
  RingElem operator()(const RingElem& a) const {
    RingElem s;
    for (int i = 0; i < to->r(); ++i) s.c[i] = (*this)(a.c[i]);
    return s;
  }
};
RingEmbedding make_embedding(const Ring& from, const Ring& to);

}  // namespace edl
