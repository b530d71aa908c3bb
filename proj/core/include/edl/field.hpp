#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace edl {

// Field elements are discrete-log encoded: 0 is zero, 1 + k is alpha^k.
// Every value in [0, Q) is therefore a valid element.
using Elem = std::uint32_t;

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// F_{q^m} with q = p^f, built from a primitive polynomial of degree f*m.
class Field {
 public:
  static constexpr std::uint64_t kMaxOrder = std::uint64_t{1} << 31;

  // Deterministic: the lexicographically first primitive polynomial is used.
  static FieldPtr make(unsigned p, unsigned f, unsigned m);
  // poly holds the coefficients c_0..c_{n-1} of x^n + c_{n-1}x^{n-1} + ... + c_0.
  static FieldPtr from_poly(unsigned p, unsigned f, unsigned m, std::vector<unsigned> poly);

  unsigned p() const { return p_; }
  unsigned f() const { return f_; }
  unsigned m() const { return m_; }
  unsigned degree() const { return f_ * m_; }
  std::uint64_t q() const { return q_; }
  std::uint64_t order() const { return Q_; }
  const std::vector<unsigned>& poly() const { return poly_; }

  static constexpr Elem zero() { return 0; }
  static constexpr Elem one() { return 1; }

  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    std::uint64_t s = std::uint64_t{a} + b - 2;
    if (s >= n1_) s -= n1_;
    return static_cast<Elem>(s + 1);
  }
  Elem add(Elem a, Elem b) const {
    if (a == 0) return b;
    if (b == 0) return a;
    std::uint64_t k = b >= a ? b - a : b + n1_ - a;
    Elem z = zech_[k];
    if (z == 0) return 0;
    return mul(a, z);
  }
  Elem neg(Elem a) const { return (a == 0 || p_ == 2) ? a : mul(a, minus_one_); }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem inv(Elem a) const;  // throws on zero
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::int64_t e) const;

  // a^(q^k); q-power Frobenius, order m on the field.
  Elem frob(Elem a, std::int64_t k) const;
  // a^(p^k)
  Elem frob_p(Elem a, std::int64_t k) const;

  Elem gen_pow(std::int64_t k) const;  // alpha^k
  std::uint64_t log(Elem a) const;     // requires a != 0
  std::uint64_t mult_order(Elem a) const;

  Elem from_int(long long k) const;
  std::optional<unsigned> to_int(Elem a) const;  // defined on the prime field

  // True iff a lies in the subfield F_{p^d}; d must divide degree().
  bool in_subfield(Elem a, unsigned d) const;
  bool in_base(Elem a) const { return in_subfield(a, f_); }
  // Tr_{F_{p^d}/F_p}(a) as an integer in [0, p); a must lie in F_{p^d}.
  unsigned trace_to_prime(Elem a, unsigned d) const;
  bool is_square(Elem a) const;
  std::optional<Elem> sqrt(Elem a) const;
  // alpha^((Q-1)/e); requires e | Q-1.
  Elem root_of_unity(std::uint64_t e) const;
  // Smallest-log element of F_q that is not a square in F_q (p odd).
  Elem base_nonsquare() const;

  // Coordinates of a over F_p in the power basis of alpha.
  std::vector<unsigned> coords(Elem a) const;
  Elem from_coords(const std::vector<unsigned>& c) const;

  // Multiplier j such that the subfield generator maps to alpha^j in `top`:
  // a = alpha^k in this field embeds as alpha_top^(j*k). Requires degree() | top.degree().
  std::uint64_t embedding_into(const Field& top) const;

  std::string str(Elem a) const;
  Elem parse(const std::string& s) const;
  bool same_as(const Field& o) const { return p_ == o.p_ && f_ == o.f_ && m_ == o.m_ && poly_ == o.poly_; }

 private:
  Field(unsigned p, unsigned f, unsigned m, std::vector<unsigned> poly);

  unsigned p_, f_, m_;
  std::uint64_t q_, Q_, n1_;
  Elem minus_one_ = 1;
  std::vector<unsigned> poly_;
  std::vector<Elem> zech_;           // zech_[k] = 1 + alpha^k (encoded)
  std::vector<std::uint32_t> pack_;  // pack_[k] = base-p packing of alpha^k
  std::vector<std::uint32_t> unpack_;  // packed value -> k
};

// Small integer helpers shared across modules.
std::vector<std::uint64_t> prime_factors(std::uint64_t n);
std::uint64_t ipow(std::uint64_t b, unsigned e);
bool is_prime(std::uint64_t n);
// Returns (p, f) with q = p^f, or nullopt when q is not a prime power.
std::optional<std::pair<unsigned, unsigned>> prime_power(std::uint64_t q);

}  // namespace edl
