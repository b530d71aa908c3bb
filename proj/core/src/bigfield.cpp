#include "edl/bigfield.hpp"

#include <numeric>

#include "edl/error.hpp"

namespace edl {
namespace {

using Poly = std::vector<int>;  // low degree first, coefficients in [0, p)

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int inv_mod(int a, int p) {
  int r = 1, b = a % p;
  for (int e = p - 2; e > 0; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return r;
}

Poly poly_mod(Poly a, const Poly& f, int p) {
  trim(a);
  int df = static_cast<int>(f.size()) - 1;
  int lead_inv = inv_mod(f.back(), p);
  while (static_cast<int>(a.size()) - 1 >= df) {
    int shift = static_cast<int>(a.size()) - 1 - df;
    int c = a.back() * lead_inv % p;
    for (int i = 0; i <= df; ++i) a[shift + i] = ((a[shift + i] - c * f[i]) % p + p) % p;
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, int p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(c), f, p);
}

Poly poly_powmod(Poly a, std::uint64_t e, const Poly& f, int p) {
  Poly r{1};
  while (e) {
    if (e & 1) r = poly_mulmod(r, a, f, p);
    a = poly_mulmod(a, a, f, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// x^(p^k) mod f by repeated p-th powers.
Poly x_pow_p_k(unsigned k, const Poly& f, int p) {
  Poly x{0, 1};
  for (unsigned i = 0; i < k; ++i) x = poly_powmod(x, static_cast<std::uint64_t>(p), f, p);
  return x;
}

bool rabin_irreducible(const Poly& f, int p) {
  unsigned D = static_cast<unsigned>(f.size()) - 1;
  Poly xpd = x_pow_p_k(D, f, p);
  Poly diff = xpd;
  diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
  diff[1] = (diff[1] - 1 + p) % p;
  trim(diff);
  if (!diff.empty()) return false;
  for (auto l : prime_factors(D)) {
    Poly h = x_pow_p_k(D / static_cast<unsigned>(l), f, p);
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] - 1 + p) % p;
    Poly g = poly_gcd(f, h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace

BigFieldPtr BigField::make(unsigned p, unsigned D) {
  if (!is_prime(p) || p > 251) throw Error(ErrorCode::InvalidArgument, "BigField needs a small prime");
  if (D < 1) throw Error(ErrorCode::InvalidArgument, "degree must be positive");
  unsigned __int128 ord = 1;
  for (unsigned i = 0; i < D; ++i) {
    ord *= p;
    if (ord >> 62) throw Error(ErrorCode::BudgetExceeded, "p^D exceeds 2^62");
  }
  if (D == 1) return BigFieldPtr(new BigField(p, 1, {0}));
  std::vector<int> digits(D, 0);
  while (true) {
    Poly f(digits.begin(), digits.end());
    f.push_back(1);
    if (f[0] != 0 && rabin_irreducible(f, static_cast<int>(p))) {
      std::vector<std::uint8_t> poly(digits.begin(), digits.end());
      return BigFieldPtr(new BigField(p, D, poly));
    }
    unsigned i = 0;
    while (i < D && ++digits[i] == static_cast<int>(p)) digits[i++] = 0;
    if (i == D) throw Error(ErrorCode::CheckFailed, "no irreducible polynomial found");
  }
}

BigField::BigField(unsigned p, unsigned D, std::vector<std::uint8_t> poly)
    : p_(p), D_(D), order_(ipow(p, D)), poly_(std::move(poly)) {
  Poly f(poly_.begin(), poly_.end());
  f.push_back(1);
  fr_.resize(D_);
  for (unsigned i = 0; i < D_; ++i) {
    Poly xi(static_cast<std::size_t>(i) * p_ + 1, 0);
    xi.back() = 1;
    Poly r = poly_mod(std::move(xi), f, static_cast<int>(p_));
    fr_[i].assign(D_, 0);
    for (std::size_t k = 0; k < r.size(); ++k) fr_[i][k] = static_cast<std::uint8_t>(r[k]);
  }
}

BigElem BigField::one() const {
  BigElem a(D_, 0);
  a[0] = 1;
  return a;
}

BigElem BigField::from_int(long long k) const {
  BigElem a(D_, 0);
  long long v = k % static_cast<long long>(p_);
  if (v < 0) v += p_;
  a[0] = static_cast<std::uint8_t>(v);
  return a;
}

BigElem BigField::gen() const {
  if (D_ == 1) return from_int(0);  // degenerate; callers use field elements directly
  BigElem a(D_, 0);
  a[1] = 1;
  return a;
}

bool BigField::is_zero(const BigElem& a) const {
  for (auto c : a)
    if (c) return false;
  return true;
}

BigElem BigField::add(const BigElem& a, const BigElem& b) const {
  BigElem s(D_);
  for (unsigned i = 0; i < D_; ++i) s[i] = static_cast<std::uint8_t>((a[i] + b[i]) % p_);
  return s;
}

BigElem BigField::sub(const BigElem& a, const BigElem& b) const {
  BigElem s(D_);
  for (unsigned i = 0; i < D_; ++i) s[i] = static_cast<std::uint8_t>((a[i] + p_ - b[i]) % p_);
  return s;
}

BigElem BigField::neg(const BigElem& a) const {
  BigElem s(D_);
  for (unsigned i = 0; i < D_; ++i) s[i] = static_cast<std::uint8_t>((p_ - a[i]) % p_);
  return s;
}

BigElem BigField::mul(const BigElem& a, const BigElem& b) const {
  std::vector<std::uint32_t> c(2 * D_ - 1, 0);
  for (unsigned i = 0; i < D_; ++i) {
    if (!a[i]) continue;
    for (unsigned j = 0; j < D_; ++j) c[i + j] += static_cast<std::uint32_t>(a[i]) * b[j];
  }
  for (auto& v : c) v %= p_;
  for (unsigned k = 2 * D_ - 1; k-- > D_;) {
    std::uint32_t t = c[k];
    if (!t) continue;
    c[k] = 0;
    // x^D = -sum poly_i x^i
    for (unsigned i = 0; i < D_; ++i) c[k - D_ + i] = (c[k - D_ + i] + (p_ - poly_[i]) * t) % p_;
  }
  BigElem s(D_);
  for (unsigned i = 0; i < D_; ++i) s[i] = static_cast<std::uint8_t>(c[i]);
  return s;
}

BigElem BigField::pow(const BigElem& a, std::uint64_t e) const {
  BigElem r = one(), b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

BigElem BigField::inv(const BigElem& a) const {
  if (is_zero(a)) throw Error(ErrorCode::NonUnit, "inverse of zero");
  return pow(a, order_ - 2);
}

BigElem BigField::frob_p(const BigElem& a, std::uint64_t k) const {
  k %= D_;
  BigElem cur = a;
  for (std::uint64_t it = 0; it < k; ++it) {
    std::vector<std::uint32_t> s(D_, 0);
    for (unsigned i = 0; i < D_; ++i) {
      if (!cur[i]) continue;
      for (unsigned j = 0; j < D_; ++j) s[j] += static_cast<std::uint32_t>(cur[i]) * fr_[i][j];
    }
    for (unsigned j = 0; j < D_; ++j) cur[j] = static_cast<std::uint8_t>(s[j] % p_);
  }
  return cur;
}

SubfieldEmbedding::SubfieldEmbedding(FieldPtr small, BigFieldPtr big)
    : small_(std::move(small)), big_(std::move(big)) {
  const Field& F = *small_;
  const BigField& B = *big_;
  unsigned n = F.degree();
  if (F.p() != B.p() || B.degree() % n != 0)
    throw Error(ErrorCode::ParameterMismatch, "field is not a subfield of the big field");
  std::uint64_t Q = F.order();
  if (Q > (std::uint64_t{1} << 22)) throw Error(ErrorCode::BudgetExceeded, "subfield too large to tabulate");
  zero_ = B.zero();
  std::uint64_t n1 = Q - 1;
  auto primes = prime_factors(n1);

  // A generator of the order-(Q-1) subgroup: the norm of a generator of F_{p^D}^*.
  BigElem beta;
  bool found = false;
  for (std::uint64_t t = 0; t < 4096 && !found; ++t) {
    BigElem y = B.zero();
    if (B.degree() > 1) {
      std::uint64_t v = t;
      for (unsigned i = 0; v && i < B.degree(); ++i, v /= B.p()) y[i] = static_cast<std::uint8_t>(v % B.p());
      y[1] = static_cast<std::uint8_t>((y[1] + 1) % B.p());
    } else {
      if (t + 1 >= B.p()) break;
      y[0] = static_cast<std::uint8_t>(t + 1);
    }
    if (B.is_zero(y)) continue;
    BigElem norm = B.one(), cur = y;
    for (unsigned i = 0; i < B.degree() / n; ++i) {
      norm = B.mul(norm, cur);
      cur = B.frob_p(cur, n);
    }
    bool prim = true;
    for (auto l : primes)
      if (B.pow(norm, n1 / l) == B.one()) {
        prim = false;
        break;
      }
    if (prim) {
      beta = norm;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::CheckFailed, "no primitive element of the subfield found");

  // alpha maps to a root of the defining polynomial among beta^j, gcd(j, Q-1) = 1.
  const auto& poly = F.poly();
  auto is_root = [&](const BigElem& x) {
    BigElem acc = B.one();  // Horner on the monic polynomial
    for (unsigned i = n; i-- > 0;) acc = B.add(B.mul(acc, x), B.from_int(poly[i]));
    return B.is_zero(acc);
  };
  BigElem root;
  found = false;
  BigElem bj = B.one();
  for (std::uint64_t j = 1; j <= n1 && !found; ++j) {
    bj = B.mul(bj, beta);
    if (std::gcd(j, n1) != 1) continue;
    if (is_root(bj)) {
      root = bj;
      found = true;
    }
  }
  if (!found) throw Error(ErrorCode::CheckFailed, "defining polynomial has no root in the big field");
  img_.resize(n1);
  BigElem cur = B.one();
  for (std::uint64_t k = 0; k < n1; ++k) {
    img_[k] = cur;
    back_.emplace(cur, static_cast<Elem>(k + 1));
    cur = B.mul(cur, root);
  }
}

BigElem SubfieldEmbedding::up(Elem a) const { return a == 0 ? zero_ : img_[a - 1]; }

Elem SubfieldEmbedding::down(const BigElem& b) const {
  if (b == zero_) return 0;
  auto it = back_.find(b);
  if (it == back_.end()) throw Error(ErrorCode::CheckFailed, "element is not in the subfield");
  return it->second;
}

}  // namespace edl
