#include "edl/field.hpp"

#include <numeric>

#include "edl/error.hpp"

namespace edl {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParameterMismatch: return "ParameterMismatch";
    case ErrorCode::NonUnit: return "NonUnit";
    case ErrorCode::NonzeroTrace: return "NonzeroTrace";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NonSplit: return "NonSplit";
    case ErrorCode::LevelTooLow: return "LevelTooLow";
    case ErrorCode::NotExtendable: return "NotExtendable";
    case ErrorCode::NonIntegral: return "NonIntegral";
    case ErrorCode::UnsupportedConnectedComponent: return "UnsupportedConnectedComponent";
    case ErrorCode::CheckFailed: return "CheckFailed";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Error";
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::optional<std::pair<unsigned, unsigned>> prime_power(std::uint64_t q) {
  if (q < 2) return std::nullopt;
  auto fs = prime_factors(q);
  if (fs.size() != 1) return std::nullopt;
  unsigned f = 0;
  std::uint64_t x = q;
  while (x > 1) {
    x /= fs[0];
    ++f;
  }
  return std::make_pair(static_cast<unsigned>(fs[0]), f);
}

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % n);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t n) {
  std::uint64_t r = 1 % n;
  b %= n;
  while (e) {
    if (e & 1) r = mulmod(r, b, n);
    b = mulmod(b, b, n);
    e >>= 1;
  }
  return r;
}

// Multiply the packed polynomial v by x modulo the monic polynomial poly.
std::uint32_t times_x(std::uint32_t v, const std::vector<unsigned>& poly, unsigned p,
                      const std::vector<std::uint32_t>& pw) {
  unsigned n = static_cast<unsigned>(poly.size());
  unsigned top = static_cast<unsigned>(v / pw[n - 1]);
  std::uint32_t shifted = (v % pw[n - 1]) * p;
  if (top == 0) return shifted;
  // subtract top * (poly - x^n) from the shifted value, digitwise
  std::uint32_t out = 0;
  for (unsigned i = 0; i < n; ++i) {
    unsigned d = (shifted / pw[i]) % p;
    unsigned c = (poly[i] * top) % p;
    d = (d + p - c) % p;
    out += d * pw[i];
  }
  return out;
}

bool is_primitive(const std::vector<unsigned>& poly, unsigned p, std::uint64_t Q,
                  const std::vector<std::uint32_t>& pw) {
  if (poly[0] == 0) return false;
  if (poly.size() == 1) {
    // x + c0: root -c0 must generate F_p^*
    unsigned r = (p - poly[0]) % p;
    std::uint64_t o = 1, x = r;
    while (x != 1) {
      x = x * r % p;
      ++o;
    }
    return o == Q - 1;
  }
  std::uint32_t v = 1;
  for (std::uint64_t k = 1; k < Q - 1; ++k) {
    v = times_x(v, poly, p, pw);
    if (v == 1 || v == 0) return false;
  }
  v = times_x(v, poly, p, pw);
  return v == 1;
}

}  // namespace

FieldPtr Field::make(unsigned p, unsigned f, unsigned m) {
  if (!is_prime(p)) throw Error(ErrorCode::InvalidArgument, "p must be prime");
  if (f == 0 || m == 0) throw Error(ErrorCode::InvalidArgument, "degrees must be positive");
  unsigned n = f * m;
  long double qq = 1;
  for (unsigned i = 0; i < n; ++i) qq *= p;
  if (qq > static_cast<long double>(kMaxOrder))
    throw Error(ErrorCode::BudgetExceeded, "field order exceeds 2^31");
  std::uint64_t Q = ipow(p, n);
  std::vector<std::uint32_t> pw(n + 1, 1);
  for (unsigned i = 1; i <= n; ++i) pw[i] = pw[i - 1] * p;
  std::vector<unsigned> poly(n, 0);
  for (std::uint64_t idx = 0; idx < Q; ++idx) {
    std::uint64_t t = idx;
    for (unsigned i = 0; i < n; ++i) {
      poly[i] = static_cast<unsigned>(t % p);
      t /= p;
    }
    if (is_primitive(poly, p, Q, pw)) return FieldPtr(new Field(p, f, m, poly));
  }
  throw Error(ErrorCode::CheckFailed, "no primitive polynomial found");
}

FieldPtr Field::from_poly(unsigned p, unsigned f, unsigned m, std::vector<unsigned> poly) {
  unsigned n = f * m;
  if (poly.size() != n) throw Error(ErrorCode::InvalidArgument, "polynomial degree mismatch");
  std::uint64_t Q = ipow(p, n);
  std::vector<std::uint32_t> pw(n + 1, 1);
  for (unsigned i = 1; i <= n; ++i) pw[i] = pw[i - 1] * p;
  if (!is_primitive(poly, p, Q, pw)) throw Error(ErrorCode::InvalidArgument, "polynomial is not primitive");
  return FieldPtr(new Field(p, f, m, std::move(poly)));
}

Field::Field(unsigned p, unsigned f, unsigned m, std::vector<unsigned> poly)
    : p_(p), f_(f), m_(m), poly_(std::move(poly)) {
  unsigned n = f * m;
  q_ = ipow(p, f);
  Q_ = ipow(p, n);
  n1_ = Q_ - 1;
  std::vector<std::uint32_t> pw(n + 1, 1);
  for (unsigned i = 1; i <= n; ++i) pw[i] = pw[i - 1] * p;
  pack_.resize(n1_);
  unpack_.assign(Q_, 0);
  if (n == 1) {
    unsigned r = (p - poly_[0]) % p;
    std::uint64_t x = 1;
    for (std::uint64_t k = 0; k < n1_; ++k) {
      pack_[k] = static_cast<std::uint32_t>(x);
      x = x * r % p;
    }
  } else {
    std::uint32_t v = 1;
    for (std::uint64_t k = 0; k < n1_; ++k) {
      pack_[k] = v;
      v = times_x(v, poly_, p, pw);
    }
  }
  for (std::uint64_t k = 0; k < n1_; ++k) unpack_[pack_[k]] = static_cast<std::uint32_t>(k);
  zech_.resize(n1_);
  for (std::uint64_t k = 0; k < n1_; ++k) {
    std::uint32_t v = pack_[k];
    unsigned d0 = v % p;
    std::uint32_t w = v - d0 + (d0 + 1) % p;
    zech_[k] = (w == 0) ? 0 : static_cast<Elem>(unpack_[w] + 1);
  }
  minus_one_ = (p == 2) ? 1 : static_cast<Elem>(n1_ / 2 + 1);
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw Error(ErrorCode::NonUnit, "inverse of zero");
  std::uint64_t k = a - 1;
  return static_cast<Elem>((k == 0 ? 0 : n1_ - k) + 1);
}

Elem Field::pow(Elem a, std::int64_t e) const {
  if (a == 0) {
    if (e == 0) return 1;
    if (e < 0) throw Error(ErrorCode::NonUnit, "negative power of zero");
    return 0;
  }
  std::int64_t n1 = static_cast<std::int64_t>(n1_);
  std::int64_t em = e % n1;
  if (em < 0) em += n1;
  return static_cast<Elem>(mulmod(a - 1, static_cast<std::uint64_t>(em), n1_) + 1);
}

Elem Field::frob(Elem a, std::int64_t k) const {
  if (a == 0) return 0;
  std::int64_t mk = k % static_cast<std::int64_t>(m_);
  if (mk < 0) mk += m_;
  std::uint64_t e = powmod(q_, static_cast<std::uint64_t>(mk), n1_);
  return static_cast<Elem>(mulmod(a - 1, e, n1_) + 1);
}

Elem Field::frob_p(Elem a, std::int64_t k) const {
  if (a == 0) return 0;
  std::int64_t n = degree();
  std::int64_t mk = k % n;
  if (mk < 0) mk += n;
  std::uint64_t e = powmod(p_, static_cast<std::uint64_t>(mk), n1_);
  return static_cast<Elem>(mulmod(a - 1, e, n1_) + 1);
}

Elem Field::gen_pow(std::int64_t k) const {
  std::int64_t n1 = static_cast<std::int64_t>(n1_);
  std::int64_t km = k % n1;
  if (km < 0) km += n1;
  return static_cast<Elem>(km + 1);
}

std::uint64_t Field::log(Elem a) const {
  if (a == 0) throw Error(ErrorCode::NonUnit, "log of zero");
  return a - 1;
}

std::uint64_t Field::mult_order(Elem a) const {
  if (a == 0) throw Error(ErrorCode::NonUnit, "order of zero");
  return n1_ / std::gcd<std::uint64_t>(a - 1, n1_);
}

Elem Field::from_int(long long k) const {
  long long r = k % static_cast<long long>(p_);
  if (r < 0) r += p_;
  if (r == 0) return 0;
  return static_cast<Elem>(unpack_[static_cast<std::uint32_t>(r)] + 1);
}

std::optional<unsigned> Field::to_int(Elem a) const {
  if (a == 0) return 0u;
  std::uint32_t v = pack_[a - 1];
  if (v < p_) return v;
  return std::nullopt;
}

bool Field::in_subfield(Elem a, unsigned d) const {
  if (a == 0) return true;
  std::uint64_t s = ipow(p_, d) - 1;
  return mulmod(a - 1, s, n1_) == 0;
}

unsigned Field::trace_to_prime(Elem a, unsigned d) const {
  Elem t = 0;
  for (unsigned i = 0; i < d; ++i) t = add(t, frob_p(a, i));
  auto v = to_int(t);
  if (!v) throw Error(ErrorCode::InvalidArgument, "trace argument outside the subfield");
  return *v;
}

bool Field::is_square(Elem a) const {
  if (a == 0 || p_ == 2) return true;
  return (a - 1) % 2 == 0;
}

std::optional<Elem> Field::sqrt(Elem a) const {
  if (a == 0) return Elem{0};
  if (p_ == 2) return static_cast<Elem>(mulmod(a - 1, Q_ / 2, n1_) + 1);
  if ((a - 1) % 2 != 0) return std::nullopt;
  return static_cast<Elem>((a - 1) / 2 + 1);
}

Elem Field::root_of_unity(std::uint64_t e) const {
  if (e == 0 || n1_ % e != 0) throw Error(ErrorCode::InvalidArgument, "e does not divide Q-1");
  return gen_pow(static_cast<std::int64_t>(n1_ / e));
}

Elem Field::base_nonsquare() const {
  if (p_ == 2) throw Error(ErrorCode::InvalidArgument, "every element is a square in characteristic 2");
  return gen_pow(static_cast<std::int64_t>(n1_ / (q_ - 1)));
}

std::vector<unsigned> Field::coords(Elem a) const {
  std::vector<unsigned> c(degree(), 0);
  if (a == 0) return c;
  std::uint32_t v = pack_[a - 1];
  for (unsigned i = 0; i < degree(); ++i) {
    c[i] = v % p_;
    v /= p_;
  }
  return c;
}

Elem Field::from_coords(const std::vector<unsigned>& c) const {
  std::uint32_t v = 0, pw = 1;
  for (unsigned i = 0; i < degree(); ++i) {
    unsigned d = i < c.size() ? c[i] % p_ : 0;
    v += d * pw;
    pw *= p_;
  }
  if (v == 0) return 0;
  return static_cast<Elem>(unpack_[v] + 1);
}

std::uint64_t Field::embedding_into(const Field& top) const {
  if (top.p() != p_ || top.degree() % degree() != 0)
    throw Error(ErrorCode::ParameterMismatch, "field does not embed");
  std::uint64_t step = (top.order() - 1) / (Q_ - 1);
  for (std::uint64_t t = 1; t < Q_; ++t) {
    if (std::gcd(t, n1_) != 1) continue;
    std::uint64_t j = t * step;
    Elem beta = top.gen_pow(static_cast<std::int64_t>(j));
    Elem v = 1;
    for (std::size_t i = poly_.size(); i-- > 0;) v = top.add(top.mul(v, beta), top.from_int(poly_[i]));
    if (v == 0) return j;
  }
  throw Error(ErrorCode::CheckFailed, "no root of the defining polynomial in the target field");
}

std::string Field::str(Elem a) const {
  if (a == 0) return "0";
  return "g^" + std::to_string(a - 1);
}

Elem Field::parse(const std::string& s) const {
  if (s == "0") return 0;
  if (s == "1") return 1;
  if (s.size() > 2 && s[0] == 'g' && s[1] == '^') {
    std::uint64_t k = std::stoull(s.substr(2));
    if (k >= n1_) throw Error(ErrorCode::InvalidArgument, "log out of range: " + s);
    return static_cast<Elem>(k + 1);
  }
  throw Error(ErrorCode::InvalidArgument, "cannot parse field element: " + s);
}

}  // namespace edl
