#include "edl/cyclo.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>
#include <sstream>

#include "edl/error.hpp"

namespace edl {

std::string rational_str(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

using Poly = std::vector<long long>;  // low degree first

Poly poly_div_exact(Poly a, const Poly& b) {
  Poly q(a.size() - b.size() + 1, 0);
  for (std::size_t i = q.size(); i-- > 0;) {
    long long c = a[i + b.size() - 1] / b.back();
    q[i] = c;
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
  }
  return q;
}

Poly cyclotomic(unsigned N) {
  static std::map<unsigned, Poly> cache;
  if (auto it = cache.find(N); it != cache.end()) return it->second;
  Poly num(N + 1, 0);
  num[0] = -1;
  num[N] = 1;
  for (unsigned d = 1; d < N; ++d)
    if (N % d == 0) num = poly_div_exact(num, cyclotomic(d));
  cache[N] = num;
  return num;
}

}  // namespace

CycloField::CycloField(unsigned N) : N_(N) {
  phi_ = cyclotomic(N);
  deg_ = static_cast<unsigned>(phi_.size() - 1);
  // x^k mod Phi_N by repeated multiplication by x
  std::vector<long long> cur(deg_, 0);
  cur[0] = 1;
  pow_.resize(2 * N);
  for (unsigned k = 0; k < 2 * N; ++k) {
    for (unsigned i = 0; i < deg_; ++i)
      if (cur[i]) pow_[k].push_back({i, cur[i]});
    long long top = cur[deg_ - 1];
    for (unsigned i = deg_ - 1; i > 0; --i) cur[i] = cur[i - 1] - top * phi_[i];
    cur[0] = -top * phi_[0];
  }
}

CycloFieldPtr CycloField::get(unsigned N) {
  if (N == 0) throw Error(ErrorCode::InvalidArgument, "cyclotomic order must be positive");
  static std::mutex mu;
  static std::map<unsigned, CycloFieldPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[N];
  if (!slot) slot = CycloFieldPtr(new CycloField(N));
  return slot;
}

Cyclo::Cyclo(CycloFieldPtr K, long long c) : K_(std::move(K)), c_(K_->degree(), 0) { c_[0] = c; }

Cyclo Cyclo::root(CycloFieldPtr K, long long k) {
  Cyclo a(K);
  long long N = K->N();
  for (const auto& [i, v] : K->power(static_cast<unsigned>(((k % N) + N) % N))) a.c_[i] += v;
  return a;
}

Cyclo Cyclo::from_exponent_counts(CycloFieldPtr K, const std::vector<long long>& counts) {
  Cyclo a(K);
  for (std::size_t k = 0; k < counts.size(); ++k)
    if (counts[k])
      for (const auto& [i, v] : K->power(static_cast<unsigned>(k % K->N()))) a.c_[i] += counts[k] * v;
  return a;
}

Cyclo Cyclo::operator+(const Cyclo& o) const {
  Cyclo s = *this;
  s += o;
  return s;
}

Cyclo& Cyclo::operator+=(const Cyclo& o) {
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Cyclo Cyclo::operator-(const Cyclo& o) const {
  Cyclo s = *this;
  for (std::size_t i = 0; i < c_.size(); ++i) s.c_[i] -= o.c_[i];
  return s;
}

Cyclo Cyclo::operator-() const { return *this * -1; }

Cyclo Cyclo::operator*(long long s) const {
  Cyclo a = *this;
  for (auto& x : a.c_) x *= s;
  return a;
}

Cyclo Cyclo::operator*(const Cyclo& o) const {
  std::vector<long long> raw(2 * K_->degree(), 0);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    for (std::size_t j = 0; j < o.c_.size(); ++j)
      if (o.c_[j]) raw[i + j] += c_[i] * o.c_[j];
  }
  Cyclo a(K_);
  for (std::size_t k = 0; k < raw.size(); ++k)
    if (raw[k])
      for (const auto& [i, v] : K_->power(static_cast<unsigned>(k))) a.c_[i] += raw[k] * v;
  return a;
}

Cyclo Cyclo::div_exact(long long d) const {
  Cyclo a = *this;
  for (auto& x : a.c_) {
    if (x % d) throw Error(ErrorCode::NonIntegral, "cyclotomic value not divisible by " + std::to_string(d));
    x /= d;
  }
  return a;
}

Cyclo Cyclo::galois(long long k) const {
  long long N = K_->N();
  Cyclo a(K_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    auto e = static_cast<unsigned>((((static_cast<long long>(i) * k) % N) + N) % N);
    for (const auto& [j, v] : K_->power(e)) a.c_[j] += c_[i] * v;
  }
  return a;
}

Cyclo Cyclo::conj() const { return galois(-1); }

Cyclo Cyclo::lift(const CycloFieldPtr& M) const {
  if (M->N() % K_->N()) throw Error(ErrorCode::InvalidArgument, "cyclotomic lift needs N | M");
  unsigned step = M->N() / K_->N();
  Cyclo a(M);
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i])
      for (const auto& [j, v] : M->power(static_cast<unsigned>(i) * step)) a.c_[j] += c_[i] * v;
  return a;
}

bool Cyclo::is_zero() const {
  for (auto x : c_)
    if (x) return false;
  return true;
}

bool Cyclo::is_integer() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i]) return false;
  return true;
}

long long Cyclo::to_integer() const {
  if (!is_integer()) throw Error(ErrorCode::NonIntegral, "cyclotomic value " + str() + " is not rational");
  return c_[0];
}

std::complex<double> Cyclo::to_complex() const {
  std::complex<double> s = 0;
  double t = 2 * std::numbers::pi / K_->N();
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i]) s += static_cast<double>(c_[i]) * std::polar(1.0, t * static_cast<double>(i));
  return s;
}

std::string Cyclo::str() const {
  std::string out;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (!c_[i]) continue;
    if (!out.empty()) out += " + ";
    out += std::to_string(c_[i]) + "*z^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

Cyclo Cyclo::parse(CycloFieldPtr K, const std::string& s) {
  Cyclo a(K);
  if (s == "0") return a;
  std::stringstream ss(s);
  std::string term;
  while (std::getline(ss, term, '+')) {
    auto star = term.find("*z^");
    if (star == std::string::npos) throw Error(ErrorCode::InvalidArgument, "bad cyclotomic term '" + term + "'");
    long long c = std::stoll(term.substr(0, star));
    unsigned k = static_cast<unsigned>(std::stoul(term.substr(star + 3)));
    if (k >= K->degree()) throw Error(ErrorCode::InvalidArgument, "cyclotomic exponent out of basis range");
    a.c_[k] += c;
  }
  return a;
}

}  // namespace edl
