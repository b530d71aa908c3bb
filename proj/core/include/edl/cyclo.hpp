#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace edl {

using Rational = boost::rational<long long>;
std::string rational_str(const Rational& r);  // "num/den", or "num" when den = 1

class CycloField;
using CycloFieldPtr = std::shared_ptr<const CycloField>;

// Q(zeta_N) with the power basis 1, zeta, ..., zeta^{phi(N)-1}; values are reduced modulo the
// N-th cyclotomic polynomial, which makes the coefficient vector canonical.
class CycloField {
 public:
  static CycloFieldPtr get(unsigned N);  // cached per N

  unsigned N() const { return N_; }
  unsigned degree() const { return deg_; }
  const std::vector<long long>& cyclotomic_poly() const { return phi_; }
  // zeta^k in the basis, for 0 <= k < 2N (sparse: (index, coefficient))
  const std::vector<std::pair<unsigned, long long>>& power(unsigned k) const { return pow_[k]; }

 private:
  explicit CycloField(unsigned N);
  unsigned N_, deg_;
  std::vector<long long> phi_;
  std::vector<std::vector<std::pair<unsigned, long long>>> pow_;
};

class Cyclo {
 public:
  Cyclo() = default;
  explicit Cyclo(CycloFieldPtr K, long long c = 0);
  static Cyclo root(CycloFieldPtr K, long long k);  // zeta_N^k
  // sum_k counts[k] zeta_N^k with counts indexed by exponent mod N
  static Cyclo from_exponent_counts(CycloFieldPtr K, const std::vector<long long>& counts);

  const CycloFieldPtr& field() const { return K_; }
  const std::vector<long long>& coeffs() const { return c_; }

  Cyclo operator+(const Cyclo& o) const;
  Cyclo operator-(const Cyclo& o) const;
  Cyclo operator-() const;
  Cyclo operator*(const Cyclo& o) const;
  Cyclo operator*(long long s) const;
  Cyclo& operator+=(const Cyclo& o);
  bool operator==(const Cyclo& o) const { return c_ == o.c_; }
  // Divides every coefficient; throws NonIntegral when inexact.
  Cyclo div_exact(long long d) const;

  Cyclo conj() const;
  // zeta -> zeta^k, gcd(k, N) = 1
  Cyclo galois(long long k) const;
  // Same value in Q(zeta_M), N | M.
  Cyclo lift(const CycloFieldPtr& M) const;

  bool is_zero() const;
  bool is_integer() const;
  long long to_integer() const;  // throws NonIntegral
  std::complex<double> to_complex() const;
  // Sorted "c*z^k" terms joined by " + ", "0" for zero.
  std::string str() const;
  static Cyclo parse(CycloFieldPtr K, const std::string& s);

 private:
  CycloFieldPtr K_;
  std::vector<long long> c_;
};

}  // namespace edl
