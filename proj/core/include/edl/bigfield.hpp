#pragma once

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <vector>

#include "edl/field.hpp"

namespace edl {

// Polynomial-basis element of F_{p^D}; coefficient i of x^i.
using BigElem = std::vector<std::uint8_t>;

struct BigElemHash {
  std::size_t operator()(const BigElem& a) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto c : a) h = (h ^ c) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

class BigField;
using BigFieldPtr = std::shared_ptr<const BigField>;

// F_{p^D} without log tables, for degrees too large for Field. p^D must fit in 63 bits.
class BigField {
 public:
  static BigFieldPtr make(unsigned p, unsigned D);

  unsigned p() const { return p_; }
  unsigned degree() const { return D_; }
  std::uint64_t order() const { return order_; }
  const std::vector<std::uint8_t>& poly() const { return poly_; }

  BigElem zero() const { return BigElem(D_, 0); }
  BigElem one() const;
  BigElem from_int(long long k) const;
  BigElem gen() const;  // the class of x
  bool is_zero(const BigElem& a) const;
  BigElem add(const BigElem& a, const BigElem& b) const;
  BigElem sub(const BigElem& a, const BigElem& b) const;
  BigElem neg(const BigElem& a) const;
  BigElem mul(const BigElem& a, const BigElem& b) const;
  BigElem pow(const BigElem& a, std::uint64_t e) const;
  BigElem inv(const BigElem& a) const;
  // a^(p^k)
  BigElem frob_p(const BigElem& a, std::uint64_t k) const;

 private:
  BigField(unsigned p, unsigned D, std::vector<std::uint8_t> poly);

  unsigned p_, D_;
  std::uint64_t order_;
  std::vector<std::uint8_t> poly_;            // monic, coefficients c_0..c_{D-1}
  std::vector<std::vector<std::uint8_t>> fr_;  // fr_[i] = x^(i p)
};

// Field with log tables embedded as the degree-n subfield of a BigField.
class SubfieldEmbedding {
 public:
  SubfieldEmbedding(FieldPtr small, BigFieldPtr big);
  BigElem up(Elem a) const;
  // Throws CheckFailed when b lies outside the image.
  Elem down(const BigElem& b) const;
  bool contains(const BigElem& b) const { return b == zero_ || back_.count(b) > 0; }
  const Field& small() const { return *small_; }
  const BigField& big() const { return *big_; }

 private:
  FieldPtr small_;
  BigFieldPtr big_;
  BigElem zero_;
  std::vector<BigElem> img_;  // img_[k] = image of alpha^k
  std::unordered_map<BigElem, Elem, BigElemHash> back_;
};

}  // namespace edl
