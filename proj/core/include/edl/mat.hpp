#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "edl/ring.hpp"

namespace edl {

constexpr int kMaxN = 3;

// n x n matrix over a Ring; entries live at stride kMaxN.
struct Mat {
  int n = 2;
  std::array<RingElem, kMaxN * kMaxN> e{};
  RingElem& at(int i, int j) { return e[i * kMaxN + j]; }
  const RingElem& at(int i, int j) const { return e[i * kMaxN + j]; }
  bool operator==(const Mat&) const = default;
};

using MatKey = unsigned __int128;

struct MatKeyHash {
  std::size_t operator()(MatKey k) const noexcept {
    std::uint64_t lo = static_cast<std::uint64_t>(k), hi = static_cast<std::uint64_t>(k >> 64);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ull ^ (hi + 0x632BE59BD9B4E019ull + (lo << 6) + (lo >> 2));
    h ^= h >> 31;
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ull);
  }
};

enum class GroupKind { GL, SL };

const char* group_name(GroupKind k);
GroupKind parse_group(const std::string& s);

// Allowed coefficient values per matrix entry, used to enumerate structured subsets.
struct Domain {
  // lists[k] is a sorted list of allowed field values; member[k] its indicator over [0, Q).
  std::vector<std::vector<Elem>> lists;
  std::vector<std::vector<bool>> member;
  // which[entry][coeff] indexes lists
  std::array<std::array<int, kMaxR>, kMaxN * kMaxN> which{};
  bool allows(int entry, int coeff, Elem v) const { return member[which[entry][coeff]][v]; }
};

// GL_n or SL_n over a truncated ring.
class Group {
 public:
  Group(GroupKind kind, RingPtr ring, int n = 2);

  GroupKind kind() const { return kind_; }
  int n() const { return n_; }
  const Ring& ring() const { return *ring_; }
  const RingPtr& ring_ptr() const { return ring_; }
  const Field& field() const { return ring_->field(); }
  int r() const { return ring_->r(); }
  Group at_level(int k) const { return Group(kind_, ring_->level_ptr(k), n_); }
  Group over(RingPtr ring) const { return Group(kind_, std::move(ring), n_); }
  std::string name() const;

  Mat identity() const;
  Mat zero() const;
  Mat scalar(const RingElem& a) const;
  Mat diag(const std::vector<RingElem>& d) const;
  Mat from_rows(const std::vector<std::vector<RingElem>>& rows) const;
  // 1 + x E_{ij}
  Mat elementary(int i, int j, const RingElem& x) const;
  // [[0,1],[-1,0]] generalised to the long Weyl element with signs making det 1.
  Mat weyl() const;

  Mat add(const Mat& a, const Mat& b) const;
  Mat sub(const Mat& a, const Mat& b) const;
  Mat mul(const Mat& a, const Mat& b) const;
  Mat mul_scalar(const Mat& a, const RingElem& x) const;
  Mat inv(const Mat& a) const;  // throws NonUnit
  Mat conj(const Mat& g, const Mat& h) const { return mul(mul(g, h), inv(g)); }  // g h g^-1
  Mat commutator(const Mat& a, const Mat& b) const;
  Mat pow(const Mat& a, std::int64_t e) const;
  RingElem det(const Mat& a) const;
  RingElem trace(const Mat& a) const;
  Mat apply(const RingEndo& g, const Mat& a) const;
  Mat reduce(const Mat& a, int k) const;  // entrywise truncation, as a matrix of the same shape
  bool is_identity(const Mat& a) const;
  bool contains(const Mat& a) const;
  std::uint64_t element_order(const Mat& a) const;

  // Exact group order from the smooth-lift formula.
  std::uint64_t order() const;

  // Mixed-radix packing of all entries; throws BudgetExceeded if it does not fit.
  MatKey key(const Mat& a) const;
  Mat from_key(MatKey k) const;
  bool key_fits() const { return key_fits_; }

  std::string str(const Mat& a) const;  // [["..",".."],["..",".."]]
  Mat parse(const std::string& s) const;
  std::vector<std::vector<std::string>> to_strings(const Mat& a) const;
  Mat from_strings(const std::vector<std::vector<std::string>>& rows) const;

  Domain full_domain() const;

  // Level-by-level enumeration of group elements whose coefficients lie in `dom`.
  // prune(k, g) sees g modulo z^k (k = 1..r) and may reject; visit sees full elements.
  using LevelPred = std::function<bool(int, const Mat&)>;
  using Visit = std::function<void(const Mat&)>;
  std::vector<Mat> residues(const Domain& dom, const LevelPred& prune = {}) const;
  void lift(const Mat& residue, const Domain& dom, const LevelPred& prune, const Visit& visit) const;
  void enumerate(const Domain& dom, const LevelPred& prune, const Visit& visit) const;
  void enumerate(const Visit& visit) const { enumerate(full_domain(), {}, visit); }
  std::vector<Mat> elements() const;
  // Parallel count of elements passing prune and the final predicate.
  std::uint64_t count(const Domain& dom, const LevelPred& prune, const std::function<bool(const Mat&)>& keep,
                      int threads = 1) const;

  // Elementary matrices (and diagonal units for GL) generating the group.
  std::vector<Mat> generators() const;

 private:
  bool lift_level(Mat& g, int k, const Domain& dom, const LevelPred& prune, const Visit& visit) const;
  int pivot_row(const Mat& g) const;

  GroupKind kind_;
  RingPtr ring_;
  int n_;
  bool key_fits_ = false;
};

// Run fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace edl
