#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <unordered_set>
#include <vector>

#include "edl/mat.hpp"

namespace edl {

// Standard shapes. Z is scalars, ZU upper triangular with equal diagonal.
enum class Shape { Whole, T, B, U, Uminus, Z, ZU };

const char* shape_name(Shape s);

class Subgroup;
using SubgroupPtr = std::shared_ptr<const Subgroup>;

constexpr std::uint64_t kDefaultBudget = 50'000'000;

// Exact description of a subgroup of a Group; the Group is passed at use sites so
// one descriptor serves every coefficient level.
class Subgroup {
 public:
  enum class Kind { Pattern, Conjugate, Intersection, Explicit, Twisted };

  // Entries congruent to the identity mod z^depth, shape constraints imposed only
  // below z^level (level < 0 means all of them), entries fixed by every endo.
  static SubgroupPtr pattern(Shape s, int depth = 0, int level = -1, std::vector<RingEndo> endos = {});
  static SubgroupPtr whole() { return pattern(Shape::Whole); }
  static SubgroupPtr kernel(int i) { return pattern(Shape::Whole, i); }
  // Preimage of `s` under reduction mod z^level, e.g. B G^1 = preimage(B, 1).
  static SubgroupPtr preimage(Shape s, int level) { return pattern(s, 0, level); }
  static SubgroupPtr fixed(const SubgroupPtr& base, std::vector<RingEndo> endos);
  // lambda * base * lambda^-1
  static SubgroupPtr conjugate(const SubgroupPtr& base, const Mat& lambda);
  static SubgroupPtr intersection(std::vector<SubgroupPtr> parts);
  static SubgroupPtr explicit_set(const Group& G, std::vector<Mat> elems, std::string label = "explicit");
  // {b in base : eps^-1 b^-1 eps endo(b) in target}
  static SubgroupPtr twisted(const SubgroupPtr& base, RingEndo endo, const Mat& eps, const SubgroupPtr& target);

  Kind kind() const { return kind_; }
  Shape shape() const { return shape_; }
  int depth() const { return depth_; }
  int level() const { return level_; }
  const std::vector<RingEndo>& endos() const { return endos_; }
  const std::vector<SubgroupPtr>& parts() const { return parts_; }
  const SubgroupPtr& base() const { return base_; }
  const Mat& lambda() const { return lambda_; }
  // Twisted kind: eps, endo and target.
  const Mat& eps() const { return eps_; }
  const RingEndo& endo() const { return endo_; }
  const SubgroupPtr& target() const { return target_; }
  const std::vector<Mat>& explicit_elements() const { return elems_; }
  std::string describe() const;

  bool contains(const Group& G, const Mat& g) const;
  // Necessary condition seen modulo z^k; exact for Pattern.
  bool contains_mod(const Group& G, const Mat& g, int k) const;

  void enumerate(const Group& G, const Group::Visit& visit, std::uint64_t budget = kDefaultBudget) const;
  std::vector<Mat> elements(const Group& G, std::uint64_t budget = kDefaultBudget) const;
  std::uint64_t order(const Group& G, std::uint64_t budget = kDefaultBudget) const;
  // Small generating set extracted from the element list.
  std::vector<Mat> generators(const Group& G, std::uint64_t budget = kDefaultBudget) const;
  // Coefficient domain covering the subgroup (exact for Pattern).
  Domain domain(const Group& G) const;

  // Connectedness as an algebraic group, decided for patterns without endomorphism
  // constraints, conjugates of them and the trivial group; false otherwise.
  bool is_connected(const Group& G) const;

 private:
  Subgroup() = default;
  bool pattern_ok(const Group& G, const Mat& g, int k) const;
  int bound(const Group& G, int i, int j) const;

  Kind kind_ = Kind::Pattern;
  Shape shape_ = Shape::Whole;
  int depth_ = 0;
  int level_ = -1;
  std::vector<RingEndo> endos_;
  SubgroupPtr base_, target_;
  Mat lambda_, eps_;
  RingEndo endo_;
  std::vector<SubgroupPtr> parts_;
  std::vector<Mat> elems_;
  std::unordered_set<MatKey, MatKeyHash> keys_;
  std::string label_;
};

// Generating set of the group spanned by `elems` (a subgroup given as a full list).
std::vector<Mat> extract_generators(const Group& G, const std::vector<Mat>& elems);
// Closure of a generating set; throws BudgetExceeded beyond `budget` elements.
std::vector<Mat> closure(const Group& G, const std::vector<Mat>& gens, std::uint64_t budget = kDefaultBudget);

}  // namespace edl
