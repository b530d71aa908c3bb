#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "edl/galois.hpp"
#include "edl/matgrp.hpp"

namespace edl {

// g^-1 endo(g) lies in left * target, or with double_coset set in the geometric double coset
// target * left * target (target must be B and n = 2).
struct LangCondition {
  RingEndo endo{1, 0};
  Mat left;
  SubgroupPtr target;
  bool double_coset = false;
};

// Conjunction of Lang conditions on points of the ambient group, optionally restricted to a
// phi-stable subgroup and divided by a subgroup acting on the right. The ambient group is taken
// at coefficient level 1; counts at level m use F_{q^m}.
struct VarietyDescriptor {
  explicit VarietyDescriptor(Group G) : ambient(std::move(G)) {}

  Group ambient;
  std::vector<LangCondition> conditions;
  SubgroupPtr support;   // Whole or preimage(B, 1)
  SubgroupPtr quotient;  // nullptr: no quotient
  // Reason the quotient is connected when Subgroup::is_connected cannot decide it.
  std::string connected_because;
  std::vector<RingEndo> sigma{{1, 0}};  // the acting finite group is G^sigma
  std::string label;

  std::string canonical() const;
  std::string hash() const;  // 16 hex digits of FNV-1a over canonical()
};

// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(const std::string& s);

// A matrix over a larger coefficient field, rewritten over `to`; CheckFailed when it is not rational.
Mat descend(const Group& from, const Group& to, const Mat& a);

std::string subgroup_canonical(const Group& G, const SubgroupPtr& H);

// The same descriptor with its matrices moved to another coefficient level. Explicit sets are
// tied to one group and are only accepted when trivial.
SubgroupPtr lift_subgroup(const SubgroupPtr& H, const Group& from, const Group& to);

// Geometric Bruhat cell for n = 2: y in B x B over the algebraic closure iff val(y_10) = val(x_10).
// Needs GL, or SL with p odd. `level` < r tests modulo z^level.
bool in_bruhat_cell(const Group& G, const Mat& y, const Mat& x, int level = -1);

// Canonical representative of g H. Structured for n = 2 patterns U^d, B and Whole; otherwise the
// smallest key over the orbit g H, which needs |H| <= budget.
class CosetCanonicalizer {
 public:
  CosetCanonicalizer(const Group& G, SubgroupPtr H, std::uint64_t budget = 200'000);
  Mat operator()(const Mat& g) const;
  MatKey key(const Mat& g) const { return G_.key((*this)(g)); }
  std::uint64_t subgroup_order() const;
  bool structured() const { return mode_ != Mode::Orbit; }

 private:
  enum class Mode { Trivial, Whole, U, B, Orbit };
  Group G_;
  SubgroupPtr H_;
  Mode mode_ = Mode::Orbit;
  int depth_ = 0;
  std::vector<Mat> elems_;
  mutable std::uint64_t order_ = 0;
};

Mat coset_canonical_form(const Group& G, const Mat& g, const SubgroupPtr& H, std::uint64_t budget = 200'000);

enum class ClassicalFlavor { X, LangPreimage, Quotiented };
const char* flavor_name(ClassicalFlavor f);
ClassicalFlavor parse_flavor(const std::string& s);

// U cap x U x^-1 as the pattern U^d (d = r is the trivial group), identified by comparing point
// sets at coefficient levels 1 and 2. Throws InvalidArgument when no U^d matches.
SubgroupPtr unipotent_intersection(const Group& G, const Mat& x);

// X: {g : g^-1 phi(g) in B x B}/B (n = 2); LangPreimage: L^-1(xU); Quotiented: L^-1(xU)/(U cap xUx^-1).
VarietyDescriptor build_classical(const Group& G, const Mat& x, ClassicalFlavor flavor);

struct EDLData {
  Group group;         // base level
  Group lambda_group;  // where lambda lives
  Mat lambda;
  std::vector<RingEndo> sigma;
  std::vector<Mat> eps;  // lambda^-1 s(lambda) for s in sigma, over the base ring
  Mat eps_phi;           // eps for phi
  SubgroupPtr B_lambda, S_lambda, S0;
  std::string s0_rule;
  VarietyDescriptor X, Xt;
};

// Throws UnsupportedConnectedComponent unless S(lambda)^0 is covered by a certified rule: the
// unramified case (e = 1, sigma = {phi}, eps monomial) with S^0 = U cap eps U eps^-1, and the
// ramified case e = 2, r = 3, sigma = {phi, sigma}, phi(lambda) = lambda lower unipotent with
// val(lambda_10) = 1, where S^0 = U^1.
EDLData build_edl(const Group& G, const Group& lambda_group, const Mat& lambda, std::vector<RingEndo> sigma);

// {eps^-1 b eps phi(b)^-1 : b in B(lambda)} at coefficient level m.
std::vector<Mat> a_set(const EDLData& d, unsigned m);

// lambda over coefficient level ord(g) with lambda^-1 phi(lambda) = g (g phi-fixed), built with
// the field tables of that level.
struct SmallLangPreimage {
  Group group;
  Mat lambda;
};
SmallLangPreimage small_lang_preimage(const Group& G, const Mat& g, std::uint64_t seed = 0x1a5);

// Lang sections shared between counts; safe to use from several threads.
class LangCache {
 public:
  std::shared_ptr<const LangSection> get(const Group& Gm, const Mat& g, unsigned m, bool residue_borel);

 private:
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<const LangSection>> map_;
};

struct CountOptions {
  int threads = 1;
  std::uint64_t budget = 1'000'000'000;  // cap on |G| at the counting level
  LangCache* cache = nullptr;
};

// Number of points (quotient cosets when a quotient is present) fixed by x -> g phi^m(x), for g in
// G^sigma. Fixed points are x = Lambda w with w over F_{q^m}, so each condition reads
// w^-1 eps w' with eps = Lambda^-1 endo(Lambda); cosets are deduplicated by canonical forms of w.
std::uint64_t twisted_count(const VarietyDescriptor& V, const Mat& g, unsigned m, const CountOptions& opt = {});

struct EquivRow {
  std::size_t twist = 0;
  unsigned m = 1;
  std::uint64_t left = 0, right = 0;
  bool agree = false;
};
struct EquivReport {
  int d = 0;
  std::vector<EquivRow> rows;
  bool consistent = true;
};
// Counts of V1 and V2 at every (g, m); agreement means left = right * q^{m d}.
EquivReport equiv_test(const VarietyDescriptor& V1, const VarietyDescriptor& V2, const std::vector<Mat>& class_reps,
                       const std::vector<unsigned>& ms, int d, const CountOptions& opt = {});

}  // namespace edl
