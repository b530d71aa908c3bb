#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "edl/bigfield.hpp"
#include "edl/subgroup.hpp"

namespace edl {

// g^-1 endo(g)
Mat lang(const Group& G, const Mat& g, const RingEndo& endo);
SubgroupPtr fixed_group(const std::vector<RingEndo>& endos);

// x -> g endo^m(x)
struct TwistedFrobenius {
  Mat g;
  RingEndo endo{1, 0};
  int m = 1;
};

// F_{q^{m t}}[z]/z^r over a BigField, holding the coefficient ring of `base` as a subring.
using ExtElem = std::vector<BigElem>;

class ExtRing {
 public:
  ExtRing(RingPtr base, unsigned t);

  const Ring& base() const { return *base_; }
  const BigField& field() const { return *big_; }
  unsigned t() const { return t_; }
  int r() const { return base_->r(); }

  ExtElem zero() const;
  ExtElem one() const;
  ExtElem up(const RingElem& a) const;
  RingElem down(const ExtElem& a) const;  // throws CheckFailed
  bool descends(const ExtElem& a) const;
  ExtElem add(const ExtElem& a, const ExtElem& b) const;
  ExtElem sub(const ExtElem& a, const ExtElem& b) const;
  ExtElem mul(const ExtElem& a, const ExtElem& b) const;
  ExtElem inv(const ExtElem& a) const;
  bool is_zero(const ExtElem& a) const;
  bool is_unit(const ExtElem& a) const { return !field().is_zero(a[0]); }
  // q-power Frobenius applied k times, and sigma^k
  ExtElem phi(const ExtElem& a, std::int64_t k) const;
  ExtElem sigma(const ExtElem& a, std::int64_t k) const;
  ExtElem apply(const RingEndo& en, const ExtElem& a) const { return sigma(phi(a, en.phi), en.sigma); }
  // Coefficients below z^min_val are zero.
  ExtElem random(std::mt19937_64& rng, int min_val = 0) const;

 private:
  RingPtr base_;
  unsigned t_;
  BigFieldPtr big_;
  std::unique_ptr<SubfieldEmbedding> emb_;
  BigElem zeta_;
};

struct ExtMat {
  int n = 2;
  std::vector<ExtElem> e;  // row-major n x n
  ExtElem& at(int i, int j) { return e[static_cast<std::size_t>(i * n + j)]; }
  const ExtElem& at(int i, int j) const { return e[static_cast<std::size_t>(i * n + j)]; }
};

class ExtGroup {
 public:
  ExtGroup(const Group& G, std::shared_ptr<const ExtRing> R) : G_(G), R_(std::move(R)) {}
  const ExtRing& ring() const { return *R_; }
  const Group& base() const { return G_; }
  ExtMat identity() const;
  ExtMat up(const Mat& a) const;
  Mat down(const ExtMat& a) const;
  ExtMat mul(const ExtMat& a, const ExtMat& b) const;
  ExtMat inv(const ExtMat& a) const;
  ExtElem det(const ExtMat& a) const;
  ExtMat apply(const RingEndo& en, const ExtMat& a) const;
  bool equal(const ExtMat& a, const ExtMat& b) const;

 private:
  Group G_;
  std::shared_ptr<const ExtRing> R_;
};

// Lambda with Lambda endo^m(Lambda)^-1 = g. The coefficient level is m * ord(g), the least level
// admitting a solution.
struct LangSection {
  TwistedFrobenius tw;
  std::shared_ptr<const ExtRing> ring;
  std::shared_ptr<const ExtGroup> group;
  ExtMat lambda, lambda_inv;
  bool trivial = false;  // g = 1, Lambda = 1
  unsigned level() const { return static_cast<unsigned>(tw.m) * (trivial ? 1u : ring->t()); }
};

struct LangSectionOptions {
  // Lambda restricted to matrices upper triangular mod z (g must be too).
  bool residue_borel = false;
  // Upper bound on m * ord(g); the default is order-driven.
  unsigned level_cap = 0;
  std::uint64_t seed = 0x5eed;
};

// G is the group at coefficient level m (field F_{q^m}); tw.g must lie in G and be phi^m-fixed.
LangSection lang_section(const Group& G, const TwistedFrobenius& tw, const LangSectionOptions& opt = {});
// eps = Lambda^-1 endo(Lambda), as an element of G. Requires endo(g) = g.
Mat lang_twist(const LangSection& s, const RingEndo& endo);

// Enumerate {x : g endo^m(x) = x} through x = Lambda w with w in G^{endo^m} = G (level m).
// visit receives w; x itself is available as Lambda * w in the extension ring.
void twisted_fixed_enumerate(const Group& G, const LangSection& s, const std::function<void(const Mat&)>& visit);

// Restricted sections: lambda with lambda^-1 endo^m(lambda) = target in a subgroup, searched over coefficient
// levels m' = m, 2m, ... up to cap. Returns the level multiplier k (field F_{q^{m k}}) and lambda over it.
enum class LangShape { Torus, LowerUnipotent1 };
struct RestrictedSection {
  unsigned k = 1;
  std::optional<Group> group;  // level m k
  Mat lambda;
};
std::optional<RestrictedSection> restricted_lang_section(const Group& G, const Mat& target, LangShape shape, int m,
                                                         unsigned cap = 4);

// Embedding of matrices between the same group type over nested coefficient fields.
Mat embed(const Group& from, const Group& to, const Mat& a);
// The same group over F_{q^m}, where the base group has coefficient field F_q.
Group at_coefficient_level(const Group& G, unsigned m);

}  // namespace edl
