#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "edl/subgroup.hpp"

namespace edl {

struct CharpolyData {
  RingElem trace, det, disc;
};

// n = 2 only for disc.
CharpolyData charpoly_data(const Group& G, const Mat& g);
// disc != 0 in the ring.
bool is_separable(const Group& G, const Mat& g);

// {h in G : hg = gh}; g may be any matrix over the ring.
SubgroupPtr centralizer(const Group& G, const Mat& g, std::uint64_t budget = kDefaultBudget);
// {a_0 + a_1 g + ... + a_{n-1} g^{n-1}} intersected with G.
SubgroupPtr poly_span_centralizer(const Group& G, const Mat& g);
bool is_regular(const Group& G, const Mat& g, std::uint64_t budget = kDefaultBudget);

// lambda in SL_n with lambda^-1 x lambda upper triangular. Roots of the characteristic
// polynomial are found by exhaustive search over the ring. Throws NonSplit.
Mat triangularize(const Group& G, const Mat& x);
// Exhaustive search for lambda in G with lambda^-1 x lambda upper triangular.
std::optional<Mat> find_triangularizer(const Group& G, const Mat& x);
bool is_upper_triangular(const Group& G, const Mat& x);

struct NormalizerReport {
  std::uint64_t normalizer_size = 0, borel_size = 0;
  bool self_normalizing = false;
};
// {g : g B g^-1 contained in B} by exhaustion.
NormalizerReport normalizer_check_B(const Group& G, int threads = 1);

struct DoubleCoset {
  Mat rep;
  std::uint64_t size = 0;
};

struct DoubleCosetTable {
  std::vector<DoubleCoset> cosets;
  std::unordered_map<MatKey, std::uint32_t, MatKeyHash> index;  // element key -> coset
  std::size_t which(const Group& G, const Mat& g) const { return index.at(G.key(g)); }
};

// Partition of G into H\G/K. Representatives are the first elements in enumeration order.
DoubleCosetTable double_cosets(const Group& G, const SubgroupPtr& H, const SubgroupPtr& K,
                               std::uint64_t budget = kDefaultBudget);

// Element x of G with x H1 x^-1 = H2, if any.
std::optional<Mat> conjugating_element(const Group& G, const SubgroupPtr& H1, const SubgroupPtr& H2);

struct QuasiCartan {
  Mat generator;  // regular separable matrix whose centralizer this is
  SubgroupPtr group;
  std::uint64_t order = 0;
  // split, unramified, ramified (disc/z a residue square) or ramified-nonsquare
  std::string label;
};
// Conjugacy-class representatives of centralizers of regular separable matrices (n = 2, p odd).
std::vector<QuasiCartan> quasi_cartan_classes(const Group& G, std::uint64_t budget = kDefaultBudget);
// The four standard generators: diag(1,-1), [[0,1],[zeta,0]], [[0,1],[w,0]], [[0,1],[zeta w,0]]
// with zeta the base non-square and w = z^e.
std::vector<Mat> standard_quasi_cartan_generators(const Group& G);

}  // namespace edl
