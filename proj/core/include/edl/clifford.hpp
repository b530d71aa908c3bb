#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edl/classfn.hpp"
#include "edl/orbits.hpp"

namespace edl {

// psi(sum a_i z^i) = exp(2 pi i Tr_{F_q/F_p}(a_{r-1}) / p): conductor z^r.
unsigned additive_exponent(const Ring& R, const RingElem& a);

// psi_beta(x) = psi(Tr(beta (x - 1))) on K_i, beta taken over the ring of length r - i.
struct KernelCharacter {
  Group G;       // ambient group, ring of length r
  LieElem beta;  // over the ring of length r - i
  int level = 1;
  unsigned p = 2;
  // exponent e with psi_beta(x) = zeta_p^e; x must lie in K_i
  unsigned exponent(const Mat& x) const;
};

KernelCharacter psi_beta(const Group& G, const LieElem& beta, int i);
// {g : psi_beta(g x g^-1) = psi_beta(x) for x in K_i}
std::vector<Mat> stabilizer_of_character(const KernelCharacter& psi);
// Derived subgroup of an explicitly listed group.
std::vector<Mat> derived_subgroup(const ClassTable& S);

// One-dimensional character of an explicit group, value zeta_N^exponent[element index].
struct LinearCharacter {
  ClassTablePtr table;
  std::vector<std::uint32_t> exponent;
  std::uint32_t at(const Mat& g) const { return exponent[*table->element_index(g)]; }
  ClassFunction as_class_function() const;
};

// Every linear character of S restricting to psi on S cap K_i; NotExtendable when psi is
// non-trivial on [S,S] cap K_i.
std::vector<LinearCharacter> extensions_over(const KernelCharacter& psi, const ClassTablePtr& S);

struct PrimitiveFamily {
  Orbit orbit;
  KernelCharacter psi;
  ClassTablePtr stabilizer;
  std::vector<LinearCharacter> extensions;
  std::vector<ClassFunction> irreps;  // Ind_S^G of each extension
};

struct Census {
  ClassTablePtr table;
  std::vector<ClassFunction> inflated;  // irreducibles of G at level r - 1
  std::vector<PrimitiveFamily> families;
  std::vector<ClassFunction> all() const;
  std::size_t count(OrbitKind k) const;
};

// The family of irreducibles over psi_beta (r = 2, i = 1); beta over the residue ring.
PrimitiveFamily build_family(const Group& G, const ClassTablePtr& table, const LieElem& beta);
// r = 2, n = 2: inflated level-1 table plus one family per non-zero orbit.
Census build_census(const Group& G, int threads = 1);
std::vector<ClassFunction> build_primitive_irreps(const Group& G, const ClassTablePtr& table);

struct MackeyResult {
  Rational direct, mackey;   // <Ind_S rho, Ind_U 1> both ways
  Rational restricted_to_u;  // <rho|_U, 1>
  Rational weyl_term;        // the double coset of w
  std::size_t double_cosets = 0;
  bool contained = false;  // Ind_S rho is a constituent of Ind_U 1
};
MackeyResult mackey_nilpotent_test(const ClassTablePtr& G, const LinearCharacter& rho);

}  // namespace edl
