#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edl/varieties.hpp"

namespace edl {

struct Check {
  std::string name;
  bool ok = false;
  std::string detail;
  bool required = true;  // informational checks do not affect the verdict
};

struct ClaimReport {
  std::string claim;
  std::vector<Check> checks;
  bool ok() const;
  void add(std::string name, bool ok, std::string detail = {}, bool required = true);
};

struct VerifyOptions {
  CountOptions count;
  std::vector<unsigned> ms{1, 2};
  // Extra levels where the comparison bijection commutes with phi^m; reported, not required.
  std::vector<unsigned> adapted_ms;
  int samples = 20;
  std::uint64_t seed = 7;
};

// L^-1(yU) at r = 2 against Ind_U^G 1 times q^{2m} for every y in (U^-)^1 - {1} and class rep.
ClaimReport verify_thm34(std::uint64_t q, const VerifyOptions& opt);
// L^-1(xU) against L^-1(yU) with y the predicted representative, sampled per double coset.
ClaimReport verify_prop35(std::uint64_t q, const VerifyOptions& opt);
// f + {g in BG^1 : L(g) in B}/B = BG^1/B, the affine count, and the induced virtual character.
ClaimReport verify_prop36(std::uint64_t q, const VerifyOptions& opt);
// The chain of maps in the ramified e = 2, r = 3 case at coefficient level m.
ClaimReport verify_thm41(std::uint64_t q, GroupKind kind, unsigned m, const VerifyOptions& opt);
// build_edl with e = 1 against build_classical for w-hat in {1, w, -1, -w}.
ClaimReport verify_unramified(std::uint64_t q, int r, const VerifyOptions& opt);

// |SL_2(F_q[z]/z^2)| by enumeration against the smooth-lift formula.
ClaimReport verify_group_orders(std::uint64_t q);
// Nilpotent family sizes and dimensions, orthogonality and sum of squares of the full table.
ClaimReport verify_census(std::uint64_t q, int threads = 1);
// [G:S] for the nilpotent stabiliser, [S,S] against B^1 and the number of extensions.
ClaimReport verify_stabilizer(std::uint64_t q);
// Mackey sum against the direct inner product for every extension over a nilpotent psi_beta.
ClaimReport verify_mackey(std::uint64_t q);
// B\G/B for SL_2(F_{q^m}[z]/z^2) at the levels in opt.ms.
ClaimReport verify_double_cosets(std::uint64_t q, const VerifyOptions& opt);
// Fixed subring sizes and the sigma - 1 solver, exhaustively.
ClaimReport verify_galois_layer();
// Random split elements triangularised by lambda in SL_n, n = 2, 3.
ClaimReport verify_triangularize(std::uint64_t q, int instances, std::uint64_t seed);
// N_G(B) = B for SL_2 and GL_2 over F_q[z]/z^2, exhausted over F_{q^m}-points for m in opt.ms.
ClaimReport verify_borel_normalizer(std::uint64_t q, const VerifyOptions& opt);
// Conjugacy classes of quasi-Cartan subgroups of SL_2(F_q[z]/z^2) and where they triangularise.
ClaimReport verify_quasi_cartan(std::uint64_t q);

}  // namespace edl
