#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edl/subgroup.hpp"

namespace edl {

// TraceZero: sl_2 (p odd). ModCenter: M_2 modulo scalars, stored with the (0,0) entry cleared.
enum class LieMode { TraceZero, ModCenter };
enum class OrbitKind { Split, Cuspidal, Nilpotent, Imprimitive };
const char* lie_mode_name(LieMode m);
const char* orbit_kind_name(OrbitKind k);
LieMode parse_lie_mode(const std::string& s);

struct LieElem {
  Mat x;
  LieMode mode = LieMode::TraceZero;
  bool operator==(const LieElem& o) const { return x == o.x && mode == o.mode; }
};

// Brings x into the normal form of `mode`; TraceZero rejects non-zero trace.
LieElem make_lie(const Group& G, const Mat& x, LieMode mode);
// g x g^-1, with g reduced to the ring of G first.
LieElem adjoint(const Group& G, const Mat& g, const LieElem& b);
// All elements of the Lie algebra (resp. its quotient) over G's ring, in key order.
std::vector<LieElem> lie_elements(const Group& G, LieMode mode);
// Decided by the reduction mod z.
OrbitKind orbit_kind(const Group& G, const LieElem& b);

struct Orbit {
  OrbitKind kind = OrbitKind::Imprimitive;
  LieElem rep;  // the member with the smallest packed key
  std::uint64_t size = 0;
};

Orbit orbit_of(const Group& G, const LieElem& b);
// Orbits of G on the elements outside z * (algebra); G acts through its own ring.
std::vector<Orbit> classify_orbits(const Group& G, LieMode mode, std::uint64_t budget = kDefaultBudget);

}  // namespace edl
