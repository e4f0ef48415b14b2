#include "xhaul/vc_catalog.hpp"

#include <stdexcept>

namespace xhaul {

namespace {

// Index of the first chain function at or above the split.
int split_boundary(FunctionalSplit s) {
  switch (s) {
    case FunctionalSplit::FS72x: return 2;  // RF, LPHY below
    case FunctionalSplit::FS6: return 3;    // RF, LPHY, HPHY below
    case FunctionalSplit::FS2: return 5;    // everything up to RLC below
  }
  throw std::logic_error("bad split");
}

// VC3's DU sits on the cell site, so its low split never reaches a wire; the
// O-RAN low-PHY cut is used for the unit partition.  VC4/VC5 likewise keep the
// FS2 CU|DU boundary node-internal.
const std::array<VirtualConfig, 5> kCatalog = {{
    {VcId::VC1, "VC1", VcClass::DualSplit, FunctionalSplit::FS2, FunctionalSplit::FS72x, true,
     true},
    {VcId::VC2, "VC2", VcClass::DualSplit, FunctionalSplit::FS2, FunctionalSplit::FS6, true, true},
    {VcId::VC3, "VC3", VcClass::DuWithRu, FunctionalSplit::FS2, FunctionalSplit::FS72x, true,
     false},
    {VcId::VC4, "VC4", VcClass::DuWithCu, FunctionalSplit::FS2, FunctionalSplit::FS6, false,
     true},
    {VcId::VC5, "VC5", VcClass::DuWithCu, FunctionalSplit::FS2, FunctionalSplit::FS72x, false,
     true},
}};

}  // namespace

const std::array<VirtualConfig, 5>& vc_catalog() { return kCatalog; }

const VirtualConfig& vc(VcId id) { return kCatalog[static_cast<int>(id)]; }

const char* to_string(VcId id) { return vc(id).name; }

const char* to_string(Unit u) {
  switch (u) {
    case Unit::CU: return "CU";
    case Unit::DU: return "DU";
    case Unit::RU: return "RU";
  }
  return "?";
}

const char* to_string(Segment s) { return s == Segment::MH ? "MH" : "FH"; }

std::vector<RanFunction> functions_below(FunctionalSplit s) {
  int b = split_boundary(s);
  return {kChain.begin(), kChain.begin() + b};
}

std::vector<RanFunction> functions_above(FunctionalSplit s) {
  int b = split_boundary(s);
  return {kChain.begin() + b, kChain.end()};
}

std::vector<RanFunction> functions_of(VcId id, Unit u) {
  const VirtualConfig& c = vc(id);
  // A DU colocated with the RU absorbs the whole low stack: only RF stays on
  // the radio side, regardless of the catalog's nominal low split.
  int lo = c.colocation == VcClass::DuWithRu ? 1 : split_boundary(c.low_split);
  int hi = split_boundary(c.high_split);
  switch (u) {
    case Unit::RU: return {kChain.begin(), kChain.begin() + lo};
    case Unit::DU: return {kChain.begin() + lo, kChain.begin() + hi};
    case Unit::CU: return {kChain.begin() + hi, kChain.end()};
  }
  throw std::logic_error("bad unit");
}

}  // namespace xhaul
