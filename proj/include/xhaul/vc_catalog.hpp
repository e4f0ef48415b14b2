#pragma once

#include <array>
#include <string>
#include <vector>

namespace xhaul {

// Protocol chain, radio end first.  Splits cut between consecutive entries.
enum class RanFunction { RF, LPHY, HPHY, MAC, RLC, PDCP, RRC };
inline constexpr std::array<RanFunction, 7> kChain = {
    RanFunction::RF,  RanFunction::LPHY, RanFunction::HPHY, RanFunction::MAC,
    RanFunction::RLC, RanFunction::PDCP, RanFunction::RRC};

// FS2: RLC|PDCP boundary.  FS6: HPHY|MAC.  FS72x: LPHY|HPHY (intra-PHY).
enum class FunctionalSplit { FS2, FS6, FS72x };

enum class Unit { CU, DU, RU };
enum class Segment { MH, FH };  // midhaul CU->DU, fronthaul DU->RU

enum class VcId { VC1, VC2, VC3, VC4, VC5 };
inline constexpr std::array<VcId, 5> kAllVcs = {VcId::VC1, VcId::VC2, VcId::VC3, VcId::VC4,
                                                VcId::VC5};

// Dual-split: CU, DU, RU on three distinct nodes (MH and FH both on the wire).
// DU-with-RU: DU shares the cell site with the RU (MH only).
// CU+DU colocated: both upper units on one core-adjacent node (FH only).
enum class VcClass { DualSplit, DuWithRu, DuWithCu };

struct VirtualConfig {
  VcId id;
  const char* name;
  VcClass colocation;
  FunctionalSplit high_split;  // CU|DU boundary, sets the MH rate
  FunctionalSplit low_split;   // DU|RU boundary, sets the FH rate
  bool mh_on_wire;             // false when CU and DU are colocated
  bool fh_on_wire;             // false when DU and RU are colocated
};

// The five supported configurations, in catalog order.
const std::array<VirtualConfig, 5>& vc_catalog();
const VirtualConfig& vc(VcId id);
const char* to_string(VcId id);
const char* to_string(Unit u);
const char* to_string(Segment s);

// Chain prefix strictly below the split (radio side) / suffix at-or-above it.
std::vector<RanFunction> functions_below(FunctionalSplit s);
std::vector<RanFunction> functions_above(FunctionalSplit s);

// Functions hosted by `u` under configuration `id`.  The three unit sets
// partition the chain for every configuration.  For colocated units the
// boundary is node-internal and produces no transport flow.
std::vector<RanFunction> functions_of(VcId id, Unit u);

}  // namespace xhaul
