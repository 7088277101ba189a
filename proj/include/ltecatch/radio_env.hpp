/* SPDX-License-Identifier: Apache-2.0 */

// Cells, broadcast system information, jammers and idle-mode cell
// (re)selection with absolute frequency priorities.
//
// Received power at the UE is given per cell by the scenario; an active
// jammer subtracts its penalty from every cell on its channel.

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ltecatch/identity_codec.hpp"
#include "ltecatch/usim.hpp"

namespace ltecatch {

struct Earfcn {
  std::uint32_t channel = 0;
  auto operator<=>(const Earfcn&) const = default;
};

/// cellReselectionPriority per frequency, 0 (lowest) to 7 (highest).
using PriorityMap = std::map<Earfcn, int>;

inline constexpr int kMinPriority = 0;
inline constexpr int kMaxPriority = 7;
/// Rank of a frequency missing from the map: below every listed one.
inline constexpr int kUnlistedPriority = -1;

int priority_of(const PriorityMap& priorities, Earfcn earfcn);

struct CellConfig {
  std::uint32_t cell_id = 0;
  Plmn plmn;
  std::uint16_t tac = 0;
  Earfcn earfcn;
  double rx_power_dbm = 0.0;
  bool is_rogue = false;

  bool operator==(const CellConfig&) const = default;
};

struct SibPayload {
  Plmn plmn;
  std::uint16_t tac = 0;
  std::uint32_t cell_id = 0;
  PriorityMap priority_map;
  double q_rxlevmin_dbm = -110.0;

  bool operator==(const SibPayload&) const = default;
};

/// A cell on air: its configuration and what it broadcasts.
struct Cell {
  CellConfig config;
  SibPayload sib;
};

Cell make_cell(CellConfig config, PriorityMap priorities,
               double q_rxlevmin_dbm);

struct JammerConfig {
  std::string id;
  Earfcn earfcn;
  double jam_penalty_db = 60.0;
  bool active = false;
};

struct RadioParams {
  double q_rxlevmin_dbm = -110.0;
  double hysteresis_db = 3.0;
};

struct RadioEnvironment {
  std::vector<Cell> cells;
  std::vector<JammerConfig> jammers;
  /// The area-wide map copied into every legitimate cell's SIB.
  PriorityMap priority_map;
  RadioParams params;

  const Cell* find_cell(std::uint32_t cell_id) const;
  /// Replaces a cell with the same id, otherwise appends.
  void upsert_cell(Cell cell);
  bool remove_cell(std::uint32_t cell_id);
  JammerConfig* find_jammer(const std::string& id);
  void upsert_jammer(JammerConfig jammer);
};

struct CandidateCell {
  CellConfig cell;
  double power_dbm = 0.0;
  int priority = kUnlistedPriority;
};

/// Per-cell effective power at a point in time.
struct RadioSnapshot {
  std::map<std::uint32_t, double> power_dbm;
  std::int64_t timestamp_ms = 0;
};

double effective_power(const CellConfig& cell,
                       std::span<const JammerConfig> jammers);

RadioSnapshot snapshot(const RadioEnvironment& env, std::int64_t t_ms);

/// Cells of `plmn` at or above their q_rxlevmin, best first:
/// priority desc, power desc, cell_id asc. Uses the area priority map.
std::vector<CandidateCell> suitable_cells(const RadioEnvironment& env,
                                          const Plmn& plmn);
std::vector<CandidateCell> suitable_cells(const RadioEnvironment& env,
                                          const Plmn& plmn,
                                          const PriorityMap& priorities);

struct CellSelection {
  Plmn plmn;
  CellConfig cell;
};

/// PLMN selection at power-on (RPLMN, then HPLMN, then other visible PLMNs
/// by best cell power) followed by cell selection. nullopt means no service.
std::optional<CellSelection> select_plmn_and_cell(const UsimProfile& usim,
                                                  const RadioEnvironment& env);

namespace reselection {
struct Keep {
  bool operator==(const Keep&) const = default;
};
struct Reselect {
  CellConfig cell;
  bool operator==(const Reselect&) const = default;
};
/// Nothing suitable left in the serving PLMN.
struct NoService {
  bool operator==(const NoService&) const = default;
};
}  // namespace reselection

using ReselectionDecision =
    std::variant<reselection::Keep, reselection::Reselect,
                 reselection::NoService>;

/// Idle-mode reselection using the serving cell's broadcast priorities.
ReselectionDecision evaluate_reselection(const CellConfig& serving,
                                         const RadioEnvironment& env);

}  // namespace ltecatch
