/* SPDX-License-Identifier: Apache-2.0 */

// The adversary: a probe phone plus a temporary jammer to learn the
// serving channel, its TAC and the next-best channel (phase 1), then a
// collector cell on that next channel with TAC + 1 and a jammer on the
// serving channel (phase 2). The roaming variant is a lone collector that
// broadcasts the victim's home PLMN.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>

#include "ltecatch/nas_core.hpp"
#include "ltecatch/radio_env.hpp"
#include "ltecatch/ue_context.hpp"
#include "ltecatch/ue_model.hpp"

namespace ltecatch {

class DiscoveryFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AttackPlan {
  Plmn target_plmn;
  Earfcn jam_earfcn;
  Earfcn collector_earfcn;
  std::uint16_t commercial_tac = 0;
  std::uint16_t collector_tac = 0;

  bool operator==(const AttackPlan&) const = default;
};

/// collector_tac = commercial_tac + 1 (mod 2^16). Throws
/// std::invalid_argument if both channels are the same.
AttackPlan make_attack_plan(Plmn target, Earfcn jam_earfcn,
                            Earfcn collector_earfcn,
                            std::uint16_t commercial_tac);

struct CollectorCell {
  Cell cell;
  CollectorContext ctx;
};

struct RoguePair {
  std::optional<JammerConfig> jammer;
  CollectorCell collector;
};

inline constexpr double kDefaultJamPenaltyDb = 60.0;
inline constexpr const char* kAttackJammerId = "attack-jammer";

struct DiscoveryOptions {
  double jam_penalty_db = kDefaultJamPenaltyDb;
  /// Reselection periods to wait for the probe to move.
  int max_ticks = 25;
};

struct DiscoveryResult {
  AttackPlan plan;
  /// The probe after the temporary jammer was switched off again.
  UeContext probe;
};

/// Phase 1, run against `env` with the attacker's own subscribed phone.
/// Throws DiscoveryFailed when the probe cannot register or never leaves
/// the jammed channel.
DiscoveryResult phase1_discover(const RadioEnvironment& env, UeContext probe,
                                const DiscoveryOptions& options = {});

/// Phase 2. The jammer is returned inactive; the caller switches it on
/// after the collector is on air.
RoguePair deploy_imsi_catcher(const AttackPlan& plan, double rx_power_dbm,
                              std::uint32_t cell_id,
                              double jam_penalty_db = kDefaultJamPenaltyDb,
                              double q_rxlevmin_dbm = -110.0);

RoguePair deploy_roaming_catcher(const Plmn& home_plmn, Earfcn earfcn,
                                 std::uint16_t tac, double rx_power_dbm,
                                 std::uint32_t cell_id,
                                 double q_rxlevmin_dbm = -110.0);

/// Runs NAS exchanges between a UE and a legitimate core until neither side
/// has anything left to send. Used by the probe; the engine does its own
/// timed delivery.
UeContext settle_with_network(UeStep step, MmeContext& mme);

}  // namespace ltecatch
