/* SPDX-License-Identifier: Apache-2.0 */

// UE lifecycle: power state, PLMN/cell selection at power-on, periodic
// idle-mode reselection and the NAS message each camping decision triggers.
// The engine owns timing; these functions are pure state transitions.

#pragma once

#include <optional>

#include "ltecatch/nas_core.hpp"
#include "ltecatch/radio_env.hpp"
#include "ltecatch/ue_context.hpp"

namespace ltecatch {

struct UeStep {
  UeContext ue;
  /// NAS message to send to the (new) camped cell.
  std::optional<EmmMessage> send;
  /// True when the camped cell changed (including loss of the cell).
  bool cell_changed = false;
};

UeContext make_ue(std::string id, UsimProfile usim,
                  std::int64_t reselection_period_ms = 200);

UeStep power_on(UeContext ue, const RadioEnvironment& env);

/// Drops the camped cell and any exchange in flight. USIM contents,
/// including invalid_for_service, and the GUTI are kept.
UeContext power_off(UeContext ue);

/// power_off, clear invalid_for_service, power_on. Also used for a plain
/// off/on power cycle.
UeStep reboot(UeContext ue, const RadioEnvironment& env);

/// One reselection period elapsed.
UeStep tick(UeContext ue, const RadioEnvironment& env);

}  // namespace ltecatch
