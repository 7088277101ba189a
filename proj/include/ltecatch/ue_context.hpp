/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ltecatch/identity_codec.hpp"
#include "ltecatch/radio_env.hpp"
#include "ltecatch/usim.hpp"

namespace ltecatch {

enum class EmmState {
  kDeregistered,
  kAttaching,
  kRegistered,
  kTauPending,
  kServiceDenied,
};

std::string_view to_string(EmmState state);

struct UeContext {
  std::string id;
  UsimProfile usim;
  bool powered = false;
  EmmState emm = EmmState::kDeregistered;
  /// The cell as it was broadcast when the UE camped on it.
  std::optional<CellConfig> camped_cell;
  std::optional<Guti> guti;
  std::optional<std::uint16_t> registered_tac;
  std::int64_t reselection_period_ms = 200;

  bool pending() const {
    return emm == EmmState::kAttaching || emm == EmmState::kTauPending;
  }
};

}  // namespace ltecatch
