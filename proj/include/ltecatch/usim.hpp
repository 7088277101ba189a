/* SPDX-License-Identifier: Apache-2.0 */

#pragma once

#include <optional>

#include "ltecatch/identity_codec.hpp"

namespace ltecatch {

struct UsimProfile {
  Imsi imsi;
  Plmn hplmn;
  /// Last PLMN the UE registered on successfully.
  std::optional<Plmn> rplmn;
  bool roaming_enabled = true;
  /// Set by a cause-3 rejection; only a reboot / power cycle clears it.
  bool invalid_for_service = false;

  bool operator==(const UsimProfile&) const = default;
};

/// Throws std::invalid_argument if the IMSI does not start with the HPLMN.
UsimProfile make_usim(Imsi imsi, Plmn hplmn);

}  // namespace ltecatch
