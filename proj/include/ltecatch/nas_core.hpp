/* SPDX-License-Identifier: Apache-2.0 */

// EMM exchange logic for the three kinds of actor: the UE, a legitimate
// MME with its HSS, and a rogue collector cell. Every handler is a pure
// transition (state, message) -> (state', reply).

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ltecatch/identity_codec.hpp"
#include "ltecatch/radio_env.hpp"
#include "ltecatch/ue_context.hpp"

namespace ltecatch {

using HssDatabase = std::set<Imsi>;

struct MmeContext {
  Plmn plmn;
  std::uint16_t mme_group = 1;
  std::uint8_t mme_code = 1;
  HssDatabase hss;
  std::map<Guti, Imsi> guti_table;
  std::uint32_t next_m_tmsi = 1;
};

struct Capture {
  std::int64_t t_ms = 0;
  Imsi imsi;
  std::uint32_t cell_id = 0;

  bool operator==(const Capture&) const = default;
};

struct CollectorContext {
  /// Append-only, chronological.
  std::vector<Capture> captures;
  SibPayload broadcast;
};

/// First NAS message after camping on `new_cell`. nullopt when a
/// registered UE stays inside its registered tracking area.
std::optional<EmmMessage> ue_initial_message(const UeContext& ue,
                                             const CellConfig& new_cell);

struct MmeOutcome {
  MmeContext mme;
  std::optional<EmmMessage> reply;
};

/// `cell_tac` is the TAC of the cell the request arrived on.
MmeOutcome legit_mme_handle(MmeContext mme, const EmmMessage& msg,
                            std::uint16_t cell_tac);

struct CollectorOutcome {
  CollectorContext ctx;
  std::optional<EmmMessage> reply;
};

CollectorOutcome collector_handle(CollectorContext ctx, const EmmMessage& msg,
                                  std::int64_t t_ms);

struct UeOutcome {
  UeContext ue;
  /// Message the UE sends back (identity responses).
  std::optional<EmmMessage> response;
  /// Set when the message was dropped as unexpected.
  std::optional<std::string> anomaly;
};

/// Applies a network reply to the UE camped on `ue.camped_cell`.
UeOutcome ue_handle_reply(UeContext ue, const EmmMessage& msg);

}  // namespace ltecatch
