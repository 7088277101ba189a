/* SPDX-License-Identifier: Apache-2.0 */

#include "ltecatch/nas_core.hpp"

#include <type_traits>

namespace ltecatch {

std::string_view to_string(EmmState state) {
  switch (state) {
    case EmmState::kDeregistered: return "DEREGISTERED";
    case EmmState::kAttaching: return "ATTACHING";
    case EmmState::kRegistered: return "REGISTERED";
    case EmmState::kTauPending: return "TAU_PENDING";
    case EmmState::kServiceDenied: return "SERVICE_DENIED";
  }
  return "?";
}

std::optional<EmmMessage> ue_initial_message(const UeContext& ue,
                                             const CellConfig& new_cell) {
  if (ue.guti && ue.emm == EmmState::kRegistered) {
    const bool same_area = ue.registered_tac == new_cell.tac &&
                           ue.usim.rplmn == new_cell.plmn;
    if (same_area) return std::nullopt;
    return emm::TauRequest{*ue.guti, ue.registered_tac.value_or(0)};
  }
  if (ue.guti && ue.emm == EmmState::kDeregistered) {
    return emm::AttachRequest{*ue.guti};
  }
  return emm::AttachRequest{ue.usim.imsi};
}

namespace {

emm::AttachAccept allocate_guti(MmeContext& mme, const Imsi& imsi,
                                std::uint16_t tac) {
  std::erase_if(mme.guti_table, [&](const auto& kv) { return kv.second == imsi; });
  Guti guti{mme.plmn, mme.mme_group, mme.mme_code, mme.next_m_tmsi++};
  mme.guti_table.emplace(guti, imsi);
  return emm::AttachAccept{std::move(guti), tac};
}

EmmMessage admit(MmeContext& mme, const Imsi& imsi, std::uint16_t tac) {
  if (mme.hss.contains(imsi)) return allocate_guti(mme, imsi, tac);
  return emm::AttachReject{EmmCause{EmmCause::kIllegalUe}};
}

}  // namespace

MmeOutcome legit_mme_handle(MmeContext mme, const EmmMessage& msg,
                            std::uint16_t cell_tac) {
  std::optional<EmmMessage> reply;
  if (const auto* req = std::get_if<emm::AttachRequest>(&msg)) {
    if (const auto* imsi = std::get_if<Imsi>(&req->identity)) {
      reply = admit(mme, *imsi, cell_tac);
    } else {
      const auto& guti = std::get<Guti>(req->identity);
      if (mme.guti_table.contains(guti)) {
        reply = emm::AttachAccept{guti, cell_tac};
      } else {
        reply = emm::IdentityRequest{};
      }
    }
  } else if (const auto* tau = std::get_if<emm::TauRequest>(&msg)) {
    if (mme.guti_table.contains(tau->guti)) {
      reply = emm::TauAccept{};
    } else {
      reply = emm::IdentityRequest{};
    }
  } else if (const auto* rsp = std::get_if<emm::IdentityResponse>(&msg)) {
    reply = admit(mme, rsp->imsi, cell_tac);
  }
  return {std::move(mme), std::move(reply)};
}

CollectorOutcome collector_handle(CollectorContext ctx, const EmmMessage& msg,
                                  std::int64_t t_ms) {
  std::optional<EmmMessage> reply;
  if (const Imsi* imsi = carried_imsi(msg)) {
    ctx.captures.push_back({t_ms, *imsi, ctx.broadcast.cell_id});
    reply = emm::AttachReject{EmmCause{EmmCause::kIllegalUe}};
  } else if (std::holds_alternative<emm::AttachRequest>(msg) ||
             std::holds_alternative<emm::TauRequest>(msg)) {
    reply = emm::IdentityRequest{};
  }
  return {std::move(ctx), std::move(reply)};
}

UeOutcome ue_handle_reply(UeContext ue, const EmmMessage& msg) {
  UeOutcome out{std::move(ue)};
  UeContext& u = out.ue;

  if (!u.pending() || !u.camped_cell || is_ue_originated(msg)) {
    out.anomaly = "UnexpectedMessage: " + std::string(message_name(msg)) +
                  " in state " + std::string(to_string(u.emm));
    return out;
  }
  const CellConfig& serving = *u.camped_cell;

  auto deny = [&u] {
    u.emm = EmmState::kServiceDenied;
    u.usim.invalid_for_service = true;
    u.camped_cell.reset();
    u.guti.reset();
    u.registered_tac.reset();
  };

  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, emm::AttachAccept>) {
          u.emm = EmmState::kRegistered;
          u.guti = m.guti;
          u.registered_tac = m.tac;
          u.usim.rplmn = serving.plmn;
        } else if constexpr (std::is_same_v<T, emm::TauAccept>) {
          u.emm = EmmState::kRegistered;
          u.registered_tac = serving.tac;
          u.usim.rplmn = serving.plmn;
        } else if constexpr (std::is_same_v<T, emm::AttachReject> ||
                             std::is_same_v<T, emm::TauReject>) {
          if (m.cause.value == EmmCause::kIllegalUe) {
            deny();
          } else {
            u.emm = EmmState::kDeregistered;
          }
        } else if constexpr (std::is_same_v<T, emm::IdentityRequest>) {
          out.response = emm::IdentityResponse{u.usim.imsi};
        }
      },
      msg);
  return out;
}

}  // namespace ltecatch
