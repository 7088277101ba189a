/* SPDX-License-Identifier: Apache-2.0 */

#include "ltecatch/ue_model.hpp"

namespace ltecatch {

namespace {

void abort_exchange(UeContext& ue) {
  if (ue.emm == EmmState::kAttaching) ue.emm = EmmState::kDeregistered;
  if (ue.emm == EmmState::kTauPending) ue.emm = EmmState::kRegistered;
}

UeStep camp(UeContext ue, const CellConfig& cell) {
  abort_exchange(ue);
  ue.camped_cell = cell;
  UeStep step{std::move(ue), std::nullopt, true};
  step.send = ue_initial_message(step.ue, cell);
  if (step.send) {
    step.ue.emm = std::holds_alternative<emm::TauRequest>(*step.send)
                      ? EmmState::kTauPending
                      : EmmState::kAttaching;
  }
  return step;
}

}  // namespace

UeContext make_ue(std::string id, UsimProfile usim,
                  std::int64_t reselection_period_ms) {
  UeContext ue{std::move(id), std::move(usim)};
  ue.reselection_period_ms = reselection_period_ms;
  return ue;
}

UeStep power_on(UeContext ue, const RadioEnvironment& env) {
  ue.powered = true;
  ue.camped_cell.reset();
  if (ue.usim.invalid_for_service) {
    ue.emm = EmmState::kServiceDenied;
    return {std::move(ue)};
  }
  ue.emm = EmmState::kDeregistered;
  auto selection = select_plmn_and_cell(ue.usim, env);
  if (!selection) return {std::move(ue)};
  return camp(std::move(ue), selection->cell);
}

UeContext power_off(UeContext ue) {
  ue.powered = false;
  ue.camped_cell.reset();
  if (ue.emm != EmmState::kServiceDenied) ue.emm = EmmState::kDeregistered;
  return ue;
}

UeStep reboot(UeContext ue, const RadioEnvironment& env) {
  ue = power_off(std::move(ue));
  ue.usim.invalid_for_service = false;
  ue.emm = EmmState::kDeregistered;
  return power_on(std::move(ue), env);
}

UeStep tick(UeContext ue, const RadioEnvironment& env) {
  if (!ue.powered || ue.emm == EmmState::kServiceDenied) return {std::move(ue)};

  if (!ue.camped_cell) {
    auto selection = select_plmn_and_cell(ue.usim, env);
    if (!selection) return {std::move(ue)};
    return camp(std::move(ue), selection->cell);
  }

  auto decision = evaluate_reselection(*ue.camped_cell, env);
  if (std::holds_alternative<reselection::NoService>(decision)) {
    abort_exchange(ue);
    ue.camped_cell.reset();
    return {std::move(ue), std::nullopt, true};
  }
  if (auto* r = std::get_if<reselection::Reselect>(&decision)) {
    return camp(std::move(ue), r->cell);
  }
  return {std::move(ue)};
}

}  // namespace ltecatch
