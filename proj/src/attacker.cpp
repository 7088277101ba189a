/* SPDX-License-Identifier: Apache-2.0 */

#include "ltecatch/attacker.hpp"

#include "ltecatch/ue_model.hpp"

namespace ltecatch {

AttackPlan make_attack_plan(Plmn target, Earfcn jam_earfcn,
                            Earfcn collector_earfcn,
                            std::uint16_t commercial_tac) {
  if (jam_earfcn == collector_earfcn) {
    throw std::invalid_argument("collector and jammer share EARFCN " +
                                std::to_string(jam_earfcn.channel));
  }
  return AttackPlan{std::move(target), jam_earfcn, collector_earfcn,
                    commercial_tac,
                    static_cast<std::uint16_t>(commercial_tac + 1)};
}

UeContext settle_with_network(UeStep step, MmeContext& mme) {
  UeContext ue = std::move(step.ue);
  std::optional<EmmMessage> uplink = std::move(step.send);
  // Each round trip either finishes or answers an identity request once.
  for (int round = 0; uplink && ue.camped_cell && round < 8; ++round) {
    auto net = legit_mme_handle(std::move(mme), *uplink, ue.camped_cell->tac);
    mme = std::move(net.mme);
    if (!net.reply) break;
    auto out = ue_handle_reply(std::move(ue), *net.reply);
    ue = std::move(out.ue);
    uplink = std::move(out.response);
  }
  return ue;
}

DiscoveryResult phase1_discover(const RadioEnvironment& env, UeContext probe,
                                const DiscoveryOptions& options) {
  MmeContext core{probe.usim.hplmn};
  core.hss.insert(probe.usim.imsi);

  // 1. Register and read the serving channel and TAC.
  probe = power_off(std::move(probe));
  probe = settle_with_network(reboot(std::move(probe), env), core);
  if (!probe.camped_cell || probe.emm != EmmState::kRegistered ||
      probe.camped_cell->plmn != core.plmn) {
    throw DiscoveryFailed("probe could not register with the target network");
  }
  const CellConfig serving = *probe.camped_cell;

  // 2. Temporary jammer on the serving channel.
  RadioEnvironment jammed = env;
  jammed.upsert_jammer({"phase1-jammer", serving.earfcn,
                        options.jam_penalty_db, true});

  // 3. Wait for the probe to reselect and read the new channel.
  std::optional<CellConfig> moved_to;
  for (int i = 0; i < options.max_ticks && !moved_to; ++i) {
    probe = settle_with_network(tick(std::move(probe), jammed), core);
    if (probe.camped_cell && probe.camped_cell->earfcn != serving.earfcn) {
      moved_to = probe.camped_cell;
    }
  }
  if (!moved_to) {
    throw DiscoveryFailed("probe never left EARFCN " +
                          std::to_string(serving.earfcn.channel) +
                          ": no reselection target");
  }
  if (moved_to->plmn != serving.plmn) {
    throw DiscoveryFailed("probe reselected to another PLMN (" +
                          moved_to->plmn.to_string() + ")");
  }

  // 4. Jammer off; the probe returns to the commercial network.
  for (int i = 0; i < options.max_ticks; ++i) {
    probe = settle_with_network(tick(std::move(probe), env), core);
    if (probe.camped_cell && probe.camped_cell->earfcn == serving.earfcn) break;
  }

  return {make_attack_plan(serving.plmn, serving.earfcn, moved_to->earfcn,
                           serving.tac),
          std::move(probe)};
}

namespace {

CollectorCell make_collector(const Plmn& plmn, Earfcn earfcn,
                             std::uint16_t tac, double rx_power_dbm,
                             std::uint32_t cell_id, double q_rxlevmin_dbm) {
  CellConfig cfg{cell_id, plmn, tac, earfcn, rx_power_dbm, true};
  Cell cell = make_cell(std::move(cfg), PriorityMap{{earfcn, kMaxPriority}},
                        q_rxlevmin_dbm);
  CollectorContext ctx{{}, cell.sib};
  return {std::move(cell), std::move(ctx)};
}

}  // namespace

RoguePair deploy_imsi_catcher(const AttackPlan& plan, double rx_power_dbm,
                              std::uint32_t cell_id, double jam_penalty_db,
                              double q_rxlevmin_dbm) {
  if (!(jam_penalty_db > 0)) {
    throw std::invalid_argument("jam penalty must be positive");
  }
  return {JammerConfig{kAttackJammerId, plan.jam_earfcn, jam_penalty_db, false},
          make_collector(plan.target_plmn, plan.collector_earfcn,
                         plan.collector_tac, rx_power_dbm, cell_id,
                         q_rxlevmin_dbm)};
}

RoguePair deploy_roaming_catcher(const Plmn& home_plmn, Earfcn earfcn,
                                 std::uint16_t tac, double rx_power_dbm,
                                 std::uint32_t cell_id, double q_rxlevmin_dbm) {
  return {std::nullopt, make_collector(home_plmn, earfcn, tac, rx_power_dbm,
                                       cell_id, q_rxlevmin_dbm)};
}

}  // namespace ltecatch
