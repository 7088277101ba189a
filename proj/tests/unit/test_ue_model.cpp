/* SPDX-License-Identifier: Apache-2.0 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "ltecatch/attacker.hpp"
#include "ltecatch/ue_model.hpp"

using namespace ltecatch;
using ltecatch::testing::Rng;

namespace {

const Plmn kHome("242", "01");
const Plmn kVisited("226", "10");
const Imsi kImsi("242010123456789");

RadioEnvironment home_network() {
  RadioEnvironment env;
  env.priority_map = {{Earfcn{6300}, 7}, {Earfcn{1850}, 5}};
  for (auto [id, ch, dbm] : {std::tuple{101u, 6300u, -70.0}, std::tuple{102u, 6300u, -78.0},
                             std::tuple{201u, 1850u, -85.0}}) {
    env.cells.push_back(
        make_cell(CellConfig{id, kHome, 0x1001, Earfcn{ch}, dbm}, env.priority_map, -110));
  }
  return env;
}

MmeContext home_mme() {
  MmeContext m{kHome};
  m.hss.insert(kImsi);
  return m;
}

UeContext fresh(bool roaming = true) {
  auto usim = make_usim(kImsi, kHome);
  usim.roaming_enabled = roaming;
  return make_ue("ue", usim);
}

UeContext registered(const RadioEnvironment& env, MmeContext& mme) {
  return settle_with_network(power_on(fresh(), env), mme);
}

}  // namespace

TEST_CASE("power_on camps on the best home cell and attaches with the IMSI") {
  auto step = power_on(fresh(), home_network());
  CHECK(step.ue.powered);
  REQUIRE(step.ue.camped_cell);
  CHECK(step.ue.camped_cell->cell_id == 101);
  CHECK(step.ue.emm == EmmState::kAttaching);
  REQUIRE(step.send);
  CHECK(*step.send == EmmMessage{emm::AttachRequest{kImsi}});
}

TEST_CASE("power_on with an invalid USIM goes straight to SERVICE_DENIED") {
  UeContext ue = fresh();
  ue.usim.invalid_for_service = true;
  auto step = power_on(ue, home_network());
  CHECK(step.ue.emm == EmmState::kServiceDenied);
  CHECK_FALSE(step.ue.camped_cell);
  CHECK_FALSE(step.send);
}

TEST_CASE("power_on without coverage stays unregistered, and a later tick camps") {
  RadioEnvironment empty;
  auto step = power_on(fresh(), empty);
  CHECK_FALSE(step.ue.camped_cell);
  CHECK(step.ue.emm == EmmState::kDeregistered);
  auto later = tick(step.ue, home_network());
  CHECK(later.ue.camped_cell);
  CHECK(later.send);
}

TEST_CASE("roaming catcher: inactive roaming picks the home-PLMN rogue cell") {
  RadioEnvironment abroad;
  abroad.priority_map = {{Earfcn{3000}, 6}};
  abroad.cells.push_back(
      make_cell(CellConfig{301, kVisited, 77, Earfcn{3000}, -60}, abroad.priority_map, -110));
  auto rogue = deploy_roaming_catcher(kHome, Earfcn{5230}, 9, -100, 950);
  abroad.cells.push_back(rogue.collector.cell);

  auto off_roaming = power_on(fresh(false), abroad);
  CHECK(off_roaming.ue.camped_cell->cell_id == 950);
  CHECK(*off_roaming.send == EmmMessage{emm::AttachRequest{kImsi}});

  // Without the rogue cell the same UE has nowhere to go.
  abroad.cells.pop_back();
  CHECK_FALSE(power_on(fresh(false), abroad).ue.camped_cell);

  // A USIM from another country never camps on it.
  abroad.cells.push_back(rogue.collector.cell);
  auto other = make_usim(Imsi("262020000000001"), Plmn("262", "02"));
  other.roaming_enabled = false;
  CHECK_FALSE(power_on(make_ue("x", other), abroad).ue.camped_cell);
}

TEST_CASE("stable environment: ticks emit nothing") {
  RadioEnvironment env = home_network();
  MmeContext mme = home_mme();
  UeContext ue = registered(env, mme);
  REQUIRE(ue.emm == EmmState::kRegistered);
  for (int i = 0; i < 20; ++i) {
    auto step = tick(ue, env);
    CHECK_FALSE(step.send);
    CHECK_FALSE(step.cell_changed);
    ue = step.ue;
  }
}

TEST_CASE("serving cell removed with no alternative clears the camped cell") {
  RadioEnvironment env;
  env.cells.push_back(make_cell(CellConfig{1, kHome, 1, Earfcn{10}, -70}, {}, -110));
  MmeContext mme = home_mme();
  UeContext ue = registered(env, mme);
  env.cells.clear();
  auto step = tick(ue, env);
  CHECK_FALSE(step.ue.camped_cell);
  CHECK(step.ue.emm == EmmState::kRegistered);
  // Back in coverage in the same area: no signalling needed.
  env.cells.push_back(make_cell(CellConfig{1, kHome, 1, Earfcn{10}, -70}, {}, -110));
  auto back = tick(step.ue, env);
  CHECK(back.ue.camped_cell);
  CHECK_FALSE(back.send);
}

TEST_CASE("jammer on the serving channel moves the UE to the collector with a TAU") {
  RadioEnvironment env = home_network();
  MmeContext mme = home_mme();
  UeContext ue = registered(env, mme);
  auto pair = deploy_imsi_catcher(
      make_attack_plan(kHome, Earfcn{6300}, Earfcn{1850}, 0x1001), -60, 900);
  env.cells.push_back(pair.collector.cell);
  CHECK_FALSE(tick(ue, env).send);
  pair.jammer->active = true;
  env.jammers.push_back(*pair.jammer);
  auto step = tick(ue, env);
  REQUIRE(step.send);
  CHECK(std::holds_alternative<emm::TauRequest>(*step.send));
  CHECK(step.ue.camped_cell->cell_id == 900);
  CHECK(step.ue.emm == EmmState::kTauPending);
}

TEST_CASE("reboot of a registered UE in a benign network returns to the same cell") {
  RadioEnvironment env = home_network();
  MmeContext mme = home_mme();
  UeContext ue = registered(env, mme);
  const auto cell = ue.camped_cell;
  auto step = reboot(ue, env);
  REQUIRE(step.send);
  CHECK(std::holds_alternative<Guti>(std::get<emm::AttachRequest>(*step.send).identity));
  UeContext again = settle_with_network(step, mme);
  CHECK(again.emm == EmmState::kRegistered);
  CHECK(again.camped_cell == cell);
  CHECK(again.guti == ue.guti);

  // power_off + power_on lands in the same place.
  UeContext cycled = settle_with_network(power_on(power_off(ue), env), mme);
  CHECK(cycled.emm == again.emm);
  CHECK(cycled.camped_cell == again.camped_cell);
}

TEST_CASE("reboot clears SERVICE_DENIED, power_off alone does not") {
  RadioEnvironment env = home_network();
  UeContext ue = fresh();
  ue.powered = true;
  ue.emm = EmmState::kServiceDenied;
  ue.usim.invalid_for_service = true;
  CHECK(power_off(ue).emm == EmmState::kServiceDenied);
  CHECK(power_off(ue).usim.invalid_for_service);
  auto step = reboot(ue, env);
  CHECK_FALSE(step.ue.usim.invalid_for_service);
  CHECK(step.ue.emm == EmmState::kAttaching);
}

// Random walk over ticks, environment changes and network replies.
TEST_CASE("property: RPLMN changes only on accepts; denial is absorbing; camping is legal") {
  Rng rng(31);
  for (int run = 0; run < 200; ++run) {
    auto net = testing::random_network(rng, kHome, true);
    RadioEnvironment env = net.env;
    UeContext ue = fresh(testing::uniform(rng, 0, 1) == 1);
    ue = power_on(ue, env).ue;
    for (int step = 0; step < 80; ++step) {
      const auto rplmn_before = ue.usim.rplmn;
      const bool denied_before = ue.emm == EmmState::kServiceDenied;
      bool accepted = false;
      switch (testing::uniform(rng, 0, 3)) {
        case 0: {
          auto& j = env.jammers;
          if (j.empty()) j.push_back({"j", net.earfcns[0], 60, false});
          j[0].active = !j[0].active;
          j[0].earfcn = net.earfcns[testing::uniform(rng, 0, static_cast<int>(net.earfcns.size()) - 1)];
          break;
        }
        case 1: {
          EmmMessage m = testing::random_emm(rng);
          if (is_ue_originated(m)) break;
          accepted = std::holds_alternative<emm::AttachAccept>(m) ||
                     std::holds_alternative<emm::TauAccept>(m);
          auto out = ue_handle_reply(ue, m);
          accepted = accepted && !out.anomaly;
          ue = out.ue;
          break;
        }
        default: {
          ue = tick(ue, env).ue;
          if (ue.camped_cell) {
            auto ok = suitable_cells(env, ue.camped_cell->plmn);
            CHECK(std::any_of(ok.begin(), ok.end(), [&](const CandidateCell& c) {
              return c.cell.cell_id == ue.camped_cell->cell_id;
            }));
          }
          break;
        }
      }
      if (!accepted) CHECK(ue.usim.rplmn == rplmn_before);
      if (denied_before) {
        CHECK(ue.emm == EmmState::kServiceDenied);
        CHECK_FALSE(ue.camped_cell);
      }
      if (ue.camped_cell) CHECK(ue.powered);
    }
  }
}
