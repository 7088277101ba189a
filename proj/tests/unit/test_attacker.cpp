/* SPDX-License-Identifier: Apache-2.0 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "oracle.hpp"
#include "ltecatch/attacker.hpp"

using namespace ltecatch;
using ltecatch::testing::Rng;

namespace {

const Plmn kHome("242", "01");

RadioEnvironment two_priority() {
  RadioEnvironment env;
  env.priority_map = {{Earfcn{6300}, 7}, {Earfcn{1850}, 5}};
  env.cells.push_back(
      make_cell(CellConfig{101, kHome, 0x1001, Earfcn{6300}, -70}, env.priority_map, -110));
  env.cells.push_back(
      make_cell(CellConfig{201, kHome, 0x1001, Earfcn{1850}, -85}, env.priority_map, -110));
  return env;
}

UeContext probe(const Plmn& home = kHome) {
  return make_ue("probe", make_usim(Imsi(home.digits() + "999990001"), home));
}

}  // namespace

TEST_CASE("make_attack_plan") {
  auto p = make_attack_plan(kHome, Earfcn{6300}, Earfcn{1850}, 0x1001);
  CHECK(p.collector_tac == 0x1002);
  CHECK(make_attack_plan(kHome, Earfcn{1}, Earfcn{2}, 0xFFFF).collector_tac == 0);
  CHECK_THROWS_AS(make_attack_plan(kHome, Earfcn{1}, Earfcn{1}, 5), std::invalid_argument);
}

TEST_CASE("phase 1 on the two-priority network") {
  auto result = phase1_discover(two_priority(), probe());
  CHECK(result.plan == make_attack_plan(kHome, Earfcn{6300}, Earfcn{1850}, 0x1001));
  CHECK(result.plan.collector_tac == 0x1002);
  // Non-destructive: the probe is back home and registered.
  CHECK(result.probe.emm == EmmState::kRegistered);
  REQUIRE(result.probe.camped_cell);
  CHECK(result.probe.camped_cell->earfcn == Earfcn{6300});
}

TEST_CASE("phase 1 fails on a single-channel network") {
  RadioEnvironment env;
  env.priority_map = {{Earfcn{6300}, 7}};
  env.cells.push_back(
      make_cell(CellConfig{1, kHome, 1, Earfcn{6300}, -70}, env.priority_map, -110));
  env.cells.push_back(
      make_cell(CellConfig{2, kHome, 1, Earfcn{6300}, -75}, env.priority_map, -110));
  CHECK_THROWS_AS(phase1_discover(env, probe()), DiscoveryFailed);
}

TEST_CASE("phase 1 fails when the probe cannot register") {
  RadioEnvironment env = two_priority();
  CHECK_THROWS_AS(phase1_discover(env, probe(Plmn("262", "02"))), DiscoveryFailed);
}

TEST_CASE("phase 1 leaves the caller's environment untouched") {
  RadioEnvironment env = two_priority();
  phase1_discover(env, probe());
  CHECK(env.jammers.empty());
}

TEST_CASE("deploy_imsi_catcher builds an inactive jammer and a rogue collector") {
  auto plan = make_attack_plan(kHome, Earfcn{6300}, Earfcn{1850}, 0x1001);
  auto pair = deploy_imsi_catcher(plan, -60, 900);
  REQUIRE(pair.jammer);
  CHECK(pair.jammer->id == kAttackJammerId);
  CHECK(pair.jammer->earfcn == Earfcn{6300});
  CHECK(pair.jammer->jam_penalty_db == 60.0);
  CHECK_FALSE(pair.jammer->active);
  const Cell& c = pair.collector.cell;
  CHECK(c.config.is_rogue);
  CHECK(c.config.plmn == kHome);
  CHECK(c.config.tac == 0x1002);
  CHECK(c.config.earfcn == Earfcn{1850});
  CHECK(c.sib.plmn == kHome);
  CHECK(c.sib.tac == 0x1002);
  CHECK(pair.collector.ctx.captures.empty());
  CHECK(pair.collector.ctx.broadcast == c.sib);
}

TEST_CASE("deploy_roaming_catcher has no jammer") {
  auto pair = deploy_roaming_catcher(kHome, Earfcn{5230}, 9, -90, 950);
  CHECK_FALSE(pair.jammer);
  CHECK(pair.collector.cell.config.plmn == kHome);
  CHECK(pair.collector.cell.config.earfcn == Earfcn{5230});
}

TEST_CASE("property: phase 1 agrees with the brute-force oracle and yields valid plans") {
  Rng rng(41);
  int discovered = 0;
  for (int iter = 0; iter < 300; ++iter) {
    auto net = testing::random_network(rng, kHome, iter % 2 == 1);
    auto expected = testing::oracle_discovery(net.env, kHome);
    if (!expected) {
      CHECK_THROWS_AS(phase1_discover(net.env, probe()), DiscoveryFailed);
      continue;
    }
    auto got = phase1_discover(net.env, probe());
    ++discovered;
    CHECK(got.plan.jam_earfcn == expected->jam);
    CHECK(got.plan.collector_earfcn == expected->collector);
    CHECK(got.plan.commercial_tac == expected->serving_tac);
    CHECK(got.plan.jam_earfcn != got.plan.collector_earfcn);
    CHECK(static_cast<std::uint16_t>(got.plan.collector_tac - got.plan.commercial_tac) == 1);
    CHECK(got.plan.target_plmn == kHome);
    CHECK(got.probe.emm == EmmState::kRegistered);
    CHECK(got.probe.camped_cell->earfcn == got.plan.jam_earfcn);
  }
  CHECK(discovered > 200);
}
