/* SPDX-License-Identifier: Apache-2.0 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gen.hpp"
#include "ltecatch/nas_core.hpp"
#include "ltecatch/ue_model.hpp"

using namespace ltecatch;
using ltecatch::testing::Rng;

namespace {

const Plmn kHome("242", "01");
const Imsi kSub("242010123456789");
const Imsi kStranger("242019999999999");

CellConfig cell(std::uint32_t id, std::uint16_t tac, bool rogue = false) {
  return CellConfig{id, kHome, tac, Earfcn{6300}, -70.0, rogue};
}

UeContext registered_ue(std::uint16_t tac) {
  UeContext ue = make_ue("u", make_usim(kSub, kHome));
  ue.powered = true;
  ue.emm = EmmState::kRegistered;
  ue.camped_cell = cell(1, tac);
  ue.guti = Guti{kHome, 1, 1, 42};
  ue.registered_tac = tac;
  ue.usim.rplmn = kHome;
  return ue;
}

MmeContext mme_with(std::initializer_list<Imsi> subs) {
  MmeContext m{kHome};
  m.hss.insert(subs.begin(), subs.end());
  return m;
}

}  // namespace

TEST_CASE("ue_initial_message") {
  SUBCASE("fresh UE attaches with its IMSI") {
    UeContext ue = make_ue("u", make_usim(kSub, kHome));
    auto m = ue_initial_message(ue, cell(1, 0x1001));
    REQUIRE(m);
    CHECK(*m == EmmMessage{emm::AttachRequest{kSub}});
  }
  SUBCASE("registered UE entering TAC + 1 sends a TAU with its GUTI") {
    UeContext ue = registered_ue(0x1001);
    auto m = ue_initial_message(ue, cell(900, 0x1002, true));
    REQUIRE(m);
    CHECK(*m == EmmMessage{emm::TauRequest{*ue.guti, 0x1001}});
  }
  SUBCASE("registered UE staying in its tracking area sends nothing") {
    CHECK_FALSE(ue_initial_message(registered_ue(0x1001), cell(2, 0x1001)));
  }
  SUBCASE("deregistered UE holding a GUTI attaches with the GUTI") {
    UeContext ue = registered_ue(0x1001);
    ue.emm = EmmState::kDeregistered;
    CHECK(*ue_initial_message(ue, cell(1, 0x1001)) ==
          EmmMessage{emm::AttachRequest{*ue.guti}});
  }
}

TEST_CASE("legit_mme_handle") {
  SUBCASE("subscribed IMSI gets a fresh GUTI") {
    auto out = legit_mme_handle(mme_with({kSub}), emm::AttachRequest{kSub}, 0x1001);
    auto* acc = std::get_if<emm::AttachAccept>(&*out.reply);
    REQUIRE(acc);
    CHECK(acc->guti == Guti{kHome, 1, 1, 1});
    CHECK(acc->tac == 0x1001);
    CHECK(out.mme.guti_table.at(acc->guti) == kSub);
    CHECK(out.mme.next_m_tmsi == 2);

    // Re-attaching with the IMSI retires the old GUTI.
    auto again = legit_mme_handle(out.mme, emm::AttachRequest{kSub}, 0x1001);
    CHECK(again.mme.guti_table.size() == 1);
    CHECK_FALSE(again.mme.guti_table.contains(acc->guti));
  }
  SUBCASE("known GUTI is reused, unknown GUTI triggers an identity request") {
    auto first = legit_mme_handle(mme_with({kSub}), emm::AttachRequest{kSub}, 7);
    Guti g = std::get<emm::AttachAccept>(*first.reply).guti;
    auto reuse = legit_mme_handle(first.mme, emm::AttachRequest{g}, 7);
    CHECK(std::get<emm::AttachAccept>(*reuse.reply).guti == g);
    CHECK(reuse.mme.next_m_tmsi == first.mme.next_m_tmsi);

    Guti foreign{kHome, 9, 9, 9};
    CHECK(std::holds_alternative<emm::IdentityRequest>(
        *legit_mme_handle(first.mme, emm::AttachRequest{foreign}, 7).reply));
    CHECK(std::holds_alternative<emm::IdentityRequest>(
        *legit_mme_handle(first.mme, emm::TauRequest{foreign, 7}, 8).reply));
    CHECK(std::holds_alternative<emm::TauAccept>(
        *legit_mme_handle(first.mme, emm::TauRequest{g, 7}, 8).reply));
  }
  SUBCASE("non-subscriber is rejected with cause 3") {
    auto out = legit_mme_handle(mme_with({kSub}), emm::IdentityResponse{kStranger}, 1);
    CHECK(*out.reply == EmmMessage{emm::AttachReject{EmmCause{3}}});
    CHECK(out.mme.guti_table.empty());
    auto viaAttach = legit_mme_handle(mme_with({}), emm::AttachRequest{kSub}, 1);
    CHECK(*viaAttach.reply == EmmMessage{emm::AttachReject{EmmCause{3}}});
  }
  SUBCASE("network-originated input is ignored") {
    CHECK_FALSE(legit_mme_handle(mme_with({kSub}), emm::TauAccept{}, 1).reply);
  }
}

TEST_CASE("collector_handle") {
  CollectorContext ctx{{}, make_cell(cell(900, 0x1002, true), {}, -110).sib};
  SUBCASE("TAU draws an identity request, the answer is captured and rejected") {
    auto a = collector_handle(ctx, emm::TauRequest{Guti{kHome, 1, 1, 5}, 0x1001}, 100);
    CHECK(std::holds_alternative<emm::IdentityRequest>(*a.reply));
    CHECK(a.ctx.captures.empty());
    auto b = collector_handle(a.ctx, emm::IdentityResponse{kSub}, 200);
    CHECK(*b.reply == EmmMessage{emm::AttachReject{EmmCause{3}}});
    REQUIRE(b.ctx.captures.size() == 1);
    CHECK(b.ctx.captures[0] == Capture{200, kSub, 900});
  }
  SUBCASE("attach with a raw IMSI is captured at once") {
    auto a = collector_handle(ctx, emm::AttachRequest{kSub}, 5);
    CHECK(a.ctx.captures.size() == 1);
    CHECK(std::holds_alternative<emm::AttachReject>(*a.reply));
  }
  SUBCASE("attach with a GUTI draws an identity request") {
    auto a = collector_handle(ctx, emm::AttachRequest{Guti{kHome, 1, 1, 5}}, 5);
    CHECK(std::holds_alternative<emm::IdentityRequest>(*a.reply));
  }
}

TEST_CASE("ue_handle_reply") {
  UeContext attaching = make_ue("u", make_usim(kSub, kHome));
  attaching.powered = true;
  attaching.camped_cell = cell(1, 0x1001);
  attaching.emm = EmmState::kAttaching;

  SUBCASE("attach accept registers and records the RPLMN") {
    Guti g{kHome, 1, 1, 3};
    auto out = ue_handle_reply(attaching, emm::AttachAccept{g, 0x1001});
    CHECK(out.ue.emm == EmmState::kRegistered);
    CHECK(out.ue.guti == g);
    CHECK(out.ue.registered_tac == 0x1001);
    CHECK(out.ue.usim.rplmn == kHome);
    CHECK_FALSE(out.anomaly);
  }
  SUBCASE("identity request is answered with the USIM's IMSI") {
    auto out = ue_handle_reply(attaching, emm::IdentityRequest{});
    REQUIRE(out.response);
    CHECK(*out.response == EmmMessage{emm::IdentityResponse{kSub}});
    CHECK(out.ue.emm == EmmState::kAttaching);
  }
  SUBCASE("cause 3 denies service and drops the cell and GUTI") {
    UeContext tau = registered_ue(0x1001);
    tau.emm = EmmState::kTauPending;
    for (EmmMessage rej : {EmmMessage{emm::AttachReject{EmmCause{3}}},
                           EmmMessage{emm::TauReject{EmmCause{3}}}}) {
      auto out = ue_handle_reply(tau, rej);
      CHECK(out.ue.emm == EmmState::kServiceDenied);
      CHECK(out.ue.usim.invalid_for_service);
      CHECK_FALSE(out.ue.camped_cell);
      CHECK_FALSE(out.ue.guti);
      // Denial covers every PLMN: no tick brings it back.
      RadioEnvironment env;
      env.cells.push_back(make_cell(cell(1, 0x1001), {}, -110));
      auto step = tick(out.ue, env);
      CHECK(step.ue.emm == EmmState::kServiceDenied);
      CHECK_FALSE(step.send);
    }
  }
  SUBCASE("other reject causes leave the UE deregistered but usable") {
    auto out = ue_handle_reply(attaching, emm::AttachReject{EmmCause{15}});
    CHECK(out.ue.emm == EmmState::kDeregistered);
    CHECK_FALSE(out.ue.usim.invalid_for_service);
  }
  SUBCASE("replies outside a pending exchange are anomalies") {
    UeContext idle = registered_ue(1);
    auto out = ue_handle_reply(idle, emm::AttachAccept{Guti{kHome, 1, 1, 9}, 1});
    CHECK(out.anomaly);
    CHECK(out.ue.guti == idle.guti);
    CHECK(ue_handle_reply(attaching, emm::AttachRequest{kSub}).anomaly);
  }
}

TEST_CASE("property: every GUTI the MME holds maps to an HSS subscriber") {
  Rng rng(21);
  std::vector<Imsi> pool;
  for (int i = 0; i < 8; ++i) pool.push_back(testing::random_imsi_of(rng, kHome));
  for (int run = 0; run < 200; ++run) {
    MmeContext mme{kHome};
    for (int i = 0; i < 4; ++i) mme.hss.insert(pool[testing::uniform(rng, 0, 7)]);
    std::vector<Guti> seen{Guti{kHome, 1, 1, 999}};
    for (int step = 0; step < 60; ++step) {
      const Imsi& imsi = pool[testing::uniform(rng, 0, 7)];
      const Guti& g = seen[testing::uniform(rng, 0, static_cast<int>(seen.size()) - 1)];
      EmmMessage msg = emm::TauAccept{};
      switch (testing::uniform(rng, 0, 3)) {
        case 0: msg = emm::AttachRequest{imsi}; break;
        case 1: msg = emm::AttachRequest{g}; break;
        case 2: msg = emm::TauRequest{g, 1}; break;
        default: msg = emm::IdentityResponse{imsi}; break;
      }
      auto out = legit_mme_handle(std::move(mme), msg, 1);
      mme = std::move(out.mme);
      if (auto* acc = std::get_if<emm::AttachAccept>(&*out.reply)) seen.push_back(acc->guti);
      for (const auto& [guti, owner] : mme.guti_table) {
        CHECK(mme.hss.contains(owner));
      }
    }
  }
}

TEST_CASE("property: collector captures are append-only and chronological") {
  Rng rng(22);
  CollectorContext ctx{{}, make_cell(cell(900, 2, true), {}, -110).sib};
  std::int64_t t = 0;
  std::size_t imsi_msgs = 0;
  for (int i = 0; i < 2000; ++i) {
    t += testing::uniform(rng, 0, 50);
    EmmMessage msg = testing::random_emm(rng);
    if (!is_ue_originated(msg)) continue;
    if (carried_imsi(msg)) ++imsi_msgs;
    const auto before = ctx.captures;
    auto out = collector_handle(std::move(ctx), msg, t);
    ctx = std::move(out.ctx);
    REQUIRE(ctx.captures.size() >= before.size());
    CHECK(std::equal(before.begin(), before.end(), ctx.captures.begin()));
  }
  CHECK(ctx.captures.size() == imsi_msgs);
  CHECK(std::is_sorted(ctx.captures.begin(), ctx.captures.end(),
                       [](const Capture& a, const Capture& b) { return a.t_ms < b.t_ms; }));
}
