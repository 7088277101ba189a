/* SPDX-License-Identifier: Apache-2.0 */

#include "ltecatch/sim_engine.hpp"

#include <algorithm>

#include "ltecatch/ue_model.hpp"

namespace ltecatch {

std::string ue_node(const std::string& ue_id) { return "ue:" + ue_id; }
std::string cell_node(std::uint32_t cell_id) {
  return "cell:" + std::to_string(cell_id);
}

std::size_t SimReport::capture_count() const {
  std::size_t n = 0;
  for (const auto& c : captures) n += c.captures.size();
  return n;
}

Simulation::Simulation(Scenario scenario) : scenario_(std::move(scenario)) {
  for (const auto& spec : scenario_.ues) {
    ues_.emplace(spec.id,
                 UeActor{make_ue(spec.id, spec.usim, spec.reselection_period_ms)});
  }
  for (const auto& cell : scenario_.env.cells) {
    if (cell.config.is_rogue) {
      collectors_.try_emplace(cell.config.cell_id, CollectorContext{{}, cell.sib});
    }
  }

  for (const auto& [id, actor] : ues_) {
    const auto& spec = *std::find_if(scenario_.ues.begin(), scenario_.ues.end(),
                                     [&](const UeSpec& s) { return s.id == id; });
    if (spec.power_on_ms) schedule(*spec.power_on_ms, event::PowerOn{id});
  }

  using Action = event::AttackerStep::Action;
  if (scenario_.attack) {
    if (const auto* c = std::get_if<CatcherAttack>(&*scenario_.attack)) {
      attack_outcome_ = AttackOutcome{"imsi_catcher", c->plan, {}, {}, {}};
      plan_ = c->plan;
      if (c->auto_discover()) schedule(c->discover_ms, event::AttackerStep{Action::kDiscover});
      schedule(c->deploy_ms, event::AttackerStep{Action::kDeploy});
      schedule(c->jammer_on_ms, event::AttackerStep{Action::kJammerOn});
    } else {
      const auto& r = std::get<RoamingAttack>(*scenario_.attack);
      attack_outcome_ = AttackOutcome{"roaming_catcher", {}, {}, {}, {}};
      schedule(r.deploy_ms, event::AttackerStep{Action::kDeploy});
    }
  }

  for (const auto& ev : scenario_.events) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, script::PowerOn>) {
            schedule(ev.t_ms, event::PowerOn{a.ue});
          } else if constexpr (std::is_same_v<T, script::PowerOff>) {
            schedule(ev.t_ms, event::PowerOff{a.ue});
          } else if constexpr (std::is_same_v<T, script::Reboot>) {
            schedule(ev.t_ms, event::Reboot{a.ue});
          } else if constexpr (std::is_same_v<T, script::JammerToggle>) {
            schedule(ev.t_ms, event::JammerToggle{a.jammer, a.active});
          } else if constexpr (std::is_same_v<T, script::CellAdd>) {
            schedule(ev.t_ms, event::CellAdd{a.cell});
          } else if constexpr (std::is_same_v<T, script::CellRemove>) {
            schedule(ev.t_ms, event::CellRemove{a.cell_id});
          } else if constexpr (std::is_same_v<T, script::SetRplmn>) {
            schedule(ev.t_ms, event::SetRplmn{a.ue, a.plmn});
          } else if constexpr (std::is_same_v<T, script::AttackTeardown>) {
            schedule(ev.t_ms, event::AttackerStep{Action::kTeardown});
          }
        },
        ev.action);
  }
}

void Simulation::schedule(std::int64_t t_ms, EventKind kind) {
  queue_.push(Event{t_ms, next_seq_++, std::move(kind)});
}

void Simulation::run() {
  while (!queue_.empty() && queue_.top().t_ms <= scenario_.end_ms) {
    Event ev = queue_.top();
    queue_.pop();
    now_ = ev.t_ms;
    dispatch(ev);
  }
  now_ = scenario_.end_ms;
}

void Simulation::dispatch(const Event& ev) {
  if (observer_) observer_(ev);
  std::visit([this](const auto& e) { on(e); }, ev.kind);
}

void Simulation::anomaly(const std::string& text) {
  anomalies_.push_back("t=" + std::to_string(now_) + " " + text);
}

void Simulation::record(const std::string& sender, const std::string& receiver,
                        Earfcn earfcn, const EmmMessage& msg,
                        std::optional<std::string> note) {
  trace_.push_back(TraceRecord{now_, sender, receiver, earfcn,
                               to_hex(encode_emm(msg)),
                               std::string(message_name(msg)), std::move(note)});
}

MmeContext& Simulation::mme_for(const Plmn& plmn) {
  auto it = mmes_.find(plmn);
  if (it == mmes_.end()) {
    MmeContext mme{plmn};
    if (auto db = scenario_.hss.find(plmn); db != scenario_.hss.end()) {
      mme.hss = db->second;
    }
    it = mmes_.emplace(plmn, std::move(mme)).first;
  }
  return it->second;
}

void Simulation::update_denial(UeActor& actor, EmmState before) {
  const EmmState after = actor.ctx.emm;
  if (before != EmmState::kServiceDenied && after == EmmState::kServiceDenied) {
    actor.denials.push_back({now_, now_, true});
  } else if (before == EmmState::kServiceDenied &&
             after != EmmState::kServiceDenied && !actor.denials.empty()) {
    actor.denials.back().end_ms = now_;
    actor.denials.back().open = false;
  }
}

void Simulation::send_uplink(const UeActor& actor, const EmmMessage& msg) {
  const CellConfig& cell = *actor.ctx.camped_cell;
  record(ue_node(actor.ctx.id), cell_node(cell.cell_id), cell.earfcn, msg,
         cell.is_rogue ? std::optional<std::string>("rogue") : std::nullopt);
  schedule(now_ + scenario_.defaults.latency_ms,
           event::DeliverMessage{actor.ctx.id, cell.cell_id, true, msg, now_});
}

void Simulation::apply_step(UeActor& actor, UeStep step) {
  actor.ctx = std::move(step.ue);
  if (step.send) send_uplink(actor, *step.send);
}

void Simulation::start_ticks(UeActor& actor) {
  ++actor.generation;
  if (actor.ctx.powered && actor.ctx.emm != EmmState::kServiceDenied) {
    schedule(now_ + actor.ctx.reselection_period_ms,
             event::UeTick{actor.ctx.id, actor.generation});
  }
}

void Simulation::on(const event::PowerOn& e) {
  UeActor& actor = ues_.at(e.ue);
  if (actor.ctx.powered) {
    anomaly("power_on for already powered " + e.ue);
    return;
  }
  const EmmState before = actor.ctx.emm;
  UeContext ctx = std::move(actor.ctx);
  if (actor.ever_powered) {
    // A power cycle clears the invalid-USIM marking exactly like a reboot.
    ctx.usim.invalid_for_service = false;
  }
  actor.ever_powered = true;
  apply_step(actor, power_on(std::move(ctx), scenario_.env));
  update_denial(actor, before);
  start_ticks(actor);
}

void Simulation::on(const event::PowerOff& e) {
  UeActor& actor = ues_.at(e.ue);
  actor.ctx = power_off(std::move(actor.ctx));
  ++actor.generation;
}

void Simulation::on(const event::Reboot& e) {
  UeActor& actor = ues_.at(e.ue);
  const EmmState before = actor.ctx.emm;
  actor.ever_powered = true;
  apply_step(actor, reboot(std::move(actor.ctx), scenario_.env));
  update_denial(actor, before);
  start_ticks(actor);
}

void Simulation::on(const event::UeTick& e) {
  UeActor& actor = ues_.at(e.ue);
  if (e.generation != actor.generation) return;
  if (!actor.ctx.powered || actor.ctx.emm == EmmState::kServiceDenied) return;
  const EmmState before = actor.ctx.emm;
  apply_step(actor, tick(std::move(actor.ctx), scenario_.env));
  update_denial(actor, before);
  schedule(now_ + actor.ctx.reselection_period_ms,
           event::UeTick{actor.ctx.id, actor.generation});
}

void Simulation::on(const event::DeliverMessage& e) {
  if (e.uplink) {
    const Cell* cell = scenario_.env.find_cell(e.cell_id);
    if (!cell) {
      ++dropped_;
      return;
    }
    std::optional<EmmMessage> reply;
    if (cell->config.is_rogue) {
      auto [it, _] = collectors_.try_emplace(e.cell_id, CollectorContext{{}, cell->sib});
      auto out = collector_handle(std::move(it->second), e.msg, now_);
      it->second = std::move(out.ctx);
      reply = std::move(out.reply);
    } else {
      MmeContext& mme = mme_for(cell->config.plmn);
      auto out = legit_mme_handle(std::move(mme), e.msg, cell->config.tac);
      mme = std::move(out.mme);
      reply = std::move(out.reply);
    }
    if (reply) {
      record(cell_node(e.cell_id), ue_node(e.ue), cell->config.earfcn, *reply,
             cell->config.is_rogue ? std::optional<std::string>("rogue")
                                   : std::nullopt);
      schedule(now_ + scenario_.defaults.latency_ms,
               event::DeliverMessage{e.ue, e.cell_id, false, *reply, now_});
    }
    return;
  }

  UeActor& actor = ues_.at(e.ue);
  const UeContext& ctx = actor.ctx;
  if (!ctx.powered || !ctx.camped_cell || ctx.camped_cell->cell_id != e.cell_id) {
    ++dropped_;
    return;
  }
  const EmmState before = ctx.emm;
  const CellConfig serving = *ctx.camped_cell;
  auto out = ue_handle_reply(std::move(actor.ctx), e.msg);
  actor.ctx = std::move(out.ue);
  if (out.anomaly) anomaly(e.ue + ": " + *out.anomaly);

  if (actor.ctx.emm == EmmState::kRegistered && before != EmmState::kRegistered) {
    registrations_.push_back(
        {now_, e.ue, serving.cell_id, serving.plmn,
         std::holds_alternative<emm::TauAccept>(e.msg) ? "tau" : "attach"});
  }
  update_denial(actor, before);
  if (out.response && actor.ctx.camped_cell) send_uplink(actor, *out.response);
}

void Simulation::on(const event::JammerToggle& e) {
  if (JammerConfig* j = scenario_.env.find_jammer(e.jammer)) {
    j->active = e.active;
  } else {
    anomaly("jammer '" + e.jammer + "' is not deployed");
  }
}

void Simulation::on(const event::CellAdd& e) {
  if (e.cell.config.is_rogue) {
    collectors_.try_emplace(e.cell.config.cell_id, CollectorContext{{}, e.cell.sib});
  }
  scenario_.env.upsert_cell(e.cell);
}

void Simulation::on(const event::CellRemove& e) {
  if (!scenario_.env.remove_cell(e.cell_id)) {
    anomaly("cell " + std::to_string(e.cell_id) + " is not on air");
  }
}

void Simulation::on(const event::SetRplmn& e) {
  ues_.at(e.ue).ctx.usim.rplmn = e.plmn;
}

void Simulation::on(const event::AttackerStep& e) {
  using Action = event::AttackerStep::Action;
  const AttackSpec& spec = *scenario_.attack;
  AttackOutcome& outcome = *attack_outcome_;

  auto install = [&](RoguePair pair) {
    const std::uint32_t id = pair.collector.cell.config.cell_id;
    collectors_.try_emplace(id, std::move(pair.collector.ctx));
    scenario_.env.upsert_cell(std::move(pair.collector.cell));
    if (pair.jammer) scenario_.env.upsert_jammer(std::move(*pair.jammer));
    outcome.deployed_ms = now_;
  };

  switch (e.action) {
    case Action::kDiscover: {
      const auto& c = std::get<CatcherAttack>(spec);
      UeContext probe = make_ue("probe", *c.probe, scenario_.defaults.reselection_period_ms);
      try {
        auto result = phase1_discover(scenario_.env, std::move(probe),
                                      DiscoveryOptions{c.jam_penalty_db});
        plan_ = result.plan;
        outcome.plan = result.plan;
      } catch (const DiscoveryFailed& ex) {
        outcome.error = std::string("DiscoveryFailed: ") + ex.what();
      }
      break;
    }
    case Action::kDeploy:
      if (const auto* c = std::get_if<CatcherAttack>(&spec)) {
        if (!plan_) {
          anomaly("IMSI catcher not deployed: no attack plan");
          break;
        }
        install(deploy_imsi_catcher(*plan_, c->collector_rx_power_dbm,
                                    c->collector_cell_id, c->jam_penalty_db,
                                    scenario_.defaults.q_rxlevmin_dbm));
      } else {
        const auto& r = std::get<RoamingAttack>(spec);
        install(deploy_roaming_catcher(r.home_plmn, r.earfcn, r.tac,
                                       r.collector_rx_power_dbm,
                                       r.collector_cell_id,
                                       scenario_.defaults.q_rxlevmin_dbm));
      }
      break;
    case Action::kJammerOn:
      if (JammerConfig* j = scenario_.env.find_jammer(kAttackJammerId)) {
        j->active = true;
        outcome.jammer_on_ms = now_;
      }
      break;
    case Action::kTeardown: {
      std::uint32_t id = std::visit([](const auto& a) { return a.collector_cell_id; }, spec);
      scenario_.env.remove_cell(id);
      std::erase_if(scenario_.env.jammers,
                    [](const JammerConfig& j) { return j.id == kAttackJammerId; });
      break;
    }
  }
}

SimReport Simulation::report() const {
  SimReport r;
  r.config = defaults_json(scenario_);
  for (const auto& [id, ctx] : collectors_) {
    r.captures.push_back({id, ctx.captures});
  }
  for (const auto& [id, actor] : ues_) {
    auto& intervals = r.denial_intervals[id];
    intervals = actor.denials;
    for (auto& d : intervals) {
      if (d.open) d.end_ms = now_;
    }
    const UeContext& u = actor.ctx;
    UeFinalState s{id, u.emm, u.powered};
    if (u.camped_cell) s.camped_cell = u.camped_cell->cell_id;
    s.rplmn = u.usim.rplmn;
    s.guti = u.guti;
    s.invalid_for_service = u.usim.invalid_for_service;
    r.final_states.push_back(std::move(s));
  }
  r.registrations = registrations_;
  r.attack = attack_outcome_;
  r.trace_length = trace_.size();
  r.dropped_messages = dropped_;
  r.anomalies = anomalies_;
  return r;
}

RunResult run(const Scenario& scenario) {
  Simulation sim(scenario);
  sim.run();
  return {sim.trace(), sim.report()};
}

}  // namespace ltecatch
