/* SPDX-License-Identifier: Apache-2.0 */

// Single-threaded discrete-event engine. Time is integer milliseconds;
// events are totally ordered by (t_ms, seq) where seq is the scheduling
// order. Every NAS message goes through encode_emm before it is traced.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <string>
#include <variant>
#include <vector>

#include "ltecatch/attacker.hpp"
#include "ltecatch/nas_core.hpp"
#include "ltecatch/scenario.hpp"
#include "ltecatch/ue_context.hpp"
#include "ltecatch/ue_model.hpp"

namespace ltecatch {

namespace event {
struct PowerOn { std::string ue; };
struct PowerOff { std::string ue; };
struct Reboot { std::string ue; };
struct DeliverMessage {
  std::string ue;
  std::uint32_t cell_id = 0;
  /// UE -> cell when true.
  bool uplink = true;
  EmmMessage msg;
  std::int64_t sent_ms = 0;
};
struct JammerToggle { std::string jammer; bool active = true; };
struct CellAdd { Cell cell; };
struct CellRemove { std::uint32_t cell_id = 0; };
struct SetRplmn { std::string ue; Plmn plmn; };
struct UeTick {
  std::string ue;
  /// Ticks from an earlier power cycle are stale.
  std::uint64_t generation = 0;
};
struct AttackerStep {
  enum class Action { kDiscover, kDeploy, kJammerOn, kTeardown };
  Action action = Action::kDeploy;
};
}  // namespace event

using EventKind =
    std::variant<event::PowerOn, event::PowerOff, event::Reboot,
                 event::DeliverMessage, event::JammerToggle, event::CellAdd,
                 event::CellRemove, event::SetRplmn, event::UeTick,
                 event::AttackerStep>;

struct Event {
  std::int64_t t_ms = 0;
  std::uint64_t seq = 0;
  EventKind kind;
};

struct TraceRecord {
  std::int64_t t_ms = 0;
  std::string sender;
  std::string receiver;
  Earfcn earfcn;
  std::string hex;
  std::string decoded;
  std::optional<std::string> note;

  bool operator==(const TraceRecord&) const = default;
};

using SimTrace = std::vector<TraceRecord>;

std::string ue_node(const std::string& ue_id);
std::string cell_node(std::uint32_t cell_id);

struct DenialInterval {
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  /// Still denied when the run ended (end_ms is then the run's end).
  bool open = false;
};

struct RegistrationEvent {
  std::int64_t t_ms = 0;
  std::string ue;
  std::uint32_t cell_id = 0;
  Plmn plmn;
  /// "attach" or "tau".
  std::string kind;
};

struct CaptureReport {
  std::uint32_t collector_cell = 0;
  std::vector<Capture> captures;
};

struct UeFinalState {
  std::string id;
  EmmState emm = EmmState::kDeregistered;
  bool powered = false;
  std::optional<std::uint32_t> camped_cell;
  std::optional<Plmn> rplmn;
  std::optional<Guti> guti;
  bool invalid_for_service = false;
};

struct AttackOutcome {
  std::string type;
  std::optional<AttackPlan> plan;
  /// DiscoveryFailed text when phase 1 did not produce a plan.
  std::optional<std::string> error;
  std::optional<std::int64_t> deployed_ms;
  std::optional<std::int64_t> jammer_on_ms;
};

struct SimReport {
  nlohmann::ordered_json config;
  std::vector<CaptureReport> captures;
  std::map<std::string, std::vector<DenialInterval>> denial_intervals;
  std::vector<UeFinalState> final_states;
  std::vector<RegistrationEvent> registrations;
  std::optional<AttackOutcome> attack;
  std::size_t trace_length = 0;
  std::size_t dropped_messages = 0;
  std::vector<std::string> anomalies;

  std::size_t capture_count() const;
};

class Simulation {
 public:
  explicit Simulation(Scenario scenario);

  /// Called for every event just before it is processed.
  void set_observer(std::function<void(const Event&)> observer) {
    observer_ = std::move(observer);
  }

  /// Processes events in (t_ms, seq) order up to and including end_ms.
  void run();

  const SimTrace& trace() const { return trace_; }
  SimReport report() const;

  const RadioEnvironment& environment() const { return scenario_.env; }
  const UeContext& ue(const std::string& id) const { return ues_.at(id).ctx; }
  std::int64_t now() const { return now_; }

 private:
  struct UeActor {
    UeContext ctx;
    std::uint64_t generation = 0;
    bool ever_powered = false;
    std::vector<DenialInterval> denials;
  };

  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.t_ms != b.t_ms ? a.t_ms > b.t_ms : a.seq > b.seq;
    }
  };

  void schedule(std::int64_t t_ms, EventKind kind);
  void dispatch(const Event& ev);

  void on(const event::PowerOn& e);
  void on(const event::PowerOff& e);
  void on(const event::Reboot& e);
  void on(const event::DeliverMessage& e);
  void on(const event::JammerToggle& e);
  void on(const event::CellAdd& e);
  void on(const event::CellRemove& e);
  void on(const event::SetRplmn& e);
  void on(const event::UeTick& e);
  void on(const event::AttackerStep& e);

  void apply_step(UeActor& actor, UeStep step);
  void start_ticks(UeActor& actor);
  void update_denial(UeActor& actor, EmmState before);
  void send_uplink(const UeActor& actor, const EmmMessage& msg);
  void record(const std::string& sender, const std::string& receiver,
              Earfcn earfcn, const EmmMessage& msg,
              std::optional<std::string> note);
  MmeContext& mme_for(const Plmn& plmn);
  void anomaly(const std::string& text);

  Scenario scenario_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  std::int64_t now_ = 0;

  std::map<std::string, UeActor> ues_;
  std::map<Plmn, MmeContext> mmes_;
  std::map<std::uint32_t, CollectorContext> collectors_;
  SimTrace trace_;

  std::vector<RegistrationEvent> registrations_;
  std::optional<AttackOutcome> attack_outcome_;
  std::optional<AttackPlan> plan_;
  std::size_t dropped_ = 0;
  std::vector<std::string> anomalies_;

  std::function<void(const Event&)> observer_;
};

struct RunResult {
  SimTrace trace;
  SimReport report;
};

RunResult run(const Scenario& scenario);

}  // namespace ltecatch
