/* SPDX-License-Identifier: Apache-2.0 */

// Scenario documents (JSON). Top-level sections: cells, jammers,
// priority_map, ues, attack, events, end_ms, seed, plus optional defaults
// and hss. Unknown keys are rejected so typos surface as errors.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ltecatch/attacker.hpp"
#include "ltecatch/nas_core.hpp"
#include "ltecatch/radio_env.hpp"
#include "ltecatch/usim.hpp"

#include <json.hpp>

namespace ltecatch {

/// Validation failure; `path` is a JSON-pointer-like location, e.g.
/// "/priority_map/6300".
class ScenarioError : public std::runtime_error {
 public:
  ScenarioError(std::string path, const std::string& reason)
      : std::runtime_error(path.empty() ? reason : path + ": " + reason),
        path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct SimDefaults {
  double q_rxlevmin_dbm = -110.0;
  double hysteresis_db = 3.0;
  std::int64_t latency_ms = 50;
  std::int64_t reselection_period_ms = 200;
  double jam_penalty_db = kDefaultJamPenaltyDb;
};

struct UeSpec {
  std::string id;
  UsimProfile usim;
  std::int64_t reselection_period_ms = 200;
  /// nullopt: stays off until a scripted power_on.
  std::optional<std::int64_t> power_on_ms = 0;
};

struct CatcherAttack {
  /// Either given directly or discovered at discover_ms.
  std::optional<AttackPlan> plan;
  std::optional<UsimProfile> probe;
  std::uint32_t collector_cell_id = 0;
  double collector_rx_power_dbm = 0.0;
  std::int64_t discover_ms = 0;
  std::int64_t deploy_ms = 0;
  std::int64_t jammer_on_ms = 0;
  double jam_penalty_db = kDefaultJamPenaltyDb;

  bool auto_discover() const { return !plan.has_value(); }
};

struct RoamingAttack {
  Plmn home_plmn;
  Earfcn earfcn;
  std::uint16_t tac = 0;
  std::uint32_t collector_cell_id = 0;
  double collector_rx_power_dbm = 0.0;
  std::int64_t deploy_ms = 0;
};

using AttackSpec = std::variant<CatcherAttack, RoamingAttack>;

namespace script {
struct PowerOn { std::string ue; };
struct PowerOff { std::string ue; };
struct Reboot { std::string ue; };
struct JammerToggle { std::string jammer; bool active = true; };
struct CellAdd { Cell cell; };
struct CellRemove { std::uint32_t cell_id = 0; };
/// Stand-in for a registration on another RAT: sets the USIM's RPLMN.
struct SetRplmn { std::string ue; Plmn plmn; };
struct AttackTeardown {};
}  // namespace script

using ScriptAction =
    std::variant<script::PowerOn, script::PowerOff, script::Reboot,
                 script::JammerToggle, script::CellAdd, script::CellRemove,
                 script::SetRplmn, script::AttackTeardown>;

struct ScriptedEvent {
  std::int64_t t_ms = 0;
  ScriptAction action;
};

struct Scenario {
  RadioEnvironment env;
  SimDefaults defaults;
  std::vector<UeSpec> ues;
  /// Subscribers per legitimate PLMN.
  std::map<Plmn, HssDatabase> hss;
  std::optional<AttackSpec> attack;
  std::vector<ScriptedEvent> events;
  std::int64_t end_ms = 0;
  std::uint64_t seed = 0;
};

Scenario load_scenario(const nlohmann::json& doc);
/// Throws ScenarioIoError when the file cannot be read, ScenarioError for
/// invalid JSON or content problems.
Scenario load_scenario_file(const std::filesystem::path& path);

/// The scenario file could not be read.
class ScenarioIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The resolved defaults, as echoed into reports and by `validate`.
nlohmann::ordered_json defaults_json(const Scenario& scenario);

}  // namespace ltecatch
