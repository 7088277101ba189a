/* SPDX-License-Identifier: Apache-2.0 */

#include "ltecatch/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>

namespace ltecatch {

using nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& key) {
  return path + "/" + key;
}
std::string child(const std::string& path, std::size_t index) {
  return path + "/" + std::to_string(index);
}

std::int64_t as_int(const json& j, const std::string& path, std::int64_t lo,
                    std::int64_t hi) {
  if (!j.is_number_integer()) throw ScenarioError(path, "expected an integer");
  std::int64_t v = 0;
  if (j.is_number_unsigned()) {
    auto u = j.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
      throw ScenarioError(path, "integer out of range");
    }
    v = static_cast<std::int64_t>(u);
  } else {
    v = j.get<std::int64_t>();
  }
  if (v < lo || v > hi) {
    throw ScenarioError(path, "value " + std::to_string(v) + " outside [" +
                                  std::to_string(lo) + ", " +
                                  std::to_string(hi) + "]");
  }
  return v;
}

double as_real(const json& j, const std::string& path) {
  if (!j.is_number()) throw ScenarioError(path, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) throw ScenarioError(path, "must be finite");
  return v;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ScenarioError(path, "expected a string");
  return j.get<std::string>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) throw ScenarioError(path, "expected true or false");
  return j.get<bool>();
}

Plmn as_plmn(const json& j, const std::string& path) {
  try {
    return Plmn::parse(as_string(j, path));
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(path, e.what());
  }
}

Imsi as_imsi(const json& j, const std::string& path) {
  try {
    return Imsi(as_string(j, path));
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(path, e.what());
  }
}

Earfcn as_earfcn(const json& j, const std::string& path) {
  return Earfcn{static_cast<std::uint32_t>(
      as_int(j, path, 0, std::numeric_limits<std::uint32_t>::max()))};
}

std::uint16_t as_tac(const json& j, const std::string& path) {
  return static_cast<std::uint16_t>(as_int(j, path, 0, 0xFFFF));
}

std::uint32_t as_cell_id(const json& j, const std::string& path) {
  return static_cast<std::uint32_t>(
      as_int(j, path, 0, std::numeric_limits<std::uint32_t>::max()));
}

// An object whose keys are checked off as they are read.
class Fields {
 public:
  Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ScenarioError(path_, "expected an object");
  }

  const json* optional(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& required(const std::string& key) {
    if (const json* v = optional(key)) return *v;
    throw ScenarioError(child(path_, key), "missing required field");
  }

  std::string at(const std::string& key) const { return child(path_, key); }

  /// Rejects keys nobody asked for.
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) {
        throw ScenarioError(child(path_, it.key()), "unknown field");
      }
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

PriorityMap parse_priorities(const json& j, const std::string& path) {
  if (!j.is_object()) throw ScenarioError(path, "expected an object");
  PriorityMap out;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string at = child(path, it.key());
    std::uint64_t channel = 0;
    try {
      std::size_t used = 0;
      channel = std::stoull(it.key(), &used);
      if (used != it.key().size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ScenarioError(at, "EARFCN key must be a non-negative integer");
    }
    if (channel > std::numeric_limits<std::uint32_t>::max()) {
      throw ScenarioError(at, "EARFCN out of range");
    }
    out[Earfcn{static_cast<std::uint32_t>(channel)}] =
        static_cast<int>(as_int(*it, at, kMinPriority, kMaxPriority));
  }
  return out;
}

Cell parse_cell(const json& j, const std::string& path,
                const PriorityMap& area_priorities,
                const SimDefaults& defaults) {
  Fields f(j, path);
  CellConfig cfg{as_cell_id(f.required("id"), f.at("id")),
                 as_plmn(f.required("plmn"), f.at("plmn")),
                 as_tac(f.required("tac"), f.at("tac")),
                 as_earfcn(f.required("earfcn"), f.at("earfcn")),
                 as_real(f.required("rx_power_dbm"), f.at("rx_power_dbm"))};
  if (const json* v = f.optional("rogue")) cfg.is_rogue = as_bool(*v, f.at("rogue"));

  double q_rxlevmin = defaults.q_rxlevmin_dbm;
  if (const json* v = f.optional("q_rxlevmin_dbm")) {
    q_rxlevmin = as_real(*v, f.at("q_rxlevmin_dbm"));
  }
  PriorityMap sib_priorities = area_priorities;
  if (const json* v = f.optional("priority_overrides")) {
    for (const auto& [earfcn, prio] :
         parse_priorities(*v, f.at("priority_overrides"))) {
      sib_priorities[earfcn] = prio;
    }
  }
  f.finish();
  return make_cell(std::move(cfg), std::move(sib_priorities), q_rxlevmin);
}

SimDefaults parse_defaults(const json* j, const std::string& path) {
  SimDefaults d;
  if (!j) return d;
  Fields f(*j, path);
  if (const json* v = f.optional("q_rxlevmin_dbm")) {
    d.q_rxlevmin_dbm = as_real(*v, f.at("q_rxlevmin_dbm"));
  }
  if (const json* v = f.optional("hysteresis_db")) {
    d.hysteresis_db = as_real(*v, f.at("hysteresis_db"));
    if (d.hysteresis_db < 0) throw ScenarioError(f.at("hysteresis_db"), "must be >= 0");
  }
  if (const json* v = f.optional("latency_ms")) {
    d.latency_ms = as_int(*v, f.at("latency_ms"), 0, 3'600'000);
  }
  if (const json* v = f.optional("reselection_period_ms")) {
    d.reselection_period_ms = as_int(*v, f.at("reselection_period_ms"), 1, 3'600'000);
  }
  if (const json* v = f.optional("jam_penalty_db")) {
    d.jam_penalty_db = as_real(*v, f.at("jam_penalty_db"));
    if (d.jam_penalty_db <= 0) throw ScenarioError(f.at("jam_penalty_db"), "must be > 0");
  }
  f.finish();
  return d;
}

UsimProfile parse_usim(Fields& f) {
  Imsi imsi = as_imsi(f.required("imsi"), f.at("imsi"));
  Plmn hplmn = as_plmn(f.required("hplmn"), f.at("hplmn"));
  if (!imsi.belongs_to(hplmn)) {
    throw ScenarioError(f.at("imsi"), "IMSI does not start with HPLMN " +
                                          hplmn.digits());
  }
  return make_usim(std::move(imsi), std::move(hplmn));
}

struct Collector {
  std::uint32_t cell_id;
  double rx_power_dbm;
};

Collector parse_collector(const json& j, const std::string& path) {
  Fields f(j, path);
  Collector c{as_cell_id(f.required("cell_id"), f.at("cell_id")),
              as_real(f.required("rx_power_dbm"), f.at("rx_power_dbm"))};
  f.finish();
  return c;
}

AttackSpec parse_attack(const json& j, const std::string& path,
                        const SimDefaults& defaults, std::int64_t end_ms) {
  Fields f(j, path);
  const std::string type = as_string(f.required("type"), f.at("type"));
  auto time_field = [&](const char* key) {
    return as_int(f.required(key), f.at(key), 0, end_ms);
  };

  if (type == "roaming_catcher") {
    Collector c = parse_collector(f.required("collector"), f.at("collector"));
    RoamingAttack a{as_plmn(f.required("home_plmn"), f.at("home_plmn")),
                    as_earfcn(f.required("earfcn"), f.at("earfcn")),
                    as_tac(f.required("tac"), f.at("tac")),
                    c.cell_id,
                    c.rx_power_dbm,
                    time_field("deploy_ms")};
    f.finish();
    return a;
  }
  if (type != "imsi_catcher") {
    throw ScenarioError(f.at("type"),
                        "expected \"imsi_catcher\" or \"roaming_catcher\"");
  }

  CatcherAttack a;
  bool auto_discover = false;
  if (const json* v = f.optional("auto_discover")) {
    auto_discover = as_bool(*v, f.at("auto_discover"));
  }
  const json* plan = f.optional("plan");
  const json* probe = f.optional("probe");
  if (auto_discover) {
    if (plan) throw ScenarioError(f.at("plan"), "not allowed with auto_discover");
    if (!probe) throw ScenarioError(f.at("probe"), "required with auto_discover");
    Fields pf(*probe, f.at("probe"));
    a.probe = parse_usim(pf);
    pf.finish();
  } else {
    if (!plan) throw ScenarioError(f.at("plan"), "required unless auto_discover is true");
    if (probe) throw ScenarioError(f.at("probe"), "only used with auto_discover");
    Fields pf(*plan, f.at("plan"));
    Plmn target = as_plmn(pf.required("target_plmn"), pf.at("target_plmn"));
    Earfcn jam = as_earfcn(pf.required("jam_earfcn"), pf.at("jam_earfcn"));
    Earfcn coll = as_earfcn(pf.required("collector_earfcn"), pf.at("collector_earfcn"));
    std::uint16_t tac = as_tac(pf.required("commercial_tac"), pf.at("commercial_tac"));
    if (jam == coll) {
      throw ScenarioError(pf.at("collector_earfcn"), "must differ from jam_earfcn");
    }
    a.plan = make_attack_plan(std::move(target), jam, coll, tac);
    if (const json* v = pf.optional("collector_tac")) {
      if (as_tac(*v, pf.at("collector_tac")) != a.plan->collector_tac) {
        throw ScenarioError(pf.at("collector_tac"), "must equal commercial_tac + 1");
      }
    }
    pf.finish();
  }

  Collector c = parse_collector(f.required("collector"), f.at("collector"));
  a.collector_cell_id = c.cell_id;
  a.collector_rx_power_dbm = c.rx_power_dbm;
  a.deploy_ms = time_field("deploy_ms");
  a.discover_ms = a.deploy_ms;
  if (const json* v = f.optional("discover_ms")) {
    a.discover_ms = as_int(*v, f.at("discover_ms"), 0, a.deploy_ms);
  }
  a.jammer_on_ms = a.deploy_ms;
  if (const json* v = f.optional("jammer_on_ms")) {
    a.jammer_on_ms = as_int(*v, f.at("jammer_on_ms"), a.deploy_ms, end_ms);
  }
  a.jam_penalty_db = defaults.jam_penalty_db;
  if (const json* v = f.optional("jam_penalty_db")) {
    a.jam_penalty_db = as_real(*v, f.at("jam_penalty_db"));
    if (a.jam_penalty_db <= 0) throw ScenarioError(f.at("jam_penalty_db"), "must be > 0");
  }
  f.finish();
  return a;
}

}  // namespace

Scenario load_scenario(const json& doc) {
  Fields top(doc, "");
  Scenario sc;

  sc.end_ms = as_int(top.required("end_ms"), "/end_ms", 1,
                     std::numeric_limits<std::int64_t>::max() / 2);
  if (const json* v = top.optional("seed")) {
    sc.seed = static_cast<std::uint64_t>(
        as_int(*v, "/seed", 0, std::numeric_limits<std::int64_t>::max()));
  }
  sc.defaults = parse_defaults(top.optional("defaults"), "/defaults");
  sc.env.params = {sc.defaults.q_rxlevmin_dbm, sc.defaults.hysteresis_db};

  if (const json* v = top.optional("priority_map")) {
    sc.env.priority_map = parse_priorities(*v, "/priority_map");
  }

  std::set<std::uint32_t> cell_ids;
  std::set<Plmn> legit_plmns;
  if (const json* v = top.optional("cells")) {
    if (!v->is_array()) throw ScenarioError("/cells", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string at = child("/cells", i);
      Cell cell = parse_cell((*v)[i], at, sc.env.priority_map, sc.defaults);
      if (!cell_ids.insert(cell.config.cell_id).second) {
        throw ScenarioError(child(at, "id"), "duplicate cell id " +
                                                 std::to_string(cell.config.cell_id));
      }
      if (!cell.config.is_rogue) legit_plmns.insert(cell.config.plmn);
      sc.env.cells.push_back(std::move(cell));
    }
  }

  std::set<std::string> jammer_ids;
  if (const json* v = top.optional("jammers")) {
    if (!v->is_array()) throw ScenarioError("/jammers", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string at = child("/jammers", i);
      Fields f((*v)[i], at);
      JammerConfig jam{as_string(f.required("id"), f.at("id")),
                       as_earfcn(f.required("earfcn"), f.at("earfcn")),
                       sc.defaults.jam_penalty_db, false};
      if (const json* p = f.optional("jam_penalty_db")) {
        jam.jam_penalty_db = as_real(*p, f.at("jam_penalty_db"));
        if (jam.jam_penalty_db <= 0) {
          throw ScenarioError(f.at("jam_penalty_db"), "must be > 0");
        }
      }
      if (const json* a = f.optional("active")) jam.active = as_bool(*a, f.at("active"));
      f.finish();
      if (jam.id.empty() || jam.id == kAttackJammerId ||
          !jammer_ids.insert(jam.id).second) {
        throw ScenarioError(f.at("id"), "empty, reserved or duplicate jammer id");
      }
      sc.env.jammers.push_back(std::move(jam));
    }
  }

  std::set<std::string> ue_ids;
  std::vector<Imsi> probe_imsis;
  if (const json* v = top.optional("ues")) {
    if (!v->is_array()) throw ScenarioError("/ues", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string at = child("/ues", i);
      Fields f((*v)[i], at);
      UeSpec ue{as_string(f.required("id"), f.at("id")), parse_usim(f),
                sc.defaults.reselection_period_ms};
      if (ue.id.empty() || !ue_ids.insert(ue.id).second) {
        throw ScenarioError(f.at("id"), "empty or duplicate UE id");
      }
      if (const json* r = f.optional("rplmn")) ue.usim.rplmn = as_plmn(*r, f.at("rplmn"));
      if (const json* r = f.optional("roaming_enabled")) {
        ue.usim.roaming_enabled = as_bool(*r, f.at("roaming_enabled"));
      }
      if (const json* r = f.optional("invalid_for_service")) {
        ue.usim.invalid_for_service = as_bool(*r, f.at("invalid_for_service"));
      }
      if (const json* r = f.optional("reselection_period_ms")) {
        ue.reselection_period_ms = as_int(*r, f.at("reselection_period_ms"), 1, 3'600'000);
      }
      if (const json* r = f.optional("power_on_ms")) {
        if (r->is_null()) {
          ue.power_on_ms.reset();
        } else {
          ue.power_on_ms = as_int(*r, f.at("power_on_ms"), 0, sc.end_ms);
        }
      }
      f.finish();
      sc.ues.push_back(std::move(ue));
    }
  }

  std::set<std::uint32_t> attack_cells;
  if (const json* v = top.optional("attack")) {
    sc.attack = parse_attack(*v, "/attack", sc.defaults, sc.end_ms);
    std::uint32_t cid = std::visit([](const auto& a) { return a.collector_cell_id; },
                                   *sc.attack);
    if (cell_ids.contains(cid)) {
      throw ScenarioError("/attack/collector/cell_id",
                          "collides with cell " + std::to_string(cid));
    }
    attack_cells.insert(cid);
    if (auto* c = std::get_if<CatcherAttack>(&*sc.attack); c && c->probe) {
      probe_imsis.push_back(c->probe->imsi);
    }
  }

  std::set<std::uint32_t> known_cells = cell_ids;
  known_cells.insert(attack_cells.begin(), attack_cells.end());
  if (const json* v = top.optional("events")) {
    if (!v->is_array()) throw ScenarioError("/events", "expected an array");
    for (std::size_t i = 0; i < v->size(); ++i) {
      const std::string at = child("/events", i);
      Fields f((*v)[i], at);
      ScriptedEvent ev;
      ev.t_ms = as_int(f.required("t_ms"), f.at("t_ms"), 0, sc.end_ms);
      const std::string kind = as_string(f.required("kind"), f.at("kind"));
      auto ue_ref = [&] {
        std::string id = as_string(f.required("ue"), f.at("ue"));
        if (!ue_ids.contains(id)) throw ScenarioError(f.at("ue"), "unknown UE '" + id + "'");
        return id;
      };
      if (kind == "power_on") {
        ev.action = script::PowerOn{ue_ref()};
      } else if (kind == "power_off") {
        ev.action = script::PowerOff{ue_ref()};
      } else if (kind == "reboot") {
        ev.action = script::Reboot{ue_ref()};
      } else if (kind == "jammer_toggle") {
        std::string id = as_string(f.required("jammer"), f.at("jammer"));
        const bool attack_jammer = id == kAttackJammerId && sc.attack &&
                                   std::holds_alternative<CatcherAttack>(*sc.attack);
        if (!jammer_ids.contains(id) && !attack_jammer) {
          throw ScenarioError(f.at("jammer"), "unknown jammer '" + id + "'");
        }
        bool active = as_bool(f.required("active"), f.at("active"));
        ev.action = script::JammerToggle{std::move(id), active};
      } else if (kind == "cell_add") {
        Cell cell = parse_cell(f.required("cell"), f.at("cell"),
                               sc.env.priority_map, sc.defaults);
        if (attack_cells.contains(cell.config.cell_id)) {
          throw ScenarioError(f.at("cell") + "/id", "reserved for the attack collector");
        }
        known_cells.insert(cell.config.cell_id);
        if (!cell.config.is_rogue) legit_plmns.insert(cell.config.plmn);
        ev.action = script::CellAdd{std::move(cell)};
      } else if (kind == "cell_remove") {
        auto id = as_cell_id(f.required("cell"), f.at("cell"));
        if (!known_cells.contains(id)) {
          throw ScenarioError(f.at("cell"), "unknown cell " + std::to_string(id));
        }
        ev.action = script::CellRemove{id};
      } else if (kind == "set_rplmn") {
        std::string id = ue_ref();
        ev.action = script::SetRplmn{std::move(id), as_plmn(f.required("plmn"), f.at("plmn"))};
      } else if (kind == "attack_teardown") {
        if (!sc.attack) throw ScenarioError(f.at("kind"), "no attack declared");
        ev.action = script::AttackTeardown{};
      } else {
        throw ScenarioError(f.at("kind"), "unknown event kind '" + kind + "'");
      }
      f.finish();
      sc.events.push_back(std::move(ev));
    }
  }

  // Subscribers: explicit per PLMN, otherwise home subscribers plus every
  // roaming-enabled USIM.
  std::map<Plmn, HssDatabase> explicit_hss;
  if (const json* v = top.optional("hss")) {
    if (!v->is_object()) throw ScenarioError("/hss", "expected an object");
    for (auto it = v->begin(); it != v->end(); ++it) {
      const std::string at = child("/hss", it.key());
      Plmn plmn = [&] {
        try {
          return Plmn::parse(it.key());
        } catch (const std::invalid_argument& e) {
          throw ScenarioError(at, e.what());
        }
      }();
      if (!it->is_array()) throw ScenarioError(at, "expected an array of IMSIs");
      HssDatabase db;
      for (std::size_t i = 0; i < it->size(); ++i) {
        db.insert(as_imsi((*it)[i], child(at, i)));
      }
      explicit_hss[plmn] = std::move(db);
    }
  }
  for (const auto& plmn : legit_plmns) {
    if (auto it = explicit_hss.find(plmn); it != explicit_hss.end()) {
      sc.hss[plmn] = it->second;
      continue;
    }
    HssDatabase& db = sc.hss[plmn];
    for (const auto& ue : sc.ues) {
      if (ue.usim.imsi.belongs_to(plmn) || ue.usim.roaming_enabled) {
        db.insert(ue.usim.imsi);
      }
    }
    for (const auto& imsi : probe_imsis) {
      if (imsi.belongs_to(plmn)) db.insert(imsi);
    }
  }
  for (auto& [plmn, db] : explicit_hss) sc.hss.try_emplace(plmn, std::move(db));

  top.finish();
  return sc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioIoError("cannot read scenario file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ScenarioError("", std::string("invalid JSON: ") + e.what());
  }
  return load_scenario(doc);
}

nlohmann::ordered_json defaults_json(const Scenario& sc) {
  nlohmann::ordered_json j;
  j["end_ms"] = sc.end_ms;
  j["seed"] = sc.seed;
  j["q_rxlevmin_dbm"] = sc.defaults.q_rxlevmin_dbm;
  j["hysteresis_db"] = sc.defaults.hysteresis_db;
  j["latency_ms"] = sc.defaults.latency_ms;
  j["reselection_period_ms"] = sc.defaults.reselection_period_ms;
  j["jam_penalty_db"] = sc.defaults.jam_penalty_db;
  return j;
}

}  // namespace ltecatch
