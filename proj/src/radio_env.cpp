/* SPDX-License-Identifier: Apache-2.0 */

#include "ltecatch/radio_env.hpp"

#include <algorithm>
#include <stdexcept>

namespace ltecatch {

UsimProfile make_usim(Imsi imsi, Plmn hplmn) {
  if (!imsi.belongs_to(hplmn)) {
    throw std::invalid_argument("IMSI " + imsi.digits() +
                                " does not belong to HPLMN " +
                                hplmn.to_string());
  }
  return UsimProfile{std::move(imsi), std::move(hplmn)};
}

int priority_of(const PriorityMap& priorities, Earfcn earfcn) {
  auto it = priorities.find(earfcn);
  return it == priorities.end() ? kUnlistedPriority : it->second;
}

Cell make_cell(CellConfig config, PriorityMap priorities,
               double q_rxlevmin_dbm) {
  SibPayload sib{config.plmn, config.tac, config.cell_id,
                 std::move(priorities), q_rxlevmin_dbm};
  return Cell{std::move(config), std::move(sib)};
}

const Cell* RadioEnvironment::find_cell(std::uint32_t cell_id) const {
  auto it = std::find_if(cells.begin(), cells.end(), [&](const Cell& c) {
    return c.config.cell_id == cell_id;
  });
  return it == cells.end() ? nullptr : &*it;
}

void RadioEnvironment::upsert_cell(Cell cell) {
  for (auto& c : cells) {
    if (c.config.cell_id == cell.config.cell_id) {
      c = std::move(cell);
      return;
    }
  }
  cells.push_back(std::move(cell));
}

bool RadioEnvironment::remove_cell(std::uint32_t cell_id) {
  return std::erase_if(cells, [&](const Cell& c) {
           return c.config.cell_id == cell_id;
         }) > 0;
}

JammerConfig* RadioEnvironment::find_jammer(const std::string& id) {
  auto it = std::find_if(jammers.begin(), jammers.end(),
                         [&](const JammerConfig& j) { return j.id == id; });
  return it == jammers.end() ? nullptr : &*it;
}

void RadioEnvironment::upsert_jammer(JammerConfig jammer) {
  if (auto* existing = find_jammer(jammer.id)) {
    *existing = std::move(jammer);
  } else {
    jammers.push_back(std::move(jammer));
  }
}

double effective_power(const CellConfig& cell,
                       std::span<const JammerConfig> jammers) {
  double power = cell.rx_power_dbm;
  for (const auto& j : jammers) {
    if (j.active && j.earfcn == cell.earfcn) {
      power -= j.jam_penalty_db;
    }
  }
  return power;
}

RadioSnapshot snapshot(const RadioEnvironment& env, std::int64_t t_ms) {
  RadioSnapshot snap;
  snap.timestamp_ms = t_ms;
  for (const auto& c : env.cells) {
    snap.power_dbm[c.config.cell_id] = effective_power(c.config, env.jammers);
  }
  return snap;
}

std::vector<CandidateCell> suitable_cells(const RadioEnvironment& env,
                                          const Plmn& plmn) {
  return suitable_cells(env, plmn, env.priority_map);
}

std::vector<CandidateCell> suitable_cells(const RadioEnvironment& env,
                                          const Plmn& plmn,
                                          const PriorityMap& priorities) {
  std::vector<CandidateCell> out;
  for (const auto& c : env.cells) {
    if (c.config.plmn != plmn) continue;
    const double power = effective_power(c.config, env.jammers);
    if (power < c.sib.q_rxlevmin_dbm) continue;
    out.push_back({c.config, power, priority_of(priorities, c.config.earfcn)});
  }
  std::sort(out.begin(), out.end(),
            [](const CandidateCell& a, const CandidateCell& b) {
              if (a.priority != b.priority) return a.priority > b.priority;
              if (a.power_dbm != b.power_dbm) return a.power_dbm > b.power_dbm;
              return a.cell.cell_id < b.cell.cell_id;
            });
  return out;
}

std::optional<CellSelection> select_plmn_and_cell(const UsimProfile& usim,
                                                  const RadioEnvironment& env) {
  if (usim.invalid_for_service) return std::nullopt;

  auto allowed = [&](const Plmn& p) {
    return usim.roaming_enabled || p == usim.hplmn;
  };

  std::vector<Plmn> order;
  auto add = [&](const Plmn& p) {
    if (allowed(p) && std::find(order.begin(), order.end(), p) == order.end()) {
      order.push_back(p);
    }
  };
  if (usim.rplmn) add(*usim.rplmn);
  add(usim.hplmn);

  // Remaining visible PLMNs, strongest suitable cell first.
  std::map<Plmn, double> best;
  for (const auto& c : env.cells) {
    const double power = effective_power(c.config, env.jammers);
    if (power < c.sib.q_rxlevmin_dbm) continue;
    auto [it, fresh] = best.try_emplace(c.config.plmn, power);
    if (!fresh) it->second = std::max(it->second, power);
  }
  std::vector<std::pair<Plmn, double>> others(best.begin(), best.end());
  std::stable_sort(others.begin(), others.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  for (const auto& [p, _] : others) add(p);

  for (const auto& p : order) {
    auto cells = suitable_cells(env, p);
    if (!cells.empty()) {
      return CellSelection{p, std::move(cells.front().cell)};
    }
  }
  return std::nullopt;
}

ReselectionDecision evaluate_reselection(const CellConfig& serving,
                                         const RadioEnvironment& env) {
  const Cell* on_air = env.find_cell(serving.cell_id);
  const PriorityMap& priorities =
      on_air ? on_air->sib.priority_map : env.priority_map;

  auto ranked = suitable_cells(env, serving.plmn, priorities);
  if (ranked.empty()) return reselection::NoService{};

  const CandidateCell& head = ranked.front();
  auto self = std::find_if(ranked.begin(), ranked.end(), [&](const auto& c) {
    return c.cell.cell_id == serving.cell_id;
  });
  if (self == ranked.end()) return reselection::Reselect{head.cell};
  if (head.cell.cell_id == serving.cell_id) return reselection::Keep{};
  if (head.priority > self->priority) return reselection::Reselect{head.cell};

  // Same priority: the head is the strongest competitor.
  if (head.power_dbm > self->power_dbm + env.params.hysteresis_db) {
    return reselection::Reselect{head.cell};
  }
  return reselection::Keep{};
}

}  // namespace ltecatch
