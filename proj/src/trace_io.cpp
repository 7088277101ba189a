/* SPDX-License-Identifier: Apache-2.0 */

#include "ltecatch/trace_io.hpp"

#include <fstream>

namespace ltecatch {

using nlohmann::json;
using nlohmann::ordered_json;

ordered_json to_json(const TraceRecord& r) {
  ordered_json j;
  j["t_ms"] = r.t_ms;
  j["sender"] = r.sender;
  j["receiver"] = r.receiver;
  j["earfcn"] = r.earfcn.channel;
  j["hex"] = r.hex;
  j["decoded"] = r.decoded;
  j["note"] = r.note ? ordered_json(*r.note) : ordered_json(nullptr);
  return j;
}

TraceRecord trace_record_from_json(const json& j) {
  try {
    TraceRecord r;
    r.t_ms = j.at("t_ms").get<std::int64_t>();
    r.sender = j.at("sender").get<std::string>();
    r.receiver = j.at("receiver").get<std::string>();
    r.earfcn = Earfcn{j.at("earfcn").get<std::uint32_t>()};
    r.hex = j.at("hex").get<std::string>();
    r.decoded = j.at("decoded").get<std::string>();
    if (const auto& note = j.at("note"); !note.is_null()) {
      r.note = note.get<std::string>();
    }
    const Octets octets = from_hex(r.hex);
    const std::string_view kind = message_name(decode_emm(octets));
    if (kind != r.decoded) {
      throw TraceFormatError("hex decodes to " + std::string(kind) +
                             " but record says " + r.decoded);
    }
    return r;
  } catch (const json::exception& e) {
    throw TraceFormatError(std::string("bad record: ") + e.what());
  } catch (const CodecError& e) {
    throw TraceFormatError(std::string("undecodable hex: ") + e.what());
  }
}

TraceRecord parse_trace_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw TraceFormatError(std::string("not JSON: ") + e.what());
  }
  return trace_record_from_json(j);
}

namespace {

ordered_json optional_json(const auto& value, auto&& convert) {
  return value ? ordered_json(convert(*value)) : ordered_json(nullptr);
}

ordered_json plan_json(const AttackPlan& p) {
  ordered_json j;
  j["target_plmn"] = p.target_plmn.to_string();
  j["jam_earfcn"] = p.jam_earfcn.channel;
  j["collector_earfcn"] = p.collector_earfcn.channel;
  j["commercial_tac"] = p.commercial_tac;
  j["collector_tac"] = p.collector_tac;
  return j;
}

}  // namespace

ordered_json to_json(const SimReport& r) {
  ordered_json j;
  j["config"] = r.config;

  ordered_json captures = ordered_json::array();
  for (const auto& c : r.captures) {
    ordered_json entries = ordered_json::array();
    for (const auto& cap : c.captures) {
      entries.push_back({{"t_ms", cap.t_ms},
                         {"imsi", cap.imsi.digits()},
                         {"cell_id", cap.cell_id}});
    }
    captures.push_back({{"collector_cell", c.collector_cell},
                        {"count", c.captures.size()},
                        {"entries", std::move(entries)}});
  }
  j["captures"] = std::move(captures);
  j["capture_count"] = r.capture_count();

  ordered_json denials = ordered_json::object();
  for (const auto& [ue, intervals] : r.denial_intervals) {
    ordered_json list = ordered_json::array();
    for (const auto& d : intervals) {
      list.push_back({{"start_ms", d.start_ms}, {"end_ms", d.end_ms}, {"open", d.open}});
    }
    denials[ue] = std::move(list);
  }
  j["denial_intervals"] = std::move(denials);

  ordered_json states = ordered_json::object();
  for (const auto& s : r.final_states) {
    ordered_json st;
    st["emm"] = std::string(to_string(s.emm));
    st["powered"] = s.powered;
    st["camped_cell"] = optional_json(s.camped_cell, [](auto v) { return v; });
    st["rplmn"] = optional_json(s.rplmn, [](const Plmn& p) { return p.to_string(); });
    st["guti"] = optional_json(s.guti, [](const Guti& g) { return to_string(g); });
    st["invalid_for_service"] = s.invalid_for_service;
    states[s.id] = std::move(st);
  }
  j["final_states"] = std::move(states);

  ordered_json regs = ordered_json::array();
  for (const auto& reg : r.registrations) {
    regs.push_back({{"t_ms", reg.t_ms},
                    {"ue", reg.ue},
                    {"cell_id", reg.cell_id},
                    {"plmn", reg.plmn.to_string()},
                    {"kind", reg.kind}});
  }
  j["registrations"] = std::move(regs);

  if (r.attack) {
    ordered_json a;
    a["type"] = r.attack->type;
    a["plan"] = optional_json(r.attack->plan, plan_json);
    a["error"] = optional_json(r.attack->error, [](const std::string& s) { return s; });
    a["deployed_ms"] = optional_json(r.attack->deployed_ms, [](auto v) { return v; });
    a["jammer_on_ms"] = optional_json(r.attack->jammer_on_ms, [](auto v) { return v; });
    j["attack"] = std::move(a);
  } else {
    j["attack"] = nullptr;
  }

  j["trace_length"] = r.trace_length;
  j["dropped_messages"] = r.dropped_messages;
  j["anomalies"] = r.anomalies;
  return j;
}

std::string render_trace(const SimTrace& trace) {
  std::string out;
  for (const auto& rec : trace) {
    out += to_json(rec).dump();
    out += '\n';
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  out << content;
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

}  // namespace

void write_trace(const SimTrace& trace, const std::filesystem::path& path) {
  write_file(path, render_trace(trace));
}

void write_report(const SimReport& report, const std::filesystem::path& path) {
  write_file(path, to_json(report).dump(2) + "\n");
}

}  // namespace ltecatch
