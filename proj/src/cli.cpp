/* SPDX-License-Identifier: Apache-2.0 */

#include "ltecatch/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "ltecatch/scenario.hpp"
#include "ltecatch/sim_engine.hpp"
#include "ltecatch/trace_io.hpp"

namespace ltecatch::cli {

namespace fs = std::filesystem;

std::string redact_imsi(const Imsi& imsi) {
  const std::string& d = imsi.digits();
  const std::size_t keep = std::min<std::size_t>(5, d.size());
  return std::string(d.size() - keep, '*') + d.substr(d.size() - keep);
}

namespace {

std::string show_imsi(const Imsi& imsi, bool full) {
  return full ? imsi.digits() : redact_imsi(imsi);
}

std::string show_identity(const MobileIdentity& id, bool full) {
  if (const auto* imsi = std::get_if<Imsi>(&id)) return "imsi:" + show_imsi(*imsi, full);
  return "guti:" + to_string(std::get<Guti>(id));
}

std::string show_cause(EmmCause cause) {
  return "cause=" + std::to_string(cause.value) + " (" +
         std::string(cause_label(cause)) + ")";
}

std::string fmt_db(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string describe(const EmmMessage& msg, bool full_imsi) {
  std::string out(message_name(msg));
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, emm::AttachRequest>) {
          out += " identity=" + show_identity(m.identity, full_imsi);
        } else if constexpr (std::is_same_v<T, emm::AttachAccept>) {
          out += " guti=" + to_string(m.guti) + " tac=" + std::to_string(m.tac);
        } else if constexpr (std::is_same_v<T, emm::AttachReject> ||
                             std::is_same_v<T, emm::TauReject>) {
          out += " " + show_cause(m.cause);
        } else if constexpr (std::is_same_v<T, emm::TauRequest>) {
          out += " guti=" + to_string(m.guti) +
                 " last_tac=" + std::to_string(m.last_tac);
        } else if constexpr (std::is_same_v<T, emm::IdentityRequest>) {
          out += " requested=IMSI";
        } else if constexpr (std::is_same_v<T, emm::IdentityResponse>) {
          out += " imsi=" + show_imsi(m.imsi, full_imsi);
        }
      },
      msg);
  return out;
}

namespace {

void print_summary(std::ostream& out, const SimReport& report,
                   const fs::path& trace_path, const fs::path& report_path) {
  out << "simulated " << report.config["end_ms"].get<std::int64_t>() << " ms, "
      << report.trace_length << " trace records\n";

  std::optional<std::int64_t> jammer_on;
  if (report.attack) {
    const auto& a = *report.attack;
    out << "attack: " << a.type;
    if (a.plan) {
      out << " target=" << a.plan->target_plmn.to_string()
          << " jam_earfcn=" << a.plan->jam_earfcn.channel
          << " collector_earfcn=" << a.plan->collector_earfcn.channel
          << " tac " << a.plan->commercial_tac << "->" << a.plan->collector_tac;
    }
    if (a.deployed_ms) out << ", deployed at " << *a.deployed_ms << " ms";
    if (a.jammer_on_ms) out << ", jammer on at " << *a.jammer_on_ms << " ms";
    if (a.error) out << ", FAILED: " << *a.error;
    out << "\n";
    jammer_on = a.jammer_on_ms;
  }

  out << report.capture_count() << " captures\n";
  for (const auto& c : report.captures) {
    for (const auto& cap : c.captures) {
      out << "  t=" << cap.t_ms << " ms  cell " << cap.cell_id << "  IMSI "
          << redact_imsi(cap.imsi);
      if (jammer_on) out << "  (+" << cap.t_ms - *jammer_on << " ms after jammer on)";
      out << "\n";
    }
  }

  out << "denial intervals:\n";
  for (const auto& [ue, intervals] : report.denial_intervals) {
    out << "  " << ue << ":";
    if (intervals.empty()) out << " none";
    for (const auto& d : intervals) {
      out << " [" << d.start_ms << ", " << d.end_ms << "] ms" << (d.open ? " (ongoing)" : "");
    }
    out << "\n";
  }

  out << "final states:\n";
  for (const auto& s : report.final_states) {
    out << "  " << s.id << ": " << to_string(s.emm)
        << (s.powered ? " powered" : " off") << " camped="
        << (s.camped_cell ? std::to_string(*s.camped_cell) : "-")
        << " rplmn=" << (s.rplmn ? s.rplmn->to_string() : "-") << "\n";
  }
  if (report.dropped_messages > 0) {
    out << report.dropped_messages << " messages dropped\n";
  }
  out << "wrote " << trace_path.string() << " and " << report_path.string() << "\n";
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            bool quiet, std::ostream& out, std::ostream& err) {
  Scenario scenario = load_scenario_file(scenario_path);
  RunResult result = run(scenario);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir, "cannot create directory: " + ec.message());
  const fs::path trace_path = fs::path(out_dir) / "trace.jsonl";
  const fs::path report_path = fs::path(out_dir) / "report.json";
  write_trace(result.trace, trace_path);
  write_report(result.report, report_path);

  if (!quiet) print_summary(out, result.report, trace_path, report_path);
  for (const auto& a : result.report.anomalies) err << "note: " << a << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& scenario_path, std::ostream& out) {
  Scenario sc = load_scenario_file(scenario_path);
  out << "scenario OK: " << scenario_path << "\n";
  out << "  end_ms = " << sc.end_ms << "\n"
      << "  seed = " << sc.seed << "\n"
      << "  q_rxlevmin_dbm = " << fmt_db(sc.defaults.q_rxlevmin_dbm) << "\n"
      << "  hysteresis_db = " << fmt_db(sc.defaults.hysteresis_db) << "\n"
      << "  latency_ms = " << sc.defaults.latency_ms << "\n"
      << "  reselection_period_ms = " << sc.defaults.reselection_period_ms << "\n"
      << "  jam_penalty_db = " << fmt_db(sc.defaults.jam_penalty_db) << "\n"
      << "  cells = " << sc.env.cells.size() << ", jammers = " << sc.env.jammers.size()
      << ", ues = " << sc.ues.size() << ", events = " << sc.events.size() << "\n";
  if (sc.attack) {
    if (const auto* c = std::get_if<CatcherAttack>(&*sc.attack)) {
      out << "  attack = imsi_catcher" << (c->auto_discover() ? " (auto_discover)" : "")
          << "\n";
    } else {
      out << "  attack = roaming_catcher\n";
    }
  }
  return kExitOk;
}

int cmd_explain_trace(const std::string& trace_path, bool full, std::ostream& out,
                      std::ostream& err) {
  std::ifstream in(trace_path);
  if (!in) throw IoError(trace_path, "cannot read trace");
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    TraceRecord rec;
    EmmMessage msg = emm::TauAccept{};
    try {
      rec = parse_trace_line(line);
      msg = decode_emm(from_hex(rec.hex));
    } catch (const std::exception& e) {
      err << trace_path << ":" << line_no << ": " << e.what() << "\n";
      return kExitInvalid;
    }
    out << "#" << line_no << " t=" << rec.t_ms << " ms " << rec.sender << " -> "
        << rec.receiver << " earfcn=" << rec.earfcn.channel << "  "
        << describe(msg, full);
    if (rec.note) out << "  [" << *rec.note << "]";
    out << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic LTE IMSI-catcher protocol simulator", "ltecatch"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", trace_path;
  bool quiet = false, full = false;

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write trace/report");
  run_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();
  run_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
  run_cmd->add_flag("--quiet", quiet, "Suppress the summary");

  auto* validate_cmd = app.add_subcommand("validate", "Load and validate a scenario");
  validate_cmd->add_option("scenario", scenario_path, "Scenario JSON file")->required();

  auto* explain_cmd = app.add_subcommand("explain-trace", "Annotate a trace.jsonl");
  explain_cmd->add_option("file", trace_path, "Trace file")->required();
  explain_cmd->add_flag("--full", full, "Show full IMSI digits");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*run_cmd) return cmd_run(scenario_path, out_dir, quiet, out, err);
    if (*validate_cmd) return cmd_validate(scenario_path, out);
    return cmd_explain_trace(trace_path, full, out, err);
  } catch (const ScenarioError& e) {
    err << "scenario error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const ScenarioIoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace ltecatch::cli
