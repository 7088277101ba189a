/* SPDX-License-Identifier: Apache-2.0 */

// trace.jsonl: one TraceRecord per line with the fixed keys
//   t_ms, sender, receiver, earfcn, hex, decoded, note
// report.json: captures, denial_intervals, final_states and friends.

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ltecatch/sim_engine.hpp"

namespace ltecatch {

class IoError : public std::runtime_error {
 public:
  IoError(const std::filesystem::path& path, const std::string& what)
      : std::runtime_error(path.string() + ": " + what) {}
};

/// Raised for a trace line that is not a valid record or whose hex does not
/// decode to the labelled message.
class TraceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::ordered_json to_json(const TraceRecord& record);
/// Checks the decoded label against decode_emm(hex).
TraceRecord trace_record_from_json(const nlohmann::json& j);
TraceRecord parse_trace_line(std::string_view line);

nlohmann::ordered_json to_json(const SimReport& report);

std::string render_trace(const SimTrace& trace);

void write_trace(const SimTrace& trace, const std::filesystem::path& path);
void write_report(const SimReport& report, const std::filesystem::path& path);

}  // namespace ltecatch
