/* SPDX-License-Identifier: Apache-2.0 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ltecatch/trace_io.hpp"

using namespace ltecatch;

namespace {

TraceRecord reject_record() {
  return TraceRecord{3150, "cell:900", "ue:victim", Earfcn{1850}, "074403", "ATTACH_REJECT",
                     "rogue"};
}

}  // namespace

TEST_CASE("trace lines have a fixed key order") {
  CHECK(to_json(reject_record()).dump() ==
        R"({"t_ms":3150,"sender":"cell:900","receiver":"ue:victim","earfcn":1850,)"
        R"("hex":"074403","decoded":"ATTACH_REJECT","note":"rogue"})");
  TraceRecord plain = reject_record();
  plain.note.reset();
  CHECK(to_json(plain).dump().find(R"("note":null)") != std::string::npos);
}

TEST_CASE("trace lines round-trip") {
  TraceRecord r = reject_record();
  CHECK(parse_trace_line(to_json(r).dump()) == r);
  r.note.reset();
  CHECK(parse_trace_line(to_json(r).dump()) == r);
}

TEST_CASE("inconsistent or broken lines are rejected") {
  TraceRecord r = reject_record();
  r.decoded = "TAU_ACCEPT";
  CHECK_THROWS_AS(parse_trace_line(to_json(r).dump()), TraceFormatError);
  r = reject_record();
  r.hex = "07zz";
  CHECK_THROWS_AS(parse_trace_line(to_json(r).dump()), TraceFormatError);
  CHECK_THROWS_AS(parse_trace_line("{"), TraceFormatError);
  CHECK_THROWS_AS(parse_trace_line(R"({"t_ms":1})"), TraceFormatError);
}

TEST_CASE("render_trace is one JSON object per line") {
  SimTrace t{reject_record(), reject_record()};
  const std::string text = render_trace(t);
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    CHECK(parse_trace_line(line) == reject_record());
    ++n;
  }
  CHECK(n == 2);
  CHECK(text.back() == '\n');
}

TEST_CASE("report JSON carries the summary fields") {
  SimReport rep;
  rep.config = {{"end_ms", 10}};
  rep.captures.push_back({900, {Capture{3150, Imsi("242010123456789"), 900}}});
  rep.denial_intervals["victim"] = {DenialInterval{3200, 8000, true}};
  rep.trace_length = 6;
  auto j = to_json(rep);
  CHECK(j["capture_count"] == 1);
  CHECK(j["captures"][0]["collector_cell"] == 900);
  CHECK(j["captures"][0]["entries"][0]["imsi"] == "242010123456789");
  CHECK(j["denial_intervals"]["victim"][0]["open"] == true);
  CHECK(j["attack"].is_null());
  CHECK(j["trace_length"] == 6);
}

TEST_CASE("writes fail with IoError on a bad path") {
  CHECK_THROWS_AS(write_trace({}, "/nonexistent/dir/trace.jsonl"), IoError);
  auto tmp = std::filesystem::temp_directory_path() / "ltecatch_trace_test.jsonl";
  write_trace({reject_record()}, tmp);
  std::ifstream in(tmp);
  std::string line;
  std::getline(in, line);
  CHECK(parse_trace_line(line) == reject_record());
  std::filesystem::remove(tmp);
}
