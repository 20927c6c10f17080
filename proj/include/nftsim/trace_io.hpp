// JSON-lines records for simulation inputs and traces. Same record style as
// chain persistence: one object per line, keys sorted, a "kind" tag.
//
// Config file:
//   {"id":"n1","kind":"node"}
//   {"deposit":100,"kind":"wallet","node":"n1","owner":"alice"}
//   {"kind":"settings","royalty_den":10,"royalty_num":1}          (optional)
//   {"kind":"fault","withhold":"announcement","agent":"alice"}    (test hook)
//
// Schedule file, one request per line:
//   {"asset":"a1","op":"mint","orig":"alice","tick":0}
//   {"buyer":"bob","cost":5,"op":"standard","seller":"alice","tick":1}
//   {"asset":"a1","cost":40,"new":"bob","old":"alice","op":"transfer","tick":2}
//   {"asset":"a1","cost":40,"new":"carol","old":"bob","op":"royalty","tick":3}
//   royalty lines may carry "rate_num"/"rate_den"; otherwise the config default applies.
//
// Trace file: a "config" record, the "request" records of the schedule, a
// "run" record, one "event" record per tick and a closing "final" record.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "nftsim/chain_io.hpp"
#include "nftsim/netsim.hpp"

namespace nft::sim {

using ledger::FormatError;

/// A well-formed trace whose recorded events differ from a fresh run.
class ReplayMismatch : public FormatError {
 public:
  using FormatError::FormatError;
};

nlohmann::json request_to_json(const TxRequest& r);
TxRequest request_from_json(const nlohmann::json& j, const tx::Rate& default_rate);

nlohmann::json scheduled_to_json(const ScheduledRequest& s);
ScheduledRequest scheduled_from_json(const nlohmann::json& j, const tx::Rate& default_rate);

nlohmann::json event_to_json(const Event& e);
Event event_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const Config& c);
Config config_from_json(const nlohmann::json& j);

/// Parses the line-oriented config file format described above.
Config load_config(std::istream& in);
Config load_config_file(const std::string& path);
void save_config(std::ostream& out, const Config& c);

std::vector<ScheduledRequest> load_schedule(std::istream& in, const tx::Rate& default_rate);
std::vector<ScheduledRequest> load_schedule_file(const std::string& path, const tx::Rate& default_rate);
void save_schedule(std::ostream& out, const std::vector<ScheduledRequest>& schedule);

std::string hex64(std::uint64_t v);

void save_trace(std::ostream& out, const Trace& t);
std::string save_trace(const Trace& t);

/// What a trace file records; enough to replay the run exactly.
struct TraceFile {
  Config config;
  std::vector<ScheduledRequest> schedule;
  Tick min_ticks = 0;
  std::vector<TraceEntry> entries;
  std::uint64_t final_digest = 0;
  std::size_t final_height = 0;
};

TraceFile load_trace(std::istream& in);
TraceFile load_trace_file(const std::string& path);

/// Re-runs the recorded inputs and checks the result is the recorded trace.
/// Throws ReplayMismatch naming the first divergent tick otherwise, and
/// FormatError when the recorded inputs are themselves invalid.
Trace replay_trace(const TraceFile& file);

}  // namespace nft::sim
