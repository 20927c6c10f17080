#include "nftsim/trace_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace nft::sim {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad field '") + key + "': " + e.what());
  }
}

template <class Id>
Id id_field(const json& j, const char* key) {
  auto s = field<std::string>(j, key);
  if (s.empty()) throw FormatError(std::string("empty identifier in '") + key + "'");
  return Id{std::move(s)};
}

tx::Rate rate_of(std::uint64_t num, std::uint64_t den) {
  try {
    return tx::Rate(num, den);
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

template <class F>
void for_each_record(std::istream& in, F&& f) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      f(json::parse(line));
    } catch (const json::parse_error& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

json agent_array(const AgentSet& s) {
  json a = json::array();
  for (const auto& x : s) a.push_back(x.str());
  return a;
}

AgentSet agent_set(const json& j, const char* key) {
  AgentSet out;
  auto it = j.find(key);
  if (it == j.end()) return out;
  if (!it->is_array()) throw FormatError(std::string("'") + key + "' must be an array");
  for (const auto& x : *it) out.insert(AgentId{x.get<std::string>()});
  return out;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Idle: return "idle";
    case Outcome::Applied: return "applied";
    case Outcome::Rejected: return "rejected";
  }
  return "?";
}

std::uint64_t digest_field(const json& j) {
  auto s = field<std::string>(j, "digest");
  if (s.size() != 16 || s.find_first_not_of("0123456789abcdef") != std::string::npos) {
    throw FormatError("digest must be 16 lowercase hex digits");
  }
  return std::stoull(s, nullptr, 16);
}

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json request_to_json(const TxRequest& r) {
  json j = std::visit(
      [](const auto& q) -> json {
        using Q = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<Q, MintReq>) {
          return {{"op", "mint"}, {"orig", q.orig.str()}, {"asset", q.asset.str()}};
        } else if constexpr (std::is_same_v<Q, StandardReq>) {
          return {{"op", "standard"}, {"buyer", q.buyer.str()}, {"seller", q.seller.str()}, {"cost", q.cost}};
        } else if constexpr (std::is_same_v<Q, TransferReq>) {
          return {{"op", "transfer"}, {"old", q.old_owner.str()}, {"new", q.new_owner.str()},
                  {"asset", q.asset.str()}, {"cost", q.cost}};
        } else {
          return {{"op", "royalty"}, {"old", q.old_owner.str()}, {"new", q.new_owner.str()},
                  {"asset", q.asset.str()}, {"cost", q.cost},
                  {"rate_num", q.rate.num()}, {"rate_den", q.rate.den()}};
        }
      },
      r.kind);
  j["submitted_at"] = r.submitted_at;
  return j;
}

TxRequest request_from_json(const json& j, const tx::Rate& default_rate) {
  if (!j.is_object()) throw FormatError("request must be an object");
  TxRequest r;
  auto op = field<std::string>(j, "op");
  if (op == "mint") {
    r.kind = MintReq{id_field<AgentId>(j, "orig"), id_field<AssetId>(j, "asset")};
  } else if (op == "standard") {
    r.kind = StandardReq{id_field<AgentId>(j, "buyer"), id_field<AgentId>(j, "seller"),
                         field<Amount>(j, "cost")};
  } else if (op == "transfer") {
    r.kind = TransferReq{id_field<AgentId>(j, "old"), id_field<AgentId>(j, "new"),
                         id_field<AssetId>(j, "asset"), field<Amount>(j, "cost")};
  } else if (op == "royalty") {
    tx::Rate rate = default_rate;
    if (j.contains("rate_num") || j.contains("rate_den")) {
      rate = rate_of(field<std::uint64_t>(j, "rate_num"), field<std::uint64_t>(j, "rate_den"));
    }
    r.kind = RoyaltyTransferReq{id_field<AgentId>(j, "old"), id_field<AgentId>(j, "new"),
                                id_field<AssetId>(j, "asset"), field<Amount>(j, "cost"), rate};
  } else {
    throw FormatError("unknown op '" + op + "'");
  }
  if (j.contains("submitted_at")) r.submitted_at = field<Tick>(j, "submitted_at");
  return r;
}

json scheduled_to_json(const ScheduledRequest& s) {
  json j = request_to_json(s.request);
  j.erase("submitted_at");
  j["tick"] = s.tick;
  return j;
}

ScheduledRequest scheduled_from_json(const json& j, const tx::Rate& default_rate) {
  return ScheduledRequest{field<Tick>(j, "tick"), request_from_json(j, default_rate)};
}

json event_to_json(const Event& e) {
  json j{{"tick", e.tick}, {"outcome", outcome_name(e.outcome)}};
  if (e.request) j["request"] = request_to_json(*e.request);
  if (e.error) j["error"] = std::string(tx::to_string(*e.error));
  if (e.block) j["block"] = ledger::block_to_json(*e.block);
  if (e.producer) j["producer"] = e.producer->str();
  return j;
}

Event event_from_json(const json& j) {
  Event e;
  e.tick = field<Tick>(j, "tick");
  auto o = field<std::string>(j, "outcome");
  if (o == "idle") e.outcome = Outcome::Idle;
  else if (o == "applied") e.outcome = Outcome::Applied;
  else if (o == "rejected") e.outcome = Outcome::Rejected;
  else throw FormatError("unknown outcome '" + o + "'");
  if (j.contains("request")) e.request = request_from_json(j.at("request"), tx::Rate{});
  if (j.contains("error")) {
    auto err = tx::tx_error_from_string(field<std::string>(j, "error"));
    if (!err) throw FormatError("unknown error code");
    e.error = *err;
  }
  if (j.contains("block")) e.block = ledger::block_from_json(j.at("block"));
  if (j.contains("producer")) e.producer = id_field<AgentId>(j, "producer");
  return e;
}

json config_to_json(const Config& c) {
  json nodes = json::array();
  for (const auto& n : c.nodes) nodes.push_back(n.str());
  json wallets = json::array();
  for (const auto& w : c.wallets) {
    wallets.push_back({{"owner", w.owner.str()}, {"node", w.home_node.str()}, {"deposit", w.deposit}});
  }
  return {{"nodes", nodes},
          {"wallets", wallets},
          {"royalty_num", c.royalty.num()},
          {"royalty_den", c.royalty.den()},
          {"seed", c.seed},
          {"withhold_certificate", agent_array(c.faults.withhold_certificate)},
          {"withhold_announcement", agent_array(c.faults.withhold_announcement)}};
}

Config config_from_json(const json& j) {
  Config c;
  for (const auto& n : field<json>(j, "nodes")) c.nodes.emplace_back(n.get<std::string>());
  for (const auto& w : field<json>(j, "wallets")) {
    c.wallets.push_back(WalletSpec{id_field<AgentId>(w, "owner"), id_field<AgentId>(w, "node"),
                                   field<Amount>(w, "deposit")});
  }
  c.royalty = rate_of(field<std::uint64_t>(j, "royalty_num"), field<std::uint64_t>(j, "royalty_den"));
  c.seed = field<std::uint64_t>(j, "seed");
  c.faults.withhold_certificate = agent_set(j, "withhold_certificate");
  c.faults.withhold_announcement = agent_set(j, "withhold_announcement");
  return c;
}

Config load_config(std::istream& in) {
  Config c;
  for_each_record(in, [&](const json& j) {
    auto kind = field<std::string>(j, "kind");
    if (kind == "node") {
      c.nodes.push_back(id_field<AgentId>(j, "id"));
    } else if (kind == "wallet") {
      Amount deposit = j.contains("deposit") ? field<Amount>(j, "deposit") : 0;
      c.wallets.push_back(
          WalletSpec{id_field<AgentId>(j, "owner"), id_field<AgentId>(j, "node"), deposit});
    } else if (kind == "settings") {
      if (j.contains("royalty_num") || j.contains("royalty_den")) {
        c.royalty = rate_of(field<std::uint64_t>(j, "royalty_num"),
                            field<std::uint64_t>(j, "royalty_den"));
      }
      if (j.contains("seed")) c.seed = field<std::uint64_t>(j, "seed");
    } else if (kind == "fault") {
      auto which = field<std::string>(j, "withhold");
      auto agent = id_field<AgentId>(j, "agent");
      if (which == "certificate") c.faults.withhold_certificate.insert(agent);
      else if (which == "announcement") c.faults.withhold_announcement.insert(agent);
      else throw FormatError("unknown fault '" + which + "'");
    } else {
      throw FormatError("unknown config record kind '" + kind + "'");
    }
  });
  return c;
}

Config load_config_file(const std::string& path) {
  auto in = open_in(path);
  return load_config(in);
}

void save_config(std::ostream& out, const Config& c) {
  for (const auto& n : c.nodes) out << json{{"kind", "node"}, {"id", n.str()}}.dump() << '\n';
  for (const auto& w : c.wallets) {
    out << json{{"kind", "wallet"}, {"owner", w.owner.str()}, {"node", w.home_node.str()}, {"deposit", w.deposit}}.dump()
        << '\n';
  }
  out << json{{"kind", "settings"}, {"royalty_num", c.royalty.num()}, {"royalty_den", c.royalty.den()}, {"seed", c.seed}}
             .dump()
      << '\n';
  for (const auto& a : c.faults.withhold_certificate) {
    out << json{{"kind", "fault"}, {"withhold", "certificate"}, {"agent", a.str()}}.dump() << '\n';
  }
  for (const auto& a : c.faults.withhold_announcement) {
    out << json{{"kind", "fault"}, {"withhold", "announcement"}, {"agent", a.str()}}.dump() << '\n';
  }
}

std::vector<ScheduledRequest> load_schedule(std::istream& in, const tx::Rate& default_rate) {
  std::vector<ScheduledRequest> out;
  for_each_record(in, [&](const json& j) { out.push_back(scheduled_from_json(j, default_rate)); });
  return out;
}

std::vector<ScheduledRequest> load_schedule_file(const std::string& path, const tx::Rate& default_rate) {
  auto in = open_in(path);
  return load_schedule(in, default_rate);
}

void save_schedule(std::ostream& out, const std::vector<ScheduledRequest>& schedule) {
  for (const auto& s : schedule) out << scheduled_to_json(s).dump() << '\n';
}

void save_trace(std::ostream& out, const Trace& t) {
  json cfg = config_to_json(t.config);
  cfg["kind"] = "config";
  out << cfg.dump() << '\n';
  for (const auto& s : t.schedule) {
    json r = scheduled_to_json(s);
    r["kind"] = "request";
    out << r.dump() << '\n';
  }
  out << json{{"kind", "run"}, {"min_ticks", t.min_ticks}}.dump() << '\n';
  for (const auto& e : t.entries) {
    json j = event_to_json(e.event);
    j["kind"] = "event";
    j["digest"] = hex64(e.digest);
    out << j.dump() << '\n';
  }
  std::uint64_t last = t.entries.empty() ? 0 : t.entries.back().digest;
  out << json{{"kind", "final"},
              {"tick", t.final_state.tick},
              {"height", t.final_state.chain.height()},
              {"digest", hex64(last)}}
             .dump()
      << '\n';
}

std::string save_trace(const Trace& t) {
  std::ostringstream os;
  save_trace(os, t);
  return os.str();
}

TraceFile load_trace(std::istream& in) {
  TraceFile f;
  bool have_config = false;
  bool have_final = false;
  for_each_record(in, [&](const json& j) {
    auto kind = field<std::string>(j, "kind");
    if (have_final) throw FormatError("record after final");
    if (kind == "config") {
      if (have_config) throw FormatError("duplicate config record");
      f.config = config_from_json(j);
      have_config = true;
    } else if (!have_config) {
      throw FormatError("trace must start with a config record");
    } else if (kind == "request") {
      f.schedule.push_back(scheduled_from_json(j, f.config.royalty));
    } else if (kind == "run") {
      f.min_ticks = field<Tick>(j, "min_ticks");
    } else if (kind == "event") {
      f.entries.push_back(TraceEntry{event_from_json(j), digest_field(j)});
    } else if (kind == "final") {
      f.final_digest = digest_field(j);
      f.final_height = field<std::size_t>(j, "height");
      have_final = true;
    } else {
      throw FormatError("unknown trace record kind '" + kind + "'");
    }
  });
  if (!have_config) throw FormatError("trace has no config record");
  if (!have_final) throw FormatError("trace is truncated (no final record)");
  return f;
}

TraceFile load_trace_file(const std::string& path) {
  auto in = open_in(path);
  return load_trace(in);
}

Trace replay_trace(const TraceFile& file) {
  Trace t;
  try {
    t = run(init(file.config), file.schedule, file.min_ticks);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("trace inputs rejected: ") + e.what());
  }
  if (t.entries.size() != file.entries.size()) {
    throw ReplayMismatch("replay produced " + std::to_string(t.entries.size()) + " events, file has " +
                      std::to_string(file.entries.size()));
  }
  for (std::size_t i = 0; i < t.entries.size(); ++i) {
    if (!(t.entries[i] == file.entries[i])) {
      throw ReplayMismatch("replay diverges from recorded trace at tick " + std::to_string(i));
    }
  }
  std::uint64_t last = t.entries.empty() ? 0 : t.entries.back().digest;
  if (last != file.final_digest || t.final_state.chain.height() != file.final_height) {
    throw ReplayMismatch("final record does not match replay");
  }
  return t;
}

}  // namespace nft::sim
