#include <doctest.h>

#include <sstream>

#include "nftsim/trace_io.hpp"
#include "nftsim/workload.hpp"

using namespace nft::sim;

namespace {

const char* kConfig =
    "# two nodes, three wallets\n"
    "{\"id\":\"n1\",\"kind\":\"node\"}\n"
    "{\"id\":\"n2\",\"kind\":\"node\"}\n"
    "{\"deposit\":100,\"kind\":\"wallet\",\"node\":\"n1\",\"owner\":\"alice\"}\n"
    "{\"deposit\":50,\"kind\":\"wallet\",\"node\":\"n2\",\"owner\":\"bob\"}\n"
    "{\"deposit\":0,\"kind\":\"wallet\",\"node\":\"n2\",\"owner\":\"carol\"}\n"
    "{\"kind\":\"settings\",\"royalty_den\":10,\"royalty_num\":1,\"seed\":4}\n";

const char* kSchedule =
    "{\"asset\":\"a1\",\"op\":\"mint\",\"orig\":\"alice\",\"tick\":0}\n"
    "{\"buyer\":\"bob\",\"cost\":5,\"op\":\"standard\",\"seller\":\"alice\",\"tick\":1}\n"
    "{\"asset\":\"a1\",\"cost\":40,\"new\":\"bob\",\"old\":\"alice\",\"op\":\"transfer\",\"tick\":2}\n"
    "{\"asset\":\"a1\",\"cost\":30,\"new\":\"carol\",\"old\":\"bob\",\"op\":\"royalty\",\"tick\":3}\n";

Config parse_config(const std::string& text) {
  std::istringstream in(text);
  return load_config(in);
}

std::vector<ScheduledRequest> parse_schedule(const std::string& text, const nft::tx::Rate& r) {
  std::istringstream in(text);
  return load_schedule(in, r);
}

TraceFile parse_trace(const std::string& text) {
  std::istringstream in(text);
  return load_trace(in);
}

}  // namespace

TEST_CASE("config and schedule files parse") {
  auto cfg = parse_config(kConfig);
  CHECK(cfg.nodes.size() == 2);
  CHECK(cfg.wallets.size() == 3);
  CHECK(cfg.royalty == nft::tx::Rate(1, 10));
  CHECK(cfg.seed == 4);

  auto sched = parse_schedule(kSchedule, cfg.royalty);
  REQUIRE(sched.size() == 4);
  CHECK(sched[0].tick == 0);
  auto* royalty = std::get_if<RoyaltyTransferReq>(&sched[3].request.kind);
  REQUIRE(royalty);
  CHECK(royalty->rate == nft::tx::Rate(1, 10));
}

TEST_CASE("config and schedule files round-trip") {
  auto cfg = parse_config(kConfig);
  cfg.faults.withhold_announcement = {AgentId{"bob"}};
  std::ostringstream c1;
  save_config(c1, cfg);
  CHECK(parse_config(c1.str()) == cfg);

  auto sched = parse_schedule(kSchedule, cfg.royalty);
  std::ostringstream s1;
  save_schedule(s1, sched);
  CHECK(parse_schedule(s1.str(), nft::tx::Rate()) == sched);
}

TEST_CASE("malformed inputs are format errors") {
  CHECK_THROWS_AS(parse_config("{\"kind\":\"planet\"}\n"), FormatError);
  CHECK_THROWS_AS(parse_config("{\"kind\":\"node\"}\n"), FormatError);
  CHECK_THROWS_AS(parse_config("{\"kind\":\"settings\",\"royalty_num\":3,\"royalty_den\":2}\n"),
                  FormatError);
  CHECK_THROWS_AS(parse_schedule("{\"op\":\"mint\",\"tick\":0}\n", {}), FormatError);
  CHECK_THROWS_AS(parse_schedule("{\"op\":\"burn\",\"tick\":0}\n", {}), FormatError);
  CHECK_THROWS_AS(parse_schedule("[1,2]\n", {}), FormatError);
  CHECK_THROWS_AS(parse_trace("{\"kind\":\"event\"}\n"), FormatError);
}

TEST_CASE("a saved trace reloads and replays identically") {
  auto cfg = parse_config(kConfig);
  auto sched = parse_schedule(kSchedule, cfg.royalty);
  auto trace = run(init(cfg), sched, 6);
  std::string text = save_trace(trace);
  auto file = parse_trace(text);
  CHECK(file.config == cfg);
  CHECK(file.schedule == sched);
  CHECK(file.min_ticks == 6);
  CHECK(file.entries == trace.entries);
  auto again = replay_trace(file);
  CHECK(save_trace(again) == text);
}

TEST_CASE("random traces survive save, load and replay byte for byte") {
  Rng rng(31);
  for (int i = 0; i < 15; ++i) {
    auto cfg = random_config(rng);
    auto trace = run(init(cfg), random_schedule(rng, cfg));
    std::string text = save_trace(trace);
    CHECK(save_trace(replay_trace(parse_trace(text))) == text);
  }
}

TEST_CASE("a tampered trace fails replay") {
  auto cfg = parse_config(kConfig);
  auto trace = run(init(cfg), parse_schedule(kSchedule, cfg.royalty));
  auto file = parse_trace(save_trace(trace));

  auto wrong_digest = file;
  wrong_digest.entries[2].digest ^= 1;
  CHECK_THROWS_AS(replay_trace(wrong_digest), ReplayMismatch);

  auto dropped = file;
  dropped.entries.pop_back();
  CHECK_THROWS_AS(replay_trace(dropped), ReplayMismatch);

  auto other_seed = file;
  other_seed.config.seed += 1;
  CHECK_THROWS_AS(replay_trace(other_seed), ReplayMismatch);

  auto bad_inputs = file;
  bad_inputs.config.wallets[0].home_node = AgentId{"nowhere"};
  try {
    replay_trace(bad_inputs);
    FAIL("expected a format error");
  } catch (const ReplayMismatch&) {
    FAIL("invalid inputs are not a mismatch");
  } catch (const FormatError&) {
  }
}

TEST_CASE("hex digests have a fixed width") {
  CHECK(hex64(0) == "0000000000000000");
  CHECK(hex64(0xdeadbeef) == "00000000deadbeef");
}
