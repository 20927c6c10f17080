// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <unistd.h>

#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "epi_gen.hpp"
#include "mutants.hpp"
#include "nftsim/chain_io.hpp"
#include "nftsim/cli.hpp"
#include "nftsim/laws.hpp"
#include "nftsim/netsim.hpp"
#include "nftsim/notice.hpp"
#include "nftsim/trace_io.hpp"
#include "nftsim/workload.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace nft;
using ledger::AgentId;
using ledger::Amount;
using ledger::AssetId;
using ledger::Chain;
using ledger::Tick;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

// The workload shape fixed by the criteria: at most 100 operations, 3-6
// agents, 2-4 nodes.
const sim::WorkloadShape kShape{};

sim::Trace generated_trace(std::uint64_t seed) {
  sim::Rng rng(seed);
  auto cfg = sim::random_config(rng, kShape);
  auto schedule = sim::random_schedule(rng, cfg, kShape);
  return sim::run(sim::init(cfg), schedule);
}

// ---- 1 ---------------------------------------------------------------------

Outcome notice_table() {
  // Rows alpha..epsilon, columns (a)..(d), as printed in the source table.
  const std::array<std::array<bool, 4>, 5> expected{{{true, true, true, true},
                                                     {true, true, true, true},
                                                     {true, false, false, true},
                                                     {false, false, false, false},
                                                     {true, true, true, true}}};
  const std::array<const char*, 5> rows{"alpha", "beta", "gamma", "delta", "epsilon"};
  auto start = Clock::now();
  std::ostringstream out, err;
  int code = cli::run_cli({"notice-table"}, out, err);
  double took = seconds_since(start);

  std::istringstream lines(out.str());
  std::string header, line;
  std::getline(lines, header);
  int matching = 0;
  std::size_t row = 0;
  bool shape_ok = header == "method   (a) (b) (c) (d)";
  while (std::getline(lines, line)) {
    if (row >= rows.size()) {
      shape_ok = false;
      break;
    }
    std::istringstream cells(line);
    std::string name, mark;
    cells >> name;
    shape_ok = shape_ok && name == rows[row];
    for (std::size_t col = 0; col < 4; ++col) {
      if (!(cells >> mark)) break;
      if ((mark == "✓") == expected[row][col] && (mark == "✓" || mark == "✗")) ++matching;
    }
    ++row;
  }
  shape_ok = shape_ok && row == rows.size();
  std::ostringstream d;
  d << matching << "/20 cells, " << took * 1000 << " ms";
  return {code == 0 && shape_ok && matching == 20 && took < 1.0, d.str()};
}

// ---- 2 ---------------------------------------------------------------------

Outcome law_suite() {
  auto start = Clock::now();
  std::size_t violations = 0;
  std::size_t ops = 0;
  std::size_t applied = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    auto trace = generated_trace(seed);
    ops += trace.schedule.size();
    for (const auto& e : trace.entries) applied += e.event.outcome == sim::Outcome::Applied;
    for (const auto& r : laws::check_all(laws::history_of(trace.final_state.chain))) {
      violations += r.violations.size();
    }
  }
  double took = seconds_since(start);

  int caught = 0;
  for (const auto& m : mutants::all()) {
    if (!laws::check_all(m.history)[m.law - 1].holds()) ++caught;
  }
  std::ostringstream d;
  d << "1000 schedules (" << ops << " requests, " << applied << " applied), " << violations
    << " violations, " << took << " s; mutants caught " << caught << "/6";
  return {violations == 0 && took < 30.0 && caught == 6, d.str()};
}

// ---- 3 ---------------------------------------------------------------------

Outcome knowledge_theorem() {
  std::size_t clean_ok = 0;
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    if (sim::verify_theorem1(generated_trace(seed)).holds) ++clean_ok;
  }

  // Faulted runs: one wallet loses one of its two extension messages, and the
  // schedule is guaranteed at least one token.
  std::size_t faulted = 0;
  std::size_t caught = 0;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    sim::Rng rng(seed + 5000);
    auto cfg = sim::random_config(rng, kShape);
    auto schedule = sim::random_schedule(rng, cfg, kShape);
    const auto& victim = cfg.wallets[rng.below(cfg.wallets.size())].owner;
    if (rng.chance(50)) {
      cfg.faults.withhold_announcement.insert(victim);
    } else {
      cfg.faults.withhold_certificate.insert(victim);
    }
    schedule.insert(schedule.begin(),
                    sim::ScheduledRequest{0, {sim::MintReq{cfg.wallets[0].owner, AssetId{"seeded"}}, 0}});
    auto report = sim::verify_theorem1(sim::run(sim::init(cfg), schedule));
    ++faulted;
    if (!report.holds && report.gap) ++caught;
  }
  std::ostringstream d;
  d << "holds on " << clean_ok << "/1000 generated traces; fails on " << caught << "/" << faulted
    << " fault-injected traces";
  return {clean_ok == 1000 && caught == faulted, d.str()};
}

// ---- 4 ---------------------------------------------------------------------

Outcome group_extension() {
  const epi::Atom f{"owns", "x"};
  const epi::AgentSet group{AgentId{"v1"}, AgentId{"v2"}};
  const AgentId outsider{"x"};
  epi::AgentSet grown = group;
  grown.insert(outsider);

  auto pc_after = [&](epi::ExtendOptions opts) {
    epi::KnowledgeBase kb;
    kb.assert_world(f);
    kb.assume_pc(group, f);
    epi::extend_pc(kb, group, outsider, AgentId{"v1"}, f, opts);
    bool pairs = epigen::pc_by_pairs(kb, grown, f);
    return pairs == epi::publicly_certified(kb, grown, f) ? std::optional<bool>(pairs) : std::nullopt;
  };
  auto both = pc_after({true, true});
  auto no_certificate = pc_after({false, true});
  auto no_announcement = pc_after({true, false});
  bool ok = both == true && no_certificate == false && no_announcement == false;
  auto show = [](std::optional<bool> b) { return !b ? "?" : (*b ? "PC" : "no PC"); };
  std::ostringstream d;
  d << "both messages: " << show(both) << "; certificate omitted: " << show(no_certificate)
    << "; announcement omitted: " << show(no_announcement);
  return {ok, d.str()};
}

// ---- 5 ---------------------------------------------------------------------

Outcome epistemic_algebra() {
  std::mt19937_64 gen(424242);
  auto u = epigen::universe(5);
  auto as = epigen::atoms(3);
  auto groups = epigen::subsets(u);
  std::size_t closure_failures = 0;
  std::size_t nontrivial = 0;  // certified groups with at least two members
  for (int i = 0; i < 200; ++i) {
    auto kb = epigen::random_kb(gen, u, as, 80);
    for (const auto& a : as) {
      for (std::size_t big = 0; big < groups.size(); ++big) {
        if (!epigen::pc_by_pairs(kb, groups[big], a)) continue;
        if (groups[big].size() >= 2) ++nontrivial;
        for (std::size_t small = 0; small < groups.size(); ++small) {
          if ((small & big) == small && !epi::publicly_certified(kb, groups[small], a)) {
            ++closure_failures;
          }
        }
      }
    }
  }

  // Emails from one source to three friends.
  epi::KnowledgeBase mail;
  const epi::Atom phi{"party", ""};
  mail.assert_world(phi);
  mail.observe(AgentId{"host"}, phi);
  epi::AgentSet friends{AgentId{"f1"}, AgentId{"f2"}, AgentId{"f3"}};
  bool certified = true;
  for (const auto& f : friends) mail.communicate(AgentId{"host"}, {f}, phi);
  for (const auto& f : friends) {
    certified = certified && mail.knows(f, phi) &&
                mail.knows(f, epi::Fact::knows(AgentId{"host"}, phi));
  }
  bool email_ok = certified && !epi::publicly_certified(mail, friends, phi);

  // Two disjoint certified groups whose union is not certified.
  epi::KnowledgeBase split;
  split.assert_world(phi);
  epi::AgentSet left{AgentId{"l1"}, AgentId{"l2"}};
  epi::AgentSet right{AgentId{"r1"}, AgentId{"r2"}};
  split.assume_pc(left, phi);
  split.assume_pc(right, phi);
  epi::AgentSet both = left;
  both.insert(right.begin(), right.end());
  bool union_ok = epi::publicly_certified(split, left, phi) &&
                  epi::publicly_certified(split, right, phi) &&
                  !epi::publicly_certified(split, both, phi);

  std::ostringstream d;
  d << "200 knowledge bases, " << nontrivial << " certified groups, " << closure_failures
    << " subset failures; email certified-not-PC " << (email_ok ? "yes" : "no")
    << "; union witness " << (union_ok ? "yes" : "no");
  return {closure_failures == 0 && nontrivial > 0 && email_ok && union_ok, d.str()};
}

// ---- 6 ---------------------------------------------------------------------

Outcome oracle_equivalence() {
  std::size_t heights = 0;
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const Chain chain = generated_trace(seed + 10000).final_state.chain;
    auto agents = oracle::agents_of(chain);
    auto assets = oracle::minted_assets(chain);
    // Running state, updated one block at a time.
    std::map<std::string, std::int64_t> running_balance;
    std::map<std::string, std::vector<std::string>> running_owners;
    for (std::size_t h = 0; h <= chain.height(); ++h) {
      Chain prefix = chain.prefix(h);
      if (h > 0) {
        const auto& b = chain[h - 1];
        for (const auto& p : b.payments()) {
          running_balance[p.seller.str()] += static_cast<std::int64_t>(p.cost);
          running_balance[p.buyer.str()] -= static_cast<std::int64_t>(p.cost);
        }
        if (b.has_token) {
          auto o = ledger::decode_token(*b.token());
          running_owners[o.asset.str()].push_back(o.agent.str());
        }
      }
      ++heights;
      for (const auto& a : agents) {
        auto scan = oracle::balance(prefix, a);
        if (ledger::balance(prefix, AgentId{a}) != scan || running_balance[a] != scan) ++mismatches;
      }
      for (const auto& x : assets) {
        auto scan = oracle::owner_list(prefix, x);
        std::vector<std::string> lib;
        for (const auto& o : ledger::owner_list(prefix, AssetId{x})) lib.push_back(o.str());
        if (lib != scan || running_owners[x] != scan) ++mismatches;
      }
    }
  }
  std::ostringstream d;
  d << "100 chains, " << heights << " heights, " << mismatches << " mismatches";
  return {mismatches == 0 && heights > 100, d.str()};
}

// ---- 7 ---------------------------------------------------------------------

Outcome royalty_conservation() {
  std::mt19937_64 gen(777);
  std::size_t done = 0;
  std::size_t failures = 0;
  std::size_t zero_rate_checked = 0;
  const std::array<const char*, 4> names{"orig", "old", "new", "other"};
  while (done < 500) {
    AgentId orig{"orig"};
    AgentId old_owner = gen() % 4 == 0 ? orig : AgentId{"old"};
    AgentId new_owner{"new"};
    Amount cost = gen() % 1'000'000'000;
    std::uint64_t den = 1 + gen() % 1'000'000;
    std::uint64_t num = gen() % 5 == 0 ? 0 : gen() % (den + 1);
    tx::Rate rate(num, den);

    Chain c = ledger::genesis({{new_owner, cost + gen() % 10}});
    c = tx::mint(c, orig, AssetId{"art"}, 0).chain;
    if (old_owner != orig) c = tx::ownership_tx(c, orig, old_owner, AssetId{"art"}, 0, 1).chain;
    Tick t = c.last_time();
    auto out = tx::ownership_tx_royalty(c, old_owner, new_owner, AssetId{"art"}, cost, rate, t);
    ++done;
    if (!out.ok()) {
      ++failures;
      continue;
    }
    // Integer oracle; cost < 1e9 and num <= 1e6 keep the product in range.
    Amount expected_royalty = cost * num / den;
    std::int64_t sum = 0;
    std::map<std::string, std::int64_t> delta;
    for (const char* n : names) {
      delta[n] = oracle::balance(out.chain, n) - oracle::balance(c, n);
      sum += delta[n];
    }
    bool ok = sum == 0 && delta["new"] == -static_cast<std::int64_t>(cost) && delta["other"] == 0;
    if (old_owner == orig) {
      ok = ok && delta["orig"] == static_cast<std::int64_t>(cost);
    } else {
      ok = ok && delta["orig"] == static_cast<std::int64_t>(expected_royalty) &&
           delta["old"] == static_cast<std::int64_t>(cost - expected_royalty);
    }
    ok = ok && rate.royalty_on(cost) == expected_royalty;
    if (num == 0) {
      ++zero_rate_checked;
      auto plain = tx::ownership_tx(c, old_owner, new_owner, AssetId{"art"}, cost, t);
      for (const char* n : names) {
        ok = ok && oracle::balance(plain.chain, n) == oracle::balance(out.chain, n);
      }
      ok = ok && oracle::owner_list(plain.chain, "art") == oracle::owner_list(out.chain, "art");
    }
    if (!ok) ++failures;
  }
  std::ostringstream d;
  d << done << " royalty transfers, " << failures << " failures, " << zero_rate_checked
    << " zero-rate comparisons";
  return {failures == 0 && zero_rate_checked > 0, d.str()};
}

// ---- 8 ---------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  fs::path dir = fs::temp_directory_path() / ("nftsim-accept-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::size_t runs = 0;
  std::size_t differences = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    sim::Rng rng(seed + 20000);
    auto cfg = sim::random_config(rng, kShape);
    auto schedule = sim::random_schedule(rng, cfg, kShape);

    // Persist the inputs and run through the command line twice.
    fs::path cfg_file = dir / "config.jsonl";
    fs::path sched_file = dir / "schedule.jsonl";
    {
      std::ofstream c(cfg_file, std::ios::binary);
      sim::save_config(c, cfg);
      std::ofstream s(sched_file, std::ios::binary);
      sim::save_schedule(s, schedule);
    }
    std::array<std::string, 2> traces, chains, stdouts;
    for (int k = 0; k < 2; ++k) {
      fs::path t = dir / ("trace" + std::to_string(k) + ".jsonl");
      fs::path ch = dir / ("chain" + std::to_string(k) + ".jsonl");
      std::ostringstream out, err;
      cli::run_cli({"simulate", "--config", cfg_file.string(), "--schedule", sched_file.string(),
                    "--seed", std::to_string(cfg.seed), "--out", t.string(), "--chain-out",
                    ch.string()},
                   out, err);
      traces[k] = slurp(t);
      chains[k] = slurp(ch);
      stdouts[k] = out.str();
    }
    // In-process run and replay of the persisted trace.
    std::string direct = sim::save_trace(sim::run(sim::init(cfg), schedule));
    std::string replayed =
        sim::save_trace(sim::replay_trace(sim::load_trace_file((dir / "trace0.jsonl").string())));
    ++runs;
    if (traces[0].empty() || traces[0] != traces[1] || chains[0] != chains[1] ||
        stdouts[0] != stdouts[1] || direct != traces[0] || replayed != traces[0]) {
      ++differences;
    }
  }
  fs::remove_all(dir);
  std::ostringstream d;
  d << runs << " seeds run twice, replayed and persisted; " << differences << " differences";
  return {differences == 0, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {1, "notice table reproduction", notice_table},
      {2, "ownership-law suite", law_suite},
      {3, "knowledge theorem on generated and faulted traces", knowledge_theorem},
      {4, "group-extension scenario", group_extension},
      {5, "epistemic algebra", epistemic_algebra},
      {6, "oracle equivalence", oracle_equivalence},
      {7, "royalty conservation", royalty_conservation},
      {8, "determinism", determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
