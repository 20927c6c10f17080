#include "nftsim/netsim.hpp"

#include <type_traits>

#include "nftsim/laws.hpp"
#include "nftsim/trace_io.hpp"

namespace nft::sim {

namespace {

void validate(const Config& c) {
  AgentSet seen;
  for (const auto& n : c.nodes) {
    if (n.empty()) throw BadConfig("empty node id");
    if (ledger::is_external(n)) throw BadConfig("node id is reserved: " + n.str());
    if (!seen.insert(n).second) throw BadConfig("duplicate id " + n.str());
  }
  AgentSet nodes(c.nodes.begin(), c.nodes.end());
  for (const auto& w : c.wallets) {
    if (w.owner.empty()) throw BadConfig("empty wallet owner");
    if (ledger::is_external(w.owner)) throw BadConfig("wallet owner is reserved: " + w.owner.str());
    if (!seen.insert(w.owner).second) throw BadConfig("duplicate id " + w.owner.str());
    if (!nodes.count(w.home_node)) {
      throw BadConfig("wallet " + w.owner.str() + " assigned to unknown node '" +
                      w.home_node.str() + "'");
    }
  }
  for (const auto& x : c.faults.withhold_certificate) {
    if (!seen.count(x)) throw BadConfig("fault names unknown agent " + x.str());
  }
  for (const auto& x : c.faults.withhold_announcement) {
    if (!seen.count(x)) throw BadConfig("fault names unknown agent " + x.str());
  }
}

tx::TxOutcome apply(const Chain& chain, const TxRequest& req, Tick t) {
  return std::visit(
      [&](const auto& r) -> tx::TxOutcome {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, MintReq>) {
          return tx::mint(chain, r.orig, r.asset, t);
        } else if constexpr (std::is_same_v<R, StandardReq>) {
          return tx::standard_tx(chain, r.buyer, r.seller, r.cost, t);
        } else if constexpr (std::is_same_v<R, TransferReq>) {
          return tx::ownership_tx(chain, r.old_owner, r.new_owner, r.asset, r.cost, t);
        } else {
          return tx::ownership_tx_royalty(chain, r.old_owner, r.new_owner, r.asset, r.cost, r.rate, t);
        }
      },
      req.kind);
}

// Broadcast over the certified network, then extend certification to each
// wallet owner through its home node.
void certify_token(SimState& sim, const epi::Atom& tok, const std::optional<AgentId>& producer) {
  sim.kb.assert_world(tok);
  if (producer) sim.kb.observe(*producer, tok);
  AgentSet group = sim.net();
  sim.kb.announce_certified(group, tok, honesty_atom());
  const auto& faults = sim.config.faults;
  for (const auto& w : sim.wallets) {
    epi::ExtendOptions opts;
    opts.send_certificate = !faults.withhold_certificate.count(w.owner);
    opts.announce_membership = !faults.withhold_announcement.count(w.owner);
    epi::extend_pc(sim.kb, group, w.owner, w.home_node, tok, opts);
    auto grown = group;
    grown.insert(w.owner);
    // Only a fault leaves the grown group uncertified; keep extending from
    // the last certified group so later wallets still get both messages.
    if (epi::publicly_certified(sim.kb, grown, tok)) group = std::move(grown);
  }
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

void fnv_mix(std::uint64_t& h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
}

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= kFnvPrime;
  }
}

}  // namespace

const epi::Atom& honesty_atom() {
  static const epi::Atom a{"net-honest", ""};
  return a;
}

AgentSet SimState::net() const {
  AgentSet out;
  for (const auto& n : nodes) out.insert(n.id);
  return out;
}

AgentSet SimState::all_agents() const {
  AgentSet out = net();
  for (const auto& w : wallets) out.insert(w.owner);
  return out;
}

SimState init(const Config& config) {
  validate(config);
  SimState sim;
  sim.config = config;
  std::vector<std::pair<AgentId, Amount>> deposits;
  for (const auto& w : config.wallets) {
    if (w.deposit > 0) deposits.emplace_back(w.owner, w.deposit);
    sim.wallets.push_back(Wallet{w.owner, w.home_node});
  }
  sim.chain = ledger::genesis(deposits);
  for (const auto& n : config.nodes) sim.nodes.push_back(Node{n, sim.chain});
  sim.kb.assert_world(honesty_atom());
  sim.kb.assume_pc(sim.net(), honesty_atom());
  return sim;
}

void submit(SimState& sim, TxRequest request) { sim.pending.push_back(std::move(request)); }

Event tick(SimState& sim) {
  Event e;
  e.tick = sim.tick;
  if (!sim.pending.empty()) {
    TxRequest req = std::move(sim.pending.front());
    sim.pending.pop_front();
    auto outcome = apply(sim.chain, req, sim.tick);
    e.request = std::move(req);
    if (!outcome.ok()) {
      e.outcome = Outcome::Rejected;
      e.error = outcome.error;
    } else {
      e.outcome = Outcome::Applied;
      sim.chain = std::move(outcome.chain);
      for (auto& n : sim.nodes) n.chain = sim.chain;
      const ledger::Block& b = sim.chain.back();
      e.block = b;
      if (!sim.nodes.empty()) {
        e.producer = sim.nodes[(sim.config.seed + sim.tick) % sim.nodes.size()].id;
      }
      if (const auto* tok = b.token()) {
        certify_token(sim, epi::Atom::token(*tok), e.producer);
      }
    }
  }
  ++sim.tick;
  return e;
}

bool nodes_agree(const SimState& sim) {
  for (const auto& n : sim.nodes) {
    if (!(n.chain == sim.chain)) return false;
  }
  return true;
}

std::uint64_t chain_digest(std::uint64_t previous, const Event& e, const SimState& after) {
  std::uint64_t h = kFnvOffset;
  fnv_mix(h, previous);
  fnv_mix(h, event_to_json(e).dump());
  fnv_mix(h, static_cast<std::uint64_t>(after.chain.height()));
  fnv_mix(h, static_cast<std::uint64_t>(after.kb.fact_count()));
  fnv_mix(h, static_cast<std::uint64_t>(after.kb.world().size()));
  return h;
}

namespace {

std::vector<AgentId> agents_named(const TxRequest& r) {
  return std::visit(
      [](const auto& k) -> std::vector<AgentId> {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, MintReq>) {
          return {k.orig};
        } else if constexpr (std::is_same_v<K, StandardReq>) {
          return {k.buyer, k.seller};
        } else {
          return {k.old_owner, k.new_owner};
        }
      },
      r.kind);
}

}  // namespace

Trace run(SimState sim, const std::vector<ScheduledRequest>& schedule, Tick min_ticks) {
  AgentSet owners;
  for (const auto& w : sim.wallets) owners.insert(w.owner);
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    for (const auto& a : agents_named(schedule[i].request)) {
      if (!owners.count(a)) {
        throw BadSchedule("request " + std::to_string(i) + " names " + a.str() +
                          ", who has no wallet");
      }
    }
    if (schedule[i].tick < sim.tick) {
      throw BadSchedule("request " + std::to_string(i) + " scheduled before the current tick");
    }
    if (i > 0 && schedule[i].tick < schedule[i - 1].tick) {
      throw BadSchedule("schedule is not sorted by tick at entry " + std::to_string(i));
    }
  }
  Trace trace;
  trace.config = sim.config;
  trace.schedule = schedule;
  trace.min_ticks = min_ticks;
  trace.states.push_back(Snapshot{sim.tick, sim.chain, sim.kb});
  std::uint64_t digest = kFnvOffset;
  std::size_t next = 0;
  while (sim.tick < min_ticks || next < schedule.size() || !sim.pending.empty()) {
    while (next < schedule.size() && schedule[next].tick <= sim.tick) {
      TxRequest req = schedule[next++].request;
      req.submitted_at = sim.tick;
      submit(sim, std::move(req));
    }
    Event e = tick(sim);
    digest = chain_digest(digest, e, sim);
    trace.entries.push_back(TraceEntry{std::move(e), digest});
    trace.states.push_back(Snapshot{sim.tick, sim.chain, sim.kb});
  }
  trace.final_state = std::move(sim);
  return trace;
}

Theorem1Report verify_theorem1(const Trace& trace) {
  Theorem1Report report;
  AgentSet everyone;
  for (const auto& n : trace.config.nodes) everyone.insert(n);
  for (const auto& w : trace.config.wallets) everyone.insert(w.owner);

  auto check_token = [&](const Snapshot& s, const ledger::Token& tok) {
    auto gap = epi::pc_gap(s.kb, everyone, epi::Fact(epi::Atom::token(tok)));
    if (!gap) return;
    report.holds = false;
    if (!report.gap) report.gap = gap;
    auto own = ledger::decode_token(tok);
    report.failures.push_back("tick " + std::to_string(s.tick) + ": token (" + own.agent.str() +
                              "," + own.asset.str() + "," + std::to_string(own.time) +
                              ") not certified: " + gap->first.str() + " does not know that " +
                              gap->second.str() + " knows it");
  };

  std::size_t seen_height = 0;
  for (const auto& s : trace.states) {
    for (const auto& r : laws::check_fundamental_at(s.chain, s.tick)) {
      for (const auto& v : r.violations) {
        report.holds = false;
        report.failures.push_back("tick " + std::to_string(v.tick) + ": law " +
                                  std::to_string(r.law) + ": " + v.description);
      }
    }
    for (std::size_t h = seen_height; h < s.chain.height(); ++h) {
      if (const auto* tok = s.chain[h].token()) check_token(s, *tok);
    }
    seen_height = std::max(seen_height, s.chain.height());
  }
  if (!trace.states.empty() && report.holds) {
    const auto& last = trace.states.back();
    for (const auto& b : last.chain.blocks()) {
      if (const auto* tok = b.token()) check_token(last, *tok);
    }
  }
  return report;
}

}  // namespace nft::sim
