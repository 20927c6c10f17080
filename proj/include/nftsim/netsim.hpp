// Deterministic discrete-time network simulation. Every tick the network takes
// at most one pending request, applies it to the chain, broadcasts the block
// to all nodes and, for token blocks, runs the knowledge protocol that makes
// the new ownership fact publicly certified among nodes and wallet owners.
#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nftsim/epistemic.hpp"
#include "nftsim/ledger.hpp"
#include "nftsim/transactions.hpp"

namespace nft::sim {

using epi::AgentSet;
using epi::KnowledgeBase;
using ledger::AgentId;
using ledger::Amount;
using ledger::AssetId;
using ledger::Chain;
using ledger::Tick;

class BadConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BadSchedule : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct MintReq {
  AgentId orig;
  AssetId asset;
  friend bool operator==(const MintReq&, const MintReq&) = default;
};
struct StandardReq {
  AgentId buyer;
  AgentId seller;
  Amount cost = 0;
  friend bool operator==(const StandardReq&, const StandardReq&) = default;
};
struct TransferReq {
  AgentId old_owner;
  AgentId new_owner;
  AssetId asset;
  Amount cost = 0;
  friend bool operator==(const TransferReq&, const TransferReq&) = default;
};
struct RoyaltyTransferReq {
  AgentId old_owner;
  AgentId new_owner;
  AssetId asset;
  Amount cost = 0;
  tx::Rate rate;
  friend bool operator==(const RoyaltyTransferReq&, const RoyaltyTransferReq&) = default;
};

struct TxRequest {
  std::variant<MintReq, StandardReq, TransferReq, RoyaltyTransferReq> kind;
  Tick submitted_at = 0;
  friend bool operator==(const TxRequest&, const TxRequest&) = default;
};

/// Test-only hooks that withhold one of the two wallet-extension messages.
struct FaultPlan {
  AgentSet withhold_certificate;
  AgentSet withhold_announcement;

  bool empty() const noexcept { return withhold_certificate.empty() && withhold_announcement.empty(); }
  friend bool operator==(const FaultPlan&, const FaultPlan&) = default;
};

struct WalletSpec {
  AgentId owner;
  AgentId home_node;
  Amount deposit = 0;
  friend bool operator==(const WalletSpec&, const WalletSpec&) = default;
};

struct Config {
  std::vector<AgentId> nodes;
  std::vector<WalletSpec> wallets;
  tx::Rate royalty;  // default for royalty transfers read from schedule files
  std::uint64_t seed = 0;
  FaultPlan faults;
  friend bool operator==(const Config&, const Config&) = default;
};

struct Node {
  AgentId id;
  Chain chain;
};

struct Wallet {
  AgentId owner;
  AgentId home_node;
};

struct SimState {
  Config config;
  Tick tick = 0;
  Chain chain;
  std::vector<Node> nodes;
  std::vector<Wallet> wallets;
  KnowledgeBase kb;
  std::deque<TxRequest> pending;

  AgentSet net() const;
  /// Nodes and wallet owners.
  AgentSet all_agents() const;
};

/// "All nodes are honest and run the chain software".
const epi::Atom& honesty_atom();

enum class Outcome { Idle, Applied, Rejected };

struct Event {
  Tick tick = 0;
  Outcome outcome = Outcome::Idle;
  std::optional<TxRequest> request;
  std::optional<tx::TxError> error;
  std::optional<ledger::Block> block;
  std::optional<AgentId> producer;
  friend bool operator==(const Event&, const Event&) = default;
};

struct Snapshot {
  Tick tick = 0;
  Chain chain;
  KnowledgeBase kb;
};

struct TraceEntry {
  Event event;
  std::uint64_t digest = 0;
  friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct ScheduledRequest {
  Tick tick = 0;
  TxRequest request;
  friend bool operator==(const ScheduledRequest&, const ScheduledRequest&) = default;
};

struct Trace {
  Config config;
  std::vector<ScheduledRequest> schedule;
  Tick min_ticks = 0;
  std::vector<TraceEntry> entries;
  /// states[k] is the world at the start of tick k; states.size() ==
  /// entries.size() + 1.
  std::vector<Snapshot> states;
  SimState final_state;
};

/// Genesis: deposits as time-0 blocks, PC(nodes, honesty) assumed.
SimState init(const Config& config);

void submit(SimState& sim, TxRequest request);

/// Advances one tick and returns what happened.
Event tick(SimState& sim);

/// Feeds each scheduled request at its tick and ticks until at least
/// `min_ticks` ticks have elapsed and nothing is left to do.
Trace run(SimState sim, const std::vector<ScheduledRequest>& schedule, Tick min_ticks = 0);

/// Digest chaining the previous digest with one event.
std::uint64_t chain_digest(std::uint64_t previous, const Event& e, const SimState& after);

struct Theorem1Report {
  bool holds = true;
  std::vector<std::string> failures;
  /// First (v, x) with not K_v K_x tok, if any.
  std::optional<std::pair<AgentId, AgentId>> gap;
};

/// Laws 1-3 at every state, and PC(all agents, tok) for every token from the
/// state in which it first appears. Knowledge never shrinks, so the latter
/// covers every later state as well; the final state is re-checked anyway.
Theorem1Report verify_theorem1(const Trace& trace);

/// True when every node holds the same chain as the simulation.
bool nodes_agree(const SimState& sim);

}  // namespace nft::sim
