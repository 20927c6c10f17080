// The six temporal ownership laws, checked over a finite history of chain
// snapshots. Snapshot k is the chain as it stood at tick k. "Always" laws are
// checked at every snapshot, "next" laws at every consecutive pair.
#pragma once

#include <array>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "nftsim/ledger.hpp"

namespace nft::laws {

using ledger::AgentId;
using ledger::AssetId;
using ledger::Chain;
using ledger::Tick;

struct History {
  std::vector<Chain> snapshots;
};

struct Violation {
  Tick tick = 0;
  std::string description;
};

struct LawReport {
  int law = 0;
  std::vector<Violation> violations;

  bool holds() const noexcept { return violations.empty(); }
};

/// Agents a with Owns(a, asset, t): holders of the latest token for `asset`
/// stamped at or before t. More than one only when tokens tie on time.
std::set<AgentId> owners_at(const Chain& chain, const AssetId& asset, Tick t);

/// Assets named by any token stamped at or before t.
std::set<AssetId> tokenised_assets(const Chain& chain, Tick t);

/// Distinct (agent, asset, time) ownership records with time <= t.
std::size_t ownership_count(const Chain& chain, Tick t);

LawReport check_owner_exists(const History& h);         // law 1
LawReport check_owner_unique(const History& h);         // law 2
LawReport check_nonexistent_unowned(const History& h);  // law 3
LawReport check_assets_monotone(const History& h);      // law 4
LawReport check_owns_size_monotone(const History& h);   // law 5
LawReport check_owner_prefix(const History& h);         // law 6

std::array<LawReport, 6> check_all(const History& h);

/// Laws 1-3 at a single snapshot.
std::vector<LawReport> check_fundamental_at(const Chain& chain, Tick t);

/// One line per violation: "<tick> law<k> <description>".
void write_report(std::ostream& out, const std::array<LawReport, 6>& reports);

/// Expands a single chain into the history of its time prefixes, one
/// snapshot per tick from 0 to the last block time.
History history_of(const Chain& chain);

}  // namespace nft::laws
