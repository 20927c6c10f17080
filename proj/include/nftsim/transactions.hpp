// State transitions over the chain: mint, standard payment, ownership transfer
// and ownership transfer with originator royalty. Each operation is a pure
// function from chain to chain; a rejected request returns the input chain.
#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "nftsim/ledger.hpp"

namespace nft::tx {

using ledger::Amount;
using ledger::AgentId;
using ledger::AssetId;
using ledger::Chain;
using ledger::Tick;

enum class TxError { AlreadyOwned, NotOwner, InsufficientFunds, UnknownAsset };

std::string_view to_string(TxError e);
std::optional<TxError> tx_error_from_string(std::string_view s);

/// Royalty share num/den, 0 <= num <= den, den > 0.
class Rate {
 public:
  Rate() = default;
  Rate(std::uint64_t num, std::uint64_t den);

  std::uint64_t num() const noexcept { return num_; }
  std::uint64_t den() const noexcept { return den_; }
  /// floor(c * num / den), computed without overflow.
  Amount royalty_on(Amount c) const noexcept;

  friend bool operator==(const Rate&, const Rate&) = default;

 private:
  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

struct TxOutcome {
  Chain chain;
  std::optional<TxError> error;

  bool ok() const noexcept { return !error.has_value(); }
};

// Every operation submitted at time `t` stamps its block (and everything
// inside it) with t + 1. Blocks are strictly time-ordered: calling with
// t < chain.last_time() violates the caller contract and throws
// std::invalid_argument.

TxOutcome mint(const Chain& chain, const AgentId& orig, const AssetId& asset, Tick t);

TxOutcome standard_tx(const Chain& chain, const AgentId& buyer, const AgentId& seller, Amount cost,
                      Tick t);

TxOutcome ownership_tx(const Chain& chain, const AgentId& old_owner, const AgentId& new_owner,
                       const AssetId& asset, Amount cost, Tick t);

/// The originator is the first entry of the asset's owner list. Legs are
/// stored as (new -> old, c - royalty), (new -> orig, royalty).
TxOutcome ownership_tx_royalty(const Chain& chain, const AgentId& old_owner,
                               const AgentId& new_owner, const AssetId& asset, Amount cost,
                               const Rate& rate, Tick t);

/// Sale to `u` from the external party; no precondition.
Chain deposit(const Chain& chain, const AgentId& u, Amount amount, Tick t);

/// Purchase by `u` from the external party, gated by u's balance.
TxOutcome withdraw(const Chain& chain, const AgentId& u, Amount amount, Tick t);

struct ReplayFailure {
  std::size_t height = 0;
  std::string reason;
};

/// Re-checks every block against the preconditions of the operation that
/// would have produced it, starting from the empty chain. Time-0 standard
/// blocks bought by the external party are accepted as genesis deposits.
/// Royalty legs are accepted in either order.
std::optional<ReplayFailure> replay(const Chain& chain);

}  // namespace nft::tx
