#include "nftsim/transactions.hpp"

#include <limits>
#include <stdexcept>

namespace nft::tx {

using ledger::Block;
using ledger::MintRecord;
using ledger::StandardTx;
using ledger::TransferRecord;

namespace {

void require_time(const Chain& chain, Tick t) {
  if (t < chain.last_time()) {
    throw std::invalid_argument("submission time " + std::to_string(t) +
                                " precedes last block time " + std::to_string(chain.last_time()));
  }
}

bool can_afford(const Chain& chain, const AgentId& who, Amount c) {
  if (c > static_cast<Amount>(std::numeric_limits<ledger::SignedAmount>::max())) return false;
  return ledger::balance(chain, who) >= static_cast<ledger::SignedAmount>(c);
}

bool ever_owned(const Chain& chain, const AssetId& asset) {
  for (const Block& b : chain.blocks()) {
    if (!b.has_token) continue;
    if (const auto* tok = b.token(); tok && ledger::decode_token(*tok).asset == asset) return true;
  }
  return false;
}

TxOutcome reject(const Chain& chain, TxError e) { return TxOutcome{chain, e}; }

// Shared precondition of both transfer forms: Owns(old, asset, t) and
// balance(new) >= c.
std::optional<TxError> transfer_precondition(const Chain& chain, const AgentId& old_owner,
                                             const AgentId& new_owner, const AssetId& asset,
                                             Amount cost) {
  auto owner = ledger::current_owner(chain, asset);
  if (!owner || *owner != old_owner) return TxError::NotOwner;
  if (!can_afford(chain, new_owner, cost)) return TxError::InsufficientFunds;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(TxError e) {
  switch (e) {
    case TxError::AlreadyOwned: return "AlreadyOwned";
    case TxError::NotOwner: return "NotOwner";
    case TxError::InsufficientFunds: return "InsufficientFunds";
    case TxError::UnknownAsset: return "UnknownAsset";
  }
  return "?";
}

std::optional<TxError> tx_error_from_string(std::string_view s) {
  for (auto e : {TxError::AlreadyOwned, TxError::NotOwner, TxError::InsufficientFunds,
                 TxError::UnknownAsset}) {
    if (to_string(e) == s) return e;
  }
  return std::nullopt;
}

Rate::Rate(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
  if (den == 0 || num > den) throw std::invalid_argument("royalty rate must lie in [0,1]");
}

Amount Rate::royalty_on(Amount c) const noexcept {
  auto wide = static_cast<unsigned __int128>(c) * num_;
  return static_cast<Amount>(wide / den_);
}

TxOutcome mint(const Chain& chain, const AgentId& orig, const AssetId& asset, Tick t) {
  require_time(chain, t);
  if (ever_owned(chain, asset)) return reject(chain, TxError::AlreadyOwned);
  auto tok = ledger::encode_token(orig, asset, t + 1);
  return TxOutcome{chain.append(ledger::make_block(t + 1, MintRecord{std::move(tok)})), {}};
}

TxOutcome standard_tx(const Chain& chain, const AgentId& buyer, const AgentId& seller, Amount cost,
                      Tick t) {
  require_time(chain, t);
  if (!can_afford(chain, buyer, cost)) return reject(chain, TxError::InsufficientFunds);
  return TxOutcome{chain.append(ledger::make_block(t + 1, StandardTx{buyer, seller, cost, t + 1})),
                   {}};
}

TxOutcome ownership_tx(const Chain& chain, const AgentId& old_owner, const AgentId& new_owner,
                       const AssetId& asset, Amount cost, Tick t) {
  require_time(chain, t);
  if (auto e = transfer_precondition(chain, old_owner, new_owner, asset, cost)) {
    return reject(chain, *e);
  }
  TransferRecord rec{ledger::encode_token(new_owner, asset, t + 1),
                     {StandardTx{new_owner, old_owner, cost, t + 1}}};
  return TxOutcome{chain.append(ledger::make_block(t + 1, std::move(rec))), {}};
}

TxOutcome ownership_tx_royalty(const Chain& chain, const AgentId& old_owner,
                               const AgentId& new_owner, const AssetId& asset, Amount cost,
                               const Rate& rate, Tick t) {
  require_time(chain, t);
  if (auto e = transfer_precondition(chain, old_owner, new_owner, asset, cost)) {
    return reject(chain, *e);
  }
  // Precondition guarantees a non-empty owner list.
  AgentId orig = ledger::owner_list(chain, asset).front();
  Amount royalty = rate.royalty_on(cost);
  TransferRecord rec{ledger::encode_token(new_owner, asset, t + 1),
                     {StandardTx{new_owner, old_owner, cost - royalty, t + 1},
                      StandardTx{new_owner, orig, royalty, t + 1}}};
  return TxOutcome{chain.append(ledger::make_block(t + 1, std::move(rec))), {}};
}

Chain deposit(const Chain& chain, const AgentId& u, Amount amount, Tick t) {
  require_time(chain, t);
  return chain.append(
      ledger::make_block(t + 1, StandardTx{ledger::external_party(), u, amount, t + 1}));
}

TxOutcome withdraw(const Chain& chain, const AgentId& u, Amount amount, Tick t) {
  return standard_tx(chain, u, ledger::external_party(), amount, t);
}

namespace {

std::optional<std::string> check_block(const Chain& prefix, const Block& b) {
  const bool genesis_zone = prefix.empty() || prefix.last_time() == 0;
  if (b.time == 0) {
    if (!genesis_zone) return "time-0 block after genesis";
  } else if (b.time <= prefix.last_time()) {
    return "block time does not advance";
  }
  const bool token_payload = !std::holds_alternative<StandardTx>(b.payload);
  if (b.has_token != token_payload) return "header token flag disagrees with payload";

  for (const auto& leg : b.payments()) {
    if (leg.time != b.time) return "payment time differs from block time";
  }

  if (const auto* s = std::get_if<StandardTx>(&b.payload)) {
    if (ledger::is_external(s->buyer)) return std::nullopt;
    if (b.time == 0) return "only deposits may appear at time 0";
    if (!can_afford(prefix, s->buyer, s->cost)) return "buyer cannot afford payment";
    return std::nullopt;
  }
  if (b.time == 0) return "token block at time 0";

  ledger::Ownership own;
  try {
    own = ledger::decode_token(*b.token());
  } catch (const ledger::MalformedToken& e) {
    return std::string("malformed token: ") + e.what();
  }
  if (own.time != b.time) return "token time differs from block time";

  if (std::holds_alternative<MintRecord>(b.payload)) {
    if (ever_owned(prefix, own.asset)) return "asset already owned";
    return std::nullopt;
  }

  const auto& rec = std::get<TransferRecord>(b.payload);
  auto owners = ledger::owner_list(prefix, own.asset);
  if (owners.empty()) return "transfer of unowned asset";
  const AgentId& old_owner = owners.back();
  const AgentId& orig = owners.front();
  Amount total = 0;
  for (const auto& leg : rec.payments) {
    if (leg.buyer != own.agent) return "payment not made by new owner";
    total += leg.cost;
  }
  if (rec.payments.size() == 1) {
    if (rec.payments[0].seller != old_owner) return "payment not made to current owner";
  } else {
    const auto& p = rec.payments[0];
    const auto& q = rec.payments[1];
    bool in_order = p.seller == old_owner && q.seller == orig;
    bool swapped = p.seller == orig && q.seller == old_owner;
    if (!in_order && !swapped) return "royalty legs do not pay owner and originator";
  }
  if (!can_afford(prefix, own.agent, total)) return "new owner cannot afford transfer";
  return std::nullopt;
}

}  // namespace

std::optional<ReplayFailure> replay(const Chain& chain) {
  for (std::size_t h = 0; h < chain.height(); ++h) {
    if (auto why = check_block(chain.prefix(h), chain[h])) return ReplayFailure{h, *why};
  }
  return std::nullopt;
}

}  // namespace nft::tx
