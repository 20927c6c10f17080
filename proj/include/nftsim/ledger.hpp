// Chain data model, the ownership token codec and the chain queries that every
// other part of the simulator reads.
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace nft::ledger {

/// Opaque, non-empty identifier. Equality is byte equality.
template <class Tag>
class Identifier {
 public:
  Identifier() = default;
  explicit Identifier(std::string id) : id_(std::move(id)) {
    if (id_.empty()) throw std::invalid_argument("identifier must be non-empty");
  }

  const std::string& str() const noexcept { return id_; }
  bool empty() const noexcept { return id_.empty(); }

  friend auto operator<=>(const Identifier&, const Identifier&) = default;

 private:
  std::string id_;
};

struct AgentTag {};
struct AssetTag {};
using AgentId = Identifier<AgentTag>;
using AssetId = Identifier<AssetTag>;

/// The counterparty of deposits and withdrawals. It never appears as a
/// simulated agent and its balance is not constrained.
const AgentId& external_party();
bool is_external(const AgentId& a);

/// Logical time; one unit per block append.
using Tick = std::uint64_t;
/// Smallest currency unit.
using Amount = std::uint64_t;
/// Sales minus purchases. Only the external party may go negative.
using SignedAmount = std::int64_t;

class MalformedToken : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical bitstring image of an ownership fact (agent, asset, tick).
class Token {
 public:
  Token() = default;
  explicit Token(std::string bytes) : bytes_(std::move(bytes)) {}

  const std::string& bytes() const noexcept { return bytes_; }
  std::string hex() const;
  static Token from_hex(std::string_view hex);

  friend auto operator<=>(const Token&, const Token&) = default;

 private:
  std::string bytes_;
};

struct Ownership {
  AgentId agent;
  AssetId asset;
  Tick time = 0;

  friend auto operator<=>(const Ownership&, const Ownership&) = default;
};

/// varint(len(agent)) | agent | varint(len(asset)) | asset | varint(tick),
/// with LEB128 varints. Injective because every field is self-delimiting.
Token encode_token(const AgentId& agent, const AssetId& asset, Tick t);
Token encode_token(const Ownership& o);
/// Throws MalformedToken unless the bytes are exactly one canonical encoding.
Ownership decode_token(const Token& tok);

struct StandardTx {
  AgentId buyer;
  AgentId seller;
  Amount cost = 0;
  Tick time = 0;

  friend bool operator==(const StandardTx&, const StandardTx&) = default;
};

struct MintRecord {
  Token token;
  friend bool operator==(const MintRecord&, const MintRecord&) = default;
};

/// Ownership change: one payment leg (plain transfer) or two (with royalty).
struct TransferRecord {
  Token token;
  std::vector<StandardTx> payments;
  friend bool operator==(const TransferRecord&, const TransferRecord&) = default;
};

using Payload = std::variant<StandardTx, MintRecord, TransferRecord>;

struct Block {
  std::uint64_t height = 0;
  Tick time = 0;
  // Header index: ownership queries only visit blocks with this flag set.
  bool has_token = false;
  Payload payload;

  const Token* token() const noexcept;
  bool is_mint() const noexcept { return std::holds_alternative<MintRecord>(payload); }
  /// Payment legs in this block, including those inside a transfer.
  std::vector<StandardTx> payments() const;

  friend bool operator==(const Block&, const Block&) = default;
};

/// Builds a header-consistent block. Height is assigned on append.
Block make_block(Tick time, Payload payload);

/// Append-only block list. Copies share storage; appending never touches the
/// blocks visible through any existing copy.
class Chain {
 public:
  Chain();

  std::size_t height() const noexcept { return blocks_->size(); }
  bool empty() const noexcept { return blocks_->empty(); }
  const std::vector<Block>& blocks() const noexcept { return *blocks_; }
  const Block& operator[](std::size_t i) const { return (*blocks_)[i]; }
  const Block& back() const { return blocks_->back(); }
  /// Time of the last block, or 0 for an empty chain.
  Tick last_time() const noexcept;

  /// Returns a new chain with `b` appended at the next height.
  [[nodiscard]] Chain append(Block b) const;
  /// First `n` blocks.
  [[nodiscard]] Chain prefix(std::size_t n) const;
  /// Rebuilds from raw blocks without semantic checks; heights must be
  /// 0,1,2,... in order. Used by loaders and fault-construction in tests.
  static Chain from_blocks(std::vector<Block> blocks);

  bool shares_storage_with(const Chain& other) const noexcept { return blocks_ == other.blocks_; }

  friend bool operator==(const Chain& a, const Chain& b) {
    return a.blocks_ == b.blocks_ || *a.blocks_ == *b.blocks_;
  }

 private:
  explicit Chain(std::shared_ptr<const std::vector<Block>> blocks) : blocks_(std::move(blocks)) {}
  std::shared_ptr<const std::vector<Block>> blocks_;
};

/// Chain with one deposit block per entry, all stamped at time 0.
Chain genesis(const std::vector<std::pair<AgentId, Amount>>& deposits);

// ---- queries ---------------------------------------------------------------

/// Sales minus purchases of `u` over every payment leg on the chain.
SignedAmount balance(const Chain& chain, const AgentId& u);

/// Agents of every token for `asset`, in chain order. The first entry is the
/// originator.
std::vector<AgentId> owner_list(const Chain& chain, const AssetId& asset);

/// Assets with a mint record stamped at or before `t`.
std::set<AssetId> existing_assets(const Chain& chain, Tick t);

/// Last entry of the owner list, if any.
std::optional<AgentId> current_owner(const Chain& chain, const AssetId& asset);

/// Every ownership record carried by token blocks, in chain order.
std::vector<Ownership> ownership_records(const Chain& chain);

}  // namespace nft::ledger
