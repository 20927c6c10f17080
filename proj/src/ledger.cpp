#include "nftsim/ledger.hpp"

#include <algorithm>

namespace nft::ledger {

namespace {

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<char>((v & 0x7f) | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<char>(v));
}

// Rejects truncated, overlong (> 64 bit) and non-minimal encodings so that
// every accepted byte string has exactly one preimage.
std::uint64_t get_varint(std::string_view in, std::size_t& pos) {
  std::uint64_t v = 0;
  for (int shift = 0;; shift += 7) {
    if (pos >= in.size()) throw MalformedToken("truncated varint");
    if (shift > 63) throw MalformedToken("varint overflow");
    auto byte = static_cast<std::uint8_t>(in[pos++]);
    std::uint64_t chunk = byte & 0x7f;
    if (shift == 63 && chunk > 1) throw MalformedToken("varint overflow");
    v |= chunk << shift;
    if ((byte & 0x80) == 0) {
      if (byte == 0 && shift != 0) throw MalformedToken("non-minimal varint");
      return v;
    }
  }
}

std::string get_field(std::string_view in, std::size_t& pos) {
  auto len = get_varint(in, pos);
  if (len == 0) throw MalformedToken("empty identifier");
  if (len > in.size() - pos) throw MalformedToken("identifier overruns token");
  std::string s(in.substr(pos, len));
  pos += len;
  return s;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

const AgentId& external_party() {
  static const AgentId ext{"<external>"};
  return ext;
}

bool is_external(const AgentId& a) { return a == external_party(); }

std::string Token::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (unsigned char c : bytes_) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 0xf]);
  }
  return out;
}

Token Token::from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw MalformedToken("odd-length hex");
  std::string bytes;
  bytes.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_value(hex[i]);
    int lo = hex_value(hex[i + 1]);
    if (hi < 0 || lo < 0) throw MalformedToken("bad hex digit");
    bytes.push_back(static_cast<char>(hi << 4 | lo));
  }
  return Token{std::move(bytes)};
}

Token encode_token(const AgentId& agent, const AssetId& asset, Tick t) {
  std::string out;
  out.reserve(agent.str().size() + asset.str().size() + 6);
  put_varint(out, agent.str().size());
  out += agent.str();
  put_varint(out, asset.str().size());
  out += asset.str();
  put_varint(out, t);
  return Token{std::move(out)};
}

Token encode_token(const Ownership& o) { return encode_token(o.agent, o.asset, o.time); }

Ownership decode_token(const Token& tok) {
  std::string_view in = tok.bytes();
  if (in.empty()) throw MalformedToken("empty token");
  std::size_t pos = 0;
  AgentId agent{get_field(in, pos)};
  AssetId asset{get_field(in, pos)};
  Tick t = get_varint(in, pos);
  if (pos != in.size()) throw MalformedToken("trailing bytes after token");
  return Ownership{std::move(agent), std::move(asset), t};
}

const Token* Block::token() const noexcept {
  if (auto* m = std::get_if<MintRecord>(&payload)) return &m->token;
  if (auto* x = std::get_if<TransferRecord>(&payload)) return &x->token;
  return nullptr;
}

std::vector<StandardTx> Block::payments() const {
  if (auto* s = std::get_if<StandardTx>(&payload)) return {*s};
  if (auto* x = std::get_if<TransferRecord>(&payload)) return x->payments;
  return {};
}

Block make_block(Tick time, Payload payload) {
  Block b;
  b.time = time;
  b.has_token = !std::holds_alternative<StandardTx>(payload);
  b.payload = std::move(payload);
  return b;
}

Chain::Chain() : blocks_(std::make_shared<const std::vector<Block>>()) {}

Tick Chain::last_time() const noexcept { return blocks_->empty() ? 0 : blocks_->back().time; }

Chain Chain::append(Block b) const {
  auto next = std::make_shared<std::vector<Block>>();
  next->reserve(blocks_->size() + 1);
  *next = *blocks_;
  b.height = next->size();
  next->push_back(std::move(b));
  return Chain{std::move(next)};
}

Chain Chain::prefix(std::size_t n) const {
  if (n >= blocks_->size()) return *this;
  return Chain{std::make_shared<const std::vector<Block>>(blocks_->begin(), blocks_->begin() + n)};
}

Chain Chain::from_blocks(std::vector<Block> blocks) {
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].height != i) {
      throw std::invalid_argument("block heights must be consecutive from 0; found " +
                                  std::to_string(blocks[i].height) + " at position " +
                                  std::to_string(i));
    }
  }
  return Chain{std::make_shared<const std::vector<Block>>(std::move(blocks))};
}

Chain genesis(const std::vector<std::pair<AgentId, Amount>>& deposits) {
  std::vector<Block> blocks;
  blocks.reserve(deposits.size());
  for (const auto& [agent, amount] : deposits) {
    Block b = make_block(0, StandardTx{external_party(), agent, amount, 0});
    b.height = blocks.size();
    blocks.push_back(std::move(b));
  }
  return Chain::from_blocks(std::move(blocks));
}

SignedAmount balance(const Chain& chain, const AgentId& u) {
  SignedAmount total = 0;
  auto tally = [&](const StandardTx& tx) {
    if (tx.seller == u) total += static_cast<SignedAmount>(tx.cost);
    if (tx.buyer == u) total -= static_cast<SignedAmount>(tx.cost);
  };
  for (const Block& b : chain.blocks()) {
    if (auto* s = std::get_if<StandardTx>(&b.payload)) {
      tally(*s);
    } else if (auto* x = std::get_if<TransferRecord>(&b.payload)) {
      for (const auto& leg : x->payments) tally(leg);
    }
  }
  return total;
}

std::vector<AgentId> owner_list(const Chain& chain, const AssetId& asset) {
  std::vector<AgentId> owners;
  for (const Block& b : chain.blocks()) {
    if (!b.has_token) continue;
    const Token* tok = b.token();
    if (tok == nullptr) continue;
    Ownership o = decode_token(*tok);
    if (o.asset == asset) owners.push_back(std::move(o.agent));
  }
  return owners;
}

std::set<AssetId> existing_assets(const Chain& chain, Tick t) {
  std::set<AssetId> out;
  for (const Block& b : chain.blocks()) {
    auto* m = std::get_if<MintRecord>(&b.payload);
    if (m == nullptr || b.time > t) continue;
    out.insert(decode_token(m->token).asset);
  }
  return out;
}

std::optional<AgentId> current_owner(const Chain& chain, const AssetId& asset) {
  auto owners = owner_list(chain, asset);
  if (owners.empty()) return std::nullopt;
  return owners.back();
}

std::vector<Ownership> ownership_records(const Chain& chain) {
  std::vector<Ownership> out;
  for (const Block& b : chain.blocks()) {
    if (!b.has_token) continue;
    if (const Token* tok = b.token()) out.push_back(decode_token(*tok));
  }
  return out;
}

}  // namespace nft::ledger
