#include "nftsim/chain_io.hpp"

#include <fstream>
#include <sstream>

namespace nft::ledger {

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

AgentId agent_field(const json& j, const char* key) {
  auto s = field<std::string>(j, key);
  if (s.empty()) throw FormatError(std::string("empty agent in '") + key + "'");
  return AgentId{std::move(s)};
}

Token token_field(const json& j) {
  try {
    return Token::from_hex(field<std::string>(j, "token"));
  } catch (const MalformedToken& e) {
    throw FormatError(std::string("bad token: ") + e.what());
  }
}

std::vector<StandardTx> payments_field(const json& j) {
  auto it = j.find("payments");
  if (it == j.end() || !it->is_array()) throw FormatError("missing payments array");
  std::vector<StandardTx> out;
  for (const auto& p : *it) out.push_back(payment_from_json(p));
  return out;
}

}  // namespace

json payment_to_json(const StandardTx& tx) {
  return json{{"buyer", tx.buyer.str()},
              {"seller", tx.seller.str()},
              {"cost", tx.cost},
              {"time", tx.time}};
}

StandardTx payment_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("payment must be an object");
  return StandardTx{agent_field(j, "buyer"), agent_field(j, "seller"),
                    field<Amount>(j, "cost"), field<Tick>(j, "time")};
}

json block_to_json(const Block& b) {
  json j{{"height", b.height}, {"time", b.time}, {"has_token", b.has_token}};
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, StandardTx>) {
          j["kind"] = "standard";
          j["payments"] = json::array({payment_to_json(p)});
        } else if constexpr (std::is_same_v<P, MintRecord>) {
          j["kind"] = "mint";
          j["token"] = p.token.hex();
        } else {
          j["kind"] = "transfer";
          j["token"] = p.token.hex();
          json legs = json::array();
          for (const auto& leg : p.payments) legs.push_back(payment_to_json(leg));
          j["payments"] = std::move(legs);
        }
      },
      b.payload);
  return j;
}

Block block_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("block record must be an object");
  Block b;
  b.height = field<std::uint64_t>(j, "height");
  b.time = field<Tick>(j, "time");
  b.has_token = field<bool>(j, "has_token");
  auto kind = field<std::string>(j, "kind");
  if (kind == "standard") {
    auto legs = payments_field(j);
    if (legs.size() != 1) throw FormatError("standard block needs exactly one payment");
    b.payload = legs.front();
  } else if (kind == "mint") {
    b.payload = MintRecord{token_field(j)};
  } else if (kind == "transfer") {
    auto legs = payments_field(j);
    if (legs.empty() || legs.size() > 2) throw FormatError("transfer block needs one or two payments");
    b.payload = TransferRecord{token_field(j), std::move(legs)};
  } else {
    throw FormatError("unknown block kind '" + kind + "'");
  }
  return b;
}

void save_chain(std::ostream& out, const Chain& chain) {
  for (const Block& b : chain.blocks()) out << block_to_json(b).dump() << '\n';
}

std::string save_chain(const Chain& chain) {
  std::ostringstream os;
  save_chain(os, chain);
  return os.str();
}

Chain load_chain(std::istream& in) {
  std::vector<Block> blocks;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
    try {
      blocks.push_back(block_from_json(j));
    } catch (const FormatError& e) {
      throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  try {
    return Chain::from_blocks(std::move(blocks));
  } catch (const std::invalid_argument& e) {
    throw FormatError(e.what());
  }
}

Chain load_chain_string(const std::string& text) {
  std::istringstream is(text);
  return load_chain(is);
}

void save_chain_file(const std::string& path, const Chain& chain) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_chain(out, chain);
}

Chain load_chain_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_chain(in);
}

}  // namespace nft::ledger
