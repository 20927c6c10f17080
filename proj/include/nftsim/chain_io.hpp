// Line-delimited chain persistence. One self-describing JSON record per block:
//
//   {"has_token":false,"height":0,"kind":"standard","payments":[...],"time":0}
//   {"has_token":true,"height":1,"kind":"mint","time":1,"token":"05616c696365..."}
//   {"has_token":true,"height":2,"kind":"transfer","payments":[...],"time":2,"token":"..."}
//
// Payment legs are {"buyer","cost","seller","time"}. Keys are emitted sorted so
// that save(load(text)) == text for any text produced by save.
#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "nftsim/ledger.hpp"

namespace nft::ledger {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json block_to_json(const Block& b);
Block block_from_json(const nlohmann::json& j);

nlohmann::json payment_to_json(const StandardTx& tx);
StandardTx payment_from_json(const nlohmann::json& j);

void save_chain(std::ostream& out, const Chain& chain);
std::string save_chain(const Chain& chain);
/// Parses records only; semantic validity is checked by tx::replay and the
/// law checkers. Throws FormatError on malformed records.
Chain load_chain(std::istream& in);
Chain load_chain_string(const std::string& text);

void save_chain_file(const std::string& path, const Chain& chain);
Chain load_chain_file(const std::string& path);

}  // namespace nft::ledger
