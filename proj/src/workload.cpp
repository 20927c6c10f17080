#include "nftsim/workload.hpp"

#include <map>

namespace nft::sim {

Config random_config(Rng& rng, const WorkloadShape& shape) {
  Config c;
  auto nodes = rng.between(shape.min_nodes, shape.max_nodes);
  auto agents = rng.between(shape.min_agents, shape.max_agents);
  for (std::uint64_t i = 0; i < nodes; ++i) c.nodes.emplace_back("n" + std::to_string(i));
  for (std::uint64_t i = 0; i < agents; ++i) {
    c.wallets.push_back(WalletSpec{AgentId{"a" + std::to_string(i)}, c.nodes[rng.below(nodes)],
                                   rng.below(shape.max_deposit + 1)});
  }
  c.royalty = tx::Rate(rng.below(21), 100);
  c.seed = rng.below(1'000'000);
  return c;
}

std::vector<ScheduledRequest> random_schedule(Rng& rng, const Config& config,
                                              const WorkloadShape& shape) {
  std::vector<ScheduledRequest> out;
  if (config.wallets.empty()) return out;
  auto pick_agent = [&] { return config.wallets[rng.below(config.wallets.size())].owner; };
  std::map<AssetId, AgentId> expected_owner;
  std::vector<AssetId> assets;
  std::uint64_t next_asset = 0;
  Tick t = 0;

  auto ops = rng.between(1, shape.max_ops);
  for (std::uint64_t i = 0; i < ops; ++i) {
    t += rng.below(3);  // bursts share a tick and queue up
    TxRequest req;
    auto roll = rng.below(100);
    if (assets.empty() || roll < 25) {
      // Occasionally re-mint an existing asset to exercise AlreadyOwned.
      AssetId asset = (!assets.empty() && rng.chance(15)) ? assets[rng.below(assets.size())]
                                                          : AssetId{"x" + std::to_string(next_asset++)};
      AgentId orig = pick_agent();
      if (!expected_owner.count(asset)) {
        expected_owner.emplace(asset, orig);
        assets.push_back(asset);
      }
      req.kind = MintReq{orig, asset};
    } else if (roll < 50) {
      req.kind = StandardReq{pick_agent(), pick_agent(), rng.below(60)};
    } else {
      const AssetId& asset = assets[rng.below(assets.size())];
      AgentId old_owner = rng.chance(85) ? expected_owner.at(asset) : pick_agent();
      AgentId new_owner = pick_agent();
      Amount cost = rng.below(80);
      if (roll < 75) {
        req.kind = TransferReq{old_owner, new_owner, asset, cost};
      } else {
        req.kind = RoyaltyTransferReq{old_owner, new_owner, asset, cost,
                                      tx::Rate(rng.below(101), 100)};
      }
      expected_owner[asset] = new_owner;
    }
    out.push_back(ScheduledRequest{t, std::move(req)});
  }
  return out;
}

}  // namespace nft::sim
