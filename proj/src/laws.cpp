#include "nftsim/laws.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace nft::laws {

using ledger::Ownership;

namespace {

// Everything the per-tick laws need from one snapshot, decoded once.
struct View {
  std::vector<Ownership> records;  // token records with time <= t, chain order
  std::set<AssetId> existing;
  std::map<AssetId, std::set<AgentId>> owners;
  std::map<AssetId, Tick> latest;

  View(const Chain& chain, Tick t) : existing(ledger::existing_assets(chain, t)) {
    for (auto& o : ledger::ownership_records(chain)) {
      if (o.time > t) continue;
      auto [it, fresh] = latest.try_emplace(o.asset, o.time);
      auto& holders = owners[o.asset];
      if (!fresh && o.time > it->second) {
        it->second = o.time;
        holders.clear();
      }
      if (o.time == it->second) holders.insert(o.agent);
      records.push_back(std::move(o));
    }
  }

  const std::set<AgentId>& owners_of(const AssetId& a) const {
    static const std::set<AgentId> none;
    auto it = owners.find(a);
    return it == owners.end() ? none : it->second;
  }
};

std::vector<AgentId> owner_list_until(const std::vector<Ownership>& records, const AssetId& asset) {
  std::vector<AgentId> out;
  for (const auto& o : records) {
    if (o.asset == asset) out.push_back(o.agent);
  }
  return out;
}

std::string join(const std::vector<AgentId>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += v[i].str();
  }
  return s + "]";
}

std::string join(const std::set<AgentId>& v) { return join(std::vector<AgentId>(v.begin(), v.end())); }

void owner_exists_at(const View& v, Tick t, std::vector<Violation>& out) {
  for (const auto& a : v.existing) {
    if (v.owners_of(a).empty()) out.push_back({t, "existing asset " + a.str() + " has no owner"});
  }
}

void owner_unique_at(const View& v, Tick t, std::vector<Violation>& out) {
  for (const auto& a : v.existing) {
    const auto& owners = v.owners_of(a);
    if (owners.size() > 1) {
      out.push_back({t, "asset " + a.str() + " has " + std::to_string(owners.size()) +
                            " owners " + join(owners)});
    }
  }
}

void nonexistent_unowned_at(const View& v, Tick t, std::vector<Violation>& out) {
  for (const auto& [a, owners] : v.owners) {
    if (v.existing.count(a) || owners.empty()) continue;
    out.push_back({t, "non-existing asset " + a.str() + " is owned by " + join(owners)});
  }
}

LawReport each_snapshot(int law, const History& h,
                        void (*check)(const View&, Tick, std::vector<Violation>&)) {
  LawReport r{law, {}};
  for (std::size_t t = 0; t < h.snapshots.size(); ++t) {
    check(View(h.snapshots[t], t), t, r.violations);
  }
  return r;
}

}  // namespace

std::set<AgentId> owners_at(const Chain& chain, const AssetId& asset, Tick t) {
  return View(chain, t).owners_of(asset);
}

std::set<AssetId> tokenised_assets(const Chain& chain, Tick t) {
  std::set<AssetId> out;
  for (const auto& [a, _] : View(chain, t).owners) out.insert(a);
  return out;
}

std::size_t ownership_count(const Chain& chain, Tick t) {
  auto recs = View(chain, t).records;
  std::set<Ownership> distinct(recs.begin(), recs.end());
  return distinct.size();
}

LawReport check_owner_exists(const History& h) { return each_snapshot(1, h, owner_exists_at); }

LawReport check_owner_unique(const History& h) { return each_snapshot(2, h, owner_unique_at); }

LawReport check_nonexistent_unowned(const History& h) {
  return each_snapshot(3, h, nonexistent_unowned_at);
}

LawReport check_assets_monotone(const History& h) {
  LawReport r{4, {}};
  for (std::size_t t = 0; t + 1 < h.snapshots.size(); ++t) {
    auto now = ledger::existing_assets(h.snapshots[t], t);
    auto next = ledger::existing_assets(h.snapshots[t + 1], t + 1);
    for (const auto& a : now) {
      if (!next.count(a)) r.violations.push_back({t, "asset " + a.str() + " ceases to exist at next tick"});
    }
  }
  return r;
}

LawReport check_owns_size_monotone(const History& h) {
  LawReport r{5, {}};
  for (std::size_t t = 0; t + 1 < h.snapshots.size(); ++t) {
    auto now = ownership_count(h.snapshots[t], t);
    auto next = ownership_count(h.snapshots[t + 1], t + 1);
    if (next < now) {
      r.violations.push_back({t, "ownership records shrink from " + std::to_string(now) + " to " +
                                     std::to_string(next)});
    }
  }
  return r;
}

LawReport check_owner_prefix(const History& h) {
  LawReport r{6, {}};
  for (std::size_t t = 0; t + 1 < h.snapshots.size(); ++t) {
    auto now = View(h.snapshots[t], t).records;
    auto next = View(h.snapshots[t + 1], t + 1).records;
    std::set<AssetId> assets;
    for (const auto& o : now) assets.insert(o.asset);
    for (const auto& a : assets) {
      auto before = owner_list_until(now, a);
      auto after = owner_list_until(next, a);
      bool prefix = before.size() <= after.size() &&
                    std::equal(before.begin(), before.end(), after.begin());
      if (!prefix) {
        r.violations.push_back({t, "owner list of " + a.str() + " " + join(before) +
                                       " is not a prefix of " + join(after)});
      }
    }
  }
  return r;
}

std::array<LawReport, 6> check_all(const History& h) {
  return {check_owner_exists(h),     check_owner_unique(h),       check_nonexistent_unowned(h),
          check_assets_monotone(h),  check_owns_size_monotone(h), check_owner_prefix(h)};
}

std::vector<LawReport> check_fundamental_at(const Chain& chain, Tick t) {
  std::vector<LawReport> out{{1, {}}, {2, {}}, {3, {}}};
  View v(chain, t);
  owner_exists_at(v, t, out[0].violations);
  owner_unique_at(v, t, out[1].violations);
  nonexistent_unowned_at(v, t, out[2].violations);
  return out;
}

void write_report(std::ostream& out, const std::array<LawReport, 6>& reports) {
  for (const auto& r : reports) {
    for (const auto& v : r.violations) out << v.tick << " law" << r.law << ' ' << v.description << '\n';
  }
}

History history_of(const Chain& chain) {
  History h;
  const Tick last = chain.last_time();
  std::size_t n = 0;
  for (Tick t = 0; t <= last; ++t) {
    while (n < chain.height() && chain[n].time <= t) ++n;
    h.snapshots.push_back(chain.prefix(n));
  }
  return h;
}

}  // namespace nft::laws
