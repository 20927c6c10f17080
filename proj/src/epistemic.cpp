#include "nftsim/epistemic.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace nft::epi {

namespace {

constexpr std::size_t kMaxDepth = 2;

// K_x K_x g -> K_x g, then drop inner knowers past depth two (veracity).
KnowledgeBase::Path normalise(KnowledgeBase::Path p) {
  KnowledgeBase::Path out;
  for (auto& a : p) {
    if (!out.empty() && out.back() == a) continue;
    out.push_back(std::move(a));
  }
  if (out.size() > kMaxDepth) out.resize(kMaxDepth);
  return out;
}

KnowledgeBase::Path prepend(const AgentId& x, const std::vector<AgentId>& rest) {
  KnowledgeBase::Path p;
  p.reserve(rest.size() + 1);
  p.push_back(x);
  p.insert(p.end(), rest.begin(), rest.end());
  return p;
}

}  // namespace

std::string Atom::text() const { return payload.empty() ? name : name + ":" + payload; }

Atom Atom::token(const ledger::Token& tok) { return Atom{"tok", tok.hex()}; }

Fact Fact::knows(const AgentId& who, const Fact& inner) {
  if (inner.depth() >= kMaxDepth) {
    throw EpistemicError(EpiError::DepthExceeded, "fact nesting exceeds depth " + std::to_string(kMaxDepth));
  }
  return Fact(prepend(who, inner.knowers_), inner.atom_);
}

std::string Fact::text() const {
  std::string s;
  for (const auto& k : knowers_) s += "K(" + k.str() + ",";
  s += atom_.text();
  s.append(knowers_.size(), ')');
  return s;
}

void KnowledgeBase::assert_world(const Atom& a) { world_.insert(a); }

KnowledgeBase::PathSet& KnowledgeBase::mutable_paths(const Atom& a) {
  auto& slot = paths_[a];
  if (!slot) {
    slot = std::make_shared<PathSet>();
  } else if (slot.use_count() > 1) {
    slot = std::make_shared<PathSet>(*slot);
  }
  return const_cast<PathSet&>(*slot);
}

void KnowledgeBase::add_path(const Atom& a, Path p) {
  p = normalise(std::move(p));
  if (has_path(a, p)) return;
  if (mutable_paths(a).insert(std::move(p)).second) ++fact_count_;
}

bool KnowledgeBase::has_path(const Atom& a, const Path& p) const {
  auto it = paths_.find(a);
  if (it == paths_.end()) return false;
  const PathSet& s = *it->second;
  if (p.size() == 1) {
    // K_x a, directly or through any K_x K_y a.
    auto lo = s.lower_bound(p);
    return lo != s.end() && !lo->empty() && (*lo)[0] == p[0];
  }
  return s.count(p) != 0;
}

void KnowledgeBase::observe(const AgentId& x, const Atom& a) {
  if (!is_true(a)) throw EpistemicError(EpiError::NotTrue, "cannot observe false atom " + a.text());
  add_path(a, {x});
}

bool KnowledgeBase::knows(const AgentId& x, const Fact& f) const {
  if (f.depth() + 1 > kMaxDepth) {
    throw EpistemicError(EpiError::DepthExceeded, "query K(" + x.str() + "," + f.text() + ") too deep");
  }
  return has_path(f.atom(), normalise(prepend(x, f.knowers())));
}

void KnowledgeBase::communicate(const AgentId& sender, const AgentSet& receivers, const Fact& f) {
  if (f.depth() >= kMaxDepth) {
    throw EpistemicError(EpiError::DepthExceeded, "message " + f.text() + " too deep");
  }
  if (!knows(sender, f)) {
    throw EpistemicError(EpiError::SenderIgnorant, sender.str() + " does not know " + f.text());
  }
  for (const auto& r : receivers) {
    if (r == sender) continue;
    add_path(f.atom(), prepend(r, f.knowers()));
    add_path(f.atom(), prepend(r, prepend(sender, f.knowers())));
    add_path(f.atom(), prepend(sender, prepend(r, f.knowers())));
  }
}

void KnowledgeBase::assume_pc(const AgentSet& group, const Atom& a) {
  if (!is_true(a)) throw EpistemicError(EpiError::NotTrue, "cannot certify false atom " + a.text());
  for (const auto& x : group) {
    add_path(a, {x});
    for (const auto& y : group) add_path(a, {x, y});
  }
}

void KnowledgeBase::announce_certified(const AgentSet& group, const Atom& a, const Atom& channel) {
  if (!publicly_certified(*this, group, Fact(channel))) {
    throw EpistemicError(EpiError::PreconditionFailed,
                         "channel " + channel.text() + " is not publicly certified in the group");
  }
  assume_pc(group, a);
}

void KnowledgeBase::apply_rule(const AgentSet& scope, const std::vector<Atom>& premises,
                               const Atom& conclusion) {
  if (!is_true(conclusion)) {
    throw EpistemicError(EpiError::NotTrue, "rule conclusion " + conclusion.text() + " is false");
  }
  auto all_known = [&](const AgentId& x, const AgentId* inner) {
    for (const auto& p : premises) {
      Fact f = inner ? Fact::knows(*inner, p) : Fact(p);
      if (!knows(x, f)) return false;
    }
    return true;
  };
  // Decide against the state before the rule fires so the order of agents in
  // scope does not matter.
  std::vector<Path> gained;
  for (const auto& x : scope) {
    if (all_known(x, nullptr)) gained.push_back({x});
    for (const auto& y : scope) {
      if (y != x && all_known(x, &y)) gained.push_back({x, y});
    }
  }
  for (auto& p : gained) add_path(conclusion, std::move(p));
}

std::vector<Fact> KnowledgeBase::facts_of(const AgentId& x) const {
  std::vector<Fact> out;
  for (const auto& [atom, set] : paths_) {
    for (const auto& p : *set) {
      if (p.empty() || p[0] != x) continue;
      Fact f(atom);
      for (auto it = p.rbegin(); it != p.rend() - 1; ++it) f = Fact::knows(*it, f);
      out.push_back(std::move(f));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

AgentSet KnowledgeBase::agents() const {
  AgentSet out;
  for (const auto& [_, set] : paths_) {
    for (const auto& p : *set) out.insert(p[0]);
  }
  return out;
}

std::string KnowledgeBase::dump() const {
  std::ostringstream os;
  for (const auto& a : world_) os << "world: " << a.text() << '\n';
  for (const auto& x : agents()) {
    std::vector<std::string> lines;
    for (const auto& f : facts_of(x)) lines.push_back(f.text());
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) os << x.str() << ": " << l << '\n';
  }
  return os.str();
}

std::optional<std::pair<AgentId, AgentId>> pc_gap(const KnowledgeBase& kb, const AgentSet& group,
                                                  const Fact& f) {
  if (f.depth() != 0) {
    throw EpistemicError(EpiError::DepthExceeded, "public certifiability needs an atomic fact");
  }
  for (const auto& x : group) {
    for (const auto& y : group) {
      if (!kb.knows(x, Fact::knows(y, f))) return std::pair{x, y};
    }
  }
  return std::nullopt;
}

bool publicly_certified(const KnowledgeBase& kb, const AgentSet& group, const Fact& f) {
  return !pc_gap(kb, group, f).has_value();
}

void extend_pc(KnowledgeBase& kb, const AgentSet& group, const AgentId& x, const AgentId& via,
               const Fact& f, ExtendOptions opts) {
  if (group.count(x)) {
    throw EpistemicError(EpiError::PreconditionFailed, x.str() + " is already in the group");
  }
  if (!group.count(via)) {
    throw EpistemicError(EpiError::PreconditionFailed, via.str() + " is not in the group");
  }
  if (!publicly_certified(kb, group, f)) {
    throw EpistemicError(EpiError::PreconditionFailed, "group does not publicly certify " + f.text());
  }
  if (opts.send_certificate) {
    for (const auto& w : group) kb.communicate(via, {x}, Fact::knows(w, f));
  }
  if (opts.announce_membership && kb.knows(via, Fact::knows(x, f))) {
    kb.communicate(via, group, Fact::knows(x, f));
  }
}

}  // namespace nft::epi
