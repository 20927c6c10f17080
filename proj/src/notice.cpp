#include "nftsim/notice.hpp"

#include <algorithm>
#include <sstream>

#include "nftsim/ledger.hpp"

namespace nft::notice {

using epi::Fact;

namespace {

constexpr const char* kCheck = "✓";
constexpr const char* kCross = "✗";

// Knowledge base plus a readable log of every event applied to it.
class Script {
 public:
  explicit Script(epi::KnowledgeBase kb = {}) : kb_(std::move(kb)) {}

  void world(const Atom& a) {
    kb_.assert_world(a);
    log("world " + a.text());
  }
  void observe(const AgentId& x, const Atom& a) {
    kb_.observe(x, a);
    log(x.str() + " observes " + a.text());
  }
  void send(const AgentId& from, const AgentId& to, const Fact& f) {
    kb_.communicate(from, {to}, f);
    log(from.str() + " -> " + to.str() + ": " + f.text());
  }
  void assume_pc(const AgentSet& group, const Atom& a) {
    kb_.assume_pc(group, a);
    log("PC(" + names(group) + ", " + a.text() + ") assumed");
  }
  void certified(const AgentSet& group, const Atom& a, const Atom& channel) {
    kb_.announce_certified(group, a, channel);
    log("PC(" + names(group) + ", " + a.text() + ") via " + channel.text());
  }
  void rule(const AgentSet& scope, const std::vector<Atom>& premises, const Atom& conclusion) {
    kb_.apply_rule(scope, premises, conclusion);
    std::string p;
    for (const auto& a : premises) p += (p.empty() ? "" : " & ") + a.text();
    log("rule in " + names(scope) + ": " + p + " => " + conclusion.text());
  }

  ServiceTrace finish() && { return ServiceTrace{std::move(events_), std::move(kb_), std::nullopt, {}}; }
  epi::KnowledgeBase& kb() { return kb_; }

 private:
  static std::string names(const AgentSet& s) {
    std::string out = "{";
    for (const auto& x : s) out += (out.size() > 1 ? "," : "") + x.str();
    return out + "}";
  }
  void log(std::string line) { events_.push_back(std::move(line)); }

  epi::KnowledgeBase kb_;
  std::vector<std::string> events_;
};

AgentId officer_of(const NoticeScenario& s) { return AgentId{"officer@" + s.court.str()}; }
AgentId postal_service() { return AgentId{"registered-post"}; }
Atom postal_system() { return Atom{"registered-post-sound", ""}; }

void validate(const NoticeScenario& s) {
  if (s.court.empty() || s.recipient.empty() || s.notice.empty()) {
    throw BadScenario("court, recipient and notice must be named");
  }
  if (s.court == s.recipient) throw BadScenario("court and recipient must differ");
  if (!s.population.count(s.court)) throw BadScenario("court is not in the population");
  if (!s.population.count(s.recipient)) throw BadScenario("recipient is not in the population");
  for (const auto& courier : {officer_of(s), postal_service()}) {
    if (s.population.count(courier)) throw BadScenario(courier.str() + " is reserved for couriers");
  }
  if (s.method == Method::NftToWallet) {
    if (s.nodes.empty()) throw BadScenario("NFT service needs at least one node");
    for (const auto& n : s.nodes) {
      if (s.population.count(n)) throw BadScenario("node " + n.str() + " is also a population member");
    }
  }
}

void setup(Script& sc, const NoticeScenario& s) {
  sc.world(court_authority(s));
  sc.assume_pc(s.population, court_authority(s));
}

void serve_officer(Script& sc, const NoticeScenario& s) {
  const AgentId officer = officer_of(s);
  // Credential: the officer's key signed by the court.
  sc.world(method_authority(s));
  sc.observe(s.court, method_authority(s));
  sc.send(s.court, officer, method_authority(s));
  sc.send(officer, s.recipient, method_authority(s));
  // Hand-over in person, acknowledged both ways.
  sc.world(served(s));
  sc.observe(s.recipient, served(s));
  sc.observe(officer, served(s));
  sc.send(s.recipient, officer, served(s));
  sc.send(officer, s.court, served(s));
  sc.send(officer, s.recipient, Fact::knows(s.court, served(s)));
  sc.world(private_channel(s));
  sc.observe(s.court, private_channel(s));
}

void serve_post(Script& sc, const NoticeScenario& s) {
  const AgentId post = postal_service();
  AgentSet with_post = s.population;
  with_post.insert(post);
  sc.world(postal_system());
  sc.assume_pc(with_post, postal_system());
  // The sender is revealed on delivery.
  sc.world(method_authority(s));
  sc.observe(s.court, method_authority(s));
  sc.send(s.court, post, method_authority(s));
  sc.send(post, s.recipient, method_authority(s));
  // Signed receipt, returned to the sender and on record.
  sc.world(served(s));
  sc.observe(s.recipient, served(s));
  sc.send(s.recipient, post, served(s));
  sc.send(post, s.court, served(s));
  sc.certified({s.court, s.recipient}, served(s), postal_system());
  sc.world(private_channel(s));
  sc.observe(s.court, private_channel(s));
}

void serve_email(Script& sc, const NoticeScenario& s) {
  // The court's signing key, exchanged when the recipient's key was registered.
  sc.world(method_authority(s));
  sc.observe(s.court, method_authority(s));
  sc.send(s.court, s.recipient, method_authority(s));
  if (s.email_delivered) {
    sc.world(served(s));
    sc.observe(s.recipient, served(s));
  }
  // Encrypted to the recipient: private, but never acknowledged to the court.
  sc.world(private_channel(s));
  sc.observe(s.court, private_channel(s));
}

void serve_newspaper(Script& sc, const NoticeScenario& s) {
  sc.world(Atom{"published", s.notice.str()});
}

ServiceTrace serve_nft(const NoticeScenario& s) {
  sim::Config cfg;
  cfg.nodes = s.nodes;
  cfg.seed = s.seed;
  std::size_t i = 0;
  for (const auto& x : s.population) {
    cfg.wallets.push_back(sim::WalletSpec{x, s.nodes[i++ % s.nodes.size()], 0});
  }
  if (s.withhold_certificates) cfg.faults.withhold_certificate = s.population;
  if (s.withhold_announcements) cfg.faults.withhold_announcement = s.population;

  std::vector<sim::ScheduledRequest> schedule{
      {0, sim::TxRequest{sim::MintReq{s.court, s.notice}, 0}},
      {1, sim::TxRequest{sim::TransferReq{s.court, s.recipient, s.notice, 0}, 0}}};
  schedule.insert(schedule.end(), s.background.begin(), s.background.end());
  std::stable_sort(schedule.begin(), schedule.end(),
                   [](const auto& x, const auto& y) { return x.tick < y.tick; });

  sim::SimState state;
  try {
    state = sim::init(cfg);
  } catch (const sim::BadConfig& e) {
    throw BadScenario(e.what());
  }
  Script sc(std::move(state.kb));
  setup(sc, s);
  state.kb = sc.kb();
  sim::Trace trace = sim::run(std::move(state), schedule);

  Script post(trace.final_state.kb);
  const auto& chain = trace.final_state.chain;
  std::optional<Atom> mint_tok;
  std::optional<Atom> transfer_tok;
  for (const auto& b : chain.blocks()) {
    const auto* tok = b.token();
    if (!tok) continue;
    auto own = ledger::decode_token(*tok);
    if (own.asset != s.notice) continue;
    if (b.is_mint() && own.agent == s.court) mint_tok = epi::Atom::token(*tok);
    if (!b.is_mint() && own.agent == s.recipient && mint_tok) transfer_tok = epi::Atom::token(*tok);
  }
  // The notice carries the court's authority because the court minted it; it
  // is served once the recipient's wallet holds it. Only the two parties read
  // the token as service of this notice.
  if (mint_tok) {
    post.world(method_authority(s));
    post.rule(s.population, {*mint_tok, court_authority(s)}, method_authority(s));
  }
  if (transfer_tok && ledger::current_owner(chain, s.notice) == s.recipient) {
    post.world(served(s));
    post.rule({s.court, s.recipient}, {*transfer_tok}, served(s));
    post.world(private_channel(s));
    post.observe(s.court, private_channel(s));
  }

  ServiceTrace out = std::move(post).finish();
  std::vector<std::string> events;
  for (const auto& e : trace.entries) {
    std::string line = "tick " + std::to_string(e.event.tick) + ": ";
    switch (e.event.outcome) {
      case sim::Outcome::Idle: line += "idle"; break;
      case sim::Outcome::Applied: line += "block appended"; break;
      case sim::Outcome::Rejected: line += std::string("rejected ") + std::string(tx::to_string(*e.event.error)); break;
    }
    events.push_back(std::move(line));
  }
  events.insert(events.end(), out.events.begin(), out.events.end());
  out.events = std::move(events);
  out.chain_trace = std::move(trace);
  out.qualifications = {
      "(b),(c): the served party is the e-wallet " + s.recipient.str() +
      "; the identity of its holder is not established"};
  return out;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::DirectOfficer: return "alpha";
    case Method::RegisteredPost: return "beta";
    case Method::Email: return "gamma";
    case Method::Newspaper: return "delta";
    case Method::NftToWallet: return "epsilon";
  }
  return "?";
}

std::optional<Method> method_from_name(std::string_view name) {
  for (auto m : kAllMethods) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

NoticeScenario default_scenario(Method m) {
  NoticeScenario s;
  s.court = AgentId{"cc"};
  s.recipient = AgentId{"rr"};
  s.population = {s.court, s.recipient, AgentId{"p1"}, AgentId{"p2"}};
  s.notice = AssetId{"nn"};
  s.method = m;
  s.nodes = {AgentId{"n1"}, AgentId{"n2"}};
  return s;
}

Atom court_authority(const NoticeScenario& s) { return Atom{"court-authority", s.court.str()}; }
Atom method_authority(const NoticeScenario& s) { return Atom{"method-authority", s.court.str()}; }
Atom served(const NoticeScenario& s) {
  return Atom{"served", s.recipient.str() + "/" + s.notice.str()};
}
Atom private_channel(const NoticeScenario& s) { return Atom{"served-privately", s.notice.str()}; }

ServiceTrace serve(const NoticeScenario& s) {
  validate(s);
  if (s.method == Method::NftToWallet) return serve_nft(s);
  Script sc;
  setup(sc, s);
  switch (s.method) {
    case Method::DirectOfficer: serve_officer(sc, s); break;
    case Method::RegisteredPost: serve_post(sc, s); break;
    case Method::Email: serve_email(sc, s); break;
    case Method::Newspaper: serve_newspaper(sc, s); break;
    case Method::NftToWallet: break;
  }
  return std::move(sc).finish();
}

PropertyProfile evaluate_properties(const ServiceTrace& trace, const NoticeScenario& s) {
  const auto& kb = trace.kb;
  const Atom authority = method_authority(s);
  const Atom done = served(s);
  PropertyProfile p;
  p.a = kb.knows(s.recipient, authority);
  p.b = kb.knows(s.court, done);
  p.c = kb.knows(s.recipient, Fact::knows(s.court, done));
  bool nobody_else = true;
  for (const auto& x : s.population) {
    if (x == s.recipient || x == s.court) continue;
    if (kb.knows(x, done)) nobody_else = false;
  }
  p.d = nobody_else && kb.knows(s.court, private_channel(s));
  if (p.b || p.c) p.qualifications = trace.qualifications;
  return p;
}

MethodTable method_table(const ScenarioFactory& factory) {
  MethodTable table;
  for (std::size_t i = 0; i < kAllMethods.size(); ++i) {
    auto s = factory(kAllMethods[i]);
    table[i] = {kAllMethods[i], evaluate_properties(serve(s), s)};
  }
  return table;
}

std::string format_profile(Method m, const PropertyProfile& p) {
  std::ostringstream os;
  os << method_name(m);
  os << std::string(8 - method_name(m).size(), ' ');
  for (bool v : {p.a, p.b, p.c, p.d}) os << ' ' << (v ? kCheck : kCross) << "  ";
  std::string line = os.str();
  while (!line.empty() && line.back() == ' ') line.pop_back();
  return line + '\n';
}

std::string format_table(const MethodTable& table) {
  std::string out = "method   (a) (b) (c) (d)\n";
  for (const auto& [m, p] : table) out += format_profile(m, p);
  return out;
}

}  // namespace nft::notice
