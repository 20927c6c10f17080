// Serving legal notice: five service methods played out as knowledge events,
// and the four properties a court cares about.
//
//   (a) the recipient knows the method carries the court's authority
//   (b) the court knows the recipient has been served
//   (c) the recipient knows that the court knows it
//   (d) nobody else in the population knows of the service, and the court
//       knows the channel was private
//
// The court's own authority is certified among the whole population up front.
// Couriers (the officer, the postal service) and network nodes are not members
// of the population.
#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nftsim/epistemic.hpp"
#include "nftsim/netsim.hpp"

namespace nft::notice {

using epi::AgentSet;
using epi::Atom;
using ledger::AgentId;
using ledger::AssetId;

enum class Method { DirectOfficer, RegisteredPost, Email, Newspaper, NftToWallet };

inline constexpr std::array<Method, 5> kAllMethods{Method::DirectOfficer, Method::RegisteredPost,
                                                   Method::Email, Method::Newspaper,
                                                   Method::NftToWallet};

/// "alpha" .. "epsilon".
std::string_view method_name(Method m);
std::optional<Method> method_from_name(std::string_view name);

class BadScenario : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct NoticeScenario {
  AgentId court;
  AgentId recipient;
  AgentSet population;
  AssetId notice;
  Method method = Method::DirectOfficer;
  /// Email only: whether the message reached the recipient's inbox.
  bool email_delivered = true;

  // NFT service only.
  std::vector<AgentId> nodes;
  std::vector<sim::ScheduledRequest> background;
  // Fault injection: drop one of the two wallet-extension messages for every
  // member of the population.
  bool withhold_certificates = false;
  bool withhold_announcements = false;
  std::uint64_t seed = 0;
};

/// Court "cc", recipient "rr", bystanders "p1", "p2", notice "nn", two nodes.
NoticeScenario default_scenario(Method m);

struct PropertyProfile {
  bool a = false;
  bool b = false;
  bool c = false;
  bool d = false;
  /// Caveats that qualify a satisfied property without failing it.
  std::vector<std::string> qualifications;

  friend bool operator==(const PropertyProfile& x, const PropertyProfile& y) {
    return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
  }
};

struct ServiceTrace {
  std::vector<std::string> events;
  epi::KnowledgeBase kb;
  std::optional<sim::Trace> chain_trace;
  std::vector<std::string> qualifications;
};

// Propositions of the case study, bound to the scenario's names.
Atom court_authority(const NoticeScenario& s);
Atom method_authority(const NoticeScenario& s);
Atom served(const NoticeScenario& s);
Atom private_channel(const NoticeScenario& s);

/// Runs the method's event sequence from a population where the court's
/// authority is publicly certified. Throws BadScenario for an ill-formed scenario.
ServiceTrace serve(const NoticeScenario& s);

PropertyProfile evaluate_properties(const ServiceTrace& trace, const NoticeScenario& s);

using ScenarioFactory = std::function<NoticeScenario(Method)>;
using MethodTable = std::array<std::pair<Method, PropertyProfile>, 5>;

MethodTable method_table(const ScenarioFactory& factory = default_scenario);

/// Rows alpha..epsilon against columns (a)..(d), marked with check and cross.
std::string format_table(const MethodTable& table);
std::string format_profile(Method m, const PropertyProfile& p);

}  // namespace nft::notice
