// Syntactic knowledge engine, bounded at two nested knowledge operators.
//
// A stored fact is a *path* of agents over an atom: [x] is K_x atom, [x,y] is
// K_x K_y atom. Queries close the stored paths under
//   * veracity inside knowledge:  K_x K_y a  implies  K_x a
//   * positive introspection:     K_x a      implies  K_x K_x a
// Deeper facts produced by communication are truncated to depth two using the
// same veracity step, which is sound.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nftsim/ledger.hpp"

namespace nft::epi {

using ledger::AgentId;
using AgentSet = std::set<AgentId>;

/// A world statement: a named proposition, or a token (name "tok", payload
/// the token bits in hex).
struct Atom {
  std::string name;
  std::string payload;

  std::string text() const;
  static Atom token(const ledger::Token& tok);

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// Atom or nested K_x(...), depth at most two.
class Fact {
 public:
  Fact(Atom a) : atom_(std::move(a)) {}  // NOLINT(google-explicit-constructor)

  static Fact knows(const AgentId& who, const Fact& inner);

  std::size_t depth() const noexcept { return knowers_.size(); }
  const Atom& atom() const noexcept { return atom_; }
  /// Outermost knower first.
  const std::vector<AgentId>& knowers() const noexcept { return knowers_; }
  std::string text() const;

  friend auto operator<=>(const Fact&, const Fact&) = default;

 private:
  Fact(std::vector<AgentId> knowers, Atom a) : knowers_(std::move(knowers)), atom_(std::move(a)) {}
  std::vector<AgentId> knowers_;
  Atom atom_;
};

enum class EpiError { NotTrue, SenderIgnorant, DepthExceeded, PreconditionFailed };

class EpistemicError : public std::runtime_error {
 public:
  EpistemicError(EpiError code, const std::string& what) : std::runtime_error(what), code_(code) {}
  EpiError code() const noexcept { return code_; }

 private:
  EpiError code_;
};

/// Which of the two extension messages are delivered. Only fault-injection
/// tests turn either off.
struct ExtendOptions {
  bool send_certificate = true;     // v_x -> x : {K_w f | w in A}
  bool announce_membership = true;  // v_x -> A : K_x f
};

class KnowledgeBase {
 public:
  using Path = std::vector<AgentId>;

  // ---- events (all monotone) ----
  void assert_world(const Atom& a);
  /// x reads the atom directly. Throws NotTrue if the atom is false.
  void observe(const AgentId& x, const Atom& a);
  /// Honest, authenticated, reliable delivery. Each receiver r gains K_r f and
  /// K_r K_sender f; the sender gains K_sender K_r f. Throws SenderIgnorant
  /// unless the sender knows f, DepthExceeded unless f has depth <= 1.
  void communicate(const AgentId& sender, const AgentSet& receivers, const Fact& f);
  /// Bootstraps PC(group, a) for a true atom, as an assumption of the model.
  void assume_pc(const AgentSet& group, const Atom& a);
  /// Delivery over a channel whose soundness is publicly certified among the
  /// group: afterwards K_x a and K_x K_y a for all x, y in the group.
  void announce_certified(const AgentSet& group, const Atom& a, const Atom& channel);
  /// Agents in scope who know every premise also know the (true) conclusion;
  /// the same step lifts through one K_y for y in scope.
  void apply_rule(const AgentSet& scope, const std::vector<Atom>& premises, const Atom& conclusion);

  // ---- queries ----
  bool is_true(const Atom& a) const { return world_.count(a) != 0; }
  const std::set<Atom>& world() const noexcept { return world_; }
  /// K_x f under closure. Throws DepthExceeded if K_x f nests deeper than two.
  bool knows(const AgentId& x, const Fact& f) const;
  /// Stored (unclosed) facts of one agent, sorted.
  std::vector<Fact> facts_of(const AgentId& x) const;
  /// Every agent with at least one stored fact.
  AgentSet agents() const;
  std::size_t fact_count() const noexcept { return fact_count_; }
  /// Per-agent sorted listing, one fact per line: "<agent>: <fact>".
  std::string dump() const;

 private:
  using PathSet = std::set<Path>;

  bool has_path(const Atom& a, const Path& p) const;
  void add_path(const Atom& a, Path p);
  PathSet& mutable_paths(const Atom& a);

  std::set<Atom> world_;
  // Copy-on-write per atom so that snapshotting a knowledge base is cheap.
  std::map<Atom, std::shared_ptr<const PathSet>> paths_;
  std::size_t fact_count_ = 0;
};

/// Public certifiability: K_x K_y f for every x, y in A. `f` must be atomic.
bool publicly_certified(const KnowledgeBase& kb, const AgentSet& group, const Fact& f);

/// First (x, y) in the group, in sorted order, with not K_x K_y f.
std::optional<std::pair<AgentId, AgentId>> pc_gap(const KnowledgeBase& kb, const AgentSet& group,
                                                  const Fact& f);

/// Grows PC(A, f) to PC(A + {x}, f) through the two messages of v_x. If the
/// certificate message is withheld, v_x does not know K_x f and, being honest,
/// sends no announcement either.
void extend_pc(KnowledgeBase& kb, const AgentSet& group, const AgentId& x, const AgentId& via,
               const Fact& f, ExtendOptions opts = {});

}  // namespace nft::epi
