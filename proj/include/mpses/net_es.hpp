#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpses/es_core.hpp"
#include "mpses/proc_es.hpp"
#include "mpses/syntax.hpp"

namespace mpses {

struct LocatedEvent {
  Participant owner;
  PEvent event;
  auto operator<=>(const LocatedEvent&) const = default;
};

// An action with the peer erased, as seen from the peer's side.
struct Polarised {
  Direction direction = Direction::Output;
  Message message;
  auto operator<=>(const Polarised&) const = default;
};
using UndirectedSeq = std::vector<Polarised>;

// Unordered pair of dual located events, kept sorted by owner.
struct NEvent {
  LocatedEvent first;
  LocatedEvent second;
  auto operator<=>(const NEvent&) const = default;

  // Orders the components; throws Error(Undefined) when they are not dual.
  static NEvent make(LocatedEvent a, LocatedEvent b);
  // Component owned by p, if any.
  const LocatedEvent* component(const Participant& p) const;
};

UndirectedSeq proj_pevent(const PEvent& e, const Participant& p);
bool dual(const UndirectedSeq& a, const UndirectedSeq& b);
bool dual_located(const LocatedEvent& a, const LocatedEvent& b);

Communication cm(const NEvent& v);
std::set<Participant> loc(const NEvent& v);

bool n_flow(const NEvent& a, const NEvent& b);
bool n_conflict(const NEvent& a, const NEvent& b);
// The two clauses of the conflict relation, exposed for testing.
bool n_conflict_shared_owner(const NEvent& a, const NEvent& b);
bool n_conflict_mutual_projection(const NEvent& a, const NEvent& b);

std::vector<std::set<NEvent>> causal_sets(const NEvent& v, const std::set<NEvent>& ev);
std::set<NEvent> narrowing(const std::set<NEvent>& e);

struct NEventSet {
  std::set<NEvent> events;
  bool exact = false;
};

NEventSet de_events(const Network& n, std::size_t bound);

struct NetworkES {
  EventStructure<NEvent> es;
  bool exact = false;
};

NetworkES esn(const Network& n, std::size_t bound);
// Prime structure of a two-party network: causality is the reflexive and
// transitive closure of flow. Throws Error(NotBinary).
NetworkES esn_star(const Network& n, std::size_t bound);
bool is_binary(const Network& n);

std::set<PEvent> project_nevents(const std::set<NEvent>& x, const Participant& p);

// The action a participant performs in a communication, if involved.
std::optional<Action> action_of(const Communication& alpha, const Participant& p);

NEvent n_retrieval(const NEvent& v, const Communication& alpha);
NEvent n_retrieval(const NEvent& v, const Trace& sigma);
std::optional<NEvent> n_residual(const NEvent& v, const Communication& alpha);
std::optional<NEvent> n_residual(const NEvent& v, const Trace& sigma);

std::vector<NEvent> nec(const Trace& sigma);

std::string to_string(const LocatedEvent& e);
std::string to_string(const NEvent& v);

}  // namespace mpses
