#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mpses {

// Dense boolean matrix over event indices.
class Relation {
 public:
  Relation() = default;
  explicit Relation(std::size_t n) : n_(n), bits_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool operator()(std::size_t a, std::size_t b) const { return bits_[a * n_ + b] != 0; }
  void set(std::size_t a, std::size_t b, bool v = true) { bits_[a * n_ + b] = v ? 1 : 0; }

  Relation reflexive_transitive_closure() const;

 private:
  std::size_t n_ = 0;
  std::vector<char> bits_;
};

enum class EsKind { Prime, Flow };

// In a prime structure `order` is the reflexive causality order; in a flow
// structure it is the (irreflexive, not necessarily transitive) flow.
struct EsRelations {
  EsKind kind = EsKind::Prime;
  Relation order;
  Relation conflict;

  std::size_t size() const { return order.size(); }
  // Strict precedence used by proving sequences: e < e' or e flows to e'.
  bool precedes(std::size_t a, std::size_t b) const { return a != b && order(a, b); }
};

template <class E>
struct EventStructure : EsRelations {
  std::vector<E> events;
};

using EventSet = std::vector<std::size_t>;  // sorted, duplicate free

// Axiom checks: empty string when the axioms hold, otherwise a description
// of the first violation.
std::string prime_axiom_violation(const EsRelations& s);
std::string flow_axiom_violation(const EsRelations& s);

bool conflict_free(const EsRelations& s, const EventSet& x);
bool is_configuration(const EsRelations& s, const EventSet& x);
bool is_proving_sequence(const EsRelations& s, const std::vector<std::size_t>& seq);
// Whether e can be appended to any proving sequence enumerating x.
bool can_extend(const EsRelations& s, const std::vector<char>& member, std::size_t e);

struct Configuration {
  EventSet events;
  std::vector<std::size_t> witness;  // a proving sequence enumerating `events`
  std::vector<std::pair<std::size_t, std::size_t>> extensions;  // (event, index of larger config)
};

// Configurations of at most `max_size` events, generated from the empty set by
// appending events to proving sequences. Ordered by size, then by content.
std::vector<Configuration> enumerate_configurations(const EsRelations& s, std::size_t max_size);
// All proving sequences of length 1..max_len.
std::vector<std::vector<std::size_t>> enumerate_proving_sequences(const EsRelations& s, std::size_t max_len);
// Oracle: every subset of at most max_size events filtered by is_configuration.
std::vector<EventSet> configurations_by_subset_filter(const EsRelations& s, std::size_t max_size);

// For x strictly included in y (both configurations) returns an event of
// y \ x whose addition to x yields a configuration.
std::optional<std::size_t> separating_event(const EsRelations& s, const EventSet& x, const EventSet& y);

// f maps events of the source to events of `target` (nullopt: undefined).
// Downward surjective: whatever strictly precedes an image is an image.
bool downward_surjective(const std::vector<std::optional<std::size_t>>& f, const EsRelations& target);

// Conflicts not inherited from conflicts between causes (prime only).
std::vector<std::pair<std::size_t, std::size_t>> immediate_conflicts(const EsRelations& s);
// Covering pairs of the causality order (prime) or the flow edges (flow).
std::vector<std::pair<std::size_t, std::size_t>> causal_edges(const EsRelations& s);

std::string to_dot(const EsRelations& s, const std::vector<std::string>& names, const std::string& title);

struct IsoResult {
  bool isomorphic = false;
  std::string mismatch;
};

// Compares two finite posets of sets under inclusion through labels that are
// required to identify elements. Throws Error(LabelCollision) when a label
// function is not injective on its domain.
IsoResult poset_iso(const std::vector<EventSet>& d1, const std::vector<std::string>& labels1,
                    const std::vector<EventSet>& d2, const std::vector<std::string>& labels2);

bool is_subset(const EventSet& a, const EventSet& b);

}  // namespace mpses
