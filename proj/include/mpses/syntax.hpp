#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mpses/error.hpp"

namespace mpses {

struct Participant {
  std::string name;
  auto operator<=>(const Participant&) const = default;
};

struct Message {
  std::string label;
  auto operator<=>(const Message&) const = default;
};

enum class Direction : std::uint8_t { Output, Input };

struct Action {
  Direction direction = Direction::Output;
  Participant peer;
  Message message;
  auto operator<=>(const Action&) const = default;
};

struct Communication {
  Participant sender;
  Message message;
  Participant receiver;
  auto operator<=>(const Communication&) const = default;
};

using Trace = std::vector<Communication>;

inline Action output(Participant peer, Message m) { return {Direction::Output, std::move(peer), std::move(m)}; }
inline Action input(Participant peer, Message m) { return {Direction::Input, std::move(peer), std::move(m)}; }

std::set<Participant> participants(const Communication& c);
std::set<Participant> trace_participants(const Trace& sigma);
bool shares_participant(const Communication& a, const Communication& b);

std::string to_string(const Action& a);          // q!l or q?l
std::string to_string(const Communication& c);   // p->q:l
std::string to_string(const Trace& sigma);       // comma separated, empty for epsilon
std::string to_string(const std::vector<Action>& actions);  // dot separated

// ---------------------------------------------------------------------------
// Regular terms as finite graphs.

using NodeId = std::uint32_t;

enum class ProcKind : std::uint8_t { Inact, Output, Input };

struct ProcNode {
  ProcKind kind = ProcKind::Inact;
  Participant peer;
  std::map<Message, NodeId> branches;
};

enum class GlobalKind : std::uint8_t { End, Comm };

struct GlobalNode {
  GlobalKind kind = GlobalKind::End;
  Participant sender;
  Participant receiver;
  std::map<Message, NodeId> branches;
};

// A term is a shared, immutable node arena plus the id of its root node.
// Subterms share the arena, so stepping into a continuation is O(1).
template <class Node>
class Term {
 public:
  using NodeType = Node;
  using Arena = std::vector<Node>;

  Term() : nodes_(std::make_shared<const Arena>(1)), root_(0) {}
  Term(std::shared_ptr<const Arena> nodes, NodeId root) : nodes_(std::move(nodes)), root_(root) {}

  const Node& node() const { return (*nodes_)[root_]; }
  const Node& node(NodeId id) const { return (*nodes_)[id]; }
  NodeId root() const { return root_; }
  std::size_t arena_size() const { return nodes_->size(); }
  const std::shared_ptr<const Arena>& arena() const { return nodes_; }

  Term at(NodeId id) const { return Term(nodes_, id); }
  bool is_leaf() const { return node().branches.empty(); }
  Term child(const Message& m) const {
    auto it = node().branches.find(m);
    if (it == node().branches.end()) throw std::out_of_range("no branch " + m.label);
    return at(it->second);
  }
  std::vector<std::pair<Message, Term>> branches() const {
    std::vector<std::pair<Message, Term>> out;
    for (const auto& [m, id] : node().branches) out.emplace_back(m, at(id));
    return out;
  }
  // Reachable node ids in depth-first preorder (branch order).
  std::vector<NodeId> reachable() const {
    std::vector<NodeId> order;
    std::vector<char> seen(nodes_->size(), 0);
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      if (seen[n]) continue;
      seen[n] = 1;
      order.push_back(n);
      const auto& br = (*nodes_)[n].branches;
      for (auto it = br.rbegin(); it != br.rend(); ++it)
        if (!seen[it->second]) stack.push_back(it->second);
    }
    return order;
  }
  bool same_node(const Term& o) const { return nodes_ == o.nodes_ && root_ == o.root_; }

 private:
  std::shared_ptr<const Arena> nodes_;
  NodeId root_;
};

using Process = Term<ProcNode>;
using Global = Term<GlobalNode>;

// Low-level incremental construction of a term graph. Nodes may reference
// each other freely (back-edges are how recursion is expressed).
template <class Node>
class GraphBuilder {
 public:
  NodeId add(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
  }
  Node& operator[](NodeId id) { return nodes_[id]; }
  std::size_t size() const { return nodes_.size(); }
  // Copies the part of `t` reachable from its root; returns the new root id.
  NodeId import(const Term<Node>& t) {
    std::map<NodeId, NodeId> remap;
    for (NodeId n : t.reachable()) remap[n] = add(t.node(n));
    for (auto& [old, fresh] : remap)
      for (auto& [m, c] : nodes_[fresh].branches) c = remap.at(c);
    return remap.at(t.root());
  }
  Term<Node> finish(NodeId root) && {
    return Term<Node>(std::make_shared<const std::vector<Node>>(std::move(nodes_)), root);
  }

 private:
  std::vector<Node> nodes_;
};

// Acyclic convenience constructors; recursion is built through equations or
// GraphBuilder. Validation errors are thrown as mpses::Error.
Process inact();
Process out_choice(const Participant& peer, const std::vector<std::pair<Message, Process>>& branches);
Process in_choice(const Participant& peer, const std::vector<std::pair<Message, Process>>& branches);
Global end_type();
Global comm(const Participant& sender, const Participant& receiver,
            const std::vector<std::pair<Message, Global>>& branches);

// Checks the structural invariants of every reachable node.
void validate(const Process& p);
void validate(const Global& g);

bool process_equal(const Process& a, const Process& b);
bool global_equal(const Global& a, const Global& b);

// Minimal graph with nodes renumbered breadth-first from the root; two terms
// are equal iff their canonical forms serialize identically.
Process canonical(const Process& p);
Global canonical(const Global& g);
std::string canonical_key(const Process& p);
std::string canonical_key(const Global& g);

// Copies the root node `times` times so that the result has a longer
// acyclic prefix but denotes the same infinite tree.
Process unfold(const Process& p, int times = 1);
Global unfold(const Global& g, int times = 1);

bool recursion_free(const Process& p);
bool recursion_free(const Global& g);
// Longest root path in edges; only meaningful for recursion-free terms.
std::size_t height(const Process& p);
std::size_t height(const Global& g);

std::set<Participant> participants_global(const Global& g);
std::set<Participant> participants_process(const Process& p);

// Inline text in the surface grammar. Recursive terms produce named
// auxiliary definitions; see format_definitions.
std::string to_string(const Process& p);
std::string to_string(const Global& g);
// "process NAME = ..." / "global NAME = ..." lines that re-parse to an
// equal term; auxiliary names are NAME_1, NAME_2, ...
std::string format_definitions(const std::string& name, const Process& p);
std::string format_definitions(const std::string& name, const Global& g);

// ---------------------------------------------------------------------------

class Network {
 public:
  Network() = default;
  explicit Network(const std::map<Participant, Process>& bindings);

  const std::map<Participant, Process>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  // Inact when p is not bound.
  Process at(const Participant& p) const;
  std::set<Participant> participants() const;
  Network with(const Participant& p, const Process& proc) const;

 private:
  std::map<Participant, Process> bindings_;
};

bool network_equal(const Network& a, const Network& b);
std::string canonical_key(const Network& n);
std::string to_string(const Network& n);

}  // namespace mpses
