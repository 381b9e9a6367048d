#include "mpses/syntax.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace mpses {

std::string error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "ParseError";
    case ErrorCode::UndefinedName: return "UndefinedName";
    case ErrorCode::NonContractive: return "NonContractive";
    case ErrorCode::DuplicateBranchLabel: return "DuplicateBranchLabel";
    case ErrorCode::DuplicateDefinition: return "DuplicateDefinition";
    case ErrorCode::DuplicateParticipant: return "DuplicateParticipant";
    case ErrorCode::EmptyChoice: return "EmptyChoice";
    case ErrorCode::MixedChoicePeers: return "MixedChoicePeers";
    case ErrorCode::SelfCommunication: return "SelfCommunication";
    case ErrorCode::NotEnabled: return "NotEnabled";
    case ErrorCode::NotWellFormed: return "NotWellFormed";
    case ErrorCode::Undefined: return "Undefined";
    case ErrorCode::NotBinary: return "NotBinary";
    case ErrorCode::LabelCollision: return "LabelCollision";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
  }
  return "Error";
}

std::set<Participant> participants(const Communication& c) { return {c.sender, c.receiver}; }

std::set<Participant> trace_participants(const Trace& sigma) {
  std::set<Participant> out;
  for (const auto& c : sigma) {
    out.insert(c.sender);
    out.insert(c.receiver);
  }
  return out;
}

bool shares_participant(const Communication& a, const Communication& b) {
  return a.sender == b.sender || a.sender == b.receiver || a.receiver == b.sender ||
         a.receiver == b.receiver;
}

std::string to_string(const Action& a) {
  return a.peer.name + (a.direction == Direction::Output ? "!" : "?") + a.message.label;
}

std::string to_string(const Communication& c) {
  return c.sender.name + "->" + c.receiver.name + ":" + c.message.label;
}

std::string to_string(const Trace& sigma) {
  std::string out;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (i) out += ",";
    out += to_string(sigma[i]);
  }
  return out;
}

std::string to_string(const std::vector<Action>& actions) {
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i) out += ".";
    out += to_string(actions[i]);
  }
  return out;
}

namespace {

// ----- per-node-type hooks used by the generic graph algorithms -----------

std::string head_text(const ProcNode& n) {
  std::string s;
  switch (n.kind) {
    case ProcKind::Inact: return "0";
    case ProcKind::Output: s = "!" + n.peer.name; break;
    case ProcKind::Input: s = "?" + n.peer.name; break;
  }
  for (const auto& [m, c] : n.branches) s += " " + m.label;
  return s;
}

std::string head_text(const GlobalNode& n) {
  if (n.kind == GlobalKind::End) return "end";
  std::string s = n.sender.name + ">" + n.receiver.name;
  for (const auto& [m, c] : n.branches) s += " " + m.label;
  return s;
}

bool same_head(const ProcNode& a, const ProcNode& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ProcKind::Inact) return true;
  if (a.peer != b.peer || a.branches.size() != b.branches.size()) return false;
  return std::equal(a.branches.begin(), a.branches.end(), b.branches.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first; });
}

bool same_head(const GlobalNode& a, const GlobalNode& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == GlobalKind::End) return true;
  if (a.sender != b.sender || a.receiver != b.receiver || a.branches.size() != b.branches.size())
    return false;
  return std::equal(a.branches.begin(), a.branches.end(), b.branches.begin(),
                    [](const auto& x, const auto& y) { return x.first == y.first; });
}

template <class Node>
bool term_equal(const Term<Node>& a, const Term<Node>& b) {
  std::set<std::pair<NodeId, NodeId>> assumed;
  std::vector<std::pair<NodeId, NodeId>> work{{a.root(), b.root()}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    if (!assumed.insert({x, y}).second) continue;
    const Node& nx = a.node(x);
    const Node& ny = b.node(y);
    if (!same_head(nx, ny)) return false;
    auto ix = nx.branches.begin();
    auto iy = ny.branches.begin();
    for (; ix != nx.branches.end(); ++ix, ++iy) work.emplace_back(ix->second, iy->second);
  }
  return true;
}

template <class Node>
Term<Node> canonical_term(const Term<Node>& t) {
  std::vector<NodeId> reach = t.reachable();
  std::map<NodeId, std::size_t> cls;
  {
    std::map<std::string, std::size_t> ids;
    for (NodeId n : reach) cls[n] = ids.emplace(head_text(t.node(n)), ids.size()).first->second;
  }
  std::size_t count = 0;
  for (;;) {
    std::map<std::vector<std::size_t>, std::size_t> ids;
    std::map<NodeId, std::size_t> next;
    for (NodeId n : reach) {
      std::vector<std::size_t> sig{cls[n]};
      for (const auto& [m, c] : t.node(n).branches) sig.push_back(cls[c]);
      next[n] = ids.emplace(sig, ids.size()).first->second;
    }
    cls = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  // Breadth-first renumbering of classes from the root.
  std::map<std::size_t, NodeId> order;
  std::map<std::size_t, NodeId> representative;
  for (NodeId n : reach) representative.emplace(cls[n], n);
  std::deque<std::size_t> queue{cls[t.root()]};
  order[cls[t.root()]] = 0;
  std::vector<std::size_t> sequence;
  while (!queue.empty()) {
    std::size_t c = queue.front();
    queue.pop_front();
    sequence.push_back(c);
    for (const auto& [m, child] : t.node(representative[c]).branches) {
      std::size_t cc = cls[child];
      if (order.emplace(cc, static_cast<NodeId>(order.size())).second) queue.push_back(cc);
    }
  }
  std::vector<Node> nodes;
  for (std::size_t c : sequence) {
    Node n = t.node(representative[c]);
    for (auto& [m, child] : n.branches) child = order[cls[child]];
    nodes.push_back(std::move(n));
  }
  return Term<Node>(std::make_shared<const std::vector<Node>>(std::move(nodes)), 0);
}

template <class Node>
std::string key_of(const Term<Node>& t) {
  Term<Node> c = canonical_term(t);
  std::string out;
  for (std::size_t i = 0; i < c.arena_size(); ++i) {
    const Node& n = c.node(static_cast<NodeId>(i));
    out += head_text(n);
    for (const auto& [m, child] : n.branches) out += " " + std::to_string(child);
    out += ";";
  }
  return out;
}

template <class Node>
Term<Node> unfold_term(const Term<Node>& t, int times) {
  Term<Node> cur = t;
  for (int i = 0; i < times; ++i) {
    std::vector<Node> nodes(*cur.arena());
    nodes.push_back(cur.node());
    cur = Term<Node>(std::make_shared<const std::vector<Node>>(std::move(nodes)),
                     static_cast<NodeId>(cur.arena_size()));
  }
  return cur;
}

template <class Node>
bool acyclic(const Term<Node>& t) {
  std::map<NodeId, int> colour;  // 1 = on stack, 2 = done
  std::function<bool(NodeId)> visit = [&](NodeId n) {
    colour[n] = 1;
    for (const auto& [m, c] : t.node(n).branches) {
      int col = colour[c];
      if (col == 1) return false;
      if (col == 0 && !visit(c)) return false;
    }
    colour[n] = 2;
    return true;
  };
  return visit(t.root());
}

template <class Node>
std::size_t height_of(const Term<Node>& t) {
  std::map<NodeId, std::size_t> memo;
  std::function<std::size_t(NodeId)> go = [&](NodeId n) -> std::size_t {
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    memo[n] = 0;  // guards against cycles; result is meaningless there
    std::size_t h = 0;
    for (const auto& [m, c] : t.node(n).branches) h = std::max(h, 1 + go(c));
    return memo[n] = h;
  };
  return go(t.root());
}

// ----- printing -----------------------------------------------------------

std::string branch_text(const ProcNode& n, const Message& m, const std::string& body) {
  return n.peer.name + (n.kind == ProcKind::Output ? "!" : "?") + m.label + "; " + body;
}

template <class Node>
class Printer {
 public:
  Printer(const Term<Node>& t, std::string base) : t_(t), base_(std::move(base)) {
    // Back-edge targets and subterms used more than once get names.
    std::map<NodeId, int> colour;
    std::map<NodeId, std::size_t> uses;
    for (NodeId n : t_.reachable())
      for (const auto& [m, c] : t_.node(n).branches) ++uses[c];
    auto name = [&](NodeId c) {
      if (!names_.count(c)) names_[c] = c == t_.root() ? base_ : base_ + "_" + std::to_string(names_.size() + 1);
    };
    std::function<void(NodeId)> visit = [&](NodeId n) {
      colour[n] = 1;
      for (const auto& [m, c] : t_.node(n).branches) {
        if (colour[c] == 1) {
          name(c);
          continue;
        }
        if (uses[c] > 1 && !t_.node(c).branches.empty()) name(c);
        if (colour[c] == 0) visit(c);
      }
      colour[n] = 2;
    };
    visit(t_.root());
    if (names_.count(t_.root())) names_[t_.root()] = base_;
  }

  bool recursive() const { return !names_.empty(); }

  // Definitions: root first, then auxiliary names in order of creation.
  std::vector<std::pair<std::string, std::string>> definitions() const {
    std::vector<std::pair<std::string, std::string>> out{{base_, body(t_.root())}};
    std::vector<std::pair<std::string, NodeId>> aux;
    for (const auto& [n, name] : names_)
      if (n != t_.root()) aux.emplace_back(name, n);
    std::sort(aux.begin(), aux.end(), [](const auto& a, const auto& b) {
      return a.first.size() != b.first.size() ? a.first.size() < b.first.size() : a.first < b.first;
    });
    for (const auto& [name, n] : aux) out.emplace_back(name, body(n));
    return out;
  }

 private:
  std::string ref(NodeId n) const {
    auto it = names_.find(n);
    return it != names_.end() ? it->second : body(n);
  }
  std::string body(NodeId n) const;

  const Term<Node>& t_;
  std::string base_;
  std::map<NodeId, std::string> names_;
};

template <>
std::string Printer<ProcNode>::body(NodeId id) const {
  const ProcNode& n = t_.node(id);
  if (n.kind == ProcKind::Inact) return "0";
  if (n.branches.size() == 1) {
    const auto& [m, c] = *n.branches.begin();
    return branch_text(n, m, ref(c));
  }
  std::string s = n.kind == ProcKind::Output ? "+{" : "&{";
  bool first = true;
  for (const auto& [m, c] : n.branches) {
    if (!first) s += ", ";
    first = false;
    s += branch_text(n, m, ref(c));
  }
  return s + "}";
}

template <>
std::string Printer<GlobalNode>::body(NodeId id) const {
  const GlobalNode& n = t_.node(id);
  if (n.kind == GlobalKind::End) return "end";
  std::string head = n.sender.name + "->" + n.receiver.name + ":";
  if (n.branches.size() == 1) {
    const auto& [m, c] = *n.branches.begin();
    return head + m.label + "; " + ref(c);
  }
  std::string s = head + "{";
  bool first = true;
  for (const auto& [m, c] : n.branches) {
    if (!first) s += ", ";
    first = false;
    s += m.label + ". " + ref(c);
  }
  return s + "}";
}

template <class Node>
std::string inline_text(const Term<Node>& t) {
  Term<Node> c = canonical_term(t);
  Printer<Node> pr(c, "X");
  auto defs = pr.definitions();
  if (!pr.recursive()) return defs.front().second;
  std::string s = "X where ";
  for (std::size_t i = 0; i < defs.size(); ++i) {
    if (i) s += "; ";
    s += defs[i].first + " = " + defs[i].second;
  }
  return s;
}

template <class Node>
std::string definitions_text(const std::string& keyword, const std::string& name, const Term<Node>& t) {
  Term<Node> c = canonical_term(t);
  Printer<Node> pr(c, name);
  std::string s;
  for (const auto& [n, body] : pr.definitions()) s += keyword + " " + n + " = " + body + "\n";
  return s;
}

void check_choice(const Participant& peer, std::size_t branches, const char* what) {
  if (branches == 0) throw Error(ErrorCode::EmptyChoice, std::string("empty ") + what + " toward " + peer.name);
}

}  // namespace

// ---------------------------------------------------------------------------

Process inact() { return Process(); }
Global end_type() { return Global(); }

namespace {

template <class Node, class Sub>
Term<Node> make_choice(Node head, const std::vector<std::pair<Message, Sub>>& branches) {
  GraphBuilder<Node> b;
  NodeId root = b.add(head);
  for (const auto& [m, sub] : branches) {
    NodeId child = b.import(sub);
    if (!b[root].branches.emplace(m, child).second)
      throw Error(ErrorCode::DuplicateBranchLabel, "duplicate branch label " + m.label);
  }
  return std::move(b).finish(root);
}

}  // namespace

Process out_choice(const Participant& peer, const std::vector<std::pair<Message, Process>>& branches) {
  check_choice(peer, branches.size(), "output choice");
  return make_choice(ProcNode{ProcKind::Output, peer, {}}, branches);
}

Process in_choice(const Participant& peer, const std::vector<std::pair<Message, Process>>& branches) {
  check_choice(peer, branches.size(), "input choice");
  return make_choice(ProcNode{ProcKind::Input, peer, {}}, branches);
}

Global comm(const Participant& sender, const Participant& receiver,
            const std::vector<std::pair<Message, Global>>& branches) {
  if (sender == receiver) throw Error(ErrorCode::SelfCommunication, "self communication of " + sender.name);
  check_choice(receiver, branches.size(), "global choice");
  return make_choice(GlobalNode{GlobalKind::Comm, sender, receiver, {}}, branches);
}

void validate(const Process& p) {
  for (NodeId n : p.reachable()) {
    const ProcNode& node = p.node(n);
    if (node.kind != ProcKind::Inact) check_choice(node.peer, node.branches.size(), "choice");
    else if (!node.branches.empty()) throw Error(ErrorCode::Parse, "inaction with continuations");
  }
}

void validate(const Global& g) {
  for (NodeId n : g.reachable()) {
    const GlobalNode& node = g.node(n);
    if (node.kind == GlobalKind::End) {
      if (!node.branches.empty()) throw Error(ErrorCode::Parse, "end with continuations");
      continue;
    }
    if (node.sender == node.receiver)
      throw Error(ErrorCode::SelfCommunication, "self communication of " + node.sender.name);
    check_choice(node.receiver, node.branches.size(), "global choice");
  }
}

bool process_equal(const Process& a, const Process& b) { return term_equal(a, b); }
bool global_equal(const Global& a, const Global& b) { return term_equal(a, b); }
Process canonical(const Process& p) { return canonical_term(p); }
Global canonical(const Global& g) { return canonical_term(g); }
std::string canonical_key(const Process& p) { return key_of(p); }
std::string canonical_key(const Global& g) { return key_of(g); }
Process unfold(const Process& p, int times) { return unfold_term(p, times); }
Global unfold(const Global& g, int times) { return unfold_term(g, times); }
bool recursion_free(const Process& p) { return acyclic(p); }
bool recursion_free(const Global& g) { return acyclic(g); }
std::size_t height(const Process& p) { return height_of(p); }
std::size_t height(const Global& g) { return height_of(g); }

std::set<Participant> participants_global(const Global& g) {
  std::set<Participant> out;
  for (NodeId n : g.reachable()) {
    const GlobalNode& node = g.node(n);
    if (node.kind == GlobalKind::Comm) {
      out.insert(node.sender);
      out.insert(node.receiver);
    }
  }
  return out;
}

std::set<Participant> participants_process(const Process& p) {
  std::set<Participant> out;
  for (NodeId n : p.reachable())
    if (p.node(n).kind != ProcKind::Inact) out.insert(p.node(n).peer);
  return out;
}

std::string to_string(const Process& p) { return inline_text(p); }
std::string to_string(const Global& g) { return inline_text(g); }

std::string format_definitions(const std::string& name, const Process& p) {
  return definitions_text("process", name, p);
}
std::string format_definitions(const std::string& name, const Global& g) {
  return definitions_text("global", name, g);
}

// ---------------------------------------------------------------------------

Network::Network(const std::map<Participant, Process>& bindings) {
  for (const auto& [p, proc] : bindings)
    if (proc.node().kind != ProcKind::Inact) bindings_.emplace(p, proc);
}

Process Network::at(const Participant& p) const {
  auto it = bindings_.find(p);
  return it == bindings_.end() ? inact() : it->second;
}

std::set<Participant> Network::participants() const {
  std::set<Participant> out;
  for (const auto& [p, proc] : bindings_) out.insert(p);
  return out;
}

Network Network::with(const Participant& p, const Process& proc) const {
  Network n = *this;
  if (proc.node().kind == ProcKind::Inact) n.bindings_.erase(p);
  else n.bindings_.insert_or_assign(p, proc);
  return n;
}

bool network_equal(const Network& a, const Network& b) {
  if (a.bindings().size() != b.bindings().size()) return false;
  auto ia = a.bindings().begin();
  auto ib = b.bindings().begin();
  for (; ia != a.bindings().end(); ++ia, ++ib)
    if (ia->first != ib->first || !process_equal(ia->second, ib->second)) return false;
  return true;
}

std::string canonical_key(const Network& n) {
  std::string out;
  for (const auto& [p, proc] : n.bindings()) out += p.name + "::" + canonical_key(proc) + "|";
  return out;
}

std::string to_string(const Network& n) {
  if (n.empty()) return "0";
  std::string out;
  for (const auto& [p, proc] : n.bindings()) {
    if (!out.empty()) out += " | ";
    out += p.name + " :: " + to_string(proc);
  }
  return out;
}

}  // namespace mpses
