#include "mpses/lts.hpp"

#include <map>
#include <optional>

namespace mpses {

std::set<Communication> net_enabled(const Network& n) {
  std::set<Communication> out;
  for (const auto& [p, proc] : n.bindings()) {
    const ProcNode& sender = proc.node();
    if (sender.kind != ProcKind::Output) continue;
    auto it = n.bindings().find(sender.peer);
    if (it == n.bindings().end()) continue;
    const ProcNode& receiver = it->second.node();
    if (receiver.kind != ProcKind::Input || receiver.peer != p) continue;
    for (const auto& [m, c] : sender.branches)
      if (receiver.branches.count(m)) out.insert(Communication{p, m, sender.peer});
  }
  return out;
}

Network net_step(const Network& n, const Communication& alpha) {
  if (!net_enabled(n).count(alpha))
    throw Error(ErrorCode::NotEnabled, "network cannot perform " + to_string(alpha));
  Process s = n.at(alpha.sender).child(alpha.message);
  Process r = n.at(alpha.receiver).child(alpha.message);
  return n.with(alpha.sender, s).with(alpha.receiver, r);
}

namespace {

bool involves(const GlobalNode& node, const Communication& alpha) {
  return node.sender == alpha.sender || node.sender == alpha.receiver || node.receiver == alpha.sender ||
         node.receiver == alpha.receiver;
}

// Least solution of the enabledness equations over the reachable graph.
// Derivations are finite, so Kleene iteration from the empty assignment
// yields exactly the derivable transitions, also on recursive types.
std::map<NodeId, std::set<Communication>> enabled_table(const Global& g) {
  std::vector<NodeId> reach = g.reachable();
  std::map<NodeId, std::set<Communication>> table;
  for (NodeId n : reach) table[n];
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto it = reach.rbegin(); it != reach.rend(); ++it) {
      const GlobalNode& node = g.node(*it);
      if (node.kind == GlobalKind::End) continue;
      std::set<Communication> en;
      for (const auto& [m, c] : node.branches) en.insert(Communication{node.sender, m, node.receiver});
      std::optional<std::set<Communication>> common;
      for (const auto& [m, c] : node.branches) {
        const auto& sub = table[c];
        if (!common) {
          common = sub;
        } else {
          std::set<Communication> keep;
          for (const auto& a : *common)
            if (sub.count(a)) keep.insert(a);
          common = std::move(keep);
        }
      }
      for (const auto& a : *common)
        if (!involves(node, a)) en.insert(a);
      auto& slot = table[*it];
      if (en.size() != slot.size()) {
        slot = std::move(en);
        changed = true;
      }
    }
  }
  return table;
}

}  // namespace

std::set<Communication> global_enabled(const Global& g) { return enabled_table(g)[g.root()]; }

Global global_step(const Global& g, const Communication& alpha) {
  auto table = enabled_table(g);
  if (!table[g.root()].count(alpha))
    throw Error(ErrorCode::NotEnabled, "global type cannot perform " + to_string(alpha));
  const GlobalNode& root = g.node();
  if (root.sender == alpha.sender && root.receiver == alpha.receiver) return g.child(alpha.message);

  // Rebuild every choice node above the communication; untouched subterms
  // keep pointing into the original arena.
  std::vector<GlobalNode> nodes(*g.arena());
  std::map<NodeId, NodeId> stepped;
  auto step = [&](auto&& self, NodeId n) -> NodeId {
    if (auto it = stepped.find(n); it != stepped.end()) return it->second;
    const GlobalNode& node = g.node(n);
    if (node.sender == alpha.sender && node.receiver == alpha.receiver)
      return stepped[n] = node.branches.at(alpha.message);
    GlobalNode copy = node;
    for (auto& [m, c] : copy.branches) c = self(self, c);
    nodes.push_back(std::move(copy));
    return stepped[n] = static_cast<NodeId>(nodes.size() - 1);
  };
  NodeId root_id = step(step, g.root());
  return Global(std::make_shared<const std::vector<GlobalNode>>(std::move(nodes)), root_id);
}

Network run(const Network& n, const Trace& sigma) {
  Network cur = n;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (!net_enabled(cur).count(sigma[i]))
      throw Error(ErrorCode::NotEnabled, "step " + std::to_string(i) + ": network cannot perform " + to_string(sigma[i]), i);
    cur = net_step(cur, sigma[i]);
  }
  return cur;
}

Global run(const Global& g, const Trace& sigma) {
  Global cur = g;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    try {
      cur = global_step(cur, sigma[i]);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotEnabled) throw;
      throw Error(ErrorCode::NotEnabled, "step " + std::to_string(i) + ": " + e.what(), i);
    }
  }
  return cur;
}

}  // namespace mpses
