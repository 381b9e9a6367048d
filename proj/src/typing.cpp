#include "mpses/typing.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace mpses {

std::string to_string(const Depth& d) { return d.infinite ? "inf" : std::to_string(d.value); }

namespace {

bool involves(const GlobalNode& n, const Participant& p) {
  return n.kind == GlobalKind::Comm && (n.sender == p || n.receiver == p);
}

// Nodes from which a node involving p is reachable (the node itself counts).
std::set<NodeId> nodes_reaching(const Global& g, const std::vector<NodeId>& reach, const Participant& p) {
  std::set<NodeId> out;
  for (NodeId n : reach)
    if (involves(g.node(n), p)) out.insert(n);
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId n : reach) {
      if (out.count(n)) continue;
      for (const auto& [m, c] : g.node(n).branches)
        if (out.count(c)) {
          out.insert(n);
          changed = true;
          break;
        }
    }
  }
  return out;
}

std::string describe(const GlobalNode& n) {
  return n.kind == GlobalKind::End ? "end" : n.sender.name + "->" + n.receiver.name;
}

}  // namespace

Depth depth(const Global& g, const Participant& p) {
  if (involves(g.node(), p)) return {1, false};
  std::set<NodeId> reaching = nodes_reaching(g, g.reachable(), p);
  if (!reaching.count(g.root())) return {0, false};

  // Longest path through p-free nodes that can still reach p; a cycle among
  // them means p can be postponed forever.
  std::map<NodeId, int> colour;
  std::map<NodeId, std::size_t> memo;
  bool cyclic = false;
  std::function<std::size_t(NodeId)> go = [&](NodeId n) -> std::size_t {
    const GlobalNode& node = g.node(n);
    if (involves(node, p)) return 1;
    if (auto it = memo.find(n); it != memo.end()) return it->second;
    colour[n] = 1;
    std::size_t best = 0;
    for (const auto& [m, c] : node.branches) {
      if (!reaching.count(c)) continue;
      if (!involves(g.node(c), p) && colour[c] == 1) {
        cyclic = true;
        continue;
      }
      best = std::max(best, go(c));
    }
    colour[n] = 2;
    return memo[n] = best + 1;
  };
  std::size_t d = go(g.root());
  if (cyclic) return Depth::inf();
  return {d, false};
}

bool bounded(const Global& g) {
  std::set<Participant> parts = participants_global(g);
  for (NodeId n : g.reachable())
    for (const auto& p : parts)
      if (depth(g.at(n), p).infinite) return false;
  return true;
}

std::optional<Process> try_project(const Global& g, const Participant& r, std::string* reason) {
  std::vector<NodeId> reach = g.reachable();
  std::set<NodeId> has_r = nodes_reaching(g, reach, r);
  if (!has_r.count(g.root())) return inact();

  // Nodes that do not mention r at the root stand for the projection of
  // one of their branches. Pick the branch closest to an r-node so that
  // these aliases always bottom out in a constructor.
  std::map<NodeId, std::size_t> dist;
  for (NodeId n : has_r)
    if (involves(g.node(n), r)) dist[n] = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (NodeId n : has_r) {
      if (involves(g.node(n), r)) continue;
      for (const auto& [m, c] : g.node(n).branches) {
        auto it = dist.find(c);
        if (it == dist.end()) continue;
        auto cur = dist.find(n);
        if (cur == dist.end() || it->second + 1 < cur->second) {
          dist[n] = it->second + 1;
          changed = true;
        }
      }
    }
  }
  auto resolve = [&](NodeId n) {
    while (!involves(g.node(n), r)) {
      for (const auto& [m, c] : g.node(n).branches) {
        auto it = dist.find(c);
        if (it != dist.end() && it->second + 1 == dist.at(n)) {
          n = c;
          break;
        }
      }
    }
    return n;
  };

  GraphBuilder<ProcNode> b;
  NodeId zero = b.add({});
  std::map<NodeId, NodeId> proc_of;
  for (NodeId n : has_r)
    if (involves(g.node(n), r)) proc_of[n] = b.add({});
  auto target = [&](NodeId c) { return has_r.count(c) ? proc_of.at(resolve(c)) : zero; };
  for (auto [n, id] : proc_of) {
    const GlobalNode& node = g.node(n);
    ProcNode pn;
    pn.kind = node.sender == r ? ProcKind::Output : ProcKind::Input;
    pn.peer = node.sender == r ? node.receiver : node.sender;
    for (const auto& [m, c] : node.branches) pn.branches.emplace(m, target(c));
    b[id] = std::move(pn);
  }
  Process all = std::move(b).finish(zero);

  for (NodeId n : has_r) {
    const GlobalNode& node = g.node(n);
    if (involves(node, r)) continue;
    Process expected = all.at(target(n));
    for (const auto& [m, c] : node.branches) {
      if (!has_r.count(c)) {
        if (reason)
          *reason = "participant " + r.name + " is absent from branch " + m.label + " of " + describe(node);
        return std::nullopt;
      }
      if (!process_equal(all.at(target(c)), expected)) {
        if (reason)
          *reason = "branch " + m.label + " of " + describe(node) + " projects differently onto " + r.name;
        return std::nullopt;
      }
    }
  }
  return canonical(all.at(target(g.root())));
}

Process project(const Global& g, const Participant& r) {
  std::string reason;
  auto p = try_project(g, r, &reason);
  if (!p) throw Error(ErrorCode::Undefined, "projection onto " + r.name + " undefined: " + reason);
  return *p;
}

std::string well_formedness_problem(const Global& g) {
  std::set<Participant> parts = participants_global(g);
  for (NodeId n : g.reachable())
    for (const auto& p : parts)
      if (depth(g.at(n), p).infinite)
        return "unbounded: participant " + p.name + " can be postponed forever below " + describe(g.node(n));
  for (const auto& p : parts) {
    std::string reason;
    if (!try_project(g, p, &reason)) return "not projectable: " + reason;
  }
  return {};
}

bool well_formed(const Global& g) { return well_formedness_problem(g).empty(); }

bool proc_leq(const Process& p, const Process& q) {
  std::set<std::pair<NodeId, NodeId>> assumed;
  std::vector<std::pair<NodeId, NodeId>> work{{p.root(), q.root()}};
  while (!work.empty()) {
    auto [x, y] = work.back();
    work.pop_back();
    if (!assumed.insert({x, y}).second) continue;
    const ProcNode& a = p.node(x);
    const ProcNode& b = q.node(y);
    if (a.kind != b.kind) return false;
    if (a.kind == ProcKind::Inact) continue;
    if (a.peer != b.peer) return false;
    if (a.kind == ProcKind::Output && a.branches.size() != b.branches.size()) return false;
    for (const auto& [m, c] : b.branches) {
      auto it = a.branches.find(m);
      if (it == a.branches.end()) return false;
      work.emplace_back(it->second, c);
    }
  }
  return true;
}

TypecheckResult typecheck_report(const Network& n, const Global& g) {
  TypecheckResult res;
  if (std::string problem = well_formedness_problem(g); !problem.empty()) {
    res.reason = "global type is not well formed (" + problem + ")";
    return res;
  }
  for (const auto& p : participants_global(g)) {
    if (!n.bindings().count(p)) {
      res.participant = p;
      res.reason = "participant " + p.name + " of the global type has no running process";
      return res;
    }
  }
  for (const auto& [p, proc] : n.bindings()) {
    Process expected = project(g, p);
    if (!proc_leq(proc, expected)) {
      res.participant = p;
      res.reason = "process of " + p.name + " is not below its projection " + to_string(expected);
      return res;
    }
  }
  res.ok = true;
  return res;
}

bool typecheck(const Network& n, const Global& g) { return typecheck_report(n, g).ok; }

}  // namespace mpses
