#include "mpses/proc_es.hpp"

#include <algorithm>

namespace mpses {

PEventSet p_events(const Process& p, std::size_t bound) {
  PEventSet out;
  out.exact = true;
  PEvent path;
  auto walk = [&](auto&& self, NodeId n) -> void {
    const ProcNode& node = p.node(n);
    if (node.kind == ProcKind::Inact) return;
    if (path.size() == bound) {
      out.exact = false;
      return;
    }
    Direction d = node.kind == ProcKind::Output ? Direction::Output : Direction::Input;
    for (const auto& [m, c] : node.branches) {
      path.push_back(Action{d, node.peer, m});
      out.events.insert(path);
      self(self, c);
      path.pop_back();
    }
  };
  walk(walk, p.root());
  return out;
}

bool pe_leq(const PEvent& a, const PEvent& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

bool pe_conflict(const PEvent& a, const PEvent& b) { return !pe_leq(a, b) && !pe_leq(b, a); }

ProcessES esp(const Process& p, std::size_t bound) {
  PEventSet pe = p_events(p, bound);
  ProcessES out;
  out.exact = pe.exact;
  auto& es = out.es;
  es.kind = EsKind::Prime;
  es.events.assign(pe.events.begin(), pe.events.end());
  const std::size_t n = es.events.size();
  es.order = Relation(n);
  es.conflict = Relation(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (pe_leq(es.events[i], es.events[j])) es.order.set(i, j);
      if (pe_conflict(es.events[i], es.events[j])) es.conflict.set(i, j);
    }
  return out;
}

}  // namespace mpses
