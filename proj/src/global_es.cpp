#include "mpses/global_es.hpp"

#include <algorithm>
#include <deque>

#include "mpses/lts.hpp"
#include "mpses/typing.hpp"

namespace mpses {

TraceSet g_traces(const Global& g, std::size_t bound) {
  TraceSet out;
  out.exact = true;
  Trace path;
  auto walk = [&](auto&& self, NodeId n) -> void {
    const GlobalNode& node = g.node(n);
    if (node.kind == GlobalKind::End) return;
    if (path.size() == bound) {
      out.exact = false;
      return;
    }
    for (const auto& [m, c] : node.branches) {
      path.push_back(Communication{node.sender, m, node.receiver});
      out.traces.insert(path);
      self(self, c);
      path.pop_back();
    }
  };
  walk(walk, g.root());
  return out;
}

Trace normal_form(const Trace& sigma) {
  std::vector<Communication> rest(sigma.begin(), sigma.end());
  Trace out;
  out.reserve(sigma.size());
  while (!rest.empty()) {
    // Candidates are the communications that commute with everything before
    // them; the least one goes first.
    std::size_t best = rest.size();
    for (std::size_t i = 0; i < rest.size(); ++i) {
      bool movable = true;
      for (std::size_t j = 0; j < i && movable; ++j) movable = !shares_participant(rest[j], rest[i]);
      if (movable && (best == rest.size() || rest[i] < rest[best])) best = i;
    }
    out.push_back(rest[best]);
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return out;
}

bool trace_equiv(const Trace& a, const Trace& b) {
  return a.size() == b.size() && normal_form(a) == normal_form(b);
}

std::set<Trace> class_members(const Trace& sigma) {
  std::set<Trace> seen{sigma};
  std::deque<Trace> queue{sigma};
  while (!queue.empty()) {
    Trace t = std::move(queue.front());
    queue.pop_front();
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
      if (shares_participant(t[i], t[i + 1])) continue;
      Trace s = t;
      std::swap(s[i], s[i + 1]);
      if (seen.insert(s).second) queue.push_back(std::move(s));
    }
  }
  return seen;
}

bool is_pointed(const Trace& sigma) {
  for (std::size_t i = 0; i + 1 < sigma.size(); ++i) {
    bool linked = false;
    for (std::size_t j = i + 1; j < sigma.size() && !linked; ++j) linked = shares_participant(sigma[i], sigma[j]);
    if (!linked) return false;
  }
  return true;
}

Communication cm(const GEvent& g) { return g.canonical.back(); }

namespace {

bool touches(const Communication& alpha, const Trace& sigma) {
  for (const auto& c : sigma)
    if (shares_participant(alpha, c)) return true;
  return false;
}

// Index of the occurrence of alpha that can be moved to the front, if any.
std::optional<std::size_t> front_movable(const Trace& sigma, const Communication& alpha) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] == alpha) return i;
    if (shares_participant(sigma[i], alpha)) return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

GEvent g_retrieval(const Communication& alpha, const GEvent& g) {
  if (!touches(alpha, g.canonical)) return g;
  Trace t{alpha};
  t.insert(t.end(), g.canonical.begin(), g.canonical.end());
  return GEvent::of(t);
}

GEvent g_retrieval(const Trace& sigma, const GEvent& g) {
  GEvent out = g;
  for (auto it = sigma.rbegin(); it != sigma.rend(); ++it) out = g_retrieval(*it, out);
  return out;
}

GEvent ev(const Trace& sigma) {
  if (sigma.empty()) throw Error(ErrorCode::Undefined, "ev of the empty trace");
  Trace prefix(sigma.begin(), sigma.end() - 1);
  return g_retrieval(prefix, GEvent{{sigma.back()}});
}

std::optional<GEvent> g_residual(const GEvent& g, const Communication& alpha) {
  if (auto i = front_movable(g.canonical, alpha)) {
    if (g.canonical.size() == 1) return std::nullopt;
    Trace rest = g.canonical;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(*i));
    return GEvent::of(rest);
  }
  if (!touches(alpha, g.canonical)) return g;
  return std::nullopt;
}

PEvent proj_trace(const Trace& sigma, const Participant& r) {
  PEvent out;
  for (const auto& c : sigma)
    if (auto a = action_of(c, r)) out.push_back(*a);
  return out;
}

bool g_leq(const GEvent& a, const GEvent& b) {
  // [a] is a prefix of [b] iff a's communications can be peeled off the
  // front of b one at a time.
  Trace rest = b.canonical;
  for (const auto& c : a.canonical) {
    auto i = front_movable(rest, c);
    if (!i) return false;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(*i));
  }
  return true;
}

bool g_leq_by_members(const GEvent& a, const GEvent& b) {
  if (a.canonical.size() > b.canonical.size()) return false;
  std::set<Trace> ma = class_members(a.canonical);
  for (const Trace& t : class_members(b.canonical)) {
    Trace prefix(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(a.canonical.size()));
    if (ma.count(prefix)) return true;
  }
  return false;
}

bool g_conflict(const GEvent& a, const GEvent& b) {
  std::set<Participant> parts = trace_participants(a.canonical);
  for (const Participant& p : parts)
    if (pe_conflict(proj_trace(a.canonical, p), proj_trace(b.canonical, p))) return true;
  return false;
}

GlobalES esg(const Global& g, std::size_t bound) {
  if (std::string problem = well_formedness_problem(g); !problem.empty())
    throw Error(ErrorCode::NotWellFormed, "global type is not well formed: " + problem);
  // Every g-event with at most `bound` communications is generated by some
  // run of that length; runs in the same class generate the same events.
  std::set<GEvent> events;
  std::set<Trace> seen;
  bool exact = true;
  Trace path;
  auto walk = [&](auto&& self, const Global& cur) -> void {
    std::set<Communication> enabled = global_enabled(cur);
    if (path.size() == bound) {
      if (!enabled.empty()) exact = false;
      return;
    }
    for (const auto& alpha : enabled) {
      path.push_back(alpha);
      if (seen.insert(normal_form(path)).second) {
        events.insert(ev(path));
        self(self, global_step(cur, alpha));
      }
      path.pop_back();
    }
  };
  walk(walk, g);
  GlobalES out;
  out.exact = exact;
  auto& es = out.es;
  es.kind = EsKind::Prime;
  es.events.assign(events.begin(), events.end());
  const std::size_t n = es.events.size();
  es.order = Relation(n);
  es.conflict = Relation(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (g_leq(es.events[i], es.events[j])) es.order.set(i, j);
      if (i < j && g_conflict(es.events[i], es.events[j])) {
        es.conflict.set(i, j);
        es.conflict.set(j, i);
      }
    }
  return out;
}

std::vector<GEvent> gec(const Trace& sigma) {
  std::vector<GEvent> out;
  for (std::size_t i = 1; i <= sigma.size(); ++i)
    out.push_back(ev(Trace(sigma.begin(), sigma.begin() + static_cast<std::ptrdiff_t>(i))));
  return out;
}

NEvent g_to_n(const GEvent& g) {
  Communication c = cm(g);
  return NEvent::make(LocatedEvent{c.sender, proj_trace(g.canonical, c.sender)},
                      LocatedEvent{c.receiver, proj_trace(g.canonical, c.receiver)});
}

std::string to_string(const GEvent& g) { return "[" + to_string(g.canonical) + "]"; }

}  // namespace mpses
