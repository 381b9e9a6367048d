#include "mpses/net_es.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace mpses {

NEvent NEvent::make(LocatedEvent a, LocatedEvent b) {
  if (!dual_located(a, b))
    throw Error(ErrorCode::Undefined, "located events " + to_string(a) + " and " + to_string(b) + " are not dual");
  if (b.owner < a.owner) std::swap(a, b);
  return NEvent{std::move(a), std::move(b)};
}

const LocatedEvent* NEvent::component(const Participant& p) const {
  if (first.owner == p) return &first;
  if (second.owner == p) return &second;
  return nullptr;
}

UndirectedSeq proj_pevent(const PEvent& e, const Participant& p) {
  UndirectedSeq out;
  for (const Action& a : e)
    if (a.peer == p) out.push_back(Polarised{a.direction, a.message});
  return out;
}

bool dual(const UndirectedSeq& a, const UndirectedSeq& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].message != b[i].message || a[i].direction == b[i].direction) return false;
  return true;
}

bool dual_located(const LocatedEvent& a, const LocatedEvent& b) {
  if (a.owner == b.owner || a.event.empty() || b.event.empty()) return false;
  if (a.event.back().peer != b.owner || b.event.back().peer != a.owner) return false;
  return dual(proj_pevent(a.event, b.owner), proj_pevent(b.event, a.owner));
}

Communication cm(const NEvent& v) {
  const LocatedEvent& s = v.first.event.back().direction == Direction::Output ? v.first : v.second;
  return Communication{s.owner, s.event.back().message, s.event.back().peer};
}

std::set<Participant> loc(const NEvent& v) { return {v.first.owner, v.second.owner}; }

namespace {

template <class F>
bool any_shared_owner(const NEvent& a, const NEvent& b, F pred) {
  for (const LocatedEvent* x : {&a.first, &a.second})
    for (const LocatedEvent* y : {&b.first, &b.second})
      if (x->owner == y->owner && pred(x->event, y->event)) return true;
  return false;
}

}  // namespace

bool n_flow(const NEvent& a, const NEvent& b) {
  return any_shared_owner(a, b, [](const PEvent& x, const PEvent& y) { return x.size() < y.size() && pe_leq(x, y); });
}

bool n_conflict_shared_owner(const NEvent& a, const NEvent& b) {
  return any_shared_owner(a, b, [](const PEvent& x, const PEvent& y) { return pe_conflict(x, y); });
}

bool n_conflict_mutual_projection(const NEvent& a, const NEvent& b) {
  for (const LocatedEvent* x : {&a.first, &a.second})
    for (const LocatedEvent* y : {&b.first, &b.second}) {
      if (x->owner == y->owner) continue;
      UndirectedSeq px = proj_pevent(x->event, y->owner);
      UndirectedSeq py = proj_pevent(y->event, x->owner);
      if (px.size() == py.size() && !dual(px, py)) return true;
    }
  return false;
}

bool n_conflict(const NEvent& a, const NEvent& b) {
  return n_conflict_shared_owner(a, b) || n_conflict_mutual_projection(a, b);
}

namespace {

// Causal-set search over an indexed event set. A causal set picks, for every
// strict prefix of each component, one event holding that located prefix.
class CauseFinder {
 public:
  explicit CauseFinder(std::vector<NEvent> evs) : evs_(std::move(evs)) {
    for (std::size_t i = 0; i < evs_.size(); ++i) {
      holders_[evs_[i].first].push_back(i);
      holders_[evs_[i].second].push_back(i);
    }
  }

  const std::vector<NEvent>& events() const { return evs_; }

  // Calls `found` for each causal set of event i among `alive`; stops early
  // when `found` returns false.
  void search(std::size_t i, const std::vector<char>& alive, const std::function<bool(const std::vector<std::size_t>&)>& found) {
    std::vector<LocatedEvent> slots;
    for (const LocatedEvent* c : {&evs_[i].first, &evs_[i].second})
      for (std::size_t k = 1; k < c->event.size(); ++k)
        slots.push_back(LocatedEvent{c->owner, PEvent(c->event.begin(), c->event.begin() + static_cast<std::ptrdiff_t>(k))});
    std::vector<std::size_t> chosen;
    bool stop = false;
    std::function<void(std::size_t)> go = [&](std::size_t k) {
      if (stop) return;
      if (k == slots.size()) {
        if (!found(chosen)) stop = true;
        return;
      }
      for (std::size_t c : chosen)
        if (evs_[c].first == slots[k] || evs_[c].second == slots[k]) {
          go(k + 1);
          return;
        }
      auto it = holders_.find(slots[k]);
      if (it == holders_.end()) return;
      for (std::size_t cand : it->second) {
        if (!alive[cand] || cand == i || conflict(cand, i)) continue;
        bool ok = true;
        for (std::size_t c : chosen)
          if (conflict(cand, c)) {
            ok = false;
            break;
          }
        if (!ok) continue;
        chosen.push_back(cand);
        go(k + 1);
        chosen.pop_back();
        if (stop) return;
      }
    };
    go(0);
  }

  bool has_cause(std::size_t i, const std::vector<char>& alive) {
    bool any = false;
    search(i, alive, [&](const std::vector<std::size_t>&) {
      any = true;
      return false;
    });
    return any;
  }

 private:
  bool conflict(std::size_t a, std::size_t b) {
    auto key = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
    auto it = conflicts_.find(key);
    if (it != conflicts_.end()) return it->second;
    return conflicts_[key] = n_conflict(evs_[a], evs_[b]);
  }

  std::vector<NEvent> evs_;
  std::map<LocatedEvent, std::vector<std::size_t>> holders_;
  std::map<std::pair<std::size_t, std::size_t>, bool> conflicts_;
};

}  // namespace

std::vector<std::set<NEvent>> causal_sets(const NEvent& v, const std::set<NEvent>& ev) {
  std::vector<NEvent> all(ev.begin(), ev.end());
  auto pos = std::lower_bound(all.begin(), all.end(), v);
  if (pos == all.end() || *pos != v) pos = all.insert(pos, v);
  std::size_t i = static_cast<std::size_t>(pos - all.begin());
  CauseFinder finder(std::move(all));
  std::vector<char> alive(finder.events().size(), 1);
  std::set<std::set<std::size_t>> found;
  finder.search(i, alive, [&](const std::vector<std::size_t>& c) {
    found.insert(std::set<std::size_t>(c.begin(), c.end()));
    return true;
  });
  std::vector<std::set<NEvent>> out;
  for (const auto& s : found) {
    std::set<NEvent> e;
    for (std::size_t k : s) e.insert(finder.events()[k]);
    out.push_back(std::move(e));
  }
  return out;
}

std::set<NEvent> narrowing(const std::set<NEvent>& e) {
  CauseFinder finder(std::vector<NEvent>(e.begin(), e.end()));
  const std::size_t n = finder.events().size();
  std::vector<char> alive(n, 1);
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<char> next = alive;
    for (std::size_t i = 0; i < n; ++i)
      if (alive[i] && !finder.has_cause(i, alive)) {
        next[i] = 0;
        changed = true;
      }
    alive = std::move(next);
  }
  std::set<NEvent> out;
  for (std::size_t i = 0; i < n; ++i)
    if (alive[i]) out.insert(finder.events()[i]);
  return out;
}

NEventSet de_events(const Network& n, std::size_t bound) {
  NEventSet out;
  out.exact = true;
  std::map<Participant, std::set<PEvent>> pe;
  for (const auto& [p, proc] : n.bindings()) {
    PEventSet s = p_events(proc, bound);
    out.exact = out.exact && s.exact;
    pe[p] = std::move(s.events);
  }
  for (const auto& [p, ep] : pe)
    for (const auto& [q, eq] : pe) {
      if (!(p < q)) continue;
      // Index q's events ending toward p by their view of p.
      std::map<UndirectedSeq, std::vector<const PEvent*>> by_view;
      for (const PEvent& e : eq)
        if (e.back().peer == p) by_view[proj_pevent(e, p)].push_back(&e);
      for (const PEvent& e : ep) {
        if (e.back().peer != q) continue;
        UndirectedSeq want = proj_pevent(e, q);
        for (auto& x : want) x.direction = x.direction == Direction::Output ? Direction::Input : Direction::Output;
        auto it = by_view.find(want);
        if (it == by_view.end()) continue;
        for (const PEvent* f : it->second) out.events.insert(NEvent{LocatedEvent{p, e}, LocatedEvent{q, *f}});
      }
    }
  return out;
}

namespace {

NetworkES build_net_es(const std::set<NEvent>& events, bool exact, EsKind kind) {
  NetworkES out;
  out.exact = exact;
  auto& es = out.es;
  es.kind = EsKind::Flow;
  es.events.assign(events.begin(), events.end());
  const std::size_t n = es.events.size();
  es.order = Relation(n);
  es.conflict = Relation(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (n_flow(es.events[i], es.events[j])) es.order.set(i, j);
      if (i < j && n_conflict(es.events[i], es.events[j])) {
        es.conflict.set(i, j);
        es.conflict.set(j, i);
      }
    }
  if (kind == EsKind::Prime) {
    es.kind = EsKind::Prime;
    es.order = es.order.reflexive_transitive_closure();
  }
  return out;
}

}  // namespace

NetworkES esn(const Network& n, std::size_t bound) {
  NEventSet de = de_events(n, bound);
  return build_net_es(narrowing(de.events), de.exact, EsKind::Flow);
}

bool is_binary(const Network& n) {
  if (n.bindings().size() != 2) return false;
  const Participant& p = n.bindings().begin()->first;
  const Participant& q = n.bindings().rbegin()->first;
  for (const Participant& x : participants_process(n.at(p)))
    if (x != q) return false;
  for (const Participant& x : participants_process(n.at(q)))
    if (x != p) return false;
  return true;
}

NetworkES esn_star(const Network& n, std::size_t bound) {
  if (!is_binary(n)) throw Error(ErrorCode::NotBinary, "network is not a two-party network");
  NEventSet de = de_events(n, bound);
  return build_net_es(de.events, de.exact, EsKind::Prime);
}

std::set<PEvent> project_nevents(const std::set<NEvent>& x, const Participant& p) {
  std::set<PEvent> out;
  for (const NEvent& v : x)
    if (const LocatedEvent* c = v.component(p)) out.insert(c->event);
  return out;
}

std::optional<Action> action_of(const Communication& alpha, const Participant& p) {
  if (alpha.sender == p) return Action{Direction::Output, alpha.receiver, alpha.message};
  if (alpha.receiver == p) return Action{Direction::Input, alpha.sender, alpha.message};
  return std::nullopt;
}

NEvent n_retrieval(const NEvent& v, const Communication& alpha) {
  NEvent out = v;
  for (LocatedEvent* c : {&out.first, &out.second})
    if (auto a = action_of(alpha, c->owner)) c->event.insert(c->event.begin(), *a);
  return out;
}

NEvent n_retrieval(const NEvent& v, const Trace& sigma) {
  NEvent out = v;
  for (auto it = sigma.rbegin(); it != sigma.rend(); ++it) out = n_retrieval(out, *it);
  return out;
}

std::optional<NEvent> n_residual(const NEvent& v, const Communication& alpha) {
  NEvent out = v;
  for (LocatedEvent* c : {&out.first, &out.second}) {
    auto a = action_of(alpha, c->owner);
    if (!a) continue;
    if (c->event.size() < 2 || c->event.front() != *a) return std::nullopt;
    c->event.erase(c->event.begin());
  }
  return out;
}

std::optional<NEvent> n_residual(const NEvent& v, const Trace& sigma) {
  std::optional<NEvent> out = v;
  for (const auto& alpha : sigma) {
    out = n_residual(*out, alpha);
    if (!out) return std::nullopt;
  }
  return out;
}

std::vector<NEvent> nec(const Trace& sigma) {
  std::vector<NEvent> out;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const Communication& a = sigma[i];
    NEvent atom = NEvent::make(LocatedEvent{a.sender, {output(a.receiver, a.message)}},
                               LocatedEvent{a.receiver, {input(a.sender, a.message)}});
    out.push_back(n_retrieval(atom, Trace(sigma.begin(), sigma.begin() + static_cast<std::ptrdiff_t>(i))));
  }
  return out;
}

std::string to_string(const LocatedEvent& e) { return e.owner.name + "::" + to_string(e.event); }

std::string to_string(const NEvent& v) { return "{" + to_string(v.first) + ", " + to_string(v.second) + "}"; }

}  // namespace mpses
