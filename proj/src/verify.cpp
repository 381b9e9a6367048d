#include "mpses/verify.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "mpses/lts.hpp"
#include "mpses/typing.hpp"

namespace mpses {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::PreconditionFailed: return "precondition-failed";
  }
  return "unknown";
}

namespace {

VerifyReport passed(const std::string& property, std::string note = {}) {
  VerifyReport r;
  r.property = property;
  r.note = std::move(note);
  return r;
}

VerifyReport failed(const std::string& property, const Network& n, const Global& g, Trace trace,
                    std::string detail) {
  VerifyReport r;
  r.property = property;
  r.verdict = Verdict::Fail;
  r.counterexample = Counterexample{to_string(n), to_string(g), std::move(trace), std::move(detail)};
  return r;
}

VerifyReport precondition(const std::string& property, std::string why) {
  VerifyReport r;
  r.property = property;
  r.verdict = Verdict::PreconditionFailed;
  r.note = std::move(why);
  return r;
}

Trace extended(const Trace& t, const Communication& c) {
  Trace out = t;
  out.push_back(c);
  return out;
}

// Breadth-first exploration of the typed pair, matching network steps with
// type steps (subject reduction) or type steps with network steps (fidelity).
VerifyReport explore_pair(const std::string& property, const Network& n0, const Global& g0, std::size_t max_len,
                          bool network_leads) {
  if (auto tc = typecheck_report(n0, g0); !tc) return precondition(property, "pair does not typecheck: " + tc.reason);
  struct State {
    Network n;
    Global g;
    Trace path;
  };
  std::set<std::string> seen{canonical_key(n0) + "#" + canonical_key(g0)};
  std::deque<State> queue{{n0, g0, {}}};
  while (!queue.empty()) {
    State st = std::move(queue.front());
    queue.pop_front();
    if (st.path.size() >= max_len) continue;
    std::set<Communication> net_en = net_enabled(st.n);
    std::set<Communication> glob_en = global_enabled(st.g);
    const auto& leading = network_leads ? net_en : glob_en;
    const auto& following = network_leads ? glob_en : net_en;
    for (const auto& alpha : leading) {
      Trace path = extended(st.path, alpha);
      if (!following.count(alpha))
        return failed(property, n0, g0, path,
                      std::string(network_leads ? "global type" : "network") + " cannot match " + to_string(alpha));
      Network n1 = net_step(st.n, alpha);
      Global g1 = global_step(st.g, alpha);
      if (auto tc = typecheck_report(n1, g1); !tc)
        return failed(property, n0, g0, path, "typing lost after " + to_string(alpha) + ": " + tc.reason);
      if (seen.insert(canonical_key(n1) + "#" + canonical_key(g1)).second)
        queue.push_back({std::move(n1), std::move(g1), std::move(path)});
    }
  }
  return passed(property);
}

}  // namespace

VerifyReport check_subject_reduction(const Network& n, const Global& g, std::size_t max_len) {
  return explore_pair("sr", n, g, max_len, true);
}

VerifyReport check_session_fidelity(const Network& n, const Global& g, std::size_t max_len) {
  return explore_pair("sf", n, g, max_len, false);
}

std::size_t default_progress_bound(const Global& g) {
  std::size_t total = 0;
  std::set<Participant> parts = participants_global(g);
  for (NodeId node : g.reachable())
    for (const auto& p : parts) {
      Depth d = depth(g.at(node), p);
      if (d.finite()) total += d.value;
    }
  return total;
}

VerifyReport check_progress(const Network& n0, const Global& g, std::optional<std::size_t> bound, std::size_t reach) {
  const std::string property = "progress";
  if (auto tc = typecheck_report(n0, g); !tc) return precondition(property, "pair does not typecheck: " + tc.reason);
  const std::size_t limit = bound ? *bound : default_progress_bound(g);

  // Shortest run from `start` whose last communication involves p.
  auto witness = [&](const Network& start, const Participant& p) -> std::optional<Trace> {
    std::set<std::string> seen{canonical_key(start)};
    std::deque<std::pair<Network, Trace>> queue{{start, {}}};
    while (!queue.empty()) {
      auto [cur, path] = std::move(queue.front());
      queue.pop_front();
      if (path.size() >= limit) continue;
      for (const auto& alpha : net_enabled(cur)) {
        Trace next_path = extended(path, alpha);
        if (alpha.sender == p || alpha.receiver == p) return next_path;
        Network next = net_step(cur, alpha);
        if (seen.insert(canonical_key(next)).second) queue.emplace_back(std::move(next), std::move(next_path));
      }
    }
    return std::nullopt;
  };

  std::set<std::string> seen{canonical_key(n0)};
  std::deque<std::pair<Network, Trace>> states{{n0, {}}};
  std::size_t longest = 0;
  while (!states.empty()) {
    auto [cur, path] = std::move(states.front());
    states.pop_front();
    for (const auto& [p, proc] : cur.bindings()) {
      auto w = witness(cur, p);
      if (!w)
        return failed(property, n0, g, path,
                      "participant " + p.name + " cannot communicate within " + std::to_string(limit) + " steps");
      longest = std::max(longest, w->size());
    }
    if (path.size() >= reach) continue;
    for (const auto& alpha : net_enabled(cur)) {
      Network next = net_step(cur, alpha);
      if (seen.insert(canonical_key(next)).second) states.emplace_back(std::move(next), extended(path, alpha));
    }
  }
  return passed(property, "longest witness " + std::to_string(longest) + ", bound " + std::to_string(limit));
}

VerifyReport check_isomorphism(const Network& n, const Global& g, std::size_t bound) {
  const std::string property = "iso";
  if (auto tc = typecheck_report(n, g); !tc) return precondition(property, "pair does not typecheck: " + tc.reason);
  NetworkES nes = esn(n, bound);
  GlobalES ges = esg(g, bound);
  auto dn = enumerate_configurations(nes.es, bound);
  auto dg = enumerate_configurations(ges.es, bound);

  std::map<GEvent, std::size_t> gidx;
  for (std::size_t i = 0; i < ges.es.events.size(); ++i) gidx[ges.es.events[i]] = i;
  std::map<EventSet, std::size_t> gconf;
  for (std::size_t i = 0; i < dg.size(); ++i) gconf[dg[i].events] = i;

  auto image = [&](const Trace& sigma, std::vector<std::size_t>* order) -> std::optional<EventSet> {
    EventSet out;
    for (const GEvent& e : gec(sigma)) {
      auto it = gidx.find(e);
      if (it == gidx.end()) return std::nullopt;
      out.push_back(it->second);
    }
    if (order) *order = out;
    std::sort(out.begin(), out.end());
    return out;
  };
  auto cm_trace = [&](const std::vector<std::size_t>& seq) {
    Trace t;
    for (std::size_t e : seq) t.push_back(cm(nes.es.events[e]));
    return t;
  };

  std::vector<Trace> traces(dn.size());
  std::vector<EventSet> img(dn.size());
  for (std::size_t i = 0; i < dn.size(); ++i) {
    traces[i] = cm_trace(dn[i].witness);
    std::vector<std::size_t> order;
    auto im = image(traces[i], &order);
    if (!im) return failed(property, n, g, traces[i], "a global event of the run is missing from the type's structure");
    if (!is_proving_sequence(ges.es, order))
      return failed(property, n, g, traces[i], "image of the run is not a proving sequence of the type");
    if (!gconf.count(*im)) return failed(property, n, g, traces[i], "image is not a configuration of the type");
    img[i] = std::move(*im);
  }
  for (std::size_t i = 0; i < dn.size(); ++i)
    for (auto [e, j] : dn[i].extensions) {
      Trace t = extended(traces[i], cm(nes.es.events[e]));
      auto im = image(t, nullptr);
      if (!im || *im != img[j])
        return failed(property, n, g, t, "two runs reaching the same configuration have different images");
    }
  if (std::set<EventSet>(img.begin(), img.end()).size() != dn.size())
    return failed(property, n, g, {}, "two network configurations share an image");
  if (dn.size() != dg.size())
    return failed(property, n, g, {},
                  "domain sizes differ: " + std::to_string(dn.size()) + " vs " + std::to_string(dg.size()));
  for (std::size_t i = 0; i < dn.size(); ++i)
    for (std::size_t j = 0; j < dn.size(); ++j)
      if (is_subset(dn[i].events, dn[j].events) != is_subset(img[i], img[j]))
        return failed(property, n, g, traces[i], "inclusion not preserved toward run " + to_string(traces[j]));

  // Independent check through trace-class labels on both domains.
  std::vector<EventSet> d1, d2;
  std::vector<std::string> l1, l2;
  for (std::size_t i = 0; i < dn.size(); ++i) {
    d1.push_back(dn[i].events);
    l1.push_back(to_string(normal_form(traces[i])));
  }
  for (const auto& c : dg) {
    Trace t;
    for (std::size_t e : c.witness) t.push_back(cm(ges.es.events[e]));
    d2.push_back(c.events);
    l2.push_back(to_string(normal_form(t)));
  }
  try {
    IsoResult r = poset_iso(d1, l1, d2, l2);
    if (!r.isomorphic) return failed(property, n, g, {}, "trace-labelled domains differ: " + r.mismatch);
  } catch (const Error& e) {
    return failed(property, n, g, {}, e.what());
  }
  std::string note = std::to_string(dn.size()) + " configurations on each side";
  if (!nes.exact || !ges.exact) note += " (bounded at " + std::to_string(bound) + ")";
  return passed(property, note);
}

// ---------------------------------------------------------------------------

namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(eng_() % n); }
  bool chance(double p) { return static_cast<double>(eng_() >> 11) * 0x1.0p-53 < p; }

 private:
  std::mt19937_64 eng_;
};

const std::vector<std::string> kParticipantNames{"p", "q", "r", "s", "t", "u", "v", "w"};
const std::vector<std::string> kMessages{"a", "b", "c", "d"};

// Sketches a type as a spine of exchanges that mentions every participant,
// closed by `end` or by a loop into the spine. Branches of a choice share the
// rest of the spine and may first add private exchanges between the two
// parties choosing.
class TypeSketcher {
 public:
  TypeSketcher(Rng& rng, const GenOptions& opts) : rng_(rng), opts_(opts) {
    std::size_t maxp = std::clamp<std::size_t>(opts.participants, 2, kParticipantNames.size());
    std::size_t k = 2 + rng_.below(maxp - 1);
    for (std::size_t i = 0; i < k; ++i) parts_.push_back(Participant{kParticipantNames[i]});
  }

  Global sketch() {
    NodeId root = spine(parts_, opts_.depth);
    return std::move(b_).finish(root);
  }

 private:
  using Pair = std::pair<Participant, Participant>;

  void shuffle(auto& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng_.below(i)]);
  }

  Pair oriented(const Participant& a, const Participant& b) { return rng_.chance(0.5) ? Pair{a, b} : Pair{b, a}; }

  NodeId spine(std::vector<Participant> parts, std::size_t depth) {
    shuffle(parts);
    std::vector<Pair> pairs;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) pairs.push_back(oriented(parts[i], parts[i + 1]));
    std::size_t extra = rng_.below(std::max<std::size_t>(depth, 1) + 1);
    for (std::size_t i = 0; i < extra; ++i) {
      std::size_t a = rng_.below(parts.size());
      std::size_t b = (a + 1 + rng_.below(parts.size() - 1)) % parts.size();
      pairs.push_back(Pair{parts[a], parts[b]});
    }
    shuffle(pairs);

    std::vector<NodeId> nodes;
    for (const auto& [s, r] : pairs) nodes.push_back(b_.add(GlobalNode{GlobalKind::Comm, s, r, {}}));
    NodeId last;
    if (rng_.chance(opts_.recursion)) {
      last = nodes[rng_.below(nodes.size())];
    } else {
      last = b_.add({});
    }
    for (std::size_t i = nodes.size(); i-- > 0;) {
      NodeId tail = i + 1 < nodes.size() ? nodes[i + 1] : last;
      fill_choice(nodes[i], tail, depth);
    }
    return nodes.front();
  }

  std::vector<std::string> labels(std::size_t max) {
    std::vector<std::string> l = kMessages;
    shuffle(l);
    l.resize(std::min(1 + rng_.below(std::max<std::size_t>(max, 1)), l.size()));
    return l;
  }

  void fill_choice(NodeId id, NodeId tail, std::size_t depth) {
    Participant s = b_[id].sender, r = b_[id].receiver;
    std::vector<std::string> ls = labels(opts_.max_branches);
    for (const auto& l : ls) {
      NodeId child = tail;
      if (ls.size() > 1 && rng_.chance(opts_.recursion / 3)) {
        child = id;
      } else if (ls.size() > 1 && depth > 0 && rng_.chance(0.15)) {
        child = spine({s, r}, depth - 1);
        redirect_end(child, tail);
      } else if (ls.size() > 1 && rng_.chance(0.4)) {
        child = private_exchange(s, r, tail);
      }
      b_[id].branches.emplace(Message{l}, child);
    }
  }

  NodeId private_exchange(const Participant& a, const Participant& b, NodeId tail) {
    auto [s, r] = oriented(a, b);
    NodeId n = b_.add(GlobalNode{GlobalKind::Comm, s, r, {}});
    for (const auto& l : labels(2)) b_[n].branches.emplace(Message{l}, tail);
    return n;
  }

  // Nodes of a sub-spine that would end the protocol continue with `tail`.
  void redirect_end(NodeId from, NodeId tail) {
    std::vector<NodeId> stack{from};
    std::set<NodeId> seen{from};
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      for (auto& [m, c] : b_[n].branches) {
        if (b_[c].kind == GlobalKind::End) {
          c = tail;
        } else if (c != tail && seen.insert(c).second) {
          stack.push_back(c);
        }
      }
    }
  }

  Rng& rng_;
  const GenOptions& opts_;
  std::vector<Participant> parts_;
  GraphBuilder<GlobalNode> b_;
};

Global generate(Rng& rng, const GenOptions& opts) {
  for (std::size_t attempt = 0; attempt < opts.budget; ++attempt) {
    Global g = canonical(TypeSketcher(rng, opts).sketch());
    if (participants_global(g).size() >= 2 && well_formed(g)) return g;
  }
  throw Error(ErrorCode::GenerationExhausted,
              "no well-formed global type after " + std::to_string(opts.budget) + " candidates");
}

Process widen_inputs(const Process& p, Rng& rng) {
  std::vector<ProcNode> nodes(*p.arena());
  NodeId zero = static_cast<NodeId>(nodes.size());
  nodes.push_back(ProcNode{});
  bool changed = false;
  for (NodeId n : p.reachable())
    if (nodes[n].kind == ProcKind::Input && rng.chance(0.3)) {
      nodes[n].branches.emplace(Message{"z"}, zero);
      changed = true;
    }
  if (!changed) return p;
  return Process(std::make_shared<const std::vector<ProcNode>>(std::move(nodes)), p.root());
}

GenOptions sized(std::size_t size) {
  GenOptions o;
  o.participants = std::max<std::size_t>(size, 2);
  return o;
}

}  // namespace

Global gen_well_formed(std::uint64_t seed, const GenOptions& opts) {
  Rng rng(seed);
  return generate(rng, opts);
}

Global gen_well_formed(std::uint64_t seed, std::size_t size) { return gen_well_formed(seed, sized(size)); }

Network projected_network(const Global& g) {
  std::map<Participant, Process> bindings;
  for (const auto& p : participants_global(g)) bindings.emplace(p, project(g, p));
  return Network(bindings);
}

std::pair<Network, Global> gen_typed_pair(std::uint64_t seed, const GenOptions& opts) {
  Rng rng(seed);
  Global g = generate(rng, opts);
  Network n = projected_network(g);
  if (opts.widen_inputs) {
    std::map<Participant, Process> bindings;
    for (const auto& [p, proc] : n.bindings()) bindings.emplace(p, widen_inputs(proc, rng));
    n = Network(bindings);
  }
  return {n, g};
}

std::pair<Network, Global> gen_typed_pair(std::uint64_t seed, std::size_t size) {
  return gen_typed_pair(seed, sized(size));
}

std::size_t term_size(const Global& g) {
  std::size_t total = 0;
  for (NodeId n : g.reachable()) total += 1 + g.node(n).branches.size();
  return total;
}

Global shrink_global(const Global& g, const std::function<bool(const Global&)>& still_fails) {
  Global best = canonical(g);
  bool improved = true;
  while (improved) {
    improved = false;
    std::vector<Global> candidates;
    for (NodeId n : best.reachable()) {
      const GlobalNode& node = best.node(n);
      if (node.kind != GlobalKind::Comm) continue;
      auto variant = [&](auto&& edit) {
        std::vector<GlobalNode> nodes(*best.arena());
        edit(nodes);
        candidates.push_back(canonical(Global(std::make_shared<const std::vector<GlobalNode>>(std::move(nodes)), best.root())));
      };
      variant([&](std::vector<GlobalNode>& nodes) { nodes[n] = GlobalNode{}; });
      for (const auto& [m, c] : node.branches)
        if (c != n) variant([&, c = c](std::vector<GlobalNode>& nodes) { nodes[n] = nodes[c]; });
      if (node.branches.size() > 1)
        for (const auto& [m, c] : node.branches)
          variant([&, m = m](std::vector<GlobalNode>& nodes) { nodes[n].branches.erase(m); });
    }
    for (const Global& cand : candidates) {
      if (term_size(cand) >= term_size(best) || !well_formed(cand)) continue;
      if (still_fails(cand)) {
        best = cand;
        improved = true;
        break;
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Campaign properties.

namespace {

struct PairContext {
  const Network& n;
  const Global& g;
  const CampaignOptions& o;
  NetworkES nes;
  GlobalES ges;
  std::vector<Configuration> ncfg;
  std::vector<Configuration> gcfg;
  std::map<NEvent, std::size_t> nidx;
  std::map<GEvent, std::size_t> gidx;

  PairContext(const Network& n_, const Global& g_, const CampaignOptions& o_)
      : n(n_), g(g_), o(o_), nes(esn(n_, o_.bound)), ges(esg(g_, o_.bound)) {
    ncfg = enumerate_configurations(nes.es, o.bound);
    gcfg = enumerate_configurations(ges.es, o.bound);
    for (std::size_t i = 0; i < nes.es.events.size(); ++i) nidx[nes.es.events[i]] = i;
    for (std::size_t i = 0; i < ges.es.events.size(); ++i) gidx[ges.es.events[i]] = i;
  }
};

// A failure description, empty on success.
struct Finding {
  std::string detail;
  Trace trace;
  explicit operator bool() const { return !detail.empty(); }
};

using PropertyFn = std::function<Finding(PairContext&)>;

template <class Step, class Enabled, class Term>
void for_each_run(const Term& start, std::size_t max_len, Enabled enabled, Step step,
                  const std::function<bool(const Trace&)>& visit) {
  Trace path;
  bool stop = false;
  std::function<void(const Term&)> go = [&](const Term& cur) {
    if (stop || path.size() >= max_len) return;
    for (const auto& alpha : enabled(cur)) {
      path.push_back(alpha);
      if (!visit(path)) {
        stop = true;
        return;
      }
      go(step(cur, alpha));
      path.pop_back();
      if (stop) return;
    }
  };
  go(start);
}

Finding from_report(const VerifyReport& r) {
  if (r.passed()) return {};
  Finding f;
  f.detail = r.counterexample ? r.counterexample->detail : r.note;
  if (f.detail.empty()) f.detail = to_string(r.verdict);
  if (r.counterexample) f.trace = r.counterexample->trace;
  return f;
}

Finding prop_nec_proving(PairContext& c) {
  Finding f;
  for_each_run(c.n, c.o.bound, net_enabled, net_step, [&](const Trace& t) {
    std::vector<std::size_t> seq;
    for (const NEvent& v : nec(t)) {
      auto it = c.nidx.find(v);
      if (it == c.nidx.end()) {
        f = {"n-event " + to_string(v) + " of the run is not an event of the network", t};
        return false;
      }
      seq.push_back(it->second);
    }
    if (!is_proving_sequence(c.nes.es, seq)) {
      f = {"nec of the run is not a proving sequence", t};
      return false;
    }
    return true;
  });
  return f;
}

Finding prop_gec_proving(PairContext& c) {
  Finding f;
  for_each_run(c.g, c.o.bound, global_enabled, global_step, [&](const Trace& t) {
    std::vector<std::size_t> seq;
    for (const GEvent& v : gec(t)) {
      auto it = c.gidx.find(v);
      if (it == c.gidx.end()) {
        f = {"g-event " + to_string(v) + " of the run is not an event of the type", t};
        return false;
      }
      seq.push_back(it->second);
    }
    if (!is_proving_sequence(c.ges.es, seq)) {
      f = {"gec of the run is not a proving sequence", t};
      return false;
    }
    return true;
  });
  return f;
}

Finding prop_nec_converse(PairContext& c) {
  for (const auto& seq : enumerate_proving_sequences(c.nes.es, c.o.bound)) {
    Trace t;
    std::vector<NEvent> evs;
    for (std::size_t e : seq) {
      t.push_back(cm(c.nes.es.events[e]));
      evs.push_back(c.nes.es.events[e]);
    }
    try {
      run(c.n, t);
    } catch (const Error&) {
      return {"communications of a proving sequence are not a run of the network", t};
    }
    if (nec(t) != evs) return {"nec does not recover the proving sequence", t};
  }
  return {};
}

Finding prop_gec_converse(PairContext& c) {
  for (const auto& seq : enumerate_proving_sequences(c.ges.es, c.o.bound)) {
    Trace t;
    std::vector<GEvent> evs;
    for (std::size_t e : seq) {
      t.push_back(cm(c.ges.es.events[e]));
      evs.push_back(c.ges.es.events[e]);
    }
    try {
      run(c.g, t);
    } catch (const Error&) {
      return {"communications of a proving sequence are not a run of the type", t};
    }
    if (gec(t) != evs) return {"gec does not recover the proving sequence", t};
  }
  return {};
}

Finding prop_es_axioms(PairContext& c) {
  if (auto v = flow_axiom_violation(c.nes.es); !v.empty()) return {"network structure: " + v, {}};
  if (auto v = prime_axiom_violation(c.ges.es); !v.empty()) return {"type structure: " + v, {}};
  for (const auto& [p, proc] : c.n.bindings())
    if (auto v = prime_axiom_violation(esp(proc, c.o.bound).es); !v.empty())
      return {"process structure of " + p.name + ": " + v, {}};
  return {};
}

Finding prop_conflict_intersection(PairContext& c) {
  NEventSet de = de_events(c.n, c.o.bound);
  std::map<LocatedEvent, std::vector<const NEvent*>> holders;
  for (const NEvent& v : de.events) {
    holders[v.first].push_back(&v);
    holders[v.second].push_back(&v);
  }
  for (const auto& [le, hs] : holders)
    for (std::size_t i = 0; i < hs.size(); ++i)
      for (std::size_t j = i + 1; j < hs.size(); ++j)
        if (!n_conflict(*hs[i], *hs[j]))
          return {"intersecting events " + to_string(*hs[i]) + " and " + to_string(*hs[j]) + " do not conflict", {}};
  return {};
}

Finding prop_causal_set_bound(PairContext& c) {
  std::set<NEvent> ne(c.nes.es.events.begin(), c.nes.es.events.end());
  for (const NEvent& v : ne) {
    std::size_t limit = v.first.event.size() + v.second.event.size() - 2;
    for (const auto& e : causal_sets(v, ne))
      if (e.size() > limit) return {"causal set of " + to_string(v) + " exceeds the length bound", {}};
  }
  return {};
}

Finding prop_causal_set_unique(PairContext& c) {
  std::set<NEvent> ne(c.nes.es.events.begin(), c.nes.es.events.end());
  std::map<std::size_t, std::vector<EventSet>> causes;
  for (const auto& cfg : c.ncfg)
    for (std::size_t e : cfg.events) {
      if (!causes.count(e)) {
        auto& list = causes[e];
        for (const auto& s : causal_sets(c.nes.es.events[e], ne)) {
          EventSet idx;
          for (const NEvent& v : s) idx.push_back(c.nidx.at(v));
          std::sort(idx.begin(), idx.end());
          list.push_back(std::move(idx));
        }
      }
      std::size_t inside = 0;
      for (const auto& s : causes[e])
        if (is_subset(s, cfg.events)) ++inside;
      if (inside != 1) {
        Trace t;
        for (std::size_t w : cfg.witness) t.push_back(cm(c.nes.es.events[w]));
        return {std::to_string(inside) + " causal sets of " + to_string(c.nes.es.events[e]) +
                    " lie inside a configuration",
                t};
      }
    }
  return {};
}

Finding prop_projection(PairContext& c) {
  for (const auto& [p, proc] : c.n.bindings()) {
    ProcessES pes = esp(proc, c.o.bound);
    std::map<PEvent, std::size_t> pidx;
    for (std::size_t i = 0; i < pes.es.events.size(); ++i) pidx[pes.es.events[i]] = i;
    std::vector<std::optional<std::size_t>> f;
    for (const NEvent& v : c.nes.es.events) {
      const LocatedEvent* comp = v.component(p);
      f.push_back(comp ? std::optional<std::size_t>(pidx.at(comp->event)) : std::nullopt);
    }
    if (!downward_surjective(f, pes.es)) return {"projection onto " + p.name + " is not downward surjective", {}};
    for (const auto& cfg : c.ncfg) {
      EventSet proj;
      for (std::size_t e : cfg.events)
        if (f[e]) proj.push_back(*f[e]);
      std::sort(proj.begin(), proj.end());
      proj.erase(std::unique(proj.begin(), proj.end()), proj.end());
      if (!is_configuration(pes.es, proj)) {
        Trace t;
        for (std::size_t w : cfg.witness) t.push_back(cm(c.nes.es.events[w]));
        return {"projection onto " + p.name + " of a configuration is not a configuration", t};
      }
    }
  }
  return {};
}

template <class E>
std::vector<Communication> sample_communications(const std::vector<E>& events, std::size_t limit) {
  std::set<Communication> out;
  for (const auto& e : events) {
    out.insert(cm(e));
    if (out.size() >= limit) break;
  }
  return {out.begin(), out.end()};
}

Finding prop_net_retrieval_residual(PairContext& c) {
  const auto& evs = c.nes.es.events;
  std::vector<NEvent> sample(evs.begin(), evs.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(evs.size(), 30)));
  for (const Communication& a : sample_communications(evs, 8)) {
    for (const NEvent& v : sample) {
      auto res = n_residual(v, a);
      if (res && n_retrieval(*res, a) != v) return {"retrieval does not undo residual on " + to_string(v), {a}};
      if (n_residual(n_retrieval(v, a), a) != v) return {"residual does not undo retrieval on " + to_string(v), {a}};
      for (const NEvent& w : sample) {
        auto rw = n_residual(w, a);
        NEvent pv = n_retrieval(v, a), pw = n_retrieval(w, a);
        if (n_flow(v, w) && !n_flow(pv, pw)) return {"retrieval breaks flow", {a}};
        if (n_flow(v, w) && res && rw && !n_flow(*res, *rw)) return {"residual breaks flow", {a}};
        if (n_conflict(v, w) != n_conflict(pv, pw)) return {"retrieval changes conflict", {a}};
        if (n_conflict(v, w) && res && rw && !n_conflict(*res, *rw)) return {"residual breaks conflict", {a}};
      }
    }
  }
  return {};
}

bool g_less(const GEvent& a, const GEvent& b) { return a != b && g_leq(a, b); }

Finding prop_global_retrieval_residual(PairContext& c) {
  const auto& evs = c.ges.es.events;
  std::vector<GEvent> sample(evs.begin(), evs.begin() + static_cast<std::ptrdiff_t>(std::min<std::size_t>(evs.size(), 30)));
  std::vector<Communication> comms = sample_communications(evs, 8);
  for (const Communication& a : comms) {
    for (const GEvent& x : sample) {
      auto res = g_residual(x, a);
      GEvent pre = g_retrieval(a, x);
      if (res && g_retrieval(a, *res) != x) return {"retrieval does not undo residual on " + to_string(x), {a}};
      if (g_residual(pre, a) != x) return {"residual does not undo retrieval on " + to_string(x), {a}};
      for (const GEvent& y : sample) {
        auto ry = g_residual(y, a);
        GEvent py = g_retrieval(a, y);
        if (g_less(x, y) && !g_less(pre, py)) return {"retrieval breaks causality", {a}};
        if (g_less(x, y) && res && ry && !g_less(*res, *ry)) return {"residual breaks causality", {a}};
        if (g_conflict(x, y) && !g_conflict(pre, py)) return {"retrieval breaks conflict", {a}};
        if (g_less(x, py) && x != GEvent{{a}}) {
          if (!res || !g_less(*res, y)) return {"causes of a retrieved event do not move past it", {a}};
        }
      }
      for (const Communication& b : comms) {
        if (shares_participant(a, b)) continue;
        if (g_retrieval(a, g_retrieval(b, x)) != g_retrieval(b, g_retrieval(a, x)))
          return {"retrievals of independent communications do not commute", {a, b}};
        auto lhs = g_residual(g_retrieval(a, x), b);
        auto rb = g_residual(x, b);
        if (lhs && rb && g_retrieval(a, *rb) != *lhs)
          return {"retrieval and residual of independent communications do not commute", {a, b}};
      }
    }
  }
  return {};
}

// Whether the events of x can be listed as a proving sequence, by trying all
// orders (with prefix pruning).
bool has_enumeration(const EsRelations& s, const EventSet& x) {
  std::vector<std::size_t> seq;
  std::vector<char> used(x.size(), 0);
  std::function<bool()> go = [&]() {
    if (seq.size() == x.size()) return true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (used[i]) continue;
      seq.push_back(x[i]);
      used[i] = 1;
      bool ok = is_proving_sequence(s, seq) && go();
      used[i] = 0;
      seq.pop_back();
      if (ok) return true;
    }
    return false;
  };
  return go();
}

Finding oracle_for(const EsRelations& s, std::size_t max_events, const char* which) {
  if (s.size() > max_events) return {};
  std::vector<EventSet> enumerated;
  for (const auto& c : enumerate_configurations(s, s.size())) enumerated.push_back(c.events);
  std::vector<EventSet> filtered = configurations_by_subset_filter(s, s.size());
  if (enumerated != filtered) return {std::string(which) + ": enumerated and filtered configurations differ", {}};
  EventSet cur;
  std::function<Finding(std::size_t)> subsets = [&](std::size_t from) -> Finding {
    if (is_configuration(s, cur) != has_enumeration(s, cur))
      return {std::string(which) + ": configuration test disagrees with proving-sequence search", {}};
    if (cur.size() >= 6) return {};
    for (std::size_t e = from; e < s.size(); ++e) {
      cur.push_back(e);
      Finding f = subsets(e + 1);
      cur.pop_back();
      if (f) return f;
    }
    return {};
  };
  return subsets(0);
}

Finding prop_config_oracle(PairContext& c) {
  if (Finding f = oracle_for(c.nes.es, c.o.oracle_events, "network")) return f;
  return oracle_for(c.ges.es, c.o.oracle_events, "type");
}

Finding prop_separation(PairContext& c) {
  for (const auto* dom : {&c.ncfg, &c.gcfg}) {
    const EsRelations& s = dom == &c.ncfg ? static_cast<const EsRelations&>(c.nes.es) : c.ges.es;
    std::size_t limit = std::min<std::size_t>(dom->size(), 300);
    for (std::size_t i = 0; i < limit; ++i)
      for (std::size_t j = 0; j < limit; ++j) {
        const auto& x = (*dom)[i].events;
        const auto& y = (*dom)[j].events;
        if (x.size() < y.size() && is_subset(x, y) && !separating_event(s, x, y))
          return {"no separating event between nested configurations", {}};
      }
  }
  return {};
}

Finding prop_gleq_oracle(PairContext& c) {
  const auto& evs = c.ges.es.events;
  std::size_t limit = std::min<std::size_t>(evs.size(), 40);
  for (std::size_t i = 0; i < limit; ++i)
    for (std::size_t j = 0; j < limit; ++j)
      if (g_leq(evs[i], evs[j]) != g_leq_by_members(evs[i], evs[j]))
        return {"causality on " + to_string(evs[i]) + " and " + to_string(evs[j]) + " disagrees with class search", {}};
  for (const auto& e : evs) {
    if (!is_pointed(e.canonical)) return {"event " + to_string(e) + " is not pointed", {}};
    for (const Trace& m : class_members(e.canonical))
      if (!is_pointed(m) || m.back() != e.canonical.back() || normal_form(m) != e.canonical)
        return {"class member of " + to_string(e) + " breaks the class invariants", {}};
  }
  return {};
}

Finding prop_lts_keys(PairContext& c) {
  std::set<Participant> parts = participants_global(c.g);
  std::set<Message> msgs;
  for (NodeId n : c.g.reachable())
    for (const auto& [m, ch] : c.g.node(n).branches) msgs.insert(m);
  std::map<Participant, Process> proj;
  for (const auto& p : parts) proj.emplace(p, project(c.g, p));
  std::set<Communication> en = global_enabled(c.g);
  for (const auto& p : parts)
    for (const auto& q : parts) {
      if (p == q) continue;
      const ProcNode& sp = proj.at(p).node();
      const ProcNode& rq = proj.at(q).node();
      for (const auto& m : msgs) {
        bool offered = sp.kind == ProcKind::Output && sp.peer == q && sp.branches.count(m) &&
                       rq.kind == ProcKind::Input && rq.peer == p && rq.branches.count(m);
        Communication a{p, m, q};
        if (offered != static_cast<bool>(en.count(a)))
          return {"enabledness of " + to_string(a) + " disagrees with the projections", {a}};
      }
    }
  for (const auto& a : en) {
    Global next = global_step(c.g, a);
    for (const auto& r : parts)
      if (r != a.sender && r != a.receiver && !process_equal(project(next, r), proj.at(r)))
        return {"projection onto " + r.name + " changes after an unrelated step", {a}};
  }
  return {};
}

Finding prop_depth_decrease(PairContext& c) {
  for (NodeId n : c.g.reachable()) {
    const GlobalNode& node = c.g.node(n);
    if (node.kind != GlobalKind::Comm) continue;
    Global here = c.g.at(n);
    for (const auto& r : participants_global(here)) {
      if (r == node.sender || r == node.receiver) continue;
      Depth d = depth(here, r);
      for (const auto& [m, ch] : node.branches) {
        Depth dc = depth(c.g.at(ch), r);
        if (d.infinite || dc.infinite || dc.value >= d.value)
          return {"depth of " + r.name + " does not decrease below " + node.sender.name + "->" + node.receiver.name, {}};
      }
    }
  }
  return {};
}

struct NamedProperty {
  PropertyCase info;
  PropertyFn fn;
};

const std::vector<NamedProperty>& registry() {
  static const std::vector<NamedProperty> props{
      {{"sr", "network steps are matched by the type and typing is preserved"},
       [](PairContext& c) { return from_report(check_subject_reduction(c.n, c.g, c.o.max_len)); }},
      {{"sf", "type steps are matched by the network and typing is preserved"},
       [](PairContext& c) { return from_report(check_session_fidelity(c.n, c.g, c.o.max_len)); }},
      {{"progress", "every live participant can eventually communicate, along all runs up to max-len"},
       [](PairContext& c) { return from_report(check_progress(c.n, c.g, std::nullopt, c.o.max_len)); }},
      {{"iso", "configuration domains of network and type are isomorphic"},
       [](PairContext& c) { return from_report(check_isomorphism(c.n, c.g, c.o.bound)); }},
      {{"nec-proving", "events of every network run form a proving sequence"}, prop_nec_proving},
      {{"nec-converse", "every network proving sequence is a run and nec recovers it"}, prop_nec_converse},
      {{"gec-proving", "events of every type run form a proving sequence"}, prop_gec_proving},
      {{"gec-converse", "every type proving sequence is a run and gec recovers it"}, prop_gec_converse},
      {{"es-axioms", "structures satisfy the prime and flow axioms"}, prop_es_axioms},
      {{"conflict-intersection", "distinct n-events sharing a located event conflict"}, prop_conflict_intersection},
      {{"causal-set-bound", "causal sets are no larger than the histories allow"}, prop_causal_set_bound},
      {{"causal-set-unique", "each event of a configuration has exactly one causal set inside it"},
       prop_causal_set_unique},
      {{"projection", "projections of configurations are configurations and are downward surjective"},
       prop_projection},
      {{"net-retrieval-residual", "retrieval and residual on n-events invert each other and keep relations"},
       prop_net_retrieval_residual},
      {{"global-retrieval-residual", "retrieval and residual on g-events satisfy their algebraic laws"},
       prop_global_retrieval_residual},
      {{"separation", "nested configurations are linked by single-event extensions"}, prop_separation},
      {{"config-oracle", "enumerated domains agree with subset filtering and permutation search"}, prop_config_oracle},
      {{"gleq-oracle", "g-event causality agrees with class search and classes are well formed"}, prop_gleq_oracle},
      {{"lts-keys", "type transitions agree with the projections' offers"}, prop_lts_keys},
      {{"depth-decrease", "depth of uninvolved participants decreases below a choice"}, prop_depth_decrease},
  };
  return props;
}

bool selected(const CampaignOptions& o, const std::string& name) {
  return o.only.empty() || std::find(o.only.begin(), o.only.end(), name) != o.only.end();
}

}  // namespace

const std::vector<PropertyCase>& campaign_properties() {
  static const std::vector<PropertyCase> cases = [] {
    std::vector<PropertyCase> out;
    for (const auto& p : registry()) out.push_back(p.info);
    return out;
  }();
  return cases;
}

std::vector<VerifyReport> check_pair(const Network& n, const Global& g, const CampaignOptions& opts,
                                     std::optional<std::uint64_t> seed) {
  std::vector<VerifyReport> out;
  PairContext ctx(n, g, opts);
  for (const auto& p : registry()) {
    if (!selected(opts, p.info.name)) continue;
    Finding f;
    try {
      f = p.fn(ctx);
    } catch (const Error& e) {
      f.detail = std::string("unexpected error: ") + e.what();
    }
    VerifyReport r = f ? failed(p.info.name, n, g, f.trace, f.detail) : passed(p.info.name);
    r.seed = seed;
    out.push_back(std::move(r));
  }
  return out;
}

CampaignResult run_campaign(const CampaignOptions& opts,
                            const std::function<void(std::uint64_t, const std::vector<VerifyReport>&)>& on_pair) {
  CampaignResult res;
  auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < opts.count; ++i) {
    std::uint64_t seed = opts.first_seed + i;
    auto [n, g] = gen_typed_pair(seed, opts.gen);
    std::vector<VerifyReport> reports = check_pair(n, g, opts, seed);
    ++res.pairs;
    res.checks += reports.size();
    for (auto& r : reports) {
      if (r.passed()) continue;
      // Shrink on the projected network of smaller types, keeping the
      // property failing.
      CampaignOptions single = opts;
      single.only = {r.property};
      auto still_fails = [&](const Global& cand) {
        try {
          auto again = check_pair(projected_network(cand), cand, single, seed);
          return !again.empty() && !again.front().passed();
        } catch (const Error&) {
          return false;
        }
      };
      if (still_fails(g)) {
        Global small = shrink_global(g, still_fails);
        auto again = check_pair(projected_network(small), small, single, seed);
        if (!again.empty() && !again.front().passed()) r = again.front();
        r.note = "shrunk from a type of size " + std::to_string(term_size(g)) + " to " + std::to_string(term_size(small));
      }
      res.failures.push_back(r);
    }
    if (on_pair) on_pair(seed, reports);
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace mpses
