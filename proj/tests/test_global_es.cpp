#include "doctest.h"
#include "mpses/error.hpp"
#include "mpses/global_es.hpp"
#include "mpses/lts.hpp"
#include "mpses/verify.hpp"
#include "support.hpp"

using namespace mpses;
using namespace testing_support;

namespace {
GEvent gev(const std::string& text) { return GEvent::of(trace(text)); }
}  // namespace

TEST_CASE("traces of a type tree") {
  TraceSet first = g_traces(load("independent.mpst").global("First"), 3);
  CHECK(first.exact);
  CHECK(first.traces == std::set<Trace>{trace("p->q:l1"), trace("p->q:l1, r->s:l2"), trace("p->q:l1, r->s:l2, r->p:l3")});
  CHECK(g_traces(end_type(), 3).traces.empty());
  TraceSet delayed = g_traces(load("delayed.mpst").global("Delayed"), 2);
  CHECK_FALSE(delayed.exact);
  CHECK(delayed.traces == std::set<Trace>{trace("p->q:l1"), trace("p->q:l2"), trace("p->q:l1, q->r:l3"),
                                          trace("p->q:l2, p->q:l1"), trace("p->q:l2, p->q:l2")});
}

TEST_CASE("permutation equivalence") {
  CHECK(trace_equiv(trace("p->q:l1, r->s:l2"), trace("r->s:l2, p->q:l1")));
  CHECK_FALSE(trace_equiv(trace("p->q:a, q->r:b"), trace("q->r:b, p->q:a")));
  CHECK(trace_equiv(trace("p->q:a"), trace("p->q:a")));
  CHECK(class_members(trace("p->q:l1, r->s:l2")).size() == 2);
  CHECK(normal_form(trace("r->s:l2, p->q:l1")) == trace("p->q:l1, r->s:l2"));
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto traces = g_traces(gen_well_formed(seed), 4).traces;
    for (const auto& t : traces) {
      auto members = class_members(t);
      for (const auto& m : members) CHECK(normal_form(m) == normal_form(t));
      CHECK(*members.begin() == normal_form(t));
    }
  }
}

TEST_CASE("pointed traces") {
  CHECK(is_pointed(trace("p->q:l1")));
  CHECK(is_pointed(trace("p->q:l1, r->s:l2, r->p:l3")));
  CHECK_FALSE(is_pointed(trace("p->q:l1, r->s:l2")));
}

TEST_CASE("retrieval, event of a trace, residual") {
  CHECK(g_retrieval(comm("p->q:l1"), gev("r->s:l2")) == gev("r->s:l2"));
  CHECK(g_retrieval(comm("p->q:l1"), gev("q->r:l2")) == gev("p->q:l1, q->r:l2"));
  CHECK(ev(trace("p->q:l1, r->s:l2")) == gev("r->s:l2"));
  GEvent join = ev(trace("p->q:l1, r->s:l2, r->p:l3"));
  CHECK(class_members(join.canonical).size() == 2);
  CHECK(ev(trace("p->q:a")) == gev("p->q:a"));
  CHECK(ev(trace("p->q:l1, q->r:l2, r->s:l3")) == gev("p->q:l1, q->r:l2, r->s:l3"));
  CHECK(cm(join) == comm("r->p:l3"));
  CHECK(g_residual(gev("p->q:l1, q->r:l2"), comm("p->q:l1")) == std::optional<GEvent>(gev("q->r:l2")));
  CHECK_FALSE(g_residual(gev("p->q:a"), comm("p->q:a")));
  CHECK(g_residual(gev("r->s:l2"), comm("p->q:a")) == std::optional<GEvent>(gev("r->s:l2")));
  CHECK(g_retrieval(trace("p->q:l1, r->s:l2"), gev("r->p:l3")) == join);
}

TEST_CASE("projection of a trace") {
  CHECK(proj_trace(trace("p->q:l, r->p:l1, q->p:m"), part("p")) == parse_actions("q!l.r?l1.q?m"));
  CHECK(proj_trace(trace("p->q:l"), part("r")).empty());
  CHECK(proj_trace(trace("p->q:l"), part("q")) == parse_actions("p?l"));
}

TEST_CASE("causality and conflict of g-events") {
  GEvent g1 = gev("p->q:l1"), g2 = gev("r->s:l2"), g3 = gev("p->q:l1, r->s:l2, r->p:l3");
  CHECK(g_leq(g1, g3));
  CHECK(g_leq(g2, g3));
  CHECK(g_leq(g3, g3));
  CHECK_FALSE(g_leq(g3, g1));
  CHECK_FALSE(g_leq(g1, g2));
  CHECK(g_conflict(gev("p->q:l, r->p:l1, q->p:m"), gev("p->q:l, r->p:l2")));
  CHECK_FALSE(g_conflict(g1, g3));
  CHECK_FALSE(g_conflict(g1, g2));
}

TEST_CASE("peeling order agrees with the member search") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    GlobalES s = esg(gen_well_formed(seed), 4);
    if (s.es.size() > 40) continue;
    for (const auto& a : s.es.events)
      for (const auto& b : s.es.events) CHECK(g_leq(a, b) == g_leq_by_members(a, b));
  }
}

TEST_CASE("structure of the independent exchanges") {
  Program prog = load("independent.mpst");
  GlobalES first = esg(prog.global("First"), 3), second = esg(prog.global("Second"), 3);
  CHECK(first.exact);
  CHECK(first.es.events == second.es.events);
  CHECK(first.es.events.size() == 3);
  CHECK(prime_axiom_violation(first.es).empty());
  CHECK(enumerate_configurations(first.es, 3).size() == 5);
  CHECK(enumerate_proving_sequences(first.es, 3).size() == 6);
  CHECK_THROWS_AS(esg(load("delayed.mpst").global("Unbounded"), 3), Error);
  GlobalES rep = esg(load("repeat.mpst").global("RepeatType"), 3);
  CHECK_FALSE(rep.exact);
  CHECK(rep.es.events.size() == 6);
}

TEST_CASE("g-events of a trace and their network counterparts") {
  auto events = gec(trace("p->q:l1, r->s:l2, r->p:l3"));
  REQUIRE(events.size() == 3);
  CHECK(events[0] == gev("p->q:l1"));
  CHECK(events[1] == gev("r->s:l2"));
  CHECK(events[2] == gev("p->q:l1, r->s:l2, r->p:l3"));
  NEvent n = g_to_n(events[2]);
  CHECK(n == NEvent::make(LocatedEvent{part("p"), parse_actions("q!l1.r?l3")},
                          LocatedEvent{part("r"), parse_actions("s!l2.p!l3")}));
}

TEST_CASE("g-events of runs carry the last communication and are pointed") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    Global g = gen_well_formed(seed);
    GlobalES s = esg(g, 4);
    for (const auto& e : s.es.events) CHECK(is_pointed(e.canonical));
    Trace sigma;
    Global cur = g;
    for (int i = 0; i < 5; ++i) {
      auto en = global_enabled(cur);
      if (en.empty()) break;
      sigma.push_back(*std::next(en.begin(), static_cast<long>((seed * 3 + i) % en.size())));
      cur = global_step(cur, sigma.back());
      CHECK(cm(ev(sigma)) == sigma.back());
      auto gs = gec(sigma);
      for (std::size_t a = 0; a < gs.size(); ++a)
        for (std::size_t b = 0; b < a; ++b) CHECK_FALSE(g_conflict(gs[a], gs[b]));
    }
  }
}
