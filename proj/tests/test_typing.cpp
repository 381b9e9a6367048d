#include "doctest.h"
#include "mpses/lts.hpp"
#include "mpses/typing.hpp"
#include "mpses/verify.hpp"
#include "support.hpp"

using namespace mpses;
using namespace testing_support;

TEST_CASE("depth values of the delayed example") {
  Program prog = load("delayed.mpst");
  Global g = prog.global("Delayed"), pre = prog.global("Prefixed");
  CHECK(depth(pre, part("p")) == Depth{2, false});
  CHECK(depth(pre, part("q")) == Depth{1, false});
  CHECK(depth(pre, part("r")) == Depth{1, false});
  CHECK(depth(g, part("p")) == Depth{1, false});
  CHECK(depth(g, part("q")) == Depth{1, false});
  CHECK(depth(g, part("r")).infinite);
  CHECK(depth(end_type(), part("p")) == Depth{0, false});
  CHECK(depth(g, part("z")) == Depth{0, false});
  CHECK(to_string(Depth::inf()) == "inf");
}

TEST_CASE("boundedness") {
  Program prog = load("delayed.mpst");
  CHECK_FALSE(bounded(prog.global("Unbounded")));
  CHECK(bounded(end_type()));
  CHECK(bounded(load("repeat.mpst").global("RepeatType")));
  // A subterm where r is postponed forever makes the type unbounded.
  CHECK_FALSE(bounded(prog.global("Delayed")));
}

TEST_CASE("projection of the delayed example") {
  Global g = load("delayed.mpst").global("Delayed");
  CHECK(process_equal(project(g, part("p")), proc_in("process P = +{q!l1; 0, q!l2; P}", "P")));
  CHECK(process_equal(project(g, part("q")), proc_in("process Q = &{p?l1; r!l3; 0, p?l2; Q}", "Q")));
  CHECK(process_equal(project(g, part("r")), proc("q?l3; 0")));
  CHECK(project(g, part("z")).node().kind == ProcKind::Inact);
}

TEST_CASE("projection is undefined when third parties see different branches") {
  Global g = glob("p->q:{l1. q->r:l; end, l2. end}");
  std::string reason;
  CHECK_FALSE(try_project(g, part("r"), &reason));
  CHECK_FALSE(reason.empty());
  CHECK_THROWS_AS(project(g, part("r")), Error);
  CHECK(try_project(g, part("p")));
}

TEST_CASE("well-formedness") {
  CHECK(well_formed(end_type()));
  CHECK_FALSE(well_formed(load("delayed.mpst").global("Unbounded")));
  CHECK(well_formed(load("diamond.mpst").global("DiamondType")));
  CHECK_FALSE(well_formed(glob("p->q:{l1. q->r:l; end, l2. end}")));
  CHECK_FALSE(well_formedness_problem(load("delayed.mpst").global("Delayed")).empty());
}

TEST_CASE("process preorder") {
  CHECK(proc_leq(proc("&{p?l1; 0, p?l2; 0}"), proc("p?l1; 0")));
  CHECK_FALSE(proc_leq(proc("p?l1; 0"), proc("&{p?l1; 0, p?l2; 0}")));
  CHECK_FALSE(proc_leq(proc("q!l1; 0"), proc("+{q!l1; 0, q!l2; 0}")));
  CHECK_FALSE(proc_leq(proc("+{q!l1; 0, q!l2; 0}"), proc("q!l1; 0")));
  CHECK(proc_leq(inact(), inact()));
  CHECK_FALSE(proc_leq(proc("q!l; 0"), inact()));
  Process wide = proc_in("process P = &{p?a; P, p?b; 0, p?c; 0}", "P");
  Process narrow = proc_in("process P = &{p?a; p?a; P, p?b; 0}", "P");
  CHECK(proc_leq(wide, narrow));
  CHECK_FALSE(proc_leq(narrow, wide));
}

TEST_CASE("process preorder is reflexive and transitive") {
  std::vector<Process> ps;
  for (std::uint64_t s = 1; s <= 20; ++s) ps.push_back(random_process(s, 4));
  for (std::uint64_t s = 1; s <= 10; ++s) {
    auto [n, g] = gen_typed_pair(s);
    for (const auto& [p, proc] : n.bindings()) {
      ps.push_back(proc);
      ps.push_back(project(g, p));
    }
  }
  for (const auto& a : ps) {
    CHECK(proc_leq(a, a));
    for (const auto& b : ps)
      if (proc_leq(a, b))
        for (const auto& c : ps)
          if (proc_leq(b, c)) CHECK(proc_leq(a, c));
  }
}

TEST_CASE("typing judgement") {
  Program rep = load("repeat.mpst");
  CHECK(typecheck(rep.network("Repeat"), rep.global("RepeatType")));
  Program chain = load("chain.mpst");
  CHECK(typecheck(chain.network("Chain"), chain.global("ChainType")));
  CHECK(typecheck(Network{}, end_type()));
  Network dead = load("deadlock.mpst").network("Deadlock");
  for (const char* text : {"p->q:m; q->r:n; r->p:l; end", "r->p:l; p->q:m; q->r:n; end", "q->r:n; r->p:l; p->q:m; end"})
    CHECK_FALSE(typecheck(dead, glob(text)));
  // An extra participant must be terminated.
  Network extra = chain.network("Chain").with(part("z"), proc("p!x; 0"));
  TypecheckResult r = typecheck_report(extra, chain.global("ChainType"));
  CHECK_FALSE(r.ok);
  CHECK(r.participant == std::optional<Participant>(part("z")));
  // A missing participant of the type.
  CHECK_FALSE(typecheck(chain.network("Chain").with(part("s"), inact()), chain.global("ChainType")));
  CHECK_FALSE(typecheck(Network{}, load("delayed.mpst").global("Unbounded")));
}

TEST_CASE("depth decreases for participants outside a choice") {
  for (std::uint64_t s = 1; s <= 80; ++s) {
    Global g = gen_well_formed(s);
    for (NodeId n : g.reachable()) {
      const GlobalNode& node = g.node(n);
      if (node.kind != GlobalKind::Comm) continue;
      for (const auto& r : participants_global(g.at(n))) {
        if (r == node.sender || r == node.receiver) continue;
        for (const auto& [m, c] : node.branches) CHECK(depth(g.at(c), r).value < depth(g.at(n), r).value);
      }
    }
  }
}

TEST_CASE("well-formedness and unrelated projections survive steps") {
  for (std::uint64_t s = 1; s <= 60; ++s) {
    Global g = gen_well_formed(s);
    for (int step = 0; step < 4; ++step) {
      auto en = global_enabled(g);
      if (en.empty()) break;
      const Communication& a = *std::next(en.begin(), static_cast<std::ptrdiff_t>(s % en.size()));
      Global next = global_step(g, a);
      CHECK(well_formed(next));
      for (const auto& r : participants_global(g))
        if (r != a.sender && r != a.receiver) CHECK(proc_leq(project(g, r), project(next, r)));
      g = next;
    }
  }
}
