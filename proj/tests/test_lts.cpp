#include "doctest.h"
#include "mpses/lts.hpp"
#include "mpses/typing.hpp"
#include "mpses/verify.hpp"
#include "support.hpp"

using namespace mpses;
using namespace testing_support;

TEST_CASE("enabled network communications") {
  CHECK(net_enabled(load("deadlock.mpst").network("Deadlock")).empty());
  CHECK(net_enabled(Network{}).empty());
  Network chain = load("chain.mpst").network("Chain");
  CHECK(net_enabled(chain) == std::set<Communication>{comm("p->q:l1")});
  // Input offers wider than the output still meet on the shared label.
  CHECK(net_enabled(net("p :: q!a; 0 | q :: &{p?a; 0, p?b; 0}")) == std::set<Communication>{comm("p->q:a")});
  CHECK(net_enabled(net("p :: q!a; 0 | q :: p?b; 0")).empty());
}

TEST_CASE("network steps") {
  Network chain = load("chain.mpst").network("Chain");
  Network next = net_step(chain, comm("p->q:l1"));
  CHECK(network_equal(next, net("q :: r!l2; 0 | r :: q?l2; s!l3; 0 | s :: r?l3; 0")));
  CHECK_THROWS_AS(net_step(chain, comm("q->r:l2")), Error);
  Network rep = load("repeat.mpst").network("Repeat");
  CHECK(network_equal(net_step(rep, comm("p->q:l")), rep));
  CHECK(net_step(rep, comm("p->q:m")).empty());
}

TEST_CASE("runs fold steps and report the failing index") {
  Network chain = load("chain.mpst").network("Chain");
  CHECK(network_equal(run(chain, {}), chain));
  CHECK(run(chain, trace("p->q:l1, q->r:l2, r->s:l3")).empty());
  try {
    run(chain, trace("p->q:l1, r->s:l3"));
    FAIL("expected NotEnabled");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotEnabled);
    CHECK(e.index() == std::optional<std::size_t>(1));
  }
  try {
    run(load("deadlock.mpst").network("Deadlock"), trace("r->p:l"));
    FAIL("expected NotEnabled");
  } catch (const Error& e) {
    CHECK(e.index() == std::optional<std::size_t>(0));
  }
}

TEST_CASE("global transitions at the root and underneath independent choices") {
  Program prog = load("independent.mpst");
  Global first = prog.global("First");
  CHECK(global_enabled(first) == std::set<Communication>{comm("p->q:l1"), comm("r->s:l2")});
  CHECK(global_equal(global_step(first, comm("r->s:l2")), glob("p->q:l1; r->p:l3; end")));
  CHECK(global_enabled(glob("p->q:l; end")) == std::set<Communication>{comm("p->q:l")});
  Global diamond = load("diamond.mpst").global("DiamondType");
  CHECK(global_enabled(diamond) == std::set<Communication>{comm("p->q:l1"), comm("p->q:l2")});
  CHECK_THROWS_AS(global_step(first, comm("r->p:l3")), Error);
  Global delayed = load("delayed.mpst").global("Delayed");
  CHECK(global_equal(global_step(delayed, comm("p->q:l2")), delayed));
}

TEST_CASE("an independent exchange is enabled only when every branch offers it") {
  Global g = glob("p->q:{a. r->s:x; end, b. r->s:x; end, c. r->s:y; end}");
  CHECK(global_enabled(g) == std::set<Communication>{comm("p->q:a"), comm("p->q:b"), comm("p->q:c")});
  Global h = glob("p->q:{a. r->s:x; q->p:a; end, b. r->s:x; end}");
  CHECK(global_enabled(h).count(comm("r->s:x")));
  CHECK(global_equal(global_step(h, comm("r->s:x")), glob("p->q:{a. q->p:a; end, b. end}")));
}

TEST_CASE("steps are deterministic") {
  for (std::uint64_t s = 1; s <= 30; ++s) {
    auto [n, g] = gen_typed_pair(s);
    for (const auto& a : net_enabled(n)) CHECK(network_equal(net_step(n, a), net_step(n, a)));
    for (const auto& a : global_enabled(g)) CHECK(global_equal(global_step(g, a), global_step(g, a)));
  }
}

TEST_CASE("enabledness of well-formed types agrees with their projections") {
  for (std::uint64_t s = 1; s <= 60; ++s) {
    Global g = gen_well_formed(s);
    std::set<Communication> en = global_enabled(g);
    for (const auto& a : en) {
      Process sender = project(g, a.sender), receiver = project(g, a.receiver);
      const ProcNode& out = sender.node();
      const ProcNode& in = receiver.node();
      CHECK(out.kind == ProcKind::Output);
      CHECK(out.peer == a.receiver);
      CHECK(out.branches.count(a.message));
      CHECK(in.kind == ProcKind::Input);
      CHECK(in.branches.count(a.message));
    }
    // Typed networks with pending participants can always move.
    Network n = projected_network(g);
    if (!n.empty()) CHECK_FALSE(net_enabled(n).empty());
  }
}
