#include "doctest.h"
#include "mpses/proc_es.hpp"
#include "support.hpp"

using namespace mpses;
using namespace testing_support;

namespace {
PEvent pe(const std::string& text) { return parse_actions(text); }
}  // namespace

TEST_CASE("p-events of a repeating output choice") {
  Process p = load("repeat.mpst").process("Sender");
  PEventSet s = p_events(p, 3);
  CHECK_FALSE(s.exact);
  CHECK(s.events == std::set<PEvent>{pe("q!l"), pe("q!l.q!l"), pe("q!l.q!l.q!l"), pe("q!m"), pe("q!l.q!m"),
                                     pe("q!l.q!l.q!m")});
  CHECK(p_events(inact(), 4).events.empty());
  CHECK(p_events(inact(), 4).exact);
  PEventSet single = p_events(proc("q?l3; 0"), 1);
  CHECK(single.events == std::set<PEvent>{pe("q?l3")});
  CHECK(single.exact);
  CHECK_FALSE(p_events(proc("q?l3; r!a; 0"), 1).exact);
}

TEST_CASE("prefix order and conflict") {
  CHECK(pe_conflict(pe("q!l1.r!l"), pe("q!l2")));
  CHECK(pe_leq(pe("q!l1"), pe("q!l1.r!l")));
  CHECK(pe_leq(pe("q!l1"), pe("q!l1")));
  CHECK_FALSE(pe_conflict(pe("q!l1"), pe("q!l1")));
  CHECK_FALSE(pe_conflict(pe("q!l1"), pe("q!l1.r!l")));
  CHECK_FALSE(pe_leq(pe("q!l1.r!l"), pe("q!l1")));
}

TEST_CASE("process structures are prime") {
  ProcessES s = esp(load("repeat.mpst").process("Sender"), 3);
  CHECK(s.es.events.size() == 6);
  CHECK(prime_axiom_violation(s.es).empty());
  ProcessES one = esp(proc("q?l3; 0"), 2);
  CHECK(one.es.events.size() == 1);
  CHECK_FALSE(one.es.conflict(0, 0));
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    ProcessES r = esp(random_process(seed), 4);
    CHECK(prime_axiom_violation(r.es).empty());
    for (std::size_t a = 0; a < r.es.size(); ++a)
      for (std::size_t b = 0; b < r.es.size(); ++b) {
        bool related = r.es.order(a, b) || r.es.order(b, a);
        CHECK(r.es.conflict(a, b) == !related);
        CHECK(r.es.order(a, b) == pe_leq(r.es.events[a], r.es.events[b]));
      }
  }
}

TEST_CASE("larger bounds only add events") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    Process p = random_process(seed);
    std::set<PEvent> prev;
    for (std::size_t k = 1; k <= 5; ++k) {
      PEventSet s = p_events(p, k);
      CHECK(std::includes(s.events.begin(), s.events.end(), prev.begin(), prev.end()));
      for (const auto& e : s.events) CHECK(e.size() <= k);
      prev = s.events;
    }
  }
  CHECK(p_events(proc("q!a; r?b; 0"), 2).exact);
}
