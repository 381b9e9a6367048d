#include "doctest.h"
#include "mpses/parser.hpp"
#include "mpses/syntax.hpp"
#include "mpses/verify.hpp"
#include "support.hpp"

using namespace mpses;
using namespace testing_support;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Parse;
}

}  // namespace

TEST_CASE("values print in the surface notation") {
  CHECK(to_string(output(part("q"), Message{"l"})) == "q!l");
  CHECK(to_string(input(part("p"), Message{"l"})) == "p?l");
  CHECK(to_string(comm("p->q:l")) == "p->q:l");
  CHECK(to_string(trace("p->q:a, q->r:b")) == "p->q:a,q->r:b");
  CHECK(to_string(Trace{}).empty());
}

TEST_CASE("trace participants follow the inductive definition") {
  CHECK(trace_participants({}).empty());
  CHECK(trace_participants(trace("p->q:l")) == std::set<Participant>{part("p"), part("q")});
  CHECK(trace_participants(trace("p->q:l1, r->s:l2")).size() == 4);
}

TEST_CASE("a recursive output choice builds") {
  Process p = proc_in("process P = +{q!l; P, q!m; 0}", "P");
  CHECK_FALSE(recursion_free(p));
  CHECK(p.node().kind == ProcKind::Output);
  CHECK(p.node().branches.size() == 2);
  CHECK(process_equal(p.child(Message{"l"}), p));
}

TEST_CASE("equation errors are classified") {
  CHECK(code_of([] { parse_program("process P = P").process("P"); }) == ErrorCode::NonContractive);
  CHECK(code_of([] { parse_program("process P = Q\nprocess Q = P").process("P"); }) == ErrorCode::NonContractive);
  CHECK(code_of([] { parse_program("process P = +{q!l; 0, q!l; 0}").process("P"); }) ==
        ErrorCode::DuplicateBranchLabel);
  CHECK(code_of([] { parse_program("process P = q!l; R").process("P"); }) == ErrorCode::UndefinedName);
  CHECK(code_of([] { parse_program("global G = p->p:l; end").global("G"); }) == ErrorCode::SelfCommunication);
  CHECK(code_of([] { parse_program("process P = +{q!l; 0, r!m; 0}").process("P"); }) ==
        ErrorCode::MixedChoicePeers);
  CHECK(code_of([] { parse_program("process P = 0\nprocess P = 0"); }) == ErrorCode::DuplicateDefinition);
  CHECK(code_of([] { parse_network("p :: 0 | p :: q!l; 0"); }) == ErrorCode::DuplicateParticipant);
  CHECK(code_of([] { parse_program("process P = +{q!l; 0"); }) == ErrorCode::Parse);
  CHECK(code_of([] { parse_global("p->q:{}"); }) == ErrorCode::Parse);
}

TEST_CASE("empty choices are rejected by the constructors") {
  CHECK(code_of([] { out_choice(part("q"), {}); }) == ErrorCode::EmptyChoice);
  CHECK(code_of([] { comm(part("p"), part("q"), {}); }) == ErrorCode::EmptyChoice);
  CHECK(code_of([] { comm(part("p"), part("p"), {{Message{"l"}, end_type()}}); }) == ErrorCode::SelfCommunication);
}

TEST_CASE("global types with recursion and end") {
  Global g = glob_in("global G = p->q:{l1. q->r:l3; end, l2. G}", "G");
  CHECK(participants_global(g) == std::set<Participant>{part("p"), part("q"), part("r")});
  CHECK(participants_global(glob("end")).empty());
  CHECK(participants_global(glob("p->q:l; end")) == std::set<Participant>{part("p"), part("q")});
}

TEST_CASE("coinductive equality") {
  Process p = proc_in("process P = +{q!l; P, q!m; 0}", "P");
  CHECK(process_equal(p, unfold(p)));
  CHECK(process_equal(unfold(p, 3), p));
  CHECK(process_equal(inact(), inact()));
  CHECK_FALSE(process_equal(proc("q!l1; 0"), proc("q!l2; 0")));
  // Two different equation systems for the same infinite tree.
  Process a = proc_in("process A = q!l; q!l; A", "A");
  Process b = proc_in("process B = q!l; B", "B");
  CHECK(process_equal(a, b));
  CHECK(canonical_key(a) == canonical_key(b));
  CHECK_FALSE(process_equal(proc_in("process A = q!l; q!m; A", "A"), b));
}

TEST_CASE("process equality is an equivalence on arbitrary terms") {
  std::vector<Process> terms;
  for (std::uint64_t s = 1; s <= 25; ++s) terms.push_back(random_process(s));
  for (std::size_t i = 0; i < terms.size(); ++i) {
    CHECK(process_equal(terms[i], terms[i]));
    for (int k = 1; k <= 3; ++k) CHECK(process_equal(terms[i], unfold(terms[i], k)));
    for (std::size_t j = 0; j < terms.size(); ++j) {
      bool ij = process_equal(terms[i], terms[j]);
      CHECK(ij == process_equal(terms[j], terms[i]));
      CHECK(ij == (canonical_key(terms[i]) == canonical_key(terms[j])));
      if (!ij) continue;
      for (std::size_t k = 0; k < terms.size(); ++k)
        if (process_equal(terms[j], terms[k])) CHECK(process_equal(terms[i], terms[k]));
    }
  }
}

TEST_CASE("printed definitions re-parse to equal terms") {
  for (std::uint64_t s = 1; s <= 40; ++s) {
    Process p = random_process(s);
    Program prog = parse_program(format_definitions("P", p));
    CHECK(process_equal(prog.process("P"), p));
    Global g = gen_well_formed(s);
    Program gp = parse_program(format_definitions("G", g));
    CHECK(global_equal(gp.global("G"), g));
  }
}

TEST_CASE("inline printing uses the singleton sugar") {
  CHECK(to_string(proc("q!l; 0")) == "q!l; 0");
  CHECK(to_string(proc("&{p?a; 0, p?b; r!c; 0}")) == "&{p?a; 0, p?b; r!c; 0}");
  CHECK(to_string(glob("p->q:{a. end, b. q->r:c; end}")) == "p->q:{a. end, b. q->r:c; end}");
  CHECK(to_string(glob_in("global G = p->q:l; G", "G")) == "X where X = p->q:l; X");
}

TEST_CASE("networks drop terminated bindings") {
  Network n = net("p :: q!l; 0 | q :: p?l; 0 | r :: 0");
  CHECK(n.participants() == std::set<Participant>{part("p"), part("q")});
  CHECK(n.at(part("r")).node().kind == ProcKind::Inact);
  CHECK(n.at(part("z")).node().kind == ProcKind::Inact);
  CHECK(net("0").empty());
  CHECK(network_equal(n.with(part("q"), inact()), net("p :: q!l; 0")));
  CHECK(to_string(net("0")) == "0");
}

TEST_CASE("comments and optional separators are accepted") {
  Program prog = parse_program(
      "// leading comment\n"
      "process P = q!l  // trailing continuation defaults to 0\n"
      "global G = p->q:l\n"
      "network N = p :: P | q :: p?l\n");
  CHECK(process_equal(prog.process("P"), proc("q!l; 0")));
  CHECK(global_equal(prog.global("G"), glob("p->q:l; end")));
  CHECK(prog.network("N").participants().size() == 2);
}

TEST_CASE("action sequences parse") {
  auto a = parse_actions("q!l1.r?l");
  REQUIRE(a.size() == 2);
  CHECK(a[0] == output(part("q"), Message{"l1"}));
  CHECK(a[1] == input(part("r"), Message{"l"}));
}
