#include <array>
#include <cstdio>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

struct Outcome {
  int status = -1;
  std::string out;
};

Outcome cli(const std::string& args) {
  std::string cmd = std::string(MPSES_CLI) + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) o.out.append(buf.data(), n);
  int raw = pclose(pipe);
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return o;
}

std::string data(const std::string& file) { return std::string(MPSES_DATA_DIR) + "/" + file; }

std::string scratch(const std::string& name, const std::string& text) {
  std::string path = std::string(MPSES_SCRATCH_DIR) + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_CASE("check reports typing verdicts") {
  CHECK(cli("check " + data("chain.mpst")).status == 0);
  CHECK(cli("check " + data("repeat.mpst") + " --network Repeat --global RepeatType").status == 0);
  std::string bad = scratch("untyped.mpst",
                            "network N = p :: q!a; 0 | q :: p?b; 0\n"
                            "global G = p->q:a; end\n");
  Outcome o = cli("check " + bad);
  CHECK(o.status == 1);
  CHECK(o.out.find("not typed") != std::string::npos);
  CHECK(cli("check " + data("delayed.mpst") + " --global Unbounded").status == 1);
}

TEST_CASE("exit codes for malformed input and usage") {
  CHECK(cli("check " + scratch("broken.mpst", "global G = p->q\n")).status == 2);
  CHECK(cli("check " + scratch("self.mpst", "global G = p->p:a; end\n")).status == 2);
  CHECK(cli("").status == 3);
  CHECK(cli("frobnicate").status == 3);
  CHECK(cli("events /nonexistent/file.mpst").status == 3);
  CHECK(cli("events " + data("chain.mpst") + " --network Nope").status == 2);
  CHECK(cli("verify " + data("chain.mpst")).status == 3);
  CHECK(cli("verify " + data("chain.mpst") + " --property nonsense").status == 3);
}

TEST_CASE("recursive inputs need a bound") {
  CHECK(cli("events " + data("repeat.mpst") + " --network Repeat").status == 3);
  CHECK(cli("configs " + data("repeat.mpst") + " --global RepeatType").status == 3);
  Outcome o = cli("events " + data("repeat.mpst") + " --network Repeat --bound 2");
  CHECK(o.status == 0);
  CHECK(o.out.find("exact: no") != std::string::npos);
  Outcome exact = cli("events " + data("chain.mpst"));
  CHECK(exact.status == 0);
  CHECK(exact.out.find("exact: yes") != std::string::npos);
  CHECK(exact.out.find("events: 3") != std::string::npos);
}

TEST_CASE("configurations of the deadlock are only the empty one") {
  Outcome o = cli("configs " + data("deadlock.mpst"));
  CHECK(o.status == 0);
  CHECK(o.out.find("∅ only") != std::string::npos);
}

TEST_CASE("json event listings") {
  auto n = nlohmann::json::parse(cli("events " + data("chain.mpst") + " --json").out);
  CHECK(n["exact"] == true);
  REQUIRE(n["events"].size() == 3);
  CHECK(n["events"][0]["cm"] == "p->q:l1");
  CHECK(n["events"][0]["loc"] == nlohmann::json::array({"p", "q"}));
  CHECK(n["events"][0]["events"]["q"] == nlohmann::json::array({"p?l1"}));
  auto g = nlohmann::json::parse(cli("events " + data("independent.mpst") + " --global First --json").out);
  REQUIRE(g["events"].size() == 3);
  std::size_t largest = 0;
  for (const auto& e : g["events"]) largest = std::max<std::size_t>(largest, e["classSize"]);
  CHECK(largest == 2);
  auto p = nlohmann::json::parse(cli("events " + data("repeat.mpst") + " --process Sender --bound 2 --json").out);
  CHECK(p["kind"] == "prime");
  CHECK(p["events"].size() == 4);
  CHECK(cli("events " + data("chain.mpst") + " --json").out == cli("events " + data("chain.mpst") + " --json").out);
}

TEST_CASE("run reports the failing index") {
  Outcome ok = cli("run " + data("chain.mpst") + " --trace \"p->q:l1, q->r:l2\"");
  CHECK(ok.status == 0);
  Outcome bad = cli("run " + data("chain.mpst") + " --trace \"p->q:l1, r->s:l3\"");
  CHECK(bad.status == 1);
  CHECK(bad.out.find("index 1") != std::string::npos);
  CHECK(cli("run " + data("delayed.mpst") + " --global Delayed --trace \"p->q:l2\"").status == 0);
}

TEST_CASE("projection, isomorphism, dot and verification") {
  Outcome proj = cli("project " + data("delayed.mpst") + " --global Delayed --participant r");
  CHECK(proj.status == 0);
  CHECK(proj.out.find("q?l3") != std::string::npos);
  CHECK(cli("project " + scratch("nomerge.mpst", "global G = p->q:{a. q->r:x; end, b. end}\n") + " --participant r")
            .status == 1);
  CHECK(cli("iso " + data("diamond.mpst") + " --bound 4").status == 0);
  Outcome dot = cli("dot " + data("diamond.mpst") + " --global DiamondType");
  CHECK(dot.status == 0);
  CHECK(dot.out.find("digraph") != std::string::npos);
  for (const char* prop : {"sr", "sf", "progress", "iso"})
    CHECK(cli("verify " + data("repeat.mpst") + " --property " + std::string(prop) + " --max-len 5 --bound 3").status ==
          0);
  auto r = nlohmann::json::parse(cli("verify --random --seeds 3 --count 4 --json").out);
  CHECK(r["pairs"] == 4);
  CHECK(r["failures"].empty());
}
