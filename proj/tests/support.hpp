#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "mpses/parser.hpp"
#include "mpses/syntax.hpp"

namespace testing_support {

inline mpses::Program load(const std::string& file) {
  std::ifstream in(std::string(MPSES_DATA_DIR) + "/" + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return mpses::parse_program(ss.str());
}

inline mpses::Process proc(const std::string& text) { return mpses::parse_process(text); }
inline mpses::Global glob(const std::string& text) { return mpses::parse_global(text); }
inline mpses::Network net(const std::string& text) { return mpses::parse_network(text); }
inline mpses::Trace trace(const std::string& text) { return mpses::parse_trace(text); }
inline mpses::Communication comm(const std::string& text) { return mpses::parse_communication(text); }
inline mpses::Participant part(const std::string& name) { return mpses::Participant{name}; }

inline mpses::Process proc_in(const std::string& defs, const std::string& name) {
  return mpses::parse_program(defs).process(name);
}
inline mpses::Global glob_in(const std::string& defs, const std::string& name) {
  return mpses::parse_program(defs).global(name);
}

// Arbitrary (not necessarily typable) processes with back-edges.
inline mpses::Process random_process(std::uint64_t seed, std::size_t nodes = 6) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  const char* peers[] = {"p", "q", "r"};
  const char* msgs[] = {"a", "b", "c"};
  mpses::GraphBuilder<mpses::ProcNode> b;
  std::size_t n = 1 + below(nodes);
  for (std::size_t i = 0; i < n; ++i) b.add({});
  mpses::NodeId zero = b.add({});
  for (std::size_t i = 0; i < n; ++i) {
    b[i].kind = below(2) ? mpses::ProcKind::Output : mpses::ProcKind::Input;
    b[i].peer = mpses::Participant{peers[below(3)]};
    std::size_t k = 1 + below(3);
    for (std::size_t j = 0; j < k; ++j) {
      std::size_t target = below(n + 2);
      b[i].branches.emplace(mpses::Message{msgs[j]}, target >= n ? zero : static_cast<mpses::NodeId>(target));
    }
  }
  return std::move(b).finish(0);
}

}  // namespace testing_support

