#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mpses/syntax.hpp"

namespace mpses {

// Abstract syntax of the surface language. Names refer to definitions of
// the same sort; recursion is expressed by naming.

struct ProcBranch;

struct ProcExpr {
  enum class Kind { Inact, Ref, Output, Input };
  Kind kind = Kind::Inact;
  std::string name;
  std::vector<ProcBranch> branches;
  int line = 0;
};

struct ProcBranch {
  Participant peer;
  Message message;
  ProcExpr body;
};

struct GlobalBranch;

struct GlobalExpr {
  enum class Kind { End, Ref, Comm };
  Kind kind = Kind::End;
  std::string name;
  Participant sender;
  Participant receiver;
  std::vector<GlobalBranch> branches;
  int line = 0;
};

struct GlobalBranch {
  Message message;
  GlobalExpr body;
};

struct NetExpr {
  std::vector<std::pair<Participant, ProcExpr>> bindings;
  int line = 0;
};

using ProcEquations = std::map<std::string, ProcExpr>;
using GlobalEquations = std::map<std::string, GlobalExpr>;

// Builds the regular term denoted by `root` under the given equations.
Process build_process(const ProcEquations& eqs, const ProcExpr& root);
Process build_process(const ProcEquations& eqs, const std::string& root_name);
Global build_global(const GlobalEquations& eqs, const GlobalExpr& root);
Global build_global(const GlobalEquations& eqs, const std::string& root_name);

class Program {
 public:
  ProcEquations processes;
  GlobalEquations globals;
  std::map<std::string, NetExpr> networks;
  // Definition names in source order, tagged by sort.
  std::vector<std::pair<std::string, std::string>> order;

  Process process(const std::string& name) const { return build_process(processes, name); }
  Global global(const std::string& name) const { return build_global(globals, name); }
  Network network(const std::string& name) const;
  Network network(const NetExpr& net) const;
};

Program parse_program(std::string_view text);

// Standalone expressions, optionally resolving names against a program.
Process parse_process(std::string_view text, const Program& context = {});
Global parse_global(std::string_view text, const Program& context = {});
Network parse_network(std::string_view text, const Program& context = {});
Communication parse_communication(std::string_view text);
Trace parse_trace(std::string_view text);
// Dot-separated actions such as "q!l1.r!l".
std::vector<Action> parse_actions(std::string_view text);

}  // namespace mpses
