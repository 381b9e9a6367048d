#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "mpses/syntax.hpp"

namespace mpses {

// Position of the first communication involving a participant, maximised
// over all traces. Zero means the participant never occurs.
struct Depth {
  std::size_t value = 0;
  bool infinite = false;

  static Depth inf() { return {0, true}; }
  bool finite() const { return !infinite; }
  bool operator==(const Depth&) const = default;
};

std::string to_string(const Depth& d);

Depth depth(const Global& g, const Participant& p);
bool bounded(const Global& g);

// Partial: throws Error(Undefined) with the reason.
Process project(const Global& g, const Participant& r);
std::optional<Process> try_project(const Global& g, const Participant& r, std::string* reason = nullptr);

bool well_formed(const Global& g);
// Empty when well formed, otherwise a human-readable reason.
std::string well_formedness_problem(const Global& g);

bool proc_leq(const Process& p, const Process& q);

struct TypecheckResult {
  bool ok = false;
  std::optional<Participant> participant;
  std::string reason;
  explicit operator bool() const { return ok; }
};

TypecheckResult typecheck_report(const Network& n, const Global& g);
bool typecheck(const Network& n, const Global& g);

}  // namespace mpses
