#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "mpses/es_core.hpp"
#include "mpses/syntax.hpp"

namespace mpses {

// A nonempty sequence of actions of one participant; the last action is the
// event itself, the rest is its local history.
using PEvent = std::vector<Action>;

struct PEventSet {
  std::set<PEvent> events;
  bool exact = false;  // true when no event was cut off by the length bound
};

PEventSet p_events(const Process& p, std::size_t bound);

bool pe_leq(const PEvent& a, const PEvent& b);       // prefix
bool pe_conflict(const PEvent& a, const PEvent& b);  // incomparable

struct ProcessES {
  EventStructure<PEvent> es;
  bool exact = false;
};

ProcessES esp(const Process& p, std::size_t bound);

}  // namespace mpses
