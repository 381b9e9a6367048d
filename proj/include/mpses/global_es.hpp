#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpses/es_core.hpp"
#include "mpses/net_es.hpp"
#include "mpses/syntax.hpp"

namespace mpses {

struct TraceSet {
  std::set<Trace> traces;
  bool exact = false;
};

// Nonempty traces of the type's tree of length at most `bound`.
TraceSet g_traces(const Global& g, std::size_t bound);

// Lexicographically least member of the permutation class: swapping
// adjacent communications with disjoint participants.
Trace normal_form(const Trace& sigma);
bool trace_equiv(const Trace& a, const Trace& b);
// The class by breadth-first swap closure; exponential, meant for oracles
// and small classes.
std::set<Trace> class_members(const Trace& sigma);

bool is_pointed(const Trace& sigma);

// A class of pointed traces, represented by its normal form.
struct GEvent {
  Trace canonical;
  auto operator<=>(const GEvent&) const = default;

  static GEvent of(const Trace& sigma) { return GEvent{normal_form(sigma)}; }
};

Communication cm(const GEvent& g);

GEvent g_retrieval(const Communication& alpha, const GEvent& g);
GEvent g_retrieval(const Trace& sigma, const GEvent& g);
GEvent ev(const Trace& sigma);
std::optional<GEvent> g_residual(const GEvent& g, const Communication& alpha);

PEvent proj_trace(const Trace& sigma, const Participant& r);

bool g_leq(const GEvent& a, const GEvent& b);
// Oracle: searches both classes for a prefix pair.
bool g_leq_by_members(const GEvent& a, const GEvent& b);
bool g_conflict(const GEvent& a, const GEvent& b);

struct GlobalES {
  EventStructure<GEvent> es;
  bool exact = false;
};

// Events with at most `bound` communications; exact when no run is longer.
// Throws Error(NotWellFormed).
GlobalES esg(const Global& g, std::size_t bound);

std::vector<GEvent> gec(const Trace& sigma);

NEvent g_to_n(const GEvent& g);

std::string to_string(const GEvent& g);

}  // namespace mpses
