#pragma once

#include <set>

#include "mpses/syntax.hpp"

namespace mpses {

// Communications the network can perform: an output offer of p toward q
// meets an input offer of q from p on a shared message.
std::set<Communication> net_enabled(const Network& n);
Network net_step(const Network& n, const Communication& alpha);

// Transitions of a global type: a root communication (any branch), or a
// communication enabled in every branch whose participants are disjoint
// from the root's, performed underneath the root choice.
std::set<Communication> global_enabled(const Global& g);
Global global_step(const Global& g, const Communication& alpha);

// Folds the step function over the trace; NotEnabled carries the index of
// the first failing communication.
Network run(const Network& n, const Trace& sigma);
Global run(const Global& g, const Trace& sigma);

}  // namespace mpses
