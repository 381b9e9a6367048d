#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mpses/global_es.hpp"
#include "mpses/net_es.hpp"
#include "mpses/syntax.hpp"

namespace mpses {

enum class Verdict { Pass, Fail, PreconditionFailed };

std::string to_string(Verdict v);

struct Counterexample {
  std::string network;
  std::string global;
  Trace trace;  // run leading to the failing state, including the failing step
  std::string detail;
};

struct VerifyReport {
  std::string property;
  std::optional<std::uint64_t> seed;
  Verdict verdict = Verdict::Pass;
  std::optional<Counterexample> counterexample;
  std::string note;

  bool passed() const { return verdict == Verdict::Pass; }
};

VerifyReport check_subject_reduction(const Network& n, const Global& g, std::size_t max_len);
VerifyReport check_session_fidelity(const Network& n, const Global& g, std::size_t max_len);

// Sum of the finite depths over reachable subterms and participants.
std::size_t default_progress_bound(const Global& g);
// Progress at the initial state and, when `reach` > 0, at every state the
// pair reaches within that many steps.
VerifyReport check_progress(const Network& n, const Global& g, std::optional<std::size_t> bound = std::nullopt,
                            std::size_t reach = 0);

VerifyReport check_isomorphism(const Network& n, const Global& g, std::size_t bound);

// ---------------------------------------------------------------------------
// Random generation.

struct GenOptions {
  std::size_t participants = 5;  // upper bound, at least 2 are used
  std::size_t max_branches = 3;
  double recursion = 0.3;
  std::size_t depth = 4;         // choice nesting before the generator closes branches
  std::size_t budget = 2000;     // candidates tried before giving up
  bool widen_inputs = true;      // add unused input branches to typed networks
};

Global gen_well_formed(std::uint64_t seed, const GenOptions& opts = {});
Global gen_well_formed(std::uint64_t seed, std::size_t size);
std::pair<Network, Global> gen_typed_pair(std::uint64_t seed, const GenOptions& opts = {});
std::pair<Network, Global> gen_typed_pair(std::uint64_t seed, std::size_t size);

// Network of all projections of a well-formed type.
Network projected_network(const Global& g);

// Number of reachable nodes plus branches; the measure shrinking decreases.
std::size_t term_size(const Global& g);

// Greedily simplifies a well-formed type while `still_fails` keeps holding.
Global shrink_global(const Global& g, const std::function<bool(const Global&)>& still_fails);

// ---------------------------------------------------------------------------
// Property campaign over generated typed pairs.

struct CampaignOptions {
  std::uint64_t first_seed = 1;
  std::size_t count = 200;
  std::size_t bound = 5;     // K for event structures and domains
  std::size_t max_len = 6;   // run length for SR, SF and progress
  std::size_t oracle_events = 12;
  GenOptions gen;
  std::vector<std::string> only;  // restrict to these property names when nonempty
};

struct PropertyCase {
  std::string name;
  std::string description;
};

// Names and descriptions of the properties the campaign evaluates per pair.
const std::vector<PropertyCase>& campaign_properties();

// Runs every selected property on one pair.
std::vector<VerifyReport> check_pair(const Network& n, const Global& g, const CampaignOptions& opts,
                                     std::optional<std::uint64_t> seed = std::nullopt);

struct CampaignResult {
  std::vector<VerifyReport> failures;  // shrunk where possible
  std::size_t pairs = 0;
  std::size_t checks = 0;
  double seconds = 0;
};

CampaignResult run_campaign(const CampaignOptions& opts,
                            const std::function<void(std::uint64_t, const std::vector<VerifyReport>&)>& on_pair = {});

}  // namespace mpses
