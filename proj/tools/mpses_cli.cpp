// Command-line front end for the session-type and event-structure library.
//
// Exit codes: 0 success, 1 property or typecheck failure, 2 parse or
// validation error, 3 usage error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mpses/es_core.hpp"
#include "mpses/global_es.hpp"
#include "mpses/lts.hpp"
#include "mpses/net_es.hpp"
#include "mpses/parser.hpp"
#include "mpses/proc_es.hpp"
#include "mpses/syntax.hpp"
#include "mpses/typing.hpp"
#include "mpses/verify.hpp"

using namespace mpses;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kInvalid = 2, kUsage = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Shared flags selecting the subject of a command.
struct Subject {
  std::string file;
  std::string network;
  std::string global;
  std::string process;
  std::optional<std::size_t> bound;
  bool json = false;
  bool dot = false;
};

Program read_program(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot read " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str());
}

// An omitted name is accepted when the file defines exactly one of that sort.
template <class Map>
std::string pick(const Map& defs, const std::string& given, const char* sort) {
  if (!given.empty()) return given;
  if (defs.size() == 1) return defs.begin()->first;
  throw UsageError(std::string("specify --") + sort + " (the file defines " + std::to_string(defs.size()) + ")");
}

std::size_t network_height(const Network& n) {
  std::size_t h = 0;
  for (const auto& [p, proc] : n.bindings()) h = std::max(h, height(proc));
  return h;
}

bool network_recursive(const Network& n) {
  for (const auto& [p, proc] : n.bindings())
    if (!recursion_free(proc)) return true;
  return false;
}

std::size_t resolve_bound(const std::optional<std::size_t>& bound, bool recursive, std::size_t height) {
  if (bound) {
    if (*bound == 0) throw UsageError("--bound must be positive");
    return *bound;
  }
  if (recursive) throw UsageError("the input is recursive: --bound is required");
  return std::max<std::size_t>(height, 1);
}

std::vector<std::string> action_strings(const PEvent& e) {
  std::vector<std::string> out;
  for (const auto& a : e) out.push_back(to_string(a));
  return out;
}

json to_json(const PEvent& e) { return json{{"actions", action_strings(e)}}; }

json to_json(const NEvent& v) {
  return json{{"loc", {v.first.owner.name, v.second.owner.name}},
              {"events", {{v.first.owner.name, action_strings(v.first.event)},
                          {v.second.owner.name, action_strings(v.second.event)}}},
              {"cm", to_string(cm(v))}};
}

json to_json(const GEvent& g) {
  std::vector<std::string> trace;
  for (const auto& c : g.canonical) trace.push_back(to_string(c));
  return json{{"canonical", trace}, {"cm", to_string(cm(g))}, {"classSize", class_members(g.canonical).size()}};
}

json to_json(const VerifyReport& r) {
  json j{{"property", r.property}, {"verdict", to_string(r.verdict)}};
  j["seed"] = r.seed ? json(*r.seed) : json(nullptr);
  if (!r.note.empty()) j["note"] = r.note;
  if (r.counterexample) {
    const auto& c = *r.counterexample;
    j["counterexample"] = {{"network", c.network}, {"global", c.global}, {"trace", to_string(c.trace)},
                           {"detail", c.detail}};
  }
  return j;
}

std::string label(const PEvent& e) { return to_string(e); }
std::string label(const NEvent& v) { return to_string(v); }
std::string label(const GEvent& g) { return to_string(g); }

std::string comm_of(const PEvent& e) { return to_string(e.back()); }
std::string comm_of(const NEvent& v) { return to_string(cm(v)); }
std::string comm_of(const GEvent& g) { return to_string(cm(g)); }

// A structure of one of the three event kinds together with its exactness.
template <class E>
struct Built {
  EventStructure<E> es;
  bool exact = false;
  std::size_t bound = 0;
};

std::string set_string(const EventSet& x) {
  std::string s = "{";
  for (std::size_t i = 0; i < x.size(); ++i) s += (i ? ", " : "") + std::to_string(x[i]);
  return s + "}";
}

template <class E>
void print_events(const Built<E>& b, const Subject& s) {
  if (s.dot) {
    std::vector<std::string> names;
    for (const auto& e : b.es.events) names.push_back(label(e));
    std::cout << to_dot(b.es, names, s.file);
    return;
  }
  auto edges = causal_edges(b.es);
  std::vector<std::pair<std::size_t, std::size_t>> clashes;
  for (std::size_t a = 0; a < b.es.size(); ++a)
    for (std::size_t c = a + 1; c < b.es.size(); ++c)
      if (b.es.conflict(a, c)) clashes.emplace_back(a, c);
  const char* order_name = b.es.kind == EsKind::Flow ? "flow" : "causality";
  if (s.json) {
    json events = json::array();
    for (const auto& e : b.es.events) events.push_back(to_json(e));
    json j{{"exact", b.exact}, {"bound", b.bound}, {"kind", b.es.kind == EsKind::Flow ? "flow" : "prime"},
           {"events", events}, {order_name, edges}, {"conflict", clashes}};
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << "exact: " << (b.exact ? "yes" : "no") << " (bound " << b.bound << ")\n";
  std::cout << "events: " << b.es.size() << "\n";
  for (std::size_t i = 0; i < b.es.size(); ++i)
    std::cout << "  " << i << "  " << comm_of(b.es.events[i]) << "  " << label(b.es.events[i]) << "\n";
  std::cout << order_name << ":\n";
  for (auto [a, c] : edges) std::cout << "  " << a << " -> " << c << "\n";
  std::cout << "conflict:\n";
  for (auto [a, c] : clashes) std::cout << "  " << a << " # " << c << "\n";
}

template <class E>
void print_configs(const Built<E>& b, const Subject& s) {
  auto cs = enumerate_configurations(b.es, b.es.size());
  if (s.json) {
    json list = json::array();
    for (const auto& c : cs) {
      json comms = json::array();
      for (auto i : c.witness) comms.push_back(comm_of(b.es.events[i]));
      list.push_back(json{{"events", c.events}, {"witness", comms}});
    }
    json events = json::array();
    for (const auto& e : b.es.events) events.push_back(to_json(e));
    std::cout << json{{"exact", b.exact}, {"bound", b.bound}, {"events", events}, {"configurations", list}}.dump(2)
              << "\n";
    return;
  }
  std::cout << "exact: " << (b.exact ? "yes" : "no") << " (bound " << b.bound << ")\n";
  if (cs.size() == 1) {
    std::cout << "configurations: ∅ only\n";
    return;
  }
  std::cout << "configurations: " << cs.size() << "\n";
  for (const auto& c : cs) {
    std::cout << "  " << set_string(c.events);
    if (!c.witness.empty()) {
      std::cout << "  via";
      for (auto i : c.witness) std::cout << " " << comm_of(b.es.events[i]);
    }
    std::cout << "\n";
  }
}

template <class Fn>
void with_structure(const Subject& s, Fn&& fn) {
  Program prog = read_program(s.file);
  int chosen = !s.network.empty() + !s.global.empty() + !s.process.empty();
  if (chosen > 1) throw UsageError("choose one of --network, --global, --process");
  if (!s.process.empty()) {
    Process p = prog.process(s.process);
    std::size_t k = resolve_bound(s.bound, !recursion_free(p), height(p));
    ProcessES r = esp(p, k);
    fn(Built<PEvent>{std::move(r.es), r.exact, k});
  } else if (!s.global.empty() || (s.network.empty() && prog.networks.empty())) {
    Global g = prog.global(pick(prog.globals, s.global, "global"));
    std::size_t k = resolve_bound(s.bound, !recursion_free(g), height(g));
    GlobalES r = esg(g, k);
    fn(Built<GEvent>{std::move(r.es), r.exact, k});
  } else {
    Network n = prog.network(pick(prog.networks, s.network, "network"));
    std::size_t k = resolve_bound(s.bound, network_recursive(n), network_height(n));
    NetworkES r = esn(n, k);
    fn(Built<NEvent>{std::move(r.es), r.exact, k});
  }
}

int cmd_check(const Subject& s) {
  Program prog = read_program(s.file);
  Global g = prog.global(pick(prog.globals, s.global, "global"));
  if (std::string problem = well_formedness_problem(g); !problem.empty()) {
    std::cout << "not well formed: " << problem << "\n";
    return kFailed;
  }
  if (s.network.empty() && prog.networks.empty()) {
    std::cout << "well formed\n";
    return kOk;
  }
  Network n = prog.network(pick(prog.networks, s.network, "network"));
  TypecheckResult r = typecheck_report(n, g);
  if (s.json) {
    json j{{"typed", r.ok}, {"reason", r.reason}};
    j["participant"] = r.participant ? json(r.participant->name) : json(nullptr);
    std::cout << j.dump(2) << "\n";
  } else if (r.ok) {
    std::cout << "typed\n";
  } else {
    std::cout << "not typed";
    if (r.participant) std::cout << " at " << r.participant->name;
    std::cout << ": " << r.reason << "\n";
  }
  return r.ok ? kOk : kFailed;
}

int cmd_project(const Subject& s, const std::string& participant) {
  Program prog = read_program(s.file);
  Global g = prog.global(pick(prog.globals, s.global, "global"));
  std::vector<Participant> targets;
  if (participant.empty()) {
    auto ps = participants_global(g);
    targets.assign(ps.begin(), ps.end());
  } else {
    targets.push_back(Participant{participant});
  }
  bool all = true;
  json j = json::object();
  for (const auto& p : targets) {
    std::string reason;
    auto proj = try_project(g, p, &reason);
    all = all && proj.has_value();
    if (s.json) {
      j[p.name] = proj ? json(to_string(*proj)) : json{{"undefined", reason}};
    } else if (proj) {
      std::cout << p.name << " :: " << to_string(*proj) << "\n";
    } else {
      std::cout << p.name << " :: undefined (" << reason << ")\n";
    }
  }
  if (s.json) std::cout << j.dump(2) << "\n";
  return all ? kOk : kFailed;
}

int cmd_run(const Subject& s, const std::string& trace_text) {
  Program prog = read_program(s.file);
  Trace sigma = parse_trace(trace_text);
  try {
    if (!s.global.empty() || (s.network.empty() && prog.networks.empty())) {
      Global g = prog.global(pick(prog.globals, s.global, "global"));
      std::cout << to_string(run(g, sigma)) << "\n";
    } else {
      Network n = prog.network(pick(prog.networks, s.network, "network"));
      std::cout << to_string(run(n, sigma)) << "\n";
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotEnabled) throw;
    std::cout << "not enabled at index " << e.index().value_or(0) << ": " << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}

std::pair<Network, Global> typed_pair(const Subject& s) {
  Program prog = read_program(s.file);
  return {prog.network(pick(prog.networks, s.network, "network")), prog.global(pick(prog.globals, s.global, "global"))};
}

int report(const VerifyReport& r, bool as_json) {
  if (as_json) {
    std::cout << to_json(r).dump(2) << "\n";
  } else {
    std::cout << r.property << ": " << to_string(r.verdict);
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
    if (r.counterexample) {
      std::cout << "  network: " << r.counterexample->network << "\n  global: " << r.counterexample->global
                << "\n  trace: " << to_string(r.counterexample->trace) << "\n  " << r.counterexample->detail << "\n";
    }
  }
  return r.passed() ? kOk : kFailed;
}

int cmd_iso(const Subject& s) {
  auto [n, g] = typed_pair(s);
  std::size_t k = resolve_bound(s.bound, network_recursive(n) || !recursion_free(g),
                                std::max(network_height(n), height(g)));
  return report(check_isomorphism(n, g, k), s.json);
}

struct VerifyFlags {
  std::string property;
  std::size_t max_len = 6;
  bool random = false;
  std::uint64_t seeds = 1;
  std::size_t count = 20;
};

int cmd_verify(const Subject& s, const VerifyFlags& v) {
  if (v.random) {
    CampaignOptions opts;
    opts.first_seed = v.seeds;
    opts.count = v.count;
    opts.bound = s.bound.value_or(5);
    opts.max_len = v.max_len;
    if (!v.property.empty()) opts.only = {v.property};
    CampaignResult r = run_campaign(opts);
    if (s.json) {
      json failures = json::array();
      for (const auto& f : r.failures) failures.push_back(to_json(f));
      std::cout << json{{"pairs", r.pairs}, {"checks", r.checks}, {"seconds", r.seconds}, {"failures", failures}}.dump(2)
                << "\n";
    } else {
      std::cout << "pairs: " << r.pairs << ", checks: " << r.checks << ", failures: " << r.failures.size() << "\n";
      for (const auto& f : r.failures) report(f, false);
    }
    return r.failures.empty() ? kOk : kFailed;
  }
  if (s.file.empty()) throw UsageError("verify needs FILE or --random");
  if (v.property.empty()) throw UsageError("verify FILE needs --property");
  auto [n, g] = typed_pair(s);
  if (v.property == "sr") return report(check_subject_reduction(n, g, v.max_len), s.json);
  if (v.property == "sf") return report(check_session_fidelity(n, g, v.max_len), s.json);
  if (v.property == "progress") return report(check_progress(n, g, std::nullopt, v.max_len), s.json);
  return cmd_iso(s);
}

int classify(const Error& e) {
  switch (e.code()) {
    case ErrorCode::NotEnabled:
    case ErrorCode::Undefined:
    case ErrorCode::LabelCollision:
    case ErrorCode::GenerationExhausted:
      return kFailed;
    default:
      return kInvalid;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Session types, their event structures and property checks"};
  app.require_subcommand(1);
  Subject s;
  std::string participant, trace_text;
  VerifyFlags v;

  auto add_file = [&](CLI::App* c, bool required = true) {
    auto* opt = c->add_option("file", s.file, "Input file")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto add_network = [&](CLI::App* c) { c->add_option("--network", s.network, "Network definition name"); };
  auto add_global = [&](CLI::App* c) { c->add_option("--global", s.global, "Global type definition name"); };
  auto add_bound = [&](CLI::App* c) {
    c->add_option("--bound", s.bound, "Truncation bound K, required for recursive inputs");
  };
  auto add_json = [&](CLI::App* c) { c->add_flag("--json", s.json, "JSON output"); };

  auto* check = app.add_subcommand("check", "Well-formedness and typing of a network against a global type");
  add_file(check), add_network(check), add_global(check), add_json(check);

  auto* project = app.add_subcommand("project", "Projections of a global type");
  add_file(project), add_global(project), add_json(project);
  project->add_option("--participant", participant, "Single participant to project onto");

  auto* events = app.add_subcommand("events", "Events of a process, network or global type");
  auto* configs = app.add_subcommand("configs", "Configuration domain of a process, network or global type");
  auto* dot = app.add_subcommand("dot", "Event structure in DOT format");
  for (auto* c : {events, configs, dot}) {
    add_file(c), add_network(c), add_global(c), add_bound(c);
    c->add_option("--process", s.process, "Process definition name");
  }
  add_json(events), add_json(configs);
  auto* events_dot = events->add_flag("--dot", s.dot, "DOT output");
  events_dot->excludes(events->get_option("--json"));

  auto* run_cmd = app.add_subcommand("run", "Executes a trace on a network or global type");
  add_file(run_cmd), add_network(run_cmd), add_global(run_cmd);
  run_cmd->add_option("--trace", trace_text, "Comma-separated communications such as p->q:l")->required();

  auto* iso = app.add_subcommand("iso", "Isomorphism of the configuration domains of a typed pair");
  add_file(iso), add_network(iso), add_global(iso), add_bound(iso), add_json(iso);

  auto* verify = app.add_subcommand("verify", "Property checks on a typed pair or on generated pairs");
  add_file(verify, false), add_network(verify), add_global(verify), add_bound(verify), add_json(verify);
  verify->add_option("--property", v.property, "Property to check")
      ->check(CLI::IsMember({"sr", "sf", "progress", "iso"}));
  verify->add_option("--max-len", v.max_len, "Length of explored runs");
  auto* random = verify->add_flag("--random", v.random, "Check generated pairs instead of a file");
  verify->add_option("--seeds", v.seeds, "First seed of the generated pairs")->needs(random);
  verify->add_option("--count", v.count, "Number of generated pairs")->needs(random);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*check) return cmd_check(s);
    if (*project) return cmd_project(s, participant);
    if (*events) {
      with_structure(s, [&](const auto& b) { print_events(b, s); });
      return kOk;
    }
    if (*configs) {
      with_structure(s, [&](const auto& b) { print_configs(b, s); });
      return kOk;
    }
    if (*dot) {
      s.dot = true;
      with_structure(s, [&](const auto& b) { print_events(b, s); });
      return kOk;
    }
    if (*run_cmd) return cmd_run(s, trace_text);
    if (*iso) return cmd_iso(s);
    if (*verify) return cmd_verify(s, v);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << error_code_name(e.code()) << ": " << e.what() << "\n";
    return classify(e);
  }
  return kUsage;
}
