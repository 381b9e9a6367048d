#include "mpses/es_core.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "mpses/error.hpp"

namespace mpses {

Relation Relation::reflexive_transitive_closure() const {
  Relation r = *this;
  for (std::size_t i = 0; i < n_; ++i) r.set(i, i);
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i)
      if (r(i, k))
        for (std::size_t j = 0; j < n_; ++j)
          if (r(k, j)) r.set(i, j);
  return r;
}

namespace {

std::string pair_text(const char* what, std::size_t a, std::size_t b) {
  return std::string(what) + " (" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

std::string conflict_violation(const EsRelations& s) {
  const std::size_t n = s.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (s.conflict(a, a)) return pair_text("reflexive conflict", a, a);
    for (std::size_t b = 0; b < n; ++b)
      if (s.conflict(a, b) != s.conflict(b, a)) return pair_text("asymmetric conflict", a, b);
  }
  return {};
}

}  // namespace

std::string prime_axiom_violation(const EsRelations& s) {
  const std::size_t n = s.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (!s.order(a, a)) return pair_text("order not reflexive", a, a);
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && s.order(a, b) && s.order(b, a)) return pair_text("order not antisymmetric", a, b);
      if (!s.order(a, b)) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (s.order(b, c) && !s.order(a, c)) return pair_text("order not transitive", a, c);
    }
  }
  if (std::string v = conflict_violation(s); !v.empty()) return v;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (s.conflict(a, b))
        for (std::size_t c = 0; c < n; ++c)
          if (s.order(b, c) && !s.conflict(a, c)) return pair_text("conflict not hereditary", a, c);
  return {};
}

std::string flow_axiom_violation(const EsRelations& s) {
  for (std::size_t a = 0; a < s.size(); ++a)
    if (s.order(a, a)) return pair_text("reflexive flow", a, a);
  return conflict_violation(s);
}

bool conflict_free(const EsRelations& s, const EventSet& x) {
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      if (s.conflict(x[i], x[j])) return false;
  return true;
}

bool is_configuration(const EsRelations& s, const EventSet& x) {
  if (!conflict_free(s, x)) return false;
  std::vector<char> member(s.size(), 0);
  for (std::size_t e : x) member[e] = 1;
  if (s.kind == EsKind::Prime) {
    for (std::size_t e : x)
      for (std::size_t d = 0; d < s.size(); ++d)
        if (s.order(d, e) && !member[d]) return false;
    return true;
  }
  for (std::size_t e : x)
    for (std::size_t d = 0; d < s.size(); ++d) {
      if (!s.order(d, e) || member[d]) continue;
      bool excused = false;
      for (std::size_t f : x)
        if (s.conflict(d, f) && s.order(f, e)) {
          excused = true;
          break;
        }
      if (!excused) return false;
    }
  // The flow restricted to x must be acyclic.
  std::map<std::size_t, int> colour;
  std::function<bool(std::size_t)> acyclic_from = [&](std::size_t e) {
    colour[e] = 1;
    for (std::size_t f : x) {
      if (!s.order(e, f)) continue;
      if (colour[f] == 1) return false;
      if (colour[f] == 0 && !acyclic_from(f)) return false;
    }
    colour[e] = 2;
    return true;
  };
  for (std::size_t e : x)
    if (colour[e] == 0 && !acyclic_from(e)) return false;
  return true;
}

bool can_extend(const EsRelations& s, const std::vector<char>& member, std::size_t e) {
  if (member[e]) return false;
  for (std::size_t f = 0; f < s.size(); ++f)
    if (member[f] && s.conflict(e, f)) return false;
  for (std::size_t d = 0; d < s.size(); ++d) {
    if (!s.precedes(d, e) || member[d]) continue;
    if (s.kind == EsKind::Prime) return false;
    bool excused = false;
    for (std::size_t f = 0; f < s.size() && !excused; ++f)
      excused = member[f] && s.conflict(d, f) && s.precedes(f, e);
    if (!excused) return false;
  }
  return true;
}

bool is_proving_sequence(const EsRelations& s, const std::vector<std::size_t>& seq) {
  std::vector<char> member(s.size(), 0);
  for (std::size_t e : seq) {
    if (e >= s.size() || !can_extend(s, member, e)) return false;
    member[e] = 1;
  }
  return true;
}

std::vector<Configuration> enumerate_configurations(const EsRelations& s, std::size_t max_size) {
  std::vector<Configuration> out{Configuration{}};
  std::map<EventSet, std::size_t> index{{EventSet{}, 0}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].events.size() >= max_size) continue;
    std::vector<char> member(s.size(), 0);
    for (std::size_t e : out[i].events) member[e] = 1;
    for (std::size_t e = 0; e < s.size(); ++e) {
      if (!can_extend(s, member, e)) continue;
      EventSet bigger = out[i].events;
      bigger.insert(std::upper_bound(bigger.begin(), bigger.end(), e), e);
      auto [it, fresh] = index.emplace(bigger, out.size());
      if (fresh) {
        Configuration c;
        c.events = std::move(bigger);
        c.witness = out[i].witness;
        c.witness.push_back(e);
        out.push_back(std::move(c));
      }
      out[i].extensions.emplace_back(e, it->second);
    }
  }
  // Sort by (size, content) and remap extension targets.
  std::vector<std::size_t> perm(out.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = out[a].events;
    const auto& y = out[b].events;
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  std::vector<std::size_t> where(out.size());
  for (std::size_t i = 0; i < perm.size(); ++i) where[perm[i]] = i;
  std::vector<Configuration> sorted;
  sorted.reserve(out.size());
  for (std::size_t i : perm) {
    Configuration c = std::move(out[i]);
    for (auto& [e, target] : c.extensions) target = where[target];
    sorted.push_back(std::move(c));
  }
  return sorted;
}

std::vector<std::vector<std::size_t>> enumerate_proving_sequences(const EsRelations& s, std::size_t max_len) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> seq;
  std::vector<char> member(s.size(), 0);
  std::function<void()> go = [&]() {
    if (seq.size() >= max_len) return;
    for (std::size_t e = 0; e < s.size(); ++e) {
      if (!can_extend(s, member, e)) continue;
      seq.push_back(e);
      member[e] = 1;
      out.push_back(seq);
      go();
      member[e] = 0;
      seq.pop_back();
    }
  };
  go();
  return out;
}

std::vector<EventSet> configurations_by_subset_filter(const EsRelations& s, std::size_t max_size) {
  std::vector<EventSet> out;
  EventSet cur;
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    if (is_configuration(s, cur)) out.push_back(cur);
    if (cur.size() >= max_size) return;
    for (std::size_t e = from; e < s.size(); ++e) {
      cur.push_back(e);
      go(e + 1);
      cur.pop_back();
    }
  };
  go(0);
  std::sort(out.begin(), out.end(), [](const EventSet& x, const EventSet& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

bool is_subset(const EventSet& a, const EventSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

std::optional<std::size_t> separating_event(const EsRelations& s, const EventSet& x, const EventSet& y) {
  for (std::size_t e : y) {
    if (std::binary_search(x.begin(), x.end(), e)) continue;
    EventSet bigger = x;
    bigger.insert(std::upper_bound(bigger.begin(), bigger.end(), e), e);
    if (is_configuration(s, bigger)) return e;
  }
  return std::nullopt;
}

bool downward_surjective(const std::vector<std::optional<std::size_t>>& f, const EsRelations& target) {
  std::vector<char> image(target.size(), 0);
  for (const auto& t : f)
    if (t) image[*t] = 1;
  for (const auto& t : f) {
    if (!t) continue;
    for (std::size_t d = 0; d < target.size(); ++d)
      if (target.precedes(d, *t) && !image[d]) return false;
  }
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> immediate_conflicts(const EsRelations& s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = s.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!s.conflict(a, b)) continue;
      bool inherited = false;
      for (std::size_t c = 0; c < n && !inherited; ++c) {
        if (!s.order(c, a)) continue;
        for (std::size_t d = 0; d < n && !inherited; ++d)
          inherited = s.order(d, b) && (c != a || d != b) && s.conflict(c, d);
      }
      if (!inherited) out.emplace_back(a, b);
    }
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> causal_edges(const EsRelations& s) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const std::size_t n = s.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (!s.precedes(a, b)) continue;
      bool covering = true;
      if (s.kind == EsKind::Prime)
        for (std::size_t c = 0; c < n && covering; ++c)
          covering = !(s.precedes(a, c) && s.precedes(c, b));
      if (covering) out.emplace_back(a, b);
    }
  return out;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_dot(const EsRelations& s, const std::vector<std::string>& names, const std::string& title) {
  std::ostringstream os;
  os << "digraph \"" << dot_escape(title) << "\" {\n  node [shape=box];\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    os << "  e" << i << " [label=\"" << dot_escape(i < names.size() ? names[i] : std::to_string(i)) << "\"];\n";
  for (auto [a, b] : causal_edges(s)) os << "  e" << a << " -> e" << b << ";\n";
  std::vector<std::pair<std::size_t, std::size_t>> conflicts;
  if (s.kind == EsKind::Prime) {
    conflicts = immediate_conflicts(s);
  } else {
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        if (s.conflict(a, b)) conflicts.emplace_back(a, b);
  }
  for (auto [a, b] : conflicts) os << "  e" << a << " -> e" << b << " [style=dashed, dir=none];\n";
  os << "}\n";
  return os.str();
}

IsoResult poset_iso(const std::vector<EventSet>& d1, const std::vector<std::string>& labels1,
                    const std::vector<EventSet>& d2, const std::vector<std::string>& labels2) {
  auto index = [](const std::vector<std::string>& labels, const char* side) {
    std::map<std::string, std::size_t> idx;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (!idx.emplace(labels[i], i).second)
        throw Error(ErrorCode::LabelCollision, std::string("label '") + labels[i] + "' names two elements of the " +
                                                   side + " domain");
    return idx;
  };
  auto idx1 = index(labels1, "first");
  auto idx2 = index(labels2, "second");
  IsoResult res;
  for (const auto& [label, i] : idx1)
    if (!idx2.count(label)) {
      res.mismatch = "label '" + label + "' occurs only in the first domain";
      return res;
    }
  for (const auto& [label, i] : idx2)
    if (!idx1.count(label)) {
      res.mismatch = "label '" + label + "' occurs only in the second domain";
      return res;
    }
  std::vector<std::size_t> to2(d1.size());
  for (std::size_t i = 0; i < d1.size(); ++i) to2[i] = idx2.at(labels1[i]);
  for (std::size_t i = 0; i < d1.size(); ++i)
    for (std::size_t j = 0; j < d1.size(); ++j)
      if (is_subset(d1[i], d1[j]) != is_subset(d2[to2[i]], d2[to2[j]])) {
        res.mismatch = "inclusion between '" + labels1[i] + "' and '" + labels1[j] + "' is not preserved";
        return res;
      }
  res.isomorphic = true;
  return res;
}

}  // namespace mpses
