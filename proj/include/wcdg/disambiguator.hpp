// Copyright 2026 The wcdg Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Eliminative disambiguation: strict arc consistency, greedy removal of the
// least supported candidate, and activation of preference-induced
// constraints once their trigger is (almost) uniquely determined.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "wcdg/domains.hpp"
#include "wcdg/grammar.hpp"
#include "wcdg/lexicon.hpp"
#include "wcdg/network.hpp"
#include "wcdg/oracle.hpp"

namespace wcdg {

// The final interpretation: one relation per word and layer, scored by the
// oracle's exact semantics.
using Analysis = ScoredAssignment;

struct PruneDecision {
  int candidate = -1;
  double cost = 0.0;
};

// Squared confidence mass lost by zeroing x: the square of its support.
inline double prune_cost(const ConstraintNetwork& net, int id) {
  double s = net.support(id);
  return s * s;
}

// Squared score mass carried by x's table entries: its unary score and its
// binary scores against every live candidate of the other variables.
inline double quadratic_mass(const ConstraintNetwork& net, int id) {
  double u = net.unary(id);
  double sum = u * u;
  for (int v = 0; v < net.num_variables(); ++v) {
    if (v == net.variable_of(id)) continue;
    for (int y : net.domain(v)) sum += net.binary(id, y) * net.binary(id, y);
  }
  return sum;
}

namespace detail {

inline double best_alternative(const ConstraintNetwork& net, int id) {
  double best = 0;
  for (int y : net.domain(net.variable_of(id)))
    if (y != id) best = std::max(best, net.support(y));
  return best;
}

}  // namespace detail

// Cheapest candidate among undecided variables. Ties go to the candidate
// with the strongest competitor, then to the one with less quadratic mass,
// then to the smallest relation.
inline std::optional<PruneDecision> select_victim(const ConstraintNetwork& net) {
  struct Key {
    double cost, alt, mass;
  };
  // -1: a is the better victim, 1: b is, 0: tie
  auto compare = [](const Key& a, const Key& b) {
    if (detail::clearly_less(a.cost, b.cost)) return -1;
    if (detail::clearly_less(b.cost, a.cost)) return 1;
    if (detail::clearly_less(b.alt, a.alt)) return -1;
    if (detail::clearly_less(a.alt, b.alt)) return 1;
    if (detail::clearly_less(a.mass, b.mass)) return -1;
    if (detail::clearly_less(b.mass, a.mass)) return 1;
    return 0;
  };
  std::optional<PruneDecision> best;
  Key best_key{};
  for (int v = 0; v < net.num_variables(); ++v) {
    if (net.domain(v).size() < 2) continue;
    for (int id : net.domain(v)) {
      Key key{prune_cost(net, id), detail::best_alternative(net, id), quadratic_mass(net, id)};
      int c = best ? compare(key, best_key) : -1;
      if (c < 0 || (c == 0 && net.candidate(id) < net.candidate(best->candidate))) {
        best = PruneDecision{id, key.cost};
        best_key = key;
      }
    }
  }
  return best;
}

// Removes every candidate that cannot take part in a nonzero assignment,
// until nothing changes. A variable whose candidates all break a strict unary
// constraint keeps only its root attachment; otherwise domains are never
// emptied. Returns the number of removals.
inline int prune_strict(ConstraintNetwork& net) {
  int removed = 0;
  const auto& root = [&](int v) -> const std::optional<std::string>& {
    return net.grammar().root_label(net.variable(v).layer);
  };
  for (int v = 0; v < net.num_variables(); ++v) {
    auto dom = net.domain(v);
    bool all_zero = std::all_of(dom.begin(), dom.end(), [&](int id) { return net.unary(id) == 0; });
    if (!all_zero || !root(v)) continue;
    auto is_root = [&](int id) {
      return net.candidate(id).dom == 0 && net.candidate(id).label == *root(v);
    };
    if (std::none_of(dom.begin(), dom.end(), is_root)) continue;
    for (int id : dom) {
      if (!is_root(id)) {
        net.remove(id, 0.0);
        ++removed;
      }
    }
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < net.num_variables(); ++v) {
      auto dom = net.domain(v);
      std::vector<int> dead;
      for (int id : dom)
        if (net.support(id) == 0) dead.push_back(id);
      if (dead.empty() || dead.size() == dom.size()) continue;
      for (int id : dead) net.remove(id, 0.0);
      removed += static_cast<int>(dead.size());
      changed = true;
    }
  }
  return removed;
}

// A candidate is decided when it is alone in its domain or its support
// dominates every alternative by the grammar's threshold.
inline bool decided(const ConstraintNetwork& net, int id) {
  const auto& dom = net.domain(net.variable_of(id));
  if (dom.size() == 1) return true;
  double s = net.support(id);
  if (s <= 0) return false;
  for (int y : dom)
    if (y != id && s < net.grammar().threshold * net.support(y)) return false;
  return true;
}

// Activates every preference-induced constraint whose trigger matches a
// decided candidate, at most once per trigger instance, until no more fire.
// Returns true if anything was activated.
inline bool activate_pinduced(ConstraintNetwork& net) {
  const auto& g = net.grammar();
  bool any = false;
  for (bool changed = true; changed;) {
    changed = false;
    for (int p = 0; p < static_cast<int>(g.pinduced.size()); ++p) {
      for (int v = 0; v < net.num_variables(); ++v) {
        for (int id : std::vector<int>(net.domain(v))) {
          const auto& x = net.candidate(id);
          if (net.activated(p, x) || !trigger_holds(g.pinduced[p], x, net.sentence())) continue;
          if (!decided(net, id)) continue;
          if (g.pinduced[p].is_projection()) net.project(p, x);
          else net.activate_template(p, x);
          any = changed = true;
        }
      }
    }
  }
  return any;
}

inline Analysis extract_analysis(const ConstraintNetwork& net, const Sentence& sentence) {
  std::vector<CandidateRelation> relations;
  for (int v = 0; v < net.num_variables(); ++v) relations.push_back(net.candidate(net.domain(v).front()));
  return score_analysis(relations, net.grammar(), sentence);
}

struct Disambiguation {
  Analysis analysis;
  ConstraintNetwork network;
};

inline Disambiguation disambiguate_with_network(const Sentence& sentence, const Grammar& grammar) {
  ConstraintNetwork net = build_network(sentence, grammar);
  prune_strict(net);
  for (;;) {
    if (activate_pinduced(net)) prune_strict(net);
    auto victim = select_victim(net);
    if (!victim) break;
    net.remove(victim->candidate, victim->cost);
    prune_strict(net);
  }
  Analysis a = extract_analysis(net, sentence);
  return {std::move(a), std::move(net)};
}

inline Analysis disambiguate(const Sentence& sentence, const Grammar& grammar) {
  return disambiguate_with_network(sentence, grammar).analysis;
}

// A variable whose final relation is not the one the initial network
// supported most.
struct ExpectationViolation {
  CandidateRelation chosen;
  CandidateRelation expected;
  double chosen_support = 0.0;
  double expected_support = 0.0;
};

struct DiagnosisReport {
  std::vector<Violation> violations;
  std::vector<ExpectationViolation> expectations;
};

inline DiagnosisReport diagnose(const Analysis& analysis, const ConstraintNetwork& net) {
  DiagnosisReport report;
  report.violations = analysis.violations;
  for (const auto& chosen : analysis.relations) {
    auto cid = net.find(chosen);
    if (!cid) continue;
    int best = *cid;
    for (int id = 0; id < net.num_candidates(); ++id) {
      if (net.variable_of(id) != net.variable_of(*cid)) continue;
      if (detail::clearly_less(net.initial_support(best), net.initial_support(id))) best = id;
    }
    if (best != *cid)
      report.expectations.push_back({chosen, net.candidate(best), net.initial_support(*cid),
                                     net.initial_support(best)});
  }
  return report;
}

}  // namespace wcdg
