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

#pragma once

#include <compare>
#include <map>
#include <vector>

#include "wcdg/errors.hpp"
#include "wcdg/grammar.hpp"
#include "wcdg/lexicon.hpp"

namespace wcdg {

// One word on one layer; receives exactly one relation in an analysis.
struct Variable {
  int position = 1;
  Layer layer = Layer::kSyn;

  friend auto operator<=>(const Variable&, const Variable&) = default;
};

inline Variable variable_of(const CandidateRelation& r) { return {r.dep, r.layer}; }

using Domains = std::map<Variable, std::vector<CandidateRelation>>;

// Every (label, modifiee) pair for v, per reading, in canonical order.
inline std::vector<CandidateRelation> all_candidates(const Sentence& sentence,
                                                     const Grammar& grammar, Variable v) {
  std::vector<CandidateRelation> out;
  for (int r = 0; r < sentence.readings(v.position); ++r)
    for (const auto& label : grammar.labels_of(v.layer))
      for (int dom = 0; dom <= sentence.size(); ++dom)
        if (dom != v.position) out.push_back({v.position, v.layer, label, dom, r});
  std::sort(out.begin(), out.end());
  return out;
}

// Used when every candidate of a variable violates a strict constraint:
// attachment to the root with the layer's root label, or everything if the
// grammar declares no root label.
inline std::vector<CandidateRelation> fallback_domain(
    const Grammar& grammar, Variable v, const std::vector<CandidateRelation>& unfiltered) {
  std::vector<CandidateRelation> out;
  if (const auto& root = grammar.root_label(v.layer)) {
    for (const auto& c : unfiltered)
      if (c.dom == 0 && c.label == *root) out.push_back(c);
  }
  return out.empty() ? unfiltered : out;
}

// Strict unary constraints whose verdict cannot change by feature projection.
inline std::vector<const Constraint*> prefilter_constraints(const Grammar& grammar) {
  auto projected = projected_features(grammar);
  std::vector<const Constraint*> out;
  for (const auto& c : grammar.constraints)
    if (c.arity == 1 && c.pf == 0.0 && !reads_any(*c.expr, projected)) out.push_back(&c);
  return out;
}

inline void check_categories(const Sentence& sentence, const Grammar& grammar) {
  for (int p = 1; p <= sentence.size(); ++p) {
    for (const auto& e : sentence.token(p).readings) {
      if (!grammar.accepts_category(e.cat))
        throw UnknownCategory("category '" + e.cat + "' of '" + e.form +
                              "' is not declared by the grammar");
    }
  }
}

inline Domains generate_domains(const Sentence& sentence, const Grammar& grammar,
                                bool prefilter = true) {
  if (sentence.empty()) throw EmptySentence();
  check_categories(sentence, grammar);
  for (Layer layer : kLayers) {
    if (grammar.labels_of(layer).empty())
      throw Error("grammar declares no " + std::string(layer_name(layer)) + " labels");
  }
  auto strict = prefilter_constraints(grammar);
  Domains domains;
  for (int p = 1; p <= sentence.size(); ++p) {
    for (Layer layer : kLayers) {
      Variable v{p, layer};
      auto all = all_candidates(sentence, grammar, v);
      if (!prefilter) {
        domains[v] = std::move(all);
        continue;
      }
      std::vector<CandidateRelation> kept;
      for (const auto& c : all) {
        bool ok = true;
        for (const Constraint* k : strict) {
          if (applies_unary(*k, c) && eval_unary(*k, c, sentence) == Verdict::kViolated) {
            ok = false;
            break;
          }
        }
        if (ok) kept.push_back(c);
      }
      domains[v] = kept.empty() ? fallback_domain(grammar, v, all) : std::move(kept);
    }
  }
  return domains;
}

}  // namespace wcdg
