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

// Exhaustive reference semantics: exact scoring of complete assignments and
// depth-first best-k search with multiplicative bound pruning.

#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wcdg/domains.hpp"
#include "wcdg/errors.hpp"
#include "wcdg/grammar.hpp"
#include "wcdg/lexicon.hpp"

namespace wcdg {

struct Violation {
  std::string constraint;
  std::vector<CandidateRelation> relations;
  double pf = 0.0;
};

struct ScoredAssignment {
  std::vector<CandidateRelation> relations;  // ordered by (position, layer)
  double score = 1.0;
  std::vector<Violation> violations;
};

// Sorts by variable and checks there is exactly one relation per word and
// layer.
inline std::vector<CandidateRelation> canonical_assignment(
    std::span<const CandidateRelation> assignment, const Sentence& sentence) {
  std::vector<CandidateRelation> a(assignment.begin(), assignment.end());
  std::sort(a.begin(), a.end());
  if (a.size() != 2 * static_cast<std::size_t>(sentence.size()))
    throw IncompleteAssignment("expected " + std::to_string(2 * sentence.size()) +
                               " relations, got " + std::to_string(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    Variable want{static_cast<int>(i / 2) + 1, i % 2 == 0 ? Layer::kSyn : Layer::kSem};
    if (variable_of(a[i]) != want)
      throw IncompleteAssignment("no single relation for word " + std::to_string(want.position) +
                                 " on layer " + std::string(layer_name(want.layer)));
    if (a[i].dom < 0 || a[i].dom > sentence.size() || a[i].dom == a[i].dep ||
        a[i].reading < 0 || a[i].reading >= sentence.readings(a[i].dep))
      throw IncompleteAssignment("relation out of range: " + to_string(a[i]));
  }
  return a;
}

// Product of pf over every violated constraint instance. Feature projections
// whose trigger holds in the assignment are applied first, on a private copy
// of the sentence; template consequents are charged once per trigger
// instance.
inline ScoredAssignment score_analysis(std::span<const CandidateRelation> assignment,
                                       const Grammar& grammar, const Sentence& sentence) {
  ScoredAssignment out;
  out.relations = canonical_assignment(assignment, sentence);
  const auto& a = out.relations;

  Sentence s = sentence;
  for (const auto& p : grammar.pinduced) {
    if (!p.is_projection()) continue;
    for (const auto& x : a) {
      if (!trigger_holds(p, x, s)) continue;
      auto r = eval_projection(p, x, s);
      if (r.value) apply_projection(p, r.position, *r.value, s);
    }
  }

  auto charge = [&](const std::string& id, double pf, std::vector<CandidateRelation> rels) {
    out.violations.push_back({id, std::move(rels), pf});
  };
  for (const auto& x : a)
    for (const auto& c : grammar.constraints)
      if (applies_unary(c, x) && eval_unary(c, x, s) == Verdict::kViolated)
        charge(c.id, c.pf, {x});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      for (const auto& c : grammar.constraints)
        if (applies_binary(c, a[i], a[j]) && eval_binary(c, a[i], a[j], s) == Verdict::kViolated)
          charge(c.id, c.pf, {a[i], a[j]});
  for (const auto& p : grammar.pinduced) {
    if (p.is_projection()) continue;
    auto vars = p.free_vars();
    for (const auto& x : a) {
      if (!trigger_holds(p, x, s)) continue;
      if (vars.empty()) {
        if (eval_template(p, x, nullptr, nullptr, s) == Verdict::kViolated)
          charge(p.id, p.pf, {x});
      } else if (vars.size() == 1) {
        for (const auto& y : a)
          if (eval_template(p, x, &y, nullptr, s) == Verdict::kViolated)
            charge(p.id, p.pf, {x, y});
      } else {
        for (std::size_t i = 0; i < a.size(); ++i)
          for (std::size_t j = i + 1; j < a.size(); ++j)
            if (eval_template(p, x, &a[i], &a[j], s) == Verdict::kViolated)
              charge(p.id, p.pf, {x, a[i], a[j]});
      }
    }
  }
  for (const auto& v : out.violations) out.score *= v.pf;
  return out;
}

struct OracleOptions {
  std::size_t budget = 10'000'000;  // expanded search nodes
  bool prefilter = true;
};

namespace detail {

inline bool clearly_less(double a, double b) { return a < b - 1e-12 * std::max(a, b); }

}  // namespace detail

// Top-k assignments by score, best first. Equal scores are ordered by the
// assignment's relations in canonical order, which is also the order in
// which the search visits them.
inline std::vector<ScoredAssignment> best_k(const Sentence& sentence, const Grammar& grammar,
                                            int k, const OracleOptions& options = {}) {
  if (k < 1) throw Error("k must be at least 1");
  Domains domains = generate_domains(sentence, grammar, options.prefilter);

  // The bound uses only constraints that feature projection cannot touch;
  // every other factor is <= 1, so the partial product stays an upper bound.
  auto projected = projected_features(grammar);
  std::vector<const Constraint*> unary_safe, binary_safe;
  for (const auto& c : grammar.constraints) {
    if (reads_any(*c.expr, projected)) continue;
    (c.arity == 1 ? unary_safe : binary_safe).push_back(&c);
  }

  std::vector<std::vector<CandidateRelation>> doms;
  for (auto& [v, d] : domains) doms.push_back(d);
  std::vector<std::vector<double>> unary(doms.size());
  for (std::size_t v = 0; v < doms.size(); ++v) {
    for (const auto& x : doms[v]) {
      double u = 1.0;
      for (const Constraint* c : unary_safe)
        if (applies_unary(*c, x) && eval_unary(*c, x, sentence) == Verdict::kViolated) u *= c->pf;
      unary[v].push_back(u);
    }
  }
  auto pair_score = [&](const CandidateRelation& x, const CandidateRelation& y) {
    double b = 1.0;
    for (const Constraint* c : binary_safe)
      if (applies_binary(*c, x, y) && eval_binary(*c, x, y, sentence) == Verdict::kViolated)
        b *= c->pf;
    return b;
  };

  std::vector<ScoredAssignment> results;
  std::vector<CandidateRelation> chosen;
  std::vector<int> choice;
  std::size_t expanded = 0;
  const std::size_t n = doms.size();

  auto kth = [&]() { return results.size() < static_cast<std::size_t>(k) ? -1.0
                                                                          : results.back().score; };

  // Binary bounds between already chosen candidates, computed on demand.
  auto dfs = [&](auto&& self, std::size_t depth, double bound) -> void {
    if (depth == n) {
      ScoredAssignment sa = score_analysis(chosen, grammar, sentence);
      auto pos = std::find_if(results.begin(), results.end(), [&](const ScoredAssignment& r) {
        return detail::clearly_less(r.score, sa.score);
      });
      if (pos - results.begin() < k) {
        results.insert(pos, std::move(sa));
        if (results.size() > static_cast<std::size_t>(k)) results.pop_back();
      }
      return;
    }
    for (std::size_t i = 0; i < doms[depth].size(); ++i) {
      if (++expanded > options.budget)
        throw SearchBudgetExceeded("search expanded more than " + std::to_string(options.budget) +
                                   " nodes");
      const auto& x = doms[depth][i];
      double b = bound * unary[depth][i];
      for (std::size_t d = 0; d < depth && b > 0; ++d) b *= pair_score(chosen[d], x);
      double worst = kth();
      if (worst >= 0 && (detail::clearly_less(b, worst) || (b == 0 && worst == 0))) continue;
      chosen.push_back(x);
      self(self, depth + 1, b);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0, 1.0);
  return results;
}

}  // namespace wcdg
