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

// The constraint network: one variable per word and layer, a domain of
// candidate relations for each, and confidence scores in [0, 1] for every
// candidate (unary) and every pair of candidates from distinct variables
// (binary). A score is the product of the penalty factors of all
// constraints the candidate or pair violates.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "wcdg/domains.hpp"
#include "wcdg/errors.hpp"
#include "wcdg/format.hpp"
#include "wcdg/grammar.hpp"
#include "wcdg/lexicon.hpp"

namespace wcdg {

class ConstraintNetwork {
 public:
  struct Activation {
    int pinduced = 0;
    CandidateRelation trigger;
  };

  ConstraintNetwork(Sentence sentence, const Grammar& grammar, const Domains& domains)
      : sentence_(std::move(sentence)), grammar_(&grammar) {
    for (const auto& [v, cands] : domains) {
      int index = static_cast<int>(variables_.size());
      variables_.push_back(v);
      domains_.emplace_back();
      for (const auto& c : cands) {
        domains_.back().push_back(static_cast<int>(candidates_.size()));
        candidates_.push_back(c);
        var_of_.push_back(index);
      }
    }
    int n = num_candidates();
    live_.assign(n, true);
    unary_.resize(n);
    binary_.assign(static_cast<std::size_t>(n) * (n > 0 ? n - 1 : 0) / 2, 1.0);
    for (int a = 0; a < n; ++a) {
      unary_[a] = score_unary(a);
      for (int b = a + 1; b < n; ++b)
        if (var_of_[a] != var_of_[b]) binary_[pair_index(a, b)] = score_binary(a, b);
    }
    initial_support_.resize(n);
    for (int a = 0; a < n; ++a) initial_support_[a] = support(a);
  }

  const Grammar& grammar() const { return *grammar_; }
  // Current node features, including projected values.
  const Sentence& sentence() const { return sentence_; }

  int num_variables() const { return static_cast<int>(variables_.size()); }
  const Variable& variable(int v) const { return variables_.at(v); }
  const std::vector<int>& domain(int v) const { return domains_.at(v); }

  // Candidate ids stay valid after removal; removed ones are not live.
  int num_candidates() const { return static_cast<int>(candidates_.size()); }
  const CandidateRelation& candidate(int id) const { return candidates_.at(id); }
  int variable_of(int id) const { return var_of_.at(id); }
  bool live(int id) const { return live_.at(id); }

  std::optional<int> find(const CandidateRelation& r) const {
    auto it = std::find(candidates_.begin(), candidates_.end(), r);
    if (it == candidates_.end()) return std::nullopt;
    return static_cast<int>(it - candidates_.begin());
  }

  double unary(int id) const { return unary_.at(id); }

  // 1.0 for two candidates of the same variable, which never co-occur.
  double binary(int a, int b) const {
    if (var_of_.at(a) == var_of_.at(b)) return 1.0;
    return binary_[pair_index(a, b)];
  }

  // Optimistic bound on the best complete assignment containing `id`:
  // unary(x) times, for every other variable, the best binary(x,y)*unary(y)
  // over its live candidates. Never increases as domains shrink.
  double support(int id) const {
    double s = unary_.at(id);
    for (int v = 0; v < num_variables() && s > 0; ++v) {
      if (v == var_of_[id]) continue;
      double best = 0;
      for (int y : domains_[v]) best = std::max(best, binary(id, y) * unary_[y]);
      s *= best;
    }
    return s;
  }

  // Support as computed right after construction.
  double initial_support(int id) const { return initial_support_.at(id); }

  void remove(int id, double cost) {
    auto& dom = domains_.at(var_of_.at(id));
    if (!live_[id]) throw Error("candidate " + to_string(candidates_[id]) + " already removed");
    if (dom.size() <= 1)
      throw LastCandidate("refusing to empty the domain of " + to_string(candidates_[id]));
    dom.erase(std::find(dom.begin(), dom.end(), id));
    live_[id] = false;
    const auto& c = candidates_[id];
    trace_.push_back("PRUNE " + std::string(layer_name(c.layer)) + ' ' + std::to_string(c.dep) +
                     ' ' + c.label + ' ' + std::to_string(c.dom) + " cost=" + format_number(cost));
  }

  const std::vector<std::string>& trace() const { return trace_; }

  const std::vector<Activation>& activations() const { return activations_; }

  bool activated(int pinduced, const CandidateRelation& trigger) const {
    for (const auto& a : activations_)
      if (a.pinduced == pinduced && a.trigger == trigger) return true;
    return false;
  }

  // Folds a template consequent, instantiated for `trigger`, into the live
  // score entries.
  void activate_template(int pinduced, const CandidateRelation& trigger) {
    record(pinduced, trigger);
    const auto& p = grammar_->pinduced.at(pinduced);
    double pf = p.pf;
    auto vars = p.free_vars();
    const auto& s = sentence_;
    for (int a = 0; a < num_candidates(); ++a) {
      if (!live_[a] || excluded(a, trigger)) continue;
      if (vars.size() == 0 && candidates_[a] == trigger) {
        if (eval_template(p, trigger, nullptr, nullptr, s) == Verdict::kViolated) unary_[a] *= pf;
      } else if (vars.size() == 1) {
        if (eval_template(p, trigger, &candidates_[a], nullptr, s) == Verdict::kViolated)
          unary_[a] *= pf;
      } else if (vars.size() == 2) {
        for (int b = a + 1; b < num_candidates(); ++b) {
          if (!live_[b] || var_of_[a] == var_of_[b] || excluded(b, trigger)) continue;
          if (eval_template(p, trigger, &candidates_[a], &candidates_[b], s) ==
              Verdict::kViolated)
            binary_[pair_index(a, b)] *= pf;
        }
      }
    }
  }

  // Applies a feature projection for `trigger` and rescores the live entries
  // that mention the projected node. Returns false when the projected value
  // is empty; the feature is then left unchanged.
  bool project(int pinduced, const CandidateRelation& trigger) {
    record(pinduced, trigger);
    const auto& p = grammar_->pinduced.at(pinduced);
    auto result = eval_projection(p, trigger, sentence_);
    if (!result.value) {
      trace_.push_back("EMPTY-INTERSECTION " + p.id + ' ' + std::to_string(result.position));
      return false;
    }
    apply_projection(p, result.position, *result.value, sentence_);
    std::string set = "{";
    for (const auto& sym : *result.value) set += (set.size() > 1 ? "," : "") + sym;
    trace_.push_back("PROJECT " + p.id + ' ' + std::to_string(result.position) + ' ' + set + '}');
    int node = result.position;
    for (int a = 0; a < num_candidates(); ++a) {
      if (!live_[a] || (candidates_[a].dep != node && candidates_[a].dom != node)) continue;
      unary_[a] = score_unary(a);
      for (int b = 0; b < num_candidates(); ++b) {
        if (b == a || !live_[b] || var_of_[a] == var_of_[b]) continue;
        binary_[pair_index(a, b)] = score_binary(a, b);
      }
    }
    return true;
  }

 private:
  std::size_t pair_index(int a, int b) const {
    if (a > b) std::swap(a, b);
    std::size_t n = candidates_.size();
    return static_cast<std::size_t>(a) * (2 * n - a - 1) / 2 + (b - a - 1);
  }

  // A trigger's own variable only ever holds the trigger itself.
  bool excluded(int id, const CandidateRelation& trigger) const {
    return wcdg::variable_of(candidates_[id]) == wcdg::variable_of(trigger) &&
           candidates_[id] != trigger;
  }

  void record(int pinduced, const CandidateRelation& trigger) {
    activations_.push_back({pinduced, trigger});
    const auto& p = grammar_->pinduced.at(pinduced);
    trace_.push_back("ACTIVATE " + p.id + ' ' + std::string(layer_name(trigger.layer)) + ' ' +
                     std::to_string(trigger.dep) + ' ' + trigger.label + ' ' +
                     std::to_string(trigger.dom));
  }

  double score_unary(int id) const {
    const auto& x = candidates_[id];
    double s = 1.0;
    for (const auto& c : grammar_->constraints)
      if (applies_unary(c, x) && eval_unary(c, x, sentence_) == Verdict::kViolated) s *= c.pf;
    for (const auto& act : activations_) {
      const auto& p = grammar_->pinduced[act.pinduced];
      if (p.is_projection() || excluded(id, act.trigger)) continue;
      auto vars = p.free_vars();
      Verdict v = Verdict::kInapplicable;
      if (vars.empty() && x == act.trigger)
        v = eval_template(p, act.trigger, nullptr, nullptr, sentence_);
      else if (vars.size() == 1)
        v = eval_template(p, act.trigger, &x, nullptr, sentence_);
      if (v == Verdict::kViolated) s *= p.pf;
    }
    return s;
  }

  double score_binary(int a, int b) const {
    const auto& x = candidates_[a];
    const auto& y = candidates_[b];
    double s = 1.0;
    for (const auto& c : grammar_->constraints)
      if (applies_binary(c, x, y) && eval_binary(c, x, y, sentence_) == Verdict::kViolated)
        s *= c.pf;
    for (const auto& act : activations_) {
      const auto& p = grammar_->pinduced[act.pinduced];
      if (p.is_projection() || p.free_vars().size() != 2) continue;
      if (excluded(a, act.trigger) || excluded(b, act.trigger)) continue;
      if (eval_template(p, act.trigger, &x, &y, sentence_) == Verdict::kViolated) s *= p.pf;
    }
    return s;
  }

  Sentence sentence_;
  const Grammar* grammar_;
  std::vector<Variable> variables_;
  std::vector<std::vector<int>> domains_;
  std::vector<CandidateRelation> candidates_;
  std::vector<int> var_of_;
  std::vector<bool> live_;
  std::vector<double> unary_;
  std::vector<double> binary_;  // one entry per unordered pair
  std::vector<double> initial_support_;
  std::vector<Activation> activations_;
  std::vector<std::string> trace_;
};

inline ConstraintNetwork build_network(const Sentence& sentence, const Grammar& grammar,
                                       bool prefilter = true) {
  return ConstraintNetwork(sentence, grammar, generate_domains(sentence, grammar, prefilter));
}

}  // namespace wcdg
