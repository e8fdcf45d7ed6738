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

// Serialization of analyses: one JSON object per line, or a tab-separated
// text block carrying the same fields.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wcdg/disambiguator.hpp"
#include "wcdg/format.hpp"
#include "wcdg/lexicon.hpp"

namespace wcdg {

struct RecordExtras {
  std::optional<int> rank;                        // oracle mode
  const std::vector<std::string>* trace = nullptr;
  const DiagnosisReport* diagnosis = nullptr;
};

namespace detail {

inline const CandidateRelation& relation_at(const Analysis& a, int position, Layer layer) {
  return a.relations.at(2 * (position - 1) + static_cast<int>(layer));
}

inline nlohmann::ordered_json violations_json(const std::vector<Violation>& vs) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& v : vs) {
    nlohmann::ordered_json j;
    j["constraint"] = v.constraint;
    j["pf"] = v.pf;
    auto rels = nlohmann::ordered_json::array();
    for (const auto& r : v.relations) rels.push_back(to_string(r));
    j["relations"] = rels;
    out.push_back(j);
  }
  return out;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const Analysis& a, const Sentence& s,
                                      const RecordExtras& extras = {}) {
  nlohmann::ordered_json j;
  if (extras.rank) j["rank"] = *extras.rank;
  j["sentence"] = s.text();
  auto words = nlohmann::ordered_json::array();
  for (int p = 1; p <= s.size(); ++p) {
    const auto& syn = detail::relation_at(a, p, Layer::kSyn);
    const auto& sem = detail::relation_at(a, p, Layer::kSem);
    nlohmann::ordered_json w;
    w["position"] = p;
    w["form"] = s.token(p).form;
    w["syn-label"] = syn.label;
    w["syn-head"] = syn.dom;
    w["sem-label"] = sem.label;
    w["sem-head"] = sem.dom;
    words.push_back(w);
  }
  j["words"] = words;
  j["score"] = a.score;
  j["violations"] = detail::violations_json(a.violations);
  if (extras.trace) j["trace"] = *extras.trace;
  if (extras.diagnosis) {
    nlohmann::ordered_json d;
    d["violations"] = detail::violations_json(extras.diagnosis->violations);
    auto ex = nlohmann::ordered_json::array();
    for (const auto& e : extras.diagnosis->expectations) {
      nlohmann::ordered_json x;
      x["chosen"] = to_string(e.chosen);
      x["chosen-support"] = e.chosen_support;
      x["expected"] = to_string(e.expected);
      x["expected-support"] = e.expected_support;
      ex.push_back(x);
    }
    d["expectations"] = ex;
    j["diagnosis"] = d;
  }
  return j;
}

inline std::string to_json_line(const Analysis& a, const Sentence& s,
                                const RecordExtras& extras = {}) {
  return to_json(a, s, extras).dump() + '\n';
}

// Block form:
//   # sentence: Pferde fressen Gras
//   1<TAB>Pferde<TAB>SUBJ<TAB>2<TAB>AG<TAB>2
//   score<TAB>1
//   violation<TAB>sy2<TAB>0.1<TAB>syn 1 SUBJ 2
// followed by a blank line.
inline std::string to_text(const Analysis& a, const Sentence& s,
                           const RecordExtras& extras = {}) {
  std::string out;
  if (extras.rank) out += "# rank: " + std::to_string(*extras.rank) + '\n';
  out += "# sentence: " + s.text() + '\n';
  for (int p = 1; p <= s.size(); ++p) {
    const auto& syn = detail::relation_at(a, p, Layer::kSyn);
    const auto& sem = detail::relation_at(a, p, Layer::kSem);
    out += std::to_string(p) + '\t' + s.token(p).form + '\t' + syn.label + '\t' +
           std::to_string(syn.dom) + '\t' + sem.label + '\t' + std::to_string(sem.dom) + '\n';
  }
  out += "score\t" + format_number(a.score) + '\n';
  auto violations = [&](const std::vector<Violation>& vs, const std::string& tag) {
    for (const auto& v : vs) {
      out += tag + '\t' + v.constraint + '\t' + format_number(v.pf);
      for (const auto& r : v.relations) out += '\t' + to_string(r);
      out += '\n';
    }
  };
  violations(a.violations, "violation");
  if (extras.trace)
    for (const auto& line : *extras.trace) out += "trace\t" + line + '\n';
  if (extras.diagnosis) {
    violations(extras.diagnosis->violations, "diagnosis-violation");
    for (const auto& e : extras.diagnosis->expectations)
      out += "expectation\t" + to_string(e.chosen) + '\t' + format_number(e.chosen_support) +
             '\t' + to_string(e.expected) + '\t' + format_number(e.expected_support) + '\n';
  }
  out += '\n';
  return out;
}

}  // namespace wcdg
